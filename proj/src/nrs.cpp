#include "internames/nrs.hpp"
#include "internames/error.hpp"
#include "internames/hash.hpp"

#include <json.hpp>

#include <algorithm>

namespace internames {

using nlohmann::json;

std::string_view
to_string(Protocol p)
{
  return p == Protocol::HTTPISH ? "HTTPISH" : "CCNISH_OVER_UDPISH";
}

std::string_view
to_string(Technology t)
{
  return t == Technology::IPISH ? "IPISH" : "CCNISH";
}

std::string_view
to_string(ServiceKind s)
{
  switch (s) {
    case ServiceKind::unicast: return "unicast";
    case ServiceKind::multicast: return "multicast";
    case ServiceKind::anycast: return "anycast";
    case ServiceKind::broadcast: return "broadcast";
  }
  return "unicast";
}

Protocol
parse_protocol(std::string_view s)
{
  if (s == "HTTPISH")
    return Protocol::HTTPISH;
  if (s == "CCNISH_OVER_UDPISH")
    return Protocol::CCNISH_OVER_UDPISH;
  throw Error(Errc::ParseError, "unknown protocol '" + std::string(s) + "'");
}

Technology
parse_technology(std::string_view s)
{
  if (s == "IPISH")
    return Technology::IPISH;
  if (s == "CCNISH")
    return Technology::CCNISH;
  throw Error(Errc::ParseError, "unknown technology '" + std::string(s) + "'");
}

ServiceKind
parse_service_kind(std::string_view s)
{
  for (auto k : {ServiceKind::unicast, ServiceKind::multicast, ServiceKind::anycast, ServiceKind::broadcast}) {
    if (to_string(k) == s)
      return k;
  }
  throw Error(Errc::ParseError, "unknown service kind '" + std::string(s) + "'");
}

namespace {

bool
has_space(std::string_view s)
{
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

std::string
join_set(const std::set<std::string>& s)
{
  std::string out;
  for (const auto& v : s) {
    if (!out.empty())
      out += '+';
    out += v;
  }
  return out;
}

} // namespace

std::string
ServiceDescriptor::to_text() const
{
  std::string out;
  out += "protocol=";
  out += to_string(protocol);
  out += " fcn=" + (fcn.empty() ? std::string("-") : fcn);
  out += " next_hop=" + next_hop_address.str();
  out += " tech=";
  out += to_string(next_hop_tech);
  out += " priority=" + std::to_string(attributes.priority);
  out += " ttl=" + (attributes.ttl_ticks ? std::to_string(*attributes.ttl_ticks) : std::string("-"));
  out += " scope=" + attributes.scope.value_or("-");
  return out;
}

void
ServiceDescriptor::validate() const
{
  if (protocol == Protocol::CCNISH_OVER_UDPISH && fcn.empty())
    throw Error(Errc::ValidationError, "CCNISH_OVER_UDPISH descriptor needs an FCN");
  if (next_hop_address.empty())
    throw Error(Errc::ValidationError, "descriptor without next-hop address");
  if (has_space(fcn) || has_space(next_hop_address.str()) || fcn == "-")
    throw Error(Errc::ValidationError, "FCN and next-hop must be single tokens");
  if (attributes.priority < 0)
    throw Error(Errc::ValidationError, "negative priority");
  if (attributes.ttl_ticks && *attributes.ttl_ticks < 0)
    throw Error(Errc::ValidationError, "negative ttl");
}

std::string
to_text(const std::vector<ServiceDescriptor>& sds)
{
  std::string out;
  for (const auto& sd : sds) {
    if (!out.empty())
      out += " | ";
    out += sd.to_text();
  }
  return out;
}

std::string
ResolutionContext::key() const
{
  std::string out = "loc=" + (location_tag.empty() ? std::string("-") : location_tag);
  out += " ctx=" + (context_tags.empty() ? std::string("-") : join_set(context_tags));
  out += " service=";
  out += to_string(requested_service);
  return out;
}

std::uint64_t
ResolutionContext::hash() const
{
  return fnv1a(key());
}

bool
ContextPredicate::matches(const ResolutionContext& ctx) const
{
  if (time_window && (ctx.now_tick < time_window->start || ctx.now_tick >= time_window->end))
    return false;
  if (!location_tags.empty() && location_tags.count(ctx.location_tag) == 0)
    return false;
  for (const auto& tag : context_tags) {
    if (ctx.context_tags.count(tag) == 0)
      return false;
  }
  if (service && *service != ctx.requested_service)
    return false;
  return true;
}

std::string
ContextPredicate::to_text() const
{
  std::string out;
  auto add = [&] (const std::string& kv) {
    if (!out.empty())
      out += ' ';
    out += kv;
  };
  if (time_window)
    add("window=" + std::to_string(time_window->start) + ":" + std::to_string(time_window->end));
  if (!location_tags.empty())
    add("loc=" + join_set(location_tags));
  if (!context_tags.empty())
    add("ctx=" + join_set(context_tags));
  if (service)
    add("service=" + std::string(to_string(*service)));
  return out.empty() ? "-" : out;
}

void
Nrs::register_record(const NrsRecord& r, Role caller)
{
  if (caller == Role::end_user)
    throw Error(Errc::Unauthorized, "end-user nodes may not register NRS records");
  if (r.prefix.empty())
    throw Error(Errc::ValidationError, "record without prefix");
  r.sd.validate();

  auto key = r.prefix.to_uri();
  auto& bucket = m_by_prefix[key];
  for (auto idx : bucket) {
    const auto& other = m_records[idx];
    if (other.sd.protocol == r.sd.protocol && other.sd.next_hop_address == r.sd.next_hop_address &&
        other.predicate == r.predicate)
      throw Error(Errc::DuplicateRecord, key + " -> " + r.sd.next_hop_address.str());
  }
  bucket.push_back(m_records.size());
  m_records.push_back(r);
}

void
Nrs::withdraw(const Name& prefix, const Locator& next_hop, Role caller)
{
  if (caller == Role::end_user)
    throw Error(Errc::Unauthorized, "end-user nodes may not withdraw NRS records");
  auto before = m_records.size();
  std::erase_if(m_records, [&] (const NrsRecord& r) {
    return r.prefix == prefix && r.sd.next_hop_address == next_hop;
  });
  if (m_records.size() == before)
    throw Error(Errc::NotFound, "no record " + prefix.to_uri() + " -> " + next_hop.str());

  m_by_prefix.clear();
  for (std::size_t i = 0; i < m_records.size(); ++i)
    m_by_prefix[m_records[i].prefix.to_uri()].push_back(i);
}

std::vector<ServiceDescriptor>
Nrs::resolve(const Name& n, const ResolutionContext& ctx) const
{
  ++m_lookups;
  std::vector<ServiceDescriptor> out;
  if (!n.empty()) {
    const auto& segs = n.segments();
    for (std::size_t len = segs.size(); len >= 1 && out.empty(); --len) {
      Name prefix(n.realm(), {segs.begin(), segs.begin() + static_cast<std::ptrdiff_t>(len)});
      auto it = m_by_prefix.find(prefix.to_uri());
      if (it == m_by_prefix.end())
        continue;
      for (auto idx : it->second) {
        if (m_records[idx].predicate.matches(ctx))
          out.push_back(m_records[idx].sd);
      }
    }
  }
  if (out.empty())
    throw Error(Errc::NotResolvable, name_or_dash(n));

  std::vector<std::pair<std::string, ServiceDescriptor>> keyed;
  keyed.reserve(out.size());
  for (auto& sd : out)
    keyed.emplace_back(sd.to_text(), std::move(sd));
  std::sort(keyed.begin(), keyed.end(), [] (const auto& a, const auto& b) {
    if (a.second.attributes.priority != b.second.attributes.priority)
      return a.second.attributes.priority < b.second.attributes.priority;
    return a.first < b.first;
  });
  out.clear();
  for (auto& [text, sd] : keyed)
    out.push_back(std::move(sd));

  if (ctx.requested_service == ServiceKind::anycast)
    out.resize(1);
  return out;
}

void
nrs_register(Nrs& nrs, const NrsRecord& r, Role caller)
{
  nrs.register_record(r, caller);
}

void
nrs_withdraw(Nrs& nrs, const Name& prefix, const Locator& next_hop, Role caller)
{
  nrs.withdraw(prefix, next_hop, caller);
}

std::vector<ServiceDescriptor>
nrs_resolve(const Nrs& nrs, const Name& n, const ResolutionContext& ctx)
{
  return nrs.resolve(n, ctx);
}

Tick
cache_ttl(const std::vector<ServiceDescriptor>& sds)
{
  std::optional<Tick> ttl;
  for (const auto& sd : sds) {
    if (sd.attributes.ttl_ticks)
      ttl = ttl ? std::min(*ttl, *sd.attributes.ttl_ticks) : *sd.attributes.ttl_ticks;
  }
  return ttl.value_or(kDefaultTtlTicks);
}

std::optional<std::vector<ServiceDescriptor>>
CacheStore::lookup(const Name& n, const ResolutionContext& ctx) const
{
  auto it = m_entries.find({n.to_uri(), ctx.key()});
  if (it == m_entries.end() || ctx.now_tick >= it->second.inserted_tick + it->second.ttl_ticks)
    return std::nullopt;
  return it->second.sds;
}

void
CacheStore::insert(const Name& n, const ResolutionContext& ctx, std::vector<ServiceDescriptor> sds)
{
  auto ttl = cache_ttl(sds);
  m_entries[{n.to_uri(), ctx.key()}] = Entry{std::move(sds), ctx.now_tick, ttl};
}

std::vector<ServiceDescriptor>
nrs_resolve_cached(const Nrs& nrs, const Name& n, const ResolutionContext& ctx, CacheStore& cache, bool* hit)
{
  if (auto cached = cache.lookup(n, ctx)) {
    if (hit)
      *hit = true;
    return *cached;
  }
  if (hit)
    *hit = false;
  auto sds = nrs.resolve(n, ctx);
  cache.insert(n, ctx, sds);
  return sds;
}

namespace {

json
to_json(const ServiceDescriptor& sd)
{
  json j{{"protocol", to_string(sd.protocol)},
         {"fcn", sd.fcn},
         {"tech", to_string(sd.next_hop_tech)},
         {"next_hop", sd.next_hop_address.str()},
         {"priority", sd.attributes.priority}};
  if (sd.attributes.ttl_ticks)
    j["ttl"] = *sd.attributes.ttl_ticks;
  if (sd.attributes.scope)
    j["scope"] = *sd.attributes.scope;
  return j;
}

ServiceDescriptor
sd_from_json(const json& j)
{
  ServiceDescriptor sd;
  sd.protocol = parse_protocol(j.at("protocol").get<std::string>());
  sd.fcn = j.at("fcn").get<std::string>();
  sd.next_hop_tech = parse_technology(j.at("tech").get<std::string>());
  sd.next_hop_address = Locator(j.at("next_hop").get<std::string>());
  sd.attributes.priority = j.at("priority").get<std::int64_t>();
  if (j.contains("ttl"))
    sd.attributes.ttl_ticks = j.at("ttl").get<Tick>();
  if (j.contains("scope"))
    sd.attributes.scope = j.at("scope").get<std::string>();
  return sd;
}

} // namespace

std::string
serialize(const NrsQueryBody& q)
{
  json j{{"name", q.name.to_uri()},
         {"now", q.ctx.now_tick},
         {"loc", q.ctx.location_tag},
         {"ctx", q.ctx.context_tags},
         {"service", to_string(q.ctx.requested_service)},
         {"reply_to", q.reply_to.str()}};
  return j.dump();
}

NrsQueryBody
parse_nrs_query(std::string_view body)
{
  try {
    auto j = json::parse(body);
    NrsQueryBody q;
    q.name = Name::parse(j.at("name").get<std::string>());
    q.ctx.now_tick = j.at("now").get<Tick>();
    q.ctx.location_tag = j.at("loc").get<std::string>();
    q.ctx.context_tags = j.at("ctx").get<std::set<std::string>>();
    q.ctx.requested_service = parse_service_kind(j.at("service").get<std::string>());
    q.reply_to = Locator(j.at("reply_to").get<std::string>());
    return q;
  }
  catch (const json::exception& e) {
    throw Error(Errc::MalformedMessage, std::string("NRS query: ") + e.what());
  }
}

std::string
serialize(const std::vector<ServiceDescriptor>& sds)
{
  json arr = json::array();
  for (const auto& sd : sds)
    arr.push_back(to_json(sd));
  return arr.dump();
}

std::vector<ServiceDescriptor>
parse_nrs_result(std::string_view body)
{
  try {
    std::vector<ServiceDescriptor> out;
    for (const auto& item : json::parse(body))
      out.push_back(sd_from_json(item));
    return out;
  }
  catch (const json::exception& e) {
    throw Error(Errc::MalformedMessage, std::string("NRS result: ") + e.what());
  }
}

} // namespace internames
