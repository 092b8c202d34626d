#include "internames/scenario.hpp"
#include "internames/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace internames {

std::string_view
to_string(ActionKind k)
{
  switch (k) {
    case ActionKind::pull: return "pull";
    case ActionKind::push: return "push";
    case ActionKind::publish: return "publish";
    case ActionKind::subscribe: return "subscribe";
    case ActionKind::search: return "search";
    case ActionKind::bind: return "bind";
    case ActionKind::unbind: return "unbind";
    case ActionKind::partition: return "partition";
    case ActionKind::heal: return "heal";
    case ActionKind::nrs_register: return "nrs_register";
    case ActionKind::nrs_withdraw: return "nrs_withdraw";
  }
  return "pull";
}

std::string_view
to_string(StepKind k)
{
  switch (k) {
    case StepKind::replace_authoritative_resolver: return "replace_authoritative_resolver";
    case StepKind::deploy_nested_realm: return "deploy_nested_realm";
    case StepKind::update_nrs: return "update_nrs";
  }
  return "update_nrs";
}

namespace {

// ---------------------------------------------------------------------------
// records

using Fields = std::vector<std::string>;

std::string
trim(std::string_view s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void
parse_error(int line, const std::string& what)
{
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

Fields
split_csv(std::string_view line, int lineno)
{
  Fields out;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        field += line[i++];
      }
      if (!closed)
        parse_error(lineno, "unterminated quote");
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        ++i;
      if (i < line.size() && line[i] != ',')
        parse_error(lineno, "text after closing quote");
    }
    else {
      auto comma = line.find(',', i);
      field = trim(line.substr(i, comma == std::string_view::npos ? std::string_view::npos : comma - i));
      i = comma == std::string_view::npos ? line.size() : comma;
    }
    out.push_back(std::move(field));
    if (i >= line.size())
      break;
    ++i; // comma
  }
  return out;
}

std::string
quote(const std::string& f)
{
  bool plain = !f.empty() && f.find_first_of(",\"") == std::string::npos && f.front() != ' ' &&
               f.back() != ' ' && f.front() != '#';
  if (plain)
    return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

std::string
join_csv(const Fields& f)
{
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0)
      out += ", ";
    out += quote(f[i]);
  }
  return out;
}

template <class T>
T
to_int(const std::string& s, int line, std::string_view what)
{
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    parse_error(line, "bad " + std::string(what) + " '" + s + "'");
  return v;
}

void
need(const Fields& f, std::size_t min, std::size_t max, int line, std::string_view what)
{
  if (f.size() < min || f.size() > max)
    parse_error(line, std::string(what) + " expects " + std::to_string(min) +
                        (min == max ? "" : ".." + std::to_string(max)) + " fields, got " + std::to_string(f.size()));
}

// Library parse functions throw their own codes; rewrap them with the line.
template <class F>
auto
at_line(int line, F&& f) -> decltype(f())
{
  try {
    return f();
  }
  catch (const Error& e) {
    if (e.code() == Errc::ParseError)
      parse_error(line, e.what());
    throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
  }
}

Name
name_field(const std::string& s, int line)
{
  try {
    return Name::parse(s);
  }
  catch (const Error& e) {
    parse_error(line, e.what());
  }
}

std::optional<std::string>
opt_field(const Fields& f, std::size_t i)
{
  if (i >= f.size() || f[i].empty() || f[i] == "-")
    return std::nullopt;
  return f[i];
}

std::set<std::string>
split_set(const std::string& s)
{
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto semi = s.find(';', pos);
    auto tok = trim(std::string_view(s).substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
    if (!tok.empty())
      out.insert(tok);
    if (semi == std::string::npos)
      break;
    pos = semi + 1;
  }
  return out;
}

std::string
join_set(const std::set<std::string>& s)
{
  std::string out;
  for (const auto& t : s) {
    if (!out.empty())
      out += ';';
    out += t;
  }
  return out;
}

std::pair<std::string, std::string>
key_value(const std::string& f, int line)
{
  auto eq = f.find('=');
  if (eq == std::string::npos || eq == 0)
    parse_error(line, "expected key=value, got '" + f + "'");
  return {trim(std::string_view(f).substr(0, eq)), f.substr(eq + 1)};
}

// prefix, protocol, fcn, tech, next_hop, key=value...
NrsRecord
parse_nrs_fields(const Fields& f, std::size_t first, int line)
{
  if (f.size() < first + 5)
    parse_error(line, "NRS record expects prefix, protocol, fcn, technology, next_hop");
  NrsRecord r;
  r.prefix = name_field(f[first], line);
  r.sd.protocol = at_line(line, [&] { return parse_protocol(f[first + 1]); });
  r.sd.fcn = opt_field(f, first + 2).value_or("");
  r.sd.next_hop_tech = at_line(line, [&] { return parse_technology(f[first + 3]); });
  r.sd.next_hop_address = Locator(f[first + 4]);
  for (std::size_t i = first + 5; i < f.size(); ++i) {
    auto [k, v] = key_value(f[i], line);
    if (k == "priority")
      r.sd.attributes.priority = to_int<std::int64_t>(v, line, "priority");
    else if (k == "ttl")
      r.sd.attributes.ttl_ticks = to_int<Tick>(v, line, "ttl");
    else if (k == "scope")
      r.sd.attributes.scope = v;
    else if (k == "ctx")
      r.predicate.context_tags = split_set(v);
    else if (k == "loc")
      r.predicate.location_tags = split_set(v);
    else if (k == "service")
      r.predicate.service = at_line(line, [&] { return parse_service_kind(v); });
    else if (k == "window") {
      auto colon = v.find(':');
      if (colon == std::string::npos)
        parse_error(line, "window expects start:end");
      r.predicate.time_window = TimeWindow{to_int<Tick>(v.substr(0, colon), line, "window start"),
                                           to_int<Tick>(v.substr(colon + 1), line, "window end")};
    }
    else
      parse_error(line, "unknown NRS attribute '" + k + "'");
  }
  return r;
}

Fields
nrs_fields(const NrsRecord& r)
{
  Fields f{r.prefix.to_uri(), std::string(to_string(r.sd.protocol)), r.sd.fcn.empty() ? "-" : r.sd.fcn,
           std::string(to_string(r.sd.next_hop_tech)), r.sd.next_hop_address.str()};
  const auto& a = r.sd.attributes;
  f.push_back("priority=" + std::to_string(a.priority));
  if (a.ttl_ticks)
    f.push_back("ttl=" + std::to_string(*a.ttl_ticks));
  if (a.scope)
    f.push_back("scope=" + *a.scope);
  const auto& p = r.predicate;
  if (!p.context_tags.empty())
    f.push_back("ctx=" + join_set(p.context_tags));
  if (!p.location_tags.empty())
    f.push_back("loc=" + join_set(p.location_tags));
  if (p.service)
    f.push_back("service=" + std::string(to_string(*p.service)));
  if (p.time_window)
    f.push_back("window=" + std::to_string(p.time_window->start) + ":" + std::to_string(p.time_window->end));
  return f;
}

std::vector<std::string>
split_keywords_field(const std::string& s)
{
  // keep the written order, not sorted order
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto semi = s.find(';', pos);
    auto tok = trim(std::string_view(s).substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
    if (!tok.empty())
      out.push_back(tok);
    if (semi == std::string::npos)
      break;
    pos = semi + 1;
  }
  return out;
}

std::string
join_keywords_field(const std::vector<std::string>& kws)
{
  std::string out;
  for (const auto& k : kws) {
    if (!out.empty())
      out += ';';
    out += k;
  }
  return out;
}

Action
parse_action(const Fields& f, int line)
{
  if (f.size() < 2)
    parse_error(line, "timeline entry expects tick, action, ...");
  Action a;
  a.tick = to_int<Tick>(f[0], line, "tick");
  const auto& verb = f[1];
  auto args = [&] (std::size_t min, std::size_t max) { need(f, min + 2, max + 2, line, verb); };

  if (verb == "pull") {
    args(2, 2);
    a.kind = ActionKind::pull;
    a.caller = name_field(f[2], line);
    a.target = name_field(f[3], line);
  }
  else if (verb == "push") {
    args(3, 3);
    a.kind = ActionKind::push;
    a.caller = name_field(f[2], line);
    a.target = name_field(f[3], line);
    a.body = f[4];
  }
  else if (verb == "publish") {
    args(3, 3);
    a.kind = ActionKind::publish;
    a.caller = name_field(f[2], line);
    a.topic = f[3];
    a.body = f[4];
  }
  else if (verb == "subscribe") {
    args(2, 2);
    a.kind = ActionKind::subscribe;
    a.caller = name_field(f[2], line);
    a.topic = f[3];
  }
  else if (verb == "search") {
    args(2, 3);
    a.kind = ActionKind::search;
    a.caller = name_field(f[2], line);
    a.keywords = split_keywords_field(f[3]);
    if (f.size() == 5) {
      if (f[4] != "pull")
        parse_error(line, "search takes an optional 'pull' flag, got '" + f[4] + "'");
      a.then_pull = true;
    }
  }
  else if (verb == "bind" || verb == "unbind") {
    args(2, 2);
    a.kind = verb == "bind" ? ActionKind::bind : ActionKind::unbind;
    a.target = name_field(f[2], line);
    a.nap = NapId(f[3]);
  }
  else if (verb == "partition" || verb == "heal") {
    args(1, 1);
    a.kind = verb == "partition" ? ActionKind::partition : ActionKind::heal;
    a.realm = RealmId(f[2]);
  }
  else if (verb == "nrs_register") {
    a.kind = ActionKind::nrs_register;
    a.record = parse_nrs_fields(f, 2, line);
  }
  else if (verb == "nrs_withdraw") {
    args(2, 2);
    a.kind = ActionKind::nrs_withdraw;
    a.target = name_field(f[2], line);
    a.address = Locator(f[3]);
  }
  else {
    parse_error(line, "unknown action '" + verb + "'");
  }
  return a;
}

Fields
action_fields(const Action& a)
{
  Fields f{std::to_string(a.tick), std::string(to_string(a.kind))};
  switch (a.kind) {
    case ActionKind::pull:
      f.insert(f.end(), {a.caller.to_uri(), a.target.to_uri()});
      break;
    case ActionKind::push:
      f.insert(f.end(), {a.caller.to_uri(), a.target.to_uri(), a.body});
      break;
    case ActionKind::publish:
      f.insert(f.end(), {a.caller.to_uri(), a.topic, a.body});
      break;
    case ActionKind::subscribe:
      f.insert(f.end(), {a.caller.to_uri(), a.topic});
      break;
    case ActionKind::search:
      f.insert(f.end(), {a.caller.to_uri(), join_keywords_field(a.keywords)});
      if (a.then_pull)
        f.push_back("pull");
      break;
    case ActionKind::bind:
    case ActionKind::unbind:
      f.insert(f.end(), {a.target.to_uri(), a.nap.str()});
      break;
    case ActionKind::partition:
    case ActionKind::heal:
      f.push_back(a.realm.str());
      break;
    case ActionKind::nrs_register: {
      auto r = nrs_fields(a.record);
      f.insert(f.end(), r.begin(), r.end());
      break;
    }
    case ActionKind::nrs_withdraw:
      f.insert(f.end(), {a.target.to_uri(), a.address.str()});
      break;
  }
  return f;
}

// Source positions of records, for diagnostics: section -> line of each record.
using LineMap = std::map<std::string, std::vector<int>>;

void
parse_record(const std::string& section, const Fields& f, int line, Scenario& s)
{
  if (section == "namerealms") {
    need(f, 1, 3, line, section);
    NameRealm r;
    r.id = f[0];
    if (f.size() > 1 && !f[1].empty())
      r.scheme = at_line(line, [&] { return parse_naming_scheme(f[1]); });
    if (f.size() > 2)
      r.description = f[2];
    s.name_realms.push_back(std::move(r));
  }
  else if (section == "realms") {
    need(f, 2, 4, line, section);
    NetworkRealm r;
    r.id = RealmId(f[0]);
    r.technology = at_line(line, [&] { return parse_technology(f[1]); });
    if (auto p = opt_field(f, 2))
      r.parent = RealmId(*p);
    if (auto e = opt_field(f, 3))
      r.egress = NodeId(*e);
    s.realms.push_back(std::move(r));
  }
  else if (section == "nodes") {
    need(f, 2, 2, line, section);
    s.nodes.push_back({NodeId(f[0]), at_line(line, [&] { return parse_node_role(f[1]); })});
  }
  else if (section == "naps") {
    need(f, 4, 4, line, section);
    s.naps.push_back({NapId(f[0]), NodeId(f[1]), RealmId(f[2]), Locator(f[3])});
  }
  else if (section == "links") {
    need(f, 3, 4, line, section);
    Link l{RealmId(f[0]), NodeId(f[1]), NodeId(f[2]), 1};
    if (f.size() == 4)
      l.delay = to_int<Tick>(f[3], line, "delay");
    s.links.push_back(std::move(l));
  }
  else if (section == "entities") {
    need(f, 3, 64, line, section);
    NamedEntity e;
    e.name = name_field(f[0], line);
    e.kind = at_line(line, [&] { return parse_entity_kind(f[1]); });
    e.payload = f[2];
    for (std::size_t i = 3; i < f.size(); ++i) {
      auto [k, v] = key_value(f[i], line);
      e.metadata[k] = v;
    }
    s.entities.push_back(std::move(e));
  }
  else if (section == "bindings") {
    need(f, 2, 2, line, section);
    s.bindings.push_back({name_field(f[0], line), NapId(f[1])});
  }
  else if (section == "nrs") {
    s.nrs_records.push_back(parse_nrs_fields(f, 0, line));
  }
  else if (section == "routes") {
    need(f, 3, 3, line, section);
    s.routes.push_back({NodeId(f[0]), RealmId(f[1]), f[2]});
  }
  else if (section == "policies") {
    need(f, 4, 4, line, section);
    AccessRule rule;
    rule.principal_prefix = name_field(f[1], line);
    rule.action = at_line(line, [&] { return parse_decision(f[2]); });
    rule.operation = at_line(line, [&] { return parse_operation(f[3]); });
    s.policies.push_back({NodeId(f[0]), rule});
  }
  else if (section == "timeline") {
    s.timeline.push_back(parse_action(f, line));
  }
  else {
    parse_error(line, "unknown section [" + section + "]");
  }
}

const std::vector<std::string> kSections = {"namerealms", "realms",  "nodes", "naps",     "links",   "entities",
                                            "bindings",   "nrs",     "routes", "policies", "timeline"};

// ---------------------------------------------------------------------------
// validation

class Checker
{
public:
  Checker(const Scenario& s, const LineMap* lines)
    : m_s(s)
    , m_lines(lines)
  {
  }

  void
  run();

private:
  [[noreturn]] void
  fail(const std::string& section, std::size_t index, const std::string& what) const
  {
    std::string where = "[" + section + "] record " + std::to_string(index + 1);
    if (m_lines != nullptr) {
      auto it = m_lines->find(section);
      if (it != m_lines->end() && index < it->second.size())
        where = "line " + std::to_string(it->second[index]);
    }
    throw Error(Errc::ValidationError, where + ": " + what);
  }

  void
  name_ok(const std::string& section, std::size_t i, const Name& n) const
  {
    try {
      m_ns.validate(n);
    }
    catch (const Error& e) {
      fail(section, i, e.what());
    }
  }

  bool
  is_member(const NodeId& node, const RealmId& realm) const
  {
    return m_members.count({node, realm}) > 0;
  }

  const Scenario& m_s;
  const LineMap* m_lines;
  Namespace m_ns;
  std::map<RealmId, const NetworkRealm*> m_realms;
  std::map<NodeId, NodeRole> m_nodes;
  std::set<NapId> m_naps;
  std::set<std::pair<NodeId, RealmId>> m_members;
  std::set<Name> m_entities;
};

void
Checker::run()
{
  for (std::size_t i = 0; i < m_s.name_realms.size(); ++i) {
    const auto& r = m_s.name_realms[i];
    if (!is_realm_token(r.id))
      fail("namerealms", i, "bad name-realm id '" + r.id + "'");
    try {
      m_ns.add_realm(r);
    }
    catch (const Error& e) {
      fail("namerealms", i, e.what());
    }
  }

  for (std::size_t i = 0; i < m_s.realms.size(); ++i) {
    const auto& r = m_s.realms[i];
    if (!is_id_token(r.id.str()))
      fail("realms", i, "bad realm id '" + r.id.str() + "'");
    if (!m_realms.emplace(r.id, &r).second)
      fail("realms", i, "duplicate network-realm " + r.id.str());
  }
  for (std::size_t i = 0; i < m_s.realms.size(); ++i) {
    const auto& r = m_s.realms[i];
    if (!r.parent)
      continue;
    if (!m_realms.count(*r.parent))
      fail("realms", i, "undefined parent realm " + r.parent->str());
    // walk up; a cycle revisits a realm
    std::set<RealmId> seen{r.id};
    for (auto p = r.parent; p; p = m_realms.at(*p)->parent) {
      if (!seen.insert(*p).second)
        fail("realms", i, "nesting cycle through " + p->str());
      if (!m_realms.count(*p))
        break;
    }
  }

  for (std::size_t i = 0; i < m_s.nodes.size(); ++i) {
    const auto& n = m_s.nodes[i];
    if (!is_id_token(n.id.str()))
      fail("nodes", i, "bad node id '" + n.id.str() + "'");
    if (!m_nodes.emplace(n.id, n.role).second)
      fail("nodes", i, "duplicate node " + n.id.str());
  }

  std::set<std::pair<RealmId, Locator>> addresses;
  for (std::size_t i = 0; i < m_s.naps.size(); ++i) {
    const auto& n = m_s.naps[i];
    if (!is_id_token(n.id.str()) || !is_id_token(n.address.str()))
      fail("naps", i, "bad NAP id or address");
    if (!m_naps.insert(n.id).second)
      fail("naps", i, "duplicate NAP " + n.id.str());
    if (!m_nodes.count(n.node))
      fail("naps", i, "undefined node " + n.node.str());
    if (!m_realms.count(n.realm))
      fail("naps", i, "undefined realm " + n.realm.str());
    if (!addresses.emplace(n.realm, n.address).second)
      fail("naps", i, "address " + n.address.str() + " already used in " + n.realm.str());
    m_members.emplace(n.node, n.realm);
  }
  for (std::size_t i = 0; i < m_s.naps.size(); ++i) {
    const auto& n = m_s.naps[i];
    const auto* realm = m_realms.at(n.realm);
    if (realm->parent && !is_member(n.node, *realm->parent))
      fail("naps", i, n.node.str() + " joins nested realm " + n.realm.str() + " without a NAP in its parent " +
                        realm->parent->str());
  }
  for (std::size_t i = 0; i < m_s.realms.size(); ++i) {
    const auto& r = m_s.realms[i];
    if (!r.egress)
      continue;
    auto it = m_nodes.find(*r.egress);
    if (it == m_nodes.end())
      fail("realms", i, "undefined egress node " + r.egress->str());
    if (it->second != NodeRole::name_router || !is_member(*r.egress, r.id))
      fail("realms", i, "egress " + r.egress->str() + " must be a name_router attached to " + r.id.str());
  }

  for (std::size_t i = 0; i < m_s.links.size(); ++i) {
    const auto& l = m_s.links[i];
    if (!m_realms.count(l.realm))
      fail("links", i, "undefined realm " + l.realm.str());
    if (l.a == l.b)
      fail("links", i, "self link at " + l.a.str());
    if (!is_member(l.a, l.realm) || !is_member(l.b, l.realm))
      fail("links", i, "both endpoints need a NAP in " + l.realm.str());
    if (l.delay < 1)
      fail("links", i, "delay must be at least 1 tick");
  }

  for (std::size_t i = 0; i < m_s.entities.size(); ++i) {
    const auto& e = m_s.entities[i];
    name_ok("entities", i, e.name);
    try {
      e.validate();
    }
    catch (const Error& err) {
      fail("entities", i, err.what());
    }
    if (!m_entities.insert(e.name).second)
      fail("entities", i, "duplicate entity " + e.name.to_uri());
  }

  for (std::size_t i = 0; i < m_s.bindings.size(); ++i) {
    const auto& b = m_s.bindings[i];
    if (!m_entities.count(b.name))
      fail("bindings", i, "undeclared entity " + b.name.to_uri());
    if (!m_naps.count(b.nap))
      fail("bindings", i, "undefined NAP " + b.nap.str());
  }

  for (std::size_t i = 0; i < m_s.nrs_records.size(); ++i) {
    const auto& r = m_s.nrs_records[i];
    name_ok("nrs", i, r.prefix);
    try {
      r.sd.validate();
    }
    catch (const Error& e) {
      fail("nrs", i, e.what());
    }
  }

  for (std::size_t i = 0; i < m_s.routes.size(); ++i) {
    const auto& r = m_s.routes[i];
    auto it = m_realms.find(r.realm);
    if (it == m_realms.end())
      fail("routes", i, "undefined realm " + r.realm.str());
    if (it->second->technology != Technology::CCNISH)
      fail("routes", i, "routes belong in CCNISH realms; " + r.realm.str() + " is not one");
    if (!is_member(r.origin, r.realm))
      fail("routes", i, r.origin.str() + " is not a member of " + r.realm.str());
  }

  for (std::size_t i = 0; i < m_s.policies.size(); ++i) {
    const auto& p = m_s.policies[i];
    auto it = m_nodes.find(p.node);
    if (it == m_nodes.end())
      fail("policies", i, "undefined node " + p.node.str());
    if (it->second != NodeRole::name_router)
      fail("policies", i, p.node.str() + " is not a name_router");
  }

  Tick last = 0;
  for (std::size_t i = 0; i < m_s.timeline.size(); ++i) {
    const auto& a = m_s.timeline[i];
    if (a.tick < 0)
      fail("timeline", i, "negative tick");
    if (a.tick < last)
      fail("timeline", i, "timeline is not sorted by tick");
    last = a.tick;
    switch (a.kind) {
      case ActionKind::pull:
      case ActionKind::push:
        name_ok("timeline", i, a.target);
        [[fallthrough]];
      case ActionKind::publish:
      case ActionKind::subscribe:
      case ActionKind::search:
        if (!m_entities.count(a.caller))
          fail("timeline", i, "undeclared caller " + a.caller.to_uri());
        break;
      case ActionKind::bind:
      case ActionKind::unbind:
        if (!m_entities.count(a.target))
          fail("timeline", i, "undeclared entity " + a.target.to_uri());
        if (!m_naps.count(a.nap))
          fail("timeline", i, "undefined NAP " + a.nap.str());
        break;
      case ActionKind::partition:
      case ActionKind::heal:
        if (!m_realms.count(a.realm))
          fail("timeline", i, "undefined realm " + a.realm.str());
        break;
      case ActionKind::nrs_register:
        name_ok("timeline", i, a.record.prefix);
        try {
          a.record.sd.validate();
        }
        catch (const Error& e) {
          fail("timeline", i, e.what());
        }
        break;
      case ActionKind::nrs_withdraw:
        name_ok("timeline", i, a.target);
        break;
    }
  }
}

Scenario
parse_impl(std::string_view text, LineMap& lines)
{
  Scenario s;
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#')
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        parse_error(lineno, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
        parse_error(lineno, "unknown section [" + section + "]");
      continue;
    }
    if (section.empty())
      parse_error(lineno, "record outside any section");
    parse_record(section, split_csv(line, lineno), lineno, s);
    lines[section].push_back(lineno);
  }
  return s;
}

} // namespace

Scenario
parse_scenario(std::string_view text)
{
  LineMap lines;
  auto s = parse_impl(text, lines);
  Checker(s, &lines).run();
  return s;
}

Scenario
load_scenario(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void
validate(const Scenario& s)
{
  Checker(s, nullptr).run();
}

std::string
save_scenario(const Scenario& s)
{
  std::string out;
  auto section = [&] (const char* name, auto& items, auto fields) {
    if (items.empty())
      return;
    if (!out.empty())
      out += '\n';
    out += "[";
    out += name;
    out += "]\n";
    for (const auto& item : items)
      out += join_csv(fields(item)) + "\n";
  };

  section("namerealms", s.name_realms, [] (const NameRealm& r) {
    return Fields{r.id, std::string(to_string(r.scheme)), r.description};
  });
  section("realms", s.realms, [] (const NetworkRealm& r) {
    Fields f{r.id.str(), std::string(to_string(r.technology)), r.parent ? r.parent->str() : "-"};
    if (r.egress)
      f.push_back(r.egress->str());
    return f;
  });
  section("nodes", s.nodes, [] (const NodeInfo& n) { return Fields{n.id.str(), std::string(to_string(n.role))}; });
  section("naps", s.naps, [] (const NetworkAttachmentPoint& n) {
    return Fields{n.id.str(), n.node.str(), n.realm.str(), n.address.str()};
  });
  section("links", s.links, [] (const Link& l) {
    return Fields{l.realm.str(), l.a.str(), l.b.str(), std::to_string(l.delay)};
  });
  section("entities", s.entities, [] (const NamedEntity& e) {
    Fields f{e.name.to_uri(), std::string(to_string(e.kind)), e.payload};
    for (const auto& [k, v] : e.metadata)
      f.push_back(k + "=" + v);
    return f;
  });
  section("bindings", s.bindings, [] (const ScenarioBinding& b) { return Fields{b.name.to_uri(), b.nap.str()}; });
  section("nrs", s.nrs_records, [] (const NrsRecord& r) { return nrs_fields(r); });
  section("routes", s.routes, [] (const Route& r) { return Fields{r.origin.str(), r.realm.str(), r.prefix}; });
  section("policies", s.policies, [] (const ScenarioPolicy& p) {
    return Fields{p.node.str(), p.rule.principal_prefix.to_uri(), std::string(to_string(p.rule.action)),
                  std::string(to_string(p.rule.operation))};
  });
  section("timeline", s.timeline, [] (const Action& a) { return action_fields(a); });
  return out;
}

// ---------------------------------------------------------------------------
// building and running

std::unique_ptr<Internetwork>
build(const Scenario& s)
{
  validate(s);

  Topology topo;
  // parents first
  std::set<RealmId> added;
  while (added.size() < s.realms.size()) {
    for (const auto& r : s.realms) {
      if (!added.count(r.id) && (!r.parent || added.count(*r.parent))) {
        topo.add_realm(r);
        added.insert(r.id);
      }
    }
  }
  for (const auto& n : s.nodes)
    topo.add_node(n);
  for (const auto& n : s.naps)
    topo.add_nap(n);
  for (const auto& l : s.links)
    topo.add_link(l);

  auto net = std::make_unique<Internetwork>(std::move(topo));
  for (const auto& r : s.name_realms)
    net->names().add_realm(r);
  for (const auto& e : s.entities)
    net->add_entity(e);
  for (const auto& r : s.routes)
    net->add_route(r);
  std::map<NodeId, AccessPolicy> policies;
  for (const auto& p : s.policies)
    policies[p.node].rules.push_back(p.rule);
  for (auto& [node, policy] : policies)
    net->set_policy(node, std::move(policy));
  for (const auto& r : s.nrs_records)
    net->nrs().register_record(r, Role::administrator);
  for (const auto& b : s.bindings)
    net->fabric().bind(b.name, b.nap, 0);

  for (const auto& a : s.timeline) {
    switch (a.kind) {
      case ActionKind::pull:
        net->pull(a.caller, a.target, a.tick);
        break;
      case ActionKind::push:
        net->push(a.caller, a.target, a.body, a.tick);
        break;
      case ActionKind::publish:
        net->publish(a.caller, a.topic, a.body, a.tick);
        break;
      case ActionKind::subscribe:
        net->subscribe(a.caller, a.topic, a.tick);
        break;
      case ActionKind::search: {
        OrsQuery q;
        q.keywords = a.keywords;
        net->search(a.caller, std::move(q), a.tick, a.then_pull);
        break;
      }
      case ActionKind::bind:
        net->bind_at(a.target, a.nap, a.tick);
        break;
      case ActionKind::unbind:
        net->unbind_at(a.target, a.nap, a.tick);
        break;
      case ActionKind::partition:
        net->partition_at(a.realm, a.tick);
        break;
      case ActionKind::heal:
        net->heal_at(a.realm, a.tick);
        break;
      case ActionKind::nrs_register:
        net->register_at(a.record, a.tick);
        break;
      case ActionKind::nrs_withdraw:
        net->withdraw_at(a.target, a.address, a.tick);
        break;
    }
  }
  return net;
}

std::string
run_scenario(const Scenario& s, Tick until)
{
  auto net = build(s);
  return net->run(until).text();
}

// ---------------------------------------------------------------------------
// migration

MigrationPlan
parse_migration_plan(std::string_view text)
{
  MigrationPlan plan;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#')
      continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.rfind("[step ", 0) != 0)
        parse_error(lineno, "expected [step <kind>]");
      auto kind = trim(std::string_view(line).substr(6, line.size() - 7));
      MigrationStep step;
      if (kind == "replace_authoritative_resolver")
        step.kind = StepKind::replace_authoritative_resolver;
      else if (kind == "deploy_nested_realm")
        step.kind = StepKind::deploy_nested_realm;
      else if (kind == "update_nrs")
        step.kind = StepKind::update_nrs;
      else
        parse_error(lineno, "unknown step kind '" + kind + "'");
      plan.steps.push_back(std::move(step));
      continue;
    }
    if (plan.steps.empty())
      parse_error(lineno, "record outside any step");

    auto colon = line.find(':');
    // URIs contain ':' too; the key is the leading identifier
    if (colon == std::string::npos || line.find("n2n:") < colon)
      parse_error(lineno, "expected '<key>: <record>'");
    auto key = trim(std::string_view(line).substr(0, colon));
    auto fields = split_csv(std::string_view(line).substr(colon + 1), lineno);
    auto& step = plan.steps.back();

    switch (step.kind) {
      case StepKind::replace_authoritative_resolver:
        if (key != "node")
          parse_error(lineno, "replace_authoritative_resolver takes 'node: <id>'");
        need(fields, 1, 1, lineno, "node");
        step.resolver = NodeId(fields[0]);
        break;
      case StepKind::deploy_nested_realm:
        if (std::find(kSections.begin(), kSections.end(), key) == kSections.end() || key == "timeline" ||
            key == "namerealms")
          parse_error(lineno, "deploy_nested_realm cannot add '" + key + "'");
        parse_record(key, fields, lineno, step.deploy);
        break;
      case StepKind::update_nrs:
        if (key == "register") {
          step.add.push_back(parse_nrs_fields(fields, 0, lineno));
        }
        else if (key == "withdraw") {
          need(fields, 2, 2, lineno, "withdraw");
          step.withdraw.emplace_back(name_field(fields[0], lineno), Locator(fields[1]));
        }
        else {
          parse_error(lineno, "update_nrs takes 'register:' or 'withdraw:' records");
        }
        break;
    }
  }
  return plan;
}

namespace {

template <class T>
void
append(std::vector<T>& to, const std::vector<T>& from)
{
  to.insert(to.end(), from.begin(), from.end());
}

[[noreturn]] void
invalid_step(std::size_t i, const std::string& what)
{
  throw Error(Errc::InvalidStep, "step " + std::to_string(i + 1) + ": " + what);
}

} // namespace

Scenario
apply_migration(const Scenario& s, const MigrationPlan& plan)
{
  Scenario out = s;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    switch (step.kind) {
      case StepKind::replace_authoritative_resolver: {
        auto it = std::find_if(out.nodes.begin(), out.nodes.end(),
                               [&] (const NodeInfo& n) { return n.id == step.resolver; });
        if (it == out.nodes.end())
          invalid_step(i, "no node " + step.resolver.str());
        if (it->role != NodeRole::dns)
          invalid_step(i, step.resolver.str() + " is not a DNS resolver");
        it->role = NodeRole::nrs;
        break;
      }
      case StepKind::deploy_nested_realm: {
        const auto& d = step.deploy;
        if (d.realms.empty() || std::any_of(d.realms.begin(), d.realms.end(),
                                            [] (const NetworkRealm& r) { return !r.parent; }))
          invalid_step(i, "deploy_nested_realm needs realms with a parent");
        append(out.realms, d.realms);
        append(out.nodes, d.nodes);
        append(out.naps, d.naps);
        append(out.links, d.links);
        append(out.entities, d.entities);
        append(out.bindings, d.bindings);
        append(out.nrs_records, d.nrs_records);
        append(out.routes, d.routes);
        append(out.policies, d.policies);
        break;
      }
      case StepKind::update_nrs:
        for (const auto& [prefix, hop] : step.withdraw) {
          auto before = out.nrs_records.size();
          std::erase_if(out.nrs_records, [&] (const NrsRecord& r) {
            return r.prefix == prefix && r.sd.next_hop_address == hop;
          });
          if (out.nrs_records.size() == before)
            invalid_step(i, "nothing to withdraw at " + prefix.to_uri() + " via " + hop.str());
        }
        for (const auto& r : step.add) {
          if (std::find(out.nrs_records.begin(), out.nrs_records.end(), r) != out.nrs_records.end())
            invalid_step(i, "record already present for " + r.prefix.to_uri());
          out.nrs_records.push_back(r);
        }
        break;
    }
    try {
      validate(out);
    }
    catch (const Error& e) {
      invalid_step(i, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// trace comparison

TraceDiff
diff_trace(std::string_view actual, std::string_view golden)
{
  auto lines = [] (std::string_view t) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < t.size()) {
      auto nl = t.find('\n', pos);
      out.push_back(t.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
      if (nl == std::string_view::npos)
        break;
      pos = nl + 1;
    }
    return out;
  };
  auto a = lines(actual);
  auto g = lines(golden);
  TraceDiff d;
  auto n = std::max(a.size(), g.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto al = i < a.size() ? std::string(a[i]) : std::string("<end of trace>");
    auto gl = i < g.size() ? std::string(g[i]) : std::string("<end of trace>");
    if (al != gl) {
      d.equal = false;
      d.line = i + 1;
      d.expected = gl;
      d.actual = al;
      return d;
    }
  }
  // same lines; a missing final newline still counts as a difference
  if (actual != golden) {
    d.equal = false;
    d.line = n;
    d.expected = "<trailing bytes differ>";
    d.actual = d.expected;
  }
  return d;
}

} // namespace internames

// ---------------------------------------------------------------------------
// built-ins (text embedded at build time, see cmake/embed.cmake)

namespace internames::detail {
struct EmbeddedText
{
  const char* name;
  const char* text;
};
extern const EmbeddedText kEmbedded[];
extern const std::size_t kEmbeddedCount;
} // namespace internames::detail

namespace internames {

namespace {

const char* const kMigration = "migration";
const char* const kMigrationBase = "cdn";
const char* const kMigrationPlan = "cdn-migration";

} // namespace

std::optional<std::string_view>
builtin_text(std::string_view name)
{
  for (std::size_t i = 0; i < detail::kEmbeddedCount; ++i)
    if (name == detail::kEmbedded[i].name)
      return std::string_view(detail::kEmbedded[i].text);
  return std::nullopt;
}

std::vector<std::string>
builtin_names()
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::kEmbeddedCount; ++i)
    if (std::string_view(detail::kEmbedded[i].name) != kMigrationPlan)
      out.emplace_back(detail::kEmbedded[i].name);
  out.emplace_back(kMigration);
  std::sort(out.begin(), out.end());
  return out;
}

Scenario
builtin_scenario(std::string_view name)
{
  if (name == kMigration)
    return apply_migration(builtin_scenario(kMigrationBase),
                           parse_migration_plan(*builtin_text(kMigrationPlan)));
  auto text = builtin_text(name);
  if (!text || name == kMigrationPlan)
    throw Error(Errc::NotFound, "no built-in scenario '" + std::string(name) + "'");
  return parse_scenario(*text);
}

} // namespace internames
