#ifndef INTERNAMES_TESTS_SUPPORT_HPP
#define INTERNAMES_TESTS_SUPPORT_HPP

// Generators and brute-force oracles shared by the unit and acceptance tests.
// Oracles deliberately avoid the library's own matching code.

#include "internames/ccn.hpp"
#include "internames/name.hpp"
#include "internames/name_router.hpp"
#include "internames/nrs.hpp"
#include "internames/ors.hpp"
#include "internames/scenario.hpp"
#include "internames/trace.hpp"
#include "internames/wire.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace test {

using namespace internames;
using Rng = std::mt19937_64;

inline std::size_t
pick(Rng& rng, std::size_t n)
{
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::int64_t
between(Rng& rng, std::int64_t lo, std::int64_t hi)
{
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool
coin(Rng& rng, double p = 0.5)
{
  return std::bernoulli_distribution(p)(rng);
}

inline std::string
token(Rng& rng, std::string_view alphabet, std::size_t min_len, std::size_t max_len)
{
  std::string s(static_cast<std::size_t>(between(rng, static_cast<std::int64_t>(min_len),
                                                 static_cast<std::int64_t>(max_len))),
                ' ');
  for (auto& c : s)
    c = alphabet[pick(rng, alphabet.size())];
  return s;
}

inline constexpr std::string_view kRealmChars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.-";
inline constexpr std::string_view kSegmentChars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-";

inline Name
random_name(Rng& rng, std::size_t max_segments = 6)
{
  std::vector<std::string> segs;
  auto n = static_cast<std::size_t>(between(rng, 1, static_cast<std::int64_t>(max_segments)));
  for (std::size_t i = 0; i < n; ++i)
    segs.push_back(token(rng, kSegmentChars, 1, 12));
  return Name(token(rng, kRealmChars, 1, 8), segs);
}

/// Segments over a small alphabet so that prefixes collide often.
inline std::vector<std::string>
small_segments(Rng& rng, std::size_t min_depth, std::size_t max_depth)
{
  std::vector<std::string> segs;
  auto n = static_cast<std::size_t>(between(rng, static_cast<std::int64_t>(min_depth),
                                            static_cast<std::int64_t>(max_depth)));
  for (std::size_t i = 0; i < n; ++i)
    segs.push_back(std::string(1, "abc"[pick(rng, 3)]));
  return segs;
}

inline std::string
join(const std::vector<std::string>& segs, char sep = '/')
{
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0)
      out += sep;
    out += segs[i];
  }
  return out;
}

inline bool
leading_sublist(const std::vector<std::string>& p, const std::vector<std::string>& n)
{
  if (p.size() > n.size())
    return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != n[i])
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// NRS

inline ResolutionContext
random_context(Rng& rng)
{
  ResolutionContext ctx;
  ctx.now_tick = between(rng, 0, 40);
  ctx.location_tag = std::vector<std::string>{"city", "internet", "lab"}[pick(rng, 3)];
  for (const char* tag : {"disaster", "normal", "night"})
    if (coin(rng, 0.4))
      ctx.context_tags.insert(tag);
  ctx.requested_service = static_cast<ServiceKind>(pick(rng, 4));
  return ctx;
}

inline ContextPredicate
random_predicate(Rng& rng)
{
  ContextPredicate p;
  if (coin(rng, 0.6))
    return p;
  if (coin(rng, 0.3)) {
    auto start = between(rng, 0, 30);
    p.time_window = TimeWindow{start, start + between(rng, 1, 15)};
  }
  if (coin(rng, 0.3))
    p.location_tags.insert(std::vector<std::string>{"city", "internet", "lab"}[pick(rng, 3)]);
  if (coin(rng, 0.4))
    p.context_tags.insert(coin(rng) ? "disaster" : "normal");
  if (coin(rng, 0.2))
    p.service = static_cast<ServiceKind>(pick(rng, 4));
  return p;
}

inline ServiceDescriptor
random_sd(Rng& rng)
{
  ServiceDescriptor sd;
  if (coin(rng)) {
    sd.protocol = Protocol::CCNISH_OVER_UDPISH;
    sd.fcn = join(small_segments(rng, 1, 3));
  }
  sd.next_hop_tech = coin(rng) ? Technology::IPISH : Technology::CCNISH;
  sd.next_hop_address = Locator("10.0.0." + std::to_string(between(rng, 1, 6)));
  sd.attributes.priority = between(rng, 0, 3);
  if (coin(rng, 0.3))
    sd.attributes.ttl_ticks = between(rng, 0, 20);
  return sd;
}

inline bool
oracle_predicate(const ContextPredicate& p, const ResolutionContext& c)
{
  bool in_window = !p.time_window || (p.time_window->start <= c.now_tick && c.now_tick < p.time_window->end);
  bool at_location = p.location_tags.empty() ||
                     std::find(p.location_tags.begin(), p.location_tags.end(), c.location_tag) != p.location_tags.end();
  bool tags = std::includes(c.context_tags.begin(), c.context_tags.end(), p.context_tags.begin(), p.context_tags.end());
  bool service = !p.service || *p.service == c.requested_service;
  return in_window && at_location && tags && service;
}

/// Brute-force resolve: scan every record, keep the longest matching prefix
/// among those whose predicate holds, order by (priority, canonical text).
inline std::optional<std::vector<ServiceDescriptor>>
oracle_resolve(const std::vector<NrsRecord>& records, const Name& n, const ResolutionContext& ctx)
{
  std::vector<const NrsRecord*> hits;
  std::size_t best = 0;
  for (const auto& r : records) {
    if (r.prefix.realm() != n.realm() || !leading_sublist(r.prefix.segments(), n.segments()) ||
        !oracle_predicate(r.predicate, ctx))
      continue;
    best = std::max(best, r.prefix.size());
    hits.push_back(&r);
  }
  std::vector<ServiceDescriptor> out;
  for (const auto* r : hits)
    if (r->prefix.size() == best)
      out.push_back(r->sd);
  if (out.empty())
    return std::nullopt;
  std::stable_sort(out.begin(), out.end(), [] (const ServiceDescriptor& a, const ServiceDescriptor& b) {
    if (a.attributes.priority != b.attributes.priority)
      return a.attributes.priority < b.attributes.priority;
    return a.to_text() < b.to_text();
  });
  if (ctx.requested_service == ServiceKind::anycast)
    out.resize(1);
  return out;
}

inline std::optional<std::vector<ServiceDescriptor>>
try_resolve(const Nrs& nrs, const Name& n, const ResolutionContext& ctx)
{
  try {
    return nrs.resolve(n, ctx);
  }
  catch (const Error& e) {
    if (e.code() != Errc::NotResolvable)
      throw;
    return std::nullopt;
  }
}

struct NrsCase
{
  std::vector<NrsRecord> records; // what the oracle believes is registered
  Nrs nrs;
};

/// Up to 64 prefixes over {a,b,c}, depth <= 5, in two name-realms.
inline NrsCase
random_nrs_table(Rng& rng)
{
  NrsCase c;
  auto count = between(rng, 0, 64);
  for (std::int64_t i = 0; i < count; ++i) {
    NrsRecord r{Name(coin(rng, 0.9) ? "r" : "s", small_segments(rng, 1, 5)), random_sd(rng), random_predicate(rng)};
    bool dup = std::any_of(c.records.begin(), c.records.end(), [&] (const NrsRecord& o) {
      return o.prefix == r.prefix && o.sd.protocol == r.sd.protocol &&
             o.sd.next_hop_address == r.sd.next_hop_address && o.predicate == r.predicate;
    });
    try {
      c.nrs.register_record(r, Role::administrator);
      if (dup)
        throw std::logic_error("duplicate record accepted");
      c.records.push_back(r);
    }
    catch (const Error& e) {
      if (!dup || e.code() != Errc::DuplicateRecord)
        throw;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// FIB

inline std::vector<std::string>
oracle_fcn_segments(std::string fcn)
{
  if (fcn.rfind("ccnx://", 0) == 0)
    fcn.erase(0, 7);
  std::vector<std::string> out;
  std::string cur;
  for (char c : fcn + "/") {
    if (c == '/') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    }
    else {
      cur += c;
    }
  }
  return out;
}

inline std::optional<Locator>
oracle_fib(const std::vector<FibEntry>& table, const std::string& fcn)
{
  auto segs = oracle_fcn_segments(fcn);
  std::optional<std::pair<std::size_t, Locator>> best;
  for (const auto& e : table) {
    auto p = oracle_fcn_segments(e.prefix);
    if (!leading_sublist(p, segs))
      continue;
    if (!best || p.size() > best->first || (p.size() == best->first && e.next_hop < best->second))
      best = std::make_pair(p.size(), e.next_hop);
  }
  if (!best)
    return std::nullopt;
  return best->second;
}

inline std::vector<FibEntry>
random_fib(Rng& rng)
{
  std::vector<FibEntry> t;
  auto count = between(rng, 0, 64);
  for (std::int64_t i = 0; i < count; ++i) {
    auto prefix = join(small_segments(rng, 1, 5));
    if (coin(rng, 0.1))
      prefix = "ccnx://" + prefix;
    t.push_back({prefix, Locator("face" + std::to_string(between(rng, 0, 9))), NodeId("n")});
  }
  return t;
}

inline std::optional<Locator>
try_fib(const std::vector<FibEntry>& table, const std::string& fcn)
{
  try {
    return fib_lookup(table, fcn);
  }
  catch (const Error& e) {
    if (e.code() != Errc::NoFibMatch)
      throw;
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// access control, ORS

inline Decision
oracle_access(const AccessPolicy& p, const Name& principal, Operation op)
{
  for (const auto& r : p.rules) {
    bool who = r.principal_prefix.realm() == principal.realm() &&
               leading_sublist(r.principal_prefix.segments(), principal.segments());
    if (who && (r.operation == Operation::any || r.operation == op))
      return r.action;
  }
  return Decision::allow;
}

inline std::vector<std::string>
oracle_keywords(const std::string& text)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ",") {
    if (c != ',') {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      continue;
    }
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos)
      out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  }
  return out;
}

inline std::vector<std::string>
oracle_search(const std::vector<NamedEntity>& corpus, const OrsQuery& q)
{
  std::vector<std::string> wanted;
  for (const auto& k : q.keywords)
    for (const auto& t : oracle_keywords(k))
      wanted.push_back(t);
  std::vector<std::string> out;
  if (wanted.empty())
    return out;
  for (const auto& e : corpus) {
    auto it = e.metadata.find("keywords");
    auto have = oracle_keywords(it == e.metadata.end() ? "" : it->second);
    bool ok = std::all_of(wanted.begin(), wanted.end(),
                          [&] (const std::string& w) { return std::find(have.begin(), have.end(), w) != have.end(); });
    for (const auto& [k, v] : q.metadata_filters) {
      auto m = e.metadata.find(k);
      ok = ok && m != e.metadata.end() && m->second == v;
    }
    if (ok)
      out.push_back(e.name.to_uri());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// wire messages

inline WireMessage
random_message(Rng& rng)
{
  WireMessage m;
  m.msg_id = static_cast<MsgId>(between(rng, 0, std::numeric_limits<std::int64_t>::max()));
  m.kind = static_cast<MessageKind>(between(rng, 1, 11));
  if (coin(rng) || is_ccn_kind(m.kind))
    m.target_fcn = coin(rng, 0.2) ? "ccnx://" + join(small_segments(rng, 1, 4)) : join(small_segments(rng, 0, 4));
  if (coin(rng))
    m.target_name = random_name(rng);
  if (is_request(m.kind) || coin(rng))
    m.source_name = random_name(rng);
  m.body = token(rng, std::string_view("\0\x01\xff abc,\n\"", 10), 0, 64);
  m.hop_count = static_cast<std::uint32_t>(between(rng, 0, kMaxHops));
  return m;
}

// ---------------------------------------------------------------------------
// traces

inline std::vector<TraceEvent>
events_where(const std::string& text, const std::string& node = "", std::optional<EventKind> kind = std::nullopt)
{
  std::vector<TraceEvent> out;
  for (auto& e : parse_trace(text)) {
    if ((node.empty() || e.node == node) && (!kind || e.event == *kind))
      out.push_back(std::move(e));
  }
  return out;
}

inline std::size_t
count_events(const std::string& text, EventKind kind, std::optional<MsgId> msg = std::nullopt)
{
  std::size_t n = 0;
  for (const auto& e : parse_trace(text))
    n += e.event == kind && (!msg || e.msg_id == *msg);
  return n;
}

/// "key=value" out of a detail string, empty when absent.
inline std::string
detail_field(const std::string& detail, const std::string& key)
{
  auto pos = detail.find(key + "=");
  while (pos != std::string::npos && pos > 0 && detail[pos - 1] != ' ')
    pos = detail.find(key + "=", pos + 1);
  if (pos == std::string::npos)
    return {};
  auto start = pos + key.size() + 1;
  return detail.substr(start, detail.find(' ', start) - start);
}

/// Small cross-realm topology used by several suites: an IP realm with a client
/// and a web server, a CCN realm with a repository and a consumer, a second IP
/// realm behind the same name-router.
inline const char* kStandardTopology = R"(
[namerealms]
users, hierarchical, people
pub, hierarchical, published content

[realms]
inet, IPISH, -
ccn, CCNISH, -, NR1
lab, IPISH, -

[nodes]
client, host
web, host
lab-client, host
labweb, host
NR1, name_router
core, router
repo, host
reader, host

[naps]
client-inet, client, inet, 10.0.0.2
web-inet, web, inet, 10.0.0.80
NR1-inet, NR1, inet, 10.0.0.1
NR1-ccn, NR1, ccn, nr1.ccn
NR1-lab, NR1, lab, 10.9.0.1
core-ccn, core, ccn, core.ccn
repo-ccn, repo, ccn, repo.ccn
reader-ccn, reader, ccn, reader.ccn
lab-client-lab, lab-client, lab, 10.9.0.2
labweb-lab, labweb, lab, 10.9.0.80

[links]
inet, client, NR1, 1
inet, web, NR1, 2
ccn, NR1, core, 1
ccn, core, repo, 1
ccn, reader, core, 1
lab, lab-client, NR1, 1
lab, labweb, NR1, 1

[entities]
n2n://users:client, sap, ""
n2n://users:lab-client, sap, ""
n2n://users:reader, sap, ""
n2n://pub:ccn.com/article.pdf, content, "article bytes", fcn=ccn.com/article.pdf, keywords=article
n2n://pub:ccn.com/figure.png, content, "png bytes", fcn=ccn.com/figure.png, keywords=figure
n2n://pub:web.org/index.html, content, "<html>web</html>", keywords=index
n2n://pub:lab.org/data.csv, content, "a,b,c", keywords=data

[bindings]
n2n://users:client, client-inet
n2n://users:lab-client, lab-client-lab
n2n://users:reader, reader-ccn
n2n://pub:ccn.com/article.pdf, repo-ccn
n2n://pub:ccn.com/figure.png, repo-ccn
n2n://pub:web.org/index.html, web-inet
n2n://pub:lab.org/data.csv, labweb-lab

[nrs]
n2n://pub:ccn.com/article.pdf, CCNISH_OVER_UDPISH, ccn.com/article.pdf, IPISH, 10.0.0.1, priority=0
n2n://pub:ccn.com/figure.png, CCNISH_OVER_UDPISH, ccn.com/figure.png, IPISH, 10.0.0.1, priority=0
n2n://pub:web.org, HTTPISH, -, IPISH, 10.0.0.80, priority=0
n2n://pub:lab.org, HTTPISH, -, IPISH, 10.9.0.80, priority=0

[routes]
repo, ccn, ccn.com
core, ccn, news
)";

} // namespace test

#endif // INTERNAMES_TESTS_SUPPORT_HPP
