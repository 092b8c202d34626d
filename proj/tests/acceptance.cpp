// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace test;

namespace {

// pinned tolerances
constexpr double kMaxScenarioSeconds = 5.0;
constexpr std::size_t kLpmTables = 1000;
constexpr std::size_t kLpmQueries = 1000;
constexpr std::size_t kMaxLpmMismatches = 0;
constexpr std::size_t kCodecMessages = 1000;
constexpr std::size_t kMulticastBindings = 3;

struct Check
{
  std::vector<std::string> failures;

  void
  expect(bool ok, const std::string& what)
  {
    if (!ok)
      failures.push_back(what);
  }
};

std::string
read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string
golden(const std::string& name)
{
  return read_file(std::string(INTERNAMES_GOLDEN_DIR) + "/" + name + ".trace");
}

double
seconds_to_run(const Scenario& s, std::string& trace)
{
  auto t0 = std::chrono::steady_clock::now();
  trace = run_scenario(s);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<std::string>
members_of(const Scenario& s, const std::string& realm)
{
  std::set<std::string> out;
  for (const auto& nap : s.naps)
    if (nap.realm.str() == realm)
      out.insert(nap.node.str());
  return out;
}

// ---------------------------------------------------------------------------

void
fig3_flow(Check& c)
{
  auto s = builtin_scenario("fig3");
  std::string trace;
  auto secs = seconds_to_run(s, trace);
  c.expect(secs < kMaxScenarioSeconds, "runtime " + std::to_string(secs) + " s");
  c.expect(trace == golden("fig3"), "trace differs from golden fig3.trace");

  std::vector<std::string> kinds;
  std::string nrs_detail;
  for (const auto& e : events_where(trace, "client")) {
    if (e.event == EventKind::REBIND)
      continue;
    kinds.emplace_back(to_string(e.event));
    if (e.event == EventKind::NRS_R && nrs_detail.empty())
      nrs_detail = e.detail;
  }
  const std::vector<std::string> head{"ORS_Q", "ORS_R", "NRS_Q", "NRS_R", "SEND"};
  c.expect(kinds.size() > head.size() && std::equal(head.begin(), head.end(), kinds.begin()),
           "client sequence does not start ORS_Q ORS_R NRS_Q NRS_R SEND");
  c.expect(!kinds.empty() && kinds.back() == "DELIVER", "client sequence does not end with DELIVER");
  c.expect(nrs_detail.find("protocol=CCNISH_OVER_UDPISH fcn=FCN1 next_hop=RN1") != std::string::npos,
           "NRS_R detail: " + nrs_detail);
}

void
mobility_return(Check& c)
{
  auto s = builtin_scenario("mobility-return");
  auto net = build(s);
  std::size_t ticks = 0, pending = 0, routers = 0;
  net->set_tick_observer([&] (Tick) {
    ++ticks;
    for (const auto& [where, state] : net->ccn_states()) {
      ++routers;
      pending += state.pending_request_records();
    }
  });
  auto trace = net->run().text();
  c.expect(ticks > 0 && routers > 0, "tick observer never saw a CCN router");
  c.expect(pending == 0, std::to_string(pending) + " pending-request records seen");
  c.expect(trace == golden("mobility-return"), "trace differs from golden mobility-return.trace");

  // the request leaves the phone, one tick later the phone moves
  auto sends = events_where(trace, "phone", EventKind::SEND);
  c.expect(!sends.empty(), "no request left the phone");
  if (sends.empty())
    return;
  auto left = sends.front();
  std::set<std::string> moved;
  for (const auto& e : events_where(trace, "phone", EventKind::REBIND))
    if (e.tick == left.tick + 1)
      moved.insert(e.detail.substr(0, e.detail.find(' ')) + " " + detail_field(e.detail, "nap"));
  c.expect(moved.count("unbind phone-wifi") == 1, "phone-wifi not unbound one tick after the request left");
  c.expect(moved.count("bind phone-lte") == 1, "phone-lte not bound one tick after the request left");

  auto delivers = events_where(trace, "phone", EventKind::DELIVER);
  c.expect(delivers.size() == 1, std::to_string(delivers.size()) + " deliveries to the phone");
  if (!delivers.empty()) {
    c.expect(detail_field(delivers[0].detail, "nap") == "phone-lte", "delivered at " + delivers[0].detail);
    c.expect(delivers[0].msg_id == left.msg_id, "delivery is not the response to the request");
    c.expect(delivers[0].tick > left.tick + 1, "delivered before the move");
  }
}

void
reverse_multicast(Check& c)
{
  auto s = builtin_scenario("reverse-multicast");
  auto net = build(s);
  auto trace = net->run().text();
  c.expect(trace == golden("reverse-multicast"), "trace differs from golden reverse-multicast.trace");

  auto team = parse_name("n2n://corp:team");
  std::size_t bindings = 0;
  for (const auto& b : s.bindings)
    bindings += b.name == team;
  c.expect(bindings == kMulticastBindings, "team bound to " + std::to_string(bindings) + " NAPs");

  const OpOutcome* pull = nullptr;
  for (const auto& op : net->outcomes())
    if (op.kind == OpKind::pull && op.caller == team && pull == nullptr)
      pull = &op;
  c.expect(pull != nullptr && pull->delivered == kMulticastBindings, "pull by team not delivered 3 times");

  // the response id is the one the team pulled with: the first request SEND by a team NAP's node
  std::map<MsgId, std::vector<TraceEvent>> by_msg;
  for (const auto& e : parse_trace(trace))
    if (e.event == EventKind::DELIVER && e.name == team.to_uri())
      by_msg[e.msg_id].push_back(e);
  bool found = false;
  for (const auto& [id, ds] : by_msg) {
    if (ds.size() != kMulticastBindings)
      continue;
    std::set<std::string> digests, bytes, naps;
    for (const auto& d : ds) {
      digests.insert(detail_field(d.detail, "digest"));
      bytes.insert(detail_field(d.detail, "bytes"));
      naps.insert(detail_field(d.detail, "nap"));
    }
    found = found || (digests.size() == 1 && bytes.size() == 1 && naps.size() == kMulticastBindings);
  }
  c.expect(found, "no response with exactly 3 identical deliveries to distinct NAPs");
  if (pull != nullptr)
    c.expect(pull->body == net->ors().find(pull->target)->payload, "delivered body differs from entity");
}

void
disaster(Check& c)
{
  auto s = builtin_scenario("disaster");
  auto trace = run_scenario(s);
  c.expect(trace == golden("disaster"), "trace differs from golden disaster.trace");

  Tick partition = -1, heal = -1;
  std::string realm;
  for (const auto& a : s.timeline) {
    if (a.kind == ActionKind::partition) {
      partition = a.tick;
      realm = a.realm.str();
    }
    if (a.kind == ActionKind::heal)
      heal = a.tick;
  }
  c.expect(partition >= 0 && heal > partition, "scenario lacks a partition/heal window");
  auto inside = members_of(s, realm);

  // resolutions seen by the resident, by phase
  std::vector<std::string> before, during;
  for (const auto& e : events_where(trace, "resident")) {
    if (e.event != EventKind::NRS_R && e.event != EventKind::CACHE_HIT)
      continue;
    auto hop = detail_field(e.detail, "next_hop");
    if (e.tick < partition)
      before.push_back(hop);
    else if (e.tick < heal)
      during.push_back(hop);
  }
  c.expect(!before.empty() && std::all_of(before.begin(), before.end(), [] (auto& h) { return h == "198.51.100.80"; }),
           "pre-partition resolution not external");
  c.expect(!during.empty() && std::all_of(during.begin(), during.end(), [] (auto& h) { return h == "10.20.0.80"; }),
           "partitioned resolution not disaster-scoped");

  // pulls issued inside the window stay inside the partitioned realm and succeed
  std::set<MsgId> window_pulls;
  for (const auto& e : events_where(trace, "resident", EventKind::SEND))
    if (e.tick >= partition && e.tick < heal && detail_field(e.detail, "kind") == "HTTP_GET")
      window_pulls.insert(e.msg_id);
  c.expect(!window_pulls.empty(), "no pull inside the partition");
  for (auto id : window_pulls) {
    bool delivered = false;
    for (const auto& e : parse_trace(trace)) {
      if (e.msg_id != id)
        continue;
      c.expect(e.realm == realm && inside.count(e.node) == 1,
               "msg " + std::to_string(id) + " left the partition at " + e.node + "/" + e.realm);
      delivered = delivered || e.event == EventKind::DELIVER;
    }
    c.expect(delivered, "msg " + std::to_string(id) + " not delivered");
  }
}

void
migration(Check& c)
{
  auto before = builtin_scenario("cdn");
  auto after = apply_migration(before, parse_migration_plan(*builtin_text("cdn-migration")));
  auto clip = parse_name("n2n://cdn:cdn.com/video/clip1");

  auto pulled = [&] (const Scenario& s) {
    auto net = build(s);
    net->run();
    std::string body;
    for (const auto& op : net->outcomes())
      if (op.kind == OpKind::pull && op.target == clip && op.succeeded())
        body = op.body;
    return std::make_pair(body, net->fabric().trace().text());
  };
  auto [old_body, old_trace] = pulled(before);
  auto [new_body, new_trace] = pulled(after);
  c.expect(!old_body.empty(), "clip not pullable before migration");
  c.expect(old_body == new_body, "payload changed across migration");
  c.expect(new_trace == golden("migration"), "trace differs from golden migration.trace");

  // the new name-router is the one deployed by the plan
  std::set<std::string> new_router_addresses;
  std::set<std::string> old_nodes;
  for (const auto& n : before.nodes)
    old_nodes.insert(n.id.str());
  for (const auto& n : after.nodes)
    if (n.role == NodeRole::name_router && old_nodes.count(n.id.str()) == 0)
      for (const auto& nap : after.naps)
        if (nap.node == n.id)
          new_router_addresses.insert(nap.address.str());
  c.expect(!new_router_addresses.empty(), "plan deployed no name-router");

  auto viewer_nrs = events_where(new_trace, "viewer", EventKind::NRS_R);
  c.expect(!viewer_nrs.empty(), "no NRS_R at the viewer after migration");
  if (!viewer_nrs.empty()) {
    auto hop = detail_field(viewer_nrs.front().detail, "next_hop");
    c.expect(new_router_addresses.count(hop) == 1, "post-migration next hop " + hop);
    c.expect(detail_field(viewer_nrs.front().detail, "protocol") == "HTTPISH", "post-migration SD not HTTPISH");
  }
}

void
lpm(Check& c)
{
  Rng rng(6);
  std::size_t nrs_bad = 0, fib_bad = 0;
  for (std::size_t t = 0; t < kLpmTables; ++t) {
    auto table = random_nrs_table(rng);
    for (std::size_t q = 0; q < kLpmQueries; ++q) {
      auto n = Name(coin(rng, 0.9) ? "r" : "s", small_segments(rng, 1, 6));
      auto ctx = random_context(rng);
      nrs_bad += try_resolve(table.nrs, n, ctx) != oracle_resolve(table.records, n, ctx);
    }
  }
  for (std::size_t t = 0; t < kLpmTables; ++t) {
    auto fib = random_fib(rng);
    for (std::size_t q = 0; q < kLpmQueries; ++q) {
      auto fcn = join(small_segments(rng, 1, 6));
      if (coin(rng, 0.1))
        fcn = "ccnx://" + fcn;
      fib_bad += try_fib(fib, fcn) != oracle_fib(fib, fcn);
    }
  }
  c.expect(nrs_bad <= kMaxLpmMismatches, std::to_string(nrs_bad) + " NRS mismatches");
  c.expect(fib_bad <= kMaxLpmMismatches, std::to_string(fib_bad) + " FIB mismatches");
}

void
realm_isolation(Check& c)
{
  std::size_t checked = 0;
  for (const auto& name : builtin_names()) {
    auto s = builtin_scenario(name);
    auto net = build(s);
    net->run();
    for (const auto& r : s.realms) {
      if (r.technology != Technology::CCNISH)
        continue;
      auto members = members_of(s, r.id.str());
      std::set<std::string> addresses;
      for (const auto& nap : s.naps)
        if (nap.realm == r.id)
          addresses.insert(nap.address.str());

      // what the realm's own members announced: routes, and names bound at their NAPs
      std::set<std::pair<std::string, std::string>> announced;
      for (const auto& route : s.routes)
        if (route.realm == r.id && members.count(route.origin.str()))
          announced.insert({route.prefix, route.origin.str()});
      for (const auto& [bound, binding] : net->fabric().bindings())
        for (const auto& nap_id : binding.naps)
          for (const auto& nap : s.naps)
            if (nap.id == nap_id && nap.realm == r.id && net->ors().find(bound)->kind == EntityKind::service_access_point)
              announced.insert({bound.realm() + ":" + join(bound.segments()), nap.node.str()});

      for (const auto& [where, state] : net->ccn_states()) {
        if (where.second != r.id)
          continue;
        for (const auto& entry : state.fib) {
          ++checked;
          c.expect(announced.count({entry.prefix, entry.origin.str()}) == 1,
                   name + ": " + r.id.str() + " FIB at " + where.first.str() + " imports " + entry.prefix);
          c.expect(addresses.count(entry.next_hop.str()) == 1,
                   name + ": next hop " + entry.next_hop.str() + " outside " + r.id.str());
        }
      }
    }
  }
  c.expect(checked > 0, "no FIB entries inspected");
}

void
determinism(Check& c)
{
  for (const auto& name : builtin_names()) {
    auto s = builtin_scenario(name);
    c.expect(run_scenario(s) == run_scenario(s), name + " differs between runs");
  }
  Rng rng(8);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < kCodecMessages; ++i) {
    auto m = random_message(rng);
    auto bytes = encode(m);
    bad += !(decode(bytes) == m) || encode(decode(bytes)) != bytes;
  }
  c.expect(bad == 0, std::to_string(bad) + " codec round-trip failures");
}

void
bridge_transparency(Check& c)
{
  auto s = parse_scenario(kStandardTopology);
  std::map<std::string, std::string> realm_of_nap;
  for (const auto& nap : s.naps)
    realm_of_nap[nap.id.str()] = nap.realm.str();
  std::map<std::string, Name> consumer; // realm -> a SAP bound there
  std::map<Name, std::string> home;     // content -> realm
  for (const auto& b : s.bindings) {
    const auto& realm = realm_of_nap[b.nap.str()];
    for (const auto& e : s.entities)
      if (e.name == b.name)
        (e.kind == EntityKind::content ? void(home[e.name] = realm) : void(consumer.emplace(realm, e.name)));
  }

  std::size_t compared = 0;
  for (const auto& e : s.entities) {
    if (e.kind != EntityKind::content)
      continue;
    auto local = consumer.find(home[e.name]);
    c.expect(local != consumer.end(), "no intra-realm consumer for " + e.name.to_uri());
    if (local == consumer.end())
      continue;
    for (const auto& [realm, caller] : consumer) {
      if (realm == home[e.name])
        continue;
      auto run = [&] (const Name& who) {
        auto copy = s;
        Action a;
        a.tick = 1;
        a.kind = ActionKind::pull;
        a.caller = who;
        a.target = e.name;
        copy.timeline = {a};
        auto net = build(copy);
        const auto& trace = net->run();
        std::size_t bridges = 0;
        for (const auto& ev : trace.events())
          bridges += ev.event == EventKind::BRIDGE;
        return std::make_pair(net->outcomes().at(0).body, bridges);
      };
      auto [direct, direct_bridges] = run(local->second);
      auto [bridged, bridge_count] = run(caller);
      ++compared;
      c.expect(!direct.empty() && direct == e.payload, "intra-realm pull of " + e.name.to_uri() + " failed");
      c.expect(direct_bridges == 0, "intra-realm pull of " + e.name.to_uri() + " crossed a bridge");
      c.expect(bridge_count > 0, caller.to_uri() + " reached " + e.name.to_uri() + " without a bridge");
      c.expect(bridged == direct, caller.to_uri() + " got different bytes for " + e.name.to_uri());
    }
  }
  c.expect(compared >= 8, "only " + std::to_string(compared) + " cross-realm comparisons");

  // cache lifetime boundaries
  for (Tick ttl = 1; ttl <= 50; ++ttl) {
    for (Tick inserted : {Tick(0), Tick(7), Tick(1000)}) {
      Nrs nrs;
      auto n = parse_name("n2n://r:a");
      ServiceDescriptor sd{Protocol::HTTPISH, "", Technology::IPISH, Locator("10.0.0.1"), {}};
      sd.attributes.ttl_ticks = ttl;
      nrs.register_record({n, sd, {}}, Role::administrator);
      CacheStore cache;
      ResolutionContext ctx;
      ctx.now_tick = inserted;
      nrs_resolve_cached(nrs, n, ctx, cache);
      bool hit = false;
      ctx.now_tick = inserted + ttl - 1;
      nrs_resolve_cached(nrs, n, ctx, cache, &hit);
      c.expect(hit, "miss at inserted+ttl-1 (ttl " + std::to_string(ttl) + ")");
      ctx.now_tick = inserted + ttl;
      nrs_resolve_cached(nrs, n, ctx, cache, &hit);
      c.expect(!hit, "hit at inserted+ttl (ttl " + std::to_string(ttl) + ")");
    }
  }
}

} // namespace

int
main()
{
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
    {"1 fig3 flow reproduction", fig3_flow},
    {"2 PIT-less return with mobility", mobility_return},
    {"3 reverse multicast", reverse_multicast},
    {"4 disaster re-resolution", disaster},
    {"5 migration continuity", migration},
    {"6 LPM oracle equivalence", lpm},
    {"7 realm isolation", realm_isolation},
    {"8 determinism", determinism},
    {"9 bridge transparency", bridge_transparency},
  };
  int failed = 0;
  for (const auto& [label, run] : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    }
    catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s (%.2f s)\n", c.failures.empty() ? "PASS" : "FAIL", label.c_str(), secs);
    for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i)
      std::printf("    %s\n", c.failures[i].c_str());
    failed += !c.failures.empty();
  }
  return failed;
}
