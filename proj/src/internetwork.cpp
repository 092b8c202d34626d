#include "internames/internetwork.hpp"
#include "internames/error.hpp"
#include "internames/hash.hpp"

#include <algorithm>

namespace internames {

std::string_view
to_string(OpKind k)
{
  switch (k) {
    case OpKind::pull: return "pull";
    case OpKind::push: return "push";
    case OpKind::subscribe: return "subscribe";
    case OpKind::publish: return "publish";
    case OpKind::search: return "search";
  }
  return "pull";
}

bool
OpOutcome::succeeded() const
{
  switch (kind) {
    case OpKind::pull:
    case OpKind::push:
      return delivered > 0;
    case OpKind::subscribe:
    case OpKind::publish:
      return acknowledged;
    case OpKind::search:
      return searched;
  }
  return false;
}

Errc
OpOutcome::failure() const
{
  return error.value_or(Errc::Unreachable);
}

namespace {

bool
is_ors_role(NodeRole r)
{
  return r == NodeRole::ors;
}

std::string
bridge_detail(const WireMessage& in, const WireMessage& out, const RealmId& from, const RealmId& to)
{
  std::string d = std::string(to_string(in.kind)) + "->" + std::string(to_string(out.kind)) + " " + from.str() +
                  "->" + to.str();
  if (!out.target_fcn.empty())
    d += " fcn=" + out.target_fcn;
  return d;
}

Protocol
realm_protocol(Technology t)
{
  return t == Technology::CCNISH ? Protocol::CCNISH_OVER_UDPISH : Protocol::HTTPISH;
}

} // namespace

Internetwork::Internetwork(Topology topology)
  : m_fabric(std::move(topology))
{
  const auto& topo = m_fabric.topology();
  for (const auto& [rid, realm] : topo.realms()) {
    if (realm.technology != Technology::CCNISH)
      continue;
    for (const auto& member : topo.members(rid))
      m_ccn.try_emplace(std::make_pair(member, rid));
  }
  m_fabric.set_binding_observer(
    [this] (const Name& n, const NetworkAttachmentPoint& nap, bool bound) { on_binding(n, nap, bound); });
}

void
Internetwork::add_entity(const NamedEntity& e)
{
  m_namespace.validate(e.name);
  e.validate();
  m_ors.register_entity(e);
}

void
Internetwork::add_route(const Route& r)
{
  const auto& topo = topology();
  if (topo.realm(r.realm).technology != Technology::CCNISH)
    throw Error(Errc::ValidationError, "routes are announced into CCNISH realms only, not " + r.realm.str());
  if (!topo.is_member(r.origin, r.realm))
    throw Error(Errc::ValidationError, r.origin.str() + " cannot announce into " + r.realm.str() +
                                         " without a NAP there");
  if (fcn_segments(r.prefix).empty())
    throw Error(Errc::ValidationError, "empty route prefix");
  if (m_routes.insert(r).second)
    rebuild_fib(r.realm);
}

void
Internetwork::remove_route(const Route& r)
{
  if (m_routes.erase(r) > 0)
    rebuild_fib(r.realm);
}

void
Internetwork::set_policy(const NodeId& name_router, AccessPolicy policy)
{
  if (topology().node(name_router).role != NodeRole::name_router)
    throw Error(Errc::ValidationError, "access policy on " + name_router.str() + ", which is not a name-router");
  m_policies[name_router] = std::move(policy);
}

void
Internetwork::rebuild_fib(const RealmId& realm)
{
  const auto& topo = topology();
  for (const auto& member : topo.members(realm)) {
    struct Best
    {
      Tick delay;
      NodeId origin;
      Locator next_hop;
    };
    std::map<std::string, Best> best;
    for (const auto& r : m_routes) {
      if (r.realm != realm)
        continue;
      Best cand;
      if (r.origin == member) {
        cand = {0, r.origin, topo.nap_of(member, realm)->address};
      }
      else {
        auto path = topo.shortest_path(realm, member, r.origin);
        if (!path)
          continue;
        cand = {path->delay, r.origin, topo.nap_of(path->nodes.at(1), realm)->address};
      }
      auto it = best.find(r.prefix);
      if (it == best.end() || std::tie(cand.delay, cand.origin) < std::tie(it->second.delay, it->second.origin))
        best[r.prefix] = cand;
    }
    auto& fib = m_ccn.at({member, realm}).fib;
    fib.clear();
    for (const auto& [prefix, b] : best)
      fib.push_back({prefix, b.next_hop, b.origin});
  }
}

void
Internetwork::on_binding(const Name& name, const NetworkAttachmentPoint& nap, bool bound)
{
  const auto* entity = m_ors.find(name);
  if (entity != nullptr && entity->kind == EntityKind::content)
    return;

  // host record: the name is reachable at this NAP
  const auto& realm = topology().realm(nap.realm);
  ServiceDescriptor sd;
  sd.protocol = Protocol::HTTPISH;
  sd.next_hop_tech = realm.technology;
  sd.next_hop_address = nap.address;
  sd.attributes.ttl_ticks = 0;
  try {
    if (bound)
      m_nrs.register_record({name, sd, {}}, Role::administrator);
    else
      m_nrs.withdraw(name, nap.address, Role::administrator);
  }
  catch (const Error&) {
    // already present / already gone
  }

  if (realm.technology == Technology::CCNISH) {
    Route r{nap.node, nap.realm, name.to_fcn()};
    if (bound)
      add_route(r);
    else
      remove_route(r);
  }
}

// ---------------------------------------------------------------------------
// helpers

OpHandle
Internetwork::new_op(OpKind kind, const Name& caller, Tick t)
{
  OpOutcome op;
  op.kind = kind;
  op.caller = caller;
  op.issued = t;
  m_ops.push_back(std::move(op));
  return m_ops.size() - 1;
}

OpOutcome*
Internetwork::op_of(MsgId id)
{
  auto it = m_op_by_msg.find(id);
  return it == m_op_by_msg.end() ? nullptr : &m_ops[it->second];
}

void
Internetwork::fail(const Where& at, MsgId id, const Name& name, std::string_view reason, Errc code)
{
  m_fabric.emit(EventKind::DROP, at.node, at.realm, id, name, std::string(reason));
  if (auto* op = op_of(id); op != nullptr && !op->error)
    op->error = code;
}

void
Internetwork::fail_op(OpHandle h, const Where& at, const Name& name, std::string_view reason, Errc code)
{
  m_fabric.emit(EventKind::DROP, at.node, at.realm, 0, name, std::string(reason));
  auto& op = m_ops[h];
  if (!op.error)
    op.error = code;
}

void
Internetwork::deliver(const Where& at, const NapId& nap, const WireMessage& m)
{
  if (!m_fabric.is_bound_at(m.target_name, nap)) {
    fail(at, m.msg_id, m.target_name, "unreachable-name", Errc::Unreachable);
    return;
  }
  m_fabric.emit(EventKind::DELIVER, at.node, at.realm, m.msg_id, m.target_name,
                "nap=" + nap.str() + " bytes=" + std::to_string(m.body.size()) + " digest=" + hex64(fnv1a(m.body)));
  if (auto* op = op_of(m.msg_id)) {
    if (++op->delivered == 1)
      op->body = m.body;
    op->reached.insert(m.target_name);
  }
}

ResolutionContext
Internetwork::context_for(const NodeId& node, const RealmId& realm) const
{
  ResolutionContext ctx;
  ctx.now_tick = m_fabric.now();
  ctx.location_tag = realm.str();
  ctx.context_tags = {m_fabric.in_disaster(node) ? "disaster" : "normal"};
  ctx.requested_service = ServiceKind::unicast;
  return ctx;
}

const NetworkAttachmentPoint*
Internetwork::origin_nap(const Name& caller) const
{
  const auto* b = m_fabric.binding(caller);
  if (b == nullptr || b->naps.empty())
    return nullptr;
  return &topology().nap(*b->naps.begin());
}

const NetworkAttachmentPoint*
Internetwork::service_node(const RealmId& realm, bool (*accept)(NodeRole)) const
{
  const auto& topo = topology();
  for (const auto& member : topo.members(realm)) {
    if (accept(topo.node(member).role))
      return topo.nap_of(member, realm);
  }
  return nullptr;
}

std::optional<Internetwork::Hop>
Internetwork::hop_toward(const NodeId& node, const Locator& address) const
{
  const auto& topo = topology();
  auto targets = topo.naps_with_address(address);
  for (const auto* t : targets) {
    if (t->node == node)
      return Hop{t, address, t->realm, true};
  }
  for (const auto* t : targets) {
    if (const auto* mine = topo.nap_of(node, t->realm))
      return Hop{mine, address, t->realm, false};
  }
  for (const auto* t : targets) {
    if (auto h = topo.next_realm_hop(node, t->realm)) {
      const auto* via = topo.nap_of(h->name_router, h->via_realm);
      return Hop{topo.nap_of(node, h->via_realm), via->address, h->via_realm, false};
    }
  }
  return std::nullopt;
}

std::optional<RealmId>
Internetwork::topic_realm(const std::string& topic) const
{
  std::optional<RealmId> best;
  std::size_t best_len = 0;
  for (const auto& r : m_routes) {
    if (!fcn_prefix_matches(r.prefix, topic))
      continue;
    auto len = fcn_segments(r.prefix).size();
    if (!best || len > best_len || (len == best_len && r.realm < *best)) {
      best = r.realm;
      best_len = len;
    }
  }
  return best;
}

void
Internetwork::send_or_drop(const Where& at, const Hop& hop, const WireMessage& m, EventKind tx)
{
  WireMessage out = m;
  if (tx == EventKind::FWD) {
    if (m.hop_count >= kMaxHops) {
      fail(at, m.msg_id, m.target_name, "hop-limit", Errc::Unreachable);
      return;
    }
    ++out.hop_count;
  }
  try {
    m_fabric.send(hop.from->id, hop.to, out, m_fabric.now(), tx);
  }
  catch (const Error& e) {
    auto reason = e.code() == Errc::RealmViolation ? "realm-violation" : "no-route";
    fail(at, m.msg_id, m.target_name, reason, Errc::Unreachable);
  }
}

// ---------------------------------------------------------------------------
// timed actions

OpHandle
Internetwork::pull(const Name& caller, const Name& target, Tick t)
{
  auto h = new_op(OpKind::pull, caller, t);
  m_ops[h].target = target;
  m_fabric.schedule(t, [this, h] { start_op(h); });
  return h;
}

OpHandle
Internetwork::push(const Name& caller, const Name& target, std::string body, Tick t)
{
  auto h = new_op(OpKind::push, caller, t);
  m_ops[h].target = target;
  m_pending[h].body = std::move(body);
  m_fabric.schedule(t, [this, h] { start_op(h); });
  return h;
}

OpHandle
Internetwork::subscribe(const Name& caller, std::string topic, Tick t)
{
  auto h = new_op(OpKind::subscribe, caller, t);
  m_ops[h].topic = std::move(topic);
  m_fabric.schedule(t, [this, h] { start_op(h); });
  return h;
}

OpHandle
Internetwork::publish(const Name& caller, std::string topic, std::string body, Tick t)
{
  auto h = new_op(OpKind::publish, caller, t);
  m_ops[h].topic = std::move(topic);
  m_pending[h].body = std::move(body);
  m_fabric.schedule(t, [this, h] { start_op(h); });
  return h;
}

OpHandle
Internetwork::search(const Name& caller, OrsQuery q, Tick t, bool then_pull)
{
  auto h = new_op(OpKind::search, caller, t);
  m_pending[h].query = std::move(q);
  m_pending[h].then_pull = then_pull;
  m_fabric.schedule(t, [this, h] { start_op(h); });
  return h;
}

namespace {

const NodeId kAdmin{"scenario"};
const RealmId kNoRealm{"-"};

} // namespace

void
Internetwork::bind_at(const Name& name, const NapId& nap, Tick t)
{
  m_fabric.schedule(t, [this, name, nap] {
    try {
      m_fabric.bind(name, nap, m_fabric.now());
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, name, e.what());
    }
  });
}

void
Internetwork::unbind_at(const Name& name, const NapId& nap, Tick t)
{
  m_fabric.schedule(t, [this, name, nap] {
    try {
      m_fabric.unbind(name, nap, m_fabric.now());
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, name, e.what());
    }
  });
}

void
Internetwork::partition_at(const RealmId& realm, Tick t)
{
  m_fabric.schedule(t, [this, realm] {
    try {
      m_fabric.partition(realm, m_fabric.now());
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, Name(), e.what());
    }
  });
}

void
Internetwork::heal_at(const RealmId& realm, Tick t)
{
  m_fabric.schedule(t, [this, realm] {
    try {
      m_fabric.heal(realm, m_fabric.now());
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, Name(), e.what());
    }
  });
}

void
Internetwork::register_at(const NrsRecord& r, Tick t)
{
  m_fabric.schedule(t, [this, r] {
    try {
      m_nrs.register_record(r, Role::administrator);
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, r.prefix, e.what());
    }
  });
}

void
Internetwork::withdraw_at(const Name& prefix, const Locator& next_hop, Tick t)
{
  m_fabric.schedule(t, [this, prefix, next_hop] {
    try {
      m_nrs.withdraw(prefix, next_hop, Role::administrator);
    }
    catch (const Error& e) {
      m_fabric.emit(EventKind::DROP, kAdmin, kNoRealm, 0, prefix, e.what());
    }
  });
}

const Trace&
Internetwork::run(Tick until)
{
  return m_fabric.run(until, *this);
}

// ---------------------------------------------------------------------------
// client side

void
Internetwork::start_op(OpHandle h)
{
  switch (m_ops[h].kind) {
    case OpKind::pull:
    case OpKind::push:
      resolve_for(h);
      break;
    case OpKind::subscribe:
    case OpKind::publish:
      dispatch_topic(h);
      break;
    case OpKind::search:
      start_search(h);
      break;
  }
}

void
Internetwork::start_search(OpHandle h)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  if (nap == nullptr) {
    fail_op(h, {kAdmin, kNoRealm}, op.caller, "caller-not-bound", Errc::NotBound);
    return;
  }
  Where at{nap->node, nap->realm};
  const auto& query = m_pending[h].query;
  auto q = m_fabric.next_msg_id();
  const auto* svc = service_node(at.realm, is_ors_role);
  if (svc == nullptr) {
    m_fabric.emit(EventKind::ORS_Q, at.node, at.realm, q, Name(), "local");
    auto result = m_ors.search(query);
    m_fabric.emit(EventKind::ORS_R, at.node, at.realm, q, Name(), "entries=" + std::to_string(result.entries.size()));
    op.found = std::move(result);
    op.searched = true;
    if (m_pending[h].then_pull && !op.found.entries.empty()) {
      op.target = op.found.entries.front().name;
      resolve_for(h);
    }
    return;
  }
  WireMessage m;
  m.msg_id = q;
  m.kind = MessageKind::ORS_QUERY;
  m.source_name = op.caller;
  m.body = serialize(query);
  m_queries[q] = h;
  try {
    m_fabric.send(nap->id, svc->address, m, m_fabric.now(), EventKind::ORS_Q);
  }
  catch (const Error&) {
    fail_op(h, at, op.caller, "no-route", Errc::Unreachable);
  }
}

void
Internetwork::resolve_for(OpHandle h)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  if (nap == nullptr) {
    fail_op(h, {kAdmin, kNoRealm}, op.caller, "caller-not-bound", Errc::NotBound);
    return;
  }
  Where at{nap->node, nap->realm};
  auto ctx = context_for(at.node, at.realm);
  auto& cache = m_caches[at.node];
  if (auto hit = cache.lookup(op.target, ctx)) {
    m_fabric.emit(EventKind::CACHE_HIT, at.node, at.realm, 0, op.target, to_text(*hit));
    on_resolved(h, *hit);
    return;
  }

  auto q = m_fabric.next_msg_id();
  const auto* replica = service_node(at.realm, is_resolver);
  if (replica == nullptr) {
    m_fabric.emit(EventKind::NRS_Q, at.node, at.realm, q, op.target, "local " + ctx.key());
    std::vector<ServiceDescriptor> sds;
    try {
      sds = m_nrs.resolve(op.target, ctx);
    }
    catch (const Error&) {
    }
    m_fabric.emit(EventKind::NRS_R, at.node, at.realm, q, op.target, sds.empty() ? "not-resolvable" : to_text(sds));
    if (!sds.empty())
      cache.insert(op.target, ctx, sds);
    on_resolved(h, sds);
    return;
  }

  WireMessage m;
  m.msg_id = q;
  m.kind = MessageKind::NRS_QUERY;
  m.target_name = op.target;
  m.source_name = op.caller;
  m.body = serialize(NrsQueryBody{op.target, ctx, nap->address});
  m_queries[q] = h;
  m_pending[h].ctx = ctx;
  try {
    m_fabric.send(nap->id, replica->address, m, m_fabric.now(), EventKind::NRS_Q);
  }
  catch (const Error&) {
    fail_op(h, at, op.target, "no-route", Errc::Unreachable);
  }
}

void
Internetwork::on_query_result(const Arrival& a)
{
  const auto& nap = topology().nap(a.nap);
  Where at{nap.node, nap.realm};
  auto it = m_queries.find(a.msg.msg_id);
  if (it == m_queries.end()) {
    fail(at, a.msg.msg_id, a.msg.target_name, "unexpected-result", Errc::Unreachable);
    return;
  }
  auto h = it->second;
  m_queries.erase(it);
  auto& op = m_ops[h];

  try {
    if (a.msg.kind == MessageKind::NRS_RESULT) {
      auto sds = parse_nrs_result(a.msg.body);
      if (!sds.empty())
        m_caches[at.node].insert(op.target, m_pending[h].ctx, sds);
      on_resolved(h, sds);
      return;
    }
    op.found = parse_ors_result(a.msg.body);
  }
  catch (const Error&) {
    fail_op(h, at, op.target, "malformed-result", Errc::Unreachable);
    return;
  }
  op.searched = true;
  if (m_pending[h].then_pull && !op.found.entries.empty()) {
    op.target = op.found.entries.front().name;
    resolve_for(h);
  }
}

void
Internetwork::on_resolved(OpHandle h, const std::vector<ServiceDescriptor>& sds)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  if (nap == nullptr) {
    fail_op(h, {kAdmin, kNoRealm}, op.caller, "caller-not-bound", Errc::NotBound);
    return;
  }
  if (sds.empty()) {
    fail_op(h, {nap->node, nap->realm}, op.target, "not-resolvable", Errc::NotResolvable);
    return;
  }
  if (op.kind == OpKind::push)
    dispatch_push(h, sds);
  else
    dispatch_pull(h, sds.front());
}

void
Internetwork::dispatch_pull(OpHandle h, const ServiceDescriptor& sd)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  Where at{nap->node, nap->realm};

  WireMessage m;
  m.msg_id = m_fabric.next_msg_id();
  m.target_name = op.target;
  m.source_name = op.caller;
  if (sd.protocol == Protocol::CCNISH_OVER_UDPISH) {
    m.kind = MessageKind::CCN_INTEREST;
    m.target_fcn = sd.fcn;
  }
  else {
    m.kind = MessageKind::HTTP_GET;
  }
  m_op_by_msg[m.msg_id] = h;

  if (topology().realm(at.realm).technology == Technology::CCNISH) {
    // an HTTP resource is named by its name-derived FCN inside the realm
    if (m.kind != MessageKind::CCN_INTEREST) {
      m.kind = MessageKind::CCN_INTEREST;
      m.target_fcn = m.target_name.to_fcn();
    }
    ccn_interest(at, m, EventKind::SEND);
    return;
  }
  auto hop = hop_toward(at.node, sd.next_hop_address);
  if (!hop || hop->self) {
    fail(at, m.msg_id, m.target_name, "no-route", Errc::Unreachable);
    return;
  }
  send_or_drop(at, *hop, m, EventKind::SEND);
}

void
Internetwork::dispatch_push(OpHandle h, const std::vector<ServiceDescriptor>& sds)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  Where at{nap->node, nap->realm};

  WireMessage m;
  m.msg_id = m_fabric.next_msg_id();
  m.kind = MessageKind::HTTP_PUSH;
  m.target_name = op.target;
  m.source_name = op.caller;
  m.body = m_pending[h].body;
  m_op_by_msg[m.msg_id] = h;

  if (topology().realm(at.realm).technology == Technology::CCNISH) {
    m.kind = MessageKind::CCN_DATA;
    m.target_fcn = m.target_name.to_fcn();
    ccn_data(at, m, EventKind::SEND);
    return;
  }

  std::set<std::pair<NapId, Locator>> sent;
  for (const auto& sd : sds) {
    auto hop = hop_toward(at.node, sd.next_hop_address);
    if (!hop || !sent.emplace(hop->from->id, hop->to).second)
      continue;
    // a binding on the caller's own node needs no wire
    if (hop->self) {
      if (m_fabric.is_bound_at(m.target_name, hop->from->id))
        deliver({at.node, hop->realm}, hop->from->id, m);
      continue;
    }
    send_or_drop(at, *hop, m, EventKind::SEND);
  }
  if (sent.empty())
    fail(at, m.msg_id, m.target_name, "no-route", Errc::Unreachable);
}

void
Internetwork::dispatch_topic(OpHandle h)
{
  auto& op = m_ops[h];
  const auto* nap = origin_nap(op.caller);
  if (nap == nullptr) {
    fail_op(h, {kAdmin, kNoRealm}, op.caller, "caller-not-bound", Errc::NotBound);
    return;
  }
  Where at{nap->node, nap->realm};

  WireMessage m;
  m.msg_id = m_fabric.next_msg_id();
  m.kind = op.kind == OpKind::subscribe ? MessageKind::SUB : MessageKind::PUB;
  m.target_fcn = op.topic;
  m.source_name = op.caller;
  m.body = m_pending[h].body;
  m_op_by_msg[m.msg_id] = h;

  auto realm = topic_realm(op.topic);
  if (!realm) {
    fail(at, m.msg_id, Name(), "no-rendezvous", Errc::NotResolvable);
    return;
  }
  if (topology().is_member(at.node, *realm)) {
    ccn_topic({at.node, *realm}, m, EventKind::SEND);
    return;
  }
  auto next = topology().next_realm_hop(at.node, *realm);
  if (!next) {
    fail(at, m.msg_id, Name(), "no-route", Errc::Unreachable);
    return;
  }
  const auto* from = topology().nap_of(at.node, next->via_realm);
  const auto* to = topology().nap_of(next->name_router, next->via_realm);
  send_or_drop({at.node, next->via_realm}, Hop{from, to->address, next->via_realm}, m, EventKind::SEND);
}

// ---------------------------------------------------------------------------
// arrivals

std::string
Internetwork::rx_detail(const Arrival& a) const
{
  try {
    if (a.msg.kind == MessageKind::NRS_RESULT) {
      auto sds = parse_nrs_result(a.msg.body);
      return sds.empty() ? "not-resolvable" : to_text(sds);
    }
    if (a.msg.kind == MessageKind::ORS_RESULT)
      return "entries=" + std::to_string(parse_ors_result(a.msg.body).entries.size());
  }
  catch (const Error&) {
    return "malformed";
  }
  return FrameHandler::rx_detail(a);
}

void
Internetwork::on_arrival(const Arrival& a)
{
  const auto& topo = topology();
  const auto& nap = topo.nap(a.nap);
  Where at{nap.node, nap.realm};
  auto role = topo.node(at.node).role;
  const auto& m = a.msg;

  switch (m.kind) {
    case MessageKind::NRS_QUERY:
      if (is_resolver(role))
        answer_nrs(a);
      else
        fail(at, m.msg_id, m.target_name, "not-a-resolver", Errc::Unreachable);
      return;
    case MessageKind::ORS_QUERY:
      if (role == NodeRole::ors)
        answer_ors(a);
      else
        fail(at, m.msg_id, m.target_name, "not-an-ors", Errc::Unreachable);
      return;
    case MessageKind::NRS_RESULT:
    case MessageKind::ORS_RESULT:
      on_query_result(a);
      return;
    default:
      break;
  }

  if (role == NodeRole::name_router) {
    router_arrival(at, a);
    return;
  }
  if (topo.realm(at.realm).technology == Technology::CCNISH) {
    ccn_arrival(at, m, EventKind::FWD);
    return;
  }
  switch (m.kind) {
    case MessageKind::HTTP_GET:
    case MessageKind::CCN_INTEREST:
      serve(at, a);
      return;
    case MessageKind::HTTP_RESP:
    case MessageKind::HTTP_PUSH:
    case MessageKind::CCN_DATA:
      deliver(at, a.nap, m);
      return;
    default:
      fail(at, m.msg_id, m.target_name, "unsupported", Errc::Unreachable);
      return;
  }
}

void
Internetwork::answer_nrs(const Arrival& a)
{
  const auto& nap = topology().nap(a.nap);
  Where at{nap.node, nap.realm};
  NrsQueryBody q;
  try {
    q = parse_nrs_query(a.msg.body);
  }
  catch (const Error&) {
    fail(at, a.msg.msg_id, a.msg.target_name, "malformed-query", Errc::Unreachable);
    return;
  }
  q.ctx.now_tick = m_fabric.now();
  std::vector<ServiceDescriptor> sds;
  try {
    sds = m_nrs.resolve(q.name, q.ctx);
  }
  catch (const Error&) {
  }
  if (topology().node(at.node).role == NodeRole::dns)
    std::erase_if(sds, [] (const ServiceDescriptor& sd) { return !sd.is_plain(); });

  WireMessage reply;
  reply.msg_id = a.msg.msg_id;
  reply.kind = MessageKind::NRS_RESULT;
  reply.target_name = a.msg.source_name;
  reply.source_name = q.name;
  reply.body = serialize(sds);
  send_or_drop(at, Hop{&nap, q.reply_to.empty() ? a.from : q.reply_to, at.realm}, reply, EventKind::SEND);
}

void
Internetwork::answer_ors(const Arrival& a)
{
  const auto& nap = topology().nap(a.nap);
  Where at{nap.node, nap.realm};
  OrsResult result;
  try {
    result = m_ors.search(parse_ors_query(a.msg.body));
  }
  catch (const Error&) {
    fail(at, a.msg.msg_id, a.msg.target_name, "malformed-query", Errc::Unreachable);
    return;
  }
  WireMessage reply;
  reply.msg_id = a.msg.msg_id;
  reply.kind = MessageKind::ORS_RESULT;
  reply.target_name = a.msg.source_name;
  reply.body = serialize(result);
  send_or_drop(at, Hop{&nap, a.from, at.realm}, reply, EventKind::SEND);
}

namespace {

bool
serves(const NamedEntity& e, const WireMessage& m)
{
  if (e.kind != EntityKind::content)
    return false;
  if (m.kind == MessageKind::HTTP_GET)
    return e.name == m.target_name;
  return !m.target_fcn.empty() && (e.fcn() == m.target_fcn || e.name.to_fcn() == m.target_fcn);
}

} // namespace

void
Internetwork::serve(const Where& at, const Arrival& a)
{
  const auto& m = a.msg;
  const NamedEntity* found = nullptr;
  for (const auto& [name, binding] : m_fabric.bindings()) {
    const auto* e = m_ors.find(name);
    if (e == nullptr || !serves(*e, m))
      continue;
    bool here = std::any_of(binding.naps.begin(), binding.naps.end(),
                            [&] (const NapId& n) { return topology().nap(n).node == at.node; });
    if (here) {
      found = e;
      break;
    }
  }
  if (found == nullptr) {
    fail(at, m.msg_id, m.target_name, "not-found", Errc::NotFound);
    return;
  }

  WireMessage reply;
  reply.msg_id = m.msg_id;
  reply.kind = m.kind == MessageKind::HTTP_GET ? MessageKind::HTTP_RESP : MessageKind::CCN_DATA;
  if (reply.kind == MessageKind::CCN_DATA)
    reply.target_fcn = m.target_fcn;
  reply.target_name = m.source_name;
  reply.source_name = found->name;
  reply.body = found->payload;
  const auto& nap = topology().nap(a.nap);
  send_or_drop(at, Hop{&nap, a.from, at.realm}, reply, EventKind::SEND);
}

// ---------------------------------------------------------------------------
// name-router

std::optional<std::vector<ServiceDescriptor>>
Internetwork::router_resolve(const Where& at, const Name& n)
{
  auto ctx = context_for(at.node, at.realm);
  auto& cache = m_caches[at.node];
  if (auto hit = cache.lookup(n, ctx)) {
    m_fabric.emit(EventKind::CACHE_HIT, at.node, at.realm, 0, n, to_text(*hit));
    return hit;
  }
  auto q = m_fabric.next_msg_id();
  m_fabric.emit(EventKind::NRS_Q, at.node, at.realm, q, n, "local " + ctx.key());
  std::vector<ServiceDescriptor> sds;
  try {
    sds = m_nrs.resolve(n, ctx);
  }
  catch (const Error&) {
    m_fabric.emit(EventKind::NRS_R, at.node, at.realm, q, n, "not-resolvable");
    return std::nullopt;
  }
  m_fabric.emit(EventKind::NRS_R, at.node, at.realm, q, n, to_text(sds));
  cache.insert(n, ctx, sds);
  return sds;
}

void
Internetwork::router_arrival(const Where& at, const Arrival& a)
{
  const auto& m = a.msg;
  if (auto op = operation_of(m.kind)) {
    auto pit = m_policies.find(at.node);
    if (pit != m_policies.end() && check_access(pit->second, m.source_name, *op) == Decision::deny) {
      fail(at, m.msg_id, m.source_name, "access-denied op=" + std::string(to_string(*op)), Errc::AccessDenied);
      return;
    }
  }

  const auto& topo = topology();
  if (topo.realm(at.realm).technology == Technology::CCNISH) {
    ccn_arrival(at, m, EventKind::FWD);
    return;
  }

  switch (m.kind) {
    case MessageKind::CCN_INTEREST: {
      // CCN carried over UDP: hand it to the attached CCN realm that routes the FCN
      for (const auto* nap : topo.naps_of(at.node)) {
        if (topo.realm(nap->realm).technology != Technology::CCNISH)
          continue;
        const auto& state = m_ccn.at({at.node, nap->realm});
        try {
          fib_lookup(state.fib, m.target_fcn);
        }
        catch (const Error&) {
          continue;
        }
        ServiceDescriptor sd;
        sd.protocol = Protocol::CCNISH_OVER_UDPISH;
        sd.fcn = m.target_fcn;
        enter_realm(at, nap->realm, m, sd);
        return;
      }
      fail(at, m.msg_id, m.target_name, "no-fib-match", Errc::Unreachable);
      return;
    }
    case MessageKind::HTTP_GET:
      router_get(at, m);
      return;
    case MessageKind::HTTP_RESP:
    case MessageKind::HTTP_PUSH:
    case MessageKind::CCN_DATA:
      relay_to_name(at, m);
      return;
    case MessageKind::SUB:
    case MessageKind::PUB: {
      auto realm = topic_realm(m.target_fcn);
      if (!realm) {
        fail(at, m.msg_id, Name(), "no-rendezvous", Errc::NotResolvable);
        return;
      }
      if (topo.is_member(at.node, *realm)) {
        ccn_topic({at.node, *realm}, m, EventKind::FWD);
        return;
      }
      auto next = topo.next_realm_hop(at.node, *realm);
      if (!next) {
        fail(at, m.msg_id, Name(), "no-route", Errc::Unreachable);
        return;
      }
      const auto* from = topo.nap_of(at.node, next->via_realm);
      const auto* to = topo.nap_of(next->name_router, next->via_realm);
      send_or_drop({at.node, next->via_realm}, Hop{from, to->address, next->via_realm}, m, EventKind::FWD);
      return;
    }
    default:
      fail(at, m.msg_id, m.target_name, "unsupported", Errc::Unreachable);
      return;
  }
}

void
Internetwork::enter_realm(const Where& at, const RealmId& into, const WireMessage& m, const ServiceDescriptor& sd)
{
  auto in = protocol_of(m.kind);
  WireMessage out;
  try {
    if (!in)
      throw Error(Errc::UnsupportedPair, std::string(to_string(m.kind)));
    out = bridge(m, {*in, Protocol::CCNISH_OVER_UDPISH, at.realm, into}, sd);
  }
  catch (const Error& e) {
    fail(at, m.msg_id, m.target_name, e.code() == Errc::MissingFcn ? "missing-fcn" : "unsupported-pair",
         Errc::Unreachable);
    return;
  }
  Where inside{at.node, into};
  m_fabric.emit(EventKind::BRIDGE, inside.node, inside.realm, m.msg_id, m.target_name,
                bridge_detail(m, out, at.realm, into));
  if (out.kind == MessageKind::CCN_INTEREST)
    ccn_interest(inside, out, EventKind::FWD);
  else
    ccn_data(inside, out, EventKind::FWD);
}

void
Internetwork::router_get(const Where& at, const WireMessage& m)
{
  const auto& topo = topology();
  auto sds = router_resolve(at, m.target_name);
  if (!sds) {
    fail(at, m.msg_id, m.target_name, "not-resolvable", Errc::NotResolvable);
    return;
  }

  for (const auto& sd : *sds) {
    if (sd.protocol == Protocol::CCNISH_OVER_UDPISH) {
      for (const auto* nap : topo.naps_of(at.node)) {
        if (nap->realm == at.realm || topo.realm(nap->realm).technology != Technology::CCNISH)
          continue;
        try {
          fib_lookup(m_ccn.at({at.node, nap->realm}).fib, sd.fcn);
        }
        catch (const Error&) {
          continue;
        }
        enter_realm(at, nap->realm, m, sd);
        return;
      }
    }
    auto hop = hop_toward(at.node, sd.next_hop_address);
    if (!hop || hop->self || hop->realm == at.realm ||
        topo.realm(hop->realm).technology != Technology::IPISH)
      continue;

    WireMessage out;
    try {
      out = bridge(m, {Protocol::HTTPISH, sd.protocol, at.realm, hop->realm}, sd);
    }
    catch (const Error&) {
      continue;
    }
    m_fabric.emit(EventKind::BRIDGE, at.node, hop->realm, m.msg_id, m.target_name,
                  bridge_detail(m, out, at.realm, hop->realm));
    send_or_drop({at.node, hop->realm}, *hop, out, EventKind::FWD);
    return;
  }
  fail(at, m.msg_id, m.target_name, "unreachable", Errc::Unreachable);
}

void
Internetwork::relay_to_name(const Where& at, const WireMessage& m)
{
  const auto& topo = topology();
  auto sds = router_resolve(at, m.target_name);
  if (!sds) {
    fail(at, m.msg_id, m.target_name, "unreachable-name", Errc::Unreachable);
    return;
  }

  bool any = false;
  std::set<std::pair<RealmId, Locator>> sent;
  for (const auto& sd : *sds) {
    auto hop = hop_toward(at.node, sd.next_hop_address);
    // a copy never goes back into the realm it arrived from
    if (!hop || hop->realm == at.realm)
      continue;
    if (hop->self) {
      if (m_fabric.is_bound_at(m.target_name, hop->from->id)) {
        deliver({at.node, hop->realm}, hop->from->id, m);
        any = true;
      }
      continue;
    }
    const auto& realm = topo.realm(hop->realm);
    if (realm.technology == Technology::CCNISH) {
      if (!sent.emplace(hop->realm, Locator()).second)
        continue;
      enter_realm(at, hop->realm, m, sd);
      any = true;
      continue;
    }
    if (!sent.emplace(hop->realm, hop->to).second)
      continue;
    WireMessage out;
    try {
      out = bridge(m, {*protocol_of(m.kind), realm_protocol(realm.technology), at.realm, hop->realm}, sd);
    }
    catch (const Error&) {
      continue;
    }
    m_fabric.emit(EventKind::BRIDGE, at.node, hop->realm, m.msg_id, m.target_name,
                  bridge_detail(m, out, at.realm, hop->realm));
    send_or_drop({at.node, hop->realm}, *hop, out, EventKind::FWD);
    any = true;
  }
  if (!any)
    fail(at, m.msg_id, m.target_name, "unreachable-name", Errc::Unreachable);
}

// ---------------------------------------------------------------------------
// CCN realm members

void
Internetwork::ccn_arrival(const Where& at, const WireMessage& m, EventKind tx)
{
  switch (m.kind) {
    case MessageKind::CCN_INTEREST:
      ccn_interest(at, m, tx);
      return;
    case MessageKind::CCN_DATA:
      ccn_data(at, m, tx);
      return;
    case MessageKind::SUB:
    case MessageKind::PUB:
      ccn_topic(at, m, tx);
      return;
    default:
      fail(at, m.msg_id, m.target_name, "unsupported-in-ccn-realm", Errc::Unreachable);
      return;
  }
}

void
Internetwork::ccn_interest(const Where& at, const WireMessage& m, EventKind tx)
{
  const auto& topo = topology();
  const auto* nap = topo.nap_of(at.node, at.realm);
  auto& state = m_ccn.at({at.node, at.realm});
  auto d = forward_interest(state, m, nap->address);

  switch (d.action) {
    case InterestDecision::Action::cs_hit: {
      m_fabric.emit(EventKind::CS_HIT, at.node, at.realm, m.msg_id, m.target_name, "fcn=" + m.target_fcn);
      WireMessage data;
      data.msg_id = m.msg_id;
      data.kind = MessageKind::CCN_DATA;
      data.target_fcn = m.target_fcn;
      data.target_name = m.source_name;
      data.source_name = m.target_name;
      data.body = d.body;
      ccn_data(at, data, EventKind::SEND);
      return;
    }
    case InterestDecision::Action::forward:
      send_or_drop(at, Hop{nap, d.next_hop, at.realm}, m, tx);
      return;
    case InterestDecision::Action::local: {
      const NamedEntity* found = nullptr;
      for (const auto& [name, binding] : m_fabric.bindings()) {
        const auto* e = m_ors.find(name);
        if (e != nullptr && serves(*e, m) &&
            std::any_of(binding.naps.begin(), binding.naps.end(),
                        [&] (const NapId& n) { return topo.nap(n).node == at.node; })) {
          found = e;
          break;
        }
      }
      if (found == nullptr) {
        fail(at, m.msg_id, m.target_name, "not-found", Errc::NotFound);
        return;
      }
      WireMessage data;
      data.msg_id = m.msg_id;
      data.kind = MessageKind::CCN_DATA;
      data.target_fcn = m.target_fcn;
      data.target_name = m.source_name;
      data.source_name = found->name;
      data.body = found->payload;
      ccn_data(at, data, EventKind::SEND);
      return;
    }
    case InterestDecision::Action::drop:
      if (d.drop_reason == Errc::NoFibMatch && originated_in(m, at.realm)) {
        // not routed in this realm: head for the egress, which resolves the name
        if (auto egress = topo.egress(at.realm); egress && *egress == at.node) {
          egress_interest(at, m);
          return;
        }
        else if (egress) {
          if (auto path = topo.shortest_path(at.realm, at.node, *egress)) {
            send_or_drop(at, Hop{nap, topo.nap_of(path->nodes.at(1), at.realm)->address, at.realm}, m, tx);
            return;
          }
        }
      }
      fail(at, m.msg_id, m.target_name, d.drop_reason == Errc::HopLimitExceeded ? "hop-limit" : "no-fib-match",
           Errc::Unreachable);
      return;
  }
}

bool
Internetwork::originated_in(const WireMessage& m, const RealmId& realm) const
{
  const auto* b = m_fabric.binding(m.source_name);
  return b != nullptr && std::any_of(b->naps.begin(), b->naps.end(),
                                     [&] (const NapId& n) { return topology().nap(n).realm == realm; });
}

void
Internetwork::egress_interest(const Where& at, const WireMessage& m)
{
  const auto& topo = topology();
  auto sds = router_resolve(at, m.target_name);
  if (!sds) {
    fail(at, m.msg_id, m.target_name, "not-resolvable", Errc::NotResolvable);
    return;
  }
  for (const auto& sd : *sds) {
    auto hop = hop_toward(at.node, sd.next_hop_address);
    if (!hop || hop->self || hop->realm == at.realm || topo.realm(hop->realm).technology != Technology::IPISH)
      continue;
    WireMessage out;
    try {
      out = bridge(m, {Protocol::CCNISH_OVER_UDPISH, Protocol::HTTPISH, at.realm, hop->realm}, sd);
    }
    catch (const Error&) {
      continue;
    }
    m_fabric.emit(EventKind::BRIDGE, at.node, hop->realm, m.msg_id, m.target_name,
                  bridge_detail(m, out, at.realm, hop->realm));
    send_or_drop({at.node, hop->realm}, *hop, out, EventKind::FWD);
    return;
  }
  fail(at, m.msg_id, m.target_name, "no-fib-match", Errc::Unreachable);
}

void
Internetwork::ccn_data(const Where& at, const WireMessage& m, EventKind tx)
{
  const auto& topo = topology();
  const auto* nap = topo.nap_of(at.node, at.realm);
  auto& state = m_ccn.at({at.node, at.realm});

  // on-path caching of content (not of publications)
  if (tx == EventKind::FWD && topo.node(at.node).role != NodeRole::host && !m.target_fcn.empty()) {
    const auto* src = m_ors.find(m.source_name);
    if (src != nullptr && src->kind == EntityKind::content)
      state.cs.insert(m.target_fcn, m.body, m_fabric.now());
  }

  Locator toward;
  bool has_egress = false;
  if (auto egress = topo.egress(at.realm)) {
    if (*egress == at.node) {
      has_egress = true;
    }
    else if (auto path = topo.shortest_path(at.realm, at.node, *egress)) {
      has_egress = true;
      toward = topo.nap_of(path->nodes.at(1), at.realm)->address;
    }
  }

  auto d = return_data(state, m, nap->address, toward, has_egress);
  switch (d.action) {
    case DataDecision::Action::deliver_local:
      deliver(at, nap->id, m);
      return;
    case DataDecision::Action::forward:
      send_or_drop(at, Hop{nap, d.next_hop, at.realm}, m, tx);
      return;
    case DataDecision::Action::egress:
      relay_to_name(at, m);
      return;
    case DataDecision::Action::drop:
      fail(at, m.msg_id, m.target_name, m.hop_count >= kMaxHops ? "hop-limit" : "unreachable-name",
           Errc::Unreachable);
      return;
  }
}

void
Internetwork::ccn_topic(const Where& at, const WireMessage& m, EventKind tx)
{
  const auto* nap = topology().nap_of(at.node, at.realm);
  const auto& state = m_ccn.at({at.node, at.realm});
  Locator next;
  try {
    next = fib_lookup(state.fib, m.target_fcn);
  }
  catch (const Error&) {
    fail(at, m.msg_id, Name(), "no-fib-match", Errc::Unreachable);
    return;
  }
  if (next == nap->address)
    rendezvous(at, m);
  else
    send_or_drop(at, Hop{nap, next, at.realm}, m, tx);
}

void
Internetwork::rendezvous(const Where& at, const WireMessage& m)
{
  auto& subscribers = m_subscriptions[at.node][m.target_fcn];
  auto* op = op_of(m.msg_id);
  if (op != nullptr)
    op->acknowledged = true;

  if (m.kind == MessageKind::SUB) {
    subscribers.insert(m.source_name);
    return;
  }

  auto it = m_op_by_msg.find(m.msg_id);
  for (const auto& s : std::set<Name>(subscribers)) {
    WireMessage data;
    data.msg_id = m_fabric.next_msg_id();
    data.kind = MessageKind::CCN_DATA;
    data.target_fcn = m.target_fcn;
    data.target_name = s;
    data.source_name = m.source_name;
    data.body = m.body;
    if (it != m_op_by_msg.end())
      m_op_by_msg[data.msg_id] = it->second;
    ccn_data(at, data, EventKind::SEND);
  }
}

} // namespace internames
