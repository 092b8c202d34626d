#include "internames/fabric.hpp"
#include "internames/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace internames {

std::string_view
to_string(NodeRole r)
{
  switch (r) {
    case NodeRole::host: return "host";
    case NodeRole::router: return "router";
    case NodeRole::name_router: return "name_router";
    case NodeRole::nrs: return "nrs";
    case NodeRole::dns: return "dns";
    case NodeRole::ors: return "ors";
  }
  return "host";
}

NodeRole
parse_node_role(std::string_view s)
{
  for (auto r : {NodeRole::host, NodeRole::router, NodeRole::name_router, NodeRole::nrs, NodeRole::dns,
                 NodeRole::ors}) {
    if (to_string(r) == s)
      return r;
  }
  throw Error(Errc::ParseError, "unknown node role '" + std::string(s) + "'");
}

bool
is_id_token(std::string_view s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [] (char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
           c == '_' || c == '-' || c == ':';
  });
}

namespace {

void
require_token(std::string_view what, const std::string& s)
{
  if (!is_id_token(s))
    throw Error(Errc::ValidationError, "bad " + std::string(what) + " '" + s + "'");
}

} // namespace

// ---------------------------------------------------------------------------
// Topology

void
Topology::add_realm(NetworkRealm realm)
{
  require_token("realm id", realm.id.str());
  if (m_realms.count(realm.id))
    throw Error(Errc::ValidationError, "duplicate network-realm " + realm.id.str());
  // a parent has to exist already, so nesting cannot form a cycle
  if (realm.parent && !m_realms.count(*realm.parent))
    throw Error(Errc::UnknownRealm, "parent realm " + realm.parent->str() + " of " + realm.id.str());
  m_realms.emplace(realm.id, std::move(realm));
}

void
Topology::add_node(NodeInfo node)
{
  require_token("node id", node.id.str());
  if (m_nodes.count(node.id))
    throw Error(Errc::ValidationError, "duplicate node " + node.id.str());
  m_nodes.emplace(node.id, std::move(node));
}

void
Topology::set_role(const NodeId& node, NodeRole role)
{
  auto it = m_nodes.find(node);
  if (it == m_nodes.end())
    throw Error(Errc::ValidationError, "unknown node " + node.str());
  it->second.role = role;
}

void
Topology::add_nap(NetworkAttachmentPoint nap)
{
  require_token("NAP id", nap.id.str());
  require_token("address", nap.address.str());
  if (m_naps.count(nap.id))
    throw Error(Errc::ValidationError, "duplicate NAP " + nap.id.str());
  if (!m_nodes.count(nap.node))
    throw Error(Errc::ValidationError, "NAP " + nap.id.str() + " on unknown node " + nap.node.str());
  if (!m_realms.count(nap.realm))
    throw Error(Errc::UnknownRealm, "NAP " + nap.id.str() + " in unknown realm " + nap.realm.str());
  if (nap_at(nap.realm, nap.address))
    throw Error(Errc::ValidationError, "address " + nap.address.str() + " already used in " + nap.realm.str());
  m_naps.emplace(nap.id, std::move(nap));
}

void
Topology::add_link(Link link)
{
  if (!m_realms.count(link.realm))
    throw Error(Errc::UnknownRealm, "link in unknown realm " + link.realm.str());
  if (link.a == link.b)
    throw Error(Errc::ValidationError, "self link at " + link.a.str());
  if (!nap_of(link.a, link.realm) || !nap_of(link.b, link.realm))
    throw Error(Errc::ValidationError, "link " + link.a.str() + "-" + link.b.str() + " endpoints need NAPs in " +
                                         link.realm.str());
  if (link.delay < 1)
    throw Error(Errc::ValidationError, "link delay must be >= 1 tick");
  m_links.push_back(std::move(link));
}

const NetworkRealm&
Topology::realm(const RealmId& id) const
{
  auto it = m_realms.find(id);
  if (it == m_realms.end())
    throw Error(Errc::UnknownRealm, id.str());
  return it->second;
}

const NodeInfo&
Topology::node(const NodeId& id) const
{
  auto it = m_nodes.find(id);
  if (it == m_nodes.end())
    throw Error(Errc::ValidationError, "unknown node " + id.str());
  return it->second;
}

const NetworkAttachmentPoint&
Topology::nap(const NapId& id) const
{
  auto it = m_naps.find(id);
  if (it == m_naps.end())
    throw Error(Errc::UnknownNap, id.str());
  return it->second;
}

const NetworkAttachmentPoint*
Topology::nap_at(const RealmId& realm, const Locator& address) const
{
  for (const auto& [id, nap] : m_naps) {
    if (nap.realm == realm && nap.address == address)
      return &nap;
  }
  return nullptr;
}

std::vector<const NetworkAttachmentPoint*>
Topology::naps_with_address(const Locator& address) const
{
  std::vector<const NetworkAttachmentPoint*> out;
  for (const auto& [id, nap] : m_naps) {
    if (nap.address == address)
      out.push_back(&nap);
  }
  std::stable_sort(out.begin(), out.end(), [] (auto* a, auto* b) { return a->realm < b->realm; });
  return out;
}

const NetworkAttachmentPoint*
Topology::nap_of(const NodeId& node, const RealmId& realm) const
{
  for (const auto& [id, nap] : m_naps) {
    if (nap.node == node && nap.realm == realm)
      return &nap;
  }
  return nullptr;
}

std::vector<const NetworkAttachmentPoint*>
Topology::naps_of(const NodeId& node) const
{
  std::vector<const NetworkAttachmentPoint*> out;
  for (const auto& [id, nap] : m_naps) {
    if (nap.node == node)
      out.push_back(&nap);
  }
  return out;
}

std::vector<NodeId>
Topology::members(const RealmId& realm) const
{
  std::set<NodeId> out;
  for (const auto& [id, nap] : m_naps) {
    if (nap.realm == realm)
      out.insert(nap.node);
  }
  return {out.begin(), out.end()};
}

bool
Topology::is_member(const NodeId& node, const RealmId& realm) const
{
  return nap_of(node, realm) != nullptr;
}

std::optional<NodeId>
Topology::egress(const RealmId& realm_id) const
{
  const auto& r = realm(realm_id);
  if (r.egress)
    return r.egress;
  for (const auto& member : members(realm_id)) {
    if (node(member).role == NodeRole::name_router)
      return member;
  }
  return std::nullopt;
}

std::vector<const Link*>
Topology::links_in(const RealmId& realm) const
{
  std::vector<const Link*> out;
  for (const auto& l : m_links) {
    if (l.realm == realm)
      out.push_back(&l);
  }
  return out;
}

std::optional<Topology::Path>
Topology::shortest_path(const RealmId& realm, const NodeId& from, const NodeId& to) const
{
  if (from == to)
    return Path{{from}, {}, 0};

  std::map<NodeId, std::vector<std::pair<NodeId, const Link*>>> adj;
  for (const auto* l : links_in(realm)) {
    adj[l->a].emplace_back(l->b, l);
    adj[l->b].emplace_back(l->a, l);
  }

  constexpr Tick kInf = std::numeric_limits<Tick>::max();
  std::map<NodeId, Tick> dist;
  std::map<NodeId, std::pair<NodeId, const Link*>> pred;
  std::set<std::pair<Tick, NodeId>> frontier;
  dist[from] = 0;
  frontier.emplace(0, from);
  std::set<NodeId> done;

  while (!frontier.empty()) {
    auto [d, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    if (!done.insert(u).second)
      continue;
    for (const auto& [v, link] : adj[u]) {
      auto nd = d + link->delay;
      auto it = dist.find(v);
      Tick old = it == dist.end() ? kInf : it->second;
      bool better = nd < old || (nd == old && !done.count(v) && u < pred.at(v).first);
      if (!better)
        continue;
      if (it != dist.end())
        frontier.erase({old, v});
      dist[v] = nd;
      pred[v] = {u, link};
      frontier.emplace(nd, v);
    }
  }

  if (!dist.count(to))
    return std::nullopt;
  Path p;
  p.delay = dist[to];
  for (NodeId cur = to; cur != from; cur = pred.at(cur).first) {
    p.nodes.push_back(cur);
    p.links.push_back(pred.at(cur).second);
  }
  p.nodes.push_back(from);
  std::reverse(p.nodes.begin(), p.nodes.end());
  std::reverse(p.links.begin(), p.links.end());
  return p;
}

std::optional<Topology::RealmHop>
Topology::next_realm_hop(const NodeId& from, const RealmId& target) const
{
  // multi-source BFS over the realm graph; edges are name-routers attached to both realms
  std::map<RealmId, std::vector<std::pair<NodeId, RealmId>>> edges;
  for (const auto& [nid, info] : m_nodes) {
    if (info.role != NodeRole::name_router || nid == from)
      continue;
    auto attached = naps_of(nid);
    for (const auto* a : attached) {
      for (const auto* b : attached) {
        if (a->realm != b->realm)
          edges[a->realm].emplace_back(nid, b->realm);
      }
    }
  }

  std::map<RealmId, RealmHop> first_hop;
  std::deque<RealmId> queue;
  std::set<RealmId> seen;
  for (const auto* nap : naps_of(from)) {
    if (seen.insert(nap->realm).second)
      queue.push_back(nap->realm);
  }
  std::sort(queue.begin(), queue.end());
  if (seen.count(target))
    return std::nullopt;

  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    auto& out = edges[cur];
    std::sort(out.begin(), out.end());
    for (const auto& [nr, next] : out) {
      if (!seen.insert(next).second)
        continue;
      first_hop[next] = first_hop.count(cur) ? first_hop[cur] : RealmHop{nr, cur};
      if (next == target)
        return first_hop[next];
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fabric

std::string
FrameHandler::rx_detail(const Arrival& a) const
{
  return "kind=" + std::string(to_string(a.msg.kind)) + " from=" + a.from.str() +
         " hops=" + std::to_string(a.msg.hop_count);
}

Fabric::Fabric(Topology topology)
  : m_topology(std::move(topology))
{
}

void
Fabric::emit(EventKind e, const NodeId& node, const RealmId& realm, MsgId msg, const Name& name, std::string detail)
{
  m_trace.append({m_now, node.str(), realm.str(), e, msg, name_or_dash(name), std::move(detail)});
}

MsgId
Fabric::send(const NapId& from, const Locator& to, const WireMessage& m, Tick t, EventKind tx)
{
  const auto& src = m_topology.nap(from);
  const auto& realm = m_topology.realm(src.realm);
  const auto* dst = m_topology.nap_at(src.realm, to);
  if (dst == nullptr) {
    if (!m_topology.naps_with_address(to).empty())
      throw Error(Errc::RealmViolation, to.str() + " is not in realm " + src.realm.str());
    throw Error(Errc::NoRoute, "no address " + to.str() + " in " + src.realm.str());
  }
  if (dst->node == src.node)
    throw Error(Errc::NoRoute, "loopback send at " + src.node.str());

  auto path = m_topology.shortest_path(src.realm, src.node, dst->node);
  if (!path)
    throw Error(Errc::NoRoute, src.node.str() + " -> " + dst->node.str() + " in " + src.realm.str());

  std::optional<Topology::Path> outer;
  const NetworkAttachmentPoint* outer_dst = nullptr;
  if (realm.parent) {
    outer = m_topology.shortest_path(*realm.parent, src.node, dst->node);
    outer_dst = m_topology.nap_of(dst->node, *realm.parent);
    if (!outer || outer_dst == nullptr)
      throw Error(Errc::NoRoute, "no carrier path in parent realm " + realm.parent->str());
  }

  auto frame = encode(m);
  auto transmit = [this, src, dst = *dst, path = *path, outer, outer_dst, frame, msg = m, tx,
                   parent = realm.parent] {
    emit(tx, src.node, src.realm, msg.msg_id, msg.target_name,
         "kind=" + std::string(to_string(msg.kind)) + " to=" + dst.address.str() +
           " hops=" + std::to_string(msg.hop_count));

    bool severed = std::any_of(path.links.begin(), path.links.end(), [this] (auto* l) { return is_severed(*l); });
    Tick delay = path.delay;
    MsgId outer_id = 0;
    std::string encap;
    if (outer) {
      outer_id = next_msg_id();
      encap = "encap=" + std::to_string(msg.msg_id) + " realm=" + src.realm.str();
      emit(EventKind::SEND, src.node, *parent, outer_id, Name(), encap + " to=" + outer_dst->address.str());
      severed = severed ||
                std::any_of(outer->links.begin(), outer->links.end(), [this] (auto* l) { return is_severed(*l); });
      delay = outer->delay;
    }

    if (severed) {
      if (outer)
        emit(EventKind::DROP, src.node, *parent, outer_id, Name(), "partitioned");
      emit(EventKind::DROP, src.node, src.realm, msg.msg_id, msg.target_name, "partitioned");
      return;
    }

    schedule(m_now + delay, [this, dst, src, frame, outer_id, encap, parent, outer_dst] {
      if (outer_id != 0)
        emit(EventKind::RECV, dst.node, *parent, outer_id, Name(), encap);
      deliver(dst.id, src.address, frame);
    });
  };

  if (t > m_now)
    schedule(t, std::move(transmit));
  else
    transmit();
  return m.msg_id;
}

void
Fabric::deliver(const NapId& to, Locator from, const Bytes& frame)
{
  const auto& nap = m_topology.nap(to);
  Arrival a;
  a.nap = to;
  a.from = std::move(from);
  try {
    a.msg = decode(frame);
  }
  catch (const Error&) {
    emit(EventKind::DROP, nap.node, nap.realm, 0, Name(), "malformed");
    return;
  }

  EventKind rx = EventKind::RECV;
  if (a.msg.kind == MessageKind::NRS_RESULT)
    rx = EventKind::NRS_R;
  else if (a.msg.kind == MessageKind::ORS_RESULT)
    rx = EventKind::ORS_R;
  emit(rx, nap.node, nap.realm, a.msg.msg_id, a.msg.target_name, m_handler->rx_detail(a));
  m_handler->on_arrival(a);
}

void
Fabric::bind(const Name& name, const NapId& nap_id, Tick t)
{
  const auto& nap = m_topology.nap(nap_id);
  auto [it, fresh] = m_bindings.try_emplace(name, Binding{name, {}, t});
  if (!it->second.naps.insert(nap_id).second)
    return;
  if (fresh)
    it->second.since_tick = t;
  auto saved = m_now;
  m_now = std::max(m_now, t);
  emit(EventKind::REBIND, nap.node, nap.realm, 0, name, "bind nap=" + nap_id.str() + " addr=" + nap.address.str());
  m_now = saved;
  if (m_binding_observer)
    m_binding_observer(name, nap, true);
}

void
Fabric::unbind(const Name& name, const NapId& nap_id, Tick t)
{
  auto it = m_bindings.find(name);
  if (it == m_bindings.end() || it->second.naps.erase(nap_id) == 0)
    throw Error(Errc::NotBound, name.to_uri() + " at " + nap_id.str());
  if (it->second.naps.empty())
    m_bindings.erase(it);
  const auto& nap = m_topology.nap(nap_id);
  auto saved = m_now;
  m_now = std::max(m_now, t);
  emit(EventKind::REBIND, nap.node, nap.realm, 0, name, "unbind nap=" + nap_id.str() + " addr=" + nap.address.str());
  m_now = saved;
  if (m_binding_observer)
    m_binding_observer(name, nap, false);
}

const Binding*
Fabric::binding(const Name& name) const
{
  auto it = m_bindings.find(name);
  return it == m_bindings.end() ? nullptr : &it->second;
}

bool
Fabric::is_bound_at(const Name& name, const NapId& nap) const
{
  const auto* b = binding(name);
  return b != nullptr && b->naps.count(nap) > 0;
}

void
Fabric::partition(const RealmId& realm, Tick)
{
  m_topology.realm(realm);
  m_partitioned.insert(realm);
}

void
Fabric::heal(const RealmId& realm, Tick)
{
  m_topology.realm(realm);
  m_partitioned.erase(realm);
}

bool
Fabric::in_disaster(const NodeId& node) const
{
  return std::any_of(m_partitioned.begin(), m_partitioned.end(),
                     [&] (const RealmId& r) { return m_topology.is_member(node, r); });
}

bool
Fabric::is_severed(const Link& link) const
{
  return std::any_of(m_partitioned.begin(), m_partitioned.end(), [&] (const RealmId& r) {
    return m_topology.is_member(link.a, r) != m_topology.is_member(link.b, r);
  });
}

void
Fabric::schedule(Tick at, std::function<void()> action)
{
  m_queue.push({std::max(at, m_now), ++m_seq, std::move(action)});
}

const Trace&
Fabric::run(Tick until, FrameHandler& handler)
{
  m_handler = &handler;
  bool ran = false;
  while (!m_queue.empty() && m_queue.top().tick <= until) {
    auto next = m_queue.top();
    m_queue.pop();
    if (ran && next.tick != m_now && m_tick_observer)
      m_tick_observer(m_now);
    m_now = next.tick;
    ran = true;
    next.work();
  }
  if (ran && m_tick_observer)
    m_tick_observer(m_now);
  m_handler = nullptr;
  return m_trace;
}

} // namespace internames
