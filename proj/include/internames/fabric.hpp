#ifndef INTERNAMES_FABRIC_HPP
#define INTERNAMES_FABRIC_HPP

#include "internames/ids.hpp"
#include "internames/name.hpp"
#include "internames/nrs.hpp"
#include "internames/trace.hpp"
#include "internames/wire.hpp"

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace internames {

enum class NodeRole { host, router, name_router, nrs, dns, ors };

std::string_view to_string(NodeRole r);
NodeRole parse_node_role(std::string_view s);

/// An NRS replica, either the full NRS or a DNS-compatible one.
inline bool
is_resolver(NodeRole r)
{
  return r == NodeRole::nrs || r == NodeRole::dns;
}

struct NetworkRealm
{
  RealmId id;
  Technology technology = Technology::IPISH;
  /// set for nested (overlay) realms
  std::optional<RealmId> parent;
  /// name-router that resolves return traffic; lowest-id member name-router when unset
  std::optional<NodeId> egress;

  bool operator==(const NetworkRealm&) const = default;
};

struct NodeInfo
{
  NodeId id;
  NodeRole role = NodeRole::host;

  bool operator==(const NodeInfo&) const = default;
};

struct NetworkAttachmentPoint
{
  NapId id;
  NodeId node;
  RealmId realm;
  Locator address;

  bool operator==(const NetworkAttachmentPoint&) const = default;
};

struct Link
{
  RealmId realm;
  NodeId a;
  NodeId b;
  Tick delay = 1;

  bool operator==(const Link&) const = default;
};

struct Binding
{
  Name entity_name;
  std::set<NapId> naps;
  Tick since_tick = 0;
};

bool
is_id_token(std::string_view s);

/** \brief static structure of the internetwork: realms, nodes, NAPs and links
 */
class Topology
{
public:
  /// \throw Error(ValidationError), Error(UnknownRealm)
  void add_realm(NetworkRealm realm);
  void add_node(NodeInfo node);
  void add_nap(NetworkAttachmentPoint nap);
  void add_link(Link link);
  void set_role(const NodeId& node, NodeRole role);

  /// \throw Error(UnknownRealm)
  const NetworkRealm& realm(const RealmId& id) const;
  /// \throw Error(ValidationError)
  const NodeInfo& node(const NodeId& id) const;
  /// \throw Error(UnknownNap)
  const NetworkAttachmentPoint& nap(const NapId& id) const;

  bool has_realm(const RealmId& id) const { return m_realms.count(id) > 0; }
  bool has_node(const NodeId& id) const { return m_nodes.count(id) > 0; }
  bool has_nap(const NapId& id) const { return m_naps.count(id) > 0; }

  const NetworkAttachmentPoint*
  nap_at(const RealmId& realm, const Locator& address) const;

  /// Every NAP holding this address, ordered by realm id.
  std::vector<const NetworkAttachmentPoint*>
  naps_with_address(const Locator& address) const;

  /// Lowest-id NAP of node in realm.
  const NetworkAttachmentPoint*
  nap_of(const NodeId& node, const RealmId& realm) const;

  std::vector<const NetworkAttachmentPoint*>
  naps_of(const NodeId& node) const;

  std::vector<NodeId>
  members(const RealmId& realm) const;

  bool
  is_member(const NodeId& node, const RealmId& realm) const;

  std::optional<NodeId>
  egress(const RealmId& realm) const;

  std::vector<const Link*>
  links_in(const RealmId& realm) const;

  struct Path
  {
    std::vector<NodeId> nodes; // from .. to
    std::vector<const Link*> links;
    Tick delay = 0;
  };

  /// Minimum-delay path inside one realm; ties prefer the smaller predecessor node id.
  std::optional<Path>
  shortest_path(const RealmId& realm, const NodeId& from, const NodeId& to) const;

  /// First step toward a realm the node is not attached to: hand the message
  /// to `name_router` at its address in `via_realm`.
  struct RealmHop
  {
    NodeId name_router;
    RealmId via_realm;
  };

  std::optional<RealmHop>
  next_realm_hop(const NodeId& from, const RealmId& target) const;

  const std::map<RealmId, NetworkRealm>& realms() const noexcept { return m_realms; }
  const std::map<NodeId, NodeInfo>& nodes() const noexcept { return m_nodes; }
  const std::map<NapId, NetworkAttachmentPoint>& naps() const noexcept { return m_naps; }
  const std::vector<Link>& links() const noexcept { return m_links; }

private:
  std::map<RealmId, NetworkRealm> m_realms;
  std::map<NodeId, NodeInfo> m_nodes;
  std::map<NapId, NetworkAttachmentPoint> m_naps;
  std::vector<Link> m_links;
};

struct Arrival
{
  NapId nap;
  Locator from;
  WireMessage msg;
};

class FrameHandler
{
public:
  virtual ~FrameHandler() = default;

  /// Detail text of the receive event logged before on_arrival().
  virtual std::string
  rx_detail(const Arrival& a) const;

  virtual void
  on_arrival(const Arrival& a) = 0;
};

/** \brief the discrete-event engine and the message fabric
 *
 *  Single-threaded and deterministic: pending work is keyed by (tick, sequence).
 *  Every transmit event is matched by exactly one receive event or a DROP with
 *  detail=partitioned.
 */
class Fabric
{
public:
  explicit Fabric(Topology topology);

  const Topology&
  topology() const noexcept
  {
    return m_topology;
  }

  Topology&
  topology() noexcept
  {
    return m_topology;
  }

  Tick
  now() const noexcept
  {
    return m_now;
  }

  MsgId
  next_msg_id() noexcept
  {
    return ++m_last_msg_id;
  }

  void
  emit(EventKind e, const NodeId& node, const RealmId& realm, MsgId msg, const Name& name, std::string detail);

  const Trace&
  trace() const noexcept
  {
    return m_trace;
  }

  /** Put m on the wire from a NAP toward an address in the same realm.
   *  \param tx the transmit event to log (SEND, FWD, ORS_Q or NRS_Q)
   *  \throw Error(NoRoute), Error(RealmViolation), Error(UnknownNap)
   */
  MsgId
  send(const NapId& from, const Locator& to, const WireMessage& m, Tick t, EventKind tx = EventKind::SEND);

  /// \throw Error(UnknownNap)
  void
  bind(const Name& name, const NapId& nap, Tick t);

  /// \throw Error(NotBound)
  void
  unbind(const Name& name, const NapId& nap, Tick t);

  const Binding*
  binding(const Name& name) const;

  bool
  is_bound_at(const Name& name, const NapId& nap) const;

  const std::map<Name, Binding>&
  bindings() const noexcept
  {
    return m_bindings;
  }

  using BindingObserver = std::function<void(const Name&, const NetworkAttachmentPoint&, bool bound)>;

  void
  set_binding_observer(BindingObserver obs)
  {
    m_binding_observer = std::move(obs);
  }

  /// \throw Error(UnknownRealm)
  void
  partition(const RealmId& realm, Tick t);

  /// \throw Error(UnknownRealm)
  void
  heal(const RealmId& realm, Tick t);

  bool
  is_partitioned(const RealmId& realm) const
  {
    return m_partitioned.count(realm) > 0;
  }

  /// Inside some partitioned realm.
  bool
  in_disaster(const NodeId& node) const;

  bool
  is_severed(const Link& link) const;

  void
  schedule(Tick at, std::function<void()> action);

  /// Execute pending work with tick <= until; returns the trace so far.
  const Trace&
  run(Tick until, FrameHandler& handler);

  bool
  idle() const noexcept
  {
    return m_queue.empty();
  }

  /// Called once per executed tick, after its last event.
  void
  set_tick_observer(std::function<void(Tick)> obs)
  {
    m_tick_observer = std::move(obs);
  }

private:
  void
  deliver(const NapId& to, Locator from, const Bytes& frame);

  struct Pending
  {
    Tick tick;
    std::uint64_t seq;
    std::function<void()> work;
  };

  struct Later
  {
    bool
    operator()(const Pending& a, const Pending& b) const
    {
      return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
    }
  };

  Topology m_topology;
  Trace m_trace;
  Tick m_now = 0;
  MsgId m_last_msg_id = 0;
  std::uint64_t m_seq = 0;
  std::priority_queue<Pending, std::vector<Pending>, Later> m_queue;
  FrameHandler* m_handler = nullptr;
  std::map<Name, Binding> m_bindings;
  std::set<RealmId> m_partitioned;
  BindingObserver m_binding_observer;
  std::function<void(Tick)> m_tick_observer;
};

} // namespace internames

#endif // INTERNAMES_FABRIC_HPP
