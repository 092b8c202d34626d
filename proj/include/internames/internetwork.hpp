#ifndef INTERNAMES_INTERNETWORK_HPP
#define INTERNAMES_INTERNETWORK_HPP

#include "internames/ccn.hpp"
#include "internames/fabric.hpp"
#include "internames/name_router.hpp"
#include "internames/nrs.hpp"
#include "internames/ors.hpp"

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace internames {

inline constexpr Tick kForever = std::numeric_limits<Tick>::max();

enum class OpKind { pull, push, subscribe, publish, search };

std::string_view
to_string(OpKind k);

using OpHandle = std::size_t;

/** \brief what became of one API call
 *
 *  Calls are carried out as fabric events, so an outcome fills in while the
 *  simulation runs.
 */
struct OpOutcome
{
  OpKind kind = OpKind::pull;
  Name caller;
  Name target;
  std::string topic;
  Tick issued = 0;

  /// first failure seen along any branch of the call
  std::optional<Errc> error;
  /// DELIVER events caused by the call
  std::size_t delivered = 0;
  /// distinct names that received a delivery
  std::set<Name> reached;
  /// body of the first delivery (pull)
  std::string body;
  /// subscription stored / publication reached its rendezvous
  bool acknowledged = false;
  OrsResult found;
  bool searched = false;

  bool
  succeeded() const;

  /// error, or Unreachable when the call neither succeeded nor recorded a failure
  Errc
  failure() const;
};

/// A prefix announced into a CCN realm's FIB by one of its members.
struct Route
{
  NodeId origin;
  RealmId realm;
  std::string prefix;

  auto operator<=>(const Route&) const = default;
};

/** \brief the running internetwork: fabric plus the resolution services and node behaviour
 *
 *  Hosts resolve through the nearest NRS replica (or locally when their realm has
 *  none), name-routers resolve locally and bridge, CCN members forward by FIB and
 *  return data by name.
 */
class Internetwork : public FrameHandler
{
public:
  explicit Internetwork(Topology topology);

  Internetwork(const Internetwork&) = delete;
  Internetwork& operator=(const Internetwork&) = delete;

  Fabric& fabric() noexcept { return m_fabric; }
  const Fabric& fabric() const noexcept { return m_fabric; }
  const Topology& topology() const noexcept { return m_fabric.topology(); }
  Namespace& names() noexcept { return m_namespace; }
  const Namespace& names() const noexcept { return m_namespace; }
  Ors& ors() noexcept { return m_ors; }
  const Ors& ors() const noexcept { return m_ors; }
  Nrs& nrs() noexcept { return m_nrs; }
  const Nrs& nrs() const noexcept { return m_nrs; }

  /// Validate against the namespace and register with the ORS.
  void
  add_entity(const NamedEntity& e);

  /// \throw Error(ValidationError) unless origin is a member of a CCNISH realm
  void
  add_route(const Route& r);

  void
  remove_route(const Route& r);

  void
  set_policy(const NodeId& name_router, AccessPolicy policy);

  // Timed actions. Each takes effect at tick t (or now, if t is in the past).
  OpHandle pull(const Name& caller, const Name& target, Tick t);
  OpHandle push(const Name& caller, const Name& target, std::string body, Tick t);
  OpHandle subscribe(const Name& caller, std::string topic, Tick t);
  OpHandle publish(const Name& caller, std::string topic, std::string body, Tick t);
  /// \param then_pull pull the first entry of the result once it arrives
  OpHandle search(const Name& caller, OrsQuery q, Tick t, bool then_pull = false);

  void bind_at(const Name& name, const NapId& nap, Tick t);
  void unbind_at(const Name& name, const NapId& nap, Tick t);
  void partition_at(const RealmId& realm, Tick t);
  void heal_at(const RealmId& realm, Tick t);
  void register_at(const NrsRecord& r, Tick t);
  void withdraw_at(const Name& prefix, const Locator& next_hop, Tick t);

  const Trace&
  run(Tick until = kForever);

  const OpOutcome&
  outcome(OpHandle h) const
  {
    return m_ops.at(h);
  }

  const std::vector<OpOutcome>&
  outcomes() const noexcept
  {
    return m_ops;
  }

  /// (node, realm) -> forwarder state, one per member of every CCNISH realm
  const std::map<std::pair<NodeId, RealmId>, CcnRouterState>&
  ccn_states() const noexcept
  {
    return m_ccn;
  }

  const std::set<Route>&
  routes() const noexcept
  {
    return m_routes;
  }

  /// Called after every executed tick.
  void
  set_tick_observer(std::function<void(Tick)> obs)
  {
    m_fabric.set_tick_observer(std::move(obs));
  }

  std::string
  rx_detail(const Arrival& a) const override;

  void
  on_arrival(const Arrival& a) override;

private:
  struct Where
  {
    NodeId node;
    RealmId realm;
  };

  struct Hop
  {
    const NetworkAttachmentPoint* from = nullptr;
    Locator to;
    RealmId realm;
    bool self = false;
  };

  OpHandle
  new_op(OpKind kind, const Name& caller, Tick t);

  OpOutcome*
  op_of(MsgId id);

  void
  fail(const Where& at, MsgId id, const Name& name, std::string_view reason, Errc code);

  void
  fail_op(OpHandle h, const Where& at, const Name& name, std::string_view reason, Errc code);

  void
  deliver(const Where& at, const NapId& nap, const WireMessage& m);

  ResolutionContext
  context_for(const NodeId& node, const RealmId& realm) const;

  const NetworkAttachmentPoint*
  origin_nap(const Name& caller) const;

  const NetworkAttachmentPoint*
  service_node(const RealmId& realm, bool (*accept)(NodeRole)) const;

  std::optional<Hop>
  hop_toward(const NodeId& node, const Locator& address) const;

  std::optional<RealmId>
  topic_realm(const std::string& topic) const;

  // client side
  void start_op(OpHandle h);
  void start_search(OpHandle h);
  void resolve_for(OpHandle h);
  void on_resolved(OpHandle h, const std::vector<ServiceDescriptor>& sds);
  void dispatch_pull(OpHandle h, const ServiceDescriptor& sd);
  void dispatch_push(OpHandle h, const std::vector<ServiceDescriptor>& sds);
  void dispatch_topic(OpHandle h);
  void on_query_result(const Arrival& a);

  // services
  void answer_nrs(const Arrival& a);
  void answer_ors(const Arrival& a);
  void serve(const Where& at, const Arrival& a);

  // name-router
  std::optional<std::vector<ServiceDescriptor>>
  router_resolve(const Where& at, const Name& n);

  void router_arrival(const Where& at, const Arrival& a);
  void router_get(const Where& at, const WireMessage& m);
  void relay_to_name(const Where& at, const WireMessage& m);
  void enter_realm(const Where& at, const RealmId& into, const WireMessage& m, const ServiceDescriptor& sd);
  void send_or_drop(const Where& at, const Hop& hop, const WireMessage& m, EventKind tx);

  // CCN realm
  void ccn_arrival(const Where& at, const WireMessage& m, EventKind tx);
  void ccn_interest(const Where& at, const WireMessage& m, EventKind tx);
  void ccn_data(const Where& at, const WireMessage& m, EventKind tx);
  bool originated_in(const WireMessage& m, const RealmId& realm) const;
  void egress_interest(const Where& at, const WireMessage& m);
  void ccn_topic(const Where& at, const WireMessage& m, EventKind tx);
  void rendezvous(const Where& at, const WireMessage& m);

  void
  rebuild_fib(const RealmId& realm);

  void
  on_binding(const Name& name, const NetworkAttachmentPoint& nap, bool bound);

  Fabric m_fabric;
  Namespace m_namespace;
  Ors m_ors;
  Nrs m_nrs;
  std::map<NodeId, CacheStore> m_caches;
  std::map<std::pair<NodeId, RealmId>, CcnRouterState> m_ccn;
  std::set<Route> m_routes;
  std::map<NodeId, AccessPolicy> m_policies;
  // rendezvous node -> topic -> subscriber names
  std::map<NodeId, std::map<std::string, std::set<Name>>> m_subscriptions;

  std::vector<OpOutcome> m_ops;
  std::map<MsgId, OpHandle> m_op_by_msg;
  // per-op client continuation
  struct Pending
  {
    OrsQuery query;
    std::string body;
    bool then_pull = false;
    ResolutionContext ctx;
  };
  std::map<OpHandle, Pending> m_pending;
  // outstanding NRS/ORS query id -> op
  std::map<MsgId, OpHandle> m_queries;
};

} // namespace internames

#endif // INTERNAMES_INTERNETWORK_HPP
