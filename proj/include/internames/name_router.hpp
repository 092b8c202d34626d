#ifndef INTERNAMES_NAME_ROUTER_HPP
#define INTERNAMES_NAME_ROUTER_HPP

#include "internames/ids.hpp"
#include "internames/nrs.hpp"
#include "internames/wire.hpp"

#include <optional>
#include <vector>

namespace internames {

struct BridgeRule
{
  Protocol inbound_protocol = Protocol::HTTPISH;
  Protocol outbound_protocol = Protocol::HTTPISH;
  RealmId realm_in;
  RealmId realm_out;
};

/// HTTP kinds speak HTTPISH, CCN kinds CCNISH_OVER_UDPISH; control kinds have no protocol.
std::optional<Protocol>
protocol_of(MessageKind k);

/** Translate a message between name-oriented protocols at a realm boundary.
 *
 *  Defined pairs: HTTP_GET <-> CCN_INTEREST, HTTP_RESP <-> CCN_DATA and
 *  HTTP_PUSH -> CCN_DATA; same-protocol rules pass the message through.
 *  msg_id, source_name, body and hop_count are preserved.
 *
 *  \throw Error(UnsupportedPair), Error(MissingFcn)
 */
WireMessage
bridge(const WireMessage& m, const BridgeRule& rule, const ServiceDescriptor& sd);

enum class Operation { pull, push, publish, subscribe, any };
enum class Decision { allow, deny };

std::string_view to_string(Operation op);
std::string_view to_string(Decision d);
Operation parse_operation(std::string_view s);
Decision parse_decision(std::string_view s);

/// The operation a request kind performs, if access control applies to it.
std::optional<Operation>
operation_of(MessageKind k);

struct AccessRule
{
  Name principal_prefix;
  Decision action = Decision::allow;
  Operation operation = Operation::any;

  bool operator==(const AccessRule&) const = default;
};

/// Ordered rules, first match wins, empty policy allows.
struct AccessPolicy
{
  std::vector<AccessRule> rules;
};

Decision
check_access(const AccessPolicy& policy, const Name& principal, Operation op);

} // namespace internames

#endif // INTERNAMES_NAME_ROUTER_HPP
