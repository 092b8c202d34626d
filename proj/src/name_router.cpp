#include "internames/name_router.hpp"
#include "internames/error.hpp"

namespace internames {

std::optional<Protocol>
protocol_of(MessageKind k)
{
  if (is_http_kind(k))
    return Protocol::HTTPISH;
  if (is_ccn_kind(k))
    return Protocol::CCNISH_OVER_UDPISH;
  return std::nullopt;
}

WireMessage
bridge(const WireMessage& m, const BridgeRule& rule, const ServiceDescriptor& sd)
{
  auto unsupported = [&] {
    return Error(Errc::UnsupportedPair, std::string(to_string(m.kind)) + " via " +
                                          std::string(to_string(rule.inbound_protocol)) + "->" +
                                          std::string(to_string(rule.outbound_protocol)));
  };

  if (rule.realm_in == rule.realm_out)
    throw Error(Errc::ValidationError, "bridge rule with identical realms " + rule.realm_in.str());
  auto proto = protocol_of(m.kind);
  if (!proto || *proto != rule.inbound_protocol)
    throw unsupported();

  WireMessage out = m;
  if (rule.inbound_protocol == rule.outbound_protocol)
    return out;

  if (rule.outbound_protocol == Protocol::CCNISH_OVER_UDPISH) {
    switch (m.kind) {
      case MessageKind::HTTP_GET:
        if (sd.fcn.empty())
          throw Error(Errc::MissingFcn, "no FCN to carry " + name_or_dash(m.target_name) + " into " +
                                          rule.realm_out.str());
        out.kind = MessageKind::CCN_INTEREST;
        out.target_fcn = sd.fcn;
        return out;
      case MessageKind::HTTP_RESP:
      case MessageKind::HTTP_PUSH:
        out.kind = MessageKind::CCN_DATA;
        if (out.target_fcn.empty())
          out.target_fcn = sd.fcn.empty() ? m.target_name.to_fcn() : sd.fcn;
        return out;
      default:
        throw unsupported();
    }
  }

  switch (m.kind) {
    case MessageKind::CCN_INTEREST:
      if (m.target_name.empty())
        throw unsupported();
      out.kind = MessageKind::HTTP_GET;
      out.target_fcn.clear();
      return out;
    case MessageKind::CCN_DATA:
      out.kind = MessageKind::HTTP_RESP;
      out.target_fcn.clear();
      return out;
    default:
      throw unsupported();
  }
}

std::string_view
to_string(Operation op)
{
  switch (op) {
    case Operation::pull: return "pull";
    case Operation::push: return "push";
    case Operation::publish: return "publish";
    case Operation::subscribe: return "subscribe";
    case Operation::any: return "any";
  }
  return "any";
}

std::string_view
to_string(Decision d)
{
  return d == Decision::allow ? "allow" : "deny";
}

Operation
parse_operation(std::string_view s)
{
  for (auto op : {Operation::pull, Operation::push, Operation::publish, Operation::subscribe, Operation::any}) {
    if (to_string(op) == s)
      return op;
  }
  throw Error(Errc::ParseError, "unknown operation '" + std::string(s) + "'");
}

Decision
parse_decision(std::string_view s)
{
  if (s == "allow")
    return Decision::allow;
  if (s == "deny")
    return Decision::deny;
  throw Error(Errc::ParseError, "unknown policy action '" + std::string(s) + "'");
}

std::optional<Operation>
operation_of(MessageKind k)
{
  switch (k) {
    case MessageKind::HTTP_GET:
    case MessageKind::CCN_INTEREST:
      return Operation::pull;
    case MessageKind::HTTP_PUSH:
      return Operation::push;
    case MessageKind::PUB:
      return Operation::publish;
    case MessageKind::SUB:
      return Operation::subscribe;
    default:
      return std::nullopt;
  }
}

Decision
check_access(const AccessPolicy& policy, const Name& principal, Operation op)
{
  for (const auto& rule : policy.rules) {
    if ((rule.operation == Operation::any || rule.operation == op) &&
        is_prefix_of(rule.principal_prefix, principal))
      return rule.action;
  }
  return Decision::allow;
}

} // namespace internames
