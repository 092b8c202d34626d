#include "internames/node_api.hpp"
#include "internames/error.hpp"

namespace internames {

const OpOutcome&
NodeApi::settle(OpHandle h)
{
  m_net.run();
  const auto& op = m_net.outcome(h);
  if (!op.succeeded())
    throw Error(op.failure(), std::string(to_string(op.kind)) + " by " + name_or_dash(op.caller));
  return op;
}

std::string
NodeApi::pull(const Name& caller, const Name& target)
{
  return settle(m_net.pull(caller, target, m_net.fabric().now())).body;
}

std::size_t
NodeApi::push(const Name& caller, const Name& target, std::string body)
{
  return settle(m_net.push(caller, target, std::move(body), m_net.fabric().now())).delivered;
}

void
NodeApi::subscribe(const Name& caller, std::string topic_fcn)
{
  settle(m_net.subscribe(caller, std::move(topic_fcn), m_net.fabric().now()));
}

std::size_t
NodeApi::publish(const Name& caller, std::string topic_fcn, std::string body)
{
  return settle(m_net.publish(caller, std::move(topic_fcn), std::move(body), m_net.fabric().now())).reached.size();
}

OrsResult
NodeApi::search(const Name& caller, std::vector<std::string> keywords)
{
  OrsQuery q;
  q.keywords = std::move(keywords);
  return settle(m_net.search(caller, std::move(q), m_net.fabric().now())).found;
}

} // namespace internames
