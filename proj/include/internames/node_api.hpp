#ifndef INTERNAMES_NODE_API_HPP
#define INTERNAMES_NODE_API_HPP

#include "internames/internetwork.hpp"

#include <string>
#include <vector>

namespace internames {

/** \brief blocking, name-only view of the internetwork for applications
 *
 *  Each call is issued at the current tick and the simulation runs until no work
 *  is pending. Return values carry bytes and names, never locators.
 */
class NodeApi
{
public:
  explicit NodeApi(Internetwork& net)
    : m_net(net)
  {
  }

  /// \throw Error(NotResolvable), Error(AccessDenied), Error(Unreachable), Error(NotFound)
  std::string
  pull(const Name& caller, const Name& target);

  /// \return number of DELIVER events
  /// \throw Error(NotResolvable), Error(AccessDenied), Error(Unreachable)
  std::size_t
  push(const Name& caller, const Name& target, std::string body);

  /// \throw Error(AccessDenied)
  void
  subscribe(const Name& caller, std::string topic_fcn);

  /// \return number of subscriber names reached
  /// \throw Error(AccessDenied)
  std::size_t
  publish(const Name& caller, std::string topic_fcn, std::string body);

  OrsResult
  search(const Name& caller, std::vector<std::string> keywords);

private:
  const OpOutcome&
  settle(OpHandle h);

  Internetwork& m_net;
};

} // namespace internames

#endif // INTERNAMES_NODE_API_HPP
