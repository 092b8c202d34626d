#ifndef INTERNAMES_CCN_HPP
#define INTERNAMES_CCN_HPP

#include "internames/error.hpp"
#include "internames/ids.hpp"
#include "internames/wire.hpp"

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace internames {

/// FCN text split on '/', after dropping an optional "ccnx://" scheme; empty segments are ignored.
std::vector<std::string>
fcn_segments(std::string_view fcn);

bool
fcn_prefix_matches(std::string_view prefix, std::string_view fcn);

struct FibEntry
{
  std::string prefix;
  Locator next_hop;
  /// the realm member that announced the prefix
  NodeId origin;

  bool operator==(const FibEntry&) const = default;
};

/** Longest '/'-segment prefix match; ties on length go to the lexicographically
 *  smallest next_hop.
 *  \throw Error(NoFibMatch)
 */
Locator
fib_lookup(std::span<const FibEntry> table, std::string_view fcn);

/** \brief bounded content store with least-recently-inserted eviction
 */
class ContentStore
{
public:
  static constexpr std::size_t kDefaultCapacity = 16;

  struct Entry
  {
    std::string fcn;
    std::string body;
    Tick inserted_tick = 0;
  };

  explicit ContentStore(std::size_t capacity = kDefaultCapacity)
    : m_capacity(capacity)
  {
  }

  /// No-op when fcn is already stored.
  void
  insert(std::string fcn, std::string body, Tick now);

  const Entry*
  find(std::string_view fcn) const;

  std::size_t
  size() const noexcept
  {
    return m_entries.size();
  }

  std::size_t
  capacity() const noexcept
  {
    return m_capacity;
  }

  /// Oldest first.
  const std::deque<Entry>&
  entries() const noexcept
  {
    return m_entries;
  }

private:
  std::size_t m_capacity;
  std::deque<Entry> m_entries;
};

/** \brief everything a CCN-realm forwarder keeps
 *
 *  There is deliberately no pending-interest table: data is forwarded toward the
 *  name it is addressed to, so no per-request state exists.
 */
struct CcnRouterState
{
  std::vector<FibEntry> fib;
  ContentStore cs;

  std::size_t
  pending_request_records() const noexcept
  {
    return 0;
  }
};

struct InterestDecision
{
  enum class Action { cs_hit, forward, local, drop };

  Action action = Action::drop;
  Locator next_hop;        // forward
  std::string body;        // cs_hit
  Errc drop_reason = Errc::NoFibMatch;
};

/// What a CCN node does with an interest; pure, the fabric applies the effects.
InterestDecision
forward_interest(const CcnRouterState& state, const WireMessage& m, const Locator& self);

struct DataDecision
{
  enum class Action { deliver_local, forward, egress, drop };

  Action action = Action::drop;
  Locator next_hop;
};

/** Return-path routing of a data/push message addressed to a name.
 *  A FIB route for the target name (announced by an in-realm consumer) wins;
 *  otherwise the message heads for the realm egress, where it is resolved.
 *  \param toward_egress next hop toward the egress, empty when self is the egress
 *  \param has_egress whether the realm has an egress name-router at all
 */
DataDecision
return_data(const CcnRouterState& state, const WireMessage& d, const Locator& self,
            const Locator& toward_egress, bool has_egress);

} // namespace internames

#endif // INTERNAMES_CCN_HPP
