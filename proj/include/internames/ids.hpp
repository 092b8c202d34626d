#ifndef INTERNAMES_IDS_HPP
#define INTERNAMES_IDS_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace internames {

/// Simulation time. Integer ticks keep traces exact.
using Tick = std::int64_t;

using MsgId = std::uint64_t;

template <class Tag>
class StrongId
{
public:
  StrongId() = default;

  explicit StrongId(std::string value)
    : m_value(std::move(value))
  {
  }

  const std::string&
  str() const noexcept
  {
    return m_value;
  }

  bool
  empty() const noexcept
  {
    return m_value.empty();
  }

  auto operator<=>(const StrongId&) const = default;

private:
  std::string m_value;
};

template <class Tag>
std::ostream&
operator<<(std::ostream& os, const StrongId<Tag>& id)
{
  return os << id.str();
}

struct NodeTag;
struct NapTag;
struct RealmTag;
struct LocatorTag;

using NodeId = StrongId<NodeTag>;
using NapId = StrongId<NapTag>;
using RealmId = StrongId<RealmTag>;
/// An address inside a network-realm (dotted quad or node-style name).
using Locator = StrongId<LocatorTag>;

} // namespace internames

template <class Tag>
struct std::hash<internames::StrongId<Tag>>
{
  std::size_t
  operator()(const internames::StrongId<Tag>& id) const noexcept
  {
    return std::hash<std::string>{}(id.str());
  }
};

#endif // INTERNAMES_IDS_HPP
