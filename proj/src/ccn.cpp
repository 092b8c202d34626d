#include "internames/ccn.hpp"
#include "internames/error.hpp"

#include <algorithm>

namespace internames {

std::vector<std::string>
fcn_segments(std::string_view fcn)
{
  constexpr std::string_view scheme = "ccnx://";
  if (fcn.substr(0, scheme.size()) == scheme)
    fcn.remove_prefix(scheme.size());

  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= fcn.size()) {
    auto slash = fcn.find('/', pos);
    auto seg = fcn.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    if (!seg.empty())
      out.emplace_back(seg);
    if (slash == std::string_view::npos)
      break;
    pos = slash + 1;
  }
  return out;
}

bool
fcn_prefix_matches(std::string_view prefix, std::string_view fcn)
{
  auto p = fcn_segments(prefix);
  auto f = fcn_segments(fcn);
  return p.size() <= f.size() && std::equal(p.begin(), p.end(), f.begin());
}

Locator
fib_lookup(std::span<const FibEntry> table, std::string_view fcn)
{
  auto target = fcn_segments(fcn);
  const FibEntry* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& e : table) {
    auto p = fcn_segments(e.prefix);
    if (p.size() > target.size() || !std::equal(p.begin(), p.end(), target.begin()))
      continue;
    if (best == nullptr || p.size() > best_len || (p.size() == best_len && e.next_hop < best->next_hop)) {
      best = &e;
      best_len = p.size();
    }
  }
  if (best == nullptr)
    throw Error(Errc::NoFibMatch, std::string(fcn));
  return best->next_hop;
}

void
ContentStore::insert(std::string fcn, std::string body, Tick now)
{
  if (m_capacity == 0 || find(fcn) != nullptr)
    return;
  if (m_entries.size() == m_capacity)
    m_entries.pop_front();
  m_entries.push_back({std::move(fcn), std::move(body), now});
}

const ContentStore::Entry*
ContentStore::find(std::string_view fcn) const
{
  auto it = std::find_if(m_entries.begin(), m_entries.end(), [&] (const Entry& e) { return e.fcn == fcn; });
  return it == m_entries.end() ? nullptr : &*it;
}

InterestDecision
forward_interest(const CcnRouterState& state, const WireMessage& m, const Locator& self)
{
  InterestDecision d;
  if (const auto* hit = state.cs.find(m.target_fcn)) {
    d.action = InterestDecision::Action::cs_hit;
    d.body = hit->body;
    return d;
  }
  Locator next;
  try {
    next = fib_lookup(state.fib, m.target_fcn);
  }
  catch (const Error&) {
    d.drop_reason = Errc::NoFibMatch;
    return d;
  }
  if (next == self) {
    d.action = InterestDecision::Action::local;
    return d;
  }
  if (m.hop_count >= kMaxHops) {
    d.drop_reason = Errc::HopLimitExceeded;
    return d;
  }
  d.action = InterestDecision::Action::forward;
  d.next_hop = next;
  return d;
}

DataDecision
return_data(const CcnRouterState& state, const WireMessage& d, const Locator& self,
            const Locator& toward_egress, bool has_egress)
{
  DataDecision out;
  std::optional<Locator> routed;
  try {
    routed = fib_lookup(state.fib, d.target_name.to_fcn());
  }
  catch (const Error&) {
  }

  if (routed && *routed == self) {
    out.action = DataDecision::Action::deliver_local;
    return out;
  }
  if (d.hop_count >= kMaxHops)
    return out;
  if (routed) {
    out.action = DataDecision::Action::forward;
    out.next_hop = *routed;
    return out;
  }
  if (!has_egress)
    return out;
  if (toward_egress.empty()) {
    out.action = DataDecision::Action::egress;
    return out;
  }
  out.action = DataDecision::Action::forward;
  out.next_hop = toward_egress;
  return out;
}

} // namespace internames
