#ifndef INTERNAMES_TRACE_HPP
#define INTERNAMES_TRACE_HPP

#include "internames/ids.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace internames {

enum class EventKind {
  SEND,
  RECV,
  FWD,
  ORS_Q,
  ORS_R,
  NRS_Q,
  NRS_R,
  BRIDGE,
  CACHE_HIT,
  CS_HIT,
  DELIVER,
  DROP,
  REBIND,
};

std::string_view
to_string(EventKind e);

std::optional<EventKind>
parse_event_kind(std::string_view s);

/// Events that put a message on a link.
bool
is_transmit(EventKind e);

/// Events that take a message off a link.
bool
is_receive(EventKind e);

struct TraceEvent
{
  Tick tick = 0;
  std::string node;
  std::string realm;
  EventKind event = EventKind::SEND;
  MsgId msg_id = 0;
  std::string name = "-";
  std::string detail = "-";

  /// `t=<int> node=<id> realm=<id> event=<ENUM> msg=<int> name=<uri|-> detail=<text>`
  std::string
  to_line() const;

  bool operator==(const TraceEvent&) const = default;
};

/// \throw Error(ParseError)
TraceEvent
parse_trace_line(std::string_view line);

/** \brief append-only event log
 *
 *  The canonical order is (tick, node, msg_id), stable with respect to emission.
 */
class Trace
{
public:
  void
  append(TraceEvent e)
  {
    m_events.push_back(std::move(e));
  }

  /// Emission order.
  const std::vector<TraceEvent>&
  events() const noexcept
  {
    return m_events;
  }

  std::vector<TraceEvent>
  canonical() const;

  /// Canonical lines, each terminated by '\n'.
  std::string
  text() const;

private:
  std::vector<TraceEvent> m_events;
};

std::vector<TraceEvent>
parse_trace(std::string_view text);

} // namespace internames

#endif // INTERNAMES_TRACE_HPP
