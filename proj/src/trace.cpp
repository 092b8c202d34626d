#include "internames/trace.hpp"
#include "internames/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace internames {

namespace {

constexpr std::array<std::string_view, 13> kEventNames = {
  "SEND", "RECV", "FWD", "ORS_Q", "ORS_R", "NRS_Q", "NRS_R",
  "BRIDGE", "CACHE_HIT", "CS_HIT", "DELIVER", "DROP", "REBIND",
};

template <class T>
T
parse_int(std::string_view s, std::string_view line)
{
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(Errc::ParseError, "bad integer in trace line: " + std::string(line));
  return v;
}

} // namespace

std::string_view
to_string(EventKind e)
{
  return kEventNames.at(static_cast<std::size_t>(e));
}

std::optional<EventKind>
parse_event_kind(std::string_view s)
{
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s)
      return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

bool
is_transmit(EventKind e)
{
  return e == EventKind::SEND || e == EventKind::FWD || e == EventKind::ORS_Q || e == EventKind::NRS_Q;
}

bool
is_receive(EventKind e)
{
  return e == EventKind::RECV || e == EventKind::ORS_R || e == EventKind::NRS_R;
}

std::string
TraceEvent::to_line() const
{
  std::string out;
  out.reserve(64 + detail.size() + name.size());
  out += "t=" + std::to_string(tick);
  out += " node=" + node;
  out += " realm=" + realm;
  out += " event=";
  out += to_string(event);
  out += " msg=" + std::to_string(msg_id);
  out += " name=" + (name.empty() ? std::string("-") : name);
  out += " detail=" + (detail.empty() ? std::string("-") : detail);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t'))
    out.pop_back();
  return out;
}

TraceEvent
parse_trace_line(std::string_view line)
{
  // the first six fields are single tokens; detail runs to end of line
  TraceEvent e;
  std::array<std::string_view, 6> keys = {"t=", "node=", "realm=", "event=", "msg=", "name="};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (line.substr(pos, keys[i].size()) != keys[i])
      throw Error(Errc::ParseError, "expected '" + std::string(keys[i]) + "' in trace line: " + std::string(line));
    pos += keys[i].size();
    auto sp = line.find(' ', pos);
    if (sp == std::string_view::npos)
      throw Error(Errc::ParseError, "truncated trace line: " + std::string(line));
    auto value = line.substr(pos, sp - pos);
    switch (i) {
      case 0: e.tick = parse_int<Tick>(value, line); break;
      case 1: e.node = value; break;
      case 2: e.realm = value; break;
      case 3: {
        auto k = parse_event_kind(value);
        if (!k)
          throw Error(Errc::ParseError, "unknown event in trace line: " + std::string(line));
        e.event = *k;
        break;
      }
      case 4: e.msg_id = parse_int<MsgId>(value, line); break;
      case 5: e.name = value; break;
    }
    pos = sp + 1;
  }
  if (line.substr(pos, 7) != "detail=")
    throw Error(Errc::ParseError, "expected 'detail=' in trace line: " + std::string(line));
  e.detail = line.substr(pos + 7);
  return e;
}

std::vector<TraceEvent>
Trace::canonical() const
{
  auto out = m_events;
  std::stable_sort(out.begin(), out.end(), [] (const TraceEvent& a, const TraceEvent& b) {
    if (a.tick != b.tick)
      return a.tick < b.tick;
    if (a.node != b.node)
      return a.node < b.node;
    return a.msg_id < b.msg_id;
  });
  return out;
}

std::string
Trace::text() const
{
  std::string out;
  for (const auto& e : canonical()) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent>
parse_trace(std::string_view text)
{
  std::vector<TraceEvent> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty())
      out.push_back(parse_trace_line(line));
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
  return out;
}

} // namespace internames
