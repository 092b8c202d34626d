#include "internames/wire.hpp"
#include "internames/error.hpp"

#include <array>

namespace internames {

namespace {

constexpr std::uint16_t kFieldCount = 7;

enum Tag : std::uint8_t {
  TAG_MSG_ID = 1,
  TAG_KIND,
  TAG_TARGET_FCN,
  TAG_TARGET_NAME,
  TAG_SOURCE_NAME,
  TAG_BODY,
  TAG_HOP_COUNT,
};

void
put_be(Bytes& out, std::uint64_t v, int width)
{
  for (int i = width - 1; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t
get_be(std::span<const std::uint8_t> in)
{
  std::uint64_t v = 0;
  for (auto b : in)
    v = (v << 8) | b;
  return v;
}

void
put_field(Bytes& out, Tag tag, std::span<const std::uint8_t> raw)
{
  out.push_back(tag);
  put_be(out, raw.size(), 4);
  out.insert(out.end(), raw.begin(), raw.end());
}

void
put_field(Bytes& out, Tag tag, std::string_view raw)
{
  put_field(out, tag, {reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
}

void
put_uint_field(Bytes& out, Tag tag, std::uint64_t v, int width)
{
  Bytes tmp;
  put_be(tmp, v, width);
  put_field(out, tag, tmp);
}

[[noreturn]] void
malformed(const std::string& why)
{
  throw Error(Errc::MalformedMessage, why);
}

} // namespace

std::string_view
to_string(MessageKind k)
{
  switch (k) {
    case MessageKind::HTTP_GET: return "HTTP_GET";
    case MessageKind::HTTP_RESP: return "HTTP_RESP";
    case MessageKind::HTTP_PUSH: return "HTTP_PUSH";
    case MessageKind::CCN_INTEREST: return "CCN_INTEREST";
    case MessageKind::CCN_DATA: return "CCN_DATA";
    case MessageKind::ORS_QUERY: return "ORS_QUERY";
    case MessageKind::ORS_RESULT: return "ORS_RESULT";
    case MessageKind::NRS_QUERY: return "NRS_QUERY";
    case MessageKind::NRS_RESULT: return "NRS_RESULT";
    case MessageKind::SUB: return "SUB";
    case MessageKind::PUB: return "PUB";
  }
  return "?";
}

std::optional<MessageKind>
parse_message_kind(std::string_view s)
{
  for (int k = 1; k <= static_cast<int>(MessageKind::PUB); ++k) {
    if (to_string(static_cast<MessageKind>(k)) == s)
      return static_cast<MessageKind>(k);
  }
  return std::nullopt;
}

bool
is_request(MessageKind k)
{
  switch (k) {
    case MessageKind::HTTP_GET:
    case MessageKind::HTTP_PUSH:
    case MessageKind::CCN_INTEREST:
    case MessageKind::ORS_QUERY:
    case MessageKind::NRS_QUERY:
    case MessageKind::SUB:
    case MessageKind::PUB:
      return true;
    default:
      return false;
  }
}

bool
is_ccn_kind(MessageKind k)
{
  return k == MessageKind::CCN_INTEREST || k == MessageKind::CCN_DATA;
}

bool
is_http_kind(MessageKind k)
{
  return k == MessageKind::HTTP_GET || k == MessageKind::HTTP_RESP || k == MessageKind::HTTP_PUSH;
}

void
validate(const WireMessage& m)
{
  auto k = static_cast<int>(m.kind);
  if (k < 1 || k > static_cast<int>(MessageKind::PUB))
    malformed("unknown kind " + std::to_string(k));
  if (is_request(m.kind) && m.source_name.empty())
    malformed(std::string(to_string(m.kind)) + " without source_name");
  if (m.hop_count > kMaxHops)
    malformed("hop_count " + std::to_string(m.hop_count) + " exceeds " + std::to_string(kMaxHops));
}

Bytes
encode(const WireMessage& m)
{
  validate(m);
  Bytes out;
  out.reserve(64 + m.body.size() + m.target_fcn.size());
  put_be(out, kFieldCount, 2);
  put_uint_field(out, TAG_MSG_ID, m.msg_id, 8);
  put_uint_field(out, TAG_KIND, static_cast<std::uint8_t>(m.kind), 1);
  put_field(out, TAG_TARGET_FCN, m.target_fcn);
  put_field(out, TAG_TARGET_NAME, m.target_name.to_uri());
  put_field(out, TAG_SOURCE_NAME, m.source_name.to_uri());
  put_field(out, TAG_BODY, m.body);
  put_uint_field(out, TAG_HOP_COUNT, m.hop_count, 4);
  return out;
}

WireMessage
decode(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 2)
    malformed("truncated field count");
  if (get_be(bytes.first(2)) != kFieldCount)
    malformed("field count " + std::to_string(get_be(bytes.first(2))));

  std::array<std::span<const std::uint8_t>, kFieldCount> fields;
  std::size_t pos = 2;
  for (std::uint8_t expected = 1; expected <= kFieldCount; ++expected) {
    if (bytes.size() - pos < 5)
      malformed("truncated field header");
    if (bytes[pos] != expected)
      malformed("field tag " + std::to_string(bytes[pos]) + ", expected " + std::to_string(expected));
    auto len = get_be(bytes.subspan(pos + 1, 4));
    pos += 5;
    if (bytes.size() - pos < len)
      malformed("truncated field body");
    fields[expected - 1] = bytes.subspan(pos, len);
    pos += len;
  }
  if (pos != bytes.size())
    malformed("trailing bytes");

  auto as_text = [] (std::span<const std::uint8_t> s) {
    return std::string(reinterpret_cast<const char*>(s.data()), s.size());
  };
  auto as_name = [&] (std::span<const std::uint8_t> s) {
    if (s.empty())
      return Name();
    try {
      return Name::parse(as_text(s));
    }
    catch (const Error& e) {
      malformed(e.what());
    }
  };

  if (fields[0].size() != 8 || fields[1].size() != 1 || fields[6].size() != 4)
    malformed("bad fixed-width field");

  WireMessage m;
  m.msg_id = get_be(fields[0]);
  m.kind = static_cast<MessageKind>(fields[1][0]);
  m.target_fcn = as_text(fields[2]);
  m.target_name = as_name(fields[3]);
  m.source_name = as_name(fields[4]);
  m.body = as_text(fields[5]);
  m.hop_count = static_cast<std::uint32_t>(get_be(fields[6]));
  validate(m);
  return m;
}

} // namespace internames
