#ifndef INTERNAMES_WIRE_HPP
#define INTERNAMES_WIRE_HPP

#include "internames/ids.hpp"
#include "internames/name.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace internames {

using Bytes = std::vector<std::uint8_t>;

/// Loop guard: a message may carry at most this many hops.
inline constexpr std::uint32_t kMaxHops = 32;

enum class MessageKind : std::uint8_t {
  HTTP_GET = 1,
  HTTP_RESP,
  HTTP_PUSH,
  CCN_INTEREST,
  CCN_DATA,
  ORS_QUERY,
  ORS_RESULT,
  NRS_QUERY,
  NRS_RESULT,
  SUB,
  PUB,
};

std::string_view
to_string(MessageKind k);

std::optional<MessageKind>
parse_message_kind(std::string_view s);

/// Kinds that open an exchange and therefore must carry a source name.
bool
is_request(MessageKind k);

bool
is_ccn_kind(MessageKind k);

bool
is_http_kind(MessageKind k);

/** \brief the unit carried by the fabric
 *
 *  Responses reuse the msg_id of the request they answer and are addressed
 *  (target_name) to the request's source_name.
 */
struct WireMessage
{
  MsgId msg_id = 0;
  MessageKind kind = MessageKind::HTTP_GET;
  std::string target_fcn;
  Name target_name;
  Name source_name;
  std::string body;
  std::uint32_t hop_count = 0;

  bool operator==(const WireMessage&) const = default;
};

/** Encoding: 2-byte big-endian field count (7), then for each field a 1-byte tag
 *  (1..7 in declaration order), a 4-byte big-endian length and the raw bytes.
 *  msg_id is 8 bytes big-endian, kind 1 byte, hop_count 4 bytes big-endian,
 *  names are canonical URI text (empty when absent).
 *
 *  \throw Error(MalformedMessage) when the message violates its invariants
 */
Bytes
encode(const WireMessage& m);

/// \throw Error(MalformedMessage)
WireMessage
decode(std::span<const std::uint8_t> bytes);

/// \throw Error(MalformedMessage)
void
validate(const WireMessage& m);

} // namespace internames

#endif // INTERNAMES_WIRE_HPP
