#ifndef INTERNAMES_NRS_HPP
#define INTERNAMES_NRS_HPP

#include "internames/ids.hpp"
#include "internames/name.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace internames {

enum class Protocol { HTTPISH, CCNISH_OVER_UDPISH };
enum class Technology { IPISH, CCNISH };
enum class ServiceKind { unicast, multicast, anycast, broadcast };

std::string_view to_string(Protocol p);
std::string_view to_string(Technology t);
std::string_view to_string(ServiceKind s);
Protocol parse_protocol(std::string_view s);
Technology parse_technology(std::string_view s);
ServiceKind parse_service_kind(std::string_view s);

/// Default cache lifetime when no returned descriptor states one.
inline constexpr Tick kDefaultTtlTicks = 100;

struct SdAttributes
{
  std::int64_t priority = 0;
  std::optional<Tick> ttl_ticks;
  std::optional<std::string> scope;

  bool operator==(const SdAttributes&) const = default;
};

/** \brief the resolution product: how to relay a request one hop closer to a named-entity
 */
struct ServiceDescriptor
{
  Protocol protocol = Protocol::HTTPISH;
  std::string fcn;
  Technology next_hop_tech = Technology::IPISH;
  Locator next_hop_address;
  SdAttributes attributes;

  /// e.g. "protocol=CCNISH_OVER_UDPISH fcn=FCN1 next_hop=RN1 tech=IPISH priority=0 ttl=- scope=-"
  std::string
  to_text() const;

  /// \throw Error(ValidationError)
  void
  validate() const;

  /// HTTPISH with no FCN: a plain name -> locator mapping, the only kind a DNS resolver answers.
  bool
  is_plain() const
  {
    return protocol == Protocol::HTTPISH && fcn.empty();
  }

  bool operator==(const ServiceDescriptor&) const = default;
};

std::string
to_text(const std::vector<ServiceDescriptor>& sds);

struct TimeWindow
{
  Tick start = 0;
  Tick end = 0; // exclusive

  bool operator==(const TimeWindow&) const = default;
};

struct ResolutionContext
{
  Tick now_tick = 0;
  std::string location_tag;
  std::set<std::string> context_tags;
  ServiceKind requested_service = ServiceKind::unicast;

  /// Canonical text of everything but now_tick; the cache key component.
  std::string
  key() const;

  std::uint64_t
  hash() const;
};

/// Empty predicate matches every context.
struct ContextPredicate
{
  std::optional<TimeWindow> time_window;
  std::set<std::string> location_tags;
  std::set<std::string> context_tags;
  std::optional<ServiceKind> service;

  bool
  matches(const ResolutionContext& ctx) const;

  bool
  empty() const
  {
    return !time_window && location_tags.empty() && context_tags.empty() && !service;
  }

  std::string
  to_text() const;

  bool operator==(const ContextPredicate&) const = default;
};

struct NrsRecord
{
  Name prefix;
  ServiceDescriptor sd;
  ContextPredicate predicate;

  bool operator==(const NrsRecord&) const = default;
};

enum class Role { administrator, name_router, end_user };

/** \brief Name Resolution Service
 *
 *  Longest-prefix match over registered records, filtered by context predicate,
 *  ordered by (priority, canonical SD text). Only administrators and name-routers
 *  may change the record set.
 */
class Nrs
{
public:
  /// \throw Error(Unauthorized), Error(DuplicateRecord)
  void
  register_record(const NrsRecord& r, Role caller);

  /// Removes every record with this prefix and next-hop address.
  /// \throw Error(Unauthorized), Error(NotFound)
  void
  withdraw(const Name& prefix, const Locator& next_hop, Role caller);

  /// \throw Error(NotResolvable)
  std::vector<ServiceDescriptor>
  resolve(const Name& n, const ResolutionContext& ctx) const;

  const std::vector<NrsRecord>&
  records() const noexcept
  {
    return m_records;
  }

  /// Number of resolve() calls that consulted the record table.
  std::size_t
  lookup_count() const noexcept
  {
    return m_lookups;
  }

private:
  std::vector<NrsRecord> m_records;
  // prefix uri -> indices into m_records
  std::map<std::string, std::vector<std::size_t>> m_by_prefix;
  mutable std::size_t m_lookups = 0;
};

void
nrs_register(Nrs& nrs, const NrsRecord& r, Role caller);

void
nrs_withdraw(Nrs& nrs, const Name& prefix, const Locator& next_hop, Role caller);

std::vector<ServiceDescriptor>
nrs_resolve(const Nrs& nrs, const Name& n, const ResolutionContext& ctx);

/** \brief per-resolver cache of resolved descriptors
 *
 *  An entry is served only while now_tick < inserted_tick + ttl_ticks.
 */
class CacheStore
{
public:
  std::optional<std::vector<ServiceDescriptor>>
  lookup(const Name& n, const ResolutionContext& ctx) const;

  /// ttl = min over the descriptors' ttl_ticks, kDefaultTtlTicks when none states one.
  void
  insert(const Name& n, const ResolutionContext& ctx, std::vector<ServiceDescriptor> sds);

  std::size_t
  size() const noexcept
  {
    return m_entries.size();
  }

private:
  struct Entry
  {
    std::vector<ServiceDescriptor> sds;
    Tick inserted_tick = 0;
    Tick ttl_ticks = 0;
  };
  std::map<std::pair<std::string, std::string>, Entry> m_entries;
};

Tick
cache_ttl(const std::vector<ServiceDescriptor>& sds);

/// \param hit set to whether the cache answered
std::vector<ServiceDescriptor>
nrs_resolve_cached(const Nrs& nrs, const Name& n, const ResolutionContext& ctx, CacheStore& cache,
                   bool* hit = nullptr);

/// NRS_QUERY / NRS_RESULT bodies.
struct NrsQueryBody
{
  Name name;
  ResolutionContext ctx;
  Locator reply_to;
};

std::string
serialize(const NrsQueryBody& q);

NrsQueryBody
parse_nrs_query(std::string_view body);

/// An empty list encodes "not resolvable".
std::string
serialize(const std::vector<ServiceDescriptor>& sds);

std::vector<ServiceDescriptor>
parse_nrs_result(std::string_view body);

} // namespace internames

#endif // INTERNAMES_NRS_HPP
