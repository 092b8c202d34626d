#ifndef INTERNAMES_ORS_HPP
#define INTERNAMES_ORS_HPP

#include "internames/name.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace internames {

struct OrsQuery
{
  std::vector<std::string> keywords;
  std::map<std::string, std::string> metadata_filters;
};

struct OrsEntry
{
  Name name;
  std::map<std::string, std::string> metadata;

  bool operator==(const OrsEntry&) const = default;
};

/// Entries are sorted by canonical URI, ascending.
struct OrsResult
{
  std::vector<OrsEntry> entries;

  bool operator==(const OrsResult&) const = default;
};

/** \brief Object Resolution Service: keyword/metadata search over every named-entity
 *
 *  Conjunctive keyword semantics; an empty keyword list yields an empty result.
 *  Single writer; concurrent readers are fine once registration stops.
 */
class Ors
{
public:
  /// \throw Error(DuplicateName)
  void
  register_entity(const NamedEntity& e);

  OrsResult
  search(const OrsQuery& q) const;

  const NamedEntity*
  find(const Name& n) const;

  const std::map<std::string, NamedEntity>&
  entities() const noexcept
  {
    return m_entities;
  }

private:
  std::map<std::string, NamedEntity> m_entities; // canonical uri -> entity
  std::map<std::string, std::set<std::string>> m_keyword_index;
};

void
ors_register(Ors& ors, const NamedEntity& e);

OrsResult
ors_search(const Ors& ors, const OrsQuery& q);

/// Control-message bodies carried by ORS_QUERY / ORS_RESULT.
std::string
serialize(const OrsQuery& q);

OrsQuery
parse_ors_query(std::string_view body);

std::string
serialize(const OrsResult& r);

OrsResult
parse_ors_result(std::string_view body);

} // namespace internames

#endif // INTERNAMES_ORS_HPP
