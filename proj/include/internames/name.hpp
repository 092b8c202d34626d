#ifndef INTERNAMES_NAME_HPP
#define INTERNAMES_NAME_HPP

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace internames {

inline constexpr std::size_t kMaxSegmentBytes = 255;
inline constexpr std::size_t kMaxSegments = 64;

/** \brief realm-qualified hierarchical identifier, e.g. n2n://nriA:Alice.com/cell
 *
 *  A default-constructed Name is the "absent" name and prints as "-" in traces.
 *  Comparison is byte-wise and case-sensitive.
 */
class Name
{
public:
  Name() = default;

  /// \throw Error(MalformedUri) when realm or a segment violates the grammar
  Name(std::string realm, std::vector<std::string> segments);

  static Name
  parse(std::string_view uri);

  const std::string&
  realm() const noexcept
  {
    return m_realm;
  }

  const std::vector<std::string>&
  segments() const noexcept
  {
    return m_segments;
  }

  bool
  empty() const noexcept
  {
    return m_realm.empty();
  }

  std::size_t
  size() const noexcept
  {
    return m_segments.size();
  }

  std::string
  to_uri() const;

  /// Slash-joined local part with the realm prepended ("nriA:Alice.com/cell");
  /// the form used when a name is forwarded on inside a CCN realm.
  std::string
  to_fcn() const;

  auto operator<=>(const Name&) const = default;

private:
  std::string m_realm;
  std::vector<std::string> m_segments;
};

Name
parse_name(std::string_view uri);

std::string
format_name(const Name& n);

/// True iff same realm and p's segments are a leading sub-list of n's.
bool
is_prefix_of(const Name& p, const Name& n);

/// "-" for the absent name, canonical URI otherwise.
std::string
name_or_dash(const Name& n);

bool
is_realm_token(std::string_view s);

bool
is_segment_token(std::string_view s);

enum class NamingScheme { hierarchical, flat };

std::string_view
to_string(NamingScheme s);

NamingScheme
parse_naming_scheme(std::string_view s);

struct NameRealm
{
  std::string id;
  NamingScheme scheme = NamingScheme::hierarchical;
  std::string description;

  bool operator==(const NameRealm&) const = default;
};

/** \brief the set of disjoint name-realms
 */
class Namespace
{
public:
  /// \throw Error(DuplicateRealm)
  void
  add_realm(NameRealm realm);

  bool
  has_realm(const std::string& id) const;

  /// \throw Error(UnknownRealm) or Error(MalformedUri) for flat-scheme violations
  void
  validate(const Name& n) const;

  const std::map<std::string, NameRealm>&
  realms() const noexcept
  {
    return m_realms;
  }

private:
  std::map<std::string, NameRealm> m_realms;
};

enum class EntityKind { content, service_access_point };

std::string_view
to_string(EntityKind k);

EntityKind
parse_entity_kind(std::string_view s);

struct NamedEntity
{
  Name name;
  EntityKind kind = EntityKind::content;
  std::string payload;
  std::map<std::string, std::string> metadata;

  /// Lowercased, trimmed, non-empty tokens of metadata["keywords"].
  std::vector<std::string>
  keywords() const;

  /// metadata["fcn"] or empty
  std::string
  fcn() const;

  /// \throw Error(ValidationError) when payload presence contradicts the kind
  void
  validate() const;

  bool operator==(const NamedEntity&) const = default;
};

std::vector<std::string>
split_keywords(std::string_view text);

} // namespace internames

#endif // INTERNAMES_NAME_HPP
