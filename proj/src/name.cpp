#include "internames/name.hpp"
#include "internames/error.hpp"

#include <algorithm>
#include <cctype>

namespace internames {

namespace {

constexpr std::string_view kScheme = "n2n://";

bool
is_alnum(char c)
{
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string
trim(std::string_view s)
{
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

} // namespace

bool
is_realm_token(std::string_view s)
{
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [] (char c) { return is_alnum(c) || c == '.' || c == '-'; });
}

bool
is_segment_token(std::string_view s)
{
  return !s.empty() && s.size() <= kMaxSegmentBytes &&
         std::all_of(s.begin(), s.end(),
                     [] (char c) { return is_alnum(c) || c == '.' || c == '_' || c == '-'; });
}

Name::Name(std::string realm, std::vector<std::string> segments)
  : m_realm(std::move(realm))
  , m_segments(std::move(segments))
{
  if (!is_realm_token(m_realm))
    throw Error(Errc::MalformedUri, "bad realm id '" + m_realm + "'");
  if (m_segments.empty())
    throw Error(Errc::MalformedUri, "empty local name");
  if (m_segments.size() > kMaxSegments)
    throw Error(Errc::MalformedUri, "more than 64 segments");
  for (const auto& seg : m_segments) {
    if (!is_segment_token(seg))
      throw Error(Errc::MalformedUri, "bad segment '" + seg + "'");
  }
}

Name
Name::parse(std::string_view uri)
{
  if (uri.substr(0, kScheme.size()) != kScheme)
    throw Error(Errc::MalformedUri, "scheme must be n2n:// in '" + std::string(uri) + "'");
  auto rest = uri.substr(kScheme.size());
  auto colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw Error(Errc::MalformedUri, "missing ':' realm separator in '" + std::string(uri) + "'");

  std::string realm(rest.substr(0, colon));
  auto local = rest.substr(colon + 1);
  if (local.empty())
    throw Error(Errc::MalformedUri, "empty local name in '" + std::string(uri) + "'");

  std::vector<std::string> segments;
  std::size_t pos = 0;
  while (true) {
    auto slash = local.find('/', pos);
    segments.emplace_back(local.substr(pos, slash == std::string_view::npos ? slash : slash - pos));
    if (segments.size() > kMaxSegments)
      throw Error(Errc::MalformedUri, "more than 64 segments");
    if (slash == std::string_view::npos)
      break;
    pos = slash + 1;
  }
  return Name(std::move(realm), std::move(segments));
}

std::string
Name::to_uri() const
{
  if (empty())
    return {};
  std::string out(kScheme);
  out += m_realm;
  out += ':';
  out += to_fcn().substr(m_realm.size() + 1);
  return out;
}

std::string
Name::to_fcn() const
{
  if (empty())
    return {};
  std::string out = m_realm + ':';
  for (std::size_t i = 0; i < m_segments.size(); ++i) {
    if (i > 0)
      out += '/';
    out += m_segments[i];
  }
  return out;
}

Name
parse_name(std::string_view uri)
{
  return Name::parse(uri);
}

std::string
format_name(const Name& n)
{
  return n.to_uri();
}

bool
is_prefix_of(const Name& p, const Name& n)
{
  if (p.realm() != n.realm() || p.size() > n.size())
    return false;
  return std::equal(p.segments().begin(), p.segments().end(), n.segments().begin());
}

std::string
name_or_dash(const Name& n)
{
  return n.empty() ? std::string("-") : n.to_uri();
}

std::string_view
to_string(NamingScheme s)
{
  return s == NamingScheme::flat ? "flat" : "hierarchical";
}

NamingScheme
parse_naming_scheme(std::string_view s)
{
  if (s == "flat")
    return NamingScheme::flat;
  if (s == "hierarchical")
    return NamingScheme::hierarchical;
  throw Error(Errc::ParseError, "unknown naming scheme '" + std::string(s) + "'");
}

void
Namespace::add_realm(NameRealm realm)
{
  if (!is_realm_token(realm.id))
    throw Error(Errc::MalformedUri, "bad name-realm id '" + realm.id + "'");
  auto id = realm.id;
  if (!m_realms.emplace(id, std::move(realm)).second)
    throw Error(Errc::DuplicateRealm, "name-realm '" + id + "' already exists");
}

bool
Namespace::has_realm(const std::string& id) const
{
  return m_realms.count(id) > 0;
}

void
Namespace::validate(const Name& n) const
{
  auto it = m_realms.find(n.realm());
  if (it == m_realms.end())
    throw Error(Errc::UnknownRealm, "name-realm '" + n.realm() + "' is not declared");
  if (it->second.scheme == NamingScheme::flat && n.size() != 1)
    throw Error(Errc::MalformedUri, "flat name-realm '" + n.realm() + "' admits single-segment names only");
}

std::string_view
to_string(EntityKind k)
{
  return k == EntityKind::content ? "content" : "sap";
}

EntityKind
parse_entity_kind(std::string_view s)
{
  if (s == "content")
    return EntityKind::content;
  if (s == "sap" || s == "service_access_point")
    return EntityKind::service_access_point;
  throw Error(Errc::ParseError, "unknown entity kind '" + std::string(s) + "'");
}

std::vector<std::string>
split_keywords(std::string_view text)
{
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto tok = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [] (unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!tok.empty())
      out.push_back(std::move(tok));
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string>
NamedEntity::keywords() const
{
  auto it = metadata.find("keywords");
  return it == metadata.end() ? std::vector<std::string>{} : split_keywords(it->second);
}

std::string
NamedEntity::fcn() const
{
  auto it = metadata.find("fcn");
  return it == metadata.end() ? std::string{} : it->second;
}

void
NamedEntity::validate() const
{
  if (name.empty())
    throw Error(Errc::ValidationError, "entity without a name");
  if (kind == EntityKind::service_access_point && !payload.empty())
    throw Error(Errc::ValidationError, name.to_uri() + ": service access point must have an empty payload");
  if (kind == EntityKind::content && payload.empty())
    throw Error(Errc::ValidationError, name.to_uri() + ": content entity needs a payload");
}

} // namespace internames
