#ifndef INTERNAMES_ERROR_HPP
#define INTERNAMES_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace internames {

enum class Errc {
  MalformedUri,
  DuplicateRealm,
  DuplicateName,
  Unauthorized,
  DuplicateRecord,
  NotFound,
  NotResolvable,
  UnknownNap,
  NotBound,
  NoRoute,
  RealmViolation,
  UnknownRealm,
  MalformedMessage,
  NoFibMatch,
  HopLimitExceeded,
  UnsupportedPair,
  MissingFcn,
  AccessDenied,
  Unreachable,
  ParseError,
  ValidationError,
  InvalidStep,
};

std::string_view to_string(Errc code);

/** \brief the single exception type of the library; carries a machine-checkable code
 */
class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what)
    , m_code(code)
  {
  }

  Errc
  code() const noexcept
  {
    return m_code;
  }

private:
  Errc m_code;
};

} // namespace internames

#endif // INTERNAMES_ERROR_HPP
