#include "internames/error.hpp"

namespace internames {

std::string_view
to_string(Errc code)
{
  switch (code) {
    case Errc::MalformedUri: return "MalformedUri";
    case Errc::DuplicateRealm: return "DuplicateRealm";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::DuplicateRecord: return "DuplicateRecord";
    case Errc::NotFound: return "NotFound";
    case Errc::NotResolvable: return "NotResolvable";
    case Errc::UnknownNap: return "UnknownNap";
    case Errc::NotBound: return "NotBound";
    case Errc::NoRoute: return "NoRoute";
    case Errc::RealmViolation: return "RealmViolation";
    case Errc::UnknownRealm: return "UnknownRealm";
    case Errc::MalformedMessage: return "MalformedMessage";
    case Errc::NoFibMatch: return "NoFibMatch";
    case Errc::HopLimitExceeded: return "HopLimitExceeded";
    case Errc::UnsupportedPair: return "UnsupportedPair";
    case Errc::MissingFcn: return "MissingFcn";
    case Errc::AccessDenied: return "AccessDenied";
    case Errc::Unreachable: return "Unreachable";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::InvalidStep: return "InvalidStep";
  }
  return "Unknown";
}

} // namespace internames
