// error.cpp

#include "isokin/error.hpp"

namespace isokin
{

std::string_view to_string(ErrorCode code)
{
  switch(code)
  {
  case ErrorCode::SingularInput: return "SingularInput";
  case ErrorCode::OrderViolation: return "OrderViolation";
  case ErrorCode::NotSkew: return "NotSkew";
  case ErrorCode::AngleNearPi: return "AngleNearPi";
  case ErrorCode::UndefinedNormal: return "UndefinedNormal";
  case ErrorCode::StateUndefined: return "StateUndefined";
  case ErrorCode::RankDeficient: return "RankDeficient";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::Unreachable: return "Unreachable";
  case ErrorCode::NotSymmetric: return "NotSymmetric";
  case ErrorCode::NotIsochoric: return "NotIsochoric";
  case ErrorCode::IllConditioned: return "IllConditioned";
  case ErrorCode::CheckFailed: return "CheckFailed";
  case ErrorCode::NonRigidTopPlane: return "NonRigidTopPlane";
  case ErrorCode::NegativeCavity: return "NegativeCavity";
  case ErrorCode::ZeroDisplacement: return "ZeroDisplacement";
  case ErrorCode::IdMismatch: return "IdMismatch";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::DuplicateId: return "DuplicateId";
  case ErrorCode::NonFinite: return "NonFinite";
  case ErrorCode::IoError: return "IoError";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::UnknownCase: return "UnknownCase";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), _code(code), _index(index)
{
}

} // namespace isokin
