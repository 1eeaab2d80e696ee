// error.hpp
//
// Error type shared by every isokin module.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace isokin
{

enum class ErrorCode
{
  SingularInput,
  OrderViolation,
  NotSkew,
  AngleNearPi,
  UndefinedNormal,
  StateUndefined,
  RankDeficient,
  NoConvergence,
  Unreachable,
  NotSymmetric,
  NotIsochoric,
  IllConditioned,
  CheckFailed,
  NonRigidTopPlane,
  NegativeCavity,
  ZeroDisplacement,
  IdMismatch,
  ParseError,
  DuplicateId,
  NonFinite,
  IoError,
  InvalidArgument,
  UnknownCase,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `index` holds the stage index,
/// line number or offending item where the code has one.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message, std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return _code; }
  std::optional<std::size_t> index() const noexcept { return _index; }

private:
  ErrorCode _code;
  std::optional<std::size_t> _index;
};

} // namespace isokin
