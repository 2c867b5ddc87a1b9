#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypbc {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  IoError,
  // linear algebra
  NotDiagonalizable,
  IllConditionedBasis,
  SingularInput,
  OffDiagonalResidual,
  NotTypeII,
  AllPivotsFail,
  SingularPivot,
  // boundary-condition synthesis
  ZeroCoefficient,
  ZeroKappa,
  RankDeficientOverride,
  AssumptionViolated,
  // discrete operators
  BCViolated,
  EllipticityLost,
  RankDeficientBC,
  // time stepping
  UnstableCoefficients,
  CFLViolation,
  BlockMatchingFailure,
  // presets
  GenericityViolated,
  NonPositiveSymmetrizer,
  NormalizationViolated,
  NotSymmetrizable,
  // configuration
  UnknownKey,
  MissingInput,
  ConflictingSources,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypbc
