#pragma once

#include <stdexcept>
#include <string>

namespace phqm {

enum class Errc {
  Defective,
  NotHermitian,
  SpectrumOutOfDomain,
  DimensionMismatch,
  UnpairedComplexEigenvalue,
  ComplexSpectrum,
  LengthMismatch,
  NotPseudoHermitian,
  NotPositiveDefinite,
  Singular,
  Unsolvable,
  InvalidArgument,
  NonPositiveD,
  RealityViolated,
  GridTooSmall,
  UnsupportedKind,
  ZeroVector,
  IdenticalStates,
  StepOverflow,
  DegenerateStructure,
  OutOfDomain,
  OutOfRange,
  CFLViolation,
  SchemaError,
  NothingToPlot,
};

// Stable machine-readable name, used by the CLI error records.
const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace phqm
