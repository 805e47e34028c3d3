#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magnomech {

enum class ErrorCode {
  InvalidArgument,
  RangeError,
  UnitError,
  ParseError,
  UnknownPreset,
  DegenerateParameters,
  UnstableDrift,
  SingularSystem,
  StepTooLarge,
  NonFiniteState,
  AsymmetricInput,
  NonPairedSpectrum,
  NegativeDiscriminant,
  EigenFailure,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by user configuration (bad file, bad flag, bad range)
/// rather than by the numerics.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace magnomech
