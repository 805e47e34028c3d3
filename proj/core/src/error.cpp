#include "magnomech/error.hpp"

namespace magnomech {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::UnitError: return "UnitError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::UnstableDrift: return "UnstableDrift";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::NonPairedSpectrum: return "NonPairedSpectrum";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::RangeError:
    case ErrorCode::UnitError:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownPreset:
      return true;
    default:
      return false;
  }
}

}  // namespace magnomech
