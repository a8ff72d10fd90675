#include "gelab/econometrics/errors.hpp"

namespace gelab::econometrics {

const char* to_string(EstimationErrc e) {
  switch (e) {
    case EstimationErrc::EmptyGroup: return "EmptyGroup";
    case EstimationErrc::ZeroVolumeWeek: return "ZeroVolumeWeek";
    case EstimationErrc::InsufficientOverlap: return "InsufficientOverlap";
    case EstimationErrc::DegenerateSeries: return "DegenerateSeries";
    case EstimationErrc::EmptyControlSet: return "EmptyControlSet";
    case EstimationErrc::InvalidSpec: return "InvalidSpec";
    case EstimationErrc::RankDeficient: return "RankDeficient";
    case EstimationErrc::InsufficientSupport: return "InsufficientSupport";
    case EstimationErrc::GroupsOverlap: return "GroupsOverlap";
    case EstimationErrc::TooFewItems: return "TooFewItems";
    case EstimationErrc::NoPrePeriod: return "NoPrePeriod";
    case EstimationErrc::NoPostPeriod: return "NoPostPeriod";
    case EstimationErrc::WindowTooShort: return "WindowTooShort";
    case EstimationErrc::SeriesTooShort: return "SeriesTooShort";
    case EstimationErrc::DateOutOfRange: return "DateOutOfRange";
  }
  return "EstimationError";
}

}  // namespace gelab::econometrics
