#pragma once

#include <string>

#include "gelab/error.hpp"

namespace gelab::econometrics {

enum class EstimationErrc {
  EmptyGroup,
  ZeroVolumeWeek,
  InsufficientOverlap,
  DegenerateSeries,
  EmptyControlSet,
  InvalidSpec,
  RankDeficient,
  InsufficientSupport,
  GroupsOverlap,
  TooFewItems,
  NoPrePeriod,
  NoPostPeriod,
  WindowTooShort,
  SeriesTooShort,
  DateOutOfRange,
};

const char* to_string(EstimationErrc e);

class EstimationError : public Error {
 public:
  EstimationError(EstimationErrc kind, const std::string& message, Details details = {})
      : Error(to_string(kind), message, std::move(details)), kind_(kind) {}
  EstimationErrc kind() const noexcept { return kind_; }

 private:
  EstimationErrc kind_;
};

}  // namespace gelab::econometrics
