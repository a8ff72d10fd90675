#pragma once

#include <nlohmann/json.hpp>

#include "gelab/csv.hpp"
#include "gelab/econometrics/break_test.hpp"
#include "gelab/econometrics/correlation.hpp"
#include "gelab/econometrics/did.hpp"
#include "gelab/econometrics/local_poly.hpp"
#include "gelab/econometrics/price_index.hpp"
#include "gelab/econometrics/pretrends.hpp"
#include "gelab/econometrics/rd.hpp"
#include "gelab/econometrics/rk.hpp"

// JSON records carry the estimate, SE, CI bounds, sample sizes and an echo of the spec.
// CSV tables carry the same headline fields, one row per estimate.

namespace gelab::econometrics {

const char* to_string(Kernel k);
const char* to_string(SeType s);
const char* to_string(OutcomeVar o);

void to_json(nlohmann::json& j, const LocalPolyFit& fit);
void to_json(nlohmann::json& j, const RdEstimate& e);
void to_json(nlohmann::json& j, const RkEstimate& e);
void to_json(nlohmann::json& j, const DidEstimate& e);
void to_json(nlohmann::json& j, const PretrendsResult& r);
void to_json(nlohmann::json& j, const BreakTestResult& r);
void to_json(nlohmann::json& j, const PriceIndexSeries& s);
void to_json(nlohmann::json& j, const ControlSetResult& r);

CsvTable to_csv(const RdEstimate& e);
CsvTable to_csv(const RkEstimate& e);
CsvTable to_csv(const DidEstimate& e);
CsvTable to_csv(const PretrendsResult& r);
CsvTable to_csv(const std::vector<BreakTestResult>& results);
CsvTable to_csv(const PriceIndexSeries& s);

}  // namespace gelab::econometrics
