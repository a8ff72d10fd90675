#include "gelab/econometrics/serialize.hpp"

#include <string>

namespace gelab::econometrics {

using nlohmann::json;

const char* to_string(Kernel k) {
  switch (k) {
    case Kernel::triangular: return "triangular";
    case Kernel::uniform: return "uniform";
    case Kernel::epanechnikov: return "epanechnikov";
  }
  return "?";
}

const char* to_string(SeType s) { return s == SeType::hc1 ? "hc1" : "cluster_item"; }

const char* to_string(OutcomeVar o) { return o == OutcomeVar::price ? "price" : "volume"; }

namespace {

json window_json(const DateWindow& w) {
  return json{{"start", w.start ? json(format_date(*w.start)) : json(nullptr)},
              {"end", w.end ? json(format_date(*w.end)) : json(nullptr)}};
}

json ids_json(const std::vector<ItemId>& ids) {
  json a = json::array();
  for (ItemId id : ids) a.push_back(id.value);
  return a;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

}  // namespace

void to_json(json& j, const LocalPolyFit& fit) {
  json coef = json::array();
  json se = json::array();
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
    coef.push_back(fit.coefficients(i));
    se.push_back(std::sqrt(fit.covariance(i, i)));
  }
  j = json{{"center", fit.center}, {"bandwidth", fit.bandwidth}, {"order", fit.order},
           {"n", fit.n_used}, {"coefficients", coef}, {"se", se}};
}

void to_json(json& j, const RdEstimate& e) {
  j = json{{"design", "rd"},
           {"estimate", e.beta},
           {"se", e.se},
           {"ci_low", e.ci_low},
           {"ci_high", e.ci_high},
           {"p_value", e.p_value},
           {"n_left", e.n_left},
           {"n_right", e.n_right},
           {"n_dropped_zero_volume", e.n_dropped_zero_volume},
           {"left_fit", e.left},
           {"right_fit", e.right},
           {"spec",
            {{"cutoff", e.spec.cutoff},
             {"bandwidth", e.spec.bandwidth},
             {"order", e.spec.order},
             {"kernel", to_string(e.spec.kernel)},
             {"level", e.spec.level},
             {"window", window_json(e.spec.window)}}}};
}

void to_json(json& j, const RkEstimate& e) {
  j = json{{"design", "rk"},
           {"estimate", e.delta},
           {"se", e.se},
           {"ci_low", e.ci_low},
           {"ci_high", e.ci_high},
           {"p_value", e.p_value},
           {"slope_below", e.slope_below},
           {"slope_above", e.slope_above},
           {"n_below", e.n_below},
           {"n_above", e.n_above},
           {"n_dropped_zero_volume", e.n_dropped_zero_volume},
           {"below_fit", e.below},
           {"above_fit", e.above},
           {"spec",
            {{"kink", e.spec.kink},
             {"lower", e.spec.lower},
             {"upper", e.spec.upper.value_or(0.0)},
             {"order", e.spec.order},
             {"kernel", to_string(e.spec.kernel)},
             {"price_unit", e.spec.price_unit},
             {"tax_slope_below", e.spec.tax_slope_below},
             {"tax_slope_above", e.spec.tax_slope_above},
             {"level", e.spec.level},
             {"window", window_json(e.spec.window)}}}};
}

void to_json(json& j, const DidEstimate& e) {
  j = json{{"design", "did"},
           {"estimate", e.theta},
           {"se", e.se_theta},
           {"ci_low", e.ci_low},
           {"ci_high", e.ci_high},
           {"p_value", e.p_value},
           {"phi", e.phi},
           {"se_phi", e.se_phi},
           {"outcome_mean", e.outcome_mean},
           {"log_outcome_mean", e.log_outcome_mean},
           {"n_obs", e.n_obs},
           {"n_items", e.n_items},
           {"n_dropped_nonpositive", e.n_dropped_nonpositive},
           {"spec",
            {{"treated", ids_json(e.spec.treated)},
             {"control", ids_json(e.spec.control)},
             {"implementation", format_date(e.spec.implementation)},
             {"window", window_json(e.spec.window)},
             {"outcome", to_string(e.spec.outcome)},
             {"se", to_string(e.spec.se)},
             {"method", e.spec.method == DidMethod::within ? "within" : "dummies"},
             {"level", e.spec.level}}}};
}

void to_json(json& j, const PretrendsResult& r) {
  json weekly = json::array();
  for (const auto& w : r.weekly) {
    weekly.push_back({{"week", w.week}, {"week_start", format_date(w.week_start)},
                      {"group", w.treated ? "treated" : "control"},
                      {"mean_log_outcome", w.mean_log_outcome}, {"n", w.n}});
  }
  j = json{{"design", "pretrends"},   {"estimate", r.difference},   {"se", r.se},
           {"ci_low", r.ci_low},      {"ci_high", r.ci_high},       {"p_value", r.p_value},
           {"slope_treated", r.slope_treated}, {"slope_control", r.slope_control},
           {"n_obs", r.n_obs},        {"n_weeks", r.n_weeks},       {"weekly", weekly}};
}

void to_json(json& j, const BreakTestResult& r) {
  j = json{{"design", "breaks"},
           {"series_id", r.series_id},
           {"mode", r.mode == BreakMode::known_date ? "known_date" : "scan"},
           {"n", r.n},
           {"n_candidates", r.n_candidates},
           {"break_date", format_date(r.break_date)},
           {"variance_break_date", format_date(r.variance_break_date)},
           {"mean_stat", r.mean_stat},
           {"mean_p", r.mean_p},
           {"variance_stat", r.variance_stat},
           {"variance_p", r.variance_p},
           {"combined_p", r.combined_p},
           {"mean_break", r.mean_break},
           {"variance_break", r.variance_break},
           {"break_detected", r.break_detected},
           {"level", r.level}};
}

void to_json(json& j, const PriceIndexSeries& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"week", p.week}, {"week_start", format_date(p.week_start)},
                   {"mean_price", p.mean_price}, {"total_volume", p.total_volume}, {"index", p.index}});
  }
  j = json{{"design", "index"}, {"base_date", format_date(s.base_date)}, {"group", ids_json(s.group)},
           {"points", pts}};
}

void to_json(json& j, const ControlSetResult& r) {
  json excluded = json::array();
  for (const auto& [id, why] : r.excluded) excluded.push_back({{"item_id", id.value}, {"reason", why}});
  j = json{{"control", ids_json(r.control)}, {"universe", ids_json(r.universe)}, {"excluded", excluded}};
}

CsvTable to_csv(const RdEstimate& e) {
  return {{"design", "estimate", "se", "ci_low", "ci_high", "p_value", "n_left", "n_right", "cutoff", "bandwidth"},
          {{"rd", fmt(e.beta), fmt(e.se), fmt(e.ci_low), fmt(e.ci_high), fmt(e.p_value), fmt(e.n_left),
            fmt(e.n_right), fmt(e.spec.cutoff), fmt(e.spec.bandwidth)}}};
}

CsvTable to_csv(const RkEstimate& e) {
  return {{"design", "estimate", "se", "ci_low", "ci_high", "p_value", "slope_below", "slope_above", "n_below",
           "n_above", "kink"},
          {{"rk", fmt(e.delta), fmt(e.se), fmt(e.ci_low), fmt(e.ci_high), fmt(e.p_value), fmt(e.slope_below),
            fmt(e.slope_above), fmt(e.n_below), fmt(e.n_above), fmt(e.spec.kink)}}};
}

CsvTable to_csv(const DidEstimate& e) {
  return {{"design", "outcome", "estimate", "se", "ci_low", "ci_high", "p_value", "phi", "se_phi", "outcome_mean",
           "n_obs"},
          {{"did", to_string(e.spec.outcome), fmt(e.theta), fmt(e.se_theta), fmt(e.ci_low), fmt(e.ci_high),
            fmt(e.p_value), fmt(e.phi), fmt(e.se_phi), fmt(e.outcome_mean), fmt(e.n_obs)}}};
}

CsvTable to_csv(const PretrendsResult& r) {
  CsvTable t{{"week", "week_start", "group", "mean_log_outcome", "n"}, {}};
  for (const auto& w : r.weekly) {
    t.rows.push_back({std::to_string(w.week), format_date(w.week_start), w.treated ? "treated" : "control",
                      fmt(w.mean_log_outcome), fmt(w.n)});
  }
  return t;
}

CsvTable to_csv(const std::vector<BreakTestResult>& results) {
  CsvTable t{{"series_id", "mode", "break_date", "mean_stat", "mean_p", "variance_stat", "variance_p",
              "combined_p", "break_detected"},
             {}};
  for (const auto& r : results) {
    t.rows.push_back({r.series_id, r.mode == BreakMode::known_date ? "known_date" : "scan",
                      format_date(r.break_date), fmt(r.mean_stat), fmt(r.mean_p), fmt(r.variance_stat),
                      fmt(r.variance_p), fmt(r.combined_p), r.break_detected ? "true" : "false"});
  }
  return t;
}

CsvTable to_csv(const PriceIndexSeries& s) {
  CsvTable t{{"week", "week_start", "mean_price", "total_volume", "index"}, {}};
  for (const auto& p : s.points) {
    t.rows.push_back({std::to_string(p.week), format_date(p.week_start), fmt(p.mean_price), fmt(p.total_volume),
                      fmt(p.index)});
  }
  return t;
}

}  // namespace gelab::econometrics
