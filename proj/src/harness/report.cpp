#include "steklov/harness/report.hpp"

#include <json.hpp>

namespace steklov {

using nlohmann::json;

RateEstimate estimate_rate_from_norms(const std::vector<double>& step_norms) {
  if (step_norms.size() < 3) {
    throw InsufficientData("rate estimation needs at least 3 iterations, got " + std::to_string(step_norms.size()));
  }
  RateEstimate est;
  for (std::size_t k = 0; k + 1 < step_norms.size(); ++k) {
    est.ratios.push_back(step_norms[k] > 0.0 ? step_norms[k + 1] / step_norms[k] : 0.0);
  }
  const std::size_t tail = std::min<std::size_t>(5, est.ratios.size());
  bool decreasing = true;
  for (std::size_t i = est.ratios.size() - tail + 1; i < est.ratios.size(); ++i) {
    decreasing = decreasing && est.ratios[i] < est.ratios[i - 1];
  }
  est.superlinear_flag = decreasing && est.ratios.back() < 0.5;
  return est;
}

RateEstimate estimate_rate(const std::vector<IterationRecord>& records) {
  std::vector<double> norms;
  norms.reserve(records.size());
  for (const auto& r : records) norms.push_back(r.step_norm);
  return estimate_rate_from_norms(norms);
}

namespace {

ReportSummary build(const RunSpec& spec, const ObjectiveSpec& objective, const std::vector<IterationRecord>& records,
                    StopReason stop, double final_radius) {
  if (records.empty()) throw InsufficientData("run produced no iterations");
  ReportSummary s;
  s.problem = spec.problem;
  s.dim = objective.dim;
  s.algorithm = to_string(spec.solver.algorithm);
  s.estimator = to_string(spec.solver.estimator.method);
  s.stop_reason = to_string(stop);
  s.iterations = static_cast<int>(records.size());
  s.x_final = records.back().x;
  s.final_radius = final_radius;
  s.distance_to_known_minimizer = objective.minimizer ? (s.x_final - *objective.minimizer).norm() : 0.0;
  s.eps2d_radius = 2.0 * diameter(make_domain(spec.solver.shape, final_radius, objective.dim));
  s.eps2d_satisfied = objective.minimizer.has_value() && s.distance_to_known_minimizer <= s.eps2d_radius;
  if (records.size() >= 3) {
    const RateEstimate rate = estimate_rate(records);
    s.ratio_series = rate.ratios;
    s.superlinear_flag = rate.superlinear_flag;
  }
  s.final_ratio = s.ratio_series.empty() ? 0.0 : s.ratio_series.back();
  return s;
}

}  // namespace

ReportSummary summarize(const RunSpec& spec, const ObjectiveSpec& objective, const SolverResult& result) {
  return build(spec, objective, result.records, result.stop_reason, result.final_domain.radius);
}

ReportSummary summary_from_trace(const RunSpec& spec, const ObjectiveSpec& objective,
                                 const std::vector<IterationRecord>& records) {
  if (records.empty()) throw InsufficientData("empty trace");
  const IterationRecord& last = records.back();
  StopReason stop = StopReason::max_iters;
  if (last.l < 0) {
    stop = StopReason::line_search_exhausted;
  } else if (last.step_norm < spec.solver.step_tol) {
    stop = StopReason::step_tol;
  }
  return build(spec, objective, records, stop, last.radius);
}

std::string to_json(const ReportSummary& s) {
  json j = {{"problem", s.problem},
            {"dim", s.dim},
            {"algorithm", s.algorithm},
            {"estimator", s.estimator},
            {"stop_reason", s.stop_reason},
            {"iterations", s.iterations},
            {"x_final", std::vector<double>(s.x_final.data(), s.x_final.data() + s.x_final.size())},
            {"final_radius", s.final_radius},
            {"distance_to_known_minimizer", s.distance_to_known_minimizer},
            {"eps2d_radius", s.eps2d_radius},
            {"eps2d_satisfied", s.eps2d_satisfied},
            {"final_ratio", s.final_ratio},
            {"ratio_series", s.ratio_series},
            {"superlinear_flag", s.superlinear_flag}};
  if (s.wall_time) j["wall_time"] = *s.wall_time;
  if (s.baseline_iterations) j["baseline_iterations"] = *s.baseline_iterations;
  return j.dump(2) + "\n";
}

ReportSummary summary_from_json(std::string_view text) {
  ReportSummary s;
  try {
    const json j = json::parse(text);
    s.problem = j.at("problem").get<std::string>();
    s.dim = j.at("dim").get<int>();
    s.algorithm = j.at("algorithm").get<std::string>();
    s.estimator = j.at("estimator").get<std::string>();
    s.stop_reason = j.at("stop_reason").get<std::string>();
    s.iterations = j.at("iterations").get<int>();
    const auto x = j.at("x_final").get<std::vector<double>>();
    s.x_final = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
    s.final_radius = j.at("final_radius").get<double>();
    s.distance_to_known_minimizer = j.at("distance_to_known_minimizer").get<double>();
    s.eps2d_radius = j.at("eps2d_radius").get<double>();
    s.eps2d_satisfied = j.at("eps2d_satisfied").get<bool>();
    s.final_ratio = j.at("final_ratio").get<double>();
    s.ratio_series = j.at("ratio_series").get<std::vector<double>>();
    s.superlinear_flag = j.at("superlinear_flag").get<bool>();
    if (j.contains("wall_time")) s.wall_time = j.at("wall_time").get<double>();
    if (j.contains("baseline_iterations")) s.baseline_iterations = j.at("baseline_iterations").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed summary: ") + e.what());
  }
  return s;
}

bool same_outcome(const ReportSummary& a, const ReportSummary& b) {
  return a.problem == b.problem && a.dim == b.dim && a.algorithm == b.algorithm && a.estimator == b.estimator &&
         a.stop_reason == b.stop_reason && a.iterations == b.iterations && a.x_final == b.x_final &&
         a.final_radius == b.final_radius && a.distance_to_known_minimizer == b.distance_to_known_minimizer &&
         a.eps2d_radius == b.eps2d_radius && a.eps2d_satisfied == b.eps2d_satisfied && a.final_ratio == b.final_ratio &&
         a.ratio_series == b.ratio_series && a.superlinear_flag == b.superlinear_flag;
}

}  // namespace steklov
