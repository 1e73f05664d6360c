#include "bn2o/report.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "bn2o/errors.hpp"

namespace bn2o {

const char* model_name(Model model) {
  switch (model) {
    case Model::NoisyOr: return "noisy-or";
    case Model::Multimembership: return "multimembership";
    case Model::SimpleBayes: return "simple-bayes";
  }
  return "?";
}

const char* method_name(Method method) {
  switch (method) {
    case Method::BruteForce: return "brute-force";
    case Method::Quickscore: return "quickscore";
    case Method::LikelihoodWeighting: return "likelihood-weighting";
    case Method::Analytic: return "analytic";
  }
  return "?";
}

Model model_from_name(const std::string& name) {
  if (name == "noisy-or") return Model::NoisyOr;
  if (name == "mb" || name == "multimembership") return Model::Multimembership;
  if (name == "sb" || name == "simple-bayes") return Model::SimpleBayes;
  throw ValidationError(ErrorCode::InvalidConfig, "unknown model '" + name + "'");
}

Method method_from_name(const std::string& name) {
  if (name == "brute" || name == "brute-force") return Method::BruteForce;
  if (name == "quickscore") return Method::Quickscore;
  if (name == "lw" || name == "likelihood-weighting") return Method::LikelihoodWeighting;
  if (name == "analytic") return Method::Analytic;
  throw ValidationError(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

std::string format_probability(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<int> rank_order(const std::vector<double>& posteriors) {
  std::vector<int> order(posteriors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (posteriors[a] != posteriors[b]) return posteriors[a] > posteriors[b];
    return a < b;
  });
  return order;
}

std::string posterior_report_csv(const PosteriorReport& report) {
  std::ostringstream out;
  out << "# model," << model_name(report.model) << "\n";
  out << "# method," << method_name(report.method) << "\n";
  if (report.evidence_probability) {
    out << "# evidence_probability," << format_probability(*report.evidence_probability) << "\n";
  }
  if (report.meta.seed) out << "# seed," << *report.meta.seed << "\n";
  if (report.meta.samples) out << "# samples," << *report.meta.samples << "\n";
  if (report.meta.converged) {
    out << "# converged," << (*report.meta.converged ? "true" : "false") << "\n";
  }
  if (report.meta.odds_saturated) out << "# odds_saturated,true\n";
  out << "rank,disease_id,posterior\n";
  const std::vector<int> order = rank_order(report.posteriors);
  for (std::size_t r = 0; r < order.size(); ++r) {
    out << (r + 1) << "," << report.disease_ids[order[r]] << ","
        << format_probability(report.posteriors[order[r]]) << "\n";
  }
  return out.str();
}

}  // namespace bn2o
