#include "bn2o/sb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bn2o/errors.hpp"
#include "bn2o/numeric.hpp"

namespace bn2o {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

SbParameters SbParameters::derive(const Network& net) {
  SbParameters params;

  CompensatedSum total;
  for (int i = 0; i < net.n_diseases(); ++i) total.add(net.prior(i));
  const double sum = total.value();  // > 0: priors are strictly positive
  params.priors_.reserve(net.n_diseases());
  for (int i = 0; i < net.n_diseases(); ++i) params.priors_.push_back(net.prior(i) / sum);

  params.leaks_.reserve(net.n_findings());
  for (int j = 0; j < net.n_findings(); ++j) params.leaks_.push_back(net.leak(j));

  params.linked_.resize(net.n_findings());
  for (int j = 0; j < net.n_findings(); ++j) {
    auto& row = params.linked_[j];
    row.reserve(net.finding_parents(j).size());
    for (const Network::Arc& arc : net.finding_parents(j)) {
      row.push_back({arc.ordinal, 1.0 - (1.0 - arc.q) * (1.0 - net.leak(j))});
    }
    std::sort(row.begin(), row.end(),
              [](const Network::Arc& a, const Network::Arc& b) { return a.ordinal < b.ordinal; });
  }
  return params;
}

double SbParameters::conditional(int disease_ordinal, int finding_ordinal) const {
  const auto& row = linked_[finding_ordinal];
  const auto it = std::lower_bound(
      row.begin(), row.end(), disease_ordinal,
      [](const Network::Arc& arc, int ordinal) { return arc.ordinal < ordinal; });
  if (it != row.end() && it->ordinal == disease_ordinal) return it->q;
  return leaks_[finding_ordinal];
}

std::string SbParameters::priors_csv(const Network& net) const {
  std::ostringstream out;
  out << "disease,renormalized_prior\n";
  for (int i = 0; i < net.n_diseases(); ++i) {
    out << net.disease(i).id << "," << format_probability(priors_[i]) << "\n";
  }
  return out.str();
}

std::string SbParameters::conditionals_csv(const Network& net) const {
  std::ostringstream out;
  out << "disease,finding,conditional\n";
  for (int j = 0; j < net.n_findings(); ++j) {
    for (const Network::Arc& arc : linked_[j]) {
      out << net.disease(arc.ordinal).id << "," << net.finding(j).id << ","
          << format_probability(arc.q) << "\n";
    }
  }
  return out.str();
}

PosteriorReport sb_posteriors(const Network& net, const CaseEvidence& evidence,
                              const SbParameters& params) {
  const BoundCase bound = bind_case(net, evidence);
  const int n = net.n_diseases();

  // log p_sB(d_i+) + sum_j log p(f'_j | only d_i); -inf marks an excluded
  // hypothesis (a positive finding it cannot produce, or a negative one it
  // would guarantee)
  std::vector<double> log_weight(n);
  for (int i = 0; i < n; ++i) {
    double lw = std::log(params.renormalized_priors()[i]);
    for (int j : bound.positive) lw += std::log(params.conditional(i, j));
    for (int j : bound.negative) lw += std::log1p(-params.conditional(i, j));
    log_weight[i] = lw;
  }

  const double peak = *std::max_element(log_weight.begin(), log_weight.end());
  if (peak == kNegInf) {
    throw InferenceError(ErrorCode::AllHypothesesExcluded,
                         "case '" + evidence.case_id +
                             "': every disease has zero likelihood under the simple Bayes model");
  }

  double normalizer = 0.0;
  for (int i = 0; i < n; ++i) normalizer += std::exp(log_weight[i] - peak);

  PosteriorReport report;
  report.model = Model::SimpleBayes;
  report.method = Method::Analytic;
  report.disease_ids.reserve(n);
  for (int i = 0; i < n; ++i) report.disease_ids.push_back(net.disease(i).id);
  report.posteriors.resize(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    report.posteriors[i] = std::exp(log_weight[i] - peak) / normalizer;
    sum += report.posteriors[i];
  }
  // pin the mutual-exclusivity invariant down to the last few ulps
  for (int i = 0; i < n; ++i) report.posteriors[i] /= sum;
  return report;
}

PosteriorReport sb_posteriors(const Network& net, const CaseEvidence& evidence) {
  return sb_posteriors(net, evidence, SbParameters::derive(net));
}

}  // namespace bn2o
