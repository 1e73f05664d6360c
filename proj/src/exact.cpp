#include "bn2o/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bn2o/errors.hpp"
#include "bn2o/numeric.hpp"

namespace bn2o {

namespace {

std::vector<std::string> collect_ids(const Network& net) {
  std::vector<std::string> ids;
  ids.reserve(net.n_diseases());
  for (int i = 0; i < net.n_diseases(); ++i) ids.push_back(net.disease(i).id);
  return ids;
}

// Clamp only hairline excursions; anything worse means the accumulation went
// bad and must surface.
double guarded_posterior(double value, const std::string& disease_id) {
  constexpr double kGuard = 1e-9;
  if (!(value >= -kGuard && value <= 1.0 + kGuard)) {
    throw InferenceError(ErrorCode::NumericalInstability,
                         "posterior for '" + disease_id + "' left [0,1]: " +
                             std::to_string(value));
  }
  return std::clamp(value, 0.0, 1.0);
}

struct NegativeEvidenceResult {
  std::vector<double> posteriors;
  double evidence_probability;
};

// p(d_i+|F-) = a_i / (a_i + p(d_i-)) with a_i = p(d_i+) * prod_{j in F-} (1 - q_ij);
// the shared leak factors cancel from the odds but not from p(F-).
NegativeEvidenceResult negative_evidence_core(const Network& net, const BoundCase& bound) {
  const int n = net.n_diseases();
  std::vector<double> shrink(n, 1.0);
  double leak_product = 1.0;
  for (int j : bound.negative) {
    leak_product *= 1.0 - net.leak(j);
    for (const Network::Arc& arc : net.finding_parents(j)) {
      shrink[arc.ordinal] *= 1.0 - arc.q;
    }
  }

  NegativeEvidenceResult result;
  result.posteriors.resize(n);
  double evidence = leak_product;
  for (int i = 0; i < n; ++i) {
    const double a = net.prior(i) * shrink[i];
    const double b = 1.0 - net.prior(i);
    result.posteriors[i] = guarded_posterior(a / (a + b), net.disease(i).id);
    evidence *= a + b;
  }
  result.evidence_probability = evidence;
  return result;
}

}  // namespace

PosteriorReport brute_force_posteriors(const Network& net, const CaseEvidence& evidence,
                                       const ExactLimits& limits) {
  const BoundCase bound = bind_case(net, evidence);
  const int n = net.n_diseases();
  if (n > limits.max_diseases) {
    throw InferenceError(ErrorCode::TooManyDiseases,
                         std::to_string(n) + " diseases exceed the enumeration cap of " +
                             std::to_string(limits.max_diseases));
  }

  CompensatedSum denominator;
  std::vector<CompensatedSum> numerators(n);

  const std::uint64_t instance_count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < instance_count; ++mask) {
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      weight *= (mask >> i & 1) ? net.prior(i) : 1.0 - net.prior(i);
    }
    for (int j : bound.negative) {
      double absent = 1.0 - net.leak(j);
      for (const Network::Arc& arc : net.finding_parents(j)) {
        if (mask >> arc.ordinal & 1) absent *= 1.0 - arc.q;
      }
      weight *= absent;
      if (weight == 0.0) break;
    }
    if (weight != 0.0) {
      for (int j : bound.positive) {
        double absent = 1.0 - net.leak(j);
        for (const Network::Arc& arc : net.finding_parents(j)) {
          if (mask >> arc.ordinal & 1) absent *= 1.0 - arc.q;
        }
        weight *= 1.0 - absent;
        if (weight == 0.0) break;
      }
    }
    if (weight == 0.0) continue;

    denominator.add(weight);
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) numerators[i].add(weight);
    }
  }

  const double evidence_probability = denominator.value();
  if (evidence_probability <= 0.0) {
    throw InferenceError(ErrorCode::ZeroEvidenceProbability,
                         "case '" + evidence.case_id + "' is impossible under this network");
  }

  PosteriorReport report;
  report.model = Model::NoisyOr;
  report.method = Method::BruteForce;
  report.disease_ids = collect_ids(net);
  report.posteriors.resize(n);
  for (int i = 0; i < n; ++i) {
    report.posteriors[i] =
        guarded_posterior(numerators[i].value() / evidence_probability, net.disease(i).id);
  }
  report.evidence_probability = evidence_probability;
  return report;
}

PosteriorReport quickscore_posteriors(const Network& net, const CaseEvidence& evidence,
                                      const ExactLimits& limits) {
  const BoundCase bound = bind_case(net, evidence);
  const int n = net.n_diseases();
  const int f = static_cast<int>(bound.positive.size());
  if (f > limits.max_positive_findings) {
    throw InferenceError(ErrorCode::TooManyPositiveFindings,
                         std::to_string(f) + " positive findings exceed the expansion cap of " +
                             std::to_string(limits.max_positive_findings));
  }

  PosteriorReport report;
  report.model = Model::NoisyOr;
  report.method = Method::Quickscore;
  report.disease_ids = collect_ids(net);
  report.posteriors.resize(n);

  if (f == 0) {
    NegativeEvidenceResult neg = negative_evidence_core(net, bound);
    report.posteriors = std::move(neg.posteriors);
    report.evidence_probability = neg.evidence_probability;
    return report;
  }

  // Factors contributed by the always-absent negative findings, shared by
  // every subset term. The expansion alternates signs and can cancel down ten
  // or more orders of magnitude, so everything runs in extended precision.
  std::vector<long double> negative_shrink(n, 1.0L);
  long double negative_leak = 1.0L;
  std::vector<char> involved(n, 0);
  for (int j : bound.negative) {
    negative_leak *= 1.0L - static_cast<long double>(net.leak(j));
    for (const Network::Arc& arc : net.finding_parents(j)) {
      negative_shrink[arc.ordinal] *= 1.0L - static_cast<long double>(arc.q);
      involved[arc.ordinal] = 1;
    }
  }
  for (int j : bound.positive) {
    for (const Network::Arc& arc : net.finding_parents(j)) involved[arc.ordinal] = 1;
  }
  std::vector<int> involved_list;
  for (int i = 0; i < n; ++i) {
    if (involved[i]) involved_list.push_back(i);
  }

  CompensatedSumExt denominator;
  std::vector<CompensatedSumExt> numerators(n);
  long double sum_abs = 0.0L;

  std::vector<long double> shrink(n);   // per-subset (1-q) product per disease
  std::vector<long double> bracket(n);  // p+ * shrink + p-
  const std::uint32_t subset_count = std::uint32_t{1} << f;
  for (std::uint32_t subset = 0; subset < subset_count; ++subset) {
    for (int i : involved_list) shrink[i] = negative_shrink[i];
    long double leak_factor = negative_leak;
    int flipped = 0;
    for (int b = 0; b < f; ++b) {
      if (!(subset >> b & 1)) continue;
      ++flipped;
      const int j = bound.positive[b];
      leak_factor *= 1.0L - static_cast<long double>(net.leak(j));
      for (const Network::Arc& arc : net.finding_parents(j)) {
        shrink[arc.ordinal] *= 1.0L - static_cast<long double>(arc.q);
      }
    }

    long double bracket_product = 1.0L;
    for (int i : involved_list) {
      const long double p = net.prior(i);
      bracket[i] = p * shrink[i] + (1.0L - p);
      bracket_product *= bracket[i];
    }

    long double term = leak_factor * bracket_product;
    if (flipped & 1) term = -term;
    sum_abs += std::abs(term);
    denominator.add(term);
    for (int i : involved_list) {
      numerators[i].add(term * static_cast<long double>(net.prior(i)) * shrink[i] / bracket[i]);
    }
  }

  const long double evidence_probability = denominator.value();
  // Extended-precision term rounding sits near 1e-17 relative; a computed sum
  // below this floor is a true zero up to round-off, not a tiny probability.
  if (evidence_probability <= 0.0L || evidence_probability < sum_abs * 1e-15L) {
    throw InferenceError(ErrorCode::ZeroEvidenceProbability,
                         "case '" + evidence.case_id + "' is impossible under this network");
  }

  for (int i = 0; i < n; ++i) {
    report.posteriors[i] =
        involved[i] ? guarded_posterior(
                          static_cast<double>(numerators[i].value() / evidence_probability),
                          net.disease(i).id)
                    : net.prior(i);
  }
  report.evidence_probability = static_cast<double>(evidence_probability);
  return report;
}

PosteriorReport negative_evidence_posteriors(const Network& net, const CaseEvidence& evidence) {
  const BoundCase bound = bind_case(net, evidence);
  if (!bound.positive.empty()) {
    throw InferenceError(ErrorCode::PositiveEvidencePresent,
                         "case '" + evidence.case_id + "' has positive findings; use brute force "
                         "or quickscore");
  }

  NegativeEvidenceResult neg = negative_evidence_core(net, bound);
  PosteriorReport report;
  report.model = Model::NoisyOr;
  report.method = Method::Analytic;
  report.disease_ids = collect_ids(net);
  report.posteriors = std::move(neg.posteriors);
  report.evidence_probability = neg.evidence_probability;
  return report;
}

}  // namespace bn2o
