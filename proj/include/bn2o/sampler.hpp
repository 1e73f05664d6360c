#ifndef BN2O_SAMPLER_HPP
#define BN2O_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bn2o/network.hpp"
#include "bn2o/report.hpp"

namespace bn2o {

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 100000;
  std::uint64_t batch_size = 5000;
  double convergence_tol = 0.005;
  int top_k_watch = 20;
  int workers = 1;
  // refresh the importance distribution toward the current posterior
  // marginals after every batch instead of sampling from the priors
  bool self_importance = false;
};

struct BatchSnapshot {
  std::uint64_t samples_drawn = 0;
  // (disease ordinal, estimate), top-k by estimate, ties by ordinal
  std::vector<std::pair<int, double>> top_estimates;
};

struct SamplerTrace {
  std::uint64_t samples_drawn = 0;
  bool converged = false;
  std::vector<BatchSnapshot> batches;
  double effective_sample_size = 0.0;
};

struct LwResult {
  PosteriorReport report;
  SamplerTrace trace;
};

/// Likelihood-weighted posterior estimation. Disease instances are drawn
/// from the importance distribution (the priors unless self_importance is
/// set), each sample weighted by the likelihood of the observed findings
/// times the importance correction, in log space throughout.
///
/// The draw for sample index s comes from a Philox stream keyed by
/// (seed, s) and partial sums merge in fixed index order, so the result is a
/// deterministic function of (net, case, cfg) regardless of worker count.
/// Stops early once check_convergence fires.
LwResult likelihood_weighting_posteriors(const Network& net, const CaseEvidence& evidence,
                                         const SamplerConfig& cfg);

/// True iff every disease watched by the latest snapshot (top-k by current
/// estimate) moved less than convergence_tol between the last two batches.
/// A watched disease absent from the previous snapshot counts as movement.
/// Throws InsufficientBatches with fewer than two batches.
bool check_convergence(const SamplerTrace& trace, const SamplerConfig& cfg);

/// Audit export: one row per batch, one column per watched disease.
std::string trace_csv(const SamplerTrace& trace, const Network& net);

}  // namespace bn2o

#endif
