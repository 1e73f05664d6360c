#ifndef BN2O_SB_HPP
#define BN2O_SB_HPP

#include <string>
#include <vector>

#include "bn2o/network.hpp"
#include "bn2o/report.hpp"

namespace bn2o {

/// Simple Bayes parameters derived from the shared noisy-OR set: priors
/// renormalized to sum to one (diseases become mutually exclusive and
/// exhaustive), and single-disease conditionals
///   c_ij = p(f_j+ | only d_i present) = 1 - (1 - q_ij)(1 - leak_j),
/// with q_ij = 0 for unlinked pairs, so c_ij falls back to the leak.
class SbParameters {
public:
  static SbParameters derive(const Network& net);

  const std::vector<double>& renormalized_priors() const { return priors_; }
  double conditional(int disease_ordinal, int finding_ordinal) const;

  std::string priors_csv(const Network& net) const;
  /// Linked pairs only; unlinked conditionals equal the finding leak.
  std::string conditionals_csv(const Network& net) const;

private:
  std::vector<double> priors_;
  std::vector<double> leaks_;
  // per finding: (disease ordinal, c_ij), sorted by ordinal
  std::vector<std::vector<Network::Arc>> linked_;
};

/// Posteriors under the simple Bayes model: per-disease likelihoods
/// accumulated in log space over the observed findings, then renormalized
/// over all diseases. Throws AllHypothesesExcluded when every disease has
/// zero likelihood.
PosteriorReport sb_posteriors(const Network& net, const CaseEvidence& evidence,
                              const SbParameters& params);
PosteriorReport sb_posteriors(const Network& net, const CaseEvidence& evidence);

}  // namespace bn2o

#endif
