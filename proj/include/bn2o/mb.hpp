#ifndef BN2O_MB_HPP
#define BN2O_MB_HPP

#include <string>
#include <vector>

#include "bn2o/network.hpp"
#include "bn2o/report.hpp"

namespace bn2o {

/// Per-disease marginal conditionals derived from the shared noisy-OR
/// parameters. For a linked pair (i, j):
///
///   alpha     = (1 - leak_j) * prod_{k != i} (1 - q_kj * p(d_k+))
///   p_present = p(f_j+ | d_i+) = 1 - (1 - q_ij) * alpha
///   p_absent  = p(f_j+ | d_i-) = 1 - alpha
///
/// Unlinked pairs are uninformative (the two conditionals coincide) and are
/// not stored. Derivation happens once per network; the per-finding products
/// switch to log space above 32 linked diseases so findings with hundreds of
/// causes do not underflow.
class MbConditionals {
public:
  struct Pair {
    int disease;
    int finding;
    double q;
    double log_alpha;
    double alpha;
    double p_present;
    double p_absent;
  };

  static MbConditionals derive(const Network& net);

  /// Linked pairs for finding j, in link order; parallel to finding_parents.
  const std::vector<Pair>& pairs_for_finding(int finding_ordinal) const {
    return by_finding_[finding_ordinal];
  }

  /// Audit export: disease,finding,alpha,p_present,p_absent.
  std::string to_csv(const Network& net) const;

private:
  std::vector<std::vector<Pair>> by_finding_;
};

/// Posteriors under the multimembership Bayes model: each disease updated in
/// isolation with the odds-likelihood form of Bayes' theorem. Positive
/// findings contribute lambda = p_present/p_absent, negative findings
/// lambda = 1 - q_ij, unobserved and unlinked findings lambda = 1.
/// Odds that leave the representable range are saturated to 0/1 and flagged
/// in the report meta.
PosteriorReport mb_posteriors(const Network& net, const CaseEvidence& evidence,
                              const MbConditionals& conditionals);

/// One-shot convenience; derives the conditionals first.
PosteriorReport mb_posteriors(const Network& net, const CaseEvidence& evidence);

/// The odds decomposition behind one disease's update, for audit:
/// posterior_odds = prior_odds * prod(lambda).
struct OddsUpdate {
  double prior_odds = 0.0;
  // (finding ordinal, lambda) per observed finding, positives then
  // negatives in ordinal order; unlinked findings carry lambda = 1
  std::vector<std::pair<int, double>> likelihood_ratios;
  double posterior_odds = 0.0;
  double posterior_probability = 0.0;
};

OddsUpdate mb_odds_update(const Network& net, const CaseEvidence& evidence,
                          const MbConditionals& conditionals, std::string_view disease_id);

}  // namespace bn2o

#endif
