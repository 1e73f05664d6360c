#ifndef BN2O_EXACT_HPP
#define BN2O_EXACT_HPP

#include "bn2o/network.hpp"
#include "bn2o/report.hpp"

namespace bn2o {

// Size caps for the exact methods. Both are configuration: enumeration is
// Theta(2^n) over diseases, the inclusion-exclusion expansion Theta(2^|F+|)
// over positive findings.
struct ExactLimits {
  int max_diseases = 20;
  int max_positive_findings = 20;
};

/// Exact posteriors by full enumeration of disease instances. The oracle the
/// rest of the artifact is anchored to.
PosteriorReport brute_force_posteriors(const Network& net, const CaseEvidence& evidence,
                                       const ExactLimits& limits = {});

/// Exact posteriors by inclusion-exclusion over subsets of the positive
/// findings. Given only absent-form factors the diseases decouple, so each
/// subset term costs O(links) instead of O(2^n). Numerically identical
/// contract to brute force.
PosteriorReport quickscore_posteriors(const Network& net, const CaseEvidence& evidence,
                                      const ExactLimits& limits = {});

/// Closed form for all-negative evidence: diseases stay independent, the
/// leak factors cancel out of the per-disease odds.
PosteriorReport negative_evidence_posteriors(const Network& net, const CaseEvidence& evidence);

}  // namespace bn2o

#endif
