#include "bn2o/mb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bn2o/errors.hpp"
#include "bn2o/numeric.hpp"

namespace bn2o {

namespace {

constexpr int kLogSpaceFanIn = 32;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MbConditionals MbConditionals::derive(const Network& net) {
  MbConditionals cond;
  cond.by_finding_.resize(net.n_findings());

  for (int j = 0; j < net.n_findings(); ++j) {
    const auto& arcs = net.finding_parents(j);
    if (arcs.empty()) continue;
    const double log_leak_c = std::log1p(-net.leak(j));

    // bracket_k = (1-q_kj) p(d_k+) + p(d_k-) = 1 - q_kj p(d_k+), always > 0
    std::vector<Pair>& pairs = cond.by_finding_[j];
    pairs.reserve(arcs.size());

    if (arcs.size() <= kLogSpaceFanIn) {
      double product = 1.0;
      for (const Network::Arc& arc : arcs) product *= 1.0 - arc.q * net.prior(arc.ordinal);
      for (const Network::Arc& arc : arcs) {
        const double bracket = 1.0 - arc.q * net.prior(arc.ordinal);
        const double alpha = (1.0 - net.leak(j)) * (product / bracket);
        const double log_alpha = std::log(alpha);
        pairs.push_back({arc.ordinal, j, arc.q, log_alpha, alpha,
                         one_minus_exp(std::log1p(-arc.q) + log_alpha),
                         one_minus_exp(log_alpha)});
      }
    } else {
      // wide fan-in: the bracket product underflows, accumulate logs
      double log_product = 0.0;
      for (const Network::Arc& arc : arcs) log_product += std::log1p(-arc.q * net.prior(arc.ordinal));
      for (const Network::Arc& arc : arcs) {
        const double log_alpha =
            log_leak_c + log_product - std::log1p(-arc.q * net.prior(arc.ordinal));
        pairs.push_back({arc.ordinal, j, arc.q, log_alpha, std::exp(log_alpha),
                         one_minus_exp(std::log1p(-arc.q) + log_alpha),
                         one_minus_exp(log_alpha)});
      }
    }
  }
  return cond;
}

std::string MbConditionals::to_csv(const Network& net) const {
  std::ostringstream out;
  out << "disease,finding,alpha,p_present,p_absent\n";
  for (int j = 0; j < net.n_findings(); ++j) {
    for (const Pair& pair : by_finding_[j]) {
      out << net.disease(pair.disease).id << "," << net.finding(j).id << ","
          << format_probability(pair.alpha) << "," << format_probability(pair.p_present) << ","
          << format_probability(pair.p_absent) << "\n";
    }
  }
  return out.str();
}

PosteriorReport mb_posteriors(const Network& net, const CaseEvidence& evidence,
                              const MbConditionals& conditionals) {
  const BoundCase bound = bind_case(net, evidence);
  const int n = net.n_diseases();

  std::vector<double> log_odds(n);
  for (int i = 0; i < n; ++i) {
    log_odds[i] = std::log(net.prior(i)) - std::log1p(-net.prior(i));
  }
  // +inf and -inf contributions tracked apart so one deterministic finding
  // saturates cleanly instead of poisoning the sum with NaN
  std::vector<int> force_present(n, 0);
  std::vector<int> force_absent(n, 0);

  for (int j : bound.positive) {
    for (const MbConditionals::Pair& pair : conditionals.pairs_for_finding(j)) {
      if (pair.p_absent <= 0.0) {
        ++force_present[pair.disease];  // finding impossible without this disease
      } else {
        log_odds[pair.disease] += std::log(pair.p_present) - std::log(pair.p_absent);
      }
    }
  }
  for (int j : bound.negative) {
    for (const MbConditionals::Pair& pair : conditionals.pairs_for_finding(j)) {
      if (pair.q >= 1.0) {
        ++force_absent[pair.disease];  // disease would guarantee the finding
      } else {
        log_odds[pair.disease] += std::log1p(-pair.q);
      }
    }
  }

  PosteriorReport report;
  report.model = Model::Multimembership;
  report.method = Method::Analytic;
  report.disease_ids.reserve(n);
  for (int i = 0; i < n; ++i) report.disease_ids.push_back(net.disease(i).id);
  report.posteriors.resize(n);

  for (int i = 0; i < n; ++i) {
    if (force_present[i] && force_absent[i]) {
      throw InferenceError(ErrorCode::NumericalInstability,
                           "disease '" + net.disease(i).id +
                               "': evidence is deterministic in both directions under the "
                               "multimembership model");
    }
    double lo = log_odds[i];
    if (force_present[i]) lo = kInf;
    if (force_absent[i]) lo = -kInf;
    if (std::isinf(lo)) report.meta.odds_saturated = true;
    report.posteriors[i] = logistic(lo);
  }
  return report;
}

PosteriorReport mb_posteriors(const Network& net, const CaseEvidence& evidence) {
  return mb_posteriors(net, evidence, MbConditionals::derive(net));
}

OddsUpdate mb_odds_update(const Network& net, const CaseEvidence& evidence,
                          const MbConditionals& conditionals, std::string_view disease_id) {
  const BoundCase bound = bind_case(net, evidence);
  const int target = net.disease_ordinal(disease_id);

  OddsUpdate update;
  update.prior_odds = net.prior(target) / (1.0 - net.prior(target));

  const auto lambda_for = [&](int j, bool positive) {
    for (const MbConditionals::Pair& pair : conditionals.pairs_for_finding(j)) {
      if (pair.disease != target) continue;
      if (positive) {
        return pair.p_absent > 0.0 ? pair.p_present / pair.p_absent : kInf;
      }
      return 1.0 - pair.q;
    }
    return 1.0;  // unlinked: the finding says nothing about this disease
  };
  for (int j : bound.positive) update.likelihood_ratios.emplace_back(j, lambda_for(j, true));
  for (int j : bound.negative) update.likelihood_ratios.emplace_back(j, lambda_for(j, false));

  update.posterior_odds = update.prior_odds;
  for (const auto& [finding, lambda] : update.likelihood_ratios) {
    update.posterior_odds *= lambda;
  }
  update.posterior_probability = std::isinf(update.posterior_odds)
                                     ? 1.0
                                     : update.posterior_odds / (1.0 + update.posterior_odds);
  return update;
}

}  // namespace bn2o
