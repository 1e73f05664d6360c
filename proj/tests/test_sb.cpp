#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bn2o/errors.hpp"
#include "bn2o/exact.hpp"
#include "bn2o/sb.hpp"
#include "test_support.hpp"

using namespace bn2o;
using testsupport::random_case;
using testsupport::random_network;

namespace {

Network three_disease_network() {
  // conditionals for f1 engineered to (0.9, 0.5, 0.1) with leak 0:
  // c = 1 - (1-q)(1-0) = q
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.01}, {"d2", "", 0.02}, {"d3", "", 0.03}};
  spec.findings = {{"f1", "", 0.0}};
  spec.links = {{"d1", "f1", 0.9}, {"d2", "f1", 0.5}, {"d3", "f1", 0.1}};
  return Network::validate(std::move(spec));
}

}  // namespace

TEST_CASE("prior renormalization") {
  const Network net = three_disease_network();
  const SbParameters params = SbParameters::derive(net);
  CHECK(params.renormalized_priors()[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(params.renormalized_priors()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(params.renormalized_priors()[2] == doctest::Approx(1.0 / 2.0).epsilon(1e-12));

  double sum = 0.0;
  for (double p : params.renormalized_priors()) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("conditional derivation") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.2}};
  spec.findings = {{"f1", "", 0.1}, {"f2", "", 0.1}};
  spec.links = {{"d1", "f1", 0.5}};
  const Network net = Network::validate(std::move(spec));
  const SbParameters params = SbParameters::derive(net);
  CHECK(params.conditional(0, 0) == doctest::Approx(0.55).epsilon(1e-12));  // 1 - 0.5*0.9
  CHECK(params.conditional(0, 1) == doctest::Approx(0.1).epsilon(1e-12));   // unlinked -> leak
}

TEST_CASE("posteriors on the hand-normalized example") {
  const Network net = three_disease_network();
  const PosteriorReport report = sb_posteriors(net, {"c", {"f1"}, {}, {}});
  // products (1/6*0.9, 1/3*0.5, 1/2*0.1) = (0.15, 1/6, 0.05) -> /(11/30)
  CHECK(report.posteriors[0] == doctest::Approx(0.15 / (11.0 / 30.0)).epsilon(1e-12));
  CHECK(report.posteriors[1] == doctest::Approx((1.0 / 6.0) / (11.0 / 30.0)).epsilon(1e-12));
  CHECK(report.posteriors[2] == doctest::Approx(0.05 / (11.0 / 30.0)).epsilon(1e-12));
  CHECK(report.posteriors[0] == doctest::Approx(0.4091).epsilon(1e-4));
  CHECK(report.posteriors[1] == doctest::Approx(0.4545).epsilon(1e-4));
  CHECK(report.posteriors[2] == doctest::Approx(0.1364).epsilon(1e-4));
}

TEST_CASE("single disease gets posterior one whenever the evidence is possible") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.001}};
  spec.findings = {{"f1", "", 0.1}, {"f2", "", 0.2}};
  spec.links = {{"d1", "f1", 0.5}};
  const Network net = Network::validate(std::move(spec));
  const PosteriorReport report = sb_posteriors(net, {"c", {"f1"}, {"f2"}, {}});
  CHECK(report.posteriors[0] == 1.0);
}

TEST_CASE("symmetric diseases split the mass evenly") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.1}, {"d2", "", 0.1}};
  spec.findings = {{"f1", "", 0.05}};
  spec.links = {{"d1", "f1", 0.4}, {"d2", "f1", 0.4}};
  const Network net = Network::validate(std::move(spec));
  const PosteriorReport report = sb_posteriors(net, {"c", {"f1"}, {}, {}});
  CHECK(report.posteriors[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.posteriors[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("posteriors sum to one on random cases") {
  RngStream rng(53, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = random_network(rng, 1 + static_cast<int>(rng.next_below(15)),
                                       1 + static_cast<int>(rng.next_below(10)), 0.4);
    const CaseEvidence evidence =
        random_case(rng, net, static_cast<int>(rng.next_below(5)),
                    static_cast<int>(rng.next_below(5)));
    const PosteriorReport report = sb_posteriors(net, evidence);
    double sum = 0.0;
    for (double p : report.posteriors) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("ranking is invariant to positive rescaling of the likelihoods") {
  // scaling every per-disease likelihood by a constant is the same as adding
  // a shared finding whose conditional is flat across diseases
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.05}, {"d2", "", 0.10}, {"d3", "", 0.15}};
  spec.findings = {{"f1", "", 0.02}, {"flat", "", 0.42}};
  spec.links = {{"d1", "f1", 0.9}, {"d2", "f1", 0.3}};
  const Network net = Network::validate(std::move(spec));

  const PosteriorReport base = sb_posteriors(net, {"c", {"f1"}, {}, {}});
  const PosteriorReport scaled = sb_posteriors(net, {"c", {"f1", "flat"}, {}, {}});
  CHECK(rank_order(base.posteriors) == rank_order(scaled.posteriors));
  for (std::size_t i = 0; i < base.posteriors.size(); ++i) {
    CHECK(scaled.posteriors[i] == doctest::Approx(base.posteriors[i]).epsilon(1e-12));
  }
}

TEST_CASE("all hypotheses excluded raises") {
  // leak 0 and no link: no disease can explain the positive finding
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.1}, {"d2", "", 0.1}};
  spec.findings = {{"f1", "", 0.0}, {"f2", "", 0.1}};
  spec.links = {{"d1", "f2", 0.5}};
  const Network net = Network::validate(std::move(spec));
  CHECK_THROWS_WITH_AS(sb_posteriors(net, {"c", {"f1"}, {}, {}}),
                       doctest::Contains("AllHypothesesExcluded"), InferenceError);
}

TEST_CASE("underestimation on the shared-finding benchmark") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.05}, {"d2", "", 0.05}};
  CaseEvidence evidence{"benchmark", {}, {}, {"d1", "d2"}};
  for (int j = 0; j < 5; ++j) {
    const std::string id = "f" + std::to_string(j);
    spec.findings.push_back({id, "", 0.01});
    spec.links.push_back({"d1", id, 0.8});
    spec.links.push_back({"d2", id, 0.8});
    evidence.positive.push_back(id);
  }
  const Network net = Network::validate(std::move(spec));

  const PosteriorReport sb = sb_posteriors(net, evidence);
  const PosteriorReport exact = brute_force_posteriors(net, evidence);
  for (int i = 0; i < 2; ++i) {
    CHECK(sb.posteriors[i] < exact.posteriors[i]);
  }
}

TEST_CASE("parameter export") {
  const Network net = three_disease_network();
  const SbParameters params = SbParameters::derive(net);
  CHECK(params.priors_csv(net).find("disease,renormalized_prior") == 0);
  const std::string cond = params.conditionals_csv(net);
  CHECK(cond.find("disease,finding,conditional") == 0);
  CHECK(cond.find("d1,f1,0.9") != std::string::npos);
}
