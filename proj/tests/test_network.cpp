#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "bn2o/errors.hpp"
#include "bn2o/network.hpp"
#include "bn2o/rng.hpp"

using namespace bn2o;

namespace {

NetworkSpec two_disease_spec() {
  NetworkSpec spec;
  spec.diseases = {{"d1", "Disease 1", 0.1}, {"d2", "Disease 2", 0.2}};
  spec.findings = {{"f1", "Finding 1", 0.1}};
  spec.links = {{"d1", "f1", 0.5}, {"d2", "f1", 0.2}};
  return spec;
}

// Enumerates the causal fire patterns behind one finding: the finding is
// absent iff neither the leak nor any present disease's mechanism fired.
// Independent route to the same quantity as finding_absent_prob.
double absent_prob_by_fire_enumeration(double leak, const std::vector<double>& active_qs) {
  const std::size_t k = active_qs.size();
  double total = 0.0;
  for (std::uint32_t fires = 0; fires < (1u << (k + 1)); ++fires) {
    double p = (fires & 1) ? leak : 1.0 - leak;
    bool any_fired = (fires & 1) != 0;
    for (std::size_t i = 0; i < k; ++i) {
      const bool fired = fires >> (i + 1) & 1;
      p *= fired ? active_qs[i] : 1.0 - active_qs[i];
      any_fired = any_fired || fired;
    }
    if (!any_fired) total += p;
  }
  return total;
}

ErrorCode catch_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("validate accepts a well-formed network unchanged") {
  const NetworkSpec spec = two_disease_spec();
  const Network net = Network::validate(spec);
  CHECK(net.n_diseases() == 2);
  CHECK(net.n_findings() == 1);
  CHECK(net.spec().diseases[0].id == spec.diseases[0].id);
  CHECK(net.spec().links.size() == 2);
  CHECK(net.finding_parents(0).size() == 2);
  CHECK(net.disease_children(1).size() == 1);
  CHECK(net.warnings().empty());
}

TEST_CASE("validation rejections") {
  SUBCASE("prior at the closed boundary") {
    NetworkSpec spec = two_disease_spec();
    spec.diseases[0].prior = 0.0;
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("prior of one") {
    NetworkSpec spec = two_disease_spec();
    spec.diseases[1].prior = 1.0;
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("leak of one") {
    NetworkSpec spec = two_disease_spec();
    spec.findings[0].leak = 1.0;
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("q of zero encodes a missing link") {
    NetworkSpec spec = two_disease_spec();
    spec.links[0].q = 0.0;
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("duplicate link pair") {
    NetworkSpec spec = two_disease_spec();
    spec.links.push_back({"d1", "f1", 0.3});
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::DuplicateId);
  }
  SUBCASE("duplicate disease id") {
    NetworkSpec spec = two_disease_spec();
    spec.diseases.push_back({"d1", "again", 0.3});
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::DuplicateId);
  }
  SUBCASE("dangling link") {
    NetworkSpec spec = two_disease_spec();
    spec.links.push_back({"d9", "f1", 0.3});
    CHECK(catch_code([&] { Network::validate(spec); }) == ErrorCode::DanglingLink);
  }
  SUBCASE("empty network") {
    CHECK(catch_code([] { Network::validate(NetworkSpec{}); }) == ErrorCode::EmptyNetwork);
  }
}

TEST_CASE("q of exactly one is a legal deterministic cause") {
  NetworkSpec spec = two_disease_spec();
  spec.links[0].q = 1.0;
  CHECK_NOTHROW(Network::validate(spec));
}

TEST_CASE("pure leak findings are allowed but flagged") {
  NetworkSpec spec = two_disease_spec();
  spec.findings.push_back({"f2", "Unlinked", 0.05});
  const Network net = Network::validate(spec);
  REQUIRE(net.warnings().size() == 1);
  CHECK(net.warnings()[0].find("f2") != std::string::npos);
}

TEST_CASE("finding_absent_given_instance") {
  const Network net = Network::validate(two_disease_spec());

  SUBCASE("one present cause") {
    // leak 0.1, d1 present with q=0.5, d2 absent -> 0.9 * 0.5
    const DiseaseInstance d{{1, 0}};
    CHECK(finding_absent_given_instance(net, "f1", d) == doctest::Approx(0.45).epsilon(1e-12));
  }
  SUBCASE("empty product with zero leak") {
    NetworkSpec spec = two_disease_spec();
    spec.findings[0].leak = 0.0;
    const Network zero_leak = Network::validate(spec);
    const DiseaseInstance d{{0, 0}};
    CHECK(finding_absent_given_instance(zero_leak, "f1", d) == 1.0);
  }
  SUBCASE("both causes present, checked against fire-pattern enumeration") {
    const DiseaseInstance d{{1, 1}};
    const double expected = absent_prob_by_fire_enumeration(0.1, {0.5, 0.2});
    CHECK(expected == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(finding_absent_given_instance(net, "f1", d) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("unknown finding") {
    const DiseaseInstance d{{0, 0}};
    CHECK(catch_code([&] { finding_absent_given_instance(net, "nope", d); }) ==
          ErrorCode::UnknownFinding);
  }
  SUBCASE("incomplete instance") {
    const DiseaseInstance d{{1}};
    CHECK(catch_code([&] { finding_absent_given_instance(net, "f1", d); }) ==
          ErrorCode::IncompleteInstance);
  }
}

TEST_CASE("instance_prior") {
  const Network net = Network::validate(two_disease_spec());
  CHECK(instance_prior(net, {{1, 1}}) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(instance_prior(net, {{0, 0}}) == doctest::Approx(0.72).epsilon(1e-12));

  NetworkSpec spec = two_disease_spec();
  spec.diseases[0].prior = 0.01;
  spec.diseases[1].prior = 0.02;
  const Network net2 = Network::validate(spec);
  CHECK(instance_prior(net2, {{1, 0}}) == doctest::Approx(0.0098).epsilon(1e-12));
}

TEST_CASE("instance priors sum to one over all assignments") {
  // randomized structure, exhaustive enumeration
  RngStream rng(2024, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(11));  // up to 12
    NetworkSpec spec;
    for (int i = 0; i < n; ++i) {
      spec.diseases.push_back({"d" + std::to_string(i), "", 0.01 + 0.9 * rng.next_unit()});
    }
    spec.findings.push_back({"f0", "", 0.1});
    const Network net = Network::validate(spec);

    double total = 0.0;
    DiseaseInstance d;
    d.present.resize(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (int i = 0; i < n; ++i) d.present[i] = mask >> i & 1;
      total += instance_prior(net, d);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("absent probability is non-increasing as diseases switch on") {
  const Network net = Network::validate(two_disease_spec());
  const DiseaseInstance none{{0, 0}};
  const DiseaseInstance d1{{1, 0}};
  const DiseaseInstance both{{1, 1}};
  const double p0 = finding_absent_prob(net, 0, none);
  const double p1 = finding_absent_prob(net, 0, d1);
  const double p2 = finding_absent_prob(net, 0, both);
  CHECK(p0 == doctest::Approx(1.0 - 0.1).epsilon(1e-12));  // all absent: 1 - leak
  CHECK(p1 <= p0);
  CHECK(p2 <= p1);
}

TEST_CASE("bind_case resolves ids and enforces invariants") {
  NetworkSpec spec = two_disease_spec();
  spec.findings.push_back({"f2", "Finding 2", 0.01});
  spec.links.push_back({"d1", "f2", 0.4});
  const Network net = Network::validate(spec);

  CaseEvidence evidence{"case_x", {"f2"}, {"f1"}, {"d2"}};
  const BoundCase bound = bind_case(net, evidence);
  CHECK(bound.positive == std::vector<int>{1});
  CHECK(bound.negative == std::vector<int>{0});
  CHECK(bound.gold == std::vector<int>{1});

  CHECK(catch_code([&] { bind_case(net, {"bad", {"f9"}, {}, {}}); }) == ErrorCode::UnknownFinding);
  CHECK(catch_code([&] { bind_case(net, {"bad", {"f1"}, {"f1"}, {}}); }) ==
        ErrorCode::EvidenceOverlap);
  CHECK(catch_code([&] { bind_case(net, {"bad", {"f1", "f1"}, {}, {}}); }) ==
        ErrorCode::DuplicateId);
  CHECK(catch_code([&] { bind_case(net, {"bad", {}, {}, {"dx"}}); }) == ErrorCode::UnknownDisease);
}
