#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "bn2o/errors.hpp"
#include "bn2o/generator.hpp"
#include "bn2o/io.hpp"

using namespace bn2o;

namespace {

GeneratorConfig table_shape_config() {
  GeneratorConfig cfg;
  cfg.seed = 404;
  cfg.n_diseases = 40;
  cfg.n_findings = 100;
  cfg.link_density = 8.0;
  cfg.prior_range = {0.08, 0.12};
  cfg.q_range = {0.7, 0.95};
  cfg.leak_range = {0.005, 0.02};
  cfg.target_positive = {45, 55};
  cfg.target_negative = {5, 10};
  cfg.true_disease_count = {4, 4};
  cfg.n_cases = 3;
  return cfg;
}

}  // namespace

TEST_CASE("network scale matches the configured expectations") {
  GeneratorConfig cfg;
  cfg.seed = 1;
  cfg.n_diseases = 600;
  cfg.n_findings = 4000;
  cfg.link_density = 10.0;
  const Network net = generate_network(cfg);
  CHECK(net.n_diseases() == 600);
  CHECK(net.n_findings() == 4000);
  // 2.4M Bernoulli(1/60) trials: expect 40,000 links, sd ~ 199
  const double links = static_cast<double>(net.spec().links.size());
  CHECK(std::abs(links - 40000.0) < 4.0 * 199.0);

  for (const DiseaseSpec& d : net.spec().diseases) {
    CHECK(d.prior >= cfg.prior_range.lo);
    CHECK(d.prior <= cfg.prior_range.hi);
  }
  for (const CausalLink& l : net.spec().links) {
    CHECK(l.q >= cfg.q_range.lo);
    CHECK(l.q <= cfg.q_range.hi);
  }
}

TEST_CASE("same seed reproduces the network byte for byte") {
  GeneratorConfig cfg;
  cfg.seed = 77;
  cfg.n_diseases = 25;
  cfg.n_findings = 40;
  cfg.link_density = 5.0;
  const Network a = generate_network(cfg);
  const Network b = generate_network(cfg);
  CHECK(save_network(a.spec()) == save_network(b.spec()));

  cfg.seed = 78;
  const Network c = generate_network(cfg);
  CHECK(save_network(a.spec()) != save_network(c.spec()));
}

TEST_CASE("config rejections") {
  GeneratorConfig cfg;
  cfg.n_diseases = 10;
  cfg.n_findings = 10;
  cfg.link_density = 0.0;
  CHECK_THROWS_WITH_AS(generate_network(cfg), doctest::Contains("InfeasibleConfig"),
                       ValidationError);
  cfg.link_density = 11.0;  // more than n_diseases
  CHECK_THROWS_WITH_AS(generate_network(cfg), doctest::Contains("InfeasibleConfig"),
                       ValidationError);
  cfg.link_density = 2.0;
  cfg.prior_range = {0.0, 0.1};  // boundary excluded
  CHECK_THROWS_WITH_AS(generate_network(cfg), doctest::Contains("InfeasibleConfig"),
                       ValidationError);
}

TEST_CASE("a near-certain disease with deterministic links lights all its findings") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 1.0 - 1e-9}};
  for (int j = 0; j < 6; ++j) {
    const std::string id = "f" + std::to_string(j);
    spec.findings.push_back({id, "", 0.0});
    spec.links.push_back({"d1", id, 1.0});
  }
  const Network net = Network::validate(std::move(spec));

  GeneratorConfig cfg;
  cfg.seed = 5;
  cfg.n_diseases = 1;
  cfg.n_findings = 6;
  cfg.link_density = 1.0;
  cfg.target_positive = {1, 100};
  cfg.target_negative = {0, 100};
  cfg.true_disease_count = {1, 1};
  const GeneratedCase generated = generate_case(net, cfg);
  CHECK(generated.stats.n_positive == 6);
  CHECK(generated.stats.n_negative == 0);
  CHECK(generated.evidence.gold == std::vector<std::string>{"d1"});
}

TEST_CASE("case stats land in the configured target ranges") {
  const GeneratorConfig cfg = table_shape_config();
  const Network net = generate_network(cfg);
  for (int k = 0; k < cfg.n_cases; ++k) {
    const GeneratedCase generated = generate_case(net, cfg, k);
    CHECK(generated.stats.n_positive >= 45);
    CHECK(generated.stats.n_positive <= 55);
    CHECK(generated.stats.n_negative >= 5);
    CHECK(generated.stats.n_negative <= 10);
    CHECK(generated.stats.n_gold == 4);

    // gold is exactly the provenance-present set
    std::set<std::string> provenance_present;
    for (int i = 0; i < net.n_diseases(); ++i) {
      if (generated.provenance.present[i]) provenance_present.insert(net.disease(i).id);
    }
    CHECK(std::set<std::string>(generated.evidence.gold.begin(), generated.evidence.gold.end()) ==
          provenance_present);

    // negative findings never overlap the positives and are linked to gold
    for (const std::string& id : generated.evidence.negative) {
      const int j = net.finding_ordinal(id);
      bool linked_to_gold = false;
      for (const Network::Arc& arc : net.finding_parents(j)) {
        linked_to_gold |= generated.provenance.present[arc.ordinal] != 0;
      }
      CHECK(linked_to_gold);
    }
  }
}

TEST_CASE("same seed and index reproduce the case; different indexes differ") {
  const GeneratorConfig cfg = table_shape_config();
  const Network net = generate_network(cfg);
  const GeneratedCase a = generate_case(net, cfg, 1);
  const GeneratedCase b = generate_case(net, cfg, 1);
  CHECK(save_case(a.evidence) == save_case(b.evidence));
  const GeneratedCase c = generate_case(net, cfg, 2);
  CHECK(save_case(a.evidence) != save_case(c.evidence));
}

TEST_CASE("impossible targets exhaust the rejection budget") {
  const GeneratorConfig base = table_shape_config();
  const Network net = generate_network(base);
  GeneratorConfig cfg = base;
  cfg.target_positive = {99, 100};  // the network cannot produce 99 present findings
  cfg.max_attempts = 200;
  CHECK_THROWS_WITH_AS(generate_case(net, cfg), doctest::Contains("RejectionBudgetExceeded"),
                       InferenceError);
}

TEST_CASE("forward sampling matches the absent-probability complement") {
  NetworkSpec spec;
  spec.diseases = {{"d1", "", 0.2}, {"d2", "", 0.3}, {"d3", "", 0.15}};
  for (int j = 0; j < 8; ++j) {
    spec.findings.push_back({"f" + std::to_string(j), "", 0.01 * (j + 1)});
  }
  spec.links = {{"d1", "f0", 0.9}, {"d1", "f1", 0.6}, {"d2", "f1", 0.5}, {"d2", "f3", 0.95},
                {"d3", "f4", 0.33}, {"d1", "f5", 1.0}, {"d3", "f5", 0.2}, {"d2", "f6", 0.07}};
  const Network net = Network::validate(std::move(spec));

  const DiseaseInstance instance{{1, 0, 1}};
  const int n_samples = 10000;
  std::vector<int> hits(net.n_findings(), 0);
  RngStream rng(31415, 0);
  for (int s = 0; s < n_samples; ++s) {
    const std::vector<std::uint8_t> present = forward_sample_findings(net, instance, rng);
    for (int j = 0; j < net.n_findings(); ++j) hits[j] += present[j];
  }
  for (int j = 0; j < net.n_findings(); ++j) {
    const double expected = 1.0 - finding_absent_prob(net, j, instance);
    const double freq = static_cast<double>(hits[j]) / n_samples;
    const double sigma = std::sqrt(expected * (1.0 - expected) / n_samples);
    CHECK(std::abs(freq - expected) <= std::max(3.0 * sigma, 1e-12));
  }
}

TEST_CASE("manifest layout") {
  const GeneratorConfig cfg = table_shape_config();
  const Network net = generate_network(cfg);
  std::vector<GeneratedCase> cases;
  for (int k = 0; k < 2; ++k) cases.push_back(generate_case(net, cfg, k));
  const std::string csv = manifest_csv(cases);
  CHECK(csv.find("case,n_positive,n_negative,n_gold\n") == 0);
  CHECK(csv.find(cases[0].evidence.case_id) != std::string::npos);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 3);
}

TEST_CASE("generator config parses from JSON with defaults") {
  const GeneratorConfig cfg = load_generator_config(R"({
    "format_version": 1,
    "seed": 9,
    "n_diseases": 12,
    "n_findings": 30,
    "link_density": 4.5,
    "prior_range": [0.02, 0.08],
    "target_positive": [3, 9],
    "true_disease_count": [2, 3],
    "n_cases": 5
  })");
  CHECK(cfg.seed == 9);
  CHECK(cfg.n_diseases == 12);
  CHECK(cfg.link_density == 4.5);
  CHECK(cfg.prior_range.lo == 0.02);
  CHECK(cfg.target_positive.lo == 3);
  CHECK(cfg.true_disease_count.hi == 3);
  CHECK(cfg.n_cases == 5);
  CHECK(cfg.max_attempts == 10000);  // default

  CHECK_THROWS_AS(load_generator_config("{}"), ParseError);
  CHECK_THROWS_AS(load_generator_config(R"({"format_version": 1})"), ParseError);
}
