#ifndef BN2O_GENERATOR_HPP
#define BN2O_GENERATOR_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bn2o/network.hpp"
#include "bn2o/rng.hpp"

namespace bn2o {

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct CountRange {
  int lo = 0;
  int hi = 0;
};

/// Synthetic BN2O generation knobs. Parameter ranges must sit inside the
/// model's valid bounds; link_density is the expected number of linked
/// diseases per finding.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n_diseases = 0;
  int n_findings = 0;
  double link_density = 0.0;
  ValueRange prior_range{0.01, 0.10};
  ValueRange q_range{0.20, 0.90};
  ValueRange leak_range{0.001, 0.05};
  CountRange target_positive{1, 1 << 30};
  CountRange target_negative{0, 1 << 30};
  CountRange true_disease_count{1, 4};
  int n_cases = 1;
  int max_attempts = 10000;
};

GeneratorConfig load_generator_config(const std::string& text);
GeneratorConfig load_generator_config_file(const std::filesystem::path& path);

/// A forward-sampled diagnostic case: the evidence handed to the models, the
/// disease instance that actually produced it, and the size stats.
struct GeneratedCase {
  CaseEvidence evidence;       // gold = diseases present in provenance
  DiseaseInstance provenance;  // the sampled instance
  CaseStats stats;
};

/// Deterministic in cfg.seed: ids and names are positional, priors/leaks/q
/// drawn uniformly from the configured ranges, each (disease, finding) pair
/// linked independently with probability link_density / n_diseases.
Network generate_network(const GeneratorConfig& cfg);

/// One Bernoulli draw per finding: present with probability 1 - p(f-|D).
std::vector<std::uint8_t> forward_sample_findings(const Network& net, const DiseaseInstance& d,
                                                  RngStream& rng);

/// Rejection-samples a disease instance whose present-count lands in
/// true_disease_count, forward-samples the findings, then selects observed
/// findings until (|F+|, |F-|) fall in the target ranges: present findings
/// are all observed positive (random subsample beyond the cap), negatives
/// are a random subsample of absent findings linked to a gold disease.
/// Deterministic in (cfg.seed, case_index).
GeneratedCase generate_case(const Network& net, const GeneratorConfig& cfg, int case_index = 0);

/// Case-set manifest: case,n_positive,n_negative,n_gold.
std::string manifest_csv(const std::vector<GeneratedCase>& cases);

}  // namespace bn2o

#endif
