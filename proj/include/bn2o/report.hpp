#ifndef BN2O_REPORT_HPP
#define BN2O_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bn2o {

enum class Model { NoisyOr, Multimembership, SimpleBayes };
enum class Method { BruteForce, Quickscore, LikelihoodWeighting, Analytic };

const char* model_name(Model model);
const char* method_name(Method method);
Model model_from_name(const std::string& name);
Method method_from_name(const std::string& name);

struct ReportMeta {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<bool> converged;
  // multimembership odds saturated to 0/1 for at least one disease
  bool odds_saturated = false;
};

/// Per-disease posteriors under one model/method pair. Covers every disease
/// in the network, in network (ordinal) order.
struct PosteriorReport {
  Model model = Model::NoisyOr;
  Method method = Method::BruteForce;
  std::vector<std::string> disease_ids;
  std::vector<double> posteriors;
  std::optional<double> evidence_probability;
  ReportMeta meta;
};

/// Shortest decimal that round-trips the double exactly; keeps every emitted
/// report byte-stable across runs.
std::string format_probability(double value);

/// Ordinals sorted by descending posterior, ties by ascending ordinal.
std::vector<int> rank_order(const std::vector<double>& posteriors);

/// Report as CSV: '#' meta lines, then rank,disease_id,posterior rows.
std::string posterior_report_csv(const PosteriorReport& report);

}  // namespace bn2o

#endif
