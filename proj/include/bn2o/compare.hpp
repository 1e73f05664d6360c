#ifndef BN2O_COMPARE_HPP
#define BN2O_COMPARE_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bn2o/exact.hpp"
#include "bn2o/network.hpp"
#include "bn2o/report.hpp"
#include "bn2o/sampler.hpp"

namespace bn2o {

/// Descending by posterior, ties by ascending disease ordinal; total over
/// every disease in the report.
std::vector<std::pair<std::string, double>> rank_diseases(const PosteriorReport& report);

struct ComparisonRow {
  int ordinal = 0;
  std::string disease_id;
  double p_noisy_or = 0.0;
  double p_mb = 0.0;
  double p_sb = 0.0;
  // this disease's 1-based rank under each model's own ordering; the row
  // order itself is the noisy-OR ranking
  int rank_mb = 0;
  int rank_sb = 0;
  bool is_gold = false;
};

struct ModelColumn {
  // gold disease id -> 1-based rank in this model's own ordering
  std::vector<std::pair<std::string, int>> gold_ranks;
  // diseases with posterior > threshold among this model's own top-K
  int above_threshold = 0;
};

/// All three models on identical inputs, aligned to the noisy-OR rank order.
struct ComparisonReport {
  std::string case_id;
  CaseStats stats;
  Method noisy_or_method = Method::BruteForce;
  int top_k = 30;
  double threshold = 0.5;
  std::vector<ComparisonRow> rows;  // every disease, noisy-OR rank order
  ModelColumn noisy_or;
  ModelColumn mb;
  ModelColumn sb;
  ReportMeta sampler_meta;
  double runtime_ms = 0.0;  // text output only, never serialized to CSV
};

struct CompareOptions {
  Method method = Method::Quickscore;  // noisy-OR method: brute|quickscore|lw
  SamplerConfig sampler;
  ExactLimits limits;
  int top_k = 30;
  double threshold = 0.5;
};

// forward declarations keep mb/sb headers out of this one
class MbConditionals;
class SbParameters;

/// Runs the three models over a shared network. The MB conditionals and SB
/// parameters are derived once at construction and reused across cases.
class ComparisonHarness {
public:
  ComparisonHarness(const Network& net, CompareOptions options);
  ~ComparisonHarness();
  ComparisonHarness(const ComparisonHarness&) = delete;
  ComparisonHarness& operator=(const ComparisonHarness&) = delete;

  ComparisonReport run(const CaseEvidence& evidence) const;

private:
  const Network& net_;
  CompareOptions options_;
  std::unique_ptr<MbConditionals> mb_;
  std::unique_ptr<SbParameters> sb_;
};

ComparisonReport compare_models(const Network& net, const CaseEvidence& evidence,
                                const CompareOptions& options);

/// rank,disease_id,p_noisy_or,p_mb,p_sb,is_gold - the top-K display rows.
std::string comparison_csv(const ComparisonReport& report);
/// Aligned table with gold rows starred, plus gold ranks, threshold counts
/// and runtime.
std::string comparison_text(const ComparisonReport& report);
/// Inverse of comparison_csv for the display rows (audit round-trip).
std::vector<ComparisonRow> parse_comparison_csv(const std::string& text);

/// Batch emission across a case set; grain documented in each header row.
std::string batch_ranks_csv(const std::vector<ComparisonReport>& reports);
std::string batch_summary_csv(const std::vector<ComparisonReport>& reports);
std::string batch_gold_ranks_csv(const std::vector<ComparisonReport>& reports);

}  // namespace bn2o

#endif
