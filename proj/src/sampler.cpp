#include "bn2o/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "bn2o/errors.hpp"
#include "bn2o/numeric.hpp"
#include "bn2o/rng.hpp"

namespace bn2o {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSamplerDomain = 0x6c772d73616d706cull;
// fixed chunk geometry keeps merge order independent of the worker count
constexpr std::uint64_t kChunkSize = 512;
// importance probabilities stay off the boundaries
constexpr double kImportanceFloor = 1e-3;

struct EvidenceFinding {
  double log_leak_complement;
  bool positive;
  // (disease ordinal, log(1-q))
  std::vector<std::pair<int, double>> parents;
};

// Running sums scaled against the largest log-weight seen so far.
struct WeightAccumulator {
  double max_log_w = kNegInf;
  double sum_w = 0.0;
  double sum_w_sq = 0.0;
  std::vector<double> sum_present;

  explicit WeightAccumulator(int n_diseases) : sum_present(n_diseases, 0.0) {}

  void add(double log_w, const std::vector<int>& present_list) {
    if (log_w == kNegInf) return;
    if (log_w > max_log_w) {
      if (max_log_w != kNegInf) {
        const double scale = std::exp(max_log_w - log_w);
        sum_w *= scale;
        sum_w_sq *= scale * scale;
        for (double& v : sum_present) v *= scale;
      }
      max_log_w = log_w;
    }
    const double w = std::exp(log_w - max_log_w);
    sum_w += w;
    sum_w_sq += w * w;
    for (int i : present_list) sum_present[i] += w;
  }

  void merge(const WeightAccumulator& other) {
    if (other.max_log_w == kNegInf) return;
    if (max_log_w == kNegInf) {
      *this = other;
      return;
    }
    if (other.max_log_w > max_log_w) {
      const double scale = std::exp(max_log_w - other.max_log_w);
      sum_w = sum_w * scale + other.sum_w;
      sum_w_sq = sum_w_sq * scale * scale + other.sum_w_sq;
      for (std::size_t i = 0; i < sum_present.size(); ++i) {
        sum_present[i] = sum_present[i] * scale + other.sum_present[i];
      }
      max_log_w = other.max_log_w;
    } else {
      const double scale = std::exp(other.max_log_w - max_log_w);
      sum_w += other.sum_w * scale;
      sum_w_sq += other.sum_w_sq * scale * scale;
      for (std::size_t i = 0; i < sum_present.size(); ++i) {
        sum_present[i] += other.sum_present[i] * scale;
      }
    }
  }
};

struct ImportanceTable {
  std::vector<double> prob;        // draw threshold
  std::vector<double> log_ratio_present;  // log p - log r
  std::vector<double> log_ratio_absent;   // log(1-p) - log(1-r)
  bool corrections_needed = false;

  void set(const std::vector<double>& priors, const std::vector<double>& importance) {
    prob = importance;
    const std::size_t n = priors.size();
    log_ratio_present.resize(n);
    log_ratio_absent.resize(n);
    corrections_needed = false;
    for (std::size_t i = 0; i < n; ++i) {
      log_ratio_present[i] = std::log(priors[i]) - std::log(importance[i]);
      log_ratio_absent[i] = std::log1p(-priors[i]) - std::log1p(-importance[i]);
      if (priors[i] != importance[i]) corrections_needed = true;
    }
  }
};

// One sample: draw an instance from the importance distribution, weight it by
// the evidence likelihood times the importance correction.
double evaluate_sample(std::uint64_t sample_seed, std::uint64_t index, int n_diseases,
                       const std::vector<EvidenceFinding>& findings, const ImportanceTable& table,
                       std::vector<std::uint8_t>& present, std::vector<int>& present_list) {
  RngStream rng(sample_seed, index);
  present_list.clear();
  double log_correction = 0.0;
  for (int i = 0; i < n_diseases; ++i) {
    const bool on = rng.next_unit() < table.prob[i];
    present[i] = on;
    if (on) present_list.push_back(i);
    if (table.corrections_needed) {
      log_correction += on ? table.log_ratio_present[i] : table.log_ratio_absent[i];
    }
  }

  double log_likelihood = 0.0;
  for (const EvidenceFinding& ef : findings) {
    double log_absent = ef.log_leak_complement;
    for (const auto& [ordinal, log_q_complement] : ef.parents) {
      if (present[ordinal]) log_absent += log_q_complement;
    }
    log_likelihood += ef.positive ? log1m_exp(log_absent) : log_absent;
    if (log_likelihood == kNegInf) return kNegInf;
  }
  return log_likelihood + log_correction;
}

std::vector<std::pair<int, double>> top_estimates(const std::vector<double>& estimates, int k) {
  std::vector<int> order = rank_order(estimates);
  const int take = std::min<int>(k, static_cast<int>(order.size()));
  std::vector<std::pair<int, double>> top;
  top.reserve(take);
  for (int r = 0; r < take; ++r) top.emplace_back(order[r], estimates[order[r]]);
  return top;
}

}  // namespace

bool check_convergence(const SamplerTrace& trace, const SamplerConfig& cfg) {
  if (trace.batches.size() < 2) {
    throw InferenceError(ErrorCode::InsufficientBatches,
                         "convergence needs at least two completed batches");
  }
  const auto& last = trace.batches[trace.batches.size() - 1].top_estimates;
  const auto& prev = trace.batches[trace.batches.size() - 2].top_estimates;
  for (const auto& [ordinal, estimate] : last) {
    const auto it = std::find_if(prev.begin(), prev.end(),
                                 [o = ordinal](const auto& p) { return p.first == o; });
    if (it == prev.end()) return false;  // newly entered the watch set: still moving
    if (std::abs(estimate - it->second) >= cfg.convergence_tol) return false;
  }
  return true;
}

LwResult likelihood_weighting_posteriors(const Network& net, const CaseEvidence& evidence,
                                         const SamplerConfig& cfg) {
  if (cfg.batch_size < 1 || cfg.max_samples < cfg.batch_size || cfg.convergence_tol <= 0.0 ||
      cfg.top_k_watch < 1 || cfg.workers < 1) {
    throw InferenceError(ErrorCode::InvalidConfig,
                         "sampler config requires max_samples >= batch_size >= 1, "
                         "convergence_tol > 0, top_k_watch >= 1, workers >= 1");
  }
  const BoundCase bound = bind_case(net, evidence);
  const int n = net.n_diseases();

  std::vector<EvidenceFinding> findings;
  findings.reserve(bound.positive.size() + bound.negative.size());
  const auto add_finding = [&](int j, bool positive) {
    EvidenceFinding ef;
    ef.log_leak_complement = std::log1p(-net.leak(j));
    ef.positive = positive;
    for (const Network::Arc& arc : net.finding_parents(j)) {
      ef.parents.emplace_back(arc.ordinal, std::log1p(-arc.q));
    }
    findings.push_back(std::move(ef));
  };
  for (int j : bound.negative) add_finding(j, false);
  for (int j : bound.positive) add_finding(j, true);

  std::vector<double> priors(n);
  for (int i = 0; i < n; ++i) priors[i] = net.prior(i);
  ImportanceTable table;
  table.set(priors, priors);

  const std::uint64_t sample_seed = derive_seed(cfg.seed, kSamplerDomain);

  WeightAccumulator global(n);
  SamplerTrace trace;
  std::vector<double> estimates(n, 0.0);

  std::uint64_t drawn = 0;
  while (drawn < cfg.max_samples && !trace.converged) {
    const std::uint64_t batch_end = std::min(drawn + cfg.batch_size, cfg.max_samples);
    const std::uint64_t chunk_count = (batch_end - drawn + kChunkSize - 1) / kChunkSize;

    std::vector<WeightAccumulator> chunk_results(chunk_count, WeightAccumulator(n));
    const auto run_chunk = [&](std::uint64_t c) {
      const std::uint64_t begin = drawn + c * kChunkSize;
      const std::uint64_t end = std::min(begin + kChunkSize, batch_end);
      std::vector<std::uint8_t> present(n);
      std::vector<int> present_list;
      present_list.reserve(n);
      WeightAccumulator& acc = chunk_results[c];
      for (std::uint64_t s = begin; s < end; ++s) {
        acc.add(evaluate_sample(sample_seed, s, n, findings, table, present, present_list),
                present_list);
      }
    };

    const int thread_count = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.workers), chunk_count));
    if (thread_count <= 1) {
      for (std::uint64_t c = 0; c < chunk_count; ++c) run_chunk(c);
    } else {
      std::atomic<std::uint64_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(thread_count);
      for (int t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
          for (std::uint64_t c = next.fetch_add(1); c < chunk_count; c = next.fetch_add(1)) {
            run_chunk(c);
          }
        });
      }
      for (std::thread& t : pool) t.join();
    }
    // merge in chunk order: the result is identical for any worker count
    for (const WeightAccumulator& acc : chunk_results) global.merge(acc);
    drawn = batch_end;

    if (global.sum_w > 0.0) {
      for (int i = 0; i < n; ++i) estimates[i] = global.sum_present[i] / global.sum_w;
    } else {
      std::fill(estimates.begin(), estimates.end(), 0.0);
    }
    trace.batches.push_back({drawn, top_estimates(estimates, cfg.top_k_watch)});

    if (global.sum_w > 0.0 && trace.batches.size() >= 2 && check_convergence(trace, cfg)) {
      trace.converged = true;
    } else if (cfg.self_importance && global.sum_w > 0.0) {
      // move halfway toward the running marginals; a full jump would lock
      // onto whichever instances happen to carry the weight so far
      std::vector<double> refreshed(n);
      for (int i = 0; i < n; ++i) {
        refreshed[i] = std::clamp(0.5 * table.prob[i] + 0.5 * estimates[i], kImportanceFloor,
                                  1.0 - kImportanceFloor);
      }
      table.set(priors, refreshed);
    }
  }

  trace.samples_drawn = drawn;
  trace.effective_sample_size =
      global.sum_w > 0.0 ? global.sum_w * global.sum_w / global.sum_w_sq : 0.0;
  if (global.sum_w <= 0.0) {
    throw InferenceError(ErrorCode::AllZeroWeights,
                         "case '" + evidence.case_id +
                             "': no sampled instance was consistent with the evidence; raise "
                             "max_samples or check the case against the network");
  }

  LwResult result;
  result.report.model = Model::NoisyOr;
  result.report.method = Method::LikelihoodWeighting;
  result.report.disease_ids.reserve(n);
  for (int i = 0; i < n; ++i) result.report.disease_ids.push_back(net.disease(i).id);
  result.report.posteriors.resize(n);
  for (int i = 0; i < n; ++i) {
    result.report.posteriors[i] = std::clamp(estimates[i], 0.0, 1.0);
  }
  result.report.meta.seed = cfg.seed;
  result.report.meta.samples = drawn;
  result.report.meta.converged = trace.converged;
  result.trace = trace;
  return result;
}

std::string trace_csv(const SamplerTrace& trace, const Network& net) {
  // union of every watched disease, in ordinal order
  std::map<int, std::size_t> columns;
  for (const BatchSnapshot& b : trace.batches) {
    for (const auto& [ordinal, estimate] : b.top_estimates) columns.emplace(ordinal, 0);
  }
  std::size_t next_col = 0;
  for (auto& [ordinal, col] : columns) col = next_col++;

  std::ostringstream out;
  out << "# converged," << (trace.converged ? "true" : "false") << "\n";
  out << "# effective_sample_size," << format_probability(trace.effective_sample_size) << "\n";
  out << "batch,samples";
  for (const auto& [ordinal, col] : columns) out << "," << net.disease(ordinal).id;
  out << "\n";
  for (std::size_t b = 0; b < trace.batches.size(); ++b) {
    std::vector<std::string> cells(columns.size());
    for (const auto& [ordinal, estimate] : trace.batches[b].top_estimates) {
      cells[columns.at(ordinal)] = format_probability(estimate);
    }
    out << (b + 1) << "," << trace.batches[b].samples_drawn;
    for (const std::string& cell : cells) out << "," << cell;
    out << "\n";
  }
  return out.str();
}

}  // namespace bn2o
