#include "bn2o/compare.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iomanip>
#include <sstream>

#include "bn2o/errors.hpp"
#include "bn2o/mb.hpp"
#include "bn2o/sb.hpp"

namespace bn2o {

namespace {

ModelColumn model_column(const PosteriorReport& report, const std::vector<int>& gold_ordinals,
                         int top_k, double threshold) {
  const std::vector<int> order = rank_order(report.posteriors);
  std::vector<int> rank_of(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = static_cast<int>(r) + 1;

  ModelColumn column;
  for (int g : gold_ordinals) column.gold_ranks.emplace_back(report.disease_ids[g], rank_of[g]);
  const int take = std::min<int>(top_k, static_cast<int>(order.size()));
  for (int r = 0; r < take; ++r) {
    if (report.posteriors[order[r]] > threshold) ++column.above_threshold;
  }
  return column;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("bad numeric field '" + text + "'", 0);
  }
  return value;
}

}  // namespace

std::vector<std::pair<std::string, double>> rank_diseases(const PosteriorReport& report) {
  const std::vector<int> order = rank_order(report.posteriors);
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(order.size());
  for (int i : order) ranked.emplace_back(report.disease_ids[i], report.posteriors[i]);
  return ranked;
}

ComparisonHarness::ComparisonHarness(const Network& net, CompareOptions options)
    : net_(net),
      options_(std::move(options)),
      mb_(std::make_unique<MbConditionals>(MbConditionals::derive(net))),
      sb_(std::make_unique<SbParameters>(SbParameters::derive(net))) {
  if (options_.method == Method::Analytic) {
    throw ValidationError(ErrorCode::InvalidConfig,
                          "comparison method must be brute-force, quickscore or "
                          "likelihood-weighting");
  }
}

ComparisonHarness::~ComparisonHarness() = default;

ComparisonReport ComparisonHarness::run(const CaseEvidence& evidence) const {
  const auto start = std::chrono::steady_clock::now();
  const BoundCase bound = bind_case(net_, evidence);

  PosteriorReport noisy_or;
  ReportMeta sampler_meta;
  switch (options_.method) {
    case Method::BruteForce:
      noisy_or = brute_force_posteriors(net_, evidence, options_.limits);
      break;
    case Method::Quickscore:
      noisy_or = quickscore_posteriors(net_, evidence, options_.limits);
      break;
    case Method::LikelihoodWeighting: {
      LwResult lw = likelihood_weighting_posteriors(net_, evidence, options_.sampler);
      noisy_or = std::move(lw.report);
      sampler_meta = noisy_or.meta;
      break;
    }
    case Method::Analytic:
      break;  // rejected in the constructor
  }
  const PosteriorReport mb = mb_posteriors(net_, evidence, *mb_);
  const PosteriorReport sb = sb_posteriors(net_, evidence, *sb_);

  ComparisonReport report;
  report.case_id = evidence.case_id;
  report.stats = case_stats(evidence);
  report.noisy_or_method = options_.method;
  report.top_k = options_.top_k;
  report.threshold = options_.threshold;
  report.sampler_meta = sampler_meta;

  std::vector<char> is_gold(net_.n_diseases(), 0);
  for (int g : bound.gold) is_gold[g] = 1;

  const auto ranks_of = [](const std::vector<double>& posteriors) {
    const std::vector<int> order = rank_order(posteriors);
    std::vector<int> ranks(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
  };
  const std::vector<int> mb_rank = ranks_of(mb.posteriors);
  const std::vector<int> sb_rank = ranks_of(sb.posteriors);

  // rows follow the noisy-OR ranking; MB and SB posteriors aligned to it,
  // with each model's own rank kept alongside
  const std::vector<int> order = rank_order(noisy_or.posteriors);
  report.rows.reserve(order.size());
  for (int ordinal : order) {
    report.rows.push_back({ordinal, noisy_or.disease_ids[ordinal], noisy_or.posteriors[ordinal],
                           mb.posteriors[ordinal], sb.posteriors[ordinal], mb_rank[ordinal],
                           sb_rank[ordinal], static_cast<bool>(is_gold[ordinal])});
  }

  report.noisy_or = model_column(noisy_or, bound.gold, options_.top_k, options_.threshold);
  report.mb = model_column(mb, bound.gold, options_.top_k, options_.threshold);
  report.sb = model_column(sb, bound.gold, options_.top_k, options_.threshold);

  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ComparisonReport compare_models(const Network& net, const CaseEvidence& evidence,
                                const CompareOptions& options) {
  return ComparisonHarness(net, options).run(evidence);
}

std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "rank,disease_id,p_noisy_or,p_mb,p_sb,is_gold\n";
  const std::size_t take = std::min<std::size_t>(report.top_k, report.rows.size());
  for (std::size_t r = 0; r < take; ++r) {
    const ComparisonRow& row = report.rows[r];
    out << (r + 1) << "," << row.disease_id << "," << format_probability(row.p_noisy_or) << ","
        << format_probability(row.p_mb) << "," << format_probability(row.p_sb) << ","
        << (row.is_gold ? "true" : "false") << "\n";
  }
  return out.str();
}

std::vector<ComparisonRow> parse_comparison_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "rank,disease_id,p_noisy_or,p_mb,p_sb,is_gold") {
    throw ParseError("missing comparison CSV header", 0);
  }
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 6) throw ParseError("comparison row needs 6 fields: " + line, 0);
    ComparisonRow row;
    row.ordinal = -1;  // ordinals are not serialized
    row.disease_id = fields[1];
    row.p_noisy_or = parse_double(fields[2]);
    row.p_mb = parse_double(fields[3]);
    row.p_sb = parse_double(fields[4]);
    row.is_gold = fields[5] == "true";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string comparison_text(const ComparisonReport& report) {
  std::ostringstream out;
  out << "case " << report.case_id << "  (|F+|=" << report.stats.n_positive
      << " |F-|=" << report.stats.n_negative << " |D|=" << report.stats.n_gold << ")\n";
  out << "noisy-OR method: " << method_name(report.noisy_or_method) << "\n";

  std::size_t id_width = 7;
  const std::size_t take = std::min<std::size_t>(report.top_k, report.rows.size());
  for (std::size_t r = 0; r < take; ++r) {
    id_width = std::max(id_width, report.rows[r].disease_id.size() + 2);
  }
  out << std::setw(5) << "rank" << "  " << std::left << std::setw(static_cast<int>(id_width))
      << "disease" << std::right << std::setw(12) << "p(noisy-OR)" << std::setw(12) << "p(mb)"
      << std::setw(12) << "p(sb)" << "\n";
  out << std::fixed << std::setprecision(6);
  for (std::size_t r = 0; r < take; ++r) {
    const ComparisonRow& row = report.rows[r];
    const std::string label = row.disease_id + (row.is_gold ? " *" : "");
    out << std::setw(5) << (r + 1) << "  " << std::left << std::setw(static_cast<int>(id_width))
        << label << std::right << std::setw(12) << row.p_noisy_or << std::setw(12) << row.p_mb
        << std::setw(12) << row.p_sb << "\n";
  }

  const auto ranks_line = [&](const char* name, const ModelColumn& column) {
    out << name << ": ";
    if (column.gold_ranks.empty()) {
      out << "(no gold standard)";
    } else {
      for (std::size_t g = 0; g < column.gold_ranks.size(); ++g) {
        if (g) out << " ";
        out << column.gold_ranks[g].first << "=" << column.gold_ranks[g].second;
      }
    }
    out << "\n";
  };
  out << "gold ranks\n";
  ranks_line("  noisy-OR", report.noisy_or);
  ranks_line("  mb      ", report.mb);
  ranks_line("  sb      ", report.sb);
  out << "p>" << format_probability(report.threshold) << " within top " << report.top_k
      << "  noisy-OR: " << report.noisy_or.above_threshold << "  mb: " << report.mb.above_threshold
      << "  sb: " << report.sb.above_threshold << "\n";
  if (report.sampler_meta.samples) {
    out << "samples: " << *report.sampler_meta.samples;
    if (report.sampler_meta.converged) {
      out << "  converged: " << (*report.sampler_meta.converged ? "true" : "false");
    }
    if (report.sampler_meta.seed) out << "  seed: " << *report.sampler_meta.seed;
    out << "\n";
  }
  out << "runtime: " << std::setprecision(1) << report.runtime_ms << " ms\n";
  return out.str();
}

std::string batch_ranks_csv(const std::vector<ComparisonReport>& reports) {
  std::ostringstream out;
  out << "case_id,rank,disease_id,p_noisy_or,p_mb,p_sb,is_gold\n";
  for (const ComparisonReport& report : reports) {
    const std::size_t take = std::min<std::size_t>(report.top_k, report.rows.size());
    for (std::size_t r = 0; r < take; ++r) {
      const ComparisonRow& row = report.rows[r];
      out << report.case_id << "," << (r + 1) << "," << row.disease_id << ","
          << format_probability(row.p_noisy_or) << "," << format_probability(row.p_mb) << ","
          << format_probability(row.p_sb) << "," << (row.is_gold ? "true" : "false") << "\n";
    }
  }
  return out.str();
}

std::string batch_summary_csv(const std::vector<ComparisonReport>& reports) {
  std::ostringstream out;
  out << "case_id,n_positive,n_negative,n_gold,method,samples,converged,threshold,"
         "above_threshold_noisy_or,above_threshold_mb,above_threshold_sb\n";
  for (const ComparisonReport& report : reports) {
    out << report.case_id << "," << report.stats.n_positive << "," << report.stats.n_negative
        << "," << report.stats.n_gold << "," << method_name(report.noisy_or_method) << ",";
    if (report.sampler_meta.samples) out << *report.sampler_meta.samples;
    out << ",";
    if (report.sampler_meta.converged) {
      out << (*report.sampler_meta.converged ? "true" : "false");
    }
    out << "," << format_probability(report.threshold) << "," << report.noisy_or.above_threshold
        << "," << report.mb.above_threshold << "," << report.sb.above_threshold << "\n";
  }
  return out.str();
}

std::string batch_gold_ranks_csv(const std::vector<ComparisonReport>& reports) {
  std::ostringstream out;
  out << "case_id,disease_id,rank_noisy_or,rank_mb,rank_sb\n";
  for (const ComparisonReport& report : reports) {
    for (std::size_t g = 0; g < report.noisy_or.gold_ranks.size(); ++g) {
      out << report.case_id << "," << report.noisy_or.gold_ranks[g].first << ","
          << report.noisy_or.gold_ranks[g].second << "," << report.mb.gold_ranks[g].second << ","
          << report.sb.gold_ranks[g].second << "\n";
    }
  }
  return out.str();
}

}  // namespace bn2o
