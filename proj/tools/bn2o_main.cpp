// bn2o - diagnostic inference over two-layer noisy-OR networks.
//
// Subcommands: generate (synthetic networks and cases), diagnose (one model
// on one case), compare (all three models side by side), validate.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bn2o/compare.hpp"
#include "bn2o/errors.hpp"
#include "bn2o/exact.hpp"
#include "bn2o/generator.hpp"
#include "bn2o/io.hpp"
#include "bn2o/mb.hpp"
#include "bn2o/sampler.hpp"
#include "bn2o/sb.hpp"

namespace fs = std::filesystem;

namespace {

struct GenerateArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct SamplerArgs {
  std::uint64_t samples = 100000;
  std::uint64_t batch_size = 5000;
  std::uint64_t seed = 0;
  double tol = 0.005;
  int top_k_watch = 20;
  int workers = 1;
  bool self_importance = false;

  bn2o::SamplerConfig to_config() const {
    bn2o::SamplerConfig cfg;
    cfg.seed = seed;
    cfg.max_samples = samples;
    cfg.batch_size = std::min(batch_size, samples);
    cfg.convergence_tol = tol;
    cfg.top_k_watch = top_k_watch;
    cfg.workers = workers;
    cfg.self_importance = self_importance;
    return cfg;
  }
};

void add_sampler_flags(CLI::App* cmd, SamplerArgs& args) {
  cmd->add_option("--samples", args.samples, "Sample budget for likelihood weighting");
  cmd->add_option("--batch-size", args.batch_size, "Samples per convergence-check batch");
  cmd->add_option("--seed", args.seed, "Sampler seed");
  cmd->add_option("--tol", args.tol, "Convergence tolerance on watched posteriors");
  cmd->add_option("--top-k-watch", args.top_k_watch, "Diseases watched for convergence");
  cmd->add_option("--workers", args.workers, "Sampling worker threads");
  cmd->add_flag("--self-importance", args.self_importance,
                "Refresh the importance distribution toward the running posteriors each batch");
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    bn2o::write_text_file(out_path, content);
  }
}

int run_generate(const GenerateArgs& args) {
  bn2o::GeneratorConfig cfg = bn2o::load_generator_config_file(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;

  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw bn2o::IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  const bn2o::Network net = bn2o::generate_network(cfg);
  bn2o::save_network_file(net.spec(), out_dir / "network.json");

  std::vector<bn2o::GeneratedCase> cases;
  cases.reserve(cfg.n_cases);
  for (int k = 0; k < cfg.n_cases; ++k) {
    cases.push_back(bn2o::generate_case(net, cfg, k));
    bn2o::save_case_file(cases.back().evidence,
                         out_dir / (cases.back().evidence.case_id + ".json"));
  }
  bn2o::write_text_file(out_dir / "manifest.csv", bn2o::manifest_csv(cases));

  std::cout << "wrote " << (out_dir / "network.json").string() << " (" << net.n_diseases()
            << " diseases, " << net.n_findings() << " findings, " << net.spec().links.size()
            << " links)\n";
  std::cout << "wrote " << cfg.n_cases << " cases + manifest.csv to " << out_dir.string() << "\n";
  for (const std::string& warning : net.warnings()) std::cerr << "warning: " << warning << "\n";
  return 0;
}

int run_diagnose(const std::string& network_path, const std::string& case_path,
                 const std::string& model_name, const std::string& method_name,
                 bool method_given, const SamplerArgs& sampler_args, const std::string& out_path,
                 const std::string& trace_path, const std::string& audit_dir) {
  const bn2o::Network net = bn2o::load_network_file(network_path);
  const bn2o::CaseEvidence evidence = bn2o::load_case_file(case_path);
  const bn2o::Model model = bn2o::model_from_name(model_name);

  bn2o::PosteriorReport report;
  std::string trace_content;
  if (model == bn2o::Model::NoisyOr) {
    const bn2o::Method method = bn2o::method_from_name(method_name);
    switch (method) {
      case bn2o::Method::BruteForce:
        report = bn2o::brute_force_posteriors(net, evidence);
        break;
      case bn2o::Method::Quickscore:
        report = bn2o::quickscore_posteriors(net, evidence);
        break;
      case bn2o::Method::LikelihoodWeighting: {
        bn2o::LwResult lw =
            bn2o::likelihood_weighting_posteriors(net, evidence, sampler_args.to_config());
        report = std::move(lw.report);
        trace_content = bn2o::trace_csv(lw.trace, net);
        break;
      }
      case bn2o::Method::Analytic:
        throw bn2o::ValidationError(bn2o::ErrorCode::InvalidConfig,
                                    "--method must be brute, quickscore or lw");
    }
  } else {
    if (method_given && method_name != "analytic") {
      throw bn2o::ValidationError(bn2o::ErrorCode::InvalidConfig,
                                  "--method applies to the noisy-or model only");
    }
    report = model == bn2o::Model::Multimembership ? bn2o::mb_posteriors(net, evidence)
                                                   : bn2o::sb_posteriors(net, evidence);
  }

  emit(bn2o::posterior_report_csv(report), out_path);
  if (!trace_path.empty()) {
    if (trace_content.empty()) {
      throw bn2o::ValidationError(bn2o::ErrorCode::InvalidConfig,
                                  "--trace is only produced by --method lw");
    }
    bn2o::write_text_file(trace_path, trace_content);
  }
  if (!audit_dir.empty()) {
    std::error_code ec;
    fs::create_directories(audit_dir, ec);
    if (ec) throw bn2o::IoError("cannot create '" + audit_dir + "': " + ec.message());
    if (model == bn2o::Model::Multimembership) {
      bn2o::write_text_file(fs::path(audit_dir) / "mb_conditionals.csv",
                            bn2o::MbConditionals::derive(net).to_csv(net));
    } else if (model == bn2o::Model::SimpleBayes) {
      const bn2o::SbParameters params = bn2o::SbParameters::derive(net);
      bn2o::write_text_file(fs::path(audit_dir) / "sb_priors.csv", params.priors_csv(net));
      bn2o::write_text_file(fs::path(audit_dir) / "sb_conditionals.csv",
                            params.conditionals_csv(net));
    } else {
      throw bn2o::ValidationError(bn2o::ErrorCode::InvalidConfig,
                                  "--audit-dir applies to the mb and sb models");
    }
  }
  return 0;
}

std::vector<fs::path> collect_case_files(const std::string& cases_arg) {
  const fs::path path(cases_arg);
  if (!fs::exists(path)) throw bn2o::IoError("'" + cases_arg + "' does not exist");
  if (fs::is_regular_file(path)) return {path};

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() == ".json" && p.filename() != "network.json") files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw bn2o::IoError("no case files (*.json) in '" + cases_arg + "'");
  return files;
}

int run_compare(const std::string& network_path, const std::string& cases_arg,
                const std::string& method_name, int top_k, double threshold,
                const SamplerArgs& sampler_args, const std::string& out_path,
                const std::string& format, int jobs) {
  const bn2o::Network net = bn2o::load_network_file(network_path);

  bn2o::CompareOptions options;
  options.method = bn2o::method_from_name(method_name);
  options.sampler = sampler_args.to_config();
  options.top_k = top_k;
  options.threshold = threshold;
  const bn2o::ComparisonHarness harness(net, options);

  const std::vector<fs::path> files = collect_case_files(cases_arg);
  std::vector<bn2o::CaseEvidence> cases;
  cases.reserve(files.size());
  for (const fs::path& file : files) cases.push_back(bn2o::load_case_file(file));

  // cases run concurrently over the shared read-only network; emission below
  // stays in file order
  std::vector<bn2o::ComparisonReport> reports(cases.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < cases.size(); ++k) reports[k] = harness.run(cases[k]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = next.fetch_add(1); k < cases.size(); k = next.fetch_add(1)) {
            reports[k] = harness.run(cases[k]);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (format == "text") {
    std::string text;
    for (const bn2o::ComparisonReport& report : reports) {
      text += bn2o::comparison_text(report) + "\n";
    }
    emit(text, out_path);
    return 0;
  }

  if (out_path.empty()) {
    std::cout << bn2o::batch_ranks_csv(reports);
    return 0;
  }
  const fs::path out(out_path);
  fs::path stem = out;
  stem.replace_extension();
  bn2o::write_text_file(out, bn2o::batch_ranks_csv(reports));
  bn2o::write_text_file(stem.string() + "_summary.csv", bn2o::batch_summary_csv(reports));
  bn2o::write_text_file(stem.string() + "_gold_ranks.csv", bn2o::batch_gold_ranks_csv(reports));
  std::cout << "wrote " << out.string() << ", " << stem.string() << "_summary.csv, "
            << stem.string() << "_gold_ranks.csv (" << reports.size() << " cases)\n";
  return 0;
}

int run_validate(const std::string& network_path, const std::string& case_path) {
  const bn2o::Network net = bn2o::load_network_file(network_path);
  std::cout << "network OK: " << net.n_diseases() << " diseases, " << net.n_findings()
            << " findings, " << net.spec().links.size() << " links\n";
  for (const std::string& warning : net.warnings()) std::cout << "warning: " << warning << "\n";
  if (!case_path.empty()) {
    const bn2o::CaseEvidence evidence = bn2o::load_case_file(case_path);
    bn2o::bind_case(net, evidence);
    const bn2o::CaseStats stats = bn2o::case_stats(evidence);
    std::cout << "case OK: " << evidence.case_id << " |F+|=" << stats.n_positive
              << " |F-|=" << stats.n_negative << " |D|=" << stats.n_gold << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagnostic inference and model sensitivity analysis for two-layer "
               "noisy-OR belief networks"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic network and cases");
  generate->add_option("--config", gen_args.config_path, "Generator config (JSON)")->required();
  generate->add_option("--out-dir", gen_args.out_dir, "Output directory")->required();
  generate->add_option("--seed", gen_args.seed, "Override the config seed")
      ->each([&](const std::string&) { gen_args.seed_set = true; });

  std::string network_path, case_path, model = "noisy-or", method = "quickscore";
  std::string out_path, trace_path, audit_dir;
  SamplerArgs diag_sampler;
  CLI::App* diagnose = app.add_subcommand("diagnose", "Posteriors for one model on one case");
  diagnose->add_option("--network", network_path, "Network file")->required();
  diagnose->add_option("--case", case_path, "Case file")->required();
  diagnose->add_option("--model", model, "noisy-or | mb | sb");
  diagnose->add_option("--method", method, "brute | quickscore | lw (noisy-or only)");
  diagnose->add_option("--out", out_path, "Report CSV path (default stdout)");
  diagnose->add_option("--trace", trace_path, "Sampler trace CSV path (lw only)");
  diagnose->add_option("--audit-dir", audit_dir, "Write derived mb/sb parameter CSVs here");
  add_sampler_flags(diagnose, diag_sampler);

  std::string cmp_network, cmp_cases, cmp_method = "quickscore", cmp_out, cmp_format = "csv";
  int cmp_top = 30;
  int cmp_jobs = 1;
  double cmp_threshold = 0.5;
  SamplerArgs cmp_sampler;
  CLI::App* compare = app.add_subcommand("compare", "All three models over a case set");
  compare->add_option("--network", cmp_network, "Network file")->required();
  compare->add_option("--cases", cmp_cases, "Case file or directory of case files")->required();
  compare->add_option("--method", cmp_method, "noisy-OR method: brute | quickscore | lw");
  compare->add_option("--top", cmp_top, "Display rows per case");
  compare->add_option("--threshold", cmp_threshold, "Posterior threshold for the count statistic");
  compare->add_option("--out", cmp_out, "Ranks CSV path; summary/gold-rank files sit next to it");
  compare->add_option("--format", cmp_format, "csv | text")
      ->check(CLI::IsMember({"csv", "text"}));
  compare->add_option("--jobs", cmp_jobs, "Concurrent cases");
  add_sampler_flags(compare, cmp_sampler);

  std::string val_network, val_case;
  CLI::App* validate = app.add_subcommand("validate", "Validate a network and optional case");
  validate->add_option("--network", val_network, "Network file")->required();
  validate->add_option("--case", val_case, "Case file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (generate->parsed()) return run_generate(gen_args);
    if (diagnose->parsed()) {
      return run_diagnose(network_path, case_path, model, method,
                          diagnose->count("--method") > 0, diag_sampler, out_path, trace_path,
                          audit_dir);
    }
    if (compare->parsed()) {
      return run_compare(cmp_network, cmp_cases, cmp_method, cmp_top, cmp_threshold, cmp_sampler,
                         cmp_out, cmp_format, cmp_jobs);
    }
    if (validate->parsed()) return run_validate(val_network, val_case);
  } catch (const bn2o::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bn2o::InferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const bn2o::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
