#include "bn2o/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bn2o/errors.hpp"
#include "bn2o/io.hpp"

namespace bn2o {

namespace {

constexpr std::uint64_t kNetworkDomain = 0x6e65742d67656eull;
constexpr std::uint64_t kCaseDomain = 0x636173652d67656eull;

double draw_in(const ValueRange& range, RngStream& rng) {
  return range.lo + rng.next_unit() * (range.hi - range.lo);
}

std::string padded_id(char prefix, int index, int total) {
  int width = 3;
  for (int v = total; v >= 1000; v /= 10) ++width;
  std::ostringstream out;
  out << prefix;
  const std::string digits = std::to_string(index + 1);
  for (std::size_t p = digits.size(); p < static_cast<std::size_t>(width); ++p) out << '0';
  out << digits;
  return out.str();
}

void check_config(const GeneratorConfig& cfg) {
  const auto fail = [](const std::string& what) {
    throw ValidationError(ErrorCode::InfeasibleConfig, what);
  };
  if (cfg.n_diseases < 1 || cfg.n_findings < 1) fail("need at least one disease and one finding");
  if (cfg.n_cases < 1) fail("n_cases must be >= 1");
  if (cfg.max_attempts < 1) fail("max_attempts must be >= 1");
  if (!(cfg.link_density > 0.0) || cfg.link_density > cfg.n_diseases) {
    fail("link_density must lie in (0, n_diseases]");
  }
  if (!(cfg.prior_range.lo > 0.0 && cfg.prior_range.lo <= cfg.prior_range.hi &&
        cfg.prior_range.hi < 1.0)) {
    fail("prior_range must sit inside (0,1)");
  }
  if (!(cfg.q_range.lo > 0.0 && cfg.q_range.lo <= cfg.q_range.hi && cfg.q_range.hi <= 1.0)) {
    fail("q_range must sit inside (0,1]");
  }
  if (!(cfg.leak_range.lo >= 0.0 && cfg.leak_range.lo <= cfg.leak_range.hi &&
        cfg.leak_range.hi < 1.0)) {
    fail("leak_range must sit inside [0,1)");
  }
  if (cfg.target_positive.lo < 0 || cfg.target_positive.hi < cfg.target_positive.lo) {
    fail("target_positive range is inverted");
  }
  if (cfg.target_negative.lo < 0 || cfg.target_negative.hi < cfg.target_negative.lo) {
    fail("target_negative range is inverted");
  }
  if (cfg.true_disease_count.lo < 1 || cfg.true_disease_count.hi < cfg.true_disease_count.lo ||
      cfg.true_disease_count.lo > cfg.n_diseases) {
    fail("true_disease_count must sit inside [1, n_diseases]");
  }
}

ValueRange parse_range(const nlohmann::json& doc, const char* key, ValueRange fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number() || !arr[1].is_number()) {
    throw ParseError(std::string("generator config '") + key + "' must be [lo, hi]", 0);
  }
  return {arr[0].get<double>(), arr[1].get<double>()};
}

CountRange parse_count_range(const nlohmann::json& doc, const char* key, CountRange fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number_integer() ||
      !arr[1].is_number_integer()) {
    throw ParseError(std::string("generator config '") + key + "' must be [lo, hi] integers", 0);
  }
  return {arr[0].get<int>(), arr[1].get<int>()};
}

// partial Fisher-Yates, result sorted for stable downstream order
std::vector<int> subsample(std::vector<int> pool, std::size_t k, RngStream& rng) {
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick = t + rng.next_below(static_cast<std::uint32_t>(pool.size() - t));
    std::swap(pool[t], pool[pick]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

GeneratorConfig load_generator_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("generator config must be a JSON object", 0);
  if (!doc.contains("format_version") || !doc.at("format_version").is_number_integer() ||
      doc.at("format_version").get<int>() != kFormatVersion) {
    throw ParseError("generator config missing or unsupported format_version", 0);
  }

  GeneratorConfig cfg;
  const auto read_int = [&](const char* key, int fallback, bool required) {
    if (!doc.contains(key)) {
      if (required) throw ParseError(std::string("generator config needs '") + key + "'", 0);
      return fallback;
    }
    if (!doc.at(key).is_number_integer()) {
      throw ParseError(std::string("generator config '") + key + "' must be an integer", 0);
    }
    return doc.at(key).get<int>();
  };
  cfg.n_diseases = read_int("n_diseases", 0, true);
  cfg.n_findings = read_int("n_findings", 0, true);
  if (!doc.contains("link_density") || !doc.at("link_density").is_number()) {
    throw ParseError("generator config needs numeric 'link_density'", 0);
  }
  cfg.link_density = doc.at("link_density").get<double>();
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.prior_range = parse_range(doc, "prior_range", cfg.prior_range);
  cfg.q_range = parse_range(doc, "q_range", cfg.q_range);
  cfg.leak_range = parse_range(doc, "leak_range", cfg.leak_range);
  cfg.target_positive = parse_count_range(doc, "target_positive", cfg.target_positive);
  cfg.target_negative = parse_count_range(doc, "target_negative", cfg.target_negative);
  cfg.true_disease_count = parse_count_range(doc, "true_disease_count", cfg.true_disease_count);
  cfg.n_cases = read_int("n_cases", cfg.n_cases, false);
  cfg.max_attempts = read_int("max_attempts", cfg.max_attempts, false);
  check_config(cfg);
  return cfg;
}

GeneratorConfig load_generator_config_file(const std::filesystem::path& path) {
  return load_generator_config(read_text_file(path));
}

Network generate_network(const GeneratorConfig& cfg) {
  check_config(cfg);
  RngStream rng(derive_seed(cfg.seed, kNetworkDomain), 0);

  NetworkSpec spec;
  spec.diseases.reserve(cfg.n_diseases);
  for (int i = 0; i < cfg.n_diseases; ++i) {
    const std::string id = padded_id('d', i, cfg.n_diseases);
    spec.diseases.push_back({id, "Disease " + id.substr(1), draw_in(cfg.prior_range, rng)});
  }
  spec.findings.reserve(cfg.n_findings);
  for (int j = 0; j < cfg.n_findings; ++j) {
    const std::string id = padded_id('f', j, cfg.n_findings);
    spec.findings.push_back({id, "Finding " + id.substr(1), draw_in(cfg.leak_range, rng)});
  }

  const double link_probability = cfg.link_density / cfg.n_diseases;
  for (int j = 0; j < cfg.n_findings; ++j) {
    for (int i = 0; i < cfg.n_diseases; ++i) {
      if (rng.next_unit() < link_probability) {
        spec.links.push_back(
            {spec.diseases[i].id, spec.findings[j].id, draw_in(cfg.q_range, rng)});
      }
    }
  }
  return Network::validate(std::move(spec));
}

std::vector<std::uint8_t> forward_sample_findings(const Network& net, const DiseaseInstance& d,
                                                  RngStream& rng) {
  std::vector<std::uint8_t> present(net.n_findings());
  for (int j = 0; j < net.n_findings(); ++j) {
    present[j] = rng.next_unit() < 1.0 - finding_absent_prob(net, j, d);
  }
  return present;
}

GeneratedCase generate_case(const Network& net, const GeneratorConfig& cfg, int case_index) {
  check_config(cfg);
  RngStream rng(derive_seed(cfg.seed, kCaseDomain), static_cast<std::uint64_t>(case_index));
  const int n = net.n_diseases();
  const int m = net.n_findings();

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    // disease instance by rejection on prior draws
    DiseaseInstance instance;
    instance.present.resize(n);
    int present_count = 0;
    for (int i = 0; i < n; ++i) {
      instance.present[i] = rng.next_unit() < net.prior(i);
      present_count += instance.present[i];
    }
    if (present_count < cfg.true_disease_count.lo || present_count > cfg.true_disease_count.hi) {
      continue;
    }

    const std::vector<std::uint8_t> finding_present = forward_sample_findings(net, instance, rng);

    std::vector<int> present_findings;
    for (int j = 0; j < m; ++j) {
      if (finding_present[j]) present_findings.push_back(j);
    }
    if (static_cast<int>(present_findings.size()) < cfg.target_positive.lo) continue;
    std::vector<int> positive =
        static_cast<int>(present_findings.size()) > cfg.target_positive.hi
            ? subsample(present_findings, cfg.target_positive.hi, rng)
            : present_findings;

    // negative observations: absent findings linked to at least one gold disease
    std::vector<char> relevant(m, 0);
    for (int i = 0; i < n; ++i) {
      if (!instance.present[i]) continue;
      for (const Network::Arc& arc : net.disease_children(i)) relevant[arc.ordinal] = 1;
    }
    std::vector<int> negative_pool;
    for (int j = 0; j < m; ++j) {
      if (!finding_present[j] && relevant[j]) negative_pool.push_back(j);
    }
    if (static_cast<int>(negative_pool.size()) < cfg.target_negative.lo) continue;
    const int negative_cap =
        std::min<int>(cfg.target_negative.hi, static_cast<int>(negative_pool.size()));
    const int negative_count =
        cfg.target_negative.lo +
        static_cast<int>(rng.next_below(
            static_cast<std::uint32_t>(negative_cap - cfg.target_negative.lo + 1)));
    const std::vector<int> negative = subsample(std::move(negative_pool), negative_count, rng);

    GeneratedCase result;
    result.evidence.case_id = "case_" + padded_id('c', case_index, cfg.n_cases).substr(1);
    for (int j : positive) result.evidence.positive.push_back(net.finding(j).id);
    for (int j : negative) result.evidence.negative.push_back(net.finding(j).id);
    for (int i = 0; i < n; ++i) {
      if (instance.present[i]) result.evidence.gold.push_back(net.disease(i).id);
    }
    result.provenance = std::move(instance);
    result.stats = case_stats(result.evidence);
    return result;
  }

  throw InferenceError(ErrorCode::RejectionBudgetExceeded,
                       "no case matching the target ranges within " +
                           std::to_string(cfg.max_attempts) + " attempts; widen the targets");
}

std::string manifest_csv(const std::vector<GeneratedCase>& cases) {
  std::ostringstream out;
  out << "case,n_positive,n_negative,n_gold\n";
  for (const GeneratedCase& c : cases) {
    out << c.evidence.case_id << "," << c.stats.n_positive << "," << c.stats.n_negative << ","
        << c.stats.n_gold << "\n";
  }
  return out.str();
}

}  // namespace bn2o
