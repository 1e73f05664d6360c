#include "bn2o/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bn2o/errors.hpp"

namespace bn2o {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

void check_version(const ordered_json& doc, const char* what) {
  if (!doc.is_object()) throw ParseError(std::string(what) + " document must be a JSON object", 0);
  if (!doc.contains("format_version")) {
    throw ParseError(std::string(what) + " document missing format_version", 0);
  }
  const auto& v = doc.at("format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
    throw ParseError(std::string(what) + " format_version " + v.dump() + " not supported", 0);
  }
}

double require_probability(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw ParseError(where + " needs numeric '" + key + "'", 0);
  }
  return obj.at(key).get<double>();
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw ParseError(where + " needs string '" + key + "'", 0);
  }
  return obj.at(key).get<std::string>();
}

std::vector<std::string> read_id_list(const ordered_json& doc, const char* key,
                                      const std::string& where, bool required) {
  std::vector<std::string> out;
  if (!doc.contains(key)) {
    if (required) throw ParseError(where + " missing '" + key + "' list", 0);
    return out;
  }
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(where + " '" + key + "' must be a list", 0);
  std::set<std::string> seen;
  for (const auto& item : arr) {
    if (!item.is_string()) throw ParseError(where + " '" + key + "' entries must be strings", 0);
    std::string id = item.get<std::string>();
    if (!seen.insert(id).second) {
      throw ParseError(where + " '" + key + "' repeats '" + id + "'", 0);
    }
    out.push_back(std::move(id));
  }
  return out;
}

std::string slurp(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed to read input stream");
  return buf.str();
}

}  // namespace

Network load_network(const std::string& text) {
  const ordered_json doc = parse_document(text);
  check_version(doc, "network");
  for (const char* key : {"diseases", "findings", "links"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
      throw ParseError(std::string("network document needs '") + key + "' list", 0);
    }
  }

  NetworkSpec spec;
  for (const auto& d : doc.at("diseases")) {
    const std::string id = require_string(d, "id", "disease entry");
    spec.diseases.push_back(
        {id, require_string(d, "name", "disease '" + id + "'"),
         require_probability(d, "prior", "disease '" + id + "'")});
  }
  for (const auto& f : doc.at("findings")) {
    const std::string id = require_string(f, "id", "finding entry");
    spec.findings.push_back(
        {id, require_string(f, "name", "finding '" + id + "'"),
         require_probability(f, "leak", "finding '" + id + "'")});
  }
  for (const auto& l : doc.at("links")) {
    const std::string disease = require_string(l, "disease", "link entry");
    const std::string finding = require_string(l, "finding", "link entry");
    spec.links.push_back({disease, finding,
                          require_probability(l, "q", "link (" + disease + ", " + finding + ")")});
  }
  return Network::validate(std::move(spec));
}

Network load_network(std::istream& in) { return load_network(slurp(in)); }

Network load_network_file(const std::filesystem::path& path) {
  return load_network(read_text_file(path));
}

std::string save_network(const NetworkSpec& spec) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["diseases"] = ordered_json::array();
  for (const DiseaseSpec& d : spec.diseases) {
    doc["diseases"].push_back({{"id", d.id}, {"name", d.name}, {"prior", d.prior}});
  }
  doc["findings"] = ordered_json::array();
  for (const FindingSpec& f : spec.findings) {
    doc["findings"].push_back({{"id", f.id}, {"name", f.name}, {"leak", f.leak}});
  }
  doc["links"] = ordered_json::array();
  for (const CausalLink& l : spec.links) {
    doc["links"].push_back({{"disease", l.disease}, {"finding", l.finding}, {"q", l.q}});
  }
  return doc.dump(2) + "\n";
}

void save_network_file(const NetworkSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, save_network(spec));
}

CaseEvidence load_case(const std::string& text) {
  const ordered_json doc = parse_document(text);
  check_version(doc, "case");

  CaseEvidence evidence;
  evidence.case_id = require_string(doc, "case_id", "case document");
  const std::string where = "case '" + evidence.case_id + "'";
  evidence.positive = read_id_list(doc, "positive", where, true);
  evidence.negative = read_id_list(doc, "negative", where, true);
  evidence.gold = read_id_list(doc, "gold", where, false);

  std::set<std::string> pos(evidence.positive.begin(), evidence.positive.end());
  for (const std::string& id : evidence.negative) {
    if (pos.count(id)) {
      throw ParseError(where + ": finding '" + id + "' listed both positive and negative", 0);
    }
  }
  return evidence;
}

CaseEvidence load_case(std::istream& in) { return load_case(slurp(in)); }

CaseEvidence load_case_file(const std::filesystem::path& path) {
  return load_case(read_text_file(path));
}

std::string save_case(const CaseEvidence& evidence) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = evidence.case_id;
  doc["positive"] = evidence.positive;
  doc["negative"] = evidence.negative;
  doc["gold"] = evidence.gold;
  return doc.dump(2) + "\n";
}

void save_case_file(const CaseEvidence& evidence, const std::filesystem::path& path) {
  write_text_file(path, save_case(evidence));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return slurp(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace bn2o
