#ifndef BN2O_IO_HPP
#define BN2O_IO_HPP

#include <filesystem>
#include <istream>
#include <string>

#include "bn2o/network.hpp"

namespace bn2o {

// Network and case documents are JSON with a format_version field; unknown
// versions are rejected. Load validates, save round-trips bit-identically
// modulo key ordering.

inline constexpr int kFormatVersion = 1;

Network load_network(std::istream& in);
Network load_network(const std::string& text);
Network load_network_file(const std::filesystem::path& path);
std::string save_network(const NetworkSpec& spec);
void save_network_file(const NetworkSpec& spec, const std::filesystem::path& path);

CaseEvidence load_case(std::istream& in);
CaseEvidence load_case(const std::string& text);
CaseEvidence load_case_file(const std::filesystem::path& path);
std::string save_case(const CaseEvidence& evidence);
void save_case_file(const CaseEvidence& evidence, const std::filesystem::path& path);

// small file helpers shared by the CLI and report writers
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bn2o

#endif
