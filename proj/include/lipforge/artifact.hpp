// On-disk build artifacts: spec and config copies, scheme and registry dumps,
// one CSV per PL function and a JSON report.
#ifndef LIPFORGE_ARTIFACT_HPP_
#define LIPFORGE_ARTIFACT_HPP_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipforge/assembly.hpp"

namespace lipforge {

nlohmann::json config_to_json(const BuildConfig& c);
BuildConfig config_from_json(const nlohmann::json& j);

nlohmann::json build_report(const BuildResult& b);

// File name of the CSV for g_k, zero-padded to the width of K.
std::string g_csv_name(int k, int K);

void write_artifact(const BuildResult& b, const std::string& dir);

struct Artifact {
  SchemeSpec spec;
  BuildConfig cfg;
  std::vector<PLFunction> g;
  PLFunction g_sum;
  std::optional<PLFunction> f;
  PLFunction h;
  nlohmann::json report;
};

// Throws ParseError on missing or malformed files.
Artifact read_artifact(const std::string& dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lipforge

#endif  // LIPFORGE_ARTIFACT_HPP_
