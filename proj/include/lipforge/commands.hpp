// Command implementations behind the CLI, plus the verification suites.
#ifndef LIPFORGE_COMMANDS_HPP_
#define LIPFORGE_COMMANDS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "lipforge/analysis.hpp"
#include "lipforge/artifact.hpp"

namespace lipforge {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitSpecError = 2,  // also: artifact parse error for verify/profile
  kExitAllocFailure = 3,
  kExitMislabeled = 4,
};

struct CheckLine {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckLine> suite_scheme(const BuildResult& b);
std::vector<CheckLine> suite_lemma_h(const BuildResult& b);
std::vector<CheckLine> suite_lemma_g(const BuildResult& b, const GCheckOptions& opt = {});
std::vector<CheckLine> suite_assembly(const BuildResult& b, uint64_t seed = 7);
std::vector<CheckLine> suite_analysis(const BuildResult& b, size_t off_points = 20,
                                      uint64_t seed = 11);

// Deterministic sample of rational points of the window that are not
// witness points.
std::vector<Rational> off_a_sample(const BuildResult& b, size_t n, uint64_t seed);

int cmd_build(const std::string& spec_path, int K, int L, uint64_t seed,
              const std::string& out_dir, std::ostream& log);
int cmd_verify(const std::string& dir, const std::string& suite, std::ostream& out);
int cmd_profile(const std::string& dir, const std::string& points_file,
                const std::string& grid, std::ostream& out);

}  // namespace lipforge

#endif  // LIPFORGE_COMMANDS_HPP_
