#include <iostream>

#include <CLI11.hpp>

#include "lipforge/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact construction of monotone functions with prescribed lip-infinity sets"};
  app.require_subcommand(1);

  std::string spec, out_dir;
  int K = 0, L = 0;
  uint64_t seed = 0;
  auto* build = app.add_subcommand("build", "build g (and f, h) from a scheme spec");
  build->add_option("spec", spec, "scheme spec JSON")->required();
  build->add_option("--depth", K, "number of summands K")->required();
  build->add_option("--resolution", L, "hat-set resolution L (>= K)")->required();
  build->add_option("--seed", seed, "allocator seed");
  build->add_option("--out", out_dir, "artifact directory")->required();

  std::string dir, suite = "all";
  auto* verify = app.add_subcommand("verify", "re-check the stored construction of an artifact");
  verify->add_option("dir", dir, "artifact directory")->required();
  verify->add_option("--suite", suite, "lemma-h|lemma-g|scheme|assembly|analysis|all");

  std::string points, grid;
  auto* profile = app.add_subcommand("profile", "difference-quotient profiles at given points");
  profile->add_option("dir", dir, "artifact directory")->required();
  profile->add_option("--points", points, "CSV of x,label with label in_A|off_A")->required();
  profile->add_option("--grid", grid, "radius grid, e.g. 2^-1..2^-L")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : lipforge::kExitSpecError;
  }
  try {
    if (*build) return lipforge::cmd_build(spec, K, L, seed, out_dir, std::cerr);
    if (*verify) return lipforge::cmd_verify(dir, suite, std::cout);
    if (*profile) return lipforge::cmd_profile(dir, points, grid, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lipforge::kExitCheckFailed;
  }
  return 0;
}
