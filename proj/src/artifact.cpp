#include "lipforge/artifact.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lipforge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

json config_to_json(const BuildConfig& c) {
  return {{"K", c.K}, {"L", c.L}, {"seed", c.seed}, {"horizon", c.effective_horizon()},
          {"d_min", c.d_min}};
}

BuildConfig config_from_json(const json& j) {
  try {
    BuildConfig c;
    c.K = j.at("K").get<int>();
    c.L = j.at("L").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.horizon = j.value("horizon", 0);
    c.d_min = j.value("d_min", 1);
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config.json: ") + e.what());
  }
}

json build_report(const BuildResult& b) {
  json j;
  j["config"] = config_to_json(b.cfg);
  j["scheme_depth"] = b.scheme.depth();
  j["owners"] = b.owners();
  j["witness_points"] = b.witnesses.size();
  j["registry_pieces"] = b.registry.size();
  j["tail_bound"] = b.tail_bound.str();
  json per = json::array();
  Rational tv_sum;
  for (int k = 1; k <= b.K(); ++k) {
    const GBundle& gb = b.Gb(k);
    json e{{"k", k},
           {"eps", b.cfg.eps(k).str()},
           {"tv", b.gk(k).total_variation().str()},
           {"max_slope", b.gk(k).max_slope().str()},
           {"breakpoints", b.gk(k).size()},
           {"G_measure", gb.G.measure().str()},
           {"G_parts", gb.G.size()},
           {"J_count", gb.J.size()},
           {"halvings", gb.halvings},
           {"uncovered_F_parts", gb.uncovered.size()}};
    if (k <= b.owners()) {
      e["H_components"] = b.Hb(k).components.size();
      e["E_parts"] = b.fam.E_vec[size_t(k)].size();
    }
    tv_sum += b.gk(k).total_variation();
    per.push_back(e);
  }
  j["summands"] = per;
  j["tv_g_sum"] = b.g_sum.total_variation().str();
  j["sum_tv_g"] = tv_sum.str();
  if (b.has_jarnik) {
    json jr = json::array();
    for (size_t i = 0; i < b.jarnik.U.size(); ++i)
      jr.push_back({{"k", i + 1},
                    {"source_level", b.jarnik.source_level[i]},
                    {"shrunk", bool(b.jarnik.shrunk[i])},
                    {"measure", b.jarnik.U[i].measure().str()}});
    j["jarnik"] = jr;
    j["tv_f"] = b.jarnik.f.total_variation().str();
  }
  j["tv_h"] = b.h.total_variation().str();
  return j;
}

std::string g_csv_name(int k, int K) {
  int width = int(std::to_string(K).size());
  std::string num = std::to_string(k);
  return "g_" + std::string(size_t(std::max(0, width - int(num.size()))), '0') + num + ".csv";
}

void write_artifact(const BuildResult& b, const std::string& dir) {
  fs::create_directories(dir);
  auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  write_file(path("spec.json"), spec_to_json(b.spec).dump(2) + "\n");
  write_file(path("config.json"), config_to_json(b.cfg).dump(2) + "\n");
  write_file(path("scheme.json"), scheme_to_json(b.scheme).dump(1) + "\n");
  write_file(path("registry.txt"), b.registry.dump());
  for (int k = 1; k <= b.K(); ++k) write_file(path(g_csv_name(k, b.K())), b.gk(k).to_csv());
  write_file(path("g_sum.csv"), b.g_sum.to_csv());
  if (b.has_jarnik) write_file(path("f.csv"), b.jarnik.f.to_csv());
  write_file(path("h.csv"), b.h.to_csv());
  write_file(path("report.json"), build_report(b).dump(2) + "\n");
}

Artifact read_artifact(const std::string& dir) {
  auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  Artifact a;
  try {
    a.spec = parse_spec(json::parse(read_file(path("spec.json"))));
    a.cfg = config_from_json(json::parse(read_file(path("config.json"))));
    a.report = json::parse(read_file(path("report.json")));
  } catch (const json::exception& e) {
    throw ParseError(std::string("artifact json: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("artifact spec: ") + e.what());
  }
  for (int k = 1; k <= a.cfg.K; ++k) {
    std::string name = g_csv_name(k, a.cfg.K);
    try {
      a.g.push_back(PLFunction::from_csv(read_file(path(name))));
    } catch (const ParseError& e) {
      throw ParseError(name + ": " + e.what());
    }
  }
  a.g_sum = PLFunction::from_csv(read_file(path("g_sum.csv")));
  if (fs::exists(path("f.csv"))) a.f = PLFunction::from_csv(read_file(path("f.csv")));
  a.h = PLFunction::from_csv(read_file(path("h.csv")));
  return a;
}

}  // namespace lipforge
