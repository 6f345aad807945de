#include "lipforge/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "lipforge/parallel.hpp"

namespace lipforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

CheckLine line(const std::string& suite, const std::string& name, bool pass,
               std::string detail = {}) {
  return {suite, name, pass, std::move(detail)};
}

// Measure of s inside the open interval iv, from the parts meeting it.
Rational measure_inside(const IntervalSet& s, const Interval& iv) {
  const auto& ps = s.parts();
  auto it = std::partition_point(ps.begin(), ps.end(),
                                 [&](const Interval& p) { return p.hi <= iv.lo; });
  Rational m;
  for (; it != ps.end() && it->lo < iv.hi; ++it) {
    Rational a = max(it->lo, iv.lo), b = min(it->hi, iv.hi);
    if (a < b) m += b - a;
  }
  return m;
}

std::string k_label(int k) { return "k=" + std::to_string(k) + " "; }

}  // namespace

std::vector<CheckLine> suite_scheme(const BuildResult& b) {
  std::vector<CheckLine> out;
  const SuslinScheme& s = b.scheme;
  auto [k, l] = find_property_b_violation(s);
  out.push_back(line("scheme", "property (b) over all pairs k<l", k == 0,
                     k ? "F_" + std::to_string(k) + ", F_" + std::to_string(l) : ""));
  std::string bad;
  for (int j = 1; j <= s.depth() && bad.empty(); ++j)
    if (!s.F(j).subset_of(s.F(s.parent[size_t(j)]))) bad = "F_" + std::to_string(j);
  out.push_back(line("scheme", "F_k inside F_parent(k)", bad.empty(), bad));
  bad.clear();
  for (const Rational& x : b.witnesses) {
    size_t prev = 0;
    for (int depth : {s.depth() / 3, 2 * s.depth() / 3, s.depth()}) {
      size_t c = 0;
      for (int j = 1; j <= depth; ++j) c += s.F(j).contains(x);
      if (c < prev) bad = x.str();
      prev = c;
    }
  }
  out.push_back(line("scheme", "membership count nondecreasing in depth", bad.empty(), bad));
  return out;
}

std::vector<CheckLine> suite_lemma_h(const BuildResult& b) {
  std::vector<CheckLine> out;
  for (int k = 1; k <= b.owners(); ++k) {
    const HBundle& h = b.Hb(k);
    bool f_in_h = h.F.subset_of(h.H);
    IntervalSet cap = intersection(set_union(h.F, h.alloc), eps_neighborhood(h.F, h.eps));
    bool h_in_cap = h.H.subset_of(cap);
    std::string short_piece;
    const Rational twelfth = Rational(1, kPieceDivisor);
    for (const Interval& J : h.components) {
      Rational m = measure_inside(h.H, middle_third(J));
      if (!(m.sign() > 0 && m >= J.length() * twelfth)) {
        short_piece = J.str() + " carries " + m.str();
        break;
      }
    }
    std::string hit;
    for (const Rational& x : b.witnesses)
      if (h.alloc.contains(x)) hit = x.str();
    out.push_back(line("lemma-h", k_label(k) + "F ⊆ H", f_in_h));
    out.push_back(line("lemma-h", k_label(k) + "H ⊆ (F ∪ alloc) ∩ (F)_eps", h_in_cap));
    out.push_back(line("lemma-h", k_label(k) + "|H ∩ mid(J)| >= |J|/12 for all " +
                                      std::to_string(h.components.size()) + " components",
                       short_piece.empty(), short_piece));
    out.push_back(line("lemma-h", k_label(k) + "pieces avoid witness points", hit.empty(), hit));
  }
  return out;
}

std::vector<CheckLine> suite_lemma_g(const BuildResult& b, const GCheckOptions& opt) {
  std::vector<CheckLine> out;
  const int top = std::min(b.K(), b.owners());
  std::vector<GCheck> checks(static_cast<size_t>(top));
  parallel_for(size_t(top), [&](size_t i) {
    int k = int(i) + 1;
    checks[i] = check_g_properties(b.gk(k), b.Gb(k), b.Hb(k), b.witnesses, opt);
  });
  for (const GCheck& c : checks) {
    std::string kl = k_label(c.k);
    out.push_back(line("lemma-g", kl + "positive slope inside H", c.support_in_H));
    out.push_back(line("lemma-g", kl + "slope <= 12", c.slope_ok, "max " + c.max_slope.str()));
    out.push_back(line("lemma-g", kl + "g(y) - g(x) = y - x on " + std::to_string(c.ladder_pairs) +
                                      " ladder pairs", c.ladder_ok, c.failure));
    out.push_back(line("lemma-g", kl + "quotient bands on " +
                                      std::to_string(c.quotient_points) + " points",
                       c.bands_ok, c.failure));
    out.push_back(line("lemma-g", kl + "anchored G and oscillation on " +
                                      std::to_string(c.osc_samples) + " intervals",
                       c.anchored_ok && c.osc_ok, c.failure));
    out.push_back(line("lemma-g", kl + "TV < 2^-" + std::to_string(c.k), c.tv_ok,
                       "TV " + c.tv.str()));
  }
  return out;
}

std::vector<CheckLine> suite_assembly(const BuildResult& b, uint64_t seed) {
  std::vector<CheckLine> out;
  std::vector<const PLFunction*> gs;
  for (const PLFunction& g : b.g) gs.push_back(&g);
  out.push_back(line("assembly", "g_sum equals the merged sum", sum(gs) == b.g_sum));

  std::mt19937_64 rng(seed);
  const Window& w = b.spec.window;
  std::string bad;
  for (int i = 0; i < 1000; ++i) {
    Rational x = w.lo + w.length() * Rational((long long)(rng() % 1000003), 1000003);
    Rational direct;
    for (const PLFunction& g : b.g) direct += g(x);
    if (direct != b.g_sum(x)) bad = x.str();
  }
  out.push_back(line("assembly", "summed evaluation matches g_sum at 1000 points", bad.empty(), bad));

  ACCheck ac = ac_check(gs);
  out.push_back(line("assembly", "TV(g_sum) = sum TV(g_k) < 1",
                     ac.additive && ac.tv_of_sum < Rational(1), "TV " + ac.tv_of_sum.str()));
  PLFunction f = b.has_jarnik ? b.jarnik.f : PLFunction();
  ACCheck ach = ac_check({&f, &b.g_sum});
  out.push_back(line("assembly", "TV(h) = TV(f) + TV(g) < 2",
                     ach.additive && ach.tv_of_sum < Rational(2) && b.h == sum({&f, &b.g_sum}),
                     "TV " + ach.tv_of_sum.str()));
  if (b.has_jarnik)
    out.push_back(line("assembly", "TV(f) < 1", f.total_variation() < Rational(1),
                       "TV " + f.total_variation().str()));

  // Tails: sup |g_sum - sum_{k<=K'} g_k| = TV of the tail.
  bad.clear();
  for (int kp = 1; kp < b.K(); ++kp) {
    Rational tail;
    for (int k = kp + 1; k <= b.K(); ++k) tail += b.gk(k).total_variation();
    if (!(tail <= Rational::pow2(-kp))) bad = "K'=" + std::to_string(kp);
  }
  out.push_back(line("assembly", "tail after K' bounded by 2^-K'", bad.empty(), bad));

  bad.clear();
  for (const Rational& x : b.witnesses)
    for (int k = 1; k <= b.owners(); ++k)
      if (b.scheme.F(k).contains(x) && b.fam.E_vec[size_t(k)].contains(x))
        bad = "x=" + x.str() + " k=" + std::to_string(k);
  out.push_back(line("assembly", "x in A and x in F_k imply x outside E_k", bad.empty(), bad));
  return out;
}

std::vector<Rational> off_a_sample(const BuildResult& b, size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Window& w = b.spec.window;
  std::vector<Rational> out;
  while (out.size() < n) {
    long long den = (long long)(rng() % 4093) + 3;
    Rational x = w.lo + w.length() * Rational((long long)(rng() % uint64_t(den - 1)) + 1, den);
    if (!b.is_witness(x)) out.push_back(x);
  }
  return out;
}

std::vector<CheckLine> suite_analysis(const BuildResult& b, size_t off_points, uint64_t seed) {
  std::vector<CheckLine> out;
  std::string bad;
  size_t checked = 0;
  for (const Rational& x : b.witnesses) {
    for (int m = 1; m <= b.cfg.L - 2; ++m) {
      Rational r = Rational::pow2(-m);
      Rational q = sup_quotient(b.g_sum, x, r);
      long long active = (long long)active_levels(b, x, r).size();
      ++checked;
      if (q < Rational(active, 3) - Rational(1)) bad = "x=" + x.str() + " m=" + std::to_string(m);
    }
  }
  out.push_back(line("analysis", "growth at " + std::to_string(checked) + " witness scales",
                     bad.empty(), bad));

  std::vector<Rational> grid = dyadic_grid(1, b.cfg.L);
  std::vector<Rational> pts = off_a_sample(b, off_points, seed);
  std::vector<WitnessTrace> traces(pts.size());
  parallel_for(pts.size(), [&](size_t i) { traces[i] = witness_radii(b, pts[i], grid); });
  bad.clear();
  for (const WitnessTrace& t : traces)
    if (!t.ok() && bad.empty()) bad = "x=" + t.x.str();
  out.push_back(line("analysis", "witness radii bounds at " + std::to_string(pts.size()) +
                                     " off-A points", bad.empty(), bad));
  return out;
}

int cmd_build(const std::string& spec_path, int K, int L, uint64_t seed,
              const std::string& out_dir, std::ostream& log) {
  BuildResult b;
  try {
    SchemeSpec spec = load_spec(spec_path);
    BuildConfig cfg;
    cfg.K = K;
    cfg.L = L;
    cfg.seed = seed;
    b = build_sum(spec, cfg);
  } catch (const AllocationError& e) {
    log << "allocation failure: " << e.what() << "\n";
    return kExitAllocFailure;
  } catch (const ValidationError& e) {
    log << "spec error: " << e.what() << "\n";
    return kExitSpecError;
  }
  write_artifact(b, out_dir);
  log << "built " << b.K() << " summands, " << b.registry.size() << " pieces, TV(g) = "
      << b.g_sum.total_variation() << " into " << out_dir << "\n";
  return kExitOk;
}

namespace {

// Rebuilds from the artifact's spec and config and checks the stored CSVs
// against the rebuild.
BuildResult rebuild(const Artifact& a, std::vector<CheckLine>& lines) {
  BuildResult b = build_sum(a.spec, a.cfg);
  bool same = a.g.size() == b.g.size();
  std::string which;
  for (size_t i = 0; same && i < a.g.size(); ++i)
    if (!(a.g[i] == b.g[i])) {
      same = false;
      which = g_csv_name(int(i + 1), b.K());
    }
  if (!(a.g_sum == b.g_sum)) which = "g_sum.csv";
  if (!(a.h == b.h)) which = "h.csv";
  if (b.has_jarnik != a.f.has_value() || (a.f && !(*a.f == b.jarnik.f))) which = "f.csv";
  lines.push_back(line("artifact", "stored functions match the rebuild", which.empty(), which));
  return b;
}

}  // namespace

int cmd_verify(const std::string& dir, const std::string& suite, std::ostream& out) {
  static const std::vector<std::string> kSuites = {"scheme", "lemma-h", "lemma-g", "assembly",
                                                   "analysis", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    out << "unknown suite '" << suite << "'\n";
    return kExitSpecError;
  }
  Artifact a;
  try {
    a = read_artifact(dir);
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitSpecError;
  }
  std::vector<CheckLine> lines;
  BuildResult b;
  try {
    b = rebuild(a, lines);
  } catch (const Error& e) {
    out << "parse error: artifact does not rebuild: " << e.what() << "\n";
    return kExitSpecError;
  }
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  auto add = [&](std::vector<CheckLine> v) { lines.insert(lines.end(), v.begin(), v.end()); };
  if (want("scheme")) add(suite_scheme(b));
  if (want("lemma-h")) add(suite_lemma_h(b));
  if (want("lemma-g")) add(suite_lemma_g(b));
  if (want("assembly")) add(suite_assembly(b));
  if (want("analysis")) add(suite_analysis(b));
  bool all_pass = true;
  json rows = json::array();
  for (const CheckLine& l : lines) {
    out << l.suite << ": " << l.name << ": " << (l.pass ? "pass" : "FAIL");
    if (!l.pass && !l.detail.empty()) out << " (" << l.detail << ")";
    out << "\n";
    all_pass = all_pass && l.pass;
    rows.push_back({{"suite", l.suite}, {"check", l.name}, {"pass", l.pass}, {"detail", l.detail}});
  }
  write_file((fs::path(dir) / ("verify_" + suite + ".json")).string(),
             json{{"suite", suite}, {"pass", all_pass}, {"checks", rows}}.dump(2) + "\n");
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_profile(const std::string& dir, const std::string& points_file, const std::string& grid_text,
                std::ostream& out) {
  Artifact a;
  std::vector<std::pair<Rational, bool>> points;  // (x, labelled in_A)
  std::vector<Rational> grid;
  try {
    a = read_artifact(dir);
    grid = parse_grid(grid_text, a.cfg.L);
    std::istringstream in(read_file(points_file));
    std::string row;
    size_t n = 0;
    while (std::getline(in, row)) {
      ++n;
      if (row.empty() || row[0] == '#' || row.rfind("x,", 0) == 0) continue;
      auto comma = row.find(',');
      if (comma == std::string::npos) throw ParseError("points row " + std::to_string(n) + ": missing label");
      std::string label = row.substr(comma + 1);
      if (label != "in_A" && label != "off_A")
        throw ParseError("points row " + std::to_string(n) + ": label must be in_A or off_A");
      try {
        points.emplace_back(Rational::parse(row.substr(0, comma)), label == "in_A");
      } catch (const std::invalid_argument& e) {
        throw ParseError("points row " + std::to_string(n) + ": " + e.what());
      }
    }
  } catch (const Error& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitSpecError;
  }
  BuildResult b = build_sum(a.spec, a.cfg);
  for (const auto& [x, in_a] : points) {
    if (!in_a && b.is_witness(x)) {
      out << "point " << x << " is labelled off_A but is a witness point\n";
      return kExitMislabeled;
    }
  }
  std::string prof = "x,r,sup_quotient\n", traces = "x,p,j_p,r_p,osc,bound_ok\n";
  for (const auto& [x, in_a] : points) {
    QuotientProfile p = lip_profile(b.h, x, grid);
    for (size_t i = 0; i < p.radii.size(); ++i)
      prof += x.str() + "," + p.radii[i].str() + "," + p.quotients[i].str() + "\n";
    out << x << " " << (in_a ? "in_A" : "off_A") << " lip~" << p.lip_estimate.to_double()
        << " Lip~" << p.Lip_estimate.to_double();
    if (!in_a) {
      WitnessTrace t = witness_radii(b, x, grid);
      for (size_t i = 0; i < t.steps.size(); ++i) {
        const WitnessStep& s = t.steps[i];
        traces += x.str() + "," + std::to_string(i + 1) + "," + std::to_string(s.j) + "," +
                  s.r.str() + "," + s.osc.str() + "," + (s.bound_ok ? "1" : "0") + "\n";
      }
      out << " l=" << t.l << " steps=" << t.steps.size() << (t.ok() ? " bounds ok" : " BOUNDS FAIL");
    }
    out << "\n";
  }
  write_file((fs::path(dir) / "profile.csv").string(), prof);
  write_file((fs::path(dir) / "traces.csv").string(), traces);
  return kExitOk;
}

}  // namespace lipforge
