// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "lipforge/analysis.hpp"
#include "lipforge/artifact.hpp"
#include "lipforge/commands.hpp"

using namespace lipforge;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Result {
  int id;
  std::string what;
  double limit;
  bool pass = true;
  double seconds = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Rational q(long long n, long long d = 1) { return Rational(n, d); }

SchemeSpec load(const std::string& name) {
  return load_spec(std::string(LIPFORGE_SPEC_DIR) + "/" + name);
}

struct SpecRun {
  const char* file;
  int K, L;
};

// Cantor runs at L = 12; at 14 its ladders do not fit in memory.
const SpecRun kSpecs[] = {
    {"zero.json", 12, 14},
    {"zero_one.json", 12, 14},
    {"rationals.json", 12, 14},
    {"cantor.json", 12, 12},
};

BuildResult build(const SchemeSpec& spec, int K, int L, uint64_t seed = 0) {
  BuildConfig cfg;
  cfg.K = K;
  cfg.L = L;
  cfg.seed = seed;
  return build_sum(spec, cfg);
}

// ---------------------------------------------------------------- 1

// Exact integer membership on the grid i / 4096, i = 0..4096.
constexpr long long kGrid = 4096;

struct RawInterval {
  long long ln, ld, hn, hd;  // lo = ln/ld, hi = hn/hd
  bool lc, hc;
};

// Marks grid points of a raw interval: i/G >= n/d  <=>  i*d >= G*n.
void mark(std::vector<char>& bits, const RawInterval& r) {
  for (long long i = 0; i <= kGrid; ++i) {
    long long a = i * r.ld - kGrid * r.ln;  // sign of i/G - lo
    long long b = i * r.hd - kGrid * r.hn;  // sign of i/G - hi
    bool in_lo = r.lc ? a >= 0 : a > 0;
    bool in_hi = r.hc ? b <= 0 : b < 0;
    if (in_lo && in_hi) bits[size_t(i)] = 1;
  }
}

RawInterval raw_of(const Interval& iv) {
  auto split = [](const Rational& x, long long& n, long long& d) {
    n = std::stoll(x.num_str());
    d = std::stoll(x.den_str());
  };
  RawInterval r{};
  split(iv.lo, r.ln, r.ld);
  split(iv.hi, r.hn, r.hd);
  r.lc = iv.lo_closed;
  r.hc = iv.hi_closed;
  return r;
}

std::vector<char> bits_of(const IntervalSet& s) {
  std::vector<char> bits(size_t(kGrid + 1), 0);
  for (const Interval& p : s.parts()) mark(bits, raw_of(p));
  return bits;
}

void random_raw(std::mt19937_64& rng, std::vector<RawInterval>& raw, std::vector<Interval>& ivs) {
  raw.clear();
  ivs.clear();
  int n = 1 + int(rng() % 16);
  for (int i = 0; i < n; ++i) {
    // Half the time dyadic, so endpoints sit on the grid.
    long long d = rng() % 2 ? (1LL << (rng() % 11)) : 1 + (long long)(rng() % 1024);
    long long a = (long long)(rng() % uint64_t(d + 1));
    long long len = (long long)(rng() % uint64_t(d / 4 + 2));
    long long b = std::min(d, a + len);
    RawInterval r{a, d, b, d, true, true};
    if (a == b) {
      r.lc = r.hc = true;
    } else {
      r.lc = rng() % 2;
      r.hc = rng() % 2;
    }
    raw.push_back(r);
    ivs.push_back({q(a, d), q(b, d), r.lc, r.hc});
  }
}

Result criterion1() {
  Result r{1, "interval-set algebra vs grid membership oracle, 10^4 pairs", 30};
  auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::vector<RawInterval> ra, rb;
  std::vector<Interval> ia, ib;
  for (int t = 0; t < 10000 && r.pass; ++t) {
    random_raw(rng, ra, ia);
    random_raw(rng, rb, ib);
    IntervalSet a(ia), b(ib);
    std::vector<char> ba(size_t(kGrid + 1), 0), bb(size_t(kGrid + 1), 0);
    for (const auto& x : ra) mark(ba, x);
    for (const auto& x : rb) mark(bb, x);
    IntervalSet u = set_union(a, b), in = intersection(a, b), df = difference(a, b);
    std::vector<char> bu = bits_of(u), bi = bits_of(in), bd = bits_of(df), bs = bits_of(a);
    for (size_t i = 0; i < ba.size(); ++i) {
      if (bs[i] != ba[i] || bu[i] != (ba[i] | bb[i]) || bi[i] != (ba[i] & bb[i]) ||
          bd[i] != (ba[i] & !bb[i])) {
        r.fail("pair " + std::to_string(t) + " at " + q((long long)i, kGrid).str());
        break;
      }
    }
    if (u.measure() + in.measure() != a.measure() + b.measure())
      r.fail("measure identity at pair " + std::to_string(t));
  }
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- 2

Result criterion2() {
  Result r{2, "disjoint compact decomposition, 10^2 inputs", 10};
  auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  Window w{q(0), q(1)};
  const Rational tiny = Rational::pow2(-20);
  for (int t = 0; t < 100 && r.pass; ++t) {
    // Each slot is either a point or a short closed interval in every set.
    std::vector<char> fat(1025);
    for (auto& f : fat) f = rng() % 4 == 0;
    fat[1024] = 0;
    std::vector<IntervalSet> in;
    for (int n = 0, N = 1 + int(rng() % 10); n < N; ++n) {
      std::vector<Interval> parts;
      for (int i = 0, m = 1 + int(rng() % 8); i < m; ++i) {
        long long a = (long long)(rng() % 1025);
        parts.push_back(fat[size_t(a)] ? Interval::closed(q(a, 1024), q(a, 1024) + tiny)
                                       : Interval::point(q(a, 1024)));
      }
      in.emplace_back(parts);
    }
    std::vector<IntervalSet> out;
    try {
      out = dk_sigma_decompose(in, w);
    } catch (const Error& e) {
      r.fail(std::string("input ") + std::to_string(t) + ": " + e.what());
      break;
    }
    std::vector<const IntervalSet*> ip, op;
    for (const auto& s : in) ip.push_back(&s);
    for (const auto& s : out) op.push_back(&s);
    if (!(union_all(op) == union_all(ip))) r.fail("union changed at input " + std::to_string(t));
    for (size_t i = 0; i < out.size(); ++i) {
      if (!out[i].is_closed()) r.fail("output not closed at input " + std::to_string(t));
      for (size_t j = i + 1; j < out.size(); ++j)
        if (!intersection(out[i], out[j]).empty())
          r.fail("outputs meet at input " + std::to_string(t));
    }
  }
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- 3

// Part-by-part pairwise check, independent of the set algebra.
bool parts_meet(const IntervalSet& a, const IntervalSet& b) {
  for (const Interval& x : a.parts())
    for (const Interval& y : b.parts()) {
      bool left_ok = x.lo < y.hi || (x.lo == y.hi && x.lo_closed && y.hi_closed);
      bool right_ok = y.lo < x.hi || (y.lo == x.hi && y.lo_closed && x.hi_closed);
      if (left_ok && right_ok) return true;
    }
  return false;
}

bool parts_inside(const IntervalSet& a, const IntervalSet& b) {
  for (const Interval& x : a.parts()) {
    bool found = false;
    for (const Interval& y : b.parts()) {
      bool lo_ok = y.lo < x.lo || (y.lo == x.lo && (y.lo_closed || !x.lo_closed));
      bool hi_ok = x.hi < y.hi || (x.hi == y.hi && (y.hi_closed || !x.hi_closed));
      if (lo_ok && hi_ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Result criterion3() {
  Result r{3, "property (b) exhaustive pairwise at K = 64 on the bundled specs", 10};
  auto t0 = Clock::now();
  for (const char* name : {"zero.json", "zero_one.json", "rationals.json", "cantor.json"}) {
    SuslinScheme s = flatten_scheme(load(name), 64);
    if (find_property_b_violation(s) != std::pair<int, int>{0, 0})
      r.fail(std::string(name) + ": library check found a violation");
    size_t pairs = 0;
    for (int l = 2; l <= s.depth(); ++l)
      for (int k = 1; k < l; ++k) {
        ++pairs;
        if (parts_meet(s.F(k), s.F(l)) && !parts_inside(s.F(l), s.F(k)))
          r.fail(std::string(name) + ": F_" + std::to_string(k) + ", F_" + std::to_string(l));
      }
    r.detail += std::string(r.detail.empty() ? "" : ", ") + name + " " + std::to_string(pairs) + " pairs";
  }
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- 4-8

// |s ∩ (a, b)| by a scan from the first part reaching past a.
Rational measure_between(const IntervalSet& s, const Rational& a, const Rational& b) {
  const auto& ps = s.parts();
  auto it = std::partition_point(ps.begin(), ps.end(), [&](const Interval& p) { return p.hi <= a; });
  Rational m;
  for (; it != ps.end() && it->lo < b; ++it) {
    Rational lo = max(it->lo, a), hi = min(it->hi, b);
    if (lo < hi) m += hi - lo;
  }
  return m;
}

void check_H(const BuildResult& b, Result& r, const std::string& tag) {
  for (int k = 1; k <= b.owners(); ++k) {
    const HBundle& h = b.Hb(k);
    std::string at = tag + " k=" + std::to_string(k);
    if (!h.F.subset_of(h.H)) r.fail(at + ": F not inside H");
    if (!h.H.subset_of(intersection(set_union(h.F, h.alloc), eps_neighborhood(h.F, h.eps))))
      r.fail(at + ": H not inside (F ∪ alloc) ∩ (F)_eps");
    for (const Interval& J : h.components) {
      // B(c, r/3) for J = (c - r, c + r).
      Rational c = (J.lo + J.hi) / q(2), rad = (J.hi - J.lo) / q(6);
      Rational m = measure_between(h.H, c - rad, c + rad);
      if (!(m.sign() > 0 && m >= J.length() / q(12))) {
        r.fail(at + ": " + J.str() + " carries " + m.str());
        break;
      }
    }
  }
}

void check_g(const BuildResult& b, Result& r, const std::string& tag, size_t& witnesses,
             size_t& ladder, size_t& quot) {
  const int top = std::min(b.K(), b.owners());
  std::vector<GCheck> checks(static_cast<size_t>(top));
  GCheckOptions opt;
  opt.n_max = 16;
  opt.osc_samples = 1000;
  for (int k = 1; k <= top; ++k)
    checks[size_t(k - 1)] = check_g_properties(b.gk(k), b.Gb(k), b.Hb(k), b.witnesses, opt);
  for (const GCheck& c : checks) {
    std::string at = tag + " k=" + std::to_string(c.k);
    if (!c.ok()) r.fail(at + ": " + c.failure);
    // TV and slope restated against the schedule directly.
    if (!(b.gk(c.k).total_variation() < Rational::pow2(-c.k))) r.fail(at + ": TV");
    if (b.gk(c.k).max_slope() > q(12)) r.fail(at + ": slope");
    witnesses += c.witnesses;
    ladder += c.ladder_pairs;
    quot += c.quotient_points;
  }
}

void check_infinite_derivative(const BuildResult& b, Result& r, const std::string& tag,
                               size_t& tested) {
  for (const Rational& x : b.witnesses) {
    for (int m = 1; m <= b.cfg.L - 2; ++m) {
      Rational rad = Rational::pow2(-m);
      Rational quo = sup_quotient(b.g_sum, x, rad);
      size_t active = active_levels(b, x, rad).size();
      ++tested;
      if (quo < Rational(long(active), 3) - q(1)) {
        r.fail(tag + ": x=" + x.str() + " r=" + rad.str() + " quotient " + quo.str() + " with " +
               std::to_string(active) + " active");
        return;
      }
    }
  }
}

void check_witness_radii(const BuildResult& b, Result& r, const std::string& tag,
                         size_t& steps, Rational& worst_ratio) {
  auto grid = dyadic_grid(1, b.cfg.L);
  auto pts = off_a_sample(b, 100, 17);
  for (const Rational& x : pts) {
    WitnessTrace t = witness_radii(b, x, grid);
    std::string at = tag + " x=" + x.str();
    if (!t.l_consistent) r.fail(at + ": l from H and from the families disagree");
    for (size_t p = 0; p < t.steps.size(); ++p) {
      const WitnessStep& s = t.steps[p];
      auto d = distance(x, b.fam.H_vec[size_t(s.j)]);
      if (!d || *d != s.r) r.fail(at + ": r_p is not the distance to the family set");
      if (p > 0 && !(t.steps[p - 1].j < s.j && s.r < t.steps[p - 1].r))
        r.fail(at + ": radii not monotone");
      if (!(s.osc <= q(2) * s.r)) r.fail(at + ": osc over I_p " + s.osc.str());
      // Recompute the summed oscillation from the g_j.
      Rational osc;
      for (int j : t.J) osc += b.gk(j)(x + s.r) - b.gk(j)(x - s.r);
      if (osc != s.osc) r.fail(at + ": recorded osc differs");
      if (s.r.sign() > 0) worst_ratio = max(worst_ratio, osc / (q(2) * s.r));
      ++steps;
    }
    std::vector<Rational> radii = grid;
    for (const WitnessStep& s : t.steps) radii.push_back(s.r);
    for (const Rational& rad : radii) {
      Rational e;
      for (int j : t.Kset) e += b.gk(j)(x + rad) - b.gk(j)(x - rad);
      if (e > rad) r.fail(at + ": E part " + e.str() + " at r=" + rad.str());
    }
    Rational lip = lip_profile(b.g_sum, x, radii).lip_estimate;
    Rational bound = q(2) + q(1) + q(12) * q(std::min(t.l, b.K()));
    if (lip > bound) r.fail(at + ": grid lip " + lip.str() + " above " + bound.str());
  }
}

void check_ac(const BuildResult& b, Result& r, const std::string& tag) {
  Rational sum_g;
  for (const PLFunction& g : b.g) sum_g += g.total_variation();
  if (b.g_sum.total_variation() != sum_g) r.fail(tag + ": TV(g_sum) != sum TV(g_k)");
  if (!(sum_g < q(1))) r.fail(tag + ": TV(g_sum) = " + sum_g.str());
  Rational tf = b.has_jarnik ? b.jarnik.f.total_variation() : Rational();
  if (b.h.total_variation() != tf + sum_g) r.fail(tag + ": TV(h) != TV(f) + TV(g)");
  if (!(b.h.total_variation() < q(2))) r.fail(tag + ": TV(h) = " + b.h.total_variation().str());
  std::vector<const PLFunction*> ps;
  for (const PLFunction& g : b.g) ps.push_back(&g);
  if (!ac_check(ps).ok()) r.fail(tag + ": ac_check");
}

// ---------------------------------------------------------------- 9

Result criterion9() {
  Result r{9, "Jarnik part on G = {0}: growing quotient at 0, TV(f) < 1", 30};
  auto t0 = Clock::now();
  BuildResult b = build(load("jarnik_zero.json"), 12, 14);
  if (!b.has_jarnik) r.fail("no open levels");
  const PLFunction& f = b.jarnik.f;
  if (!(f.total_variation() < q(1))) r.fail("TV(f) = " + f.total_variation().str());
  Rational prev;
  for (int m = 1; m <= b.cfg.L; ++m) {
    Rational rad = Rational::pow2(-m);
    Rational quo = sup_quotient(f, q(0), rad);
    if (quo < prev) r.fail("quotient drops at r=" + rad.str());
    if (quo < q(jarnik_active(b, q(0), rad))) r.fail("quotient below the active count at r=" + rad.str());
    prev = quo;
  }
  if (prev < q(b.cfg.K)) r.fail("quotient at the finest scale is " + prev.str());
  // Off G: reported only.
  auto grid = dyadic_grid(1, b.cfg.L);
  QuotientProfile off = lip_profile(f, q(1, 3), grid);
  r.detail = "quotient at 0 reaches " + prev.str() + ", TV(f) = " + f.total_variation().str() +
             "; off G at 1/3: lip~" + off.lip_estimate.str() + " Lip~" + off.Lip_estimate.str() +
             " (not gated)";
  r.seconds = since(t0);
  return r;
}

// ---------------------------------------------------------------- 10

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    out[e.path().filename().string()] = read_file(e.path().string());
  return out;
}

Result criterion10() {
  Result r{10, "two builds with identical inputs give byte-identical artifacts", 60};
  auto t0 = Clock::now();
  fs::path root = fs::temp_directory_path() / ("lipforge_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  SchemeSpec spec = load("rationals.json");
  for (const char* d : {"a", "b"}) write_artifact(build(spec, 12, 14, 42), (root / d).string());
  auto a = snapshot(root / "a"), b = snapshot(root / "b");
  if (a.size() < 15) r.fail("only " + std::to_string(a.size()) + " files");
  if (a != b) {
    for (const auto& [name, text] : a)
      if (!b.count(name) || b[name] != text) r.fail("differs: " + name);
    r.fail("file sets differ");
  }
  r.detail = std::to_string(a.size()) + " files compared";
  fs::remove_all(root);
  r.seconds = since(t0);
  return r;
}

void print(const Result& r) {
  bool in_time = r.seconds < r.limit;
  std::printf("criterion %2d: %s  %s [%.1f s, limit %.0f s]%s%s\n", r.id,
              r.pass && in_time ? "PASS" : "FAIL", r.what.c_str(), r.seconds, r.limit,
              r.detail.empty() ? "" : " ", r.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::vector<Result> results;
  auto run = [&](Result r) {
    print(r);
    results.push_back(std::move(r));
  };
  run(criterion1());
  run(criterion2());
  run(criterion3());

  Result c4{4, "H bundles: F ⊆ H ⊆ (F ∪ alloc) ∩ (F)_eps, |H ∩ mid(J)| >= |J|/12", 30};
  Result c5{5, "g_k: TV, slope support, slope <= 12, oscillation, unit-slope ladder, quotient bands N <= 16", 120};
  Result c6{6, "quotient of g_sum at A points >= active/3 - 1", 60};
  Result c7{7, "witness radii off A: osc(h, I_p) <= |I_p|, E part <= r, lip <= 3 + 12 l", 120};
  Result c8{8, "TV(g_sum) = sum TV(g_k) < 1, TV(h) = TV(f) + TV(g_sum) < 2", 5};
  size_t wit = 0, ladder = 0, quot = 0, tested6 = 0, steps7 = 0;
  Rational worst7;
  for (const SpecRun& s : kSpecs) {
    std::string tag = s.file;
    BuildResult b;
    try {
      b = build(load(s.file), s.K, s.L);
    } catch (const Error& e) {
      for (Result* r : {&c4, &c5, &c6, &c7, &c8}) r->fail(tag + ": build failed: " + e.what());
      continue;
    }
    c4.seconds += b.seconds_H;
    c5.seconds += b.seconds_G;
    auto t = Clock::now();
    check_H(b, c4, tag);
    c4.seconds += since(t);
    t = Clock::now();
    check_g(b, c5, tag, wit, ladder, quot);
    c5.seconds += since(t);
    t = Clock::now();
    check_infinite_derivative(b, c6, tag, tested6);
    if (std::string(s.file) == "zero.json") {
      Rational quo = sup_quotient(b.g_sum, q(0), Rational::pow2(-10));
      if (!(quo > q(3))) c6.fail("A = {0}: quotient at 2^-10 is " + quo.str());
      c6.detail = "A = {0} at 2^-10: " + quo.str() + ";";
    }
    c6.seconds += since(t);
    t = Clock::now();
    check_witness_radii(b, c7, tag, steps7, worst7);
    c7.seconds += since(t);
    t = Clock::now();
    check_ac(b, c8, tag);
    c8.seconds += since(t);
  }
  if (c5.pass)
    c5.detail = std::to_string(wit) + " witnesses, " + std::to_string(ladder) + " ladder pairs, " +
                std::to_string(quot) + " quotient points";
  if (c6.pass) c6.detail += " " + std::to_string(tested6) + " (x, r) pairs";
  if (c7.pass)
    c7.detail = std::to_string(steps7) + " steps, max osc/|I_p| = " + worst7.str();
  for (Result* r : {&c4, &c5, &c6, &c7, &c8}) run(*r);

  run(criterion9());
  run(criterion10());

  int failed = 0;
  for (const Result& r : results) failed += !(r.pass && r.seconds < r.limit);
  std::printf("%d of %zu criteria pass\n", int(results.size()) - failed, results.size());
  return failed ? 1 : 0;
}
