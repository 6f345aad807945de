#include "lipforge/assembly.hpp"

#include <algorithm>
#include <chrono>

#include "lipforge/parallel.hpp"

namespace lipforge {

void BuildConfig::validate() const {
  if (K < 1) throw ValidationError("depth K must be >= 1");
  if (L < K) throw ValidationError("resolution L must be >= depth K");
  if (L > 24) throw ValidationError("resolution L must be <= 24");
  if (horizon != 0 && horizon < K) throw ValidationError("horizon must be >= K");
  if (d_min < 1) throw ValidationError("d_min must be >= 1");
}

JarnikResult jarnik_build(const std::vector<IntervalSet>& open_levels, int K) {
  for (size_t n = 0; n < open_levels.size(); ++n) {
    if (!open_levels[n].is_open())
      throw ValidationError("open level " + std::to_string(n + 1) + " is not open");
    if (n > 0 && !open_levels[n].subset_of(open_levels[n - 1]))
      throw ValidationError("open levels are not nested at level " + std::to_string(n + 1));
  }
  JarnikResult jr;
  const int N = int(open_levels.size());
  for (int k = 1; k <= K; ++k) {
    const Rational bound = Rational::pow2(-k);
    IntervalSet u;
    int src = 0;
    bool shrunk = false;
    for (int n = std::min(k, N); n <= N && N > 0; ++n) {
      if (open_levels[size_t(n - 1)].measure() < bound) {
        u = open_levels[size_t(n - 1)];
        src = n;
        break;
      }
    }
    if (src == 0 && N > 0) {
      const IntervalSet& deepest = open_levels.back();
      src = N;
      Rational m = deepest.measure();
      if (m.sign() > 0) {
        shrunk = true;
        Rational s = bound / (Rational(2) * m);
        std::vector<Interval> parts;
        for (const Interval& p : deepest.parts()) {
          Rational c = midpoint(p.lo, p.hi), r = p.length() / Rational(2) * s;
          parts.push_back(Interval::open(c - r, c + r));
        }
        u = IntervalSet(std::move(parts));
      }
    }
    std::vector<PLFunction::Segment> segs;
    for (const Interval& p : u.parts()) segs.push_back({p.lo, p.hi, Rational(1)});
    jr.parts.push_back(PLFunction::integrate(std::move(segs)));
    jr.U.push_back(std::move(u));
    jr.source_level.push_back(src);
    jr.shrunk.push_back(shrunk);
  }
  std::vector<const PLFunction*> ps;
  for (const PLFunction& f : jr.parts) ps.push_back(&f);
  jr.f = sum(ps);
  return jr;
}

ACCheck ac_check(const std::vector<const PLFunction*>& parts) {
  ACCheck c;
  for (const PLFunction* f : parts) c.sum_of_tv += f->total_variation();
  c.tv_of_sum = sum(parts).total_variation();
  c.additive = c.sum_of_tv == c.tv_of_sum;
  c.bounded = c.sum_of_tv <= Rational(2);
  return c;
}

PLFunction combine_main(const PLFunction& f, const PLFunction& g) { return f + g; }

std::vector<Rational> witness_points(const SuslinScheme& s) {
  std::vector<Rational> out;
  for (const Interval& p : s.witness_set().parts()) {
    out.push_back(p.lo);
    if (!p.degenerate()) out.push_back(p.hi);
  }
  return out;
}

bool BuildResult::is_witness(const Rational& x) const {
  return std::binary_search(witnesses.begin(), witnesses.end(), x);
}

BuildResult build_sum(const SchemeSpec& spec, const BuildConfig& cfg) {
  cfg.validate();
  validate_spec(spec, cfg.L);
  BuildResult b;
  b.spec = spec;
  b.cfg = cfg;
  b.registry = EpmRegistry(cfg.seed, Exclusivity::kPerOwner);
  const int horizon = cfg.effective_horizon();
  b.scheme = flatten_scheme(spec, horizon);
  b.witnesses = witness_points(b.scheme);
  const int owners = std::min(horizon, b.scheme.depth());
  const Window& w = spec.window;
  using Clock = std::chrono::steady_clock;
  auto since = [](Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  };

  auto t0 = Clock::now();
  for (int k = 1; k <= owners; ++k) {
    int level = std::max(k, cfg.d_min);
    b.H.push_back(build_H(k, b.scheme.F(k), cfg.eps(k), w, cfg.L, b.registry,
                          b.scheme.level_union(level), std::min(level, b.scheme.levels_listed)));
  }
  b.fam = build_family_sets(b.H, b.scheme);
  b.seconds_H = since(t0);

  t0 = Clock::now();
  const int active = std::min(cfg.K, owners);
  b.G.resize(size_t(active));
  b.g.resize(size_t(active));
  parallel_for(size_t(active), [&](size_t i) {
    int k = int(i) + 1;
    b.G[i] = build_G(b.Hb(k), b.fam.E_vec[size_t(k)], w);
    b.g[i] = build_g(b.G[i], b.Hb(k), b.registry);
  });
  // Owners past the scheme depth contribute zero summands.
  b.G.resize(size_t(cfg.K));
  b.g.resize(size_t(cfg.K));
  for (int k = active + 1; k <= cfg.K; ++k) {
    b.G[size_t(k - 1)].k = k;
    b.G[size_t(k - 1)].eps = cfg.eps(k);
    b.G[size_t(k - 1)].L = cfg.L;
  }
  std::vector<const PLFunction*> gs;
  for (const PLFunction& gk : b.g) gs.push_back(&gk);
  b.g_sum = sum(gs);
  b.seconds_G = since(t0);
  b.tail_bound = Rational::pow2(-cfg.K);

  if (!spec.open_levels.empty()) {
    b.has_jarnik = true;
    b.jarnik = jarnik_build(spec.open_levels, cfg.K);
  }
  b.h = combine_main(b.has_jarnik ? b.jarnik.f : PLFunction(), b.g_sum);
  return b;
}

}  // namespace lipforge
