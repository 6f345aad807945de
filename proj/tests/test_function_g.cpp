#include <doctest.h>

#include <random>

#include "lipforge/assembly.hpp"
#include "lipforge/function_g.hpp"

using namespace lipforge;

namespace {

Rational q(long long n, long long d = 1) { return Rational(n, d); }

SchemeSpec load(const std::string& name) {
  return load_spec(std::string(LIPFORGE_SPEC_DIR) + "/" + name);
}

BuildResult build(const std::string& name, int K, int L) {
  BuildConfig cfg;
  cfg.K = K;
  cfg.L = L;
  return build_sum(load(name), cfg);
}

HBundle hat_only(const IntervalSet& F, const Window& w, int L) {
  HBundle h;
  h.F = F;
  h.L = L;
  h.hat = hat_set(F, w, L);
  return h;
}

// |G ∩ (a, b)|
Rational meet(const IntervalSet& G, const Rational& a, const Rational& b) {
  return intersection(G, IntervalSet{Interval::open(a, b)}).measure();
}

}  // namespace

TEST_CASE("one carried interval with a piece of measure 1/12") {
  EpmRegistry reg(0);
  Interval J = Interval::open(q(1, 3), q(2, 3));
  HBundle hb;
  hb.components = {J};
  hb.piece = {reg.allocate(1, middle_third(J), q(1, 12), {}, 0)};
  GBundle gb;
  gb.G = IntervalSet{J};
  gb.J = {J};
  gb.J_component = {0};
  PLFunction g = build_g(gb, hb, reg);
  CHECK(g.max_slope() == q(4));
  CHECK(g.total_variation() == q(1, 3));
  const IntervalSet& kept = reg[0].piece.kept;
  CHECK(g(kept[kept.size() - 1].hi) - g(kept[0].lo) == q(1, 3));
  CHECK(g.positive_slope_support() == kept);
}

TEST_CASE("indicator part has slope one") {
  HBundle hb;
  hb.F = IntervalSet{Interval::closed(q(1, 4), q(1, 4) + q(1, 16))};
  GBundle gb;
  gb.G = IntervalSet{Interval::open(q(0), q(1))};
  PLFunction g = build_g(gb, hb, EpmRegistry(0));
  CHECK(g.max_slope() == q(1));
  CHECK(g.total_variation() == q(1, 16));
  CHECK(build_g(GBundle(), HBundle(), EpmRegistry(0)) == PLFunction());
}

TEST_CASE("G around one point with nothing to avoid") {
  for (int k : {1, 3, 6}) {
    EpmRegistry reg(0, Exclusivity::kPerOwner);
    Window w{q(0), q(1)};
    HBundle h = build_H(k, IntervalSet{Interval::point(q(1, 2))}, Rational::pow2(-k), w, 8, reg, {}, 0);
    GBundle gb = build_G(h, IntervalSet(), w);
    REQUIRE(gb.G.size() == 1);
    CHECK(gb.G[0].contains(q(1, 2)));
    CHECK(gb.G.measure() < h.eps);
    CHECK(gb.G.subset_of(eps_neighborhood(h.F, h.eps)));
    CHECK(gb.uncovered.empty());
    // Anchored at either end of (0, 1).
    for (long long i = 1; i <= 32; ++i) {
      Rational c(i, 33);
      CHECK(meet(gb.G, q(0), c) < h.eps / q(4) * c);
      CHECK(meet(gb.G, c, q(1)) < h.eps / q(4) * (q(1) - c));
    }
  }
}

TEST_CASE("anchored inequality between two avoided points") {
  EpmRegistry reg(0, Exclusivity::kPerOwner);
  Window w{q(0), q(1)};
  HBundle h = build_H(2, IntervalSet{Interval::point(q(1, 2))}, q(1, 4), w, 8, reg, {}, 0);
  IntervalSet E{Interval::point(q(0)), Interval::point(q(1))};
  GBundle gb = build_G(h, E, w);
  REQUIRE(gb.e_components.size() == 1);
  CHECK(gb.e_components[0] == Interval::open(q(0), q(1)));
  CHECK_FALSE(gb.G.empty());
  for (long long d : {8, 7, 6, 5, 4, 3, 2}) {
    Rational c(1, d);
    CHECK(meet(gb.G, q(0), c) < gb.eps / q(4) * c);
    CHECK(meet(gb.G, q(1) - c, q(1)) < gb.eps / q(4) * c);
  }
  CHECK(anchored_violation(gb.G, gb.e_components, gb.eps).empty());
  // A set that fills half of (0, 1) is caught.
  CHECK_FALSE(anchored_violation(IntervalSet{Interval::open(q(1, 4), q(3, 4))}, gb.e_components,
                                 gb.eps)
                  .empty());
}

TEST_CASE("F inside E gives an empty G and a zero g") {
  EpmRegistry reg(0, Exclusivity::kPerOwner);
  Window w{q(0), q(1)};
  IntervalSet F{Interval::point(q(1, 2))};
  HBundle h = build_H(1, F, q(1, 2), w, 6, reg, {}, 0);
  GBundle gb = build_G(h, F, w);
  CHECK(gb.G.empty());
  CHECK(gb.J.empty());
  CHECK(gb.uncovered.empty());
  CHECK(build_g(gb, h, reg) == PLFunction());
}

TEST_CASE("J near an isolated point is its ladder") {
  const int L = 5;
  const long long top = 1LL << L;
  Window w{q(-10), q(10)};
  HBundle h = hat_only(IntervalSet{Interval::point(q(1, 2))}, w, L);
  std::vector<Interval> want;
  for (long long n = 2; n < top; ++n)
    want.push_back(Interval::open(q(1, 2) - q(1, n), q(1, 2) - q(1, n + 1)));
  want.push_back(Interval::open(q(1, 2) - q(1, top), q(1, 2)));
  want.push_back(Interval::open(q(1, 2), q(1, 2) + q(1, top)));
  for (long long n = top - 1; n >= 2; --n)
    want.push_back(Interval::open(q(1, 2) + q(1, n + 1), q(1, 2) + q(1, n)));
  CHECK(build_J(h, IntervalSet{Interval::open(q(0), q(1))}) == want);
  CHECK(build_J(h, IntervalSet()).empty());
  // Cutting G inside (5/6, 1) drops that interval and nothing else.
  auto part = build_J(h, IntervalSet{Interval::open(q(0), q(9, 10))});
  want.pop_back();
  CHECK(part == want);
}

TEST_CASE("the N = 2 band") {
  // ((N-1)/(N+1), (N+1)/(N-1)) at N = 2.
  CHECK(Rational(2 - 1, 2 + 1) == q(1, 3));
  CHECK(Rational(2 + 1, 2 - 1) == q(3));
}

TEST_CASE("unit slope identity at 0 for A = {0} against the ladder") {
  BuildResult b = build("zero.json", 5, 10);
  const long long top = 1LL << b.cfg.L;
  for (int k = 1; k <= b.K(); ++k) {
    const GBundle& gb = b.Gb(k);
    const PLFunction& g = b.gk(k);
    size_t comp = gb.G.find(q(0));
    REQUIRE(comp != IntervalSet::npos);
    size_t seen = 0;
    for (long long n = 1; n <= top; ++n)
      for (const Rational& y : {q(1, n), q(-1, n)}) {
        if (!gb.G[comp].contains(y) || !b.Hb(k).hat.contains(y)) continue;
        ++seen;
        REQUIRE(g(y) - g(q(0)) == y);
      }
    CHECK(seen > 0);
  }
}

TEST_CASE("property checks pass on the bundled specs") {
  for (const char* name : {"zero.json", "zero_one.json", "rationals.json"}) {
    BuildResult b = build(name, 6, 10);
    for (int k = 1; k <= b.K(); ++k) {
      GCheckOptions opt;
      opt.osc_samples = 200;
      GCheck c = check_g_properties(b.gk(k), b.Gb(k), b.Hb(k), b.witnesses, opt);
      INFO(name, " k=", k, " ", c.failure);
      CHECK(c.ok());
      CHECK(c.tv < Rational::pow2(-k));
    }
  }
}

TEST_CASE("oscillation over quarter intervals starting in E") {
  BuildResult b = build("zero_one.json", 6, 10);
  size_t tested = 0;
  for (int k = 2; k <= b.K(); ++k) {
    const GBundle& gb = b.Gb(k);
    const PLFunction& g = b.gk(k);
    for (const Interval& p : gb.E.parts())
      for (const Rational& e : {p.lo, p.hi}) {
        ++tested;
        CHECK(g(e + q(1, 4)) - g(e) <= gb.eps / q(4));
        CHECK(g(e) - g(e - q(1, 4)) <= gb.eps / q(4));
      }
  }
  CHECK(tested > 0);
}

TEST_CASE("g is 12-Lipschitz on samples") {
  BuildResult b = build("rationals.json", 4, 8);
  std::mt19937_64 rng(5);
  for (int k = 1; k <= b.K(); ++k) {
    const PLFunction& g = b.gk(k);
    for (int t = 0; t < 500; ++t) {
      Rational x((long long)(rng() % 4097) - 2048, 2048), y((long long)(rng() % 4097) - 2048, 2048);
      REQUIRE((g(y) - g(x)).abs() <= q(12) * (y - x).abs());
    }
  }
}
