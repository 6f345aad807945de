#include "lipforge/function_g.hpp"

#include <algorithm>
#include <random>

namespace lipforge {
namespace {

struct Candidate {
  const Interval* part;
  Rational left, right;  // one-sided radii
};

IntervalSet g_from_radii(const std::vector<Candidate>& cands, const Rational& scale) {
  std::vector<Interval> parts;
  parts.reserve(cands.size());
  for (const Candidate& c : cands)
    parts.push_back(Interval::open(c.part->lo - c.left * scale, c.part->hi + c.right * scale));
  return canonicalize(std::move(parts));
}

}  // namespace

std::string anchored_violation(const IntervalSet& G, const std::vector<Interval>& e_components,
                               const Rational& eps) {
  const Rational quarter = eps / Rational(4);
  const auto& gp = G.parts();
  for (const Interval& I : e_components) {
    auto first = std::partition_point(gp.begin(), gp.end(),
                                      [&](const Interval& p) { return p.hi <= I.lo; });
    auto last = std::partition_point(first, gp.end(),
                                     [&](const Interval& p) { return p.lo < I.hi; });
    if (first == last) continue;
    // Anchored at I.lo: the worst right end is a right end of a G part.
    Rational acc;
    for (auto it = first; it != last; ++it) {
      if (it->lo <= I.lo || it->hi >= I.hi)
        return "G part " + it->str() + " touches the boundary of " + I.str();
      acc += it->length();
      if (!(acc < quarter * (it->hi - I.lo)))
        return "left-anchored at " + I.lo.str() + " up to " + it->hi.str();
    }
    acc = Rational();
    for (auto it = last; it != first;) {
      --it;
      acc += it->length();
      if (!(acc < quarter * (I.hi - it->lo)))
        return "right-anchored at " + I.hi.str() + " down to " + it->lo.str();
    }
  }
  return {};
}

std::vector<Interval> build_J(const HBundle& h, const IntervalSet& G) {
  std::vector<Interval> out;
  const IntervalSet rest = difference(G, h.hat);
  for (const Interval& c : rest.parts())
    if (!c.degenerate() && h.hat.contains(c.lo) && h.hat.contains(c.hi)) out.push_back(c);
  return out;
}

GBundle build_G(const HBundle& h, const IntervalSet& E, const Window& w) {
  GBundle gb;
  gb.k = h.k;
  gb.eps = h.eps;
  gb.L = h.L;
  gb.E = E;
  gb.e_components = difference(IntervalSet::from_canonical({w.interior()}), E).parts();

  // Each cover has length <= 3c * (distance to the nearer end of I), and
  // the anchored sums telescope over neighbour gaps: <= 5c * (t - I.lo).
  const Rational& eps = h.eps;
  const Rational c = eps / Rational(32);
  const Rational cap = eps / Rational(2);
  const auto& fp = h.F.parts();
  std::vector<Candidate> cands;
  size_t fi = 0;
  for (const Interval& I : gb.e_components) {
    while (fi < fp.size() && fp[fi].hi <= I.lo) ++fi;
    std::vector<size_t> inside;
    for (size_t j = fi; j < fp.size() && fp[j].lo < I.hi; ++j)
      if (I.lo < fp[j].lo && fp[j].hi < I.hi) inside.push_back(j);
    for (size_t i = 0; i < inside.size(); ++i) {
      const Interval& p = fp[inside[i]];
      Rational left_gap = p.lo - (i > 0 ? fp[inside[i - 1]].hi : I.lo);
      Rational right_gap = (i + 1 < inside.size() ? fp[inside[i + 1]].lo : I.hi) - p.hi;
      if (p.length() > c * min(left_gap, right_gap)) continue;
      cands.push_back({&p, min(c * min(left_gap, I.hi - p.hi), cap),
                       min(c * min(right_gap, p.lo - I.lo), cap)});
    }
  }

  Rational scale(1);
  for (;; ++gb.halvings) {
    if (gb.halvings > 60) throw ConstructionError("build_G: no admissible radii for k=" + std::to_string(h.k));
    gb.G = g_from_radii(cands, scale);
    if (gb.G.measure() < eps && anchored_violation(gb.G, gb.e_components, eps).empty()) break;
    scale *= Rational(1, 2);
  }
  for (const Interval& p : fp) {
    IntervalSet one = IntervalSet::from_canonical({p});
    if (!one.subset_of(gb.G) && !one.subset_of(E)) gb.uncovered.push_back(p);
  }
  gb.J = build_J(h, gb.G);
  gb.J_component.reserve(gb.J.size());
  for (const Interval& J : gb.J) {
    size_t c = h.component_index(J);
    if (c == IntervalSet::npos)
      throw ConstructionError("build_G: carried interval " + J.str() + " has no piece");
    gb.J_component.push_back(c);
  }
  return gb;
}

PLFunction build_g(const GBundle& gb, const HBundle& hb, const EpmRegistry& reg) {
  std::vector<PLFunction::Segment> segs;
  for (size_t i = 0; i < gb.J.size(); ++i) {
    const FatCantorPiece& piece = reg[hb.piece[gb.J_component[i]]].piece;
    Rational slope = gb.J[i].length() / piece.measure;
    for (const Interval& p : piece.kept.parts()) segs.push_back({p.lo, p.hi, slope});
  }
  const IntervalSet covered = intersection(hb.F, gb.G);
  for (const Interval& p : covered.parts())
    if (!p.degenerate()) segs.push_back({p.lo, p.hi, Rational(1)});
  return PLFunction::integrate(std::move(segs));
}

std::optional<Stretch> represented_stretch(const Rational& x, const GBundle& gb,
                                           const HBundle& hb) {
  size_t gi = gb.G.find(x);
  if (gi == IntervalSet::npos) return std::nullopt;
  const Interval& comp = gb.G[gi];
  const auto& hp = hb.hat.parts();
  Stretch s{x, x};
  auto after = std::partition_point(hp.begin(), hp.end(),
                                    [&](const Interval& p) { return p.lo < comp.hi; });
  if (after != hp.begin()) {
    const Interval& p = *std::prev(after);
    if (p.hi < comp.hi && x <= p.hi) s.right = p.hi;
  }
  auto from = std::partition_point(hp.begin(), hp.end(),
                                   [&](const Interval& p) { return p.hi <= comp.lo; });
  if (from != hp.end() && comp.lo < from->lo && from->lo <= x) s.left = from->lo;
  return s;
}

GCheck check_g_properties(const PLFunction& g, const GBundle& gb, const HBundle& hb,
                          const std::vector<Rational>& witnesses, const GCheckOptions& opt) {
  GCheck c;
  c.k = gb.k;
  auto fail = [&](const std::string& what) {
    if (c.failure.empty()) c.failure = what;
  };

  c.support_in_H = g.positive_slope_support().subset_of(hb.H);
  if (!c.support_in_H) fail("positive slope outside H");
  c.max_slope = g.max_slope();
  c.slope_ok = c.max_slope <= Rational(kPieceDivisor);
  if (!c.slope_ok) fail("slope " + c.max_slope.str());
  c.tv = g.total_variation();
  c.tv_ok = c.tv < gb.eps;
  if (!c.tv_ok) fail("total variation " + c.tv.str());
  std::string anchored = anchored_violation(gb.G, gb.e_components, gb.eps);
  c.anchored_ok = anchored.empty() && gb.G.measure() < gb.eps;
  if (!c.anchored_ok) fail("anchored: " + anchored);

  const Rational trunc = Rational::pow2(-gb.L);
  for (const Rational& x : witnesses) {
    if (!hb.F.contains(x) || gb.E.contains(x)) continue;
    auto st = represented_stretch(x, gb, hb);
    if (!st) continue;
    ++c.witnesses;
    const Rational gx = g(x);
    for (int dir : {+1, -1}) {
      const Rational end = dir > 0 ? st->right : st->left;
      if (end == x) continue;
      const Rational lo = min(x, end), hi = max(x, end);
      // Unit slope identity at every hat point of the stretch.
      const auto& hp = hb.hat.parts();
      auto it = std::partition_point(hp.begin(), hp.end(),
                                     [&](const Interval& p) { return p.hi < lo; });
      std::vector<Rational> ys;
      for (; it != hp.end() && it->lo <= hi; ++it) {
        for (const Rational* y : {&it->lo, &it->hi}) {
          if (*y == x || *y < lo || hi < *y) continue;
          ++c.ladder_pairs;
          Rational d = dir > 0 ? g(*y) - gx : gx - g(*y);
          if (d != (*y - x).abs()) {
            c.ladder_ok = false;
            fail("g(y) - g(x) != y - x at x=" + x.str() + " y=" + y->str());
          }
          ys.push_back(*y);
        }
      }
      // Quotient bands: breakpoints and hat points within 1/2 of x.
      const Rational reach = Rational(1, 2);
      Rational qlo = dir > 0 ? x : max(lo, x - reach);
      Rational qhi = dir > 0 ? min(hi, x + reach) : x;
      auto bx = std::upper_bound(g.xs().begin(), g.xs().end(), qlo);
      for (; bx != g.xs().end() && *bx <= qhi; ++bx) ys.push_back(*bx);
      std::vector<std::pair<Rational, Rational>> dq;  // (|y - x|, quotient)
      for (const Rational& y : ys) {
        if (y == x || y < qlo || qhi < y) continue;
        auto dist = distance(y, hb.F);
        if (dist && dist->sign() > 0 && *dist < trunc) continue;
        Rational d = (y - x).abs();
        Rational q = (dir > 0 ? g(y) - gx : gx - g(y)) / d;
        dq.emplace_back(std::move(d), std::move(q));
      }
      std::sort(dq.begin(), dq.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      c.quotient_points += dq.size();
      std::vector<Rational> run_min, run_max;
      for (size_t i = 0; i < dq.size(); ++i) {
        run_min.push_back(i ? min(run_min.back(), dq[i].second) : dq[i].second);
        run_max.push_back(i ? max(run_max.back(), dq[i].second) : dq[i].second);
      }
      for (int N = 2; N <= opt.n_max; ++N) {
        Rational bound(1, N);
        size_t cnt = size_t(std::partition_point(dq.begin(), dq.end(),
                                                 [&](const auto& e) { return e.first < bound; }) -
                            dq.begin());
        if (cnt == 0) continue;
        Rational band_lo(N - 1, N + 1), band_hi(N + 1, N - 1);
        if (!(band_lo < run_min[cnt - 1]) || !(run_max[cnt - 1] < band_hi)) {
          c.bands_ok = false;
          fail("quotient band at x=" + x.str() + " N=" + std::to_string(N) + " quotient range [" +
               run_min[cnt - 1].str() + ", " + run_max[cnt - 1].str() + "]");
        }
      }
    }
  }

  // Oscillation on random intervals meeting E.
  if (!gb.E.empty() && opt.osc_samples > 0) {
    std::mt19937_64 rng(opt.seed ^ (uint64_t(gb.k) * 0x9E3779B97F4A7C15ULL));
    const auto& ep = gb.E.parts();
    auto frac = [&](int bits) { return Rational((long long)(rng() % (1ULL << bits)), 1LL << bits); };
    for (size_t s = 0; s < opt.osc_samples; ++s) {
      const Interval& p = ep[rng() % ep.size()];
      Rational e = p.degenerate() ? p.lo : p.lo + p.length() * frac(20);
      int j1 = int(rng() % uint64_t(gb.L + 3)), j2 = int(rng() % uint64_t(gb.L + 3));
      Rational a = frac(20) * Rational::pow2(-j1), b = frac(20) * Rational::pow2(-j2);
      if ((a + b).is_zero()) continue;
      ++c.osc_samples;
      Rational osc = g(e + b) - g(e - a);
      if (osc > gb.eps * (a + b)) {
        c.osc_ok = false;
        fail("osc on [" + (e - a).str() + ", " + (e + b).str() + "]");
      }
    }
  }
  return c;
}

}  // namespace lipforge
