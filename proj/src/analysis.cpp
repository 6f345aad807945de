#include "lipforge/analysis.hpp"

#include <algorithm>
#include <regex>

namespace lipforge {

Rational eval_pl(const PLFunction& f, const Rational& x) { return f(x); }

Rational sup_quotient(const PLFunction& f, const Rational& x, const Rational& r) {
  if (r.sign() <= 0) throw ValidationError("sup_quotient: radius must be positive");
  Rational fx = f(x);
  return max(f(x + r) - fx, fx - f(x - r)) / r;
}

Rational oscillation(const PLFunction& f, const Interval& u) { return f(u.hi) - f(u.lo); }

std::vector<Rational> dyadic_grid(int m_lo, int m_hi) {
  std::vector<Rational> out;
  for (int m = m_lo; m <= m_hi; ++m) out.push_back(Rational::pow2(-m));
  return out;
}

std::vector<Rational> parse_grid(const std::string& text, int L) {
  static const std::regex re(R"(\s*2\^-(\d+|L)\s*\.\.\s*2\^-(\d+|L)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw ValidationError("grid must look like 2^-a..2^-b, got '" + text + "'");
  auto val = [&](const std::string& s) { return s == "L" ? L : std::stoi(s); };
  int a = val(m[1]), b = val(m[2]);
  if (a < 0 || b < a || b > 62) throw ValidationError("grid exponents out of range: " + text);
  return dyadic_grid(a, b);
}

QuotientProfile lip_profile(const PLFunction& f, const Rational& x,
                            const std::vector<Rational>& radii) {
  if (radii.empty()) throw ValidationError("lip_profile: empty radius grid");
  QuotientProfile p;
  p.x = x;
  p.radii = radii;
  for (const Rational& r : radii) p.quotients.push_back(sup_quotient(f, x, r));
  p.lip_estimate = *std::min_element(p.quotients.begin(), p.quotients.end());
  p.Lip_estimate = *std::max_element(p.quotients.begin(), p.quotients.end());
  return p;
}

WitnessTrace witness_radii(const BuildResult& b, const Rational& x,
                           const std::vector<Rational>& grid) {
  if (b.is_witness(x))
    throw ValidationError("witness_radii: " + x.str() + " is a suspected A point");
  WitnessTrace t;
  t.x = x;
  const int owners = b.owners();
  for (int k = 1; k <= owners; ++k) {
    if (b.fam.H_vec[size_t(k)].contains(x)) t.l = k;
    if (b.Hb(k).H.contains(x)) t.l_from_H = k;
  }
  t.l_consistent = t.l == t.l_from_H;
  if (t.l > t.l_from_H)
    for (int j = 1; j < t.l && !t.l_consistent; ++j)
      t.l_consistent = b.fam.below[size_t(j)][size_t(t.l)] && b.Hb(j).H.contains(x);
  const int top = std::min(b.K(), owners);
  for (int k = t.l + 1; k <= top; ++k)
    (b.fam.E_vec[size_t(k)].contains(x) ? t.Kset : t.J).push_back(k);

  auto part_osc = [&](const std::vector<int>& idx, const Rational& r) {
    Rational s;
    for (int j : idx) s += b.gk(j)(x + r) - b.gk(j)(x - r);
    return s;
  };

  Rational r_prev(1);
  for (;;) {
    int jp = 0;
    for (int j : t.J) {
      auto d = distance(x, b.fam.H_vec[size_t(j)]);
      if (d && *d < r_prev) {
        jp = j;
        break;
      }
    }
    if (jp == 0) break;
    WitnessStep s;
    s.j = jp;
    s.r = *distance(x, b.fam.H_vec[size_t(jp)]);
    s.osc = part_osc(t.J, s.r);
    s.bound_ok = s.osc <= Rational(2) * s.r;
    t.steps_ok = t.steps_ok && s.bound_ok && s.r.sign() > 0;
    r_prev = s.r;
    t.steps.push_back(std::move(s));
  }

  std::vector<Rational> radii = grid;
  for (const WitnessStep& s : t.steps) radii.push_back(s.r);
  bool first = true;
  for (const Rational& r : radii) {
    if (part_osc(t.Kset, r) > r) t.e_part_ok = false;
    Rational q = sup_quotient(b.g_sum, x, r);
    if (first || q < t.lip_grid) t.lip_grid = q;
    first = false;
  }
  t.lip_bound = Rational(3) + Rational(12) * Rational(std::min(t.l, b.K()));
  t.lip_ok = !first && t.lip_grid <= t.lip_bound;
  return t;
}

std::vector<int> active_levels(const BuildResult& b, const Rational& x, const Rational& r) {
  std::vector<int> out;
  const int top = std::min(b.K(), b.owners());
  const Rational trunc = Rational::pow2(-b.cfg.L);
  const Rational y = x + r;
  for (int k = 1; k <= top; ++k) {
    const HBundle& hb = b.Hb(k);
    const GBundle& gb = b.Gb(k);
    if (!hb.F.contains(x) || gb.E.contains(x)) continue;
    auto st = represented_stretch(x, gb, hb);
    if (!st || st->right < y) continue;
    auto d = distance(y, hb.F);
    if (d && d->sign() > 0 && *d < trunc) continue;
    out.push_back(k);
  }
  return out;
}

int jarnik_active(const BuildResult& b, const Rational& x, const Rational& r) {
  if (!b.has_jarnik) return 0;
  IntervalSet seg = IntervalSet::from_canonical({Interval::closed(x, x + r)});
  int n = 0;
  for (const IntervalSet& u : b.jarnik.U)
    if (seg.subset_of(u)) ++n;
  return n;
}

}  // namespace lipforge
