// Difference quotients, grid estimates of lip/Lip, and the radius sequence
// that bounds lip at points off A.
#ifndef LIPFORGE_ANALYSIS_HPP_
#define LIPFORGE_ANALYSIS_HPP_

#include <string>
#include <vector>

#include "lipforge/assembly.hpp"

namespace lipforge {

Rational eval_pl(const PLFunction& f, const Rational& x);

// max(f(x+r) - f(x), f(x) - f(x-r)) / r for nondecreasing f.
Rational sup_quotient(const PLFunction& f, const Rational& x, const Rational& r);

// f(sup u) - f(inf u).
Rational oscillation(const PLFunction& f, const Interval& u);

// {2^-m : m = m_lo..m_hi}, largest first.
std::vector<Rational> dyadic_grid(int m_lo, int m_hi);

// Parses "2^-a..2^-b"; the letter L stands for `L`.
std::vector<Rational> parse_grid(const std::string& text, int L);

struct QuotientProfile {
  Rational x;
  std::vector<Rational> radii;
  std::vector<Rational> quotients;
  Rational lip_estimate;  // min over the grid
  Rational Lip_estimate;  // max over the grid
};

QuotientProfile lip_profile(const PLFunction& f, const Rational& x,
                            const std::vector<Rational>& radii);

struct WitnessStep {
  int j = 0;
  Rational r;
  Rational osc;  // oscillation of h_J on (x - r, x + r)
  bool bound_ok = false;
};

struct WitnessTrace {
  Rational x;
  int l = 0;              // largest k with x in H_vec[k]
  int l_from_H = 0;       // largest k with x in H_k
  // l > l_from_H is only legitimate through some j < l with x in H_j and
  // F_j inside F_l, which happens when a set repeats at a later index.
  bool l_consistent = false;
  std::vector<int> J;     // k in (l, K] with x outside E_vec[k]
  std::vector<int> Kset;  // k in (l, K] with x inside E_vec[k]
  std::vector<WitnessStep> steps;
  bool steps_ok = true;
  bool e_part_ok = true;  // osc of the E part on (x-r, x+r) <= r over the radii
  Rational lip_grid;      // min over grid and step radii of sup_quotient(g)
  Rational lip_bound;     // 3 + 12 l
  bool lip_ok = false;

  bool ok() const { return l_consistent && steps_ok && e_part_ok && lip_ok; }
};

// Rejects points of the witness set (suspected A points).
WitnessTrace witness_radii(const BuildResult& b, const Rational& x,
                           const std::vector<Rational>& grid);

// Summands k whose represented stretch to the right of x reaches x + r with
// x + r admissible; each contributes more than r/3 to g(x + r) - g(x).
std::vector<int> active_levels(const BuildResult& b, const Rational& x, const Rational& r);

// Jarník summands whose U_k contains [x, x + r]; each contributes exactly r.
int jarnik_active(const BuildResult& b, const Rational& x, const Rational& r);

}  // namespace lipforge

#endif  // LIPFORGE_ANALYSIS_HPP_
