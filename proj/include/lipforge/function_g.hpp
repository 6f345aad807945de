// The open set G_k, the intervals it carries, and the monotone PL function
// g_k whose slope lives on H_k.
#ifndef LIPFORGE_FUNCTION_G_HPP_
#define LIPFORGE_FUNCTION_G_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lipforge/epm.hpp"
#include "lipforge/pl_function.hpp"
#include "lipforge/set_h.hpp"

namespace lipforge {

class ConstructionError : public Error {
 public:
  using Error::Error;
};

struct GBundle {
  int k = 0;
  Rational eps;
  int L = 0;
  IntervalSet E;                       // the avoided closed set
  std::vector<Interval> e_components;  // components of E^c inside the open window
  IntervalSet G;                       // open
  std::vector<Interval> uncovered;     // F parts G leaves out (touching E, or too long)
  int halvings = 0;                    // radius halvings the exact check forced
  std::vector<Interval> J;             // components of the hat complement inside G
  std::vector<size_t> J_component;     // index into HBundle::components
};

// G ⊆ E^c ∩ (F)_eps with |G| < eps and, for every U sharing an endpoint with a
// component I of E^c, |G ∩ U| < (eps/4)|U|. Fills J as well.
GBundle build_G(const HBundle& h, const IntervalSet& E, const Window& w);

// Components (u, v) of G minus the hat set with u, v in the hat set.
std::vector<Interval> build_J(const HBundle& h, const IntervalSet& G);

// Exact anchored check; returns an empty string or the first violation.
std::string anchored_violation(const IntervalSet& G, const std::vector<Interval>& e_components,
                               const Rational& eps);

// g(x) = integral of phi over (-inf, x), phi = sum_J (|J|/|piece_J|) 1_{piece_J} + 1_{F∩G}.
PLFunction build_g(const GBundle& gb, const HBundle& hb, const EpmRegistry& reg);

struct GCheckOptions {
  int n_max = 16;            // quotient bands for N = 2..n_max
  size_t osc_samples = 1000;
  uint64_t seed = 0;
};

struct GCheck {
  int k = 0;
  bool support_in_H = false;
  Rational max_slope;
  bool slope_ok = false;
  size_t witnesses = 0;        // A-witnesses in F_k ∩ G_k off E_k
  size_t ladder_pairs = 0;
  size_t quotient_points = 0;
  bool ladder_ok = true;       // g(y) - g(x) = y - x on represented hat points
  bool bands_ok = true;        // ((N-1)/(N+1), (N+1)/(N-1)) quotient bands
  size_t osc_samples = 0;      // sampled intervals meeting E
  bool osc_ok = true;
  bool anchored_ok = false;
  Rational tv;
  bool tv_ok = false;
  std::string failure;         // first failure, if any

  bool ok() const {
    return support_in_H && slope_ok && ladder_ok && bands_ok && osc_ok && anchored_ok && tv_ok;
  }
};

// Right and left ends of the represented stretch through x: the extreme hat
// points inside the G-component of x.
struct Stretch {
  Rational left, right;
};
std::optional<Stretch> represented_stretch(const Rational& x, const GBundle& gb,
                                           const HBundle& hb);

GCheck check_g_properties(const PLFunction& g, const GBundle& gb, const HBundle& hb,
                          const std::vector<Rational>& witnesses,
                          const GCheckOptions& opt = {});

}  // namespace lipforge

#endif  // LIPFORGE_FUNCTION_G_HPP_
