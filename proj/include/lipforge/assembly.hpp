// End-to-end construction: scheme -> H_k -> family sets -> g_k -> g, plus the
// Jarník part f for the G_delta piece and h = f + g.
#ifndef LIPFORGE_ASSEMBLY_HPP_
#define LIPFORGE_ASSEMBLY_HPP_

#include <cstdint>
#include <vector>

#include "lipforge/epm.hpp"
#include "lipforge/function_g.hpp"
#include "lipforge/pl_function.hpp"
#include "lipforge/scheme.hpp"
#include "lipforge/set_h.hpp"

namespace lipforge {

struct BuildConfig {
  int K = 1;           // number of summands g_k
  int L = 1;           // resolution: hat sets use 1/n with n <= 2^L
  uint64_t seed = 0;
  int horizon = 0;     // owners whose H_k enter the family sets; 0 means K
  int d_min = 1;       // owner k avoids scheme level max(k, d_min)

  int effective_horizon() const { return horizon > 0 ? horizon : K; }
  Rational eps(int k) const { return Rational::pow2(-k); }
  void validate() const;
};

struct JarnikResult {
  std::vector<IntervalSet> U;       // U_k, k = 1..K at index k-1
  std::vector<int> source_level;    // open level U_k was taken from
  std::vector<char> shrunk;         // U_k had to be shrunk below the level
  std::vector<PLFunction> parts;    // f_k(x) = |(-inf, x) ∩ U_k|
  PLFunction f;
};

// U_k is the first open level O_n, n >= k, with |O_n| < 2^-k. When no level is
// small enough the deepest one is shrunk about its component centres.
JarnikResult jarnik_build(const std::vector<IntervalSet>& open_levels, int K);

struct ACCheck {
  Rational sum_of_tv;
  Rational tv_of_sum;
  bool additive = false;
  bool bounded = false;  // sum_of_tv <= 2
  bool ok() const { return additive && bounded; }
};

ACCheck ac_check(const std::vector<const PLFunction*>& parts);

struct BuildResult {
  SchemeSpec spec;
  BuildConfig cfg;
  SuslinScheme scheme;
  EpmRegistry registry;
  std::vector<HBundle> H;     // owners 1..horizon at index k-1
  FamilySets fam;
  std::vector<GBundle> G;     // k = 1..K at index k-1
  std::vector<PLFunction> g;  // k = 1..K at index k-1
  PLFunction g_sum;
  Rational tail_bound;        // sup-norm distance to the untruncated sum
  bool has_jarnik = false;
  JarnikResult jarnik;
  PLFunction h;               // f + g_sum
  std::vector<Rational> witnesses;  // finite-depth A points
  // Wall-clock seconds per stage; kept out of the artifact.
  double seconds_H = 0, seconds_G = 0;

  int K() const { return int(g.size()); }
  int owners() const { return int(H.size()); }
  const HBundle& Hb(int k) const { return H[size_t(k - 1)]; }
  const GBundle& Gb(int k) const { return G[size_t(k - 1)]; }
  const PLFunction& gk(int k) const { return g[size_t(k - 1)]; }
  bool is_witness(const Rational& x) const;
};

// Throws ValidationError for a bad spec/config and AllocationError when a
// piece cannot be placed.
BuildResult build_sum(const SchemeSpec& spec, const BuildConfig& cfg);

PLFunction combine_main(const PLFunction& f, const PLFunction& g);

// Endpoints of the parts of the witness set, ascending.
std::vector<Rational> witness_points(const SuslinScheme& s);

}  // namespace lipforge

#endif  // LIPFORGE_ASSEMBLY_HPP_
