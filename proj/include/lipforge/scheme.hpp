// Nested families of closed nowhere-dense sets and their flattening into a
// single indexed sequence F_1, F_2, ...
#ifndef LIPFORGE_SCHEME_HPP_
#define LIPFORGE_SCHEME_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "lipforge/interval.hpp"

namespace lipforge {

// Level n is a list of closed sets; sets on one level are pairwise disjoint
// and the union of level n+1 lies inside the union of level n.
struct SchemeSpec {
  std::string name;
  Window window;
  std::vector<std::vector<IntervalSet>> levels;
  std::vector<Rational> measure_bounds;  // mu_n, one per level
  // Decreasing open sets whose intersection is the G_delta part (optional).
  std::vector<IntervalSet> open_levels;
  // Run each listed level through dk_sigma_decompose before validation.
  bool decompose_levels = false;
};

SchemeSpec parse_spec(const nlohmann::json& j);
nlohmann::json spec_to_json(const SchemeSpec& s);
SchemeSpec load_spec(const std::string& path);

Interval parse_interval(const nlohmann::json& j);
nlohmann::json interval_to_json(const Interval& iv);
IntervalSet parse_set(const nlohmann::json& j);
nlohmann::json set_to_json(const IntervalSet& s);

// Throws ValidationError naming the offending level and set. Parts of length
// >= 2^-L are rejected as fat.
void validate_spec(const SchemeSpec& s, int L);

// Pairwise disjoint closed sets with the same union as `compacts`, each lying
// in one F_n minus the earlier sets and inside one complementary component of
// those earlier sets. Rejects fat parts (length >= 2^-L) and differences that
// would be half-open.
std::vector<IntervalSet> dk_sigma_decompose(const std::vector<IntervalSet>& compacts,
                                            const Window& w, int L = 14);

// Level n of the output: F_n^i ∩ D_{n-1}^j (i outer, j inner), empties dropped.
std::vector<std::vector<IntervalSet>> refine_levels(
    const std::vector<std::vector<IntervalSet>>& levels);

struct SuslinScheme {
  Window window;
  // sets[0] is the window sentinel F_0; sets[1..K] are F_1..F_K.
  std::vector<IntervalSet> sets;
  std::vector<int> parent;     // parent[k] < k; parent[0] = -1
  std::vector<int> level;      // level of F_k; level[0] = 0
  int levels_listed = 0;       // number of refined levels in the spec
  std::vector<IntervalSet> level_unions;  // index n-1 holds the union of level n

  int depth() const { return int(sets.size()) - 1; }
  const IntervalSet& F(int k) const { return sets[size_t(k)]; }
  // Union of refined level d; levels beyond the listed ones reuse the last.
  const IntervalSet& level_union(int d) const;
  // Finite-depth stand-in for A: the union of the deepest listed level.
  const IntervalSet& witness_set() const;
};

// Level-major flattening of the refined levels, cut at depth K. When K runs
// past the listed sets the last level is repeated; that needs its measure to
// be zero.
SuslinScheme flatten_scheme(const SchemeSpec& spec, int K);

// Indices k in [1, depth] with x in F_k, ascending.
std::vector<int> membership_levels(const Rational& x, const SuslinScheme& s);

// Property (b): k < l and F_k ∩ F_l nonempty imply F_l ⊆ F_k. Returns the
// first violating pair or {0, 0}.
std::pair<int, int> find_property_b_violation(const SuslinScheme& s);

nlohmann::json scheme_to_json(const SuslinScheme& s);

// Closed intervals of the depth-n middle-thirds Cantor construction on [0,1].
std::vector<Interval> cantor_intervals(int n);

}  // namespace lipforge

#endif  // LIPFORGE_SCHEME_HPP_
