// H_k: F_k plus one fat-Cantor piece in the middle third of every
// complementary interval of the hat set near F_k, and the family unions
// built from the H_k.
#ifndef LIPFORGE_SET_H_HPP_
#define LIPFORGE_SET_H_HPP_

#include <vector>

#include "lipforge/epm.hpp"
#include "lipforge/interval.hpp"
#include "lipforge/scheme.hpp"

namespace lipforge {

struct HBundle {
  int k = 0;
  Rational eps;
  int L = 0;
  IntervalSet F;
  IntervalSet hat;                   // hat set of F at resolution L
  std::vector<Interval> components;  // open J, sorted
  std::vector<size_t> piece;         // registry record of components[i]
  IntervalSet alloc;                 // union of the pieces
  IntervalSet H;                     // F ∪ alloc

  // Index of the component equal to J, or npos.
  size_t component_index(const Interval& J) const;
};

// Piece measure |J| / kPieceDivisor, so slopes of g never exceed it.
inline constexpr int kPieceDivisor = 12;

HBundle build_H(int k, const IntervalSet& F, const Rational& eps, const Window& w,
                int L, EpmRegistry& reg, const IntervalSet& avoid, int avoid_level);

struct FamilySets {
  // Index k in [1, n]; entry 0 unused.
  std::vector<IntervalSet> H_vec;  // union of H_j over F_j ⊆ F_k
  std::vector<IntervalSet> E_vec;  // union of H_vec[j] over j < k, F_j ∩ F_k = ∅
  // below[j][k] is F_j ⊆ F_k; apart[j][k] is F_j ∩ F_k = ∅.
  std::vector<std::vector<char>> below, apart;
};

// Uses bundles[k-1] for k = 1..bundles.size().
FamilySets build_family_sets(const std::vector<HBundle>& bundles, const SuslinScheme& s);

}  // namespace lipforge

#endif  // LIPFORGE_SET_H_HPP_
