#include "lipforge/set_h.hpp"

#include <algorithm>

namespace lipforge {

size_t HBundle::component_index(const Interval& J) const {
  auto it = std::lower_bound(components.begin(), components.end(), J.lo,
                             [](const Interval& c, const Rational& x) { return c.lo < x; });
  if (it != components.end() && *it == J) return size_t(it - components.begin());
  return IntervalSet::npos;
}

HBundle build_H(int k, const IntervalSet& F, const Rational& eps, const Window& w,
                int L, EpmRegistry& reg, const IntervalSet& avoid, int avoid_level) {
  if (F.empty()) throw ValidationError("build_H: F_" + std::to_string(k) + " is empty");
  HBundle b;
  b.k = k;
  b.eps = eps;
  b.L = L;
  b.F = F;
  b.hat = hat_set(F, w, L);
  IntervalSet near = intersection(eps_neighborhood(F, eps),
                                  IntervalSet::from_canonical({w.interior()}));
  b.components = difference(near, b.hat).parts();
  b.piece.reserve(b.components.size());
  for (const Interval& J : b.components) {
    size_t idx = reg.allocate(k, middle_third(J), J.length() / Rational(kPieceDivisor),
                              avoid, avoid_level);
    b.piece.push_back(idx);
  }
  std::vector<Interval> all;
  for (size_t idx : b.piece) {
    const auto& kp = reg[idx].piece.kept.parts();
    all.insert(all.end(), kp.begin(), kp.end());
  }
  // Pieces of one owner sit in disjoint middle thirds, already in order.
  b.alloc = IntervalSet::from_canonical(std::move(all));
  b.H = set_union(F, b.alloc);
  return b;
}

FamilySets build_family_sets(const std::vector<HBundle>& bundles, const SuslinScheme& s) {
  const size_t n = bundles.size();
  FamilySets fs;
  fs.H_vec.resize(n + 1);
  fs.E_vec.resize(n + 1);
  fs.below.assign(n + 1, std::vector<char>(n + 1, 0));
  fs.apart.assign(n + 1, std::vector<char>(n + 1, 0));
  for (size_t j = 1; j <= n; ++j)
    for (size_t k = 1; k <= n; ++k) {
      if (j == k) {
        fs.below[j][k] = 1;
        continue;
      }
      fs.below[j][k] = s.F(int(j)).subset_of(s.F(int(k)));
      fs.apart[j][k] = !s.F(int(j)).intersects(s.F(int(k)));
    }
  for (size_t k = 1; k <= n; ++k) {
    std::vector<const IntervalSet*> hs;
    for (size_t j = 1; j <= n; ++j)
      if (fs.below[j][k]) hs.push_back(&bundles[j - 1].H);
    fs.H_vec[k] = union_all(hs);
  }
  for (size_t k = 1; k <= n; ++k) {
    std::vector<const IntervalSet*> es;
    for (size_t j = 1; j < k; ++j)
      if (fs.apart[j][k]) es.push_back(&fs.H_vec[j]);
    fs.E_vec[k] = union_all(es);
  }
  return fs;
}

}  // namespace lipforge
