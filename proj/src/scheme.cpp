#include "lipforge/scheme.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lipforge {
namespace {

using nlohmann::json;

Rational parse_rational_json(const json& j) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  throw ValidationError("expected a rational string, got " + j.dump());
}

std::string where(size_t level, size_t set) {
  return "level " + std::to_string(level + 1) + " set " + std::to_string(set + 1);
}

struct Refined {
  std::vector<std::vector<IntervalSet>> levels;
  std::vector<std::vector<int>> parent_slot;  // index into the previous level
};

Refined refine(const std::vector<std::vector<IntervalSet>>& levels) {
  Refined r;
  for (size_t n = 0; n < levels.size(); ++n) {
    std::vector<IntervalSet> out;
    std::vector<int> slots;
    if (n == 0) {
      for (const IntervalSet& s : levels[0]) {
        if (s.empty()) continue;
        out.push_back(s);
        slots.push_back(-1);
      }
    } else {
      const auto& prev = r.levels.back();
      for (const IntervalSet& f : levels[n]) {
        for (size_t j = 0; j < prev.size(); ++j) {
          IntervalSet d = intersection(f, prev[j]);
          if (d.empty()) continue;
          out.push_back(std::move(d));
          slots.push_back(int(j));
        }
      }
    }
    r.levels.push_back(std::move(out));
    r.parent_slot.push_back(std::move(slots));
  }
  return r;
}

void check_disjoint_level(const std::vector<IntervalSet>& level, size_t n) {
  struct Tagged {
    const Interval* iv;
    size_t set;
  };
  std::vector<Tagged> all;
  for (size_t i = 0; i < level.size(); ++i)
    for (const Interval& p : level[i].parts()) all.push_back({&p, i});
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
    return a.iv->lo < b.iv->lo;
  });
  const Tagged* reach = nullptr;  // part with the largest hi so far
  for (const Tagged& t : all) {
    if (reach && reach->set != t.set) {
      auto c = t.iv->lo <=> reach->iv->hi;
      if (c < 0 || (c == 0 && t.iv->lo_closed && reach->iv->hi_closed))
        throw ValidationError("sets " + std::to_string(reach->set + 1) + " and " +
                              std::to_string(t.set + 1) + " on level " +
                              std::to_string(n + 1) + " intersect");
    }
    if (!reach || reach->iv->hi < t.iv->hi) reach = &t;
  }
}

}  // namespace

Interval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 4 || !j[2].is_boolean() || !j[3].is_boolean())
    throw ValidationError("interval must be [lo, hi, lo_closed, hi_closed]: " + j.dump());
  Interval iv{parse_rational_json(j[0]), parse_rational_json(j[1]),
              j[2].get<bool>(), j[3].get<bool>()};
  iv.validate();
  return iv;
}

json interval_to_json(const Interval& iv) {
  return json::array({iv.lo.str(), iv.hi.str(), iv.lo_closed, iv.hi_closed});
}

IntervalSet parse_set(const json& j) {
  if (!j.is_array()) throw ValidationError("set must be an array of intervals");
  std::vector<Interval> parts;
  for (const json& e : j) parts.push_back(parse_interval(e));
  return IntervalSet(std::move(parts));
}

json set_to_json(const IntervalSet& s) {
  json a = json::array();
  for (const Interval& p : s.parts()) a.push_back(interval_to_json(p));
  return a;
}

SchemeSpec parse_spec(const json& j) {
  if (!j.is_object()) throw ValidationError("spec must be a JSON object");
  SchemeSpec s;
  s.name = j.value("name", std::string());
  if (!j.contains("window") || !j["window"].is_array() || j["window"].size() != 2)
    throw ValidationError("spec.window must be [lo, hi]");
  s.window = {parse_rational_json(j["window"][0]), parse_rational_json(j["window"][1])};
  if (!(s.window.lo < s.window.hi)) throw ValidationError("spec.window is empty");
  if (!j.contains("levels") || !j["levels"].is_array())
    throw ValidationError("spec.levels must be an array");
  for (const json& lv : j["levels"]) {
    if (!lv.is_array()) throw ValidationError("each level must be an array of sets");
    std::vector<IntervalSet> level;
    for (const json& set : lv) level.push_back(parse_set(set));
    s.levels.push_back(std::move(level));
  }
  if (j.contains("measure_bounds")) {
    for (const json& m : j["measure_bounds"]) s.measure_bounds.push_back(parse_rational_json(m));
    if (s.measure_bounds.size() != s.levels.size())
      throw ValidationError("spec.measure_bounds needs one entry per level");
  } else {
    for (size_t n = 0; n < s.levels.size(); ++n)
      s.measure_bounds.push_back(Rational::pow2(-int(n + 1)));
  }
  if (j.contains("open_levels"))
    for (const json& o : j["open_levels"]) s.open_levels.push_back(parse_set(o));
  s.decompose_levels = j.value("decompose_levels", false);
  return s;
}

json spec_to_json(const SchemeSpec& s) {
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["window"] = json::array({s.window.lo.str(), s.window.hi.str()});
  json levels = json::array();
  for (const auto& lv : s.levels) {
    json a = json::array();
    for (const IntervalSet& set : lv) a.push_back(set_to_json(set));
    levels.push_back(a);
  }
  j["levels"] = levels;
  json mb = json::array();
  for (const Rational& m : s.measure_bounds) mb.push_back(m.str());
  j["measure_bounds"] = mb;
  if (!s.open_levels.empty()) {
    json o = json::array();
    for (const IntervalSet& set : s.open_levels) o.push_back(set_to_json(set));
    j["open_levels"] = o;
  }
  if (s.decompose_levels) j["decompose_levels"] = true;
  return j;
}

SchemeSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("spec " + path + " is not valid JSON: " + e.what());
  }
  SchemeSpec s = parse_spec(j);
  if (s.decompose_levels)
    for (auto& lv : s.levels) lv = dk_sigma_decompose(lv, s.window);
  return s;
}

void validate_spec(const SchemeSpec& s, int L) {
  if (!(s.window.lo < s.window.hi)) throw ValidationError("window is empty");
  const Rational fat = Rational::pow2(-L);
  IntervalSet prev_union;
  for (size_t n = 0; n < s.levels.size(); ++n) {
    const auto& level = s.levels[n];
    for (size_t i = 0; i < level.size(); ++i) {
      const IntervalSet& set = level[i];
      if (set.empty()) throw ValidationError(where(n, i) + " is empty");
      if (!set.is_closed()) throw ValidationError(where(n, i) + " is not closed");
      if (set[0].lo < s.window.lo || s.window.hi < set[set.size() - 1].hi)
        throw ValidationError(where(n, i) + " leaves the window");
      for (const Interval& p : set.parts())
        if (p.length() >= fat)
          throw ValidationError(where(n, i) + " has part " + p.str() +
                                " of length >= 2^-" + std::to_string(L) +
                                " (not nowhere dense at this resolution)");
    }
    check_disjoint_level(level, n);
    std::vector<const IntervalSet*> ptrs;
    for (const IntervalSet& set : level) ptrs.push_back(&set);
    IntervalSet u = union_all(ptrs);
    if (n > 0 && !u.subset_of(prev_union))
      throw ValidationError("level " + std::to_string(n + 1) +
                            " is not nested in level " + std::to_string(n));
    const Rational& mu = s.measure_bounds.at(n);
    if (u.measure() > mu)
      throw ValidationError("level " + std::to_string(n + 1) + " has measure " +
                            u.measure().str() + " > bound " + mu.str());
    if (mu > Rational::pow2(-int(n + 1)))
      throw ValidationError("measure bound of level " + std::to_string(n + 1) +
                            " exceeds 2^-" + std::to_string(n + 1));
    prev_union = std::move(u);
  }
  for (size_t n = 0; n < s.open_levels.size(); ++n) {
    const IntervalSet& o = s.open_levels[n];
    if (!o.is_open()) throw ValidationError("open level " + std::to_string(n + 1) + " is not open");
    if (!o.empty() && (o[0].lo < s.window.lo || s.window.hi < o[o.size() - 1].hi))
      throw ValidationError("open level " + std::to_string(n + 1) + " leaves the window");
    if (n > 0 && !o.subset_of(s.open_levels[n - 1]))
      throw ValidationError("open levels are not nested at level " + std::to_string(n + 1));
  }
}

std::vector<IntervalSet> dk_sigma_decompose(const std::vector<IntervalSet>& compacts,
                                            const Window& w, int L) {
  const Rational fat = Rational::pow2(-L);
  IntervalSet earlier;
  std::vector<IntervalSet> out;
  for (size_t n = 0; n < compacts.size(); ++n) {
    const IntervalSet& f = compacts[n];
    if (!f.is_closed()) throw ValidationError("dk_sigma: input " + std::to_string(n + 1) + " is not closed");
    if (!f.empty() && (f[0].lo < w.lo || w.hi < f[f.size() - 1].hi))
      throw ValidationError("dk_sigma: input " + std::to_string(n + 1) + " leaves the window");
    for (const Interval& p : f.parts())
      if (p.length() >= fat)
        throw ValidationError("dk_sigma: input " + std::to_string(n + 1) + " contains " +
                              p.str() + " (not nowhere dense)");
    IntervalSet diff = difference(f, earlier);
    if (!diff.is_closed())
      throw ValidationError("dk_sigma: input " + std::to_string(n + 1) +
                            " minus earlier inputs is not closed");
    IntervalSet gaps = complement_in_window(earlier, w);
    std::vector<Interval> group;
    size_t group_comp = IntervalSet::npos;
    auto flush = [&] {
      if (!group.empty()) out.push_back(IntervalSet::from_canonical(std::move(group)));
      group.clear();
    };
    for (const Interval& p : diff.parts()) {
      size_t c = gaps.find(p.lo);
      if (c != group_comp) flush();
      group_comp = c;
      group.push_back(p);
    }
    flush();
    earlier = set_union(earlier, f);
  }
  return out;
}

std::vector<std::vector<IntervalSet>> refine_levels(
    const std::vector<std::vector<IntervalSet>>& levels) {
  return refine(levels).levels;
}

const IntervalSet& SuslinScheme::level_union(int d) const {
  if (d <= 0 || level_unions.empty()) return sets[0];
  return level_unions[size_t(std::min(d, levels_listed) - 1)];
}

const IntervalSet& SuslinScheme::witness_set() const {
  static const IntervalSet kEmpty;
  return level_unions.empty() ? kEmpty : level_unions.back();
}

SuslinScheme flatten_scheme(const SchemeSpec& spec, int K) {
  if (K < 0) throw ValidationError("depth must be >= 0");
  Refined r = refine(spec.levels);
  SuslinScheme s;
  s.window = spec.window;
  s.sets.push_back(IntervalSet::from_canonical({spec.window.as_interval()}));
  s.parent.push_back(-1);
  s.level.push_back(0);
  while (!r.levels.empty() && r.levels.back().empty()) {
    r.levels.pop_back();
    r.parent_slot.pop_back();
  }
  s.levels_listed = int(r.levels.size());
  for (const auto& lv : r.levels) {
    std::vector<const IntervalSet*> ptrs;
    for (const IntervalSet& set : lv) ptrs.push_back(&set);
    s.level_unions.push_back(union_all(ptrs));
  }
  if (r.levels.empty()) return s;

  std::vector<int> prev_index;  // flat index of each set of the previous level
  for (int n = 0; s.depth() < K; ++n) {
    bool repeat = n >= s.levels_listed;
    if (repeat && n == s.levels_listed && !s.level_unions.back().measure().is_zero())
      throw ValidationError("depth " + std::to_string(K) +
                            " exceeds the listed sets and the last level has positive measure");
    const auto& lv = r.levels[size_t(std::min(n, s.levels_listed - 1))];
    std::vector<int> index;
    for (size_t m = 0; m < lv.size() && s.depth() < K; ++m) {
      int slot = repeat ? int(m) : r.parent_slot[size_t(n)][m];
      s.parent.push_back(slot < 0 ? 0 : prev_index[size_t(slot)]);
      s.level.push_back(n + 1);
      s.sets.push_back(lv[m]);
      index.push_back(s.depth());
    }
    prev_index = std::move(index);
  }
  return s;
}

std::vector<int> membership_levels(const Rational& x, const SuslinScheme& s) {
  std::vector<int> out;
  for (int k = 1; k <= s.depth(); ++k)
    if (s.F(k).contains(x)) out.push_back(k);
  return out;
}

std::pair<int, int> find_property_b_violation(const SuslinScheme& s) {
  for (int l = 2; l <= s.depth(); ++l)
    for (int k = 1; k < l; ++k)
      if (s.F(k).intersects(s.F(l)) && !s.F(l).subset_of(s.F(k))) return {k, l};
  return {0, 0};
}

nlohmann::json scheme_to_json(const SuslinScheme& s) {
  json j;
  j["window"] = json::array({s.window.lo.str(), s.window.hi.str()});
  j["depth"] = s.depth();
  j["levels_listed"] = s.levels_listed;
  json sets = json::array();
  for (int k = 1; k <= s.depth(); ++k)
    sets.push_back({{"k", k},
                    {"level", s.level[size_t(k)]},
                    {"parent", s.parent[size_t(k)]},
                    {"parts", set_to_json(s.F(k))}});
  j["sets"] = sets;
  return j;
}

std::vector<Interval> cantor_intervals(int n) {
  std::vector<Interval> cur{Interval::closed(0, 1)};
  for (int d = 0; d < n; ++d) {
    std::vector<Interval> next;
    for (const Interval& iv : cur) {
      Rational t = iv.length() / Rational(3);
      next.push_back(Interval::closed(iv.lo, iv.lo + t));
      next.push_back(Interval::closed(iv.hi - t, iv.hi));
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace lipforge
