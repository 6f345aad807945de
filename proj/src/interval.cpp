#include "lipforge/interval.hpp"

#include <algorithm>
#include <sstream>

namespace lipforge {
namespace {

// Membership of a canonical set at each value of V (which contains all of
// its endpoints) and on each open cell (V[i], V[i+1]).
struct Marks {
  std::vector<char> pt, cell;
};

Marks mark(const IntervalSet& s, const std::vector<Rational>& v) {
  Marks m{std::vector<char>(v.size(), 0),
          std::vector<char>(v.empty() ? 0 : v.size() - 1, 0)};
  size_t j = 0;
  for (const Interval& p : s.parts()) {
    while (v[j] < p.lo) ++j;
    size_t a = j;
    while (v[j] < p.hi) ++j;
    size_t b = j;
    if (a == b) {
      m.pt[a] = 1;
      continue;
    }
    m.pt[a] = p.lo_closed;
    m.pt[b] = p.hi_closed;
    for (size_t i = a + 1; i < b; ++i) m.pt[i] = 1;
    for (size_t i = a; i < b; ++i) m.cell[i] = 1;
  }
  return m;
}

std::vector<Rational> merged_endpoints(const IntervalSet& a,
                                       const IntervalSet& b) {
  std::vector<Rational> ea, eb, out;
  ea.reserve(2 * a.size());
  eb.reserve(2 * b.size());
  for (const Interval& p : a.parts()) {
    ea.push_back(p.lo);
    if (!p.degenerate()) ea.push_back(p.hi);
  }
  for (const Interval& p : b.parts()) {
    eb.push_back(p.lo);
    if (!p.degenerate()) eb.push_back(p.hi);
  }
  out.reserve(ea.size() + eb.size());
  std::merge(ea.begin(), ea.end(), eb.begin(), eb.end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Rebuild a canonical set from point/cell membership flags.
IntervalSet emit(const std::vector<Rational>& v, const std::vector<char>& pt,
                 const std::vector<char>& cell) {
  std::vector<Interval> out;
  bool in = false;
  Rational start;
  bool start_closed = false;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    bool p = pt[i];
    bool c = i + 1 < n ? bool(cell[i]) : false;
    if (!in) {
      if (p && c) {
        start = v[i];
        start_closed = true;
        in = true;
      } else if (p) {
        out.push_back(Interval::point(v[i]));
      } else if (c) {
        start = v[i];
        start_closed = false;
        in = true;
      }
    } else if (!(p && c)) {
      out.push_back({start, v[i], start_closed, p});
      in = false;
      if (!p && c) {
        start = v[i];
        start_closed = false;
        in = true;
      }
    }
  }
  return IntervalSet::from_canonical(std::move(out));
}

template <typename Op>
IntervalSet combine(const IntervalSet& a, const IntervalSet& b, Op op) {
  std::vector<Rational> v = merged_endpoints(a, b);
  if (v.empty()) return {};
  Marks ma = mark(a, v), mb = mark(b, v);
  std::vector<char> pt(v.size()), cell(v.size() - 1);
  for (size_t i = 0; i < v.size(); ++i) pt[i] = op(ma.pt[i], mb.pt[i]);
  for (size_t i = 0; i + 1 < v.size(); ++i)
    cell[i] = op(ma.cell[i], mb.cell[i]);
  return emit(v, pt, cell);
}

// Smallest integer n >= q, capped at cap.
long long ceil_capped(const Rational& q, long long cap) {
  mpq_class m = q.to_mpq();
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), m.get_num().get_mpz_t(), m.get_den().get_mpz_t());
  if (c > long(cap)) return cap;
  if (c < 1) return 1;
  return c.get_si();
}

}  // namespace

bool Interval::contains(const Rational& x) const {
  auto l = x <=> lo;
  if (l < 0 || (l == 0 && !lo_closed)) return false;
  auto h = x <=> hi;
  return h < 0 || (h == 0 && hi_closed);
}

void Interval::validate() const {
  if (hi < lo) throw ValidationError("malformed interval " + str() + ": lo > hi");
  if (lo == hi && !(lo_closed && hi_closed))
    throw ValidationError("malformed interval " + str() + ": empty");
}

std::string Interval::str() const {
  return std::string(lo_closed ? "[" : "(") + lo.str() + "," + hi.str() +
         (hi_closed ? "]" : ")");
}

IntervalSet::IntervalSet(std::initializer_list<Interval> parts)
    : IntervalSet(std::vector<Interval>(parts)) {}

IntervalSet::IntervalSet(std::vector<Interval> parts)
    : parts_(canonicalize(std::move(parts)).parts_) {}

IntervalSet IntervalSet::from_canonical(std::vector<Interval> parts) {
  IntervalSet s;
  s.parts_ = std::move(parts);
  return s;
}

size_t IntervalSet::find(const Rational& x) const {
  // First part whose hi >= x.
  auto it = std::partition_point(parts_.begin(), parts_.end(),
                                 [&](const Interval& p) { return p.hi < x; });
  if (it != parts_.end() && it->contains(x)) return size_t(it - parts_.begin());
  return npos;
}

bool IntervalSet::contains(const Rational& x) const { return find(x) != npos; }

Rational IntervalSet::measure() const {
  Rational m;
  for (const Interval& p : parts_) m += p.length();
  return m;
}

bool IntervalSet::is_closed() const {
  return std::all_of(parts_.begin(), parts_.end(),
                     [](const Interval& p) { return p.is_closed(); });
}

bool IntervalSet::is_open() const {
  return std::all_of(parts_.begin(), parts_.end(),
                     [](const Interval& p) { return p.is_open(); });
}

size_t IntervalSet::nondegenerate_count() const {
  return size_t(std::count_if(parts_.begin(), parts_.end(),
                              [](const Interval& p) { return !p.degenerate(); }));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  return difference(*this, other).empty();
}

bool IntervalSet::intersects(const IntervalSet& other) const {
  return !intersection(*this, other).empty();
}

bool IntervalSet::intersects(const Interval& iv) const {
  auto it = std::partition_point(parts_.begin(), parts_.end(),
                                 [&](const Interval& p) { return p.hi < iv.lo; });
  for (; it != parts_.end() && it->lo <= iv.hi; ++it) {
    if (!intersection(IntervalSet::from_canonical({*it}),
                      IntervalSet::from_canonical({iv})).empty())
      return true;
  }
  return false;
}

std::string IntervalSet::str() const {
  if (parts_.empty()) return "{}";
  std::ostringstream os;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " u ";
    os << parts_[i].str();
  }
  return os.str();
}

IntervalSet canonicalize(std::vector<Interval> parts) {
  for (const Interval& p : parts) p.validate();
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    auto c = a.lo <=> b.lo;
    if (c != 0) return c < 0;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<Interval> out;
  for (Interval& p : parts) {
    if (!out.empty()) {
      Interval& cur = out.back();
      auto c = p.lo <=> cur.hi;
      if (c < 0 || (c == 0 && (cur.hi_closed || p.lo_closed))) {
        if (p.lo == cur.lo) cur.lo_closed = cur.lo_closed || p.lo_closed;
        auto c2 = p.hi <=> cur.hi;
        if (c2 > 0) {
          cur.hi = std::move(p.hi);
          cur.hi_closed = p.hi_closed;
        } else if (c2 == 0) {
          cur.hi_closed = cur.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    out.push_back(std::move(p));
  }
  return IntervalSet::from_canonical(std::move(out));
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

IntervalSet intersection(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

IntervalSet difference(const IntervalSet& a, const IntervalSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

IntervalSet complement_in_window(const IntervalSet& a, const Window& w) {
  return difference(IntervalSet::from_canonical({w.as_interval()}), a);
}

IntervalSet union_all(const std::vector<const IntervalSet*>& sets) {
  size_t n = 0;
  for (const IntervalSet* s : sets) n += s->size();
  std::vector<Interval> all;
  all.reserve(n);
  for (const IntervalSet* s : sets)
    all.insert(all.end(), s->parts().begin(), s->parts().end());
  return canonicalize(std::move(all));
}

std::vector<Interval> components(const IntervalSet& open_set) {
  return open_set.parts();
}

std::optional<Rational> distance(const Rational& x, const IntervalSet& s) {
  if (s.empty()) return std::nullopt;
  const auto& ps = s.parts();
  auto it = std::partition_point(ps.begin(), ps.end(),
                                 [&](const Interval& p) { return p.hi < x; });
  std::optional<Rational> best;
  auto consider = [&](const Rational& d) {
    if (!best || d < *best) best = d;
  };
  if (it != ps.end()) {
    if (it->lo <= x) return Rational(0);
    consider(it->lo - x);
  }
  if (it != ps.begin()) consider(x - std::prev(it)->hi);
  return best;
}

IntervalSet eps_neighborhood(const IntervalSet& s, const Rational& eps) {
  if (eps.sign() <= 0) throw ValidationError("eps_neighborhood: eps must be > 0");
  std::vector<Interval> out;
  out.reserve(s.size());
  for (const Interval& p : s.parts())
    out.push_back(Interval::open(p.lo - eps, p.hi + eps));
  return canonicalize(std::move(out));
}

IntervalSet hat_set(const IntervalSet& f, const Window& w, int L) {
  if (f.empty()) throw ValidationError("hat_set: F is empty");
  if (!f.is_closed()) throw ValidationError("hat_set: F is not closed");
  if (L < 0 || L > 40) throw ValidationError("hat_set: resolution out of range");
  if (f[0].lo < w.lo || w.hi < f[f.size() - 1].hi)
    throw ValidationError("hat_set: F is not inside the window");
  const long long top = 1LL << L;
  std::vector<Interval> out;
  auto pt = [&](const Rational& x) { out.push_back(Interval::point(x)); };

  // Gap (a, b); a_in_f / b_in_f say whether the ends belong to F.
  auto gap = [&](const Rational& a, bool a_in_f, const Rational& b, bool b_in_f) {
    Rational len = b - a;
    if (a_in_f && b_in_f) {
      long long n0 = ceil_capped(Rational(2) / len, top + 1);
      for (long long n = top; n >= n0; --n) pt(a + Rational(1, n));
      Rational mid_left = n0 <= top ? a + Rational(1, n0) : Rational();
      for (long long n = n0; n <= top; ++n) {
        Rational y = b - Rational(1, n);
        if (n == n0 && y == mid_left) continue;
        pt(y);
      }
    } else if (b_in_f) {
      pt(a);
      long long n0 = ceil_capped(Rational(1) / len, top + 1);
      for (long long n = n0; n <= top; ++n) {
        Rational y = b - Rational(1, n);
        if (y != a) pt(y);
      }
    } else {
      long long n0 = ceil_capped(Rational(1) / len, top + 1);
      for (long long n = top; n >= n0; --n) {
        Rational y = a + Rational(1, n);
        if (y != b) pt(y);
      }
      pt(b);
    }
  };

  const auto& ps = f.parts();
  if (w.lo < ps.front().lo) gap(w.lo, false, ps.front().lo, true);
  for (size_t i = 0; i < ps.size(); ++i) {
    out.push_back(ps[i]);
    if (i + 1 < ps.size()) gap(ps[i].hi, true, ps[i + 1].lo, true);
  }
  if (ps.back().hi < w.hi) gap(ps.back().hi, true, w.hi, false);
  return canonicalize(std::move(out));
}

Interval middle_third(const Interval& iv) {
  if (iv.hi <= iv.lo) throw ValidationError("middle_third: degenerate interval " + iv.str());
  Rational third = (iv.hi - iv.lo) / Rational(3);
  return Interval::open(iv.lo + third, iv.hi - third);
}

}  // namespace lipforge
