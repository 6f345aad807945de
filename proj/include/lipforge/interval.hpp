// Finite unions of real intervals with exact rational endpoints.
#ifndef LIPFORGE_INTERVAL_HPP_
#define LIPFORGE_INTERVAL_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipforge/rational.hpp"

namespace lipforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input to an operation (malformed interval, precondition violated).
class ValidationError : public Error {
 public:
  using Error::Error;
};

struct Interval {
  Rational lo, hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static Interval open(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
  static Interval point(const Rational& a) { return {a, a, true, true}; }

  bool degenerate() const { return lo == hi; }
  bool is_closed() const { return lo_closed && hi_closed; }
  bool is_open() const { return !lo_closed && !hi_closed; }
  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const;
  // Throws ValidationError unless lo < hi, or lo == hi with both ends closed.
  void validate() const;
  std::string str() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Closed window [lo, hi] with lo < hi.
struct Window {
  Rational lo, hi;
  Interval as_interval() const { return Interval::closed(lo, hi); }
  Interval interior() const { return Interval::open(lo, hi); }
  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Window&, const Window&) = default;
};

// Canonical form: parts sorted, pairwise disjoint and non-adjacent (no two
// parts whose union is an interval).
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);
  // Validates and canonicalizes.
  explicit IntervalSet(std::vector<Interval> parts);
  // Caller guarantees canonical form.
  static IntervalSet from_canonical(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  size_t size() const { return parts_.size(); }
  const Interval& operator[](size_t i) const { return parts_[i]; }

  bool contains(const Rational& x) const;
  // Index of the part containing x, or npos.
  size_t find(const Rational& x) const;
  Rational measure() const;
  bool is_closed() const;
  bool is_open() const;
  // Number of nondegenerate parts.
  size_t nondegenerate_count() const;
  bool subset_of(const IntervalSet& other) const;
  bool intersects(const IntervalSet& other) const;
  bool intersects(const Interval& iv) const;
  std::string str() const;

  static constexpr size_t npos = static_cast<size_t>(-1);

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

IntervalSet canonicalize(std::vector<Interval> parts);

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersection(const IntervalSet& a, const IntervalSet& b);
IntervalSet difference(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement_in_window(const IntervalSet& a, const Window& w);
// Union of many sets in one pass.
IntervalSet union_all(const std::vector<const IntervalSet*>& sets);

// Maximal open intervals of an open set.
std::vector<Interval> components(const IntervalSet& open_set);

// dist(x, s); nullopt stands for +infinity (empty s).
std::optional<Rational> distance(const Rational& x, const IntervalSet& s);

// {y : dist(y, s) < eps}
IntervalSet eps_neighborhood(const IntervalSet& s, const Rational& eps);

// F together with every window point at distance exactly 1/n from F for
// n <= 2^L, plus the window endpoints.
IntervalSet hat_set(const IntervalSet& f, const Window& w, int L);

// Open ball B(c, r/3) for the interval (c - r, c + r).
Interval middle_third(const Interval& iv);

}  // namespace lipforge

#endif  // LIPFORGE_INTERVAL_HPP_
