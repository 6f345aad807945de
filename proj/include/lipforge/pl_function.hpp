// Continuous nondecreasing piecewise-linear functions with exact breakpoints.
#ifndef LIPFORGE_PL_FUNCTION_HPP_
#define LIPFORGE_PL_FUNCTION_HPP_

#include <string>
#include <vector>

#include "lipforge/interval.hpp"

namespace lipforge {

class ParseError : public Error {
 public:
  using Error::Error;
};

// Constant to the left of the first breakpoint and to the right of the last.
class PLFunction {
 public:
  struct Segment {
    Rational lo, hi, slope;
  };

  // The zero function.
  PLFunction();
  static PLFunction constant(const Rational& c);
  // xs strictly increasing, vs nondecreasing, same nonzero length.
  static PLFunction from_points(std::vector<Rational> xs, std::vector<Rational> vs);
  // x -> integral of the step function that equals `slope` on each segment.
  // Segments must not overlap; empty ones are ignored.
  static PLFunction integrate(std::vector<Segment> segs);

  Rational operator()(const Rational& x) const;
  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& vs() const { return vs_; }
  size_t size() const { return xs_.size(); }
  // Slope on (xs[i], xs[i+1]).
  Rational slope(size_t i) const;
  Rational max_slope() const;
  const Rational& left_value() const { return vs_.front(); }
  const Rational& right_value() const { return vs_.back(); }
  Rational total_variation() const { return vs_.back() - vs_.front(); }
  // Union of the closed segments with positive slope.
  IntervalSet positive_slope_support() const;

  // "x,value" header then one row per breakpoint.
  std::string to_csv() const;
  static PLFunction from_csv(const std::string& text);

  friend bool operator==(const PLFunction&, const PLFunction&) = default;

 private:
  std::vector<Rational> xs_, vs_;
};

PLFunction sum(const std::vector<const PLFunction*>& fs);
PLFunction operator+(const PLFunction& a, const PLFunction& b);

}  // namespace lipforge

#endif  // LIPFORGE_PL_FUNCTION_HPP_
