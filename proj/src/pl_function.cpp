#include "lipforge/pl_function.hpp"

#include <algorithm>
#include <sstream>

namespace lipforge {

PLFunction::PLFunction() : xs_{Rational(0)}, vs_{Rational(0)} {}

PLFunction PLFunction::constant(const Rational& c) {
  PLFunction f;
  f.vs_[0] = c;
  return f;
}

PLFunction PLFunction::from_points(std::vector<Rational> xs, std::vector<Rational> vs) {
  if (xs.empty() || xs.size() != vs.size())
    throw ValidationError("PL function needs matching, nonempty breakpoint lists");
  for (size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i]))
      throw ValidationError("PL breakpoints not strictly increasing at " + xs[i].str());
    if (vs[i] < vs[i - 1])
      throw ValidationError("PL values decrease at " + xs[i].str());
  }
  PLFunction f;
  f.xs_ = std::move(xs);
  f.vs_ = std::move(vs);
  return f;
}

PLFunction PLFunction::integrate(std::vector<Segment> segs) {
  std::erase_if(segs, [](const Segment& s) { return !(s.lo < s.hi); });
  if (segs.empty()) return PLFunction();
  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  std::vector<Rational> xs, vs;
  xs.reserve(2 * segs.size());
  vs.reserve(2 * segs.size());
  Rational v;
  for (const Segment& s : segs) {
    if (s.slope.sign() < 0) throw ValidationError("negative slope segment");
    if (!xs.empty() && s.lo < xs.back())
      throw ValidationError("overlapping PL segments at " + s.lo.str());
    if (xs.empty() || xs.back() != s.lo) {
      xs.push_back(s.lo);
      vs.push_back(v);
    }
    v += s.slope * (s.hi - s.lo);
    xs.push_back(s.hi);
    vs.push_back(v);
  }
  PLFunction f;
  f.xs_ = std::move(xs);
  f.vs_ = std::move(vs);
  return f;
}

Rational PLFunction::operator()(const Rational& x) const {
  if (x <= xs_.front()) return vs_.front();
  if (x >= xs_.back()) return vs_.back();
  size_t i = size_t(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
  if (xs_[i] == x || vs_[i] == vs_[i + 1]) return vs_[i];
  return vs_[i] + (x - xs_[i]) * slope(i);
}

Rational PLFunction::slope(size_t i) const {
  return (vs_[i + 1] - vs_[i]) / (xs_[i + 1] - xs_[i]);
}

Rational PLFunction::max_slope() const {
  Rational m;
  for (size_t i = 0; i + 1 < xs_.size(); ++i) m = max(m, slope(i));
  return m;
}

IntervalSet PLFunction::positive_slope_support() const {
  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < xs_.size(); ++i)
    if (vs_[i] < vs_[i + 1]) out.push_back(Interval::closed(xs_[i], xs_[i + 1]));
  return canonicalize(std::move(out));
}

std::string PLFunction::to_csv() const {
  std::string out = "x,value\n";
  for (size_t i = 0; i < xs_.size(); ++i) {
    out += xs_[i].str();
    out += ',';
    out += vs_[i].str();
    out += '\n';
  }
  return out;
}

PLFunction PLFunction::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,value")
    throw ParseError("PL csv: missing 'x,value' header");
  std::vector<Rational> xs, vs;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError("PL csv row " + std::to_string(row) + ": expected two fields");
    try {
      xs.push_back(Rational::parse(line.substr(0, comma)));
      vs.push_back(Rational::parse(line.substr(comma + 1)));
    } catch (const std::invalid_argument& e) {
      throw ParseError("PL csv row " + std::to_string(row) + ": " + e.what());
    }
  }
  try {
    return from_points(std::move(xs), std::move(vs));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("PL csv: ") + e.what());
  }
}

PLFunction sum(const std::vector<const PLFunction*>& fs) {
  if (fs.empty()) return PLFunction();
  // Slope-change events, merged and integrated once.
  struct Event {
    Rational x, dslope;
  };
  std::vector<Event> ev;
  Rational left;
  for (const PLFunction* f : fs) {
    left += f->left_value();
    Rational prev;
    for (size_t i = 0; i + 1 < f->size(); ++i) {
      Rational s = f->slope(i);
      ev.push_back({f->xs()[i], s - prev});
      prev = std::move(s);
    }
    ev.push_back({f->xs().back(), -prev});
  }
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
  std::vector<Rational> xs, vs;
  Rational v = left, slope;
  for (size_t i = 0; i < ev.size();) {
    const Rational x = ev[i].x;
    if (!xs.empty()) v += slope * (x - xs.back());
    while (i < ev.size() && ev[i].x == x) slope += ev[i++].dslope;
    xs.push_back(x);
    vs.push_back(v);
  }
  PLFunction out = PLFunction::from_points(std::move(xs), std::move(vs));
  return out;
}

PLFunction operator+(const PLFunction& a, const PLFunction& b) { return sum({&a, &b}); }

}  // namespace lipforge
