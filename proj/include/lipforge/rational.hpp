// Exact rationals. Values with numerator and denominator in int64 stay
// inline; anything larger spills to a heap mpq_class and is demoted again
// once it fits.
#ifndef LIPFORGE_RATIONAL_HPP_
#define LIPFORGE_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lipforge {

class Rational {
 public:
  Rational() = default;
  Rational(long long n) { assign_wide(n, 1); }  // NOLINT: implicit by design
  Rational(long n) { assign_wide(n, 1); }       // NOLINT
  Rational(int n) : num_(n) {}                   // NOLINT
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept = default;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept = default;
  ~Rational() = default;

  // Accepts "p", "p/q", optional leading '-'. Throws std::invalid_argument.
  static Rational parse(std::string_view s);
  // 2^e for any integer e.
  static Rational pow2(int e);

  std::string str() const;
  mpq_class to_mpq() const;
  double to_double() const;

  bool is_small() const { return !big_; }
  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;
  Rational abs() const;
  // Numerator/denominator as decimal strings (for diagnostics and hashing).
  std::string num_str() const;
  std::string den_str() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  Rational operator-() const;

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  void assign_wide(__int128 n, __int128 d);  // d > 0, reduced
  void assign_mpq(mpq_class q);
  void demote();

  int64_t num_ = 0;
  int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// (a + b) / 2
Rational midpoint(const Rational& a, const Rational& b);

}  // namespace lipforge

#endif  // LIPFORGE_RATIONAL_HPP_
