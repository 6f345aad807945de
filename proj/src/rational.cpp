#include "lipforge/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace lipforge {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

bool fits(i128 v) { return v <= kMax && v >= -kMax; }

uint64_t uabs(int64_t v) {
  return v < 0 ? uint64_t(0) - uint64_t(v) : uint64_t(v);
}

u128 uabs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void set_mpz(mpz_class& z, i128 v) {
  u128 m = uabs128(v);
  uint64_t hi = uint64_t(m >> 64), lo = uint64_t(m);
  mpz_set_ui(z.get_mpz_t(), hi);
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 64);
  mpz_class l;
  mpz_set_ui(l.get_mpz_t(), lo);
  z += l;
  if (v < 0) z = -z;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  assign_wide(0, 1);
  i128 nn = n, dd = d;
  if (dd < 0) {
    nn = -nn;
    dd = -dd;
  }
  u128 g = gcd128(uabs128(nn), u128(dd));
  if (g > 1) {
    nn /= i128(g);
    dd /= i128(g);
  }
  assign_wide(nn, dd);
}

Rational::Rational(const mpq_class& q) { assign_mpq(q); }

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
  if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  num_ = o.num_;
  den_ = o.den_;
  if (o.big_) {
    if (big_)
      *big_ = *o.big_;
    else
      big_ = std::make_unique<mpq_class>(*o.big_);
  } else {
    big_.reset();
  }
  return *this;
}

void Rational::assign_wide(i128 n, i128 d) {
  if (fits(n) && fits(d)) {
    num_ = int64_t(n);
    den_ = int64_t(d);
    big_.reset();
    return;
  }
  mpz_class zn, zd;
  set_mpz(zn, n);
  set_mpz(zd, d);
  big_ = std::make_unique<mpq_class>(zn, zd);
  num_ = 0;
  den_ = 1;
}

void Rational::assign_mpq(mpq_class q) {
  q.canonicalize();
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
      q.get_num() != std::numeric_limits<long>::min()) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(std::move(q));
    num_ = 0;
    den_ = 1;
  }
}

void Rational::demote() {
  if (big_) assign_mpq(*big_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  mpq_set_si(q.get_mpq_t(), long(num_), static_cast<unsigned long>(den_));
  return q;
}

Rational Rational::parse(std::string_view s) {
  auto bad = [&] {
    return std::invalid_argument("malformed rational literal '" +
                                 std::string(s) + "'");
  };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string_view ns = s.substr(0, slash);
  std::string_view ds = slash == std::string_view::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(ns, true) || !digits_ok(ds, false)) throw bad();
  std::string nstr(ns);
  if (nstr[0] == '+') nstr.erase(0, 1);
  mpz_class n(nstr, 10), d(std::string(ds), 10);
  if (d == 0) throw bad();
  Rational r;
  r.assign_mpq(mpq_class(n, d));
  return r;
}

Rational Rational::pow2(int e) {
  if (e >= 0 && e < 62) return Rational((long long)(1LL << e));
  if (e < 0 && e > -62) return Rational(1, (long long)(1LL << -e));
  mpz_class z = 1;
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), unsigned(e < 0 ? -e : e));
  return e < 0 ? Rational(mpq_class(mpz_class(1), z)) : Rational(mpq_class(z));
}

std::string Rational::str() const {
  if (big_) {
    if (big_->get_den() == 1) return big_->get_num().get_str();
    return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  }
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::num_str() const {
  return big_ ? big_->get_num().get_str() : std::to_string(num_);
}

std::string Rational::den_str() const {
  return big_ ? big_->get_den().get_str() : std::to_string(den_);
}

double Rational::to_double() const {
  return big_ ? big_->get_d() : double(num_) / double(den_);
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
  return big_ ? big_->get_den() == 1 : den_ == 1;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_)
    *r.big_ = -*r.big_;
  else
    r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    // Knuth's reduced addition; intermediates stay inside 128 bits.
    uint64_t g = std::gcd(uint64_t(den_), uint64_t(o.den_));
    if (g == 1) {
      i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
      i128 d = i128(den_) * o.den_;
      assign_wide(n, d);
      return *this;
    }
    i128 t = i128(num_) * (o.den_ / int64_t(g)) + i128(o.num_) * (den_ / int64_t(g));
    uint64_t g2 = std::gcd(uint64_t(uabs128(t) % g), g);
    i128 n = t / i128(g2);
    i128 d = i128(den_ / int64_t(g)) * (o.den_ / int64_t(g2));
    assign_wide(n, d);
    return *this;
  }
  assign_mpq(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (num_ == 0 || o.num_ == 0) {
      assign_wide(0, 1);
      return *this;
    }
    int64_t g1 = int64_t(std::gcd(uabs(num_), uint64_t(o.den_)));
    int64_t g2 = int64_t(std::gcd(uabs(o.num_), uint64_t(den_)));
    i128 n = i128(num_ / g1) * (o.num_ / g2);
    i128 d = i128(den_ / g2) * (o.den_ / g1);
    assign_wide(n, d);
    return *this;
  }
  assign_mpq(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  if (!big_ && !o.big_) {
    int64_t on = o.num_, od = o.den_;
    if (on < 0) {
      on = -on;
      od = -od;
    }
    Rational inv;
    inv.num_ = od;
    inv.den_ = on;
    return *this *= inv;
  }
  assign_mpq(to_mpq() / o.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: a big value never fits inline
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    i128 l = i128(a.num_) * b.den_, r = i128(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.str();
}

Rational midpoint(const Rational& a, const Rational& b) {
  return (a + b) * Rational(1, 2);
}

}  // namespace lipforge
