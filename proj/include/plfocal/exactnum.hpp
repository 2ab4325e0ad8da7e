// Exact numbers: rationals, dyadics, finitely generated slope groups and
// lexicographic preorders on their exponent lattices.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "plfocal/error.hpp"

namespace plfocal {

enum class Sign { Negative = -1, Residue = 0, Positive = 1 };

inline Sign negate(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Residue: return "Residue";
    case Sign::Positive: return "Positive";
  }
  return "?";
}

template <class T>
Sign sign_of(const T& v) {
  return v > 0 ? Sign::Positive : (v < 0 ? Sign::Negative : Sign::Residue);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline mpz_class parse_integer(const std::string& raw) {
  std::string s = trim(raw);
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  bool ok = !s.empty();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 0 && s[i] == '-' && s.size() > 1) continue;
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) ok = false;
  }
  if (!ok) throw Error(ErrorCode::ParseError, "not an integer: '" + raw + "'");
  return mpz_class(s, 10);
}

}  // namespace detail

// p/q with gcd(p,q)=1 and q>0.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(int n) : v_(static_cast<long>(n)) {}  // NOLINT
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& p, const mpz_class& q) {
    if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    v_ = mpq_class(p, q);
    v_.canonicalize();
  }
  Rational(long p, long q) : Rational(mpz_class(p), mpz_class(q)) {}
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  static Rational pow2(long k) {
    mpz_class one = 1;
    if (k >= 0) return Rational(mpz_class(one << static_cast<unsigned long>(k)));
    return Rational(one, mpz_class(one << static_cast<unsigned long>(-k)));
  }

  static Rational power(const Rational& base, long k) {
    Rational r(1);
    Rational b = k >= 0 ? base : Rational(1) / base;
    unsigned long e = static_cast<unsigned long>(k >= 0 ? k : -k);
    while (e) {
      if (e & 1UL) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }
  int sgn() const { return ::sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  bool is_dyadic() const {
    mpz_class d = v_.get_den();
    return mpz_popcount(d.get_mpz_t()) == 1;
  }
  mpz_class floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
  }
  mpz_class ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
  }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Canon{}, mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Canon{}, mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Canon{}, mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.v_ == 0) throw Error(ErrorCode::OutOfDomain, "division by zero");
    return Rational(Canon{}, mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(Canon{}, mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // Canonical text "p/q" (the denominator is always printed).
  std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }
  // Short form: "p" when q = 1.
  std::string short_str() const { return is_integer() ? v_.get_num().get_str() : str(); }

  static Rational parse(const std::string& raw);

 private:
  // Results of gmp arithmetic are already canonical; the tag skips the re-check.
  struct Canon {};
  Rational(Canon, mpq_class&& v) : v_(std::move(v)) {}
  mpq_class v_;
};

inline std::string to_string(const Rational& r) { return r.str(); }

// Non-negative exponent with canonical form exp = 0 or num odd.
class Dyadic {
 public:
  Dyadic() : num_(0), exp_(0) {}
  Dyadic(long n) : num_(n), exp_(0) {}  // NOLINT
  Dyadic(const mpz_class& num, unsigned long exp) : num_(num), exp_(exp) { normalize(); }
  explicit Dyadic(const Rational& r) {
    if (!r.is_dyadic()) throw Error(ErrorCode::NonDyadicMap, "not a dyadic rational: " + r.str());
    num_ = r.num();
    exp_ = mpz_sizeinbase(r.den().get_mpz_t(), 2) - 1;
  }

  const mpz_class& num() const { return num_; }
  unsigned long exp() const { return exp_; }
  Rational to_rational() const { return Rational(num_, mpz_class(mpz_class(1) << exp_)); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned long e = std::max(a.exp_, b.exp_);
    mpz_class x = a.num_ << (e - a.exp_);
    mpz_class y = b.num_ << (e - b.exp_);
    return Dyadic(mpz_class(x + y), e);
  }
  Dyadic operator-() const { return Dyadic(mpz_class(-num_), exp_); }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(mpz_class(a.num_ * b.num_), a.exp_ + b.exp_);
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num_ == b.num_ && a.exp_ == b.exp_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    return a.to_rational() <=> b.to_rational();
  }

  std::string str() const { return num_.get_str() + "/2^" + std::to_string(exp_); }

  static Dyadic parse(const std::string& raw) { return Dyadic(Rational::parse(raw)); }

 private:
  void normalize() {
    if (num_ == 0) { exp_ = 0; return; }
    unsigned long tz = mpz_scan1(num_.get_mpz_t(), 0);
    unsigned long k = std::min(tz, exp_);
    num_ >>= k;
    exp_ -= k;
  }
  mpz_class num_;
  unsigned long exp_;
};

inline std::string to_string(const Dyadic& d) { return d.str(); }

// Accepts "p/q", "p", and the dyadic form "num/2^exp".
inline Rational Rational::parse(const std::string& raw) {
  std::string s = detail::trim(raw);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(detail::parse_integer(s));
  std::string a = s.substr(0, slash), b = detail::trim(s.substr(slash + 1));
  if (b.rfind("2^", 0) == 0) {
    mpz_class e = detail::parse_integer(b.substr(2));
    if (e < 0) throw Error(ErrorCode::ParseError, "negative dyadic exponent: '" + raw + "'");
    return Rational(detail::parse_integer(a), mpz_class(mpz_class(1) << e.get_ui()));
  }
  mpz_class q = detail::parse_integer(b);
  if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + raw + "'");
  return Rational(detail::parse_integer(a), q);
}

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return std::hash<std::string>()(r.str()); }
};

using ExpVec = std::vector<long>;

// Prime factorization by trial division; adequate for the small slopes used here.
inline std::map<mpz_class, long> factorize(mpz_class n) {
  std::map<mpz_class, long> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (mpz_class p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

// p-adic valuation of a nonzero rational.
inline long valuation(const Rational& r, const mpz_class& p) {
  if (r.sgn() == 0) throw Error(ErrorCode::OutOfDomain, "valuation of zero");
  long v = 0;
  mpz_class a = r.num(), b = r.den();
  while (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) { a /= p; ++v; }
  while (mpz_divisible_p(b.get_mpz_t(), p.get_mpz_t())) { b /= p; --v; }
  return v;
}

namespace detail {

// Solves M v = e over the rationals. M has full column rank (checked by the
// caller); returns false if the system is inconsistent.
inline bool solve_full_rank(std::vector<std::vector<Rational>> m, std::vector<Rational> e,
                            std::vector<Rational>& out) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].sgn() == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    std::swap(e[p], e[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].sgn() == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      e[i] -= f * e[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (e[i].sgn() != 0) return false;
  out.assign(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) out[pivot_col[i]] = e[i] / m[i][pivot_col[i]];
  return true;
}

inline std::size_t rank_of(std::vector<std::vector<Rational>> m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].sgn() == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].sgn() == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace detail

// Multiplicative subgroup of Q_{>0} with independent rational generators.
class SlopeGroup {
 public:
  SlopeGroup() : SlopeGroup(std::vector<Rational>{Rational(2)}) {}
  explicit SlopeGroup(std::vector<Rational> generators) : gens_(std::move(generators)) {
    if (gens_.empty()) throw Error(ErrorCode::IndependenceViolation, "slope group needs at least one generator");
    std::map<mpz_class, int> seen;
    for (const auto& g : gens_) {
      if (g.sgn() <= 0) throw Error(ErrorCode::IndependenceViolation, "generator must be positive: " + g.str());
      for (auto& [p, e] : factorize(g.num())) seen[p] = 1;
      for (auto& [p, e] : factorize(g.den())) seen[p] = 1;
    }
    for (auto& [p, one] : seen) primes_.push_back(p);
    matrix_.assign(primes_.size(), std::vector<Rational>(gens_.size()));
    for (std::size_t i = 0; i < primes_.size(); ++i)
      for (std::size_t j = 0; j < gens_.size(); ++j) matrix_[i][j] = Rational(valuation(gens_[j], primes_[i]));
    if (detail::rank_of(matrix_) != gens_.size())
      throw Error(ErrorCode::IndependenceViolation, "generators are multiplicatively dependent");
  }

  std::size_t rank() const { return gens_.size(); }
  const std::vector<Rational>& generators() const { return gens_; }

  // Exponent vector v with prod generators[i]^v[i] = r.
  ExpVec decompose(const Rational& r) const {
    if (r.sgn() <= 0) throw Error(ErrorCode::NotInGroup, "non-positive value " + r.str());
    if (gens_.size() == 1 && primes_.size() == 1) {
      // Single prime power generator: one valuation suffices.
      long vr = valuation(r, primes_[0]);
      long vg = valuation(gens_[0], primes_[0]);
      if (vr % vg != 0 || Rational::power(Rational(primes_[0]), vr) != r)
        throw Error(ErrorCode::NotInGroup, r.str() + " is not in the slope group");
      return ExpVec{vr / vg};
    }
    std::vector<Rational> rhs(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) rhs[i] = Rational(valuation(r, primes_[i]));
    std::vector<Rational> sol;
    if (!detail::solve_full_rank(matrix_, rhs, sol)) throw Error(ErrorCode::NotInGroup, r.str() + " is not in the slope group");
    ExpVec v(sol.size());
    for (std::size_t j = 0; j < sol.size(); ++j) {
      if (!sol[j].is_integer()) throw Error(ErrorCode::NotInGroup, r.str() + " is not in the slope group");
      v[j] = sol[j].num().get_si();
    }
    if (compose(v) != r) throw Error(ErrorCode::NotInGroup, r.str() + " is not in the slope group");
    return v;
  }

  bool contains(const Rational& r) const {
    try {
      decompose(r);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  Rational compose(const ExpVec& v) const {
    if (v.size() != gens_.size()) throw Error(ErrorCode::DimensionMismatch, "exponent vector has wrong length");
    Rational r(1);
    for (std::size_t j = 0; j < v.size(); ++j) r *= Rational::power(gens_[j], v[j]);
    return r;
  }

 private:
  std::vector<Rational> gens_;
  std::vector<mpz_class> primes_;
  std::vector<std::vector<Rational>> matrix_;
};

inline ExpVec slope_decompose(const Rational& r, const SlopeGroup& group) { return group.decompose(r); }

// Lexicographic stack of integer functionals on Z^k.
class LatticePreorder {
 public:
  LatticePreorder(std::size_t dim, std::vector<ExpVec> rows) : dim_(dim), rows_(std::move(rows)) {
    for (const auto& r : rows_)
      if (r.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "functional has wrong length");
  }

  // Lexicographic order on coordinates: total, trivial residue.
  static LatticePreorder standard(std::size_t dim) {
    std::vector<ExpVec> rows;
    for (std::size_t i = 0; i < dim; ++i) {
      ExpVec r(dim, 0);
      r[i] = 1;
      rows.push_back(r);
    }
    return LatticePreorder(dim, rows);
  }

  LatticePreorder opposite() const {
    std::vector<ExpVec> rows = rows_;
    for (auto& r : rows)
      for (auto& x : r) x = -x;
    return LatticePreorder(dim_, rows);
  }

  std::size_t dim() const { return dim_; }
  const std::vector<ExpVec>& rows() const { return rows_; }

  // Trivial residue: the functionals have full rank.
  bool is_total() const {
    std::vector<std::vector<Rational>> m;
    for (const auto& r : rows_) {
      std::vector<Rational> row;
      for (long x : r) row.emplace_back(x);
      m.push_back(row);
    }
    return !m.empty() && detail::rank_of(m) == dim_;
  }

  Sign sign(const ExpVec& v) const {
    if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "vector has wrong length");
    for (const auto& r : rows_) {
      long s = 0;
      for (std::size_t i = 0; i < dim_; ++i) s += r[i] * v[i];
      if (s != 0) return sign_of(s);
    }
    return Sign::Residue;
  }

  // Values of all functionals; two vectors are residue-equivalent iff these agree.
  ExpVec residue_class(const ExpVec& v) const {
    ExpVec out;
    for (const auto& r : rows_) {
      long s = 0;
      for (std::size_t i = 0; i < dim_; ++i) s += r[i] * v[i];
      out.push_back(s);
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<ExpVec> rows_;
};

inline Sign lattice_sign(const ExpVec& v, const LatticePreorder& order) { return order.sign(v); }

namespace detail {

// Membership of a rational in Z[1/n].
inline bool in_localization(const Rational& x, const mpz_class& n) {
  mpz_class d = x.den(), g;
  for (;;) {
    if (d == 1) return true;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return false;
    while (mpz_divisible_p(d.get_mpz_t(), g.get_mpz_t())) d /= g;
  }
}

}  // namespace detail

// |A / (lambda-1) A| for lambda = p/q and A = Z[lambda, 1/lambda], by
// enumerating a/(pq)^m and counting classes modulo (lambda-1)A. The bound
// doubles until two consecutive rounds report the same count.
inline long module_index(long p, long q) {
  if (p == q) throw Error(ErrorCode::DegenerateSlope, "lambda = 1");
  if (q < 1 || p <= q) throw Error(ErrorCode::OutOfDomain, "expected p > q >= 1");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), mpz_class(p).get_mpz_t(), mpz_class(q).get_mpz_t());
  if (g != 1) throw Error(ErrorCode::OutOfDomain, "expected gcd(p,q) = 1");
  // A = Z[1/(pq)] because ap + bq = 1 gives 1/q = a(p/q) + b.
  const mpz_class unit = mpz_class(p) * q;
  const Rational lam_minus_one = Rational(mpz_class(p - q), mpz_class(q));
  auto same_class = [&](const Rational& x, const Rational& y) {
    return detail::in_localization((x - y) / lam_minus_one, unit);
  };
  long previous = -1;
  for (long bound = 1;; bound *= 2) {
    std::vector<Rational> reps;
    for (long m = 0; m <= bound; ++m) {
      mpz_class denom;
      mpz_pow_ui(denom.get_mpz_t(), unit.get_mpz_t(), static_cast<unsigned long>(m));
      for (long a = -bound; a <= bound; ++a) {
        Rational x(mpz_class(a), denom);
        bool fresh = true;
        for (const auto& r : reps)
          if (same_class(x, r)) { fresh = false; break; }
        if (fresh) reps.push_back(x);
      }
    }
    long count = static_cast<long>(reps.size());
    if (count == previous) return count;
    previous = count;
  }
}

}  // namespace plfocal
