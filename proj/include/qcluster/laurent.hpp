#pragma once

// Laurent polynomials in q^{1/2} with arbitrary-precision integer
// coefficients. Exponents are stored doubled: the term (k, c) means c*q^{k/2}.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/error.hpp"

namespace qcluster {

using BigInt = mpz_class;
using Rational = mpq_class;

class QHalfLaurent {
 public:
  using Term = std::pair<std::int64_t, BigInt>;

  QHalfLaurent() = default;
  QHalfLaurent(long constant) : QHalfLaurent(BigInt(constant)) {}
  QHalfLaurent(const BigInt& constant) {
    if (constant != 0) terms_.emplace_back(0, constant);
  }

  /// c * q^{k/2}
  static QHalfLaurent monomial(std::int64_t k, const BigInt& c = 1) {
    QHalfLaurent p;
    if (c != 0) p.terms_.emplace_back(k, c);
    return p;
  }

  /// q^e for an integral exponent e.
  static QHalfLaurent q_power(std::int64_t e) { return monomial(2 * e); }

  /// Builds from arbitrary (k, c) pairs: sorts, merges duplicates and drops zeros.
  static QHalfLaurent from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    QHalfLaurent p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first) {
        p.terms_.back().second += t.second;
        if (p.terms_.back().second == 0) p.terms_.pop_back();
      } else if (t.second != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::int64_t min_q2() const { return terms_.front().first; }
  std::int64_t max_q2() const { return terms_.back().first; }

  BigInt coeff(std::int64_t k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, std::int64_t key) { return t.first < key; });
    if (it != terms_.end() && it->first == k) return it->second;
    return 0;
  }

  bool has_half_exponents() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.first % 2 != 0; });
  }

  /// True when every exponent is a nonnegative integer power of q.
  bool is_polynomial_in_q() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.first >= 0 && t.first % 2 == 0; });
  }

  bool has_nonnegative_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second > 0; });
  }

  /// A single term +-q^{k/2}.
  bool is_unit() const { return terms_.size() == 1 && abs(terms_.front().second) == 1; }

  QHalfLaurent unit_inverse() const {
    require(is_unit(), ErrorCode::DivisionFailed, "coefficient is not a unit of Z[q^{+-1/2}]");
    return monomial(-terms_.front().first, terms_.front().second);
  }

  /// Multiplies by q^{k/2}.
  QHalfLaurent shifted(std::int64_t k) const {
    QHalfLaurent p = *this;
    for (auto& t : p.terms_) t.first += k;
    return p;
  }

  std::size_t max_coeff_bits() const {
    std::size_t bits = 0;
    for (const auto& t : terms_) bits = std::max(bits, mpz_sizeinbase(t.second.get_mpz_t(), 2));
    return bits;
  }

  QHalfLaurent operator-() const {
    QHalfLaurent p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
  }

  QHalfLaurent& operator+=(const QHalfLaurent& rhs) { return *this = combine(*this, rhs, false); }
  QHalfLaurent& operator-=(const QHalfLaurent& rhs) { return *this = combine(*this, rhs, true); }
  QHalfLaurent& operator*=(const QHalfLaurent& rhs) { return *this = multiply(*this, rhs); }

  friend QHalfLaurent operator+(const QHalfLaurent& a, const QHalfLaurent& b) { return combine(a, b, false); }
  friend QHalfLaurent operator-(const QHalfLaurent& a, const QHalfLaurent& b) { return combine(a, b, true); }
  friend QHalfLaurent operator*(const QHalfLaurent& a, const QHalfLaurent& b) { return multiply(a, b); }
  friend bool operator==(const QHalfLaurent& a, const QHalfLaurent& b) { return a.terms_ == b.terms_; }

  /// Accumulates a*b*q^{shift/2} into a dense buffer indexed from `offset`.
  /// The buffer must already cover the full exponent range of the product.
  static void addmul_into(std::vector<BigInt>& buffer, std::int64_t offset, const QHalfLaurent& a,
                          const QHalfLaurent& b, std::int64_t shift) {
    for (const auto& [ka, ca] : a.terms_) {
      const std::int64_t base = ka + shift - offset;
      for (const auto& [kb, cb] : b.terms_) {
        mpz_addmul(buffer[static_cast<std::size_t>(base + kb)].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    }
  }

  static QHalfLaurent from_dense(std::vector<BigInt>& buffer, std::int64_t offset) {
    QHalfLaurent p;
    for (std::size_t i = 0; i < buffer.size(); ++i) {
      if (buffer[i] != 0) p.terms_.emplace_back(offset + static_cast<std::int64_t>(i), std::move(buffer[i]));
    }
    return p;
  }

 private:
  static QHalfLaurent combine(const QHalfLaurent& a, const QHalfLaurent& b, bool subtract) {
    QHalfLaurent out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        out.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        out.terms_.emplace_back(ib->first, subtract ? BigInt(-ib->second) : ib->second);
        ++ib;
      } else {
        BigInt c = subtract ? BigInt(ia->second - ib->second) : BigInt(ia->second + ib->second);
        if (c != 0) out.terms_.emplace_back(ia->first, std::move(c));
        ++ia;
        ++ib;
      }
    }
    return out;
  }

  static QHalfLaurent multiply(const QHalfLaurent& a, const QHalfLaurent& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const std::int64_t lo = a.min_q2() + b.min_q2();
    const std::int64_t hi = a.max_q2() + b.max_q2();
    const auto pairs = static_cast<std::int64_t>(a.size() * b.size());
    if (hi - lo + 1 <= 4 * pairs + 64) {
      std::vector<BigInt> buffer(static_cast<std::size_t>(hi - lo + 1));
      addmul_into(buffer, lo, a, b, 0);
      return from_dense(buffer, lo);
    }
    std::vector<Term> raw;
    raw.reserve(static_cast<std::size_t>(pairs));
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) raw.emplace_back(ka + kb, ca * cb);
    return from_terms(std::move(raw));
  }

  std::vector<Term> terms_;
};

inline QHalfLaurent operator*(const BigInt& c, const QHalfLaurent& p) { return QHalfLaurent(c) * p; }

/// A Laurent polynomial constrained to Z[q]: integral, nonnegative exponents.
class QPolynomial {
 public:
  QPolynomial() = default;
  QPolynomial(long constant) : value_(constant) {}
  explicit QPolynomial(QHalfLaurent value) : value_(std::move(value)) {
    require(value_.is_polynomial_in_q(), ErrorCode::InvalidParameter,
            "Laurent polynomial is not a polynomial in q");
  }

  /// sum_i coeffs[i] * q^i
  static QPolynomial from_coefficients(const std::vector<BigInt>& coeffs) {
    std::vector<QHalfLaurent::Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) terms.emplace_back(2 * static_cast<std::int64_t>(i), coeffs[i]);
    return QPolynomial(QHalfLaurent::from_terms(std::move(terms)));
  }

  const QHalfLaurent& laurent() const noexcept { return value_; }
  operator const QHalfLaurent&() const noexcept { return value_; }

  bool is_zero() const noexcept { return value_.is_zero(); }
  /// -1 for the zero polynomial.
  std::int64_t degree() const { return value_.is_zero() ? -1 : value_.max_q2() / 2; }
  BigInt coeff(std::int64_t e) const { return value_.coeff(2 * e); }

  friend QPolynomial operator+(const QPolynomial& a, const QPolynomial& b) { return trusted(a.value_ + b.value_); }
  friend QPolynomial operator-(const QPolynomial& a, const QPolynomial& b) { return trusted(a.value_ - b.value_); }
  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) { return trusted(a.value_ * b.value_); }
  friend bool operator==(const QPolynomial& a, const QPolynomial& b) { return a.value_ == b.value_; }

  /// Multiplies by q^e, e >= 0.
  QPolynomial times_q_power(std::int64_t e) const { return trusted(value_.shifted(2 * e)); }

 private:
  static QPolynomial trusted(QHalfLaurent v) {
    QPolynomial p;
    p.value_ = std::move(v);
    return p;
  }

  QHalfLaurent value_;
};

namespace detail {

inline bool rational_sqrt(const Rational& v, Rational& root) {
  if (v < 0) return false;
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  root = Rational(sn, sd);
  root.canonicalize();
  return true;
}

inline Rational rational_pow(const Rational& base, std::int64_t e) {
  if (e == 0) return 1;
  const auto mag = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num().get_mpz_t(), mag);
  mpz_pow_ui(d.get_mpz_t(), base.get_den().get_mpz_t(), mag);
  Rational out = e > 0 ? Rational(n, d) : Rational(d, n);
  out.canonicalize();
  return out;
}

}  // namespace detail

/// Value of p at q = v. Half-integral exponents need sqrt(v) to be rational.
inline Rational evaluate(const QHalfLaurent& p, const Rational& v) {
  if (p.is_zero()) return 0;
  Rational base = v;
  std::int64_t step = 2;  // exponent units per power of `base`
  if (p.has_half_exponents()) {
    if (!detail::rational_sqrt(v, base))
      fail(ErrorCode::NonIntegralEvaluation, "q^{1/2} is irrational at q = " + v.get_str());
    step = 1;
  }
  if (base == 0) {
    require(p.min_q2() >= 0, ErrorCode::InvalidParameter, "negative power of q evaluated at q = 0");
  }
  // Horner from the top exponent down.
  const auto& terms = p.terms();
  Rational acc = 0;
  std::int64_t prev = terms.back().first;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    acc *= detail::rational_pow(base, (prev - it->first) / step);
    acc += Rational(it->second);
    prev = it->first;
  }
  acc *= detail::rational_pow(base, prev / step);
  acc.canonicalize();
  return acc;
}

inline Rational evaluate(const QHalfLaurent& p, long v) { return evaluate(p, Rational(v)); }

/// Inverts q -> q^r: returns P with P(q^r) = p.
inline QPolynomial compress_power(const QHalfLaurent& p, std::int64_t r) {
  require(r >= 1, ErrorCode::InvalidParameter, "compression factor must be positive");
  std::vector<QHalfLaurent::Term> terms;
  terms.reserve(p.size());
  for (const auto& [k, c] : p.terms()) {
    if (k < 0 || k % (2 * r) != 0)
      fail(ErrorCode::NotAPowerSeriesInQr,
           "exponent " + std::to_string(k) + "/2 is not a nonnegative multiple of " + std::to_string(r));
    terms.emplace_back(k / r, c);
  }
  return QPolynomial(QHalfLaurent::from_terms(std::move(terms)));
}

namespace detail {

inline std::string exponent_text(std::int64_t k) {
  if (k % 2 != 0) return "(" + std::to_string(k) + "/2)";
  const std::int64_t e = k / 2;
  return e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e);
}

}  // namespace detail

/// Canonical form: ascending exponents, every term as c*q^(k/2) (integral
/// exponents without the /2), e.g. "1 + 2*q^(1/2) - 3*q^2".
inline std::string to_string(const QHalfLaurent& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << mag.get_str();
    if (k != 0) out << "*q^" << detail::exponent_text(k);
    first = false;
  }
  return out.str();
}

/// Human form in descending exponents with unit coefficients elided, e.g.
/// "q^73 + 2q^72 - 5q^58 + q + 1".
inline std::string to_pretty(const QHalfLaurent& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  const auto& terms = p.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [k, c] = *it;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (k == 0) {
      out << mag.get_str();
    } else {
      if (mag != 1) out << mag.get_str();
      out << "q";
      if (k != 2) out << "^" << detail::exponent_text(k);
    }
    first = false;
  }
  return out.str();
}

inline std::ostream& operator<<(std::ostream& os, const QHalfLaurent& p) { return os << to_string(p); }
inline std::ostream& operator<<(std::ostream& os, const QPolynomial& p) { return os << to_string(p.laurent()); }

}  // namespace qcluster
