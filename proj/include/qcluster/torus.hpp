#pragma once

// The quantum torus over Z[q^{+-1/2}] generated by X1^{+-1}, X2^{+-1} with
// X1 X2 = q X2 X1. Elements are kept in the normal form
// sum c_{a,b} X1^a X2^b, coefficient on the left, X1 before X2.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"

namespace qcluster {

struct Exponent {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  friend auto operator<=>(const Exponent&, const Exponent&) = default;
  friend Exponent operator+(Exponent a, Exponent b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Exponent operator-(Exponent a, Exponent b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
};

/// q-twist, in half-exponent units, of (X1^a X2^b)(X1^c X2^d) = q^{-bc} X1^{a+c} X2^{b+d}.
constexpr std::int64_t twist_q2(Exponent lhs, Exponent rhs) { return -2 * lhs.x2 * rhs.x1; }

/// The ordered word x^a y^b in the noncommutative alphabet {x, y}.
struct WordMonomial {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend bool operator==(const WordMonomial&, const WordMonomial&) = default;
};

class TorusElement {
 public:
  using TermMap = std::map<Exponent, QHalfLaurent>;

  TorusElement() = default;

  static TorusElement monomial(Exponent e, QHalfLaurent coeff = QHalfLaurent(1)) {
    TorusElement t;
    if (!coeff.is_zero()) t.terms_.emplace(e, std::move(coeff));
    return t;
  }
  static TorusElement scalar(QHalfLaurent coeff) { return monomial({0, 0}, std::move(coeff)); }
  static TorusElement one() { return scalar(QHalfLaurent(1)); }
  static TorusElement x1() { return monomial({1, 0}); }
  static TorusElement x2() { return monomial({0, 1}); }

  /// Takes ownership of a term map, dropping zero coefficients.
  static TorusElement from_terms(TermMap terms) {
    TorusElement t;
    for (auto it = terms.begin(); it != terms.end();) {
      it = it->second.is_zero() ? terms.erase(it) : std::next(it);
    }
    t.terms_ = std::move(terms);
    return t;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  QHalfLaurent coeff(Exponent e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? QHalfLaurent() : it->second;
  }

  /// Lexicographically largest exponent (x1 first).
  Exponent leading() const {
    require(!is_zero(), ErrorCode::InvalidParameter, "zero element has no leading term");
    return terms_.rbegin()->first;
  }

  /// Componentwise min and max of the support.
  std::pair<Exponent, Exponent> support_box() const {
    require(!is_zero(), ErrorCode::InvalidParameter, "zero element has empty support");
    Exponent lo = terms_.begin()->first, hi = lo;
    for (const auto& [e, c] : terms_) {
      lo = {std::min(lo.x1, e.x1), std::min(lo.x2, e.x2)};
      hi = {std::max(hi.x1, e.x1), std::max(hi.x2, e.x2)};
    }
    return {lo, hi};
  }

  std::size_t max_coeff_bits() const {
    std::size_t bits = 0;
    for (const auto& [e, c] : terms_) bits = std::max(bits, c.max_coeff_bits());
    return bits;
  }

  bool has_nonnegative_coefficients() const {
    for (const auto& [e, c] : terms_)
      if (!c.has_nonnegative_coefficients()) return false;
    return true;
  }

  void add_term(Exponent e, const QHalfLaurent& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  TorusElement& operator+=(const TorusElement& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
  }
  TorusElement& operator-=(const TorusElement& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
  }

  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend bool operator==(const TorusElement& a, const TorusElement& b) { return a.terms_ == b.terms_; }

  /// Left multiplication by a central scalar.
  friend TorusElement operator*(const QHalfLaurent& s, const TorusElement& t) {
    TorusElement out;
    if (s.is_zero()) return out;
    for (const auto& [e, c] : t.terms_) out.terms_.emplace(e, s * c);
    return out;
  }

  /// Multiplies every coefficient by q^{k/2}.
  TorusElement shifted(std::int64_t k) const {
    TorusElement out = *this;
    for (auto& [e, c] : out.terms_) c = c.shifted(k);
    return out;
  }

 private:
  TermMap terms_;
};

namespace detail {

// Dense accumulator for one output monomial of a product.
struct DenseCoeff {
  std::int64_t offset = 0;
  std::vector<BigInt> data;

  void ensure(std::int64_t lo, std::int64_t hi) {
    if (data.empty()) {
      offset = lo;
      data.resize(static_cast<std::size_t>(hi - lo + 1));
      return;
    }
    const std::int64_t cur_hi = offset + static_cast<std::int64_t>(data.size()) - 1;
    if (lo < offset) {
      data.insert(data.begin(), static_cast<std::size_t>(offset - lo), BigInt());
      offset = lo;
    }
    if (hi > cur_hi) data.resize(static_cast<std::size_t>(hi - offset + 1));
  }
};

}  // namespace detail

/// Normal-form product.
inline TorusElement t_mul(const TorusElement& lhs, const TorusElement& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::map<Exponent, detail::DenseCoeff> acc;
  for (const auto& [ea, ca] : lhs.terms()) {
    for (const auto& [eb, cb] : rhs.terms()) {
      const std::int64_t shift = twist_q2(ea, eb);
      auto& slot = acc[ea + eb];
      slot.ensure(ca.min_q2() + cb.min_q2() + shift, ca.max_q2() + cb.max_q2() + shift);
      QHalfLaurent::addmul_into(slot.data, slot.offset, ca, cb, shift);
    }
  }
  TorusElement::TermMap out;
  for (auto& [e, slot] : acc) {
    QHalfLaurent c = QHalfLaurent::from_dense(slot.data, slot.offset);
    if (!c.is_zero()) out.emplace_hint(out.end(), e, std::move(c));
  }
  return TorusElement::from_terms(std::move(out));
}

inline TorusElement operator*(const TorusElement& a, const TorusElement& b) { return t_mul(a, b); }

/// e^i by repeated squaring.
inline TorusElement t_pow(const TorusElement& e, std::int64_t i) {
  require(i >= 0, ErrorCode::InvalidParameter, "negative power in t_pow");
  TorusElement result = TorusElement::one();
  TorusElement base = e;
  while (i > 0) {
    if (i & 1) result = t_mul(result, base);
    i >>= 1;
    if (i > 0) base = t_mul(base, base);
  }
  return result;
}

/// phi(x) = q^{1/2} X1, phi(y) = q^{-1/2} X2, so phi(x^a y^b) = q^{(a-b)/2} X1^a X2^b.
inline TorusElement phi(WordMonomial w) {
  return TorusElement::monomial({w.a, w.b}, QHalfLaurent::monomial(w.a - w.b));
}

/// Solves d * Z = n exactly by greedy elimination of lex-leading terms.
///
/// Throws DivisionFailed when the leading coefficient of d is not a unit,
/// when a quotient term leaves the support box
/// [min(n) - max(d), max(n) - min(d)], or when the remainder cannot vanish.
inline TorusElement left_divide(const TorusElement& d, const TorusElement& n) {
  require(!d.is_zero(), ErrorCode::DivisionFailed, "division by zero");
  if (n.is_zero()) return {};
  const Exponent lead = d.leading();
  const QHalfLaurent& lead_coeff = d.terms().rbegin()->second;
  if (!lead_coeff.is_unit()) fail(ErrorCode::DivisionFailed, "leading coefficient of the divisor is not a unit");
  const QHalfLaurent lead_inverse = lead_coeff.unit_inverse();

  const auto [d_lo, d_hi] = d.support_box();
  const auto [n_lo, n_hi] = n.support_box();
  const Exponent box_lo = n_lo - d_hi;
  const Exponent box_hi = n_hi - d_lo;

  TorusElement::TermMap remainder = n.terms();
  TorusElement::TermMap quotient;
  while (!remainder.empty()) {
    auto top = std::prev(remainder.end());
    const Exponent qe = top->first - lead;
    if (qe.x1 < box_lo.x1 || qe.x1 > box_hi.x1 || qe.x2 < box_lo.x2 || qe.x2 > box_hi.x2)
      fail(ErrorCode::DivisionFailed, "quotient term escapes the support box; no exact quotient exists");
    // lead_coeff * z * q^{twist(lead, qe)} = top coefficient
    QHalfLaurent z = (lead_inverse * top->second).shifted(-twist_q2(lead, qe));
    for (const auto& [de, dc] : d.terms()) {
      QHalfLaurent delta = (dc * z).shifted(twist_q2(de, qe));
      auto [it, inserted] = remainder.try_emplace(de + qe, -delta);
      if (!inserted) {
        it->second -= delta;
        if (it->second.is_zero()) remainder.erase(it);
      }
    }
    quotient.emplace(qe, std::move(z));
  }
  return TorusElement::from_terms(std::move(quotient));
}

inline std::string to_string(const TorusElement& t) {
  if (t.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : t.terms()) {
    if (!first) out += " + ";
    out += "(" + to_string(c) + ")";
    if (e.x1 != 0) out += "*X1^" + (e.x1 < 0 ? "(" + std::to_string(e.x1) + ")" : std::to_string(e.x1));
    if (e.x2 != 0) out += "*X2^" + (e.x2 < 0 ? "(" + std::to_string(e.x2) + ")" : std::to_string(e.x2));
    first = false;
  }
  return out;
}

}  // namespace qcluster
