#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "qcluster/torus.hpp"

using namespace qcluster;

namespace {

// Word oracle: a monomial is a sequence of letters X1^{+-1}, X2^{+-1} with a
// scalar q-power. Normalizes by adjacent swaps X2^s X1^t -> q^{-st} X1^t X2^s.
struct Letter {
  int gen;  // 1 or 2
  int sign;
};

std::pair<std::int64_t, Exponent> normalize(std::vector<Letter> word) {
  std::int64_t q2 = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i].gen == 2 && word[i + 1].gen == 1) {
        q2 -= 2 * word[i].sign * word[i + 1].sign;
        std::swap(word[i], word[i + 1]);
        changed = true;
      }
    }
  }
  Exponent e{0, 0};
  for (const Letter& l : word) (l.gen == 1 ? e.x1 : e.x2) += l.sign;
  return {q2, e};
}

std::vector<Letter> spell(Exponent e) {
  std::vector<Letter> w;
  for (int i = 0; i < std::abs(e.x1); ++i) w.push_back({1, e.x1 > 0 ? 1 : -1});
  for (int i = 0; i < std::abs(e.x2); ++i) w.push_back({2, e.x2 > 0 ? 1 : -1});
  return w;
}

QHalfLaurent random_coeff(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3), k(-4, 4), c(-4, 4);
  std::vector<QHalfLaurent::Term> t;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) t.emplace_back(k(rng), BigInt(c(rng)));
  return QHalfLaurent::from_terms(std::move(t));
}

TorusElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4), e(-3, 3);
  TorusElement out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) out.add_term({e(rng), e(rng)}, random_coeff(rng));
  return out;
}

const QHalfLaurent q = QHalfLaurent::monomial(2);

}  // namespace

TEST_CASE("product of normal-form monomials") {
  const TorusElement x1x2 = TorusElement::monomial({1, 1});
  CHECK(x1x2 * x1x2 == TorusElement::monomial({2, 2}, QHalfLaurent::monomial(-2)));
  CHECK(TorusElement::x1() * TorusElement::x2() == (q * (TorusElement::x2() * TorusElement::x1())));
  CHECK(TorusElement::x2() * TorusElement::x1() == TorusElement::monomial({1, 1}, QHalfLaurent::monomial(-2)));
}

TEST_CASE("multiplication agrees with the word normalizer") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int t = 0; t < 400; ++t) {
    const Exponent a{e(rng), e(rng)}, b{e(rng), e(rng)};
    std::vector<Letter> word = spell(a);
    const std::vector<Letter> tail = spell(b);
    word.insert(word.end(), tail.begin(), tail.end());
    auto [q2, ex] = normalize(word);
    CHECK(TorusElement::monomial(a) * TorusElement::monomial(b) == TorusElement::monomial(ex, QHalfLaurent::monomial(q2)));
  }
}

TEST_CASE("identity and conjugation by X1") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const TorusElement a = random_element(rng);
    CHECK(TorusElement::one() * a == a);
    CHECK(a * TorusElement::one() == a);
  }
  const TorusElement x1inv = TorusElement::monomial({-1, 0});
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      const TorusElement m = TorusElement::monomial({a, b});
      CHECK(TorusElement::x1() * m * x1inv == m.shifted(2 * b));
    }
}

TEST_CASE("associativity and distributivity on random triples") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 250; ++t) {
    const TorusElement a = random_element(rng), b = random_element(rng), c = random_element(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) * c == a * c + b * c);
  }
}

TEST_CASE("phi of word monomials") {
  CHECK(phi({1, 0}) == TorusElement::monomial({1, 0}, QHalfLaurent::monomial(1)));
  CHECK(phi({0, 0}) == TorusElement::one());
  CHECK(phi({-1, 2}) == TorusElement::monomial({-1, 2}, QHalfLaurent::monomial(-3)));
  // phi(x^a y^b) = phi(x)^a phi(y)^b
  const TorusElement px = phi({1, 0}), py = phi({0, 1});
  const TorusElement pxi = phi({-1, 0}), pyi = phi({0, -1});
  CHECK(px * pxi == TorusElement::one());
  CHECK(py * pyi == TorusElement::one());
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      TorusElement w = TorusElement::one();
      for (int i = 0; i < std::abs(a); ++i) w = w * (a > 0 ? px : pxi);
      for (int i = 0; i < std::abs(b); ++i) w = w * (b > 0 ? py : pyi);
      CHECK(phi({a, b}) == w);
    }
}

TEST_CASE("x^a y^b = q^{ab} y^b x^a under phi") {
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) CHECK(phi({a, 0}) * phi({0, b}) == (phi({0, b}) * phi({a, 0})).shifted(2 * a * b));
}

TEST_CASE("t_pow") {
  const TorusElement x1x2 = TorusElement::monomial({1, 1});
  CHECK(t_pow(x1x2, 2) == TorusElement::monomial({2, 2}, QHalfLaurent::monomial(-2)));
  CHECK(t_pow(x1x2, 0) == TorusElement::one());
  CHECK(t_pow(phi({1, 2}), 3) == phi({3, 6}).shifted(-12));
  // (x^a y^b)^i = q^{-ab binom(i,2)} x^{ai} y^{bi} under phi
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int i = 0; i <= 5; ++i)
        CHECK(t_pow(phi({a, b}), i) == phi({a * i, b * i}).shifted(-2 * a * b * (i * (i - 1) / 2)));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const TorusElement e = random_element(rng);
    CHECK(t_pow(e, 3) == e * e * e);
  }
}

TEST_CASE("left_divide examples") {
  const TorusElement n = TorusElement::monomial({0, 2}, q) + TorusElement::one();
  const TorusElement z = left_divide(TorusElement::x1(), n);
  CHECK(TorusElement::x1() * z == n);
  CHECK(z == TorusElement::monomial({-1, 2}, q) + TorusElement::monomial({-1, 0}));
  std::mt19937_64 rng(1);
  const TorusElement e = random_element(rng);
  CHECK(left_divide(TorusElement::one(), e) == e);
  try {
    left_divide(TorusElement::x1() + TorusElement::x2(), TorusElement::x1());
    FAIL("expected DivisionFailed");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DivisionFailed);
  }
  try {
    left_divide(TorusElement::monomial({1, 0}, QHalfLaurent(2)), TorusElement::x1());
    FAIL("expected DivisionFailed");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DivisionFailed);
  }
}

TEST_CASE("left_divide roundtrip on random inputs") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> e(-3, 3), k(-3, 3), s(0, 1);
  for (int t = 0; t < 250; ++t) {
    TorusElement d = random_element(rng);
    d.add_term({5, e(rng)}, QHalfLaurent::monomial(k(rng), BigInt(s(rng) ? 1 : -1)));
    const TorusElement z = random_element(rng);
    CHECK(left_divide(d, d * z) == z);
  }
}

TEST_CASE("support box and leading term") {
  TorusElement t = TorusElement::monomial({-2, 5}) + TorusElement::monomial({3, -1}) + TorusElement::monomial({3, 4});
  CHECK(t.leading() == Exponent{3, 4});
  auto [lo, hi] = t.support_box();
  CHECK(lo == Exponent{-2, -1});
  CHECK(hi == Exponent{3, 5});
  CHECK_THROWS_AS(TorusElement().leading(), Error);
}
