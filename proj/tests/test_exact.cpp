#include "doctest.h"
#include "hilb/exact.hpp"

#include <algorithm>
#include <random>

using namespace hilb;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  Matrix m = zero_matrix(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (long v : r) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  return Rational(num(rng), den(rng));
}

SparseVec apply(const Matrix& a, const SparseVec& x) {
  return SparseVec::from_dense(multiply(a, x.to_dense(static_cast<std::size_t>(a.cols()))));
}

}  // namespace

TEST_CASE("rational canonical form and serialization") {
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK(Rational(6, 3).str() == "2");
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse(" 7 ") == Rational(7));
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), ParseError);
  CHECK_THROWS_AS(Rational::parse("x"), ParseError);
  CHECK(factorial(6) == Rational(720));
  CHECK(binomial(5, 2) == Rational(10));
  CHECK(binomial(1, 2) == Rational(0));
}

TEST_CASE("rational arithmetic does not overflow") {
  Rational f = factorial(40);
  CHECK(f.str() == "815915283247897734345611269596115894272000000000");
  CHECK((Rational(1) / f) * f == Rational(1));
}

TEST_CASE("rational field axioms on random triples") {
  std::mt19937 rng(7);
  for (int t = 0; t < 500; ++t) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("solve: identity") {
  SparseVec b{{0, Rational(1, 2)}, {2, Rational(-3)}};
  auto x = solve(identity_matrix(3), b);
  REQUIRE(x);
  CHECK(*x == b);
}

TEST_CASE("solve: inconsistent system") {
  CHECK_FALSE(solve(mat({{1, 1}, {2, 2}}), SparseVec{{0, 1}, {1, 3}}).has_value());
}

TEST_CASE("solve: free variable set to zero") {
  auto x = solve(mat({{2, 0}, {0, 0}}), SparseVec{{0, 1}});
  REQUIRE(x);
  CHECK(x->get(0) == Rational(1, 2));
  CHECK(x->get(1) == Rational(0));
}

TEST_CASE("solve: dimension mismatch names the sizes") {
  try {
    (void)solve(identity_matrix(2), SparseVec{{5, 1}});
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.expected() == 2);
    CHECK(e.actual() == 6);
  }
}

TEST_CASE("solve reproduces b exactly on random solvable systems") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng() % 6);
    const Eigen::Index c = 1 + static_cast<Eigen::Index>(rng() % 6);
    Matrix a = zero_matrix(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j)
        if (rng() % 3 != 0) a(i, j) = random_rational(rng);
    SparseVec x0;
    for (Eigen::Index j = 0; j < c; ++j) x0.set(static_cast<std::size_t>(j), random_rational(rng));
    const SparseVec b = apply(a, x0);
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK(apply(a, *x) == b);
    for (const auto& k : nullspace(a)) CHECK(apply(a, k).empty());
    CHECK(nullspace(a).size() + rank(a) == static_cast<std::size_t>(c));
  }
}

TEST_CASE("span builder examples") {
  SpanBuilder s(2);
  CHECK(s.add(SparseVec{{0, 1}}).grew);
  auto r = s.add(SparseVec{{0, 2}});
  CHECK_FALSE(r.grew);
  CHECK(r.coords == SparseVec{{0, 2}});

  SpanBuilder t(2);
  CHECK(t.add(SparseVec{{0, 1}, {1, 1}}).grew);
  CHECK(t.add(SparseVec{{1, 1}}).grew);
  auto e = t.add(SparseVec{{0, 3}, {1, 5}});
  CHECK_FALSE(e.grew);
  CHECK(e.coords == SparseVec{{0, 3}, {1, 2}});
  CHECK(t.rank() == 2);
}

TEST_CASE("span builder witnesses reproduce vectors; rank is order independent") {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t dim = 1 + rng() % 6;
    std::vector<SparseVec> vs;
    for (int k = 0; k < 8; ++k) {
      SparseVec v;
      for (std::size_t i = 0; i < dim; ++i)
        if (rng() % 2) v.set(i, random_rational(rng));
      if (k > 3 && rng() % 2) v = random_rational(rng) * vs[rng() % vs.size()] + vs[rng() % vs.size()];
      vs.push_back(v);
    }
    SpanBuilder s(dim);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      auto r = s.add(vs[k]);
      if (!r.grew) {
        SparseVec back;
        for (const auto& [idx, c] : r.coords) {
          CHECK(idx < k);
          back.axpy(c, vs[idx]);
        }
        CHECK(back == vs[k]);
      }
    }
    auto perm = vs;
    std::shuffle(perm.begin(), perm.end(), rng);
    SpanBuilder s2(dim);
    for (const auto& v : perm) s2.add(v);
    CHECK(s2.rank() == s.rank());
  }
}
