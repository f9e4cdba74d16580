#include "doctest.h"
#include "fixtures.hpp"
#include "hilb/fock.hpp"

#include <random>

using namespace hilb;

namespace {

// Coefficients of prod_{n>=1} (1+t^n)^odd / (1-t^n)^even up to t^N.
std::vector<long> generating_counts(int odd, int even, int N) {
  std::vector<long> f(static_cast<std::size_t>(N + 1), 0);
  f[0] = 1;
  for (int n = 1; n <= N; ++n) {
    for (int r = 0; r < odd; ++r)  // multiply by (1 + t^n)
      for (int e = N; e >= n; --e) f[static_cast<std::size_t>(e)] += f[static_cast<std::size_t>(e - n)];
    for (int r = 0; r < even; ++r)  // multiply by 1/(1 - t^n)
      for (int e = n; e <= N; ++e) f[static_cast<std::size_t>(e)] += f[static_cast<std::size_t>(e - n)];
  }
  return f;
}

}  // namespace

TEST_CASE("normalize") {
  const auto& m = fixtures::elliptic();
  const std::size_t one = 0, a = 1, b = 2;
  auto r = normalize(m, {{1, a}, {2, one}});
  REQUIRE(r);
  CHECK(r->first == 1);
  CHECK(r->second == FockWord{{{2, one}, {1, a}}});
  CHECK_FALSE(normalize(m, {{1, a}, {1, a}}).has_value());
  auto s = normalize(m, {{1, b}, {1, a}});
  REQUIRE(s);
  CHECK(s->first == -1);
  CHECK(s->second == FockWord{{{1, a}, {1, b}}});
  CHECK_THROWS_AS(normalize(m, {{0, a}}), PreconditionError);
}

TEST_CASE("normalize is idempotent on basis words; tri-degree additive") {
  FockSpace F(fixtures::genus2());
  for (int n = 0; n <= 4; ++n)
    for (const auto& w : F.basis(n)) {
      auto r = normalize(F.model(), w.gens);
      REQUIRE(r);
      CHECK(r->first == 1);
      CHECK(r->second == w);
    }
  std::mt19937 rng(1);
  const auto& b2 = F.basis(2);
  for (int t = 0; t < 50; ++t) {
    const auto& x = b2[rng() % b2.size()];
    const auto& y = b2[rng() % b2.size()];
    std::vector<Generator> cat = x.gens;
    cat.insert(cat.end(), y.gens.begin(), y.gens.end());
    if (auto r = normalize(F.model(), cat)) CHECK(F.tridegree(r->second) == F.tridegree(x) + F.tridegree(y));
  }
}

TEST_CASE("basis enumeration counts match the generating function") {
  FockSpace E(fixtures::elliptic());
  FockSpace G(fixtures::genus2());
  const auto ce = generating_counts(2, 2, 5);
  const auto cg = generating_counts(4, 2, 5);
  for (int n = 0; n <= 5; ++n) {
    CHECK(E.dim(n) == static_cast<std::size_t>(ce[static_cast<std::size_t>(n)]));
    CHECK(G.dim(n) == static_cast<std::size_t>(cg[static_cast<std::size_t>(n)]));
  }
  CHECK(E.dim(0) == 1);
  CHECK(E.dim(2) == 12);
  int q2 = 0, q11 = 0;
  for (const auto& w : E.basis(2)) (w.gens.size() == 1 ? q2 : q11)++;
  CHECK(q2 == 4);
  CHECK(q11 == 8);
}

TEST_CASE("tri-degrees") {
  FockSpace G(fixtures::genus2());
  CHECK(G.tridegree(FockWord{}) == TriDegree{0, 0, 0});
  CHECK(G.tridegree(G.parse_word("q2(p)")) == TriDegree{2, 4, 3});
  CHECK(G.tridegree(G.parse_word("q2(1)")) == TriDegree{2, 2, 1});
  CHECK(G.tridegree(G.parse_word("q1(1).q1(1).q1(1)")) == TriDegree{3, 0, 0});
}

TEST_CASE("unit vector") {
  FockSpace E(fixtures::elliptic());
  CHECK(E.unit_vector(0) == FockVector::vacuum());
  CHECK(E.str(E.unit_vector(2)) == "1/2 q1(1).q1(1)");
  CHECK(E.str(E.unit_vector(3)) == "1/6 q1(1).q1(1).q1(1)");
}

TEST_CASE("printing and parsing") {
  FockSpace E(fixtures::elliptic());
  const FockVector v = E.parse_vector("1/2 q2(1) - q1(b).q1(a) + 3");
  CHECK(E.str(v) == "q1(a).q1(b) + 1/2 q2(1) + 3 vac");
  CHECK(E.parse_vector(E.str(v)) == v);
  CHECK(E.parse_vector("q1(a).q1(a)").empty());
  CHECK(E.str(FockVector{}) == "0");
  int sign = 0;
  CHECK(E.str(E.parse_word("q1(b).q1(a)", &sign)) == "q1(a).q1(b)");
  CHECK(sign == -1);
  CHECK_THROWS_AS(E.parse_vector("q1(z)"), ParseError);
  CHECK_THROWS_AS(E.parse_vector("q1(a) q1(b)"), ParseError);
  CHECK_THROWS_AS(E.parse_vector("x"), ParseError);
}

TEST_CASE("weight cap names the override flag") {
  FockSpace E(fixtures::elliptic(), 3);
  try {
    (void)E.basis(4);
    FAIL("expected WeightCapError");
  } catch (const WeightCapError& e) {
    CHECK(std::string(e.what()).find("--max-weight") != std::string::npos);
    CHECK(e.cap() == 3);
  }
}

TEST_CASE("coordinates round-trip") {
  FockSpace G(fixtures::genus2());
  const FockVector v = G.parse_vector("2 q2(p).q1(a1) - 1/3 q1(b2).q1(a1).q1(1)");
  CHECK(G.vector(G.coords(v, 3), 3) == v);
  CHECK_THROWS_AS(G.coords(v, 2), PreconditionError);
}
