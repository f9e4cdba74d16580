#include "doctest.h"
#include "fixtures.hpp"
#include "hilb/taut.hpp"

#include <random>

using namespace hilb;

namespace {

std::vector<const SurfaceModel*> models() {
  return {&fixtures::elliptic(), &fixtures::genus2(), &fixtures::i2_by_hand()};
}

}  // namespace

TEST_CASE("recursion base: alpha^[1] = alpha") {
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    CHECK(T.taut_mul(m->unit(), 0, FockVector::vacuum()).empty());
    for (std::size_t a = 0; a < m->dim(); ++a)
      for (std::size_t b = 0; b < m->dim(); ++b) {
        const Class alpha = m->basis_class(a), beta = m->basis_class(b);
        const FockVector lhs = T.taut_mul(alpha, 1, H.create(1, beta, FockVector::vacuum()));
        CHECK(lhs == H.create(1, m->cup(alpha, beta), FockVector::vacuum()));
      }
  }
}

TEST_CASE("taut_component and taut_class examples") {
  FockSpace E(fixtures::elliptic());
  Heisenberg H(E);
  TautEngine T(H);
  const auto& m = E.model();
  CHECK(E.str(T.taut_component(m.parse_class("p"), 2, 1, E.unit_vector(1))) == "q1(p)");
  for (std::size_t a = 0; a < m.dim(); ++a) {
    const Class alpha = m.basis_class(a);
    CHECK(T.taut_class(alpha, 2, 1) == H.create(1, alpha, FockVector::vacuum()));
    for (int l = 0; l < 6; ++l)
      if (l != 2) CHECK(T.taut_class(alpha, l, 1).empty());
  }
  // negative target degree
  CHECK(T.taut_component(m.unit(), 1, 2, E.unit_vector(2)).empty());
  CHECK(E.str(T.taut_class(m.unit(), 3, 2)) == "1/2 q2(1)");
  CHECK_THROWS_AS(T.taut_component(m.unit(), 2, 2, E.parse_vector("q2(1) + q1(1).q1(1)")), PreconditionError);
}

TEST_CASE("degree-2 component of 1^[n] is the boundary operator") {
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n) {
      CHECK(T.taut_class(m->unit(), 3, n) == H.boundary(F.unit_vector(n)));
      CHECK(equal(T.component_matrix(m->unit(), 3, n), T.boundary_matrix(n)));
      // 1^[n]_2 is multiplication by n
      CHECK(equal(T.component_matrix(m->unit(), 2, n), Rational(n) * identity_matrix(static_cast<Eigen::Index>(F.dim(n)))));
    }
  }
}

TEST_CASE("taut operators commute with the boundary and with each other") {
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n) {
      const Matrix& D = T.boundary_matrix(n);
      for (std::size_t a = 0; a < m->dim(); ++a) {
        const Matrix& A = T.mult_matrix(a, n);
        CHECK(equal(multiply(A, D), multiply(D, A)));
        for (std::size_t b = 0; b < m->dim(); ++b) {
          const Matrix& B = T.mult_matrix(b, n);
          const Rational s(koszul(m->parity(a), m->parity(b)));
          CHECK_MESSAGE(equal(multiply(A, B), s * multiply(B, A)),
                        m->name() << " n=" << n << " " << m->basis(a).label << "," << m->basis(b).label);
        }
      }
    }
  }
}

TEST_CASE("Lehn commutator holds as an operator identity") {
  // [alpha^[.], q_1(beta)] = exp(ad del) q_1(alpha beta), checked on every word.
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n)
      for (std::size_t a = 0; a < m->dim(); ++a)
        for (std::size_t b = 0; b < m->dim(); ++b) {
          const Matrix lhs = multiply(T.mult_matrix(a, n), T.creation_matrix(b, n)) -
                             Rational(koszul(m->parity(a), m->parity(b))) *
                                 multiply(T.creation_matrix(b, n), T.mult_matrix(a, n - 1));
          CHECK(equal(lhs, T.exp_ad_matrix(m->cup(m->basis_class(a), m->basis_class(b)), n)));
        }
  }
}

TEST_CASE("decompose") {
  FockSpace E(fixtures::elliptic());
  Heisenberg H(E);
  TautEngine T(H);
  const auto& m = E.model();
  const auto d = T.decompose(1, E.parse_vector("q1(a)"));
  for (std::size_t b = 0; b < m.dim(); ++b)
    CHECK(d.y[b] == (m.basis(b).label == "a" ? FockVector::vacuum() : FockVector{}));
  CHECK(d.z.empty());
  const auto d2 = T.decompose(2, E.parse_vector("q2(1)"));
  CHECK(H.boundary(d2.z) == E.parse_vector("q2(1)"));
  CHECK_THROWS_AS(T.decompose(0, FockVector::vacuum()), PreconditionError);

  std::mt19937 rng(7);
  for (const SurfaceModel* mm : models()) {
    FockSpace F(*mm);
    Heisenberg HF(F);
    TautEngine TF(HF);
    for (int n = 1; n <= 3; ++n)
      for (const auto& w : F.basis(n)) {
        const FockVector v = FockVector::word(w);
        const auto dec = TF.decompose(n, v, &rng);
        FockVector back = HF.boundary(dec.z);
        for (std::size_t b = 0; b < mm->dim(); ++b) back += HF.create(1, mm->basis_class(b), dec.y[b]);
        CHECK(back == v);
      }
  }
}

TEST_CASE("well-definedness: random decompositions give the same product") {
  std::mt19937 rng(2024);
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n)
      for (std::size_t a = 0; a < m->dim(); ++a)
        for (const auto& w : F.basis(n)) {
          const FockVector v = FockVector::word(w);
          const Class alpha = m->basis_class(a);
          const FockVector direct = T.taut_mul(alpha, n, v);
          const FockVector r1 = T.taut_mul_randomized(alpha, n, v, rng);
          const FockVector r2 = T.taut_mul_randomized(alpha, n, v, rng);
          CHECK_MESSAGE(r1 == direct, m->name() << " " << m->basis(a).label << " on " << F.str(w));
          CHECK(r2 == direct);
        }
  }
}

TEST_CASE("remark formula equals n! times the tautological class") {
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n)
      for (int l = 2; l <= 4; ++l)
        for (std::size_t a = 0; a < m->dim(); ++a) {
          const Class alpha = m->basis_class(a);
          CHECK_MESSAGE(T.remark_formula(alpha, l, n) == factorial(static_cast<unsigned>(n)) * T.taut_class(alpha, l, n),
                        m->name() << " " << m->basis(a).label << " l=" << l << " n=" << n);
        }
  }
}

TEST_CASE("l = 0 and l = 1 components vanish") {
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 3; ++n)
      for (std::size_t a = 0; a < m->dim(); ++a)
        for (int l = 0; l <= 1; ++l) CHECK(is_zero(T.component_matrix(m->basis_class(a), l, n)));
  }
}

TEST_CASE("boundary divisor class") {
  FockSpace E(fixtures::elliptic());
  CHECK(E.str(boundary_divisor_class(E, 2)) == "q2(1)");
  CHECK(E.str(boundary_divisor_class(E, 3)) == "q2(1).q1(1)");
  CHECK(E.tridegree(boundary_divisor_class(E, 4).begin()->first) == TriDegree{4, 2, 1});
  CHECK_THROWS_AS(boundary_divisor_class(E, 1), PreconditionError);
}

TEST_CASE("cup table ring axioms") {
  std::mt19937 rng(11);
  for (const SurfaceModel* m : models()) {
    FockSpace F(*m);
    Heisenberg H(F);
    TautEngine T(H);
    for (int n = 1; n <= 2; ++n) {
      const CupTable t = T.cup_table(n);
      const std::size_t dim = t.basis.size();
      REQUIRE(dim == F.dim(n));
      const SparseVec unit = F.coords(F.unit_vector(n), n);
      const auto deg = word_degrees(F, n);
      std::vector<Matrix> right(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        // unit is a two-sided unit
        SparseVec ui;
        for (const auto& [k, c] : unit) ui.axpy(c, t.product(k, i));
        CHECK(ui == SparseVec{{i, Rational(1)}});
        CHECK(SparseVec::from_dense(multiply(t.left[i], unit.to_dense(dim))) == SparseVec{{i, Rational(1)}});
        for (std::size_t j = 0; j < dim; ++j)
          CHECK(t.product(i, j) == Rational(koszul(deg[i] & 1, deg[j] & 1)) * t.product(j, i));
      }
      std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
      for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
        // (x_i x_j) x_k = x_i (x_j x_k)
        const Vector lhs = multiply(t.left[i], Vector(t.left[j].col(static_cast<Eigen::Index>(k))));
        SparseVec rhs;
        for (const auto& [r, c] : t.product(i, j)) rhs.axpy(c, t.product(r, k));
        CHECK(SparseVec::from_dense(lhs) == rhs);
      }
    }
  }
  FockSpace E(fixtures::elliptic());
  Heisenberg H(E);
  TautEngine T(H);
  CHECK(T.cup_table(2).basis.size() == 12);
}

TEST_CASE("cup table agrees with taut operators") {
  // Multiplying by the class alpha^[n]_l inside the table is the operator T_{alpha,l}.
  FockSpace G(fixtures::genus2());
  Heisenberg H(G);
  TautEngine T(H);
  const CupTable t = T.cup_table(2);
  const auto& m = G.model();
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (int l = 2; l <= 4; ++l) {
      const SparseVec cls = G.coords(T.taut_class(m.basis_class(a), l, 2), 2);
      Matrix L = zero_matrix(static_cast<Eigen::Index>(t.basis.size()), static_cast<Eigen::Index>(t.basis.size()));
      for (const auto& [i, c] : cls) L += c * t.left[i];
      CHECK(equal(L, T.component_matrix(m.basis_class(a), l, 2)));
    }
}
