#pragma once

#include "hilb/heisenberg.hpp"
#include "hilb/io.hpp"

#include <map>
#include <mutex>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace hilb {

/// v = Σ_β q_1(β) y_β + ∂z.
struct Decomposition {
  std::vector<FockVector> y;  // indexed by basis class, weight n-1
  FockVector z;               // weight n
};

/// One generator of the cup-product ring: multiplication by (β_cls)^[n]_l.
struct TautGenerator {
  std::size_t cls = 0;
  int l = 0;
};

/// Full multiplication table of H*(S^[n]) in the Fock basis.
struct CupTable {
  int n = 0;
  std::vector<FockWord> basis;
  std::vector<TautGenerator> generators;
  /// Accepted BFS monomials, as generator index sequences applied right to left to the unit.
  std::vector<std::vector<std::size_t>> monomials;
  /// Each basis word as a combination of monomials.
  std::vector<SparseVec> word_in_monomials;
  /// left[i] is the matrix of multiplication by basis[i].
  std::vector<Matrix> left;

  SparseVec product(std::size_t i, std::size_t j) const;
};

/// Tautological classes and multiplication by them, via Lehn's formula
/// [α^[•], q_1(y)] = exp(ad ∂) q_1(αy) and ∂ α^[•] = α^[•] ∂.
/// Results are cached per weight; the engine is safe to share between threads.
class TautEngine {
 public:
  explicit TautEngine(const Heisenberg& H) : H_(H), F_(H.space()), M_(F_.model()) {}

  const Heisenberg& heisenberg() const { return H_; }
  const FockSpace& space() const { return F_; }

  const Matrix& boundary_matrix(int n) const;
  /// q_1(β_cls) from weight n-1 to weight n.
  const Matrix& creation_matrix(std::size_t cls, int n) const;
  /// (ad ∂)^j q_1(β_cls) from weight n-1 to weight n.
  const Matrix& ad_power_matrix(std::size_t cls, int j, int n) const;
  /// exp(ad ∂) q_1(γ) from weight n-1 to weight n.
  Matrix exp_ad_matrix(const Class& gamma, int n) const;
  /// Largest j with (ad ∂)^j q_1(β) nonzero on weight n-1, over all basis classes β.
  int max_ad_power(int n) const;

  /// Multiplication by α^[n] on weight n (all l-components together).
  const Matrix& mult_matrix(std::size_t cls, int n) const;
  Matrix mult_matrix(const Class& alpha, int n) const;
  /// Multiplication by α^[n]_l: the part raising degree by deg α + 2l - 4.
  /// α must be homogeneous in cohomological degree.
  Matrix component_matrix(const Class& alpha, int l, int n) const;

  FockVector taut_mul(const Class& alpha, int n, const FockVector& v) const;
  /// Requires v homogeneous of one cohomological degree.
  FockVector taut_component(const Class& alpha, int l, int n, const FockVector& v) const;
  /// α^[n]_l = α^[n]_l · 1.
  FockVector taut_class(const Class& alpha, int l, int n) const;

  /// Deterministic decomposition (free variables zero); with rng, a random
  /// point of the solution space restricted to each cohomological degree.
  Decomposition decompose(int n, const FockVector& v, std::mt19937* rng = nullptr) const;
  /// α^[n]·v through random decompositions at every recursion step; independent
  /// of the cached matrices apart from ∂ and the exp(ad ∂) operators.
  FockVector taut_mul_randomized(const Class& alpha, int n, const FockVector& v, std::mt19937& rng) const;

  /// 1/(l-2)! Σ_i q_1(1)^i ((ad ∂)^{l-2} q_1(α)) q_1(1)^{n-1-i} 1, for l >= 2.
  FockVector remark_formula(const Class& alpha, int l, int n) const;

  /// Generators sorted by (g(α), deg α, l); zero operators dropped.
  std::vector<TautGenerator> generators(int n) const;
  CupTable cup_table(int n) const;

 private:
  int degree_of(const Class& alpha) const;

  const Heisenberg& H_;
  const FockSpace& F_;
  const SurfaceModel& M_;
  mutable std::recursive_mutex mu_;
  mutable std::map<int, Matrix> boundary_;
  mutable std::map<std::pair<std::size_t, int>, Matrix> creation_;
  mutable std::map<std::tuple<std::size_t, int, int>, Matrix> ad_power_;
  mutable std::map<std::pair<std::size_t, int>, Matrix> exp_ad_;
  mutable std::map<std::pair<std::size_t, int>, Matrix> mult_;
};

/// "a^[2]_3"; a monomial prints as a product of generators, the empty one as "1".
std::string to_string(const SurfaceModel& m, int n, const TautGenerator& g);
/// Byte-stable document: basis words, generators, monomials, word expansions and every
/// nonzero product (pairs in index order, terms in basis order).
Json to_json(const FockSpace& F, const CupTable& t);

/// q_1(1)^{n-2} q_2(1) 1.
FockVector boundary_divisor_class(const FockSpace& F, int n);

/// Cohomological degree of every word (used for degree filtering).
std::vector<int> word_degrees(const FockSpace& F, int n);

}  // namespace hilb
