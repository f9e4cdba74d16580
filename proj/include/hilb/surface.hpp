#pragma once

#include "hilb/exact.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hilb {

/// Which side a class lives on: H = H*(S), Hc = compactly supported, stored
/// in the dual basis β^i of H.
enum class Space { H, Hc };

struct BasisClass {
  std::string label;
  int d = 0;  // cohomological degree, 0..4
  int k = 0;  // G-degree, 0..2
};

/// A class with coordinates over the basis of its space. Coordinates of an Hc
/// class refer to the dual basis β^i, so β^i has degree 4 - d_i and G-degree 2 - k_i.
struct Class {
  Space space = Space::H;
  Vector coords;

  bool is_zero() const { return hilb::is_zero(coords); }
  friend bool operator==(const Class& a, const Class& b) {
    return a.space == b.space && a.coords.size() == b.coords.size() &&
           (a.coords.size() == 0 || a.coords == b.coords);
  }
};

struct CupEntry {
  std::size_t i = 0, j = 0;
  SparseVec terms;
};

struct ValidationItem {
  std::string check;
  bool passed = true;
  std::vector<std::string> witnesses;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool strongly_multiplicative = false;
  std::string strong_witness;  // first violating triple when not strongly multiplicative

  bool ok() const;
};

/// Finite model of H*(S) with a G-grading, canonical class and forgetful map
/// iota: Hc -> H. Hc is the graded dual of H; its module structure is derived.
class SurfaceModel {
 public:
  SurfaceModel() = default;
  /// Structural errors (bad degrees, indices out of range, missing unit) throw
  /// hilb::ModelError. Algebraic invariants are left to validate().
  /// Products with the unit are filled in when absent. An entry (i, j) also
  /// defines (j, i) by super-commutativity unless (j, i) is given explicitly.
  SurfaceModel(std::string name, std::vector<BasisClass> basis, const std::vector<CupEntry>& cup,
               SparseVec K, const std::vector<std::pair<std::size_t, SparseVec>>& iota);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<BasisClass>& basis() const { return basis_; }
  const BasisClass& basis(std::size_t i) const { return basis_.at(i); }
  std::size_t unit_index() const { return unit_; }
  std::optional<std::size_t> find(const std::string& label) const;

  int parity(std::size_t i) const { return basis_[i].d & 1; }
  int degree(Space s, std::size_t i) const { return s == Space::H ? basis_[i].d : 4 - basis_[i].d; }
  int gdegree(Space s, std::size_t i) const { return s == Space::H ? basis_[i].k : 2 - basis_[i].k; }

  Class basis_class(std::size_t i) const;
  Class dual_class(std::size_t i) const;
  Class unit() const { return basis_class(unit_); }
  /// Pairs (β_i, β^i) in basis order.
  std::vector<std::pair<Class, Class>> dual_basis() const;
  Class zero(Space s) const { return {s, zero_vector(static_cast<Eigen::Index>(dim()))}; }
  const Class& K() const { return K_; }
  /// Column i is iota(β^i) in H coordinates.
  const Matrix& iota_matrix() const { return iota_; }

  /// Structure constants: cup(β_i, β_j) as a vector over the basis.
  const Vector& cup_basis(std::size_t i, std::size_t j) const { return cup_[i * dim() + j]; }

  Class cup(const Class& a, const Class& b) const;
  /// a·ξ for a in H, ξ in Hc, defined by ∫(a·ξ)·b = (-1)^{|a||ξ|} ∫ξ·(a·b).
  Class module_mul(const Class& a, const Class& xi) const;
  /// ξ·a = (-1)^{|ξ||a|} a·ξ.
  Class compact_times(const Class& xi, const Class& a) const;
  /// Product of two classes in written order. Two Hc factors multiply as ι(x)·y.
  Class product(const Class& x, const Class& y) const;
  Class iota(const Class& xi) const;
  /// Moves a class to H (through iota when needed).
  Class to_H(const Class& x) const { return x.space == Space::H ? x : iota(x); }

  /// Degree-4 part of an Hc class evaluated against the unit.
  Rational integral(const Class& xi) const;
  /// ∫ α·ξ in the written order, α in H, ξ in Hc.
  Rational pair(const Class& alpha, const Class& xi) const { return integral(module_mul(alpha, xi)); }
  /// ∫ ξ·β_c for ξ in Hc, without forming the product.
  Rational integral_with_basis(const Class& xi, std::size_t c) const;
  /// ∫ x·y in the written order; at least one factor must lie in Hc.
  Rational integral_of_product(const Class& x, const Class& y) const;

  /// Set of G-degrees appearing in a class; empty for zero.
  std::set<int> gdegrees(const Class& x) const;
  std::set<int> degrees(const Class& x) const;
  std::set<int> parities(const Class& x) const;
  /// Splits a class into its parity-homogeneous parts.
  std::vector<std::pair<int, Class>> by_parity(const Class& x) const;

  /// g(K) when K is nonzero and G-pure; nullopt for K = 0 or mixed K.
  std::optional<int> k_gdegree() const;
  bool k_is_zero() const { return K_.is_zero(); }
  /// K zero, or pure of G-degree at most `bound`.
  bool k_within(int bound) const;

  ValidationReport validate() const;
  bool strongly_multiplicative() const { return strong_; }

  std::string class_str(const Class& x) const;
  /// Parses "p", "2 p", "1/2 a - b", "p^" (dual classes carry a trailing ^;
  /// a class expression must not mix spaces).
  Class parse_class(const std::string& text) const;

 private:
  void check_class(const Class& x, Space expected, const char* what) const;
  std::pair<bool, std::string> compute_strong() const;

  std::string name_;
  std::vector<BasisClass> basis_;
  std::vector<Vector> cup_;
  std::size_t unit_ = 0;
  Class K_;
  Matrix iota_;
  bool strong_ = false;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Thrown when an operator receives a class from the wrong space.
class SpaceError : public Error {
 public:
  using Error::Error;
};

/// Sign (-1)^{a*b}.
inline int koszul(int a, int b) { return (a & b & 1) ? -1 : 1; }

}  // namespace hilb
