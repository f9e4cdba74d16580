#pragma once

#include "hilb/fock.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <string>

namespace hilb {

struct OpSpec {
  enum class Kind { Nakajima, Virasoro, Boundary, AdBoundaryPow };
  Kind kind = Kind::Boundary;
  int n = 0;      // index for Nakajima/Virasoro, power for AdBoundaryPow
  Class cls;      // unused for Boundary

  /// Change in conformal weight.
  int shift() const;
};

/// "q(2,p)", "q(-1,p^)", "L(2,1)", "del", "adq(3,a)" (= (ad ∂)^3 q_1(a)).
OpSpec parse_op(const SurfaceModel& m, const std::string& text);
std::string to_string(const SurfaceModel& m, const OpSpec& op);

struct OperatorMatrix {
  int weight_in = 0;
  int weight_out = 0;
  Matrix matrix;  // rows: basis(weight_out), columns: basis(weight_in)
};

/// Nakajima, Virasoro and boundary operators acting on a FockSpace.
///
/// Conventions (all relative to the canonical word order):
///  * [q_a(x), q_b(y)] = a δ_{a+b,0} ∫ x·y, integral in the written order.
///  * L_n is normalized so that [L_m(β), q_n(α)] = n q_{m+n}(βα).
///  * ∂ vac = 0 and [∂, q_n(α)] = n L_n(α) + C(n,2) q_n(Kα).
class Heisenberg {
 public:
  explicit Heisenberg(const FockSpace& space) : F_(space), M_(space.model()) {}

  const FockSpace& space() const { return F_; }

  /// q_n(x): n > 0 needs x in H, n < 0 needs x in Hc; n = 0 is the zero operator.
  FockVector nakajima(int n, const Class& x, const FockVector& v) const;
  FockVector create(int n, const Class& alpha, const FockVector& v) const;
  FockVector annihilate(int m, const Class& xi, const FockVector& v) const;

  /// L_n(x): n >= 0 needs x in H, n < 0 needs x in Hc.
  FockVector virasoro(int n, const Class& x, const FockVector& v) const;

  /// ∂ expanded through the leftmost generator of each word (memoized).
  FockVector boundary(const FockVector& v) const;
  /// ∂ expanded through the rightmost generator; used to check path independence.
  FockVector boundary_rightmost(const FockVector& v) const;
  /// [∂, q_n(α)] v for α in H, n > 0.
  FockVector boundary_commutator(int n, const Class& alpha, const FockVector& v) const;

  /// ((ad ∂)^j q_1(α)) v.
  FockVector ad_boundary_pow(int j, const Class& alpha, const FockVector& v) const;

  FockVector apply(const OpSpec& op, const FockVector& v) const;
  OperatorMatrix matrix(const OpSpec& op, int weight_in) const;
  /// Matrix of an arbitrary linear map from weight_in to weight_out, built column by column.
  Matrix matrix(const std::function<FockVector(const FockVector&)>& f, int weight_in,
                int weight_out) const;

 private:
  FockVector create_word(int n, std::size_t cls, const Rational& c, const FockWord& w) const;
  FockVector boundary_word(const FockWord& w) const;
  FockVector boundary_word_right(const FockWord& w) const;

  /// One tensor term of Δ±: left ⊗ right, with ι-images for creation slots.
  struct DeltaTerm {
    Class left, left_h, right, right_h;
    Rational swap;  // Koszul sign of exchanging the two factors
  };
  const std::vector<DeltaTerm>& delta(bool plus, const Class& x) const;

  const FockSpace& F_;
  const SurfaceModel& M_;
  mutable std::mutex memo_mu_;
  mutable std::map<FockWord, FockVector> boundary_memo_;
  mutable std::map<std::string, std::vector<DeltaTerm>> delta_memo_;
};

/// Splits a vector into G-components keyed by the total G-degree of each word.
std::map<int, FockVector> g_components(const FockSpace& F, const FockVector& v);
/// Distinct tri-degrees of the terms.
std::set<TriDegree> tridegrees(const FockSpace& F, const FockVector& v);

}  // namespace hilb
