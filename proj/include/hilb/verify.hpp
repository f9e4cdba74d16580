#pragma once

#include "hilb/fibration.hpp"
#include "hilb/io.hpp"
#include "hilb/taut.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hilb {

/// Largest G-degree among the nonzero G-components; nullopt for the zero vector.
struct PerversityValue {
  std::optional<int> p;
  static PerversityValue of(const FockSpace& F, const FockVector& v);
};

struct Witness {
  std::string input;
  std::string expected;
  std::string observed;
  FockVector vector;
};

/// One numbered law inside an audit (the purity audit has five).
struct AuditItem {
  int id = 0;
  std::string name;
  /// "pass", "fail" (a counterexample must exist) or "none" (hypotheses unmet, not required).
  std::string required = "pass";
  bool holds = true;
  std::size_t checked = 0;
  std::vector<Witness> witnesses;

  bool as_required() const { return required == "none" || holds == (required == "pass"); }
};

struct AuditReport {
  static constexpr std::size_t kWitnessCap = 25;

  std::string name;
  std::vector<std::pair<std::string, std::string>> hypotheses;
  bool pass = true;
  std::size_t checked = 0;
  std::vector<Witness> witnesses;
  std::vector<AuditItem> items;
  /// Extra reported values (e.g. constants, component breakdowns).
  std::vector<std::pair<std::string, std::string>> facts;

  void add_witness(Witness w);
};

std::string to_text(const AuditReport& r);
Json to_json(const FockSpace& F, const AuditReport& r);

/// "2 q2(p) [g3: 2 q2(p)]": the vector with its G-components.
std::string describe(const FockSpace& F, const FockVector& v);

/// Hypotheses shared by the theorem-level audits.
std::vector<std::pair<std::string, std::string>> model_hypotheses(const SurfaceModel& m);

/// Heisenberg relations and [L_m(β), q_n(α)] = n q_{m+n}(βα) as matrix identities,
/// for indices 1 <= |n| <= max_index between weights 0 and max_weight.
AuditReport audit_relations(const Heisenberg& H, int max_weight, int max_index);

/// Tri-degree laws of the five operator families on all words of weight n.
AuditReport audit_purity(const TautEngine& T, int n);

enum class MultMode { Strong, Filtration };
MultMode parse_mode(const std::string& s);
std::string to_string(MultMode m);

AuditReport check_multiplicativity(const FockSpace& F, const CupTable& table, MultMode mode);
AuditReport check_multiplicativity(const TautEngine& T, int n, MultMode mode);

struct SelfIntersection {
  FockVector value;                      // -2 ∂(boundary divisor class)
  std::map<int, FockVector> components;  // by G-degree
  bool all_within_2 = true;
  /// G-degree of -2 q_2(K) q_1(1)^{n-2} 1, when K ≠ 0.
  std::optional<int> k_term_g;
  bool obstructed() const { return !all_within_2; }
};
SelfIntersection boundary_self_intersection(const Heisenberg& H, int n);
AuditReport to_report(const FockSpace& F, const SelfIntersection& s, int n);

/// For every dual pair with ι(β^i) ≠ 0: g(ιβ^i) + g(taut_class(β_i, l, n)) = l.
AuditReport audit_chern(const TautEngine& T, int n, int l);

/// Over a fiber catalogue: expected classification, revalidation of the emitted model,
/// strong multiplicativity <=> star, and at weight n
/// elliptic <=> strong pass <=> filtration pass <=> (K = 0 or g(K) = 1).
AuditReport equivalence_battery(const std::vector<CatalogueEntry>& catalogue, int n);

}  // namespace hilb
