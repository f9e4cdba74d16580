#pragma once

#include "hilb/io.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hilb {

struct FiberComponent {
  std::string label;
  int g = 0;   // geometric genus
  int pa = 0;  // arithmetic genus
  int b = 1;   // multiplicity
};

/// Central fiber: components plus a multigraph of transverse intersection points (loops allowed).
struct FiberData {
  std::string name;
  std::vector<FiberComponent> components;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

class FiberError : public Error {
 public:
  FiberError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
      : Error(row ? what + " (row " + std::to_string(*row) + ")" : what), row_(row) {}
  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

/// Catalogue entry: a fiber with the classification it is expected to receive.
struct CatalogueEntry {
  FiberData fiber;
  std::optional<bool> elliptic, star;
};

FiberData fiber_from_json(const Json& j);
/// {"fibers": [fiber, ...]} where each fiber may carry "expected": {"elliptic", "star"}.
std::vector<CatalogueEntry> load_catalogue(const std::string& path);
Json fiber_to_json(const FiberData& fd);
FiberData load_fiber(const std::string& path);

/// Result of the Zariski validation.
struct FiberValidation {
  Matrix intersection;  // E_i·E_j with derived self-intersections
  std::size_t rank = 0;
  bool negative_semidefinite = false;
  bool ok() const { return negative_semidefinite && rank + 1 == static_cast<std::size_t>(intersection.rows()); }
};

/// Off-diagonal entries from the edges, diagonal from Σ_j b_j E_i·E_j = 0.
/// Throws FiberError on malformed input, a non-integral self-intersection or rank ≠ k-1.
FiberValidation validate_fiber(const FiberData& fd);

struct FibrationReport {
  std::string name;
  std::size_t k = 0;
  Matrix intersection;
  std::vector<Rational> self_intersections;
  bool zariski_ok = false;
  std::size_t dim_im_cl = 0;
  std::size_t positive_genus_count = 0;
  std::size_t betti1 = 0;  // independent cycles of the dual graph
  bool star_ok = false;
  std::vector<Rational> K_coords;  // c_j = 2 pa_j - 2 - E_j²
  bool elliptic = false;           // Σ b_j c_j = 0
  bool predicted_n1 = true;        // π_1 is always multiplicative
  bool predicted_n2 = false;       // π_n, n >= 2, multiplicative iff elliptic
};

FibrationReport analyze(const FiberData& fd);
std::string to_text(const FibrationReport& r);
Json to_json(const FibrationReport& r);

/// Surface model of the fibration with a G-adapted H² basis: u_i = b_{i+1} p_i - b_i p_{i+1}
/// spanning Im cl (g = 1) and σ (g = 2).
SurfaceModel emit_surface_model(const FiberData& fd);

/// Structural facts about an emitted model, checked by direct linear algebra.
struct EmissionCheck {
  std::size_t im_cl_dim = 0;
  bool im_cl_relation = false;     // every ι-image satisfies Σ b_j c_j = 0 in p-coordinates
  bool fiber_class_killed = false;  // ι(Σ b_i e_i) = 0
  bool im_c_matches = false;        // Im(H¹ × H¹ → H²) = span{p_j : g_j > 0}
  std::size_t im_c_cap_im_cl = 0;
};
EmissionCheck check_emission(const FiberData& fd, const SurfaceModel& m);

}  // namespace hilb
