#pragma once

#include "hilb/surface.hpp"

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hilb {

/// q_n(β_cls) with n > 0.
struct Generator {
  int n = 1;
  std::size_t cls = 0;

  friend bool operator==(const Generator&, const Generator&) = default;
  /// Canonical order: larger n first, then smaller class index.
  friend std::strong_ordering operator<=>(const Generator& a, const Generator& b) {
    if (a.n != b.n) return b.n <=> a.n;
    return a.cls <=> b.cls;
  }
};

/// Canonically ordered product of creation operators applied to the vacuum.
struct FockWord {
  std::vector<Generator> gens;

  int weight() const;
  bool is_vacuum() const { return gens.empty(); }
  friend bool operator==(const FockWord&, const FockWord&) = default;
  friend auto operator<=>(const FockWord& a, const FockWord& b) { return a.gens <=> b.gens; }
};

struct TriDegree {
  int n = 0, d = 0, k = 0;
  friend bool operator==(const TriDegree&, const TriDegree&) = default;
  friend auto operator<=>(const TriDegree&, const TriDegree&) = default;
  TriDegree operator+(const TriDegree& o) const { return {n + o.n, d + o.d, k + o.k}; }
  TriDegree operator-(const TriDegree& o) const { return {n - o.n, d - o.d, k - o.k}; }
};

std::string to_string(const TriDegree& t);

/// Sparse combination of Fock words.
class FockVector {
 public:
  using Map = std::map<FockWord, Rational>;

  FockVector() = default;
  static FockVector vacuum();
  static FockVector word(FockWord w, Rational c = Rational(1));

  void add(const FockWord& w, const Rational& c);
  void axpy(const Rational& c, const FockVector& x);
  Rational coeff(const FockWord& w) const;
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const Map& terms() const { return terms_; }

  FockVector& operator+=(const FockVector& o) {
    axpy(Rational(1), o);
    return *this;
  }
  FockVector& operator-=(const FockVector& o) {
    axpy(Rational(-1), o);
    return *this;
  }
  FockVector& operator*=(const Rational& c);
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(const Rational& c, FockVector v) { return v *= c; }
  friend bool operator==(const FockVector&, const FockVector&) = default;

 private:
  Map terms_;
};

/// Sorts a generator sequence into canonical order. Each transposition of two
/// odd generators contributes a sign; a repeated odd generator gives nullopt (zero).
/// Throws PreconditionError on a nonpositive part.
std::optional<std::pair<int, FockWord>> normalize(const SurfaceModel& m,
                                                  const std::vector<Generator>& seq);

class WeightCapError : public Error {
 public:
  WeightCapError(int requested, int cap);
  int requested() const { return requested_; }
  int cap() const { return cap_; }

 private:
  int requested_, cap_;
};

/// Enumerated Fock space over a surface model. Bases are built lazily per
/// weight and cached; the object is safe for concurrent readers.
class FockSpace {
 public:
  static constexpr int kDefaultMaxWeight = 6;

  explicit FockSpace(SurfaceModel model, int max_weight = kDefaultMaxWeight);
  FockSpace(const FockSpace&) = delete;
  FockSpace& operator=(const FockSpace&) = delete;

  const SurfaceModel& model() const { return model_; }
  int max_weight() const { return max_weight_; }

  const std::vector<FockWord>& basis(int n) const;
  std::size_t dim(int n) const { return basis(n).size(); }
  std::optional<std::size_t> find(const FockWord& w) const;
  std::size_t index(const FockWord& w) const;

  TriDegree tridegree(const FockWord& w) const;
  int parity(const FockWord& w) const;
  int parity(const Generator& g) const { return model_.parity(g.cls); }

  /// Coordinates over basis(n); throws when a term has another weight.
  SparseVec coords(const FockVector& v, int n) const;
  FockVector vector(const SparseVec& c, int n) const;

  /// (1/n!) q_1(1)^n 1.
  FockVector unit_vector(int n) const;

  std::string str(const FockWord& w) const;
  std::string str(const FockVector& v) const;
  /// Inverse of str for words: "q3(p).q1(a)", "vac".
  FockWord parse_word(const std::string& text, int* sign = nullptr) const;
  /// Signed sums of rational multiples of words; a bare number is a multiple of the vacuum.
  FockVector parse_vector(const std::string& text) const;

  /// Throws WeightCapError when n exceeds the cap.
  void check_weight(int n) const;

 private:
  struct Level {
    std::vector<FockWord> words;
    std::map<FockWord, std::size_t> index;
  };
  const Level& level(int n) const;

  SurfaceModel model_;
  int max_weight_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Level>> levels_;
};

/// Weight of every term, or nullopt when the vector is empty or mixes weights.
std::optional<int> weight_of(const FockVector& v);

}  // namespace hilb
