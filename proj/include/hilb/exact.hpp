#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hilb {

/// Base for every error the engine raises. Subclasses carry structured context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::string what, std::size_t expected, std::size_t actual);
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class ParseError : public Error {
 public:
  ParseError(std::string what, std::string token);
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

/// Raised when an internal identity that must hold for valid input does not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Exact rational number backed by GMP. Always kept in lowest terms with a
/// positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpz_class& num, const mpz_class& den = 1);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "-p", "p/q". Throws ParseError on malformed input or q = 0.
  static Rational parse(std::string_view text);

  std::string str() const;
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_{0};
};

Rational abs(const Rational& r);
Rational factorial(unsigned n);
Rational binomial(long n, long k);

}  // namespace hilb

namespace Eigen {
template <>
struct NumTraits<hilb::Rational> : GenericNumTraits<hilb::Rational> {
  using Real = hilb::Rational;
  using NonInteger = hilb::Rational;
  using Nested = hilb::Rational;
  using Literal = hilb::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace hilb {

using Matrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

Matrix zero_matrix(Eigen::Index rows, Eigen::Index cols);
Matrix identity_matrix(Eigen::Index n);
Vector zero_vector(Eigen::Index n);
Vector unit_vector(Eigen::Index n, Eigen::Index i);

bool is_zero(const Matrix& m);
bool is_zero(const Vector& v);
bool equal(const Matrix& a, const Matrix& b);

/// Dense product that skips zero entries. Operator matrices in this engine are
/// overwhelmingly sparse, so this beats the generic Eigen kernel by a wide margin.
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, const Vector& x);

std::size_t rank(const Matrix& a);

/// Sparse vector over Q with no stored zeros.
class SparseVec {
 public:
  using Map = std::map<std::size_t, Rational>;

  SparseVec() = default;
  SparseVec(std::initializer_list<std::pair<const std::size_t, Rational>> init);
  static SparseVec from_dense(const Vector& v);

  Rational get(std::size_t i) const;
  void set(std::size_t i, const Rational& v);
  void add(std::size_t i, const Rational& v);
  void axpy(const Rational& c, const SparseVec& x);

  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  /// One past the largest stored index; 0 for the empty vector.
  std::size_t extent() const;
  Vector to_dense(std::size_t dim) const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  SparseVec& operator*=(const Rational& c);
  friend SparseVec operator*(const Rational& c, SparseVec v) { return v *= c; }
  friend SparseVec operator+(SparseVec a, const SparseVec& b) {
    a.axpy(Rational(1), b);
    return a;
  }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) {
    a.axpy(Rational(-1), b);
    return a;
  }
  friend bool operator==(const SparseVec&, const SparseVec&) = default;

 private:
  Map entries_;
};

std::ostream& operator<<(std::ostream& os, const SparseVec& v);

/// Returns x with A x = b, free variables zero (columns scanned in index
/// order, pivot row = smallest eligible index), or nullopt when b is outside
/// the column span. Throws DimensionError when b refers to a row >= A.rows().
std::optional<SparseVec> solve(const Matrix& a, const SparseVec& b);

/// Basis of { x : A x = 0 }, one vector per free column in increasing order.
std::vector<SparseVec> nullspace(const Matrix& a);

/// Incremental row-reduced span with witnesses. Each pivot row remembers how
/// it was assembled from the accepted insertions, so membership queries can
/// return exact coordinates.
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t dim) : dim_(dim) {}

  struct AddResult {
    bool grew = false;
    /// Coordinates of the vector in the earlier insertions, indexed by call
    /// order (redundant insertions keep their slot). Empty when grew is true.
    SparseVec coords;
  };

  AddResult add(const SparseVec& v);
  /// Coordinates of v in the insertions so far, or nullopt when outside the span.
  std::optional<SparseVec> express(const SparseVec& v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t inserted() const { return inserted_; }

 private:
  struct Row {
    std::size_t pivot;
    SparseVec vec;      // normalized so vec[pivot] = 1
    SparseVec witness;  // vec = sum witness[t] * insertion_t
  };
  void check(const SparseVec& v) const;
  /// Reduces v against all rows; returns (residual, witness of v - residual).
  std::pair<SparseVec, SparseVec> reduce(const SparseVec& v) const;

  std::size_t dim_;
  std::size_t inserted_ = 0;
  std::vector<Row> rows_;
  std::map<std::size_t, std::size_t> pivot_row_;
};

}  // namespace hilb
