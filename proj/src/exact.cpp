#include "hilb/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hilb {

DimensionError::DimensionError(std::string what, std::size_t expected, std::size_t actual)
    : Error(what + " (expected " + std::to_string(expected) + ", got " + std::to_string(actual) +
            ")"),
      expected_(expected),
      actual_(actual) {}

ParseError::ParseError(std::string what, std::string token)
    : Error(what + ": '" + token + "'"), token_(std::move(token)) {}

Rational::Rational(long num, long den) {
  if (den == 0) throw Error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false))
    throw ParseError("malformed rational", std::string(text));
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw ParseError("zero denominator", std::string(text));
  return Rational(n, d);
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

Matrix zero_matrix(Eigen::Index rows, Eigen::Index cols) {
  return Matrix::Constant(rows, cols, Rational(0));
}

Matrix identity_matrix(Eigen::Index n) {
  Matrix m = zero_matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

Vector zero_vector(Eigen::Index n) { return Vector::Constant(n, Rational(0)); }

Vector unit_vector(Eigen::Index n, Eigen::Index i) {
  Vector v = zero_vector(n);
  v(i) = Rational(1);
  return v;
}

bool is_zero(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) return false;
  return true;
}

bool is_zero(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) return false;
  return true;
}

bool equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product inner dimension", static_cast<std::size_t>(a.cols()),
                         static_cast<std::size_t>(b.rows()));
  Matrix c = zero_matrix(a.rows(), b.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const Rational& bkj = b(k, j);
      if (bkj.is_zero()) continue;
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const Rational& aik = a(i, k);
        if (!aik.is_zero()) c(i, j) += aik * bkj;
      }
    }
  }
  return c;
}

Vector multiply(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size())
    throw DimensionError("matrix-vector product", static_cast<std::size_t>(a.cols()),
                         static_cast<std::size_t>(x.size()));
  Vector y = zero_vector(a.rows());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    if (x(k).is_zero()) continue;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!a(i, k).is_zero()) y(i) += a(i, k) * x(k);
  }
  return y;
}

namespace {

// Row echelon form in place; returns pivot column per pivot row.
// Pivot choice: first nonzero column, smallest eligible row index.
std::vector<Eigen::Index> reduce_rows(Matrix& m, Matrix* rhs) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = row; r < m.rows(); ++r)
      if (!m(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) {
      m.row(piv).swap(m.row(row));
      if (rhs) rhs->row(piv).swap(rhs->row(row));
    }
    const Rational inv = Rational(1) / m(row, col);
    for (Eigen::Index c = col; c < m.cols(); ++c)
      if (!m(row, c).is_zero()) m(row, c) *= inv;
    if (rhs)
      for (Eigen::Index c = 0; c < rhs->cols(); ++c)
        if (!(*rhs)(row, c).is_zero()) (*rhs)(row, c) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Rational f = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
      if (rhs)
        for (Eigen::Index c = 0; c < rhs->cols(); ++c)
          if (!(*rhs)(row, c).is_zero()) (*rhs)(r, c) -= f * (*rhs)(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Matrix& a) {
  Matrix m = a;
  return reduce_rows(m, nullptr).size();
}

SparseVec::SparseVec(std::initializer_list<std::pair<const std::size_t, Rational>> init) {
  for (const auto& [i, v] : init) add(i, v);
}

SparseVec SparseVec::from_dense(const Vector& v) {
  SparseVec s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) s.entries_.emplace(static_cast<std::size_t>(i), v(i));
  return s;
}

Rational SparseVec::get(std::size_t i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? Rational(0) : it->second;
}

void SparseVec::set(std::size_t i, const Rational& v) {
  if (v.is_zero())
    entries_.erase(i);
  else
    entries_[i] = v;
}

void SparseVec::add(std::size_t i, const Rational& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(i, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

void SparseVec::axpy(const Rational& c, const SparseVec& x) {
  if (c.is_zero()) return;
  for (const auto& [i, v] : x.entries_) add(i, c * v);
}

std::size_t SparseVec::extent() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first + 1;
}

Vector SparseVec::to_dense(std::size_t dim) const {
  if (extent() > dim) throw DimensionError("sparse vector index out of range", dim, extent());
  Vector v = zero_vector(static_cast<Eigen::Index>(dim));
  for (const auto& [i, x] : entries_) v(static_cast<Eigen::Index>(i)) = x;
  return v;
}

SparseVec& SparseVec::operator*=(const Rational& c) {
  if (c.is_zero()) {
    entries_.clear();
    return *this;
  }
  for (auto& [i, v] : entries_) v *= c;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const SparseVec& v) {
  os << '{';
  bool first = true;
  for (const auto& [i, x] : v) {
    if (!first) os << ", ";
    first = false;
    os << i << ": " << x;
  }
  return os << '}';
}

std::optional<SparseVec> solve(const Matrix& a, const SparseVec& b) {
  if (b.extent() > static_cast<std::size_t>(a.rows()))
    throw DimensionError("right-hand side longer than matrix row count",
                         static_cast<std::size_t>(a.rows()), b.extent());
  Matrix m = a;
  Matrix rhs = b.to_dense(static_cast<std::size_t>(a.rows()));
  const auto pivots = reduce_rows(m, &rhs);
  for (Eigen::Index r = static_cast<Eigen::Index>(pivots.size()); r < m.rows(); ++r)
    if (!rhs(r, 0).is_zero()) return std::nullopt;
  SparseVec x;
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x.set(static_cast<std::size_t>(pivots[r]), rhs(static_cast<Eigen::Index>(r), 0));
  return x;
}

std::vector<SparseVec> nullspace(const Matrix& a) {
  Matrix m = a;
  const auto pivots = reduce_rows(m, nullptr);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<SparseVec> basis;
  for (Eigen::Index f = 0; f < a.cols(); ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    SparseVec v;
    v.set(static_cast<std::size_t>(f), Rational(1));
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v.set(static_cast<std::size_t>(pivots[r]), -m(static_cast<Eigen::Index>(r), f));
    basis.push_back(std::move(v));
  }
  return basis;
}

void SpanBuilder::check(const SparseVec& v) const {
  if (v.extent() > dim_) throw DimensionError("vector outside span ambient space", dim_, v.extent());
}

std::pair<SparseVec, SparseVec> SpanBuilder::reduce(const SparseVec& v) const {
  SparseVec r = v;
  SparseVec w;
  // Rows are fully reduced against each other, so one pass in pivot order suffices.
  for (const auto& [pivot, idx] : pivot_row_) {
    const Rational c = r.get(pivot);
    if (c.is_zero()) continue;
    r.axpy(-c, rows_[idx].vec);
    w.axpy(c, rows_[idx].witness);
  }
  return {std::move(r), std::move(w)};
}

SpanBuilder::AddResult SpanBuilder::add(const SparseVec& v) {
  check(v);
  auto [r, w] = reduce(v);
  if (r.empty()) {
    ++inserted_;
    return {false, std::move(w)};
  }
  // r = v - w_combo, so r is expressed as inserted_new - w.
  SparseVec witness = Rational(-1) * w;
  witness.set(inserted_, Rational(1));
  ++inserted_;
  const std::size_t pivot = r.begin()->first;
  const Rational inv = Rational(1) / r.begin()->second;
  r *= inv;
  witness *= inv;
  for (auto& row : rows_) {
    const Rational c = row.vec.get(pivot);
    if (c.is_zero()) continue;
    row.vec.axpy(-c, r);
    row.witness.axpy(-c, witness);
  }
  pivot_row_[pivot] = rows_.size();
  rows_.push_back({pivot, std::move(r), std::move(witness)});
  return {true, {}};
}

std::optional<SparseVec> SpanBuilder::express(const SparseVec& v) const {
  check(v);
  auto [r, w] = reduce(v);
  if (!r.empty()) return std::nullopt;
  return w;
}

}  // namespace hilb
