#include "hilb/taut.hpp"

#include "hilb/parallel.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace hilb {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

// Position of the first q_1 generator, or -1.
int first_part_one(const FockWord& w) {
  for (std::size_t i = 0; i < w.gens.size(); ++i)
    if (w.gens[i].n == 1) return static_cast<int>(i);
  return -1;
}

Vector column_times(const Matrix& a, const Vector& x) { return multiply(a, x); }

}  // namespace

std::vector<int> word_degrees(const FockSpace& F, int n) {
  std::vector<int> out;
  for (const auto& w : F.basis(n)) out.push_back(F.tridegree(w).d);
  return out;
}

FockVector boundary_divisor_class(const FockSpace& F, int n) {
  if (n < 2) throw PreconditionError("boundary divisor class needs n >= 2");
  F.check_weight(n);
  FockWord w;
  w.gens.push_back({2, F.model().unit_index()});
  for (int i = 0; i < n - 2; ++i) w.gens.push_back({1, F.model().unit_index()});
  return FockVector::word(w);
}

std::string to_string(const SurfaceModel& m, int n, const TautGenerator& g) {
  return m.basis(g.cls).label + "^[" + std::to_string(n) + "]_" + std::to_string(g.l);
}

Json to_json(const FockSpace& F, const CupTable& t) {
  const SurfaceModel& m = F.model();
  auto terms = [&](const SparseVec& v, auto&& name) {
    Json a = Json::array();
    for (const auto& [i, c] : v) a.push_back(Json{{"term", name(i)}, {"coeff", c.str()}});
    return a;
  };
  auto word = [&](std::size_t i) { return F.str(t.basis[i]); };
  auto monomial = [&](std::size_t i) {
    std::string s;
    for (std::size_t g : t.monomials[i]) s += (s.empty() ? "" : " * ") + to_string(m, t.n, t.generators[g]);
    return s.empty() ? std::string("1") : s;
  };
  Json j;
  j["model"] = m.name();
  j["n"] = t.n;
  Json basis = Json::array();
  for (std::size_t i = 0; i < t.basis.size(); ++i) basis.push_back(word(i));
  j["basis"] = basis;
  Json gens = Json::array();
  for (const auto& g : t.generators) gens.push_back(to_string(m, t.n, g));
  j["generators"] = gens;
  Json monos = Json::array();
  for (std::size_t i = 0; i < t.monomials.size(); ++i) monos.push_back(monomial(i));
  j["monomials"] = monos;
  Json exp = Json::array();
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    exp.push_back(Json{{"word", word(i)}, {"monomials", terms(t.word_in_monomials[i], monomial)}});
  j["expansions"] = exp;
  Json prods = Json::array();
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    for (std::size_t k = 0; k < t.basis.size(); ++k) {
      const SparseVec p = t.product(i, k);
      if (!p.empty()) prods.push_back(Json{{"left", word(i)}, {"right", word(k)}, {"product", terms(p, word)}});
    }
  j["products"] = prods;
  return j;
}

SparseVec CupTable::product(std::size_t i, std::size_t j) const {
  return SparseVec::from_dense(left.at(i).col(ix(j)));
}

int TautEngine::degree_of(const Class& alpha) const {
  if (alpha.space != Space::H) throw SpaceError("tautological classes need a class in H");
  const auto d = M_.degrees(alpha);
  if (d.size() > 1) throw PreconditionError("class is not homogeneous in cohomological degree");
  return d.empty() ? 0 : *d.begin();
}

const Matrix& TautEngine::boundary_matrix(int n) const {
  std::lock_guard lock(mu_);
  auto it = boundary_.find(n);
  if (it != boundary_.end()) return it->second;
  return boundary_[n] = H_.matrix(OpSpec{OpSpec::Kind::Boundary, 0, {}}, n).matrix;
}

const Matrix& TautEngine::creation_matrix(std::size_t cls, int n) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(cls, n);
  auto it = creation_.find(key);
  if (it != creation_.end()) return it->second;
  return creation_[key] = H_.matrix(OpSpec{OpSpec::Kind::Nakajima, 1, M_.basis_class(cls)}, n - 1).matrix;
}

const Matrix& TautEngine::ad_power_matrix(std::size_t cls, int j, int n) const {
  if (j == 0) return creation_matrix(cls, n);
  std::lock_guard lock(mu_);
  auto key = std::make_tuple(cls, j, n);
  auto it = ad_power_.find(key);
  if (it != ad_power_.end()) return it->second;
  const Matrix& prev = ad_power_matrix(cls, j - 1, n);
  Matrix a = multiply(boundary_matrix(n), prev) - multiply(prev, boundary_matrix(n - 1));
  return ad_power_[key] = std::move(a);
}

Matrix TautEngine::exp_ad_matrix(const Class& gamma, int n) const {
  if (gamma.space != Space::H) throw SpaceError("exp(ad del) q_1 needs a class in H");
  std::lock_guard lock(mu_);
  Matrix out = zero_matrix(ix(F_.dim(n)), ix(F_.dim(n - 1)));
  for (std::size_t m = 0; m < M_.dim(); ++m) {
    const Rational& c = gamma.coords(ix(m));
    if (c.is_zero()) continue;
    auto key = std::make_pair(m, n);
    auto it = exp_ad_.find(key);
    if (it == exp_ad_.end()) {
      Matrix e = creation_matrix(m, n);
      for (int j = 1;; ++j) {
        const Matrix& a = ad_power_matrix(m, j, n);
        if (is_zero(a)) break;
        if (j > 2 * n + 2)
          throw ConsistencyError("(ad del)^" + std::to_string(j) + " q_1 is nonzero beyond the degree bound");
        e += a / factorial(static_cast<unsigned>(j));
      }
      it = exp_ad_.emplace(key, std::move(e)).first;
    }
    out += c * it->second;
  }
  return out;
}

int TautEngine::max_ad_power(int n) const {
  int best = -1;
  for (std::size_t m = 0; m < M_.dim(); ++m)
    for (int j = 0; j <= 2 * n + 2; ++j)
      if (!is_zero(ad_power_matrix(m, j, n))) best = std::max(best, j);
  return best;
}

const Matrix& TautEngine::mult_matrix(std::size_t cls, int n) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(cls, n);
  auto it = mult_.find(key);
  if (it != mult_.end()) return it->second;
  F_.check_weight(n);

  const std::size_t dim = F_.dim(n);
  Matrix T = zero_matrix(ix(dim), ix(dim));
  if (n == 0) return mult_[key] = T;

  const Matrix& prev = mult_matrix(cls, n - 1);
  const Class alpha = M_.basis_class(cls);
  const int pa = M_.parity(cls);
  const auto& words = F_.basis(n);

  // Words starting (after reordering) with q_1(β): Lehn's commutator.
  std::vector<std::size_t> rest;
  std::vector<std::optional<Matrix>> lehn(M_.dim());
  for (std::size_t j = 0; j < dim; ++j) {
    const FockWord& w = words[j];
    const int pos = first_part_one(w);
    if (pos < 0) {
      rest.push_back(j);
      continue;
    }
    const std::size_t b = w.gens[static_cast<std::size_t>(pos)].cls;
    int before = 0;
    for (int i = 0; i < pos; ++i) before ^= F_.parity(w.gens[static_cast<std::size_t>(i)]);
    const Rational sigma(koszul(M_.parity(b), before));
    FockWord y = w;
    y.gens.erase(y.gens.begin() + pos);
    const Idx yi = ix(F_.index(y));
    if (!lehn[b]) lehn[b] = exp_ad_matrix(M_.cup(alpha, M_.basis_class(b)), n);
    Vector col = lehn[b]->col(yi);
    col += Rational(koszul(pa, M_.parity(b))) * column_times(creation_matrix(b, n), Vector(prev.col(yi)));
    T.col(ix(j)) = sigma * col;
  }

  // Remaining words, by increasing degree: w = ∂z + (part-one words).
  const Matrix& D = boundary_matrix(n);
  const auto deg = word_degrees(F_, n);
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
  for (std::size_t s = 0; s < rest.size();) {
    const int d = deg[rest[s]];
    std::size_t e = s;
    while (e < rest.size() && deg[rest[e]] == d) ++e;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < dim; ++j)
      if (deg[j] == d - 2) cols.push_back(j);
    Matrix P = zero_matrix(ix(e - s), ix(cols.size()));
    for (std::size_t r = s; r < e; ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) P(ix(r - s), ix(c)) = D(ix(rest[r]), ix(cols[c]));
    for (std::size_t r = s; r < e; ++r) {
      const auto sol = solve(P, SparseVec{{r - s, Rational(1)}});
      if (!sol)
        throw ConsistencyError("word " + F_.str(words[rest[r]]) + " is outside del(H) + sum q_1(b)H");
      Vector z = zero_vector(ix(dim));
      for (const auto& [c, v] : *sol) z(ix(cols[c])) = v;
      Vector resid = unit_vector(ix(dim), ix(rest[r])) - multiply(D, z);
      T.col(ix(rest[r])) = multiply(D, multiply(T, z)) + multiply(T, resid);
    }
    s = e;
  }
  return mult_[key] = std::move(T);
}

Matrix TautEngine::mult_matrix(const Class& alpha, int n) const {
  if (alpha.space != Space::H) throw SpaceError("tautological classes need a class in H");
  Matrix out = zero_matrix(ix(F_.dim(n)), ix(F_.dim(n)));
  for (std::size_t m = 0; m < M_.dim(); ++m)
    if (!alpha.coords(ix(m)).is_zero()) out += alpha.coords(ix(m)) * mult_matrix(m, n);
  return out;
}

Matrix TautEngine::component_matrix(const Class& alpha, int l, int n) const {
  const int shift = degree_of(alpha) + 2 * l - 4;
  Matrix T = mult_matrix(alpha, n);
  const auto deg = word_degrees(F_, n);
  for (Idx r = 0; r < T.rows(); ++r)
    for (Idx c = 0; c < T.cols(); ++c)
      if (deg[static_cast<std::size_t>(r)] - deg[static_cast<std::size_t>(c)] != shift) T(r, c) = Rational(0);
  return T;
}

FockVector TautEngine::taut_mul(const Class& alpha, int n, const FockVector& v) const {
  if (v.empty()) return {};
  const SparseVec x = F_.coords(v, n);
  return F_.vector(SparseVec::from_dense(multiply(mult_matrix(alpha, n), x.to_dense(F_.dim(n)))), n);
}

FockVector TautEngine::taut_component(const Class& alpha, int l, int n, const FockVector& v) const {
  if (v.empty()) return {};
  std::set<int> degs;
  for (const auto& [w, c] : v) degs.insert(F_.tridegree(w).d);
  if (degs.size() > 1) throw PreconditionError("taut_component needs a vector of one cohomological degree");
  const SparseVec x = F_.coords(v, n);
  return F_.vector(SparseVec::from_dense(multiply(component_matrix(alpha, l, n), x.to_dense(F_.dim(n)))), n);
}

FockVector TautEngine::taut_class(const Class& alpha, int l, int n) const {
  return taut_component(alpha, l, n, F_.unit_vector(n));
}

Decomposition TautEngine::decompose(int n, const FockVector& v, std::mt19937* rng) const {
  if (n < 1) throw PreconditionError("decompose needs n >= 1");
  F_.check_weight(n);
  Decomposition out;
  out.y.resize(M_.dim());
  const SparseVec x = F_.coords(v, n);
  const auto deg = word_degrees(F_, n);
  const auto deg_prev = word_degrees(F_, n - 1);
  const Matrix& D = boundary_matrix(n);

  std::set<int> degs;
  for (const auto& [i, c] : x) degs.insert(deg[i]);
  for (int d : degs) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < deg.size(); ++i)
      if (deg[i] == d) rows.push_back(i);
    // Unknowns: (class b, word of weight n-1 and degree d - deg b) then (z word of degree d - 2).
    struct Unknown {
      bool is_z;
      std::size_t cls, word;
    };
    std::vector<Unknown> unknowns;
    for (std::size_t b = 0; b < M_.dim(); ++b)
      for (std::size_t i = 0; i < deg_prev.size(); ++i)
        if (deg_prev[i] + M_.basis(b).d == d) unknowns.push_back({false, b, i});
    for (std::size_t i = 0; i < deg.size(); ++i)
      if (deg[i] == d - 2) unknowns.push_back({true, 0, i});

    Matrix A = zero_matrix(ix(rows.size()), ix(unknowns.size()));
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const Unknown& k = unknowns[u];
      const Matrix& src = k.is_z ? D : creation_matrix(k.cls, n);
      for (std::size_t r = 0; r < rows.size(); ++r) A(ix(r), ix(u)) = src(ix(rows[r]), ix(k.word));
    }
    SparseVec b;
    for (std::size_t r = 0; r < rows.size(); ++r) b.set(r, x.get(rows[r]));
    auto sol = solve(A, b);
    if (!sol) throw ConsistencyError("decompose: vector outside del(H) + sum q_1(b)H");
    if (rng) {
      std::uniform_int_distribution<int> coef(-3, 3);
      for (const auto& kv : nullspace(A)) sol->axpy(Rational(coef(*rng)), kv);
    }
    for (const auto& [u, c] : *sol) {
      const Unknown& k = unknowns[u];
      if (k.is_z)
        out.z.add(F_.basis(n)[k.word], c);
      else
        out.y[k.cls].add(F_.basis(n - 1)[k.word], c);
    }
  }
  return out;
}

FockVector TautEngine::taut_mul_randomized(const Class& alpha, int n, const FockVector& v,
                                           std::mt19937& rng) const {
  if (n == 0 || v.empty()) return {};
  const auto by_parity = M_.by_parity(alpha);
  if (by_parity.size() > 1) {
    FockVector sum;
    for (const auto& [p, part] : by_parity) sum += taut_mul_randomized(part, n, v, rng);
    return sum;
  }
  const int pa = by_parity.empty() ? 0 : by_parity.front().first;
  FockVector out;
  // Split by degree so the ∂z recursion strictly lowers the degree.
  std::map<int, FockVector> parts;
  for (const auto& [w, c] : v) parts[F_.tridegree(w).d].add(w, c);
  for (const auto& [d, part] : parts) {
    const Decomposition dec = decompose(n, part, &rng);
    for (std::size_t b = 0; b < M_.dim(); ++b) {
      const FockVector& y = dec.y[b];
      if (y.empty()) continue;
      const Class beta = M_.basis_class(b);
      const Matrix E = exp_ad_matrix(M_.cup(alpha, beta), n);
      const SparseVec yc = F_.coords(y, n - 1);
      out += F_.vector(SparseVec::from_dense(multiply(E, yc.to_dense(F_.dim(n - 1)))), n);
      FockVector inner = taut_mul_randomized(alpha, n - 1, y, rng);
      out += Rational(koszul(pa, M_.parity(b))) * H_.create(1, beta, inner);
    }
    if (!dec.z.empty()) out += H_.boundary(taut_mul_randomized(alpha, n, dec.z, rng));
  }
  return out;
}

FockVector TautEngine::remark_formula(const Class& alpha, int l, int n) const {
  if (l < 2) throw PreconditionError("the explicit formula needs l >= 2");
  const Class one = M_.unit();
  FockVector out;
  for (int i = 0; i < n; ++i) {
    FockVector v = FockVector::vacuum();
    for (int t = 0; t < n - 1 - i; ++t) v = H_.create(1, one, v);
    v = H_.ad_boundary_pow(l - 2, alpha, v);
    for (int t = 0; t < i; ++t) v = H_.create(1, one, v);
    out += v;
  }
  return Rational(1, 1) / factorial(static_cast<unsigned>(l - 2)) * out;
}

std::vector<TautGenerator> TautEngine::generators(int n) const {
  struct Key {
    int g, d, l;
    std::size_t cls;
  };
  std::vector<Key> keys;
  for (std::size_t c = 0; c < M_.dim(); ++c) {
    const auto& b = M_.basis(c);
    for (int l = 0; b.d + 2 * l - 4 <= 4 * n; ++l)
      if (b.d + 2 * l - 4 >= 0) keys.push_back({b.k, b.d, l, c});
  }
  std::stable_sort(keys.begin(), keys.end(),
                   [](const Key& a, const Key& b) { return std::tie(a.g, a.d, a.l) < std::tie(b.g, b.d, b.l); });
  std::vector<Matrix> mats(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) {
    mats[i] = component_matrix(M_.basis_class(keys[i].cls), keys[i].l, n);
  });
  std::vector<TautGenerator> out;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!is_zero(mats[i])) out.push_back({keys[i].cls, keys[i].l});
  return out;
}

CupTable TautEngine::cup_table(int n) const {
  F_.check_weight(n);
  CupTable t;
  t.n = n;
  t.basis = F_.basis(n);
  t.generators = generators(n);
  const std::size_t dim = t.basis.size();
  std::vector<Matrix> gen(t.generators.size());
  for (std::size_t g = 0; g < gen.size(); ++g)
    gen[g] = component_matrix(M_.basis_class(t.generators[g].cls), t.generators[g].l, n);

  // BFS over monomials applied to the unit; only span-enlarging monomials are kept.
  SpanBuilder span(dim);
  std::map<std::size_t, std::size_t> slot_to_mono;
  std::vector<Matrix> mono_mat;
  std::deque<std::size_t> queue;
  std::vector<Vector> mono_vec;

  const Vector unit = F_.coords(F_.unit_vector(n), n).to_dense(dim);
  auto accept = [&](const Vector& v, Matrix m, std::vector<std::size_t> word) {
    const std::size_t slot = span.inserted();
    if (!span.add(SparseVec::from_dense(v)).grew) return;
    slot_to_mono[slot] = mono_mat.size();
    queue.push_back(mono_mat.size());
    mono_mat.push_back(std::move(m));
    mono_vec.push_back(v);
    t.monomials.push_back(std::move(word));
  };
  accept(unit, identity_matrix(ix(dim)), {});
  while (!queue.empty() && span.rank() < dim) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < gen.size() && span.rank() < dim; ++g) {
      const Vector v = multiply(gen[g], mono_vec[cur]);
      if (is_zero(v)) continue;
      std::vector<std::size_t> word = t.monomials[cur];
      word.insert(word.begin(), g);
      accept(v, multiply(gen[g], mono_mat[cur]), std::move(word));
    }
  }
  if (span.rank() < dim)
    throw ConsistencyError("tautological classes do not generate weight " + std::to_string(n) +
                           ": unreached quotient dimension " + std::to_string(dim - span.rank()));

  t.word_in_monomials.resize(dim);
  t.left.resize(dim);
  parallel_for(dim, [&](std::size_t i) {
    const auto coords = span.express(SparseVec{{i, Rational(1)}});
    if (!coords) throw ConsistencyError("basis word outside the closed span");
    SparseVec in_mono;
    Matrix L = zero_matrix(ix(dim), ix(dim));
    for (const auto& [slot, c] : *coords) {
      const std::size_t m = slot_to_mono.at(slot);
      in_mono.set(m, c);
      L += c * mono_mat[m];
    }
    t.word_in_monomials[i] = std::move(in_mono);
    t.left[i] = std::move(L);
  });
  return t;
}

}  // namespace hilb
