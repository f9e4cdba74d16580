#include "hilb/heisenberg.hpp"

#include "hilb/parallel.hpp"

#include <algorithm>
#include <cctype>

namespace hilb {

int OpSpec::shift() const {
  switch (kind) {
    case Kind::Nakajima:
    case Kind::Virasoro:
      return n;
    case Kind::Boundary:
      return 0;
    case Kind::AdBoundaryPow:
      return 1;
  }
  return 0;
}

OpSpec parse_op(const SurfaceModel& m, const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  OpSpec op;
  if (s == "del" || s == "d") {
    op.kind = OpSpec::Kind::Boundary;
    return op;
  }
  const auto open = s.find('(');
  const auto comma = s.find(',');
  if (open == std::string::npos || comma == std::string::npos || s.back() != ')' || comma < open)
    throw ParseError("unknown operator", text);
  const std::string head = s.substr(0, open);
  if (head == "q")
    op.kind = OpSpec::Kind::Nakajima;
  else if (head == "L")
    op.kind = OpSpec::Kind::Virasoro;
  else if (head == "adq")
    op.kind = OpSpec::Kind::AdBoundaryPow;
  else
    throw ParseError("unknown operator", head);
  const std::string idx = s.substr(open + 1, comma - open - 1);
  try {
    std::size_t used = 0;
    op.n = std::stoi(idx, &used);
    if (used != idx.size()) throw ParseError("bad operator index", idx);
  } catch (const std::logic_error&) {
    throw ParseError("bad operator index", idx);
  }
  op.cls = m.parse_class(text.substr(text.find(',') + 1, text.rfind(')') - text.find(',') - 1));
  if (op.kind == OpSpec::Kind::AdBoundaryPow && op.n < 0)
    throw ParseError("ad-power must be nonnegative", idx);
  const bool wants_h = op.kind == OpSpec::Kind::AdBoundaryPow || op.n > 0 ||
                       (op.kind == OpSpec::Kind::Virasoro && op.n == 0);
  if (op.kind == OpSpec::Kind::Nakajima && op.n == 0) return op;
  if (wants_h && op.cls.space != Space::H)
    throw ParseError("operator needs a class in H (drop the ^)", text);
  if (!wants_h && op.cls.space != Space::Hc)
    throw ParseError("negative index needs a compactly supported class (label^)", text);
  return op;
}

std::string to_string(const SurfaceModel& m, const OpSpec& op) {
  switch (op.kind) {
    case OpSpec::Kind::Boundary:
      return "del";
    case OpSpec::Kind::Nakajima:
      return "q(" + std::to_string(op.n) + "," + m.class_str(op.cls) + ")";
    case OpSpec::Kind::Virasoro:
      return "L(" + std::to_string(op.n) + "," + m.class_str(op.cls) + ")";
    case OpSpec::Kind::AdBoundaryPow:
      return "adq(" + std::to_string(op.n) + "," + m.class_str(op.cls) + ")";
  }
  return {};
}

namespace {

int max_weight(const FockVector& v) {
  int w = 0;
  for (const auto& [word, c] : v) w = std::max(w, word.weight());
  return w;
}

}  // namespace

FockVector Heisenberg::create_word(int n, std::size_t cls, const Rational& c, const FockWord& w) const {
  const Generator g{n, cls};
  const int pg = M_.parity(cls);
  std::size_t pos = 0;
  int before = 0;
  while (pos < w.gens.size() && !(g < w.gens[pos])) {
    if (w.gens[pos] == g && pg == 1) return {};
    before ^= M_.parity(w.gens[pos].cls);
    ++pos;
  }
  FockWord out = w;
  out.gens.insert(out.gens.begin() + static_cast<long>(pos), g);
  return FockVector::word(std::move(out), Rational(koszul(pg, before)) * c);
}

FockVector Heisenberg::create(int n, const Class& alpha, const FockVector& v) const {
  if (n <= 0) throw PreconditionError("creation operator needs a positive index");
  if (alpha.space != Space::H)
    throw SpaceError("q_" + std::to_string(n) + " needs a class in H, got " + M_.class_str(alpha));
  FockVector out;
  for (std::size_t c = 0; c < M_.dim(); ++c) {
    const Rational& a = alpha.coords(static_cast<Eigen::Index>(c));
    if (a.is_zero()) continue;
    for (const auto& [w, x] : v) out += create_word(n, c, a * x, w);
  }
  return out;
}

FockVector Heisenberg::annihilate(int m, const Class& xi, const FockVector& v) const {
  if (m <= 0) throw PreconditionError("annihilation operator needs a positive part");
  if (xi.space != Space::Hc)
    throw SpaceError("q_-" + std::to_string(m) + " needs a class in H_c, got " + M_.class_str(xi));
  FockVector out;
  for (const auto& [px, part] : M_.by_parity(xi)) {
    std::vector<Rational> integ(M_.dim());
    for (std::size_t c = 0; c < M_.dim(); ++c) integ[c] = M_.integral_with_basis(part, c);
    for (const auto& [w, x] : v) {
      int before = 0;
      for (std::size_t i = 0; i < w.gens.size(); ++i) {
        const Generator& g = w.gens[i];
        if (g.n == m && !integ[g.cls].is_zero()) {
          FockWord rest = w;
          rest.gens.erase(rest.gens.begin() + static_cast<long>(i));
          out.add(rest, Rational(koszul(px, before) * -m) * integ[g.cls] * x);
        }
        before ^= M_.parity(g.cls);
      }
    }
  }
  return out;
}

FockVector Heisenberg::nakajima(int n, const Class& x, const FockVector& v) const {
  if (n == 0) return {};
  return n > 0 ? create(n, x, v) : annihilate(-n, x, v);
}

const std::vector<Heisenberg::DeltaTerm>& Heisenberg::delta(bool plus, const Class& x) const {
  const std::string key = (plus ? "+" : "-") + M_.class_str(x);
  {
    std::lock_guard lock(memo_mu_);
    auto it = delta_memo_.find(key);
    if (it != delta_memo_.end()) return it->second;
  }
  std::vector<DeltaTerm> terms;
  if (plus) {
    // Δ+(α) = Σ_i β_i ⊗ ε^i α with the left dual ε^i = (-1)^{|β_i|} β^i, so that ∫ε^i β_j = δ_ij.
    for (std::size_t i = 0; i < M_.dim(); ++i) {
      Class e = M_.compact_times(M_.dual_class(i), x);
      if (e.is_zero()) continue;
      if (M_.parity(i)) e.coords = Rational(-1) * e.coords;
      terms.push_back({M_.basis_class(i), M_.zero(Space::H), e, M_.iota(e), Rational(1)});
    }
  } else {
    // Δ-(ξ) = Σ_i β^i ⊗ β_i ξ.
    for (const auto& [px, part] : M_.by_parity(x))
      for (std::size_t i = 0; i < M_.dim(); ++i) {
        Class bxi = M_.module_mul(M_.basis_class(i), part);
        if (bxi.is_zero()) continue;
        Class bup = M_.dual_class(i);
        Class ibup = M_.iota(bup);
        Class ibxi = M_.iota(bxi);
        terms.push_back({std::move(bup), std::move(ibup), std::move(bxi), std::move(ibxi),
                         Rational(koszul(M_.parity(i), M_.parity(i) ^ px))});
      }
  }
  std::lock_guard lock(memo_mu_);
  return delta_memo_.try_emplace(key, std::move(terms)).first->second;
}

FockVector Heisenberg::virasoro(int n, const Class& x, const FockVector& v) const {
  const int w = max_weight(v);
  FockVector out;
  if (n >= 0) {
    if (x.space != Space::H)
      throw SpaceError("L_" + std::to_string(n) + " needs a class in H, got " + M_.class_str(x));
    FockVector half, full;
    for (const auto& t : delta(true, x)) {
      // t.left = β_i, t.right = ε^i α, t.right_h = ι(ε^i α)
      if (!t.right_h.is_zero())
        for (int k = 1; k < n; ++k) half += create(k, t.left, create(n - k, t.right_h, v));
      for (int k = n + 1; k <= n + w; ++k) full += create(k, t.left, annihilate(k - n, t.right, v));
    }
    // The k < 0 half of the normal-ordered sum equals the k > n half by super-symmetry.
    out.axpy(Rational(-1, 2), half);
    out.axpy(Rational(-1), full);
    return out;
  }
  if (x.space != Space::Hc)
    throw SpaceError("L_" + std::to_string(n) + " needs a class in H_c, got " + M_.class_str(x));
  FockVector sum;
  for (const auto& t : delta(false, x)) {
    // t.left = β^i, t.right = β_i ξ
    if (!t.left_h.is_zero())  // k > 0: q_k(ι β^i) q_{n-k}(β_i ξ)
      for (int k = 1; k - n <= w; ++k) sum += create(k, t.left_h, annihilate(k - n, t.right, v));
    if (!t.right_h.is_zero())  // k < n: normal ordering puts q_{n-k}(β_i ξ) first
      for (int k = n - 1; -k <= w; --k) sum.axpy(t.swap, create(n - k, t.right_h, annihilate(-k, t.left, v)));
    for (int k = n + 1; k < 0; ++k)  // n < k < 0: two annihilators
      sum += annihilate(-k, t.left, annihilate(k - n, t.right, v));
  }
  out.axpy(Rational(-1, 2), sum);
  return out;
}

FockVector Heisenberg::boundary_commutator(int n, const Class& alpha, const FockVector& v) const {
  if (n <= 0) throw PreconditionError("boundary commutator is only needed for positive n");
  FockVector out = Rational(n) * virasoro(n, alpha, v);
  const Rational c = binomial(n, 2);
  if (!c.is_zero()) out.axpy(c, create(n, M_.cup(M_.K(), alpha), v));
  return out;
}

FockVector Heisenberg::boundary_word(const FockWord& w) const {
  if (w.is_vacuum()) return {};
  {
    std::lock_guard lock(memo_mu_);
    auto it = boundary_memo_.find(w);
    if (it != boundary_memo_.end()) return it->second;
  }
  // ∂ q_g rest = [∂, q_g] rest + q_g ∂ rest; ∂ is even so no sign.
  const Generator g = w.gens.front();
  const FockWord rest{std::vector<Generator>(w.gens.begin() + 1, w.gens.end())};
  const Class a = M_.basis_class(g.cls);
  FockVector out = boundary_commutator(g.n, a, FockVector::word(rest));
  out += create(g.n, a, boundary_word(rest));
  std::lock_guard lock(memo_mu_);
  boundary_memo_.emplace(w, out);
  return out;
}

FockVector Heisenberg::boundary(const FockVector& v) const {
  FockVector out;
  for (const auto& [w, c] : v) out.axpy(c, boundary_word(w));
  return out;
}

FockVector Heisenberg::boundary_word_right(const FockWord& w) const {
  if (w.is_vacuum()) return {};
  // Move the last generator to the front, then peel it off.
  const Generator g = w.gens.back();
  const FockWord front{std::vector<Generator>(w.gens.begin(), w.gens.end() - 1)};
  const int s = koszul(M_.parity(g.cls), F_.parity(front));
  const Class a = M_.basis_class(g.cls);
  FockVector out = boundary_commutator(g.n, a, FockVector::word(front));
  out += create(g.n, a, boundary_word_right(front));
  return Rational(s) * out;
}

FockVector Heisenberg::boundary_rightmost(const FockVector& v) const {
  FockVector out;
  for (const auto& [w, c] : v) out.axpy(c, boundary_word_right(w));
  return out;
}

FockVector Heisenberg::ad_boundary_pow(int j, const Class& alpha, const FockVector& v) const {
  if (j < 0) throw PreconditionError("ad-power must be nonnegative");
  if (j == 0) return create(1, alpha, v);
  return boundary(ad_boundary_pow(j - 1, alpha, v)) - ad_boundary_pow(j - 1, alpha, boundary(v));
}

FockVector Heisenberg::apply(const OpSpec& op, const FockVector& v) const {
  switch (op.kind) {
    case OpSpec::Kind::Nakajima:
      return nakajima(op.n, op.cls, v);
    case OpSpec::Kind::Virasoro:
      return virasoro(op.n, op.cls, v);
    case OpSpec::Kind::Boundary:
      return boundary(v);
    case OpSpec::Kind::AdBoundaryPow:
      return ad_boundary_pow(op.n, op.cls, v);
  }
  return {};
}

Matrix Heisenberg::matrix(const std::function<FockVector(const FockVector&)>& f, int weight_in,
                          int weight_out) const {
  const auto& in = F_.basis(weight_in);
  Matrix out = zero_matrix(static_cast<Eigen::Index>(F_.dim(weight_out)), static_cast<Eigen::Index>(in.size()));
  parallel_for(in.size(), [&](std::size_t j) {
    const FockVector img = f(FockVector::word(in[j]));
    for (const auto& [i, c] : F_.coords(img, weight_out))
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
  });
  return out;
}

OperatorMatrix Heisenberg::matrix(const OpSpec& op, int weight_in) const {
  const int weight_out = weight_in + op.shift();
  if (weight_out < 0) throw PreconditionError("operator lowers weight below zero");
  return {weight_in, weight_out,
          matrix([&](const FockVector& v) { return apply(op, v); }, weight_in, weight_out)};
}

std::map<int, FockVector> g_components(const FockSpace& F, const FockVector& v) {
  std::map<int, FockVector> out;
  for (const auto& [w, c] : v) out[F.tridegree(w).k].add(w, c);
  return out;
}

std::set<TriDegree> tridegrees(const FockSpace& F, const FockVector& v) {
  std::set<TriDegree> out;
  for (const auto& [w, c] : v) out.insert(F.tridegree(w));
  return out;
}

}  // namespace hilb
