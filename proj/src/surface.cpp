#include "hilb/surface.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hilb {

namespace {

constexpr std::size_t kMaxWitnesses = 25;

void add_witness(ValidationItem& item, std::string w) {
  item.passed = false;
  if (item.witnesses.size() < kMaxWitnesses) item.witnesses.push_back(std::move(w));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; });
}

SurfaceModel::SurfaceModel(std::string name, std::vector<BasisClass> basis,
                           const std::vector<CupEntry>& cup, SparseVec K,
                           const std::vector<std::pair<std::size_t, SparseVec>>& iota)
    : name_(std::move(name)), basis_(std::move(basis)) {
  const std::size_t n = basis_.size();
  if (n == 0) throw ModelError("model has an empty basis");
  bool have_unit = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = basis_[i];
    if (b.label.empty() || b.label.find_first_of(" ^().,+-*/") != std::string::npos)
      throw ModelError("invalid class label '" + b.label + "'");
    if (b.d < 0 || b.d > 4)
      throw ModelError("class '" + b.label + "' has degree " + std::to_string(b.d) +
                       " outside 0..4");
    if (b.k < 0 || b.k > 2)
      throw ModelError("class '" + b.label + "' has G-degree " + std::to_string(b.k) +
                       " outside 0..2");
    for (std::size_t j = 0; j < i; ++j)
      if (basis_[j].label == b.label) throw ModelError("duplicate class label '" + b.label + "'");
    if (b.d == 0 && !have_unit) {
      unit_ = i;
      have_unit = true;
    }
  }
  if (!have_unit) throw ModelError("model has no degree-0 class");

  auto check_index = [n](std::size_t idx, const std::string& where) {
    if (idx >= n)
      throw ModelError(where + ": index " + std::to_string(idx) + " out of range (dim " +
                       std::to_string(n) + ")");
  };

  const Eigen::Index dn = static_cast<Eigen::Index>(n);
  cup_.assign(n * n, zero_vector(dn));
  std::vector<bool> given(n * n, false);
  for (const auto& e : cup) {
    check_index(e.i, "cup entry");
    check_index(e.j, "cup entry");
    if (e.terms.extent() > n) check_index(e.terms.extent() - 1, "cup term");
    cup_[e.i * n + e.j] = e.terms.to_dense(n);
    given[e.i * n + e.j] = true;
  }
  for (const auto& e : cup) {
    if (e.i == e.j || given[e.j * n + e.i]) continue;
    const int s = koszul(basis_[e.i].d, basis_[e.j].d);
    cup_[e.j * n + e.i] = Rational(s) * cup_[e.i * n + e.j];
    given[e.j * n + e.i] = true;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!given[unit_ * n + x]) cup_[unit_ * n + x] = hilb::unit_vector(dn, static_cast<Eigen::Index>(x));
    if (!given[x * n + unit_]) cup_[x * n + unit_] = hilb::unit_vector(dn, static_cast<Eigen::Index>(x));
  }

  if (K.extent() > n) check_index(K.extent() - 1, "K term");
  K_ = {Space::H, K.to_dense(n)};
  for (const auto& [m, c] : K)
    if (basis_[m].d != 2)
      throw ModelError("K has a coefficient on '" + basis_[m].label + "' which is not of degree 2");

  iota_ = zero_matrix(dn, dn);
  for (const auto& [from, terms] : iota) {
    check_index(from, "iota entry");
    if (terms.extent() > n) check_index(terms.extent() - 1, "iota term");
    for (const auto& [m, c] : terms)
      iota_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(from)) = c;
  }

  strong_ = compute_strong().first;
}

std::optional<std::size_t> SurfaceModel::find(const std::string& label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].label == label) return i;
  return std::nullopt;
}

Class SurfaceModel::basis_class(std::size_t i) const {
  return {Space::H, hilb::unit_vector(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(i))};
}

Class SurfaceModel::dual_class(std::size_t i) const {
  return {Space::Hc, hilb::unit_vector(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(i))};
}

std::vector<std::pair<Class, Class>> SurfaceModel::dual_basis() const {
  std::vector<std::pair<Class, Class>> out;
  for (std::size_t i = 0; i < dim(); ++i) out.emplace_back(basis_class(i), dual_class(i));
  return out;
}

void SurfaceModel::check_class(const Class& x, Space expected, const char* what) const {
  if (x.space != expected)
    throw SpaceError(std::string(what) + ": expected a class in " +
                     (expected == Space::H ? "H" : "H_c") + ", got one in " +
                     (x.space == Space::H ? "H" : "H_c"));
  if (static_cast<std::size_t>(x.coords.size()) != dim())
    throw DimensionError(std::string(what) + ": class dimension", dim(),
                         static_cast<std::size_t>(x.coords.size()));
}

Class SurfaceModel::cup(const Class& a, const Class& b) const {
  check_class(a, Space::H, "cup");
  check_class(b, Space::H, "cup");
  Class r = zero(Space::H);
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& ai = a.coords(static_cast<Eigen::Index>(i));
    if (ai.is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& bj = b.coords(static_cast<Eigen::Index>(j));
      if (bj.is_zero()) continue;
      r.coords += (ai * bj) * cup_basis(i, j);
    }
  }
  return r;
}

// (β_i·β^l)_j = (-1)^{|β_i||β_j|} c_{ij}^l: the adjointness rule written in coordinates.
Class SurfaceModel::module_mul(const Class& a, const Class& xi) const {
  check_class(a, Space::H, "module_mul");
  check_class(xi, Space::Hc, "module_mul");
  Class r = zero(Space::Hc);
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& ai = a.coords(static_cast<Eigen::Index>(i));
    if (ai.is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const Vector& c = cup_basis(i, j);
      Rational s;
      for (std::size_t l = 0; l < n; ++l) {
        const Rational& xl = xi.coords(static_cast<Eigen::Index>(l));
        if (xl.is_zero() || c(static_cast<Eigen::Index>(l)).is_zero()) continue;
        s += xl * c(static_cast<Eigen::Index>(l));
      }
      if (!s.is_zero())
        r.coords(static_cast<Eigen::Index>(j)) += Rational(koszul(parity(i), parity(j))) * ai * s;
    }
  }
  return r;
}

Class SurfaceModel::compact_times(const Class& xi, const Class& a) const {
  check_class(xi, Space::Hc, "compact_times");
  check_class(a, Space::H, "compact_times");
  Class r = zero(Space::Hc);
  for (const auto& [pa, ap] : by_parity(a))
    for (const auto& [px, xp] : by_parity(xi))
      r.coords += Rational(koszul(pa, px)) * module_mul(ap, xp).coords;
  return r;
}

Class SurfaceModel::iota(const Class& xi) const {
  check_class(xi, Space::Hc, "iota");
  return {Space::H, multiply(iota_, xi.coords)};
}

Class SurfaceModel::product(const Class& x, const Class& y) const {
  if (x.space == Space::H && y.space == Space::H) return cup(x, y);
  if (x.space == Space::H) return module_mul(x, y);
  if (y.space == Space::H) return compact_times(x, y);
  return module_mul(iota(x), y);
}

Rational SurfaceModel::integral(const Class& xi) const {
  check_class(xi, Space::Hc, "integral");
  return xi.coords(static_cast<Eigen::Index>(unit_));
}

Rational SurfaceModel::integral_with_basis(const Class& xi, std::size_t c) const {
  check_class(xi, Space::Hc, "integral");
  // ∫ξ·β_c = Σ_l (-1)^{|ξ_l||β_c|} ∫β_c·ξ_l and ∫β_c·β^l is the unit coordinate of β_c·β^l.
  const Vector& row = cup_basis(c, unit_);
  Rational s;
  for (std::size_t l = 0; l < dim(); ++l) {
    const Rational& x = xi.coords(static_cast<Eigen::Index>(l));
    if (x.is_zero() || row(static_cast<Eigen::Index>(l)).is_zero()) continue;
    s += Rational(koszul(parity(l), parity(c))) * x * row(static_cast<Eigen::Index>(l));
  }
  return s;
}

Rational SurfaceModel::integral_of_product(const Class& x, const Class& y) const {
  if (x.space == Space::H && y.space == Space::H)
    throw SpaceError("integral of a product of two H classes is undefined on a noncompact surface");
  return integral(product(x, y));
}

std::set<int> SurfaceModel::gdegrees(const Class& x) const {
  std::set<int> s;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!x.coords(static_cast<Eigen::Index>(i)).is_zero()) s.insert(gdegree(x.space, i));
  return s;
}

std::set<int> SurfaceModel::degrees(const Class& x) const {
  std::set<int> s;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!x.coords(static_cast<Eigen::Index>(i)).is_zero()) s.insert(degree(x.space, i));
  return s;
}

std::set<int> SurfaceModel::parities(const Class& x) const {
  std::set<int> s;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!x.coords(static_cast<Eigen::Index>(i)).is_zero()) s.insert(parity(i));
  return s;
}

std::vector<std::pair<int, Class>> SurfaceModel::by_parity(const Class& x) const {
  std::vector<std::pair<int, Class>> out;
  for (int p : {0, 1}) {
    Class part = zero(x.space);
    bool any = false;
    for (std::size_t i = 0; i < dim(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      if (parity(i) == p && !x.coords(idx).is_zero()) {
        part.coords(idx) = x.coords(idx);
        any = true;
      }
    }
    if (any) out.emplace_back(p, std::move(part));
  }
  return out;
}

std::optional<int> SurfaceModel::k_gdegree() const {
  const auto g = gdegrees(K_);
  if (g.size() != 1) return std::nullopt;
  return *g.begin();
}

bool SurfaceModel::k_within(int bound) const {
  if (K_.is_zero()) return true;
  const auto g = k_gdegree();
  return g && *g <= bound;
}

std::pair<bool, std::string> SurfaceModel::compute_strong() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        if (!cup_basis(i, j)(static_cast<Eigen::Index>(m)).is_zero() &&
            basis_[m].k != basis_[i].k + basis_[j].k)
          return {false, basis_[i].label + "·" + basis_[j].label + " has a " + basis_[m].label +
                             "-component: g = " + std::to_string(basis_[m].k) + " != " +
                             std::to_string(basis_[i].k) + " + " + std::to_string(basis_[j].k)};
  return {true, {}};
}

ValidationReport SurfaceModel::validate() const {
  ValidationReport rep;
  const std::size_t n = dim();
  const auto lab = [this](std::size_t i) { return basis_[i].label; };
  const auto dual = [this](std::size_t i) { return basis_[i].label + "^"; };
  const auto E = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  ValidationItem connected{"connected (dim H^0 = 1, unit has G-degree 0)", true, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (basis_[i].d == 0 && i != unit_) add_witness(connected, "second degree-0 class " + lab(i));
    if (i == unit_ && basis_[i].k != 0) add_witness(connected, "unit " + lab(i) + " has k != 0");
  }
  rep.items.push_back(connected);

  ValidationItem supercomm{"super-commutativity", true, {}};
  ValidationItem additive{"degree additivity", true, {}};
  ValidationItem unit{"unit law", true, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (cup_basis(unit_, i) != hilb::unit_vector(E(n), E(i)) ||
        cup_basis(i, unit_) != hilb::unit_vector(E(n), E(i)))
      add_witness(unit, "(" + lab(unit_) + "," + lab(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      const Rational s(koszul(basis_[i].d, basis_[j].d));
      for (std::size_t m = 0; m < n; ++m) {
        const Rational& cij = cup_basis(i, j)(E(m));
        if (cij != s * cup_basis(j, i)(E(m)))
          add_witness(supercomm, "(" + lab(i) + "," + lab(j) + ") -> " + lab(m) + ": " +
                                     cij.str() + " vs " + cup_basis(j, i)(E(m)).str());
        if (!cij.is_zero() && basis_[m].d != basis_[i].d + basis_[j].d)
          add_witness(additive, "(" + lab(i) + "," + lab(j) + ") -> " + lab(m));
      }
    }
  }
  rep.items.push_back(supercomm);
  rep.items.push_back(additive);
  rep.items.push_back(unit);

  ValidationItem assoc{"associativity", true, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const Class a = basis_class(i), b = basis_class(j), c = basis_class(l);
        if (!(cup(cup(a, b), c) == cup(a, cup(b, c))))
          add_witness(assoc, "(" + lab(i) + "," + lab(j) + "," + lab(l) + ")");
      }
  rep.items.push_back(assoc);

  ValidationItem adjoint{"module adjointness", true, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) {
        const Class a = basis_class(i), xi = dual_class(l), b = basis_class(j);
        // ∫(a·ξ)·b = (-1)^{|a||ξ|} ∫ξ·(a·b)
        const Rational lhs = integral_of_product(module_mul(a, xi), b);
        const Rational rhs =
            Rational(koszul(parity(i), parity(l))) * integral_of_product(xi, cup(a, b));
        if (lhs != rhs) add_witness(adjoint, "(" + lab(i) + "," + dual(l) + "," + lab(j) + ")");
      }
  rep.items.push_back(adjoint);

  ValidationItem iota_deg{"iota preserves degree and G-degree", true, {}};
  ValidationItem iota_mod{"iota is a module map", true, {}};
  ValidationItem iota_sym{"iota form is super-symmetric", true, {}};
  for (std::size_t l = 0; l < n; ++l) {
    const Class img = iota(dual_class(l));
    for (std::size_t m = 0; m < n; ++m) {
      if (img.coords(E(m)).is_zero()) continue;
      if (basis_[m].d != degree(Space::Hc, l) || basis_[m].k != gdegree(Space::Hc, l))
        add_witness(iota_deg, "iota(" + dual(l) + ") has a " + lab(m) + "-component");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Class a = basis_class(i), xi = dual_class(l);
      if (!(iota(module_mul(a, xi)) == cup(a, iota(xi))))
        add_witness(iota_mod, "(" + lab(i) + "," + dual(l) + ")");
    }
    for (std::size_t m = 0; m < n; ++m) {
      // ∫ι(η)·ξ = (-1)^{|η||ξ|} ∫ι(ξ)·η
      const Class eta = dual_class(l), xi = dual_class(m);
      if (pair(iota(eta), xi) != Rational(koszul(parity(l), parity(m))) * pair(iota(xi), eta))
        add_witness(iota_sym, "(" + dual(l) + "," + dual(m) + ")");
    }
  }
  rep.items.push_back(iota_deg);
  rep.items.push_back(iota_mod);
  rep.items.push_back(iota_sym);

  auto [strong, witness] = compute_strong();
  rep.strongly_multiplicative = strong;
  rep.strong_witness = witness;
  return rep;
}

std::string SurfaceModel::class_str(const Class& x) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim(); ++i) {
    Rational c = x.coords(static_cast<Eigen::Index>(i));
    if (c.is_zero()) continue;
    if (c.sign() < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    if (c != Rational(1)) os << c << ' ';
    os << basis_[i].label << (x.space == Space::Hc ? "^" : "");
    first = false;
  }
  if (first) os << '0';
  return os.str();
}

Class SurfaceModel::parse_class(const std::string& text) const {
  std::optional<Space> space;
  Class out;
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty class expression", text);
  if (s == "0") return zero(Space::H);
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-' in class expression", s.substr(pos));
    }
    first = false;
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = trim(s.substr(pos, end - pos));
    pos = end;
    if (term.empty()) throw ParseError("empty term in class expression", text);
    Rational coeff(sign);
    std::string label = term;
    const auto sep = term.find_last_of(" *");
    if (sep != std::string::npos) {
      coeff *= Rational::parse(trim(term.substr(0, sep)));
      label = trim(term.substr(sep + 1));
    }
    Space sp = Space::H;
    if (!label.empty() && label.back() == '^') {
      sp = Space::Hc;
      label.pop_back();
    }
    const auto idx = find(label);
    if (!idx) throw ParseError("unknown class label", label);
    if (space && *space != sp) throw ParseError("class expression mixes H and H_c", text);
    if (!space) {
      space = sp;
      out = zero(sp);
    }
    out.coords(static_cast<Eigen::Index>(*idx)) += coeff;
  }
  return out;
}

}  // namespace hilb
