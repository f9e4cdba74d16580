#include "hilb/fibration.hpp"

#include <numeric>
#include <sstream>

namespace hilb {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Rank and positive semidefiniteness of a symmetric rational matrix by exact
// symmetric elimination with diagonal pivots.
std::pair<std::size_t, bool> psd_rank(Matrix a) {
  const Idx n = a.rows();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::size_t rank = 0;
  for (;;) {
    Idx piv = -1;
    for (Idx i = 0; i < n; ++i)
      if (!used[static_cast<std::size_t>(i)] && a(i, i).sign() > 0) {
        piv = i;
        break;
      }
    if (piv < 0) break;
    used[static_cast<std::size_t>(piv)] = true;
    ++rank;
    const Rational d = a(piv, piv);
    for (Idx i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)] || a(i, piv).is_zero()) continue;
      const Rational f = a(i, piv) / d;
      for (Idx j = 0; j < n; ++j) a(i, j) -= f * a(piv, j);
    }
    for (Idx j = 0; j < n; ++j)
      if (!used[static_cast<std::size_t>(j)]) a(piv, j) = Rational(0);
  }
  // What is left must vanish: a negative diagonal, or a zero diagonal with a
  // nonzero off-diagonal entry, certifies indefiniteness.
  bool psd = true;
  for (Idx i = 0; i < n; ++i)
    for (Idx j = 0; j < n; ++j)
      if (!used[static_cast<std::size_t>(i)] && !used[static_cast<std::size_t>(j)] && !a(i, j).is_zero()) psd = false;
  return {rank, psd};
}

Matrix inverse(const Matrix& p) {
  const Idx n = p.rows();
  Matrix inv = zero_matrix(n, n);
  for (Idx j = 0; j < n; ++j) {
    const auto x = solve(p, SparseVec{{static_cast<std::size_t>(j), Rational(1)}});
    if (!x) throw ConsistencyError("adapted H^2 basis is singular");
    for (const auto& [i, v] : *x) inv(ix(i), j) = v;
  }
  return inv;
}

std::size_t positive_genus_count(const FiberData& fd) {
  std::size_t n = 0;
  for (const auto& c : fd.components) n += c.g > 0;
  return n;
}

// Columns: the adapted H² basis u_1..u_{k-1}, σ in p-coordinates.
Matrix adapted_basis(const FiberData& fd) {
  const std::size_t k = fd.components.size();
  Matrix P = zero_matrix(ix(k), ix(k));
  for (std::size_t t = 0; t + 1 < k; ++t) {
    P(ix(t), ix(t)) = Rational(fd.components[t + 1].b);
    P(ix(t + 1), ix(t)) = Rational(-fd.components[t].b);
  }
  if (positive_genus_count(fd) == 1) {
    for (std::size_t i = 0; i < k; ++i)
      if (fd.components[i].g > 0) P(ix(i), ix(k - 1)) = Rational(1);
  } else {
    long total = 0;
    for (const auto& c : fd.components) total += c.b;
    for (std::size_t i = 0; i < k; ++i) P(ix(i), ix(k - 1)) = Rational(1, total);
  }
  return P;
}

Json terms_json(const Vector& v, std::size_t offset) {
  Json t = Json::array();
  for (Idx i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) t.push_back(Json{{"m", offset + static_cast<std::size_t>(i)}, {"coeff", v(i).str()}});
  return t;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

FiberData fiber_from_json(const Json& j) {
  FiberData fd;
  try {
    fd.name = j.value("name", std::string("fiber"));
    for (const auto& c : j.at("components"))
      fd.components.push_back({c.at("label").get<std::string>(), c.at("g").get<int>(), c.at("pa").get<int>(),
                               c.value("b", 1)});
    auto index_of = [&](const Json& e) -> std::size_t {
      if (e.is_string()) {
        for (std::size_t i = 0; i < fd.components.size(); ++i)
          if (fd.components[i].label == e.get<std::string>()) return i;
        throw FiberError("edge names an unknown component '" + e.get<std::string>() + "'");
      }
      return e.get<std::size_t>();
    };
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw FiberError("edge must be a pair");
        fd.edges.emplace_back(index_of(e[0]), index_of(e[1]));
      }
  } catch (const Json::exception& e) {
    throw ParseError("malformed fiber JSON", e.what());
  }
  return fd;
}

Json fiber_to_json(const FiberData& fd) {
  Json j;
  j["name"] = fd.name;
  Json comps = Json::array();
  for (const auto& c : fd.components) comps.push_back(Json{{"label", c.label}, {"g", c.g}, {"pa", c.pa}, {"b", c.b}});
  j["components"] = comps;
  Json edges = Json::array();
  for (const auto& [a, b] : fd.edges) edges.push_back(Json::array({a, b}));
  j["edges"] = edges;
  return j;
}

FiberData load_fiber(const std::string& path) { return fiber_from_json(read_json(path)); }

std::vector<CatalogueEntry> load_catalogue(const std::string& path) {
  std::vector<CatalogueEntry> out;
  const Json j = read_json(path);
  try {
    for (const auto& f : j.at("fibers")) {
      CatalogueEntry e{fiber_from_json(f), std::nullopt, std::nullopt};
      if (f.contains("expected")) {
        const auto& x = f.at("expected");
        if (x.contains("elliptic")) e.elliptic = x.at("elliptic").get<bool>();
        if (x.contains("star")) e.star = x.at("star").get<bool>();
      }
      out.push_back(std::move(e));
    }
  } catch (const Json::exception& e) {
    throw ParseError("malformed fiber catalogue", e.what());
  }
  return out;
}

FiberValidation validate_fiber(const FiberData& fd) {
  const std::size_t k = fd.components.size();
  if (k == 0) throw FiberError("fiber has no components");
  std::vector<int> loops(k, 0);
  for (const auto& [a, b] : fd.edges) {
    if (a >= k || b >= k) throw FiberError("edge refers to a missing component");
    if (a == b) ++loops[a];
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto& c = fd.components[i];
    if (c.g < 0) throw FiberError("negative geometric genus on " + c.label, i);
    if (c.b < 1) throw FiberError("multiplicity must be >= 1 on " + c.label, i);
    if (c.pa < c.g + loops[i])
      throw FiberError("arithmetic genus of " + c.label + " is below geometric genus plus self-nodes", i);
  }
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [a, b] : fd.edges) parent[find_root(parent, a)] = find_root(parent, b);
  for (std::size_t i = 0; i < k; ++i)
    if (find_root(parent, i) != find_root(parent, 0)) throw FiberError("fiber is not connected", i);

  FiberValidation v;
  v.intersection = zero_matrix(ix(k), ix(k));
  for (const auto& [a, b] : fd.edges)
    if (a != b) {
      v.intersection(ix(a), ix(b)) += Rational(1);
      v.intersection(ix(b), ix(a)) += Rational(1);
    }
  for (std::size_t i = 0; i < k; ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) s += Rational(fd.components[j].b) * v.intersection(ix(i), ix(j));
    const Rational self = -s / Rational(fd.components[i].b);
    if (self.den() != 1)
      throw FiberError("self-intersection of " + fd.components[i].label + " would be " + self.str() +
                           ", not an integer",
                       i);
    v.intersection(ix(i), ix(i)) = self;
  }
  const auto [rank, psd] = psd_rank(-v.intersection);
  v.rank = rank;
  v.negative_semidefinite = psd;
  if (!psd) throw FiberError("intersection matrix is not negative semidefinite");
  if (rank + 1 != k)
    throw FiberError("intersection matrix has rank " + std::to_string(rank) + ", expected " + std::to_string(k - 1));
  return v;
}

FibrationReport analyze(const FiberData& fd) {
  const FiberValidation v = validate_fiber(fd);
  FibrationReport r;
  r.name = fd.name;
  r.k = fd.components.size();
  r.intersection = v.intersection;
  r.zariski_ok = v.ok();
  r.dim_im_cl = v.rank;
  r.positive_genus_count = positive_genus_count(fd);
  r.betti1 = fd.edges.size() + 1 - r.k;
  r.star_ok = r.positive_genus_count <= 1;
  Rational total(0);
  for (std::size_t j = 0; j < r.k; ++j) {
    const Rational self = v.intersection(ix(j), ix(j));
    r.self_intersections.push_back(self);
    r.K_coords.push_back(Rational(2 * fd.components[j].pa - 2) - self);
    total += Rational(fd.components[j].b) * r.K_coords.back();
  }
  r.elliptic = total.is_zero();
  r.predicted_n1 = true;
  r.predicted_n2 = r.elliptic;
  return r;
}

std::string to_text(const FibrationReport& r) {
  std::ostringstream os;
  os << "fiber: " << r.name << "\n";
  os << "  components: " << r.k << "\n";
  os << "  intersection matrix:\n";
  for (Idx i = 0; i < r.intersection.rows(); ++i) {
    os << "   ";
    for (Idx j = 0; j < r.intersection.cols(); ++j) os << " " << r.intersection(i, j).str();
    os << "\n";
  }
  os << "  self-intersections:";
  for (const auto& s : r.self_intersections) os << " " << s.str();
  os << "\n  zariski_ok: " << bool_str(r.zariski_ok) << "\n";
  os << "  dim Im cl: " << r.dim_im_cl << "\n";
  os << "  first Betti number of dual graph: " << r.betti1 << "\n";
  os << "  positive-genus components: " << r.positive_genus_count << "\n";
  os << "  star: " << bool_str(r.star_ok) << "\n";
  os << "  K coordinates:";
  for (const auto& c : r.K_coords) os << " " << c.str();
  os << "\n  elliptic: " << bool_str(r.elliptic) << "\n";
  os << "  predicted pi_1 multiplicative: " << bool_str(r.predicted_n1) << "\n";
  os << "  predicted pi_n (n >= 2) multiplicative: " << bool_str(r.predicted_n2) << "\n";
  return os.str();
}

Json to_json(const FibrationReport& r) {
  Json j;
  j["name"] = r.name;
  j["k"] = r.k;
  Json m = Json::array();
  for (Idx i = 0; i < r.intersection.rows(); ++i) {
    Json row = Json::array();
    for (Idx c = 0; c < r.intersection.cols(); ++c) row.push_back(rational_to_json(r.intersection(i, c)));
    m.push_back(row);
  }
  j["intersection_matrix"] = m;
  Json s = Json::array();
  for (const auto& x : r.self_intersections) s.push_back(rational_to_json(x));
  j["self_intersections"] = s;
  j["zariski_ok"] = r.zariski_ok;
  j["dim_im_cl"] = r.dim_im_cl;
  j["betti1"] = r.betti1;
  j["positive_genus_count"] = r.positive_genus_count;
  j["star_ok"] = r.star_ok;
  Json c = Json::array();
  for (const auto& x : r.K_coords) c.push_back(rational_to_json(x));
  j["K_coords"] = c;
  j["elliptic"] = r.elliptic;
  j["predicted"] = Json{{"n=1", r.predicted_n1}, {"n>=2", r.predicted_n2}};
  return j;
}

SurfaceModel emit_surface_model(const FiberData& fd) {
  const FibrationReport r = analyze(fd);
  const std::size_t k = r.k;
  const bool single = r.positive_genus_count == 1;

  Json j;
  j["name"] = fd.name;
  Json basis = Json::array();
  basis.push_back(Json{{"label", "1"}, {"d", 0}, {"k", 0}});
  struct Pair {
    std::size_t a, b, comp;
  };
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < k; ++c)
    for (int s = 1; s <= fd.components[c].g; ++s) {
      const std::string suffix = single ? std::to_string(s) : std::to_string(c + 1) + "_" + std::to_string(s);
      pairs.push_back({basis.size(), basis.size() + 1, c});
      basis.push_back(Json{{"label", "a" + suffix}, {"d", 1}, {"k", 1}});
      basis.push_back(Json{{"label", "b" + suffix}, {"d", 1}, {"k", 1}});
    }
  for (std::size_t t = 0; t < r.betti1; ++t)
    basis.push_back(Json{{"label", r.betti1 == 1 ? std::string("c") : "c" + std::to_string(t + 1)}, {"d", 1}, {"k", 1}});
  const std::size_t h2 = basis.size();
  if (k == 1) {
    basis.push_back(Json{{"label", "p"}, {"d", 2}, {"k", 2}});
  } else {
    for (std::size_t t = 0; t + 1 < k; ++t)
      basis.push_back(Json{{"label", k == 2 ? std::string("u") : "u" + std::to_string(t + 1)}, {"d", 2}, {"k", 1}});
    basis.push_back(Json{{"label", "s"}, {"d", 2}, {"k", 2}});
  }
  j["basis"] = basis;

  const Matrix P = adapted_basis(fd);
  const Matrix Pinv = inverse(P);
  Json cup = Json::array();
  for (const auto& pr : pairs)
    cup.push_back(Json{{"i", pr.a}, {"j", pr.b}, {"terms", terms_json(Pinv.col(ix(pr.comp)), h2)}});
  j["cup"] = cup;

  Vector c(ix(k));
  for (std::size_t i = 0; i < k; ++i) c(ix(i)) = r.K_coords[i];
  j["K"] = terms_json(multiply(Pinv, c), h2);

  const Matrix iota = multiply(multiply(Pinv, r.intersection), Matrix(Pinv.transpose()));
  Json io = Json::array();
  for (std::size_t t = 0; t < k; ++t) {
    const Vector row = iota.row(ix(t)).transpose();
    Json terms = terms_json(row, h2);
    if (!terms.empty()) io.push_back(Json{{"from_dual_of", h2 + t}, {"terms", terms}});
  }
  j["iota"] = io;
  return model_from_json(j);
}

EmissionCheck check_emission(const FiberData& fd, const SurfaceModel& m) {
  const std::size_t k = fd.components.size();
  const Matrix P = adapted_basis(fd);
  std::size_t h2 = m.dim();
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (m.basis(i).d == 2) {
      h2 = i;
      break;
    }
  if (h2 + k != m.dim()) throw ConsistencyError("emitted model does not carry one H^2 class per component");
  // H² part of a class, in p-coordinates.
  auto p_coords = [&](const Class& x) {
    Vector v(ix(k));
    for (std::size_t t = 0; t < k; ++t) v(ix(t)) = x.coords(ix(h2 + t));
    return Vector(multiply(P, v));
  };

  EmissionCheck out;
  Matrix cl = zero_matrix(ix(k), ix(k));
  out.im_cl_relation = true;
  for (std::size_t t = 0; t < k; ++t) {
    const Vector img = p_coords(m.iota(m.dual_class(h2 + t)));
    cl.col(ix(t)) = img;
    Rational s(0);
    for (std::size_t i = 0; i < k; ++i) s += Rational(fd.components[i].b) * img(ix(i));
    if (!s.is_zero()) out.im_cl_relation = false;
  }
  out.im_cl_dim = rank(cl);

  Vector b(ix(k));
  for (std::size_t i = 0; i < k; ++i) b(ix(i)) = Rational(fd.components[i].b);
  Class fiber = m.zero(Space::Hc);
  const Vector coeff = multiply(Matrix(P.transpose()), b);
  for (std::size_t t = 0; t < k; ++t) fiber.coords(ix(h2 + t)) = coeff(ix(t));
  out.fiber_class_killed = m.iota(fiber).is_zero();

  std::vector<Vector> im_c;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m.basis(i).d == 1 && m.basis(j).d == 1) im_c.push_back(p_coords(m.cup(m.basis_class(i), m.basis_class(j))));
  Matrix C = zero_matrix(ix(k), ix(im_c.size()));
  for (std::size_t t = 0; t < im_c.size(); ++t) C.col(ix(t)) = im_c[t];
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < k; ++i)
    if (fd.components[i].g > 0) positive.push_back(i);
  Matrix S = zero_matrix(ix(k), ix(positive.size()));
  for (std::size_t t = 0; t < positive.size(); ++t) S(ix(positive[t]), ix(t)) = Rational(1);
  Matrix CS(ix(k), C.cols() + S.cols());
  CS << C, S;
  const std::size_t rc = rank(C);
  out.im_c_matches = rc == rank(S) && rank(CS) == rc;

  Matrix CL(ix(k), C.cols() + cl.cols());
  CL << C, cl;
  out.im_c_cap_im_cl = rc + out.im_cl_dim - rank(CL);
  return out;
}

}  // namespace hilb
