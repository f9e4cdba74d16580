#include "hilb/verify.hpp"

#include "hilb/parallel.hpp"

#include <sstream>

namespace hilb {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

std::string verdict(bool pass) { return pass ? "pass" : "fail"; }

std::string word_str(const FockSpace& F, const FockWord& w) { return F.str(w); }

// Classes usable as the argument of an index-n operator, with their (d, k).
struct PureClass {
  Class cls;
  std::string label;
  int d, k, parity;
};

std::vector<PureClass> classes_for(const SurfaceModel& m, bool compact) {
  std::vector<PureClass> out;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const Space s = compact ? Space::Hc : Space::H;
    out.push_back({compact ? m.dual_class(i) : m.basis_class(i), m.basis(i).label + (compact ? "^" : ""),
                   m.degree(s, i), m.gdegree(s, i), m.parity(i)});
  }
  return out;
}

// Cache of operator matrices keyed by a printable name and source weight.
class MatrixCache {
 public:
  explicit MatrixCache(const Heisenberg& H) : H_(H) {}
  const Matrix& get(const OpSpec& op, int w) {
    const std::string key = to_string(H_.space().model(), op) + "@" + std::to_string(w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_[key] = H_.matrix(op, w).matrix;
  }

 private:
  const Heisenberg& H_;
  std::map<std::string, Matrix> cache_;
};

// First column where a and b differ, rendered as a witness.
Witness matrix_witness(const FockSpace& F, const std::string& input, const Matrix& lhs, const Matrix& rhs,
                       int w_in, int w_out) {
  for (Idx c = 0; c < lhs.cols(); ++c) {
    if (lhs.col(c) == rhs.col(c)) continue;
    const FockVector got = F.vector(SparseVec::from_dense(lhs.col(c)), w_out);
    const FockVector want = F.vector(SparseVec::from_dense(rhs.col(c)), w_out);
    const std::string on = F.str(F.basis(w_in)[static_cast<std::size_t>(c)]);
    return {input + " on " + on, F.str(want), F.str(got), got};
  }
  return {input, "", "", {}};
}

std::string hyp_gk(const SurfaceModel& m) {
  if (m.k_is_zero()) return "K = 0";
  const auto g = m.k_gdegree();
  return g ? std::to_string(*g) : "mixed";
}

}  // namespace

PerversityValue PerversityValue::of(const FockSpace& F, const FockVector& v) {
  PerversityValue p;
  for (const auto& [w, c] : v) {
    const int k = F.tridegree(w).k;
    if (!p.p || k > *p.p) p.p = k;
  }
  return p;
}

void AuditReport::add_witness(Witness w) {
  if (witnesses.size() < kWitnessCap) witnesses.push_back(std::move(w));
}

std::string describe(const FockSpace& F, const FockVector& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  os << F.str(v) << " [";
  bool first = true;
  for (const auto& [g, part] : g_components(F, v)) {
    os << (first ? "" : "; ") << "g" << g << ": " << F.str(part);
    first = false;
  }
  os << "]";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> model_hypotheses(const SurfaceModel& m) {
  return {{"model", m.name()},
          {"strongly_multiplicative", m.strongly_multiplicative() ? "true" : "false"},
          {"g(K)", hyp_gk(m)}};
}

std::string to_text(const AuditReport& r) {
  std::ostringstream os;
  os << "audit: " << r.name << "\n";
  for (const auto& [k, v] : r.hypotheses) os << "  " << k << ": " << v << "\n";
  for (const auto& [k, v] : r.facts) os << "  " << k << ": " << v << "\n";
  auto print_witnesses = [&](const std::vector<Witness>& ws, const char* indent) {
    for (const auto& w : ws)
      os << indent << "witness: " << w.input << "; expected " << w.expected << "; observed " << w.observed << "\n";
  };
  for (const auto& it : r.items) {
    os << "  item " << it.id << " " << it.name << ": " << verdict(it.holds) << " (required " << it.required
       << ", " << it.checked << " checks)\n";
    print_witnesses(it.witnesses, "    ");
  }
  print_witnesses(r.witnesses, "  ");
  os << "  checks: " << r.checked << "\n";
  os << "  verdict: " << verdict(r.pass) << "\n";
  return os.str();
}

Json to_json(const FockSpace& F, const AuditReport& r) {
  auto wjson = [&](const std::vector<Witness>& ws) {
    Json a = Json::array();
    for (const auto& w : ws)
      a.push_back(Json{{"input", w.input}, {"expected", w.expected}, {"observed", w.observed},
                       {"vector", F.str(w.vector)}});
    return a;
  };
  Json j;
  j["name"] = r.name;
  Json h = Json::object();
  for (const auto& [k, v] : r.hypotheses) h[k] = v;
  j["hypotheses"] = h;
  Json f = Json::object();
  for (const auto& [k, v] : r.facts) f[k] = v;
  j["facts"] = f;
  Json items = Json::array();
  for (const auto& it : r.items)
    items.push_back(Json{{"id", it.id},
                         {"name", it.name},
                         {"verdict", verdict(it.holds)},
                         {"required", it.required},
                         {"checks", it.checked},
                         {"witnesses", wjson(it.witnesses)}});
  j["items"] = items;
  j["witnesses"] = wjson(r.witnesses);
  j["checks"] = r.checked;
  j["verdict"] = verdict(r.pass);
  return j;
}

AuditReport audit_relations(const Heisenberg& H, int max_weight, int max_index) {
  if (max_weight < 1 || max_index < 1) throw PreconditionError("audit_relations bounds must be >= 1");
  const FockSpace& F = H.space();
  const SurfaceModel& m = F.model();
  AuditReport rep;
  rep.name = "relations (weight <= " + std::to_string(max_weight) + ", |index| <= " + std::to_string(max_index) + ")";
  rep.hypotheses = model_hypotheses(m);
  F.check_weight(max_weight);
  MatrixCache cache(H);
  auto in_range = [&](std::initializer_list<int> ws) {
    for (int w : ws)
      if (w < 0 || w > max_weight) return false;
    return true;
  };
  auto zero = [&](int wout, int win) { return zero_matrix(ix(F.dim(wout)), ix(F.dim(win))); };

  AuditItem heis{1, "[q_a(x), q_b(y)] = a delta_{a+b,0} int xy", "pass", true, 0, {}};
  AuditItem vir{2, "[L_m(b), q_n(a)] = n q_{m+n}(ba)", "pass", true, 0, {}};
  for (int a = -max_index; a <= max_index; ++a) {
    if (a == 0) continue;
    for (int b = -max_index; b <= max_index; ++b) {
      if (b == 0) continue;
      for (const auto& x : classes_for(m, a < 0))
        for (const auto& y : classes_for(m, b < 0)) {
          const OpSpec qa{OpSpec::Kind::Nakajima, a, x.cls}, qb{OpSpec::Kind::Nakajima, b, y.cls};
          const Rational sign(koszul(x.parity, y.parity));
          const Rational scal = a + b == 0 ? Rational(a) * m.integral_of_product(x.cls, y.cls) : Rational(0);
          for (int w = 0; w <= max_weight; ++w) {
            if (!in_range({w + a, w + b, w + a + b})) continue;
            const Matrix lhs = multiply(cache.get(qa, w + b), cache.get(qb, w)) -
                               sign * multiply(cache.get(qb, w + a), cache.get(qa, w));
            Matrix rhs = zero(w + a + b, w);
            if (a + b == 0) rhs = scal * identity_matrix(ix(F.dim(w)));
            ++heis.checked;
            if (!equal(lhs, rhs)) {
              heis.holds = false;
              if (heis.witnesses.size() < AuditReport::kWitnessCap)
                heis.witnesses.push_back(matrix_witness(
                    F, "[q" + std::to_string(a) + "(" + x.label + "), q" + std::to_string(b) + "(" + y.label + ")]",
                    lhs, rhs, w, w + a + b));
            }
          }
        }
    }
  }
  for (int mm = -max_index; mm <= max_index; ++mm)
    for (int n = -max_index; n <= max_index; ++n) {
      if (n == 0) continue;
      for (const auto& bcls : classes_for(m, mm < 0))
        for (const auto& acls : classes_for(m, n < 0)) {
          const OpSpec L{OpSpec::Kind::Virasoro, mm, bcls.cls}, q{OpSpec::Kind::Nakajima, n, acls.cls};
          const Rational sign(koszul(bcls.parity, acls.parity));
          Class ba = m.product(bcls.cls, acls.cls);
          if (mm + n > 0) ba = m.to_H(ba);
          for (int w = 0; w <= max_weight; ++w) {
            if (!in_range({w + n, w + mm, w + mm + n})) continue;
            const Matrix lhs = multiply(cache.get(L, w + n), cache.get(q, w)) -
                               sign * multiply(cache.get(q, w + mm), cache.get(L, w));
            Matrix rhs = zero(w + mm + n, w);
            if (mm + n != 0 && !ba.is_zero())
              rhs = Rational(n) * H.matrix(OpSpec{OpSpec::Kind::Nakajima, mm + n, ba}, w).matrix;
            ++vir.checked;
            if (!equal(lhs, rhs)) {
              vir.holds = false;
              if (vir.witnesses.size() < AuditReport::kWitnessCap)
                vir.witnesses.push_back(matrix_witness(F,
                                                       "[L" + std::to_string(mm) + "(" + bcls.label + "), q" +
                                                           std::to_string(n) + "(" + acls.label + ")]",
                                                       lhs, rhs, w, w + mm + n));
            }
          }
        }
    }
  rep.checked = heis.checked + vir.checked;
  rep.pass = heis.holds && vir.holds;
  rep.items = {std::move(heis), std::move(vir)};
  return rep;
}

AuditReport audit_purity(const TautEngine& T, int n) {
  const Heisenberg& H = T.heisenberg();
  const FockSpace& F = H.space();
  const SurfaceModel& m = F.model();
  F.check_weight(n);
  AuditReport rep;
  rep.name = "purity (n = " + std::to_string(n) + ")";
  rep.hypotheses = model_hypotheses(m);

  const bool strong = m.strongly_multiplicative();
  const bool k_ok = m.k_is_zero() || m.k_gdegree() == 1;
  const std::string req45 = strong && k_ok ? "pass" : (m.k_gdegree() == 2 ? "fail" : "none");

  // Checks every column of op (weight w_in -> w_in + shift.n) against the tri-degree shift.
  auto check = [&](AuditItem& item, const std::string& label, int w_in, const TriDegree& shift,
                   const std::function<FockVector(const FockVector&)>& op) {
    if (w_in < 0) return;
    const auto& words = F.basis(w_in);
    std::vector<FockVector> outs(words.size());
    parallel_for(words.size(), [&](std::size_t i) { outs[i] = op(FockVector::word(words[i])); });
    for (std::size_t i = 0; i < words.size(); ++i) {
      ++item.checked;
      const TriDegree want = F.tridegree(words[i]) + shift;
      bool ok = true;
      for (const auto& [w, c] : outs[i])
        if (F.tridegree(w) != want) ok = false;
      if (ok) continue;
      item.holds = false;
      if (item.witnesses.size() < AuditReport::kWitnessCap)
        item.witnesses.push_back({label + " on " + word_str(F, words[i]), to_string(want), describe(F, outs[i]), outs[i]});
    }
  };

  AuditItem i1{1, "q_n(a) has degree (n, d+2n-2, k+n-1)", "pass", true, 0, {}};
  AuditItem i2{2, "L_n(1) has degree (n, 2n, n)", "pass", true, 0, {}};
  AuditItem i3{3, "L_n(a) has degree (n, d+2n, k+n)", strong ? "pass" : "none", true, 0, {}};
  AuditItem i4{4, "del has degree (0, 2, 1)", req45, true, 0, {}};
  AuditItem i5{5, "cup with a^[n]_l has degree (0, d+2l-4, k+l-2)", req45, true, 0, {}};

  for (int j = -n; j <= n; ++j) {
    if (j == 0) continue;
    const int w_in = j > 0 ? n - j : n;
    for (const auto& a : classes_for(m, j < 0))
      check(i1, "q" + std::to_string(j) + "(" + a.label + ")", w_in, {j, a.d + 2 * j - 2, a.k + j - 1},
            [&](const FockVector& v) { return H.nakajima(j, a.cls, v); });
  }
  for (int j = 0; j <= n; ++j)
    check(i2, "L" + std::to_string(j) + "(1)", n - j, {j, 2 * j, j},
          [&](const FockVector& v) { return H.virasoro(j, m.unit(), v); });
  for (int j = -n; j <= n; ++j) {
    const int w_in = j >= 0 ? n - j : n;
    for (const auto& a : classes_for(m, j < 0))
      check(i3, "L" + std::to_string(j) + "(" + a.label + ")", w_in, {j, a.d + 2 * j, a.k + j},
            [&](const FockVector& v) { return H.virasoro(j, a.cls, v); });
  }
  check(i4, "del", n, {0, 2, 1}, [&](const FockVector& v) { return H.boundary(v); });
  for (const auto& a : classes_for(m, false))
    for (int l = 0; a.d + 2 * l - 4 <= 4 * n; ++l) {
      if (a.d + 2 * l - 4 < 0) continue;
      const Matrix C = T.component_matrix(a.cls, l, n);
      check(i5, a.label + "^[" + std::to_string(n) + "]_" + std::to_string(l), n, {0, a.d + 2 * l - 4, a.k + l - 2},
            [&](const FockVector& v) {
              const SparseVec x = F.coords(v, n);
              return F.vector(SparseVec::from_dense(multiply(C, x.to_dense(F.dim(n)))), n);
            });
    }

  rep.items = {std::move(i1), std::move(i2), std::move(i3), std::move(i4), std::move(i5)};
  rep.pass = true;
  for (const auto& it : rep.items) {
    rep.checked += it.checked;
    rep.pass = rep.pass && it.as_required();
  }
  return rep;
}

MultMode parse_mode(const std::string& s) {
  if (s == "strong") return MultMode::Strong;
  if (s == "filtration") return MultMode::Filtration;
  throw ParseError("unknown multiplicativity mode", s);
}

std::string to_string(MultMode m) { return m == MultMode::Strong ? "strong" : "filtration"; }

AuditReport check_multiplicativity(const FockSpace& F, const CupTable& table, MultMode mode) {
  AuditReport rep;
  rep.name = "multiplicativity " + to_string(mode) + " (n = " + std::to_string(table.n) + ")";
  rep.hypotheses = model_hypotheses(F.model());
  const std::size_t dim = table.basis.size();
  std::vector<int> g(dim);
  for (std::size_t i = 0; i < dim; ++i) g[i] = F.tridegree(table.basis[i]).k;

  std::vector<std::vector<Witness>> found(dim);
  parallel_for(dim, [&](std::size_t i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const FockVector prod = F.vector(table.product(i, j), table.n);
      const int bound = g[i] + g[j];
      bool ok = true;
      if (mode == MultMode::Strong) {
        for (const auto& [w, c] : prod)
          if (F.tridegree(w).k != bound) ok = false;
      } else {
        const auto p = PerversityValue::of(F, prod).p;
        ok = !p || *p <= bound;
      }
      if (!ok)
        found[i].push_back({F.str(table.basis[i]) + " * " + F.str(table.basis[j]),
                            (mode == MultMode::Strong ? "pure g = " : "perversity <= ") + std::to_string(bound),
                            describe(F, prod), prod});
    }
  });
  rep.checked = dim * dim;
  for (auto& ws : found)
    for (auto& w : ws) {
      rep.pass = false;
      rep.add_witness(std::move(w));
    }
  return rep;
}

AuditReport check_multiplicativity(const TautEngine& T, int n, MultMode mode) {
  return check_multiplicativity(T.space(), T.cup_table(n), mode);
}

SelfIntersection boundary_self_intersection(const Heisenberg& H, int n) {
  const FockSpace& F = H.space();
  const SurfaceModel& m = F.model();
  SelfIntersection s;
  s.value = Rational(-2) * H.boundary(boundary_divisor_class(F, n));
  s.components = g_components(F, s.value);
  for (const auto& [g, part] : s.components)
    if (g > 2) s.all_within_2 = false;
  if (!m.k_is_zero()) {
    FockVector v = FockVector::vacuum();
    for (int i = 0; i < n - 2; ++i) v = H.create(1, m.unit(), v);
    const FockVector kterm = Rational(-2) * H.create(2, m.K(), v);
    const auto gs = g_components(F, kterm);
    if (gs.size() == 1) s.k_term_g = gs.begin()->first;
  }
  return s;
}

AuditReport to_report(const FockSpace& F, const SelfIntersection& s, int n) {
  AuditReport rep;
  rep.name = "boundary self-intersection (n = " + std::to_string(n) + ")";
  rep.hypotheses = model_hypotheses(F.model());
  rep.facts.push_back({"value", F.str(s.value)});
  for (const auto& [g, part] : s.components) rep.facts.push_back({"g" + std::to_string(g), F.str(part)});
  if (s.k_term_g) rep.facts.push_back({"g of q2(K) term", std::to_string(*s.k_term_g)});
  rep.facts.push_back({"multiplicativity", s.obstructed() ? "obstructed" : "not obstructed"});
  rep.checked = 1;
  rep.pass = !s.obstructed();
  if (s.obstructed())
    for (const auto& [g, part] : s.components)
      if (g > 2) rep.add_witness({"del S * del S", "perversity <= 2", describe(F, part), part});
  return rep;
}

AuditReport audit_chern(const TautEngine& T, int n, int l) {
  const FockSpace& F = T.space();
  const SurfaceModel& m = F.model();
  if (!m.strongly_multiplicative() || !m.k_within(1))
    throw PreconditionError("audit_chern needs a strongly multiplicative model with g(K) <= 1");
  AuditReport rep;
  rep.name = "chern character (n = " + std::to_string(n) + ", l = " + std::to_string(l) + ")";
  rep.hypotheses = model_hypotheses(m);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const Class ib = m.iota(m.dual_class(i));
    if (ib.is_zero()) continue;
    const std::string pair = "(" + m.basis(i).label + ", " + m.basis(i).label + "^)";
    ++rep.checked;
    const auto gi = m.gdegrees(ib);
    if (gi.size() != 1) {
      rep.pass = false;
      rep.add_witness({pair, "iota(dual) pure", m.class_str(ib), {}});
      continue;
    }
    const FockVector t = T.taut_class(m.basis_class(i), l, n);
    if (t.empty()) continue;
    const auto comps = g_components(F, t);
    if (comps.size() != 1) {
      rep.pass = false;
      rep.add_witness({pair, "taut class pure", describe(F, t), t});
      continue;
    }
    const int total = *gi.begin() + comps.begin()->first;
    if (total != l) {
      rep.pass = false;
      rep.add_witness({pair, "g(iota dual) + g(taut) = " + std::to_string(l),
                       std::to_string(*gi.begin()) + " + " + std::to_string(comps.begin()->first), t});
    }
  }
  return rep;
}

AuditReport equivalence_battery(const std::vector<CatalogueEntry>& catalogue, int n) {
  AuditReport rep;
  rep.name = "fibration equivalence battery (n = " + std::to_string(n) + ")";
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  for (const auto& entry : catalogue) {
    const FiberData& fd = entry.fiber;
    ++rep.checked;
    auto fail = [&](const std::string& what, const std::string& expected, const std::string& observed) {
      rep.pass = false;
      rep.add_witness({fd.name + ": " + what, expected, observed, {}});
    };
    FibrationReport r;
    try {
      r = analyze(fd);
    } catch (const FiberError& e) {
      fail("validation", "accepted", e.what());
      continue;
    }
    if (entry.elliptic && *entry.elliptic != r.elliptic) fail("elliptic flag", flag(*entry.elliptic), flag(r.elliptic));
    if (entry.star && *entry.star != r.star_ok) fail("star flag", flag(*entry.star), flag(r.star_ok));

    const SurfaceModel m = emit_surface_model(fd);
    if (!m.validate().ok()) fail("emitted model", "valid", "validation failed");
    if (m.strongly_multiplicative() != r.star_ok)
      fail("strong multiplicativity vs star", flag(r.star_ok), flag(m.strongly_multiplicative()));

    FockSpace F(m, std::max(n, FockSpace::kDefaultMaxWeight));
    Heisenberg H(F);
    TautEngine T(H);
    const CupTable table = T.cup_table(n);
    const bool strong = check_multiplicativity(F, table, MultMode::Strong).pass;
    const bool filt = check_multiplicativity(F, table, MultMode::Filtration).pass;
    const bool k_ok = m.k_within(1);
    rep.facts.push_back({fd.name, "elliptic=" + flag(r.elliptic) + " star=" + flag(r.star_ok) +
                                      " strong=" + verdict(strong) + " filtration=" + verdict(filt) +
                                      " K_in_G1=" + flag(k_ok)});
    if (!(r.elliptic == strong && strong == filt && filt == k_ok))
      fail("equivalence", "all four agree",
           "elliptic=" + flag(r.elliptic) + " strong=" + verdict(strong) + " filtration=" + verdict(filt) +
               " K_in_G1=" + flag(k_ok));
  }
  return rep;
}

}  // namespace hilb
