// Acceptance battery: one PASS/FAIL line per criterion.
// Usage: acceptance [--criterion N]...   (all ten when none is given)

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "hilb/fibration.hpp"
#include "hilb/verify.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace hilb;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Fixture {
  std::string name;
  FockSpace F;
  Heisenberg H;
  TautEngine T;
  Fixture(std::string label, SurfaceModel m, int cap) : name(std::move(label)), F(std::move(m), cap), H(F), T(H) {}
};

std::unique_ptr<Fixture> elliptic(int cap = 4) { return std::make_unique<Fixture>("M_E", fixtures::elliptic(), cap); }
std::unique_ptr<Fixture> genus2(int cap = 4) { return std::make_unique<Fixture>("M_2", fixtures::genus2(), cap); }
std::unique_ptr<Fixture> i2(int cap = 4) {
  return std::make_unique<Fixture>("I2", emit_surface_model(load_fiber(fixtures::data("fibers/I2.json"))), cap);
}

std::vector<std::unique_ptr<Fixture>> fixtures_of(std::vector<std::unique_ptr<Fixture>(*)(int)> makers) {
  std::vector<std::unique_ptr<Fixture>> out;
  for (auto make : makers) out.push_back(make(4));
  return out;
}

std::string first_witness(const AuditReport& r) {
  if (r.witnesses.empty()) return "no witness";
  const auto& w = r.witnesses.front();
  return w.input + ": expected " + w.expected + ", observed " + w.observed;
}

const AuditItem* item(const AuditReport& r, int id) {
  for (const auto& it : r.items)
    if (it.id == id) return &it;
  return nullptr;
}

// ---------------------------------------------------------------------------

Outcome relations() {
  Outcome o;
  for (const auto& fx : fixtures_of({elliptic, genus2})) {
    const auto r = audit_relations(fx->H, 3, 2);
    o.require(r.pass, fx->name + " relations: " + first_witness(r));
    o.note(fx->name + ": " + std::to_string(r.checked) + " matrix identities");
  }
  return o;
}

Outcome boundary_path_independence() {
  Outcome o;
  for (const auto& fx : fixtures_of({elliptic, genus2})) {
    std::size_t words = 0;
    for (int n = 0; n <= 4; ++n)
      for (const auto& w : fx->F.basis(n)) {
        ++words;
        const auto v = FockVector::word(w);
        const auto left = fx->H.boundary(v);
        const auto right = fx->H.boundary_rightmost(v);
        o.require(left == right, fx->name + " del on " + fx->F.str(w) + ": " + fx->F.str(left) + " vs " +
                                     fx->F.str(right));
      }
    o.note(fx->name + ": " + std::to_string(words) + " words");
  }
  return o;
}

Outcome purity() {
  Outcome o;
  auto e = elliptic();
  for (int n : {2, 3}) {
    const auto r = audit_purity(e->T, n);
    for (int id = 1; id <= 5; ++id) {
      const auto* it = item(r, id);
      o.require(it && it->holds, "M_E n = " + std::to_string(n) + " item " + std::to_string(id) + " holds");
    }
  }
  auto g = genus2();
  const auto r = audit_purity(g->T, 2);
  for (int id = 1; id <= 3; ++id) {
    const auto* it = item(r, id);
    o.require(it && it->holds, "M_2 item " + std::to_string(id) + " holds");
  }
  const FockVector expected = g->F.parse_vector("4 q2(p)");
  for (int id = 4; id <= 5; ++id) {
    const auto* it = item(r, id);
    o.require(it && !it->holds, "M_2 item " + std::to_string(id) + " fails");
    if (!it) continue;
    const Witness* w = nullptr;
    // in item 5 the boundary operator appears as cup with 1^[2]_3
    for (const auto& x : it->witnesses)
      if (x.input == "del on q2(1)" || x.input == "1^[2]_3 on q2(1)") w = &x;
    o.require(w != nullptr, "M_2 item " + std::to_string(id) + " has a witness on q2(1)");
    if (!w) continue;
    o.note("M_2 item " + std::to_string(id) + ": del(q2(1)) = " + describe(g->F, w->vector));
    o.require(PerversityValue::of(g->F, w->vector).p == 3, "witness sits at g-degree 3");
    o.require(w->vector == expected, "witness equals 4 q2(p), observed " + g->F.str(w->vector));
  }
  return o;
}

Outcome obstruction() {
  Outcome o;
  auto e = elliptic();
  auto g = genus2();
  const auto se = boundary_self_intersection(e->H, 2);
  o.note("M_E: " + describe(e->F, se.value));
  o.require(se.value.empty(), "M_E boundary self-intersection is 0");
  const auto sg = boundary_self_intersection(g->H, 2);
  o.note("M_2: " + describe(g->F, sg.value));
  o.require(sg.value == g->F.parse_vector("-4 q2(p)"), "M_2 boundary self-intersection is -4 q2(p)");
  o.require(PerversityValue::of(g->F, sg.value).p == 3, "M_2 self-intersection at g-degree 3");

  for (int n : {2, 3}) {
    const auto r = check_multiplicativity(e->T, n, MultMode::Strong);
    o.require(r.pass, "M_E strong n = " + std::to_string(n) + ": " + first_witness(r));
    o.note("M_E strong n = " + std::to_string(n) + ": " + std::to_string(r.checked) + " products");
  }
  const auto r = check_multiplicativity(g->T, 2, MultMode::Filtration);
  o.require(!r.pass, "M_2 filtration n = 2 fails");
  bool boundary_pair = false;
  for (const auto& w : r.witnesses) boundary_pair = boundary_pair || w.input == "q2(1) * q2(1)";
  o.require(boundary_pair, "M_2 filtration witness on the boundary pair q2(1) * q2(1)");
  o.note("M_2 filtration: " + first_witness(r));
  return o;
}

Outcome weight_one() {
  Outcome o;
  for (const auto& fx : fixtures_of({elliptic, genus2})) {
    const auto r = check_multiplicativity(fx->T, 1, MultMode::Filtration);
    o.require(r.pass, fx->name + " n = 1 filtration: " + first_witness(r));
    // the n = 1 table is the surface's own cup table
    const CupTable t = fx->T.cup_table(1);
    const SurfaceModel& m = fx->F.model();
    for (std::size_t i = 0; i < t.basis.size(); ++i)
      for (std::size_t j = 0; j < t.basis.size(); ++j) {
        const std::size_t a = t.basis[i].gens.at(0).cls, b = t.basis[j].gens.at(0).cls;
        FockVector expect;
        const Vector& c = m.cup_basis(a, b);
        for (Eigen::Index k = 0; k < c.size(); ++k)
          if (!c(k).is_zero()) expect.add(FockWord{{Generator{1, static_cast<std::size_t>(k)}}}, c(k));
        const FockVector got = fx->F.vector(t.product(i, j), 1);
        o.require(got == expect, fx->name + " q1(" + m.basis(a).label + ") * q1(" + m.basis(b).label + ")");
      }
  }
  return o;
}

Outcome degree_law() {
  Outcome o;
  for (const auto& fx : fixtures_of({elliptic, i2})) {
    const SurfaceModel& m = fx->F.model();
    std::size_t nonzero = 0, total = 0;
    for (int n = 1; n <= 3; ++n)
      for (std::size_t c = 0; c < m.dim(); ++c)
        for (int l = 0; l <= 2 * n + 2; ++l) {
          const int d = m.basis(c).d;
          if (d + 2 * l - 4 < 0 || d + 2 * l - 4 > 4 * n) continue;
          ++total;
          const FockVector v = fx->T.taut_class(m.basis_class(c), l, n);
          if (v.empty()) continue;
          ++nonzero;
          const auto comps = g_components(fx->F, v);
          const int want = m.basis(c).k + l - 2;
          o.require(comps.size() == 1 && comps.begin()->first == want,
                    fx->name + " " + m.basis(c).label + "^[" + std::to_string(n) + "]_" + std::to_string(l) +
                        " = " + describe(fx->F, v) + ", expected g = " + std::to_string(want));
        }
    o.note(fx->name + ": " + std::to_string(total) + " classes, " + std::to_string(nonzero) + " nonzero");
  }
  return o;
}

Outcome remark_constant() {
  Outcome o;
  const auto fxs = fixtures_of({elliptic, genus2, i2});
  for (int n = 1; n <= 3; ++n) {
    std::optional<Rational> constant;
    for (const auto& fx : fxs) {
      const SurfaceModel& m = fx->F.model();
      for (std::size_t c = 0; c < m.dim(); ++c)
        for (int l : {2, 3, 4}) {
          const FockVector t = fx->T.taut_class(m.basis_class(c), l, n);
          const FockVector r = fx->T.remark_formula(m.basis_class(c), l, n);
          const std::string where = fx->name + " " + m.basis(c).label + "^[" + std::to_string(n) + "]_" +
                                    std::to_string(l);
          if (t.empty()) {
            o.require(r.empty(), where + ": taut class is 0 but the explicit sum is " + fx->F.str(r));
            continue;
          }
          const Rational ratio = r.coeff(t.begin()->first) / t.begin()->second;
          o.require(r == ratio * t, where + ": explicit sum is not a multiple of the class");
          if (!constant) constant = ratio;
          o.require(*constant == ratio, where + ": ratio " + ratio.str() + " differs from " + constant->str());
        }
    }
    o.require(constant.has_value(), "some class is nonzero at n = " + std::to_string(n));
    if (constant) {
      o.note("n = " + std::to_string(n) + ": constant " + constant->str());
      o.require(*constant == factorial(static_cast<unsigned>(n)), "constant equals n!");
    }
  }
  return o;
}

Outcome ring_axioms() {
  Outcome o;
  std::mt19937 rng(20261016);
  const auto fxs = fixtures_of({elliptic, genus2, i2});
  for (const auto& fx : fxs) {
    const CupTable t = fx->T.cup_table(2);
    const std::size_t dim = t.basis.size();
    const Vector unit = fx->F.coords(fx->F.unit_vector(2), 2).to_dense(dim);
    auto times = [&](const Vector& x, std::size_t k) {  // x * basis[k]
      Vector acc = zero_vector(static_cast<Eigen::Index>(dim));
      for (std::size_t m = 0; m < dim; ++m)
        if (!x(static_cast<Eigen::Index>(m)).is_zero())
          acc += x(static_cast<Eigen::Index>(m)) * t.left[m].col(static_cast<Eigen::Index>(k));
      return acc;
    };
    std::size_t unit_ok = 0, comm_ok = 0, assoc_ok = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const Vector e = unit_vector(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(i));
      const bool u = equal(times(unit, i), e) && equal(multiply(t.left[i], unit), e);
      o.require(u, fx->name + " unit law on " + fx->F.str(t.basis[i]));
      unit_ok += u;
      for (std::size_t j = 0; j < dim; ++j) {
        const int sign = fx->F.parity(t.basis[i]) * fx->F.parity(t.basis[j]) ? -1 : 1;
        const bool c = equal(t.left[i].col(static_cast<Eigen::Index>(j)),
                             Rational(sign) * t.left[j].col(static_cast<Eigen::Index>(i)));
        o.require(c, fx->name + " super-commutativity on " + fx->F.str(t.basis[i]) + ", " + fx->F.str(t.basis[j]));
        comm_ok += c;
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    for (int s = 0; s < 250; ++s) {
      const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
      const Vector ij = t.left[i].col(static_cast<Eigen::Index>(j));
      const Vector lhs = times(ij, k);
      const Vector jk = t.left[j].col(static_cast<Eigen::Index>(k));
      const Vector rhs = multiply(t.left[i], jk);
      const bool a = equal(lhs, rhs);
      o.require(a, fx->name + " associativity on (" + fx->F.str(t.basis[i]) + ", " + fx->F.str(t.basis[j]) + ", " +
                       fx->F.str(t.basis[k]) + ")");
      assoc_ok += a;
    }
    o.note(fx->name + ": dim " + std::to_string(dim) + ", unit " + std::to_string(unit_ok) + ", pairs " +
           std::to_string(comm_ok) + ", triples " + std::to_string(assoc_ok));
  }
  return o;
}

Outcome fibration_battery() {
  Outcome o;
  struct Expect {
    const char* file;
    bool elliptic, star;
  };
  for (const Expect& x : {Expect{"I2", true, true}, Expect{"genus2_smooth", false, true}, Expect{"two_genus1", false, false}}) {
    const auto r = analyze(load_fiber(fixtures::data(std::string("fibers/") + x.file + ".json")));
    o.require(r.elliptic == x.elliptic && r.star_ok == x.star, std::string(x.file) + " classification");
  }
  const auto catalogue = load_catalogue(fixtures::data("fibers/catalogue.json"));
  for (const auto& entry : catalogue) {
    const auto r = analyze(entry.fiber);
    const SurfaceModel m = emit_surface_model(entry.fiber);
    o.require(m.validate().ok(), entry.fiber.name + " emitted model revalidates");
    o.require(m.strongly_multiplicative() == (r.positive_genus_count <= 1),
              entry.fiber.name + ": strongly multiplicative iff at most one positive-genus component");
    if (entry.elliptic) o.require(*entry.elliptic == r.elliptic, entry.fiber.name + " elliptic flag");
    if (entry.star) o.require(*entry.star == r.star_ok, entry.fiber.name + " star flag");
  }
  o.note(std::to_string(catalogue.size()) + " catalogue fibers");
  try {
    validate_fiber(load_fiber(fixtures::data("fibers/bad_b12.json")));
    o.require(false, "b = (1,2) single-edge fiber is rejected");
  } catch (const FiberError& e) {
    o.note(std::string("bad_b12 rejected: ") + e.what());
  }
  return o;
}

Outcome equivalence() {
  Outcome o;
  const auto r = equivalence_battery(load_catalogue(fixtures::data("fibers/catalogue.json")), 2);
  o.require(r.pass, "equivalence: " + first_witness(r));
  for (const auto& [k, v] : r.facts) o.note(k + ": " + v);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance battery"};
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--criterion", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  app.add_flag("-v,--verbose", verbose, "Print every note");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "relation suite on M_E and M_2", 30, relations},
      {2, "del agrees under leftmost and rightmost expansion", 60, boundary_path_independence},
      {3, "purity dichotomy", 120, purity},
      {4, "boundary obstruction and multiplicativity", 300, obstruction},
      {5, "n = 1 filtration check", 60, weight_one},
      {6, "tautological degree law", 120, degree_law},
      {7, "remark-formula constant", 120, remark_constant},
      {8, "cup-table ring axioms", 120, ring_axioms},
      {9, "fibration battery", 60, fibration_battery},
      {10, "end-to-end equivalence", 120, equivalence},
  };

  bool ok = true;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.notes.push_back("runtime over budget");
    }
    ok = ok && o.pass;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs << "s";
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " (" << time.str()
              << ")\n";
    std::size_t shown = 0;
    for (const auto& n : o.notes) {
      const bool violation = n.starts_with("violated") || n.starts_with("exception") || n.starts_with("runtime");
      if (verbose || violation || shown < 6) {
        std::cout << "      " << n << '\n';
        ++shown;
      }
      if (!verbose && shown >= 12) {
        std::cout << "      ...\n";
        break;
      }
    }
  }
  return ok ? 0 : 1;
}
