#include "cli.hpp"

#include "CLI11.hpp"
#include "hilb/fibration.hpp"
#include "hilb/verify.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace hilb::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kTableCap = 4;
constexpr int kBasisCap = 6;

struct Usage : Error {
  using Error::Error;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Json read_input(const std::string& path, std::istream& in) {
  if (path != "-") return read_json(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("malformed JSON on standard input", e.what());
  }
}

SurfaceModel read_model(const std::string& path, std::istream& in) {
  if (path == "-") return model_from_json(read_input(path, in));
  return load_model(path);
}

FiberData read_fiber(const std::string& path, std::istream& in) { return fiber_from_json(read_input(path, in)); }

int expect_code(bool pass, const std::string& expect) {
  return pass == (expect == "pass") ? kOk : kMismatch;
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// ---- reports --------------------------------------------------------------

std::string validation_text(const SurfaceModel& m, const ValidationReport& r) {
  std::ostringstream os;
  os << "model " << m.name() << ": " << m.dim() << " classes\n";
  for (const auto& it : r.items) {
    os << "  " << (it.passed ? "ok  " : "FAIL") << "  " << it.check << '\n';
    for (const auto& w : it.witnesses) os << "        " << w << '\n';
  }
  os << "strongly multiplicative: " << yes_no(r.strongly_multiplicative);
  if (!r.strongly_multiplicative && !r.strong_witness.empty()) os << " (" << r.strong_witness << ")";
  os << '\n' << (r.ok() ? "valid" : "invalid") << '\n';
  return os.str();
}

Json tridegrees_json(const FockSpace& F, const FockVector& v) {
  Json t = Json::array();
  for (const auto& d : tridegrees(F, v)) t.push_back(to_string(d));
  return t;
}

Json components_json(const FockSpace& F, const FockVector& v) {
  Json c = Json::object();
  for (const auto& [g, part] : g_components(F, v)) c[std::to_string(g)] = F.str(part);
  return c;
}

// ---- suite ----------------------------------------------------------------

struct SuiteLine {
  std::string name;
  std::string expect;
  bool pass = false;
  std::string detail;
  bool matched() const { return pass == (expect == "pass"); }
};

SuiteLine run_suite_entry(const Json& e, const fs::path& base) {
  auto path = [&](const char* key) { return (base / e.at(key).get<std::string>()).string(); };
  SuiteLine line;
  const std::string kind = e.at("kind").get<std::string>();
  line.expect = e.value("expect", std::string("pass"));
  if (line.expect != "pass" && line.expect != "fail") throw Usage("suite: expect must be pass or fail, got '" + line.expect + "'");
  const int cap = e.value("max_weight", kTableCap);
  const int n = e.value("n", 2);

  auto model = [&]() -> SurfaceModel {
    if (e.contains("model")) return load_model(path("model"));
    if (e.contains("fiber")) return emit_surface_model(load_fiber(path("fiber")));
    throw Usage("suite entry of kind '" + kind + "' needs \"model\" or \"fiber\"");
  };
  auto source = [&]() {
    for (const char* key : {"model", "fiber", "catalogue"})
      if (e.contains(key)) return e.at(key).get<std::string>();
    return std::string();
  };
  line.name = e.value("name", kind + " " + source());

  auto take = [&](const AuditReport& r) {
    line.pass = r.pass;
    line.detail = std::to_string(r.checked) + " checked";
    if (!r.witnesses.empty())
      line.detail += "; first witness " + r.witnesses.front().input + ": expected " + r.witnesses.front().expected +
                     ", observed " + r.witnesses.front().observed;
  };

  if (kind == "validate") {
    const auto r = model().validate();
    line.pass = r.ok();
    line.detail = "strongly multiplicative: " + yes_no(r.strongly_multiplicative);
  } else if (kind == "relations") {
    FockSpace F(model(), cap);
    Heisenberg H(F);
    take(audit_relations(H, e.value("max_weight", 3), e.value("max_index", 2)));
  } else if (kind == "purity") {
    FockSpace F(model(), cap);
    Heisenberg H(F);
    TautEngine T(H);
    take(audit_purity(T, n));
  } else if (kind == "check") {
    FockSpace F(model(), cap);
    Heisenberg H(F);
    TautEngine T(H);
    take(check_multiplicativity(T, n, parse_mode(e.value("mode", std::string("strong")))));
  } else if (kind == "boundary-self") {
    FockSpace F(model(), std::max(cap, n));
    Heisenberg H(F);
    take(to_report(F, boundary_self_intersection(H, n), n));
  } else if (kind == "chern") {
    FockSpace F(model(), cap);
    Heisenberg H(F);
    TautEngine T(H);
    take(audit_chern(T, n, e.value("l", 2)));
  } else if (kind == "fibration") {
    line.pass = true;
    try {
      const auto r = analyze(load_fiber(path("fiber")));
      line.detail = "elliptic=" + yes_no(r.elliptic) + " star=" + yes_no(r.star_ok);
      if (e.contains("elliptic") && e.at("elliptic").get<bool>() != r.elliptic) line.pass = false;
      if (e.contains("star") && e.at("star").get<bool>() != r.star_ok) line.pass = false;
    } catch (const FiberError& err) {
      line.pass = false;
      line.detail = std::string("rejected: ") + err.what();
    }
  } else if (kind == "battery") {
    take(equivalence_battery(load_catalogue(path("catalogue")), n));
  } else {
    throw Usage("unknown suite kind '" + kind + "'");
  }
  return line;
}

// ---- command options ------------------------------------------------------

struct Options {
  std::string input;
  std::string format = "text";
  std::optional<int> max_weight;
  int n = 2;
  int l = 2;
  std::string op, to, alpha;
  std::string mode = "strong";
  std::string expect = "pass";
  std::string output;
};

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

void add_cap(CLI::App* sub, Options& o, int def) {
  sub->add_option("--max-weight", o.max_weight, "Weight cap (default " + std::to_string(def) + ")");
}

int cap_of(const Options& o, int def) {
  const int c = o.max_weight.value_or(def);
  if (c < 0) throw Usage("--max-weight must be nonnegative");
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations on Fock-space models of Hilbert schemes of points on surfaces", "hilb"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
  };

  auto* validate = app.add_subcommand("validate", "Check the axioms of a surface model");
  input(validate, "Model JSON (- for stdin)");
  add_format(validate, o);

  auto* basis = app.add_subcommand("basis", "List the Fock basis of weight n with tri-degrees");
  input(basis, "Model JSON");
  basis->add_option("--n", o.n, "Weight")->required();
  add_cap(basis, o, kBasisCap);
  add_format(basis, o);

  auto* apply = app.add_subcommand("apply", "Apply an operator to a Fock vector");
  input(apply, "Model JSON");
  apply->add_option("--op", o.op, "q(n,cls), L(n,cls), del or adq(j,cls)")->required();
  apply->add_option("--to", o.to, "Vector, e.g. \"q1(a).q1(b)\" or \"vac\"")->required();
  add_cap(apply, o, kBasisCap);
  add_format(apply, o);

  auto* taut = app.add_subcommand("taut", "Degree-l component of a tautological class");
  input(taut, "Model JSON");
  taut->add_option("--alpha", o.alpha, "Class expression")->required();
  taut->add_option("--l", o.l, "Component")->required();
  taut->add_option("--n", o.n, "Number of points")->required();
  add_cap(taut, o, kTableCap);
  add_format(taut, o);

  auto* cup = app.add_subcommand("cup-table", "Ring structure of the tautological subring at weight n");
  input(cup, "Model JSON");
  cup->add_option("--n", o.n, "Number of points")->required();
  cup->add_option("-o,--output", o.output, "Write the JSON table here");
  add_cap(cup, o, kTableCap);
  add_format(cup, o);

  auto* check = app.add_subcommand("check", "Multiplicativity audit of the G-grading");
  input(check, "Model JSON");
  check->add_option("--n", o.n, "Number of points")->required();
  check->add_option("--mode", o.mode, "strong or filtration")->check(CLI::IsMember({"strong", "filtration"}));
  check->add_option("--expect", o.expect, "Expected verdict")->check(CLI::IsMember({"pass", "fail"}));
  add_cap(check, o, kTableCap);
  add_format(check, o);

  auto* bself = app.add_subcommand("boundary-self", "Self-intersection of the boundary divisor");
  input(bself, "Model JSON");
  bself->add_option("--n", o.n, "Number of points")->required();
  bself->add_option("--expect", o.expect, "pass = no component above G-degree 2")
      ->check(CLI::IsMember({"pass", "fail"}));
  add_cap(bself, o, kBasisCap);
  add_format(bself, o);

  auto* fanalyze = app.add_subcommand("fibration-analyze", "Zariski check and classification of a fiber");
  input(fanalyze, "Fiber JSON (- for stdin)");
  add_format(fanalyze, o);

  auto* femit = app.add_subcommand("fibration-emit", "Surface model of a fiber neighbourhood");
  input(femit, "Fiber JSON (- for stdin)");
  femit->add_option("-o,--output", o.output, "Write the model here instead of stdout");

  auto* suite = app.add_subcommand("suite", "Run the audits listed in a suite config");
  input(suite, "Suite JSON; paths inside are relative to it");
  add_format(suite, o);

  if (!args.empty() && !args.front().starts_with("-") && !app.get_subcommand_no_throw(args.front())) {
    err << "hilb: usage error: unknown command '" << args.front() << "'\n";
    return kUsage;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const bool json = o.format == "json";
  try {
    if (validate->parsed()) {
      const SurfaceModel m = read_model(o.input, in);
      const auto r = m.validate();
      if (json) {
        Json j;
        j["model"] = m.name();
        j.update(validation_to_json(r));
        print_json(out, j);
      } else {
        out << validation_text(m, r);
      }
      return r.ok() ? kOk : kMismatch;
    }

    if (basis->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kBasisCap));
      if (o.n < 0) throw Usage("--n must be nonnegative");
      const auto& words = F.basis(o.n);
      if (json) {
        Json ws = Json::array();
        for (const auto& w : words) ws.push_back(Json{{"word", F.str(w)}, {"tridegree", to_string(F.tridegree(w))}});
        print_json(out, Json{{"model", F.model().name()}, {"n", o.n}, {"dim", words.size()}, {"basis", ws}});
      } else {
        out << "weight " << o.n << ": dim " << words.size() << '\n';
        for (const auto& w : words) out << "  " << F.str(w) << "  " << to_string(F.tridegree(w)) << '\n';
      }
      return kOk;
    }

    if (apply->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kBasisCap));
      Heisenberg H(F);
      const OpSpec op = parse_op(F.model(), o.op);
      const FockVector v = F.parse_vector(o.to);
      const FockVector r = H.apply(op, v);
      if (json) {
        print_json(out, Json{{"op", to_string(F.model(), op)},
                             {"input", F.str(v)},
                             {"output", F.str(r)},
                             {"tridegrees", tridegrees_json(F, r)},
                             {"g_components", components_json(F, r)}});
      } else {
        out << to_string(F.model(), op) << " (" << F.str(v) << ") = " << describe(F, r) << '\n';
      }
      return kOk;
    }

    if (taut->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kTableCap));
      Heisenberg H(F);
      TautEngine T(H);
      const Class alpha = F.model().parse_class(o.alpha);
      const FockVector r = T.taut_class(alpha, o.l, o.n);
      const std::string label = o.alpha + "^[" + std::to_string(o.n) + "]_" + std::to_string(o.l);
      if (json) {
        print_json(out, Json{{"alpha", o.alpha},
                             {"l", o.l},
                             {"n", o.n},
                             {"value", F.str(r)},
                             {"tridegrees", tridegrees_json(F, r)},
                             {"g_components", components_json(F, r)}});
      } else {
        out << label << " = " << describe(F, r) << '\n';
      }
      return kOk;
    }

    if (cup->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kTableCap));
      Heisenberg H(F);
      TautEngine T(H);
      const CupTable t = T.cup_table(o.n);
      const Json j = to_json(F, t);
      if (!o.output.empty()) write_json(o.output, j);
      if (json && o.output.empty()) {
        print_json(out, j);
      } else {
        out << "tautological subring at n = " << o.n << ": rank " << t.monomials.size() << " of "
            << F.dim(o.n) << ", " << t.generators.size() << " generators, " << j.at("products").size()
            << " nonzero products\n";
        if (!o.output.empty()) out << "written to " << o.output << '\n';
      }
      return kOk;
    }

    if (check->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kTableCap));
      Heisenberg H(F);
      TautEngine T(H);
      const auto r = check_multiplicativity(T, o.n, parse_mode(o.mode));
      if (json) {
        Json j = to_json(F, r);
        j["expect"] = o.expect;
        print_json(out, j);
      } else {
        out << to_text(r) << "expected: " << o.expect << '\n';
      }
      return expect_code(r.pass, o.expect);
    }

    if (bself->parsed()) {
      FockSpace F(read_model(o.input, in), cap_of(o, kBasisCap));
      Heisenberg H(F);
      const auto r = to_report(F, boundary_self_intersection(H, o.n), o.n);
      if (json) {
        Json j = to_json(F, r);
        j["expect"] = o.expect;
        print_json(out, j);
      } else {
        out << to_text(r) << "expected: " << o.expect << '\n';
      }
      return expect_code(r.pass, o.expect);
    }

    if (fanalyze->parsed()) {
      const auto r = analyze(read_fiber(o.input, in));
      if (json)
        print_json(out, to_json(r));
      else
        out << to_text(r);
      return kOk;
    }

    if (femit->parsed()) {
      const FiberData fd = read_fiber(o.input, in);
      const Json j = model_to_json(emit_surface_model(fd));
      if (o.output.empty())
        print_json(out, j);
      else
        write_json(o.output, j);
      return kOk;
    }

    if (suite->parsed()) {
      const fs::path cfg(o.input);
      const Json j = read_json(cfg);
      std::vector<SuiteLine> lines;
      try {
        for (const auto& e : j.at("audits")) lines.push_back(run_suite_entry(e, cfg.parent_path()));
      } catch (const Json::exception& e) {
        throw ParseError("malformed suite entry", e.what());
      }
      bool all = true;
      for (const auto& l : lines) all = all && l.matched();
      if (json) {
        Json arr = Json::array();
        for (const auto& l : lines)
          arr.push_back(Json{{"name", l.name}, {"expect", l.expect}, {"verdict", l.pass ? "pass" : "fail"},
                             {"matched", l.matched()}, {"detail", l.detail}});
        print_json(out, Json{{"suite", cfg.filename().string()}, {"audits", arr}, {"ok", all}});
      } else {
        std::size_t matched = 0;
        for (const auto& l : lines) {
          matched += l.matched();
          out << (l.matched() ? "ok      " : "MISMATCH") << "  " << l.name << ": " << (l.pass ? "pass" : "fail")
              << " (expected " << l.expect << "; " << l.detail << ")\n";
        }
        out << matched << "/" << lines.size() << " audits as expected\n";
      }
      return all ? kOk : kMismatch;
    }
  } catch (const WeightCapError& e) {
    err << "hilb: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "hilb: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Usage& e) {
    err << "hilb: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const FiberError& e) {
    err << "hilb: invalid fiber: " << e.what() << '\n';
    return kMismatch;
  } catch (const ModelError& e) {
    err << "hilb: invalid model: " << e.what() << '\n';
    return kMismatch;
  } catch (const PreconditionError& e) {
    err << "hilb: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "hilb: error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace hilb::cli
