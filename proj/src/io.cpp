#include "hilb/io.hpp"

#include <fstream>

namespace hilb {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw ParseError("expected a rational (\"p/q\" string or integer)", j.dump());
}

Json rational_to_json(const Rational& r) { return r.str(); }

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ModelError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::size_t index_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long>() < 0)
    throw ModelError(where + ": field '" + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

SparseVec terms_from_json(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw ModelError(where + ": terms must be an array");
  SparseVec v;
  for (const auto& t : arr) v.add(index_field(t, "m", where), rational_from_json(field(t, "coeff", where)));
  return v;
}

Json terms_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index m = 0; m < v.size(); ++m)
    if (!v(m).is_zero()) arr.push_back(Json{{"m", m}, {"coeff", v(m).str()}});
  return arr;
}

}  // namespace

SurfaceModel model_from_json(const Json& j, std::string name) {
  if (j.contains("name") && j.at("name").is_string()) name = j.at("name").get<std::string>();
  std::vector<BasisClass> basis;
  for (const auto& b : field(j, "basis", "model")) {
    BasisClass c;
    const Json& label = field(b, "label", "basis entry");
    if (!label.is_string()) throw ModelError("basis entry: label must be a string");
    c.label = label.get<std::string>();
    const Json& d = field(b, "d", "basis entry " + c.label);
    const Json& k = field(b, "k", "basis entry " + c.label);
    if (!d.is_number_integer() || !k.is_number_integer())
      throw ModelError("basis entry " + c.label + ": d and k must be integers");
    c.d = d.get<int>();
    c.k = k.get<int>();
    basis.push_back(std::move(c));
  }
  std::vector<CupEntry> cup;
  if (j.contains("cup"))
    for (const auto& e : j.at("cup")) {
      CupEntry c;
      c.i = index_field(e, "i", "cup entry");
      c.j = index_field(e, "j", "cup entry");
      c.terms = terms_from_json(field(e, "terms", "cup entry"), "cup entry");
      cup.push_back(std::move(c));
    }
  SparseVec K;
  if (j.contains("K")) K = terms_from_json(j.at("K"), "K");
  std::vector<std::pair<std::size_t, SparseVec>> iota;
  if (j.contains("iota"))
    for (const auto& e : j.at("iota"))
      iota.emplace_back(index_field(e, "from_dual_of", "iota entry"),
                        terms_from_json(field(e, "terms", "iota entry"), "iota entry"));
  return SurfaceModel(std::move(name), std::move(basis), cup, std::move(K), iota);
}

Json model_to_json(const SurfaceModel& m) {
  Json j;
  j["name"] = m.name();
  Json basis = Json::array();
  for (const auto& b : m.basis()) basis.push_back(Json{{"label", b.label}, {"d", b.d}, {"k", b.k}});
  j["basis"] = basis;
  Json cup = Json::array();
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i; k < n; ++k) {
      const Vector& c = m.cup_basis(i, k);
      if (i == m.unit_index() && c == unit_vector(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)))
        continue;
      if (is_zero(c)) continue;
      cup.push_back(Json{{"i", i}, {"j", k}, {"terms", terms_to_json(c)}});
    }
  j["cup"] = cup;
  j["K"] = terms_to_json(m.K().coords);
  Json iota = Json::array();
  for (std::size_t l = 0; l < n; ++l) {
    const Vector col = m.iota_matrix().col(static_cast<Eigen::Index>(l));
    if (!is_zero(col)) iota.push_back(Json{{"from_dual_of", l}, {"terms", terms_to_json(col)}});
  }
  j["iota"] = iota;
  return j;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path.string() + "'", e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

SurfaceModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json(path), path.stem().string());
}

Json validation_to_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["strongly_multiplicative"] = r.strongly_multiplicative;
  if (!r.strongly_multiplicative) j["strong_witness"] = r.strong_witness;
  Json items = Json::array();
  for (const auto& it : r.items) {
    Json i{{"check", it.check}, {"passed", it.passed}};
    if (!it.witnesses.empty()) i["witnesses"] = it.witnesses;
    items.push_back(i);
  }
  j["checks"] = items;
  return j;
}

}  // namespace hilb
