#include "hilb/fock.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hilb {

int FockWord::weight() const {
  int w = 0;
  for (const auto& g : gens) w += g.n;
  return w;
}

std::string to_string(const TriDegree& t) {
  return "(" + std::to_string(t.n) + "," + std::to_string(t.d) + "," + std::to_string(t.k) + ")";
}

FockVector FockVector::vacuum() { return word(FockWord{}); }

FockVector FockVector::word(FockWord w, Rational c) {
  FockVector v;
  v.add(w, c);
  return v;
}

void FockVector::add(const FockWord& w, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void FockVector::axpy(const Rational& c, const FockVector& x) {
  if (c.is_zero()) return;
  for (const auto& [w, v] : x.terms_) add(w, c * v);
}

Rational FockVector::coeff(const FockWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

FockVector& FockVector::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

std::optional<int> weight_of(const FockVector& v) {
  std::optional<int> w;
  for (const auto& [word, c] : v) {
    const int x = word.weight();
    if (w && *w != x) return std::nullopt;
    w = x;
  }
  return w;
}

std::optional<std::pair<int, FockWord>> normalize(const SurfaceModel& m,
                                                  const std::vector<Generator>& seq) {
  std::vector<Generator> g = seq;
  for (const auto& x : g) {
    if (x.n <= 0) throw PreconditionError("Nakajima word with nonpositive part " + std::to_string(x.n));
    if (x.cls >= m.dim()) throw DimensionError("generator class index", m.dim(), x.cls);
  }
  int sign = 1;
  // Insertion sort so that each adjacent swap can be charged its Koszul sign.
  for (std::size_t i = 1; i < g.size(); ++i)
    for (std::size_t j = i; j > 0 && g[j] < g[j - 1]; --j) {
      sign *= koszul(m.parity(g[j].cls), m.parity(g[j - 1].cls));
      std::swap(g[j], g[j - 1]);
    }
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g[i] == g[i - 1] && m.parity(g[i].cls) == 1) return std::nullopt;
  return std::make_pair(sign, FockWord{std::move(g)});
}

WeightCapError::WeightCapError(int requested, int cap)
    : Error("weight " + std::to_string(requested) + " exceeds the cap " + std::to_string(cap) +
            " (raise it with --max-weight)"),
      requested_(requested),
      cap_(cap) {}

FockSpace::FockSpace(SurfaceModel model, int max_weight)
    : model_(std::move(model)), max_weight_(max_weight) {}

void FockSpace::check_weight(int n) const {
  if (n < 0) throw PreconditionError("negative weight " + std::to_string(n));
  if (n > max_weight_) throw WeightCapError(n, max_weight_);
}

namespace {

void enumerate(const SurfaceModel& m, int remaining, const Generator* prev, std::vector<Generator>& cur,
               std::vector<FockWord>& out) {
  if (remaining == 0) {
    out.push_back(FockWord{cur});
    return;
  }
  const int top = prev ? std::min(prev->n, remaining) : remaining;
  for (int n = top; n >= 1; --n) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      const Generator g{n, c};
      if (prev) {
        if (g < *prev) continue;
        if (g == *prev && m.parity(c) == 1) continue;
      }
      cur.push_back(g);
      enumerate(m, remaining - n, &cur.back(), cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

const FockSpace::Level& FockSpace::level(int n) const {
  check_weight(n);
  {
    std::lock_guard lock(mu_);
    auto it = levels_.find(n);
    if (it != levels_.end()) return *it->second;
  }
  auto lvl = std::make_unique<Level>();
  std::vector<Generator> cur;
  cur.reserve(static_cast<std::size_t>(n));
  enumerate(model_, n, nullptr, cur, lvl->words);
  for (std::size_t i = 0; i < lvl->words.size(); ++i) lvl->index.emplace(lvl->words[i], i);
  std::lock_guard lock(mu_);
  auto [it, inserted] = levels_.try_emplace(n, std::move(lvl));
  return *it->second;
}

const std::vector<FockWord>& FockSpace::basis(int n) const { return level(n).words; }

std::optional<std::size_t> FockSpace::find(const FockWord& w) const {
  const int n = w.weight();
  if (n > max_weight_) return std::nullopt;
  const auto& idx = level(n).index;
  auto it = idx.find(w);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::size_t FockSpace::index(const FockWord& w) const {
  auto i = find(w);
  if (!i) throw PreconditionError("word " + str(w) + " is not a canonical basis word");
  return *i;
}

TriDegree FockSpace::tridegree(const FockWord& w) const {
  TriDegree t;
  for (const auto& g : w.gens) {
    const auto& b = model_.basis(g.cls);
    t.n += g.n;
    t.d += b.d + 2 * g.n - 2;
    t.k += b.k + g.n - 1;
  }
  return t;
}

int FockSpace::parity(const FockWord& w) const {
  int p = 0;
  for (const auto& g : w.gens) p ^= model_.parity(g.cls);
  return p;
}

SparseVec FockSpace::coords(const FockVector& v, int n) const {
  SparseVec c;
  for (const auto& [w, x] : v) {
    if (w.weight() != n)
      throw PreconditionError("vector term " + str(w) + " is not of weight " + std::to_string(n));
    c.add(index(w), x);
  }
  return c;
}

FockVector FockSpace::vector(const SparseVec& c, int n) const {
  const auto& b = basis(n);
  if (c.extent() > b.size()) throw DimensionError("coordinates longer than weight basis", b.size(), c.extent());
  FockVector v;
  for (const auto& [i, x] : c) v.add(b[i], x);
  return v;
}

FockVector FockSpace::unit_vector(int n) const {
  check_weight(n);
  FockWord w;
  w.gens.assign(static_cast<std::size_t>(n), Generator{1, model_.unit_index()});
  return FockVector::word(std::move(w), Rational(1) / factorial(static_cast<unsigned>(n)));
}

std::string FockSpace::str(const FockWord& w) const {
  if (w.is_vacuum()) return "vac";
  std::string s;
  for (std::size_t i = 0; i < w.gens.size(); ++i) {
    if (i) s += '.';
    s += "q" + std::to_string(w.gens[i].n) + "(" + model_.basis(w.gens[i].cls).label + ")";
  }
  return s;
}

std::string FockSpace::str(const FockVector& v) const {
  std::vector<std::pair<std::string, Rational>> terms;
  for (const auto& [w, c] : v) terms.emplace_back(str(w), c);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto [w, c] : terms) {
    if (c.sign() < 0) {
      s += first ? "-" : " - ";
      c = -c;
    } else if (!first) {
      s += " + ";
    }
    if (c != Rational(1)) s += c.str() + " ";
    s += w;
    first = false;
  }
  return s;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", rest());
  }
  std::string rest() const { return s.substr(std::min(pos, s.size())); }
  std::string digits() {
    skip();
    const std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(b, pos - b);
  }
  std::string label() {
    skip();
    const std::size_t b = pos;
    while (pos < s.size() && s[pos] != ')' && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(b, pos - b);
  }
};

// word := "vac" | gen ("." gen)*, gen := "q" digits "(" label ")"
std::vector<Generator> parse_gens(Cursor& c, const SurfaceModel& m) {
  std::vector<Generator> gens;
  if (c.s.compare(c.pos, 3, "vac") == 0) {
    c.pos += 3;
    return gens;
  }
  do {
    if (!c.accept('q')) throw ParseError("expected a word 'qN(label)'", c.rest());
    const std::string n = c.digits();
    if (n.empty()) throw ParseError("expected a part size after 'q'", c.rest());
    c.expect('(');
    const std::string lab = c.label();
    c.expect(')');
    const auto idx = m.find(lab);
    if (!idx) throw ParseError("unknown class label", lab);
    const int part = std::stoi(n);
    if (part <= 0) throw ParseError("part sizes must be positive", n);
    gens.push_back({part, *idx});
  } while (c.accept('.'));
  return gens;
}

}  // namespace

FockWord FockSpace::parse_word(const std::string& text, int* sign) const {
  Cursor c{text};
  c.skip();
  auto gens = parse_gens(c, model_);
  if (!c.eof()) throw ParseError("trailing characters after word", c.rest());
  auto nw = normalize(model_, gens);
  if (!nw) throw ParseError("word vanishes (repeated odd generator)", text);
  if (sign) *sign = nw->first;
  return nw->second;
}

FockVector FockSpace::parse_vector(const std::string& text) const {
  Cursor c{text};
  FockVector v;
  bool first = true;
  if (c.eof()) throw ParseError("empty vector expression", text);
  while (!c.eof()) {
    int sign = 1;
    if (c.accept('-'))
      sign = -1;
    else if (!c.accept('+') && !first)
      throw ParseError("expected '+' or '-'", c.rest());
    first = false;
    Rational coeff(sign);
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      std::string num = c.digits();
      if (c.accept('/')) {
        const std::string den = c.digits();
        if (den.empty()) throw ParseError("expected a denominator", c.rest());
        num += "/" + den;
      }
      coeff *= Rational::parse(num);
      have_number = true;
      c.accept('*');
    }
    const char nx = c.peek();
    if (nx == 'q' || nx == 'v') {
      auto gens = parse_gens(c, model_);
      if (auto nw = normalize(model_, gens)) v.add(nw->second, coeff * Rational(nw->first));
    } else if (have_number) {
      v.add(FockWord{}, coeff);
    } else {
      throw ParseError("expected a number or a word", c.rest());
    }
  }
  return v;
}

}  // namespace hilb
