#include "dglift/instance.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "dglift/errors.hpp"

namespace dglift {

namespace {

struct Fail {
  SourceLocation at;
  std::string message;
};

[[noreturn]] void fail(SourceLocation at, std::string message) { throw Fail{at, std::move(message)}; }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

/// A piece of a line together with the column of its first character.
struct Span {
  std::string text;
  SourceLocation at;
};

Span trimmed(const std::string& line, std::size_t from, std::size_t to, int lineno) {
  while (from < to && std::isspace(static_cast<unsigned char>(line[from]))) ++from;
  while (to > from && std::isspace(static_cast<unsigned char>(line[to - 1]))) --to;
  return {line.substr(from, to - from), {lineno, static_cast<int>(from) + 1}};
}

int parse_int(const Span& s, const std::string& what) {
  if (s.text.empty()) fail(s.at, "missing " + what);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s.text, &used);
  } catch (const std::exception&) {
    fail(s.at, "expected an integer " + what + ", got '" + s.text + "'");
  }
  if (used != s.text.size()) fail(s.at, "expected an integer " + what + ", got '" + s.text + "'");
  return v;
}

struct Declaration {
  Span name;
  int degree = 0;
  std::optional<Span> differential;
  SourceLocation at;
};

/// "name : degree [, d = expression]"
Declaration parse_declaration(const std::string& line, int lineno) {
  const std::size_t colon = line.find(':');
  if (colon == std::string::npos) fail({lineno, 1}, "expected 'name : degree'");
  Declaration d;
  d.name = trimmed(line, 0, colon, lineno);
  d.at = d.name.at;
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_']*");
  if (!std::regex_match(d.name.text, ident)) fail(d.name.at, "bad name '" + d.name.text + "'");
  const std::size_t comma = line.find(',', colon);
  d.degree = parse_int(trimmed(line, colon + 1, comma == std::string::npos ? line.size() : comma, lineno), "degree");
  if (comma != std::string::npos) {
    Span rest = trimmed(line, comma + 1, line.size(), lineno);
    const std::size_t eq = line.find('=', comma);
    if (rest.text.empty() || rest.text[0] != 'd' || eq == std::string::npos || trim(line.substr(comma + 1, eq - comma - 1)) != "d")
      fail(rest.at, "expected 'd = expression' after the degree");
    d.differential = trimmed(line, eq + 1, line.size(), lineno);
    if (d.differential->text.empty()) fail(d.differential->at, "empty differential");
  }
  return d;
}

// ---- expressions -----------------------------------------------------------

enum class Tok { Number, Name, Plus, Minus, Times, Power, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLocation at;
};

std::vector<Token> tokenize(const Span& s) {
  std::vector<Token> out;
  const std::string& t = s.text;
  std::size_t i = 0;
  auto loc = [&](std::size_t p) { return SourceLocation{s.at.line, s.at.column + static_cast<int>(p)}; };
  while (i < t.size()) {
    const unsigned char c = t[i];
    if (std::isspace(c)) {
      ++i;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
      if (j + 1 < t.size() && t[j] == '/' && std::isdigit(static_cast<unsigned char>(t[j + 1]))) {
        ++j;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
      }
      out.push_back({Tok::Number, t.substr(i, j - i), loc(i)});
      i = j;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_' || t[j] == '\'')) ++j;
      out.push_back({Tok::Name, t.substr(i, j - i), loc(i)});
      i = j;
    } else if (t.compare(i, 2, "\xC2\xB7") == 0) {  // middle dot
      out.push_back({Tok::Times, "*", loc(i)});
      i += 2;
    } else if (t.compare(i, 3, "\xE2\x88\x92") == 0) {  // unicode minus
      out.push_back({Tok::Minus, "-", loc(i)});
      i += 3;
    } else {
      Tok k;
      switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Times; break;
        case '^': k = Tok::Power; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default: fail(loc(i), std::string("unexpected character '") + t[i] + "'");
      }
      out.push_back({k, std::string(1, t[i]), loc(i)});
      ++i;
    }
  }
  out.push_back({Tok::End, "", loc(t.size())});
  return out;
}

/// An algebra element, or a module element sum_m e_m * b_m.
struct Value {
  explicit Value(Element e) : alg(std::move(e)) {}
  bool is_module = false;
  Element alg;
  std::map<std::size_t, Element> mod;
};

bool is_scalar(const Element& e) {
  return e.terms().empty() || (e.terms().size() == 1 && e.terms().begin()->first.is_one());
}

class ExprParser {
 public:
  ExprParser(const Algebra& alg, const Span& s, const std::map<std::string, std::size_t>* generators)
      : alg_(alg), toks_(tokenize(s)), generators_(generators) {}

  Value parse() {
    Value v = sum();
    if (peek().kind != Tok::End) fail(peek().at, "unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  Value sum() {
    bool negate = false;
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negate = take().kind == Tok::Minus;
    Value acc = product();
    if (negate) acc = scale(acc, Scalar(alg_.field(), -1L));
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = take();
      Value rhs = product();
      if (op.kind == Tok::Minus) rhs = scale(rhs, Scalar(alg_.field(), -1L));
      acc = add(acc, rhs, op.at);
    }
    return acc;
  }

  bool starts_factor() const {
    const Tok k = peek().kind;
    return k == Tok::Number || k == Tok::Name || k == Tok::LParen;
  }

  Value product() {
    Value acc = power();
    while (peek().kind == Tok::Times || starts_factor()) {
      const SourceLocation at = peek().at;
      if (peek().kind == Tok::Times) take();
      Value rhs = power();
      acc = multiply(acc, rhs, at);
    }
    return acc;
  }

  Value power() {
    const SourceLocation at = peek().at;
    Value base = atom();
    if (peek().kind != Tok::Power) return base;
    take();
    const Token& e = take();
    if (e.kind != Tok::Number || e.text.find('/') != std::string::npos) fail(e.at, "exponent must be a natural number");
    if (base.is_module) fail(at, "cannot raise a module generator to a power");
    const int n = std::stoi(e.text);
    Element r = alg_.one();
    for (int i = 0; i < n; ++i) r = r * base.alg;
    return Value(r);
  }

  Value atom() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::Number: {
        mpq_class q(t.text);
        q.canonicalize();
        try {
          return Value(alg_.constant(Scalar(alg_.field(), q)));
        } catch (const std::exception& e) {
          fail(t.at, std::string("constant ") + t.text + ": " + e.what());
        }
      }
      case Tok::Name: {
        if (generators_) {
          auto it = generators_->find(t.text);
          if (it != generators_->end()) {
            Value v(alg_.zero());
            v.is_module = true;
            v.mod.emplace(it->second, alg_.one());
            return v;
          }
        }
        if (!alg_.base().is_field() && t.text == alg_.base().generator) return Value(alg_.base_generator());
        if (auto i = alg_.variable_index(t.text)) return Value(alg_.generator(*i));
        fail(t.at, "unknown name '" + t.text + "'");
      }
      case Tok::LParen: {
        Value v = sum();
        if (take().kind != Tok::RParen) fail(toks_[pos_ - 1].at, "expected ')'");
        return v;
      }
      default:
        fail(t.at, t.kind == Tok::End ? "expression ends too early" : "unexpected '" + t.text + "'");
    }
  }

  Value scale(Value v, const Scalar& c) {
    v.alg = v.alg * c;
    for (auto& [m, b] : v.mod) b = b * c;
    return v;
  }

  Value add(Value a, const Value& b, SourceLocation at) {
    if (a.is_module != b.is_module) {
      // 0 may be added to anything.
      if (!a.is_module && a.alg.is_zero()) return b;
      if (!b.is_module && b.alg.is_zero()) return a;
      fail(at, "cannot add an algebra element to a module element");
    }
    a.alg += b.alg;
    for (const auto& [m, x] : b.mod) {
      auto [it, fresh] = a.mod.emplace(m, x);
      if (!fresh) it->second += x;
    }
    return a;
  }

  Value multiply(const Value& a, const Value& b, SourceLocation at) {
    if (a.is_module && b.is_module) fail(at, "product of two module generators");
    if (b.is_module) {
      if (!is_scalar(a.alg)) fail(at, "module generator must be the leftmost non-scalar factor");
      Value r = b;
      for (auto& [m, x] : r.mod) x = a.alg * x;
      return r;
    }
    if (a.is_module) {
      Value r = a;
      for (auto& [m, x] : r.mod) x = x * b.alg;
      return r;
    }
    return Value(a.alg * b.alg);
  }

  const Algebra& alg_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::map<std::string, std::size_t>* generators_;
};

// ---- sections ----------------------------------------------------------------

struct RawModule {
  Span name;
  std::vector<Declaration> generators;
};

struct Raw {
  std::optional<Span> ring;
  std::vector<Declaration> variables;
  std::optional<Span> subalgebra;
  std::vector<RawModule> modules;
  InstanceLimits limits;
};

BaseRing parse_ring(const Span& s, const Field& f) {
  std::string compact;
  for (char c : s.text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  if (compact == "k") return BaseRing::of_field(f);
  static const std::regex truncated(R"(k\[([A-Za-z_][A-Za-z0-9_]*)\]/\(([A-Za-z_][A-Za-z0-9_]*)\^([0-9]+)\))");
  std::smatch m;
  if (!std::regex_match(compact, m, truncated)) fail(s.at, "expected 'k' or 'k[a]/(a^m)', got '" + s.text + "'");
  if (m[1] != m[2]) fail(s.at, "the relation must be a power of the generator " + m[1].str());
  const int order = std::stoi(m[3]);
  if (order < 2) fail(s.at, "nilpotency order must be at least 2");
  return BaseRing::truncated(f, m[1], order);
}

Raw scan(std::string_view text) {
  Raw raw;
  enum class Section { None, Base, Algebra, Module, Limits } section = Section::None;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const Span all = trimmed(line, 0, line.size(), lineno);
    if (all.text.empty()) continue;

    if (all.text.front() == '[') {
      if (all.text.back() != ']') fail(all.at, "unterminated section header");
      const std::string inner = trim(std::string_view(all.text).substr(1, all.text.size() - 2));
      if (inner == "base") {
        section = Section::Base;
      } else if (inner == "algebra") {
        section = Section::Algebra;
      } else if (inner == "limits") {
        section = Section::Limits;
      } else if (inner.rfind("module", 0) == 0 && (inner.size() == 6 || std::isspace(static_cast<unsigned char>(inner[6])))) {
        const std::string name = trim(std::string_view(inner).substr(6));
        if (name.empty()) fail(all.at, "module section needs a name");
        for (const auto& m : raw.modules)
          if (m.name.text == name) fail(all.at, "duplicate module '" + name + "'");
        raw.modules.push_back({{name, all.at}, {}});
        section = Section::Module;
      } else {
        fail(all.at, "unknown section [" + inner + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    const std::size_t colon = line.find(':');
    const bool is_setting = eq != std::string::npos && (colon == std::string::npos || eq < colon);
    Span key = is_setting ? trimmed(line, 0, eq, lineno) : Span{};
    Span value = is_setting ? trimmed(line, eq + 1, line.size(), lineno) : Span{};
    switch (section) {
      case Section::None:
        fail(all.at, "content before the first section");
      case Section::Base:
        if (!is_setting || key.text != "ring") fail(all.at, "expected 'ring = ...' in [base]");
        if (raw.ring) fail(key.at, "ring given twice");
        raw.ring = value;
        break;
      case Section::Algebra:
        if (is_setting) {
          if (key.text != "subalgebra") fail(key.at, "unknown setting '" + key.text + "' in [algebra]");
          if (raw.subalgebra) fail(key.at, "subalgebra given twice");
          raw.subalgebra = value;
        } else {
          raw.variables.push_back(parse_declaration(line, lineno));
        }
        break;
      case Section::Module:
        if (is_setting) fail(all.at, "expected 'name : degree [, d = expression]'");
        raw.modules.back().generators.push_back(parse_declaration(line, lineno));
        break;
      case Section::Limits: {
        if (!is_setting) fail(all.at, "expected 'key = value' in [limits]");
        std::optional<int>* slot = key.text == "max_degree" ? &raw.limits.max_degree
                                   : key.text == "max_tensor" ? &raw.limits.max_tensor
                                   : key.text == "lbound"     ? &raw.limits.lbound
                                                              : nullptr;
        if (!slot) fail(key.at, "unknown limit '" + key.text + "'");
        const int v = parse_int(value, key.text);
        if (v < (key.text == "max_degree" ? 0 : 1)) fail(value.at, key.text + " is out of range");
        *slot = v;
        break;
      }
    }
  }
  return raw;
}

Algebra build_algebra(const Raw& raw, const Field& f) {
  const BaseRing base = raw.ring ? parse_ring(*raw.ring, f) : BaseRing::of_field(f);
  std::vector<std::pair<std::string, int>> vars;
  std::set<std::string> seen;
  for (const auto& d : raw.variables) {
    if (d.name.text == base.generator) fail(d.at, "variable '" + d.name.text + "' clashes with the base generator");
    if (!seen.insert(d.name.text).second) fail(d.at, "duplicate variable '" + d.name.text + "'");
    if (d.degree < 1) fail(d.at, "variable '" + d.name.text + "' must have degree >= 1");
    vars.emplace_back(d.name.text, d.degree);
  }
  const Algebra skeleton = Algebra::graded_skeleton(base, vars);

  Presentation pres;
  pres.base = base;
  for (std::size_t i = 0; i < raw.variables.size(); ++i) {
    const auto& d = raw.variables[i];
    VariableSpec spec{d.name.text, d.degree, {}};
    if (d.differential) {
      const Value v = ExprParser(skeleton, *d.differential, nullptr).parse();
      for (const auto& [m, c] : v.alg.terms()) {
        if (skeleton.degree(m) != d.degree - 1)
          fail(d.differential->at, "d(" + d.name.text + ") has a term of degree " + std::to_string(skeleton.degree(m)) +
                                       ", expected " + std::to_string(d.degree - 1));
        for (std::size_t j = i; j < m.exponents.size(); ++j)
          if (m.exponents[j] != 0)
            fail(d.differential->at, "d(" + d.name.text + ") may only involve earlier variables, found '" +
                                         raw.variables[j].name.text + "'");
      }
      spec.differential = v.alg.terms();
    }
    pres.variables.push_back(std::move(spec));
  }

  if (raw.subalgebra) {
    std::vector<std::string> names;
    std::stringstream ss(raw.subalgebra->text);
    for (std::string item; std::getline(ss, item, ',');)
      if (auto t = trim(item); !t.empty()) names.push_back(t);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (i >= vars.size() || names[i] != vars[i].first)
        fail(raw.subalgebra->at, "subalgebra must list a prefix of the variables in order, '" + names[i] + "' breaks it");
    pres.a_prefix = names.size();
  }

  try {
    return Algebra(std::move(pres));
  } catch (const Error& e) {
    fail(raw.variables.empty() ? SourceLocation{1, 1} : raw.variables.front().at, e.what());
  }
}

SemifreeModule build_module(const Algebra& alg, const RawModule& raw, int cap) {
  std::map<std::string, std::size_t> names;
  std::vector<BasisElement> basis;
  std::vector<std::map<std::size_t, Element>> diff;
  for (const auto& g : raw.generators) {
    const std::size_t l = basis.size();
    if (alg.variable_index(g.name.text) || g.name.text == alg.base().generator)
      fail(g.at, "generator '" + g.name.text + "' clashes with an algebra name");
    if (names.count(g.name.text)) fail(g.at, "duplicate generator '" + g.name.text + "'");
    std::map<std::size_t, Element> column;
    if (g.differential) {
      // Only earlier generators are visible, which enforces triangularity.
      const Value v = ExprParser(alg, *g.differential, &names).parse();
      if (!v.is_module && !v.alg.is_zero())
        fail(g.differential->at, "d(" + g.name.text + ") must be a combination of earlier generators");
      for (const auto& [m, b] : v.mod) {
        if (b.is_zero()) continue;
        const int want = g.degree - 1 - basis[m].degree;
        const auto got = b.degree();
        if (!got || *got != want)
          fail(g.differential->at, "coefficient of " + basis[m].name + " in d(" + g.name.text +
                                       ") should have degree " + std::to_string(want));
        column.emplace(m, b);
      }
    }
    names.emplace(g.name.text, l);
    basis.push_back({g.name.text, g.degree});
    diff.push_back(std::move(column));
    // Validating each prefix pins a failure such as d^2 != 0 to its line.
    try {
      SemifreeModule(alg, basis, diff, cap);
    } catch (const Error& e) {
      fail(g.differential ? g.differential->at : g.at, e.what());
    }
  }
  return SemifreeModule(alg, std::move(basis), std::move(diff), cap);
}

}  // namespace

const NamedModule& Instance::module(const std::string& name) const {
  for (const auto& m : modules)
    if (m.name == name) return m;
  throw Error(ErrorKind::InvalidInstance, source + ": no module named '" + name + "'");
}

Instance parse_instance(std::string_view text, const ParseOptions& opts, const std::string& source) {
  try {
    Raw raw = scan(text);
    Algebra alg = build_algebra(raw, opts.field);
    if (raw.modules.empty()) fail({1, 1}, "no [module NAME] section");
    const int cap = opts.max_degree.value_or(raw.limits.max_degree.value_or(kDefaultMaxDegree));
    Instance inst{source, alg, {}, raw.limits};
    for (const auto& m : raw.modules) {
      if (m.generators.empty()) fail(m.name.at, "module '" + m.name.text + "' has no generators");
      inst.modules.push_back({m.name.text, build_module(alg, m, cap), m.name.at});
    }
    return inst;
  } catch (const Fail& f) {
    throw Error(ErrorKind::InvalidInstance,
                source + ":" + std::to_string(f.at.line) + ":" + std::to_string(f.at.column) + ": " + f.message);
  }
}

Instance load_instance(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInstance, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), opts, path);
}

}  // namespace dglift
