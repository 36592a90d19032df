#include "dgcoh/parse.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

namespace dgcoh {

namespace {

struct Token {
  enum Kind { ident, number, op, end } kind;
  std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::ident, s.substr(i, j - i)});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::number, s.substr(i, j - i)});
      i = j;
    } else if (std::string("+-*^()").find(c) != std::string::npos) {
      out.push_back({Token::op, std::string(1, c)});
      ++i;
    } else {
      throw InputError(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::end, ""});
  return out;
}

/// Value of a subexpression: an algebra element or a module element.
struct Value {
  bool is_mod = false;
  Polynomial poly;
  ModElement mod;
};

class ExprParser {
 public:
  ExprParser(const std::string& text, const FreeAlgebra& fa, const PresentedDgModule* m)
      : toks_(tokenize(text)), fa_(fa), m_(m) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Token::end) throw InputError("unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(const std::string& op) {
    if (peek().kind == Token::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    Value acc;
    bool first = true;
    for (;;) {
      int sign = 1;
      if (accept("-"))
        sign = -1;
      else if (!first && !accept("+"))
        break;
      else if (first)
        accept("+");
      Value t = term();
      scale(t, sign);
      acc = first ? t : add(acc, t);
      first = false;
      if (peek().kind != Token::op || (peek().text != "+" && peek().text != "-")) break;
    }
    return acc;
  }

  Value term() {
    Value v = factor();
    while (accept("*")) v = mul(v, factor());
    return v;
  }

  Value factor() {
    Value base = atom();
    if (accept("^")) {
      if (peek().kind != Token::number) throw InputError("exponent must be a non-negative integer");
      int e = std::stoi(toks_[pos_++].text);
      if (base.is_mod) throw InputError("module generators cannot be raised to a power");
      Value r;
      r.poly = fa_.monomial(fa_.unit(), fa_.field().one());
      for (int k = 0; k < e; ++k) r.poly = fa_.multiply(r.poly, base.poly);
      return r;
    }
    return base;
  }

  Value atom() {
    const Token t = peek();
    if (t.kind == Token::number) {
      ++pos_;
      Value v;
      std::int64_t n = std::stoll(t.text);
      v.poly = fa_.monomial(fa_.unit(), fa_.field().from_int(n));
      return v;
    }
    if (t.kind == Token::ident) {
      ++pos_;
      for (std::size_t g = 0; g < fa_.num_generators(); ++g)
        if (fa_.generators()[g].name == t.text) {
          Value v;
          v.poly = fa_.monomial(fa_.generator(g), fa_.field().one());
          return v;
        }
      if (m_)
        if (auto g = m_->find_generator(t.text)) {
          Value v;
          v.is_mod = true;
          v.mod[*g] = fa_.monomial(fa_.unit(), fa_.field().one());
          return v;
        }
      throw InputError("unknown generator '" + t.text + "'");
    }
    if (accept("(")) {
      Value v = expr();
      if (!accept(")")) throw InputError("missing ')'");
      return v;
    }
    throw InputError("unexpected '" + t.text + "'");
  }

  void scale(Value& v, int sign) {
    if (sign > 0) return;
    const PrimeField& f = fa_.field();
    for (auto& [m, c] : v.poly) c = f.neg(c);
    for (auto& [g, p] : v.mod)
      for (auto& [m, c] : p) c = f.neg(c);
  }

  Value add(const Value& a, const Value& b) {
    const PrimeField& f = fa_.field();
    if (a.is_mod != b.is_mod) {
      const Value& p = a.is_mod ? b : a;
      if (!p.poly.empty()) throw InputError("cannot add an algebra element to a module element");
      return a.is_mod ? a : b;
    }
    Value r = a;
    fa_.add_to(r.poly, b.poly, f.one());
    for (const auto& [g, p] : b.mod) {
      fa_.add_to(r.mod[g], p, f.one());
      if (r.mod[g].empty()) r.mod.erase(g);
    }
    return r;
  }

  Value mul(const Value& a, const Value& b) {
    if (a.is_mod && b.is_mod) throw InputError("product of two module elements");
    Value r;
    if (!a.is_mod && !b.is_mod) {
      r.poly = fa_.multiply(a.poly, b.poly);
      return r;
    }
    r.is_mod = true;
    const PrimeField& f = fa_.field();
    if (a.is_mod) {
      for (const auto& [g, p] : a.mod) {
        Polynomial prod = fa_.multiply(p, b.poly);
        if (!prod.empty()) fa_.add_to(r.mod[g], prod, f.one());
      }
    } else {
      // a * (g b) = (-1)^{|a||g|} g (a b)
      for (const auto& [g, p] : b.mod) {
        const int gq = m_->generators[g].bidegree.cohomological;
        for (const auto& [mono, c] : a.poly) {
          Polynomial prod = fa_.multiply(fa_.monomial(mono, c), p);
          fa_.add_to(r.mod[g], prod, f.sign(gq * fa_.degree(mono).cohomological));
        }
      }
    }
    for (auto it = r.mod.begin(); it != r.mod.end();)
      it = it->second.empty() ? r.mod.erase(it) : std::next(it);
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const FreeAlgebra& fa_;
  const PresentedDgModule* m_;
};

struct Line {
  int number;
  std::string keyword;
  std::string rest;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  int n = 0;
  while (std::getline(is, raw)) {
    ++n;
    auto hash = raw.find('#');
    std::string s = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ls(s);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string rest;
    std::getline(ls, rest);
    out.push_back({n, kw, rest});
  }
  return out;
}

std::map<std::string, std::string> key_values(const std::string& rest, std::string* name) {
  std::istringstream is(rest);
  std::string tok;
  std::map<std::string, std::string> kv;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (name && name->empty())
        *name = tok;
      else
        throw InputError("unexpected token '" + tok + "'");
    } else {
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  return kv;
}

int to_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InputError("missing " + key + "=");
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw InputError("malformed value " + key + "=" + it->second);
  }
}

std::pair<std::string, std::string> split_assignment(const std::string& rest) {
  auto eq = rest.find('=');
  if (eq == std::string::npos) throw InputError("expected '<name> = <expression>'");
  std::string lhs = rest.substr(0, eq), rhs = rest.substr(eq + 1);
  std::istringstream ls(lhs);
  std::string name, extra;
  ls >> name;
  if (name.empty() || (ls >> extra)) throw InputError("expected a single generator name before '='");
  return {name, rhs};
}

[[noreturn]] void rethrow_at(const std::string& source, int line, const std::exception& e) {
  throw InputError(source + ":" + std::to_string(line) + ": " + e.what());
}

bool is_module_keyword(const std::string& kw) { return kw == "modgen" || kw == "moddiff" || kw == "modrel"; }

}  // namespace

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DgAlgebraPresentation parse_algebra(const std::string& text, const FieldOptions& opts, const std::string& source) {
  auto lines = split_lines(text);
  std::uint32_t p = PrimeField::kDefaultPrime;
  for (const auto& l : lines)
    if (l.keyword == "field") try {
        auto kv = key_values(l.rest, nullptr);
        p = static_cast<std::uint32_t>(to_int(kv, "p"));
      } catch (const std::exception& e) {
        rethrow_at(source, l.number, e);
      }
  if (opts.prime) p = *opts.prime;
  std::optional<PrimeField> field;
  try {
    field.emplace(p, opts.allow_char_2);
  } catch (const std::exception& e) {
    int at = 0;
    for (const auto& l : lines)
      if (l.keyword == "field") at = l.number;
    if (opts.prime || !at) throw InputError(std::string("field: ") + e.what());
    rethrow_at(source, at, e);
  }
  DgAlgebraPresentation pres{*field, {}, {}, {}};
  for (const auto& l : lines) {
    if (l.keyword != "gen") continue;
    try {
      std::string name;
      auto kv = key_values(l.rest, &name);
      if (name.empty()) throw InputError("generator needs a name");
      if (pres.find_generator(name)) throw InputError("duplicate generator '" + name + "'");
      Bidegree b{to_int(kv, "internal"), to_int(kv, "cohom")};
      if (b.internal < 1) throw InputError("generator internal degree must be >= 1");
      if (b.cohomological > 0) throw InputError("generator cohomological degree must be <= 0");
      pres.generators.push_back({name, b, parity_of(b.cohomological)});
    } catch (const std::exception& e) {
      rethrow_at(source, l.number, e);
    }
  }
  pres.differential.resize(pres.generators.size());
  FreeAlgebra fa(pres.field, pres.generators);
  for (const auto& l : lines) {
    try {
      if (l.keyword == "field" || l.keyword == "gen" || is_module_keyword(l.keyword)) continue;
      if (l.keyword == "rel") {
        Polynomial r = parse_polynomial(l.rest, fa);
        if (r.empty()) continue;
        if (!fa.homogeneous_degree(r)) throw InputError("non-homogeneous relation " + fa.format(r));
        pres.relations.push_back(r);
      } else if (l.keyword == "diff") {
        auto [name, rhs] = split_assignment(l.rest);
        auto g = pres.find_generator(name);
        if (!g) throw InputError("unknown generator '" + name + "'");
        Polynomial d = parse_polynomial(rhs, fa);
        auto deg = fa.homogeneous_degree(d);
        if (!d.empty() && !deg) throw InputError("non-homogeneous differential of " + name);
        Bidegree want = pres.generators[*g].bidegree + Bidegree{0, 1};
        if (deg && *deg != want)
          throw InputError("differential of " + name + " has bidegree " + to_string(*deg) + ", expected " +
                           to_string(want));
        pres.differential[*g] = d;
      } else {
        throw InputError("unknown keyword '" + l.keyword + "'");
      }
    } catch (const std::exception& e) {
      rethrow_at(source, l.number, e);
    }
  }
  return pres;
}

bool has_module_lines(const std::string& text) {
  for (const auto& l : split_lines(text))
    if (is_module_keyword(l.keyword)) return true;
  return false;
}

PresentedDgModule parse_module(const std::string& text, std::shared_ptr<const Algebra> a, const std::string& source) {
  PresentedDgModule m;
  m.algebra = a;
  auto lines = split_lines(text);
  for (const auto& l : lines) {
    if (l.keyword != "modgen") continue;
    try {
      std::string name;
      auto kv = key_values(l.rest, &name);
      if (name.empty()) throw InputError("module generator needs a name");
      if (m.find_generator(name) || a->presentation().find_generator(name))
        throw InputError("duplicate generator '" + name + "'");
      Bidegree b{to_int(kv, "internal"), to_int(kv, "cohom")};
      m.generators.push_back({name, b, parity_of(b.cohomological)});
    } catch (const std::exception& e) {
      rethrow_at(source, l.number, e);
    }
  }
  m.differential.resize(m.generators.size());
  for (const auto& l : lines) {
    try {
      if (l.keyword == "moddiff") {
        auto [name, rhs] = split_assignment(l.rest);
        auto g = m.find_generator(name);
        if (!g) throw InputError("unknown module generator '" + name + "'");
        ModElement d = parse_module_element(rhs, m);
        if (!d.empty()) {
          auto deg = m.homogeneous_degree(d);
          Bidegree want = m.generators[*g].bidegree + Bidegree{0, 1};
          if (!deg) throw InputError("non-homogeneous differential of " + name);
          if (*deg != want)
            throw InputError("differential of " + name + " has bidegree " + to_string(*deg) + ", expected " +
                             to_string(want));
        }
        m.differential[*g] = d;
      } else if (l.keyword == "modrel") {
        ModElement r = parse_module_element(l.rest, m);
        if (r.empty()) continue;
        if (!m.homogeneous_degree(r)) throw InputError("non-homogeneous module relation");
        m.relations.push_back(r);
      }
    } catch (const std::exception& e) {
      rethrow_at(source, l.number, e);
    }
  }
  return m;
}

Polynomial parse_polynomial(const std::string& expr, const FreeAlgebra& fa) {
  Value v = ExprParser(expr, fa, nullptr).parse();
  return v.poly;
}

ModElement parse_module_element(const std::string& expr, const PresentedDgModule& m) {
  Value v = ExprParser(expr, m.algebra->free(), &m).parse();
  if (!v.is_mod && !v.poly.empty()) throw InputError("expected a module element, got an algebra element");
  return v.mod;
}

WindowedComplex module_argument(const std::string& arg, std::shared_ptr<const Algebra> a, const Window& w) {
  static const std::regex builtin(R"(^\s*(A|k)\s*(>=\s*(-?\d+)|<\s*(-?\d+))?\s*(\(\s*(-?\d+)\s*\))?\s*(\[\s*(-?\d+)\s*\])?\s*$)");
  std::smatch mt;
  if (std::regex_match(arg, mt, builtin)) {
    ShiftSpec s{mt[6].matched ? std::stoi(mt[6]) : 0, mt[8].matched ? std::stoi(mt[8]) : 0};
    // the unshifted object must cover the window of the shifted one
    Window base = w.shifted(ShiftSpec{-s.twist, -s.shift});
    WindowedComplex m = mt[1] == "A" ? free_module(a, base) : residue_field(a, base);
    if (mt[3].matched) m = truncate_ge(m, std::stoi(mt[3])).with_label(mt[1].str() + ">=" + mt[3].str());
    if (mt[4].matched) m = truncate_lt(m, std::stoi(mt[4])).with_label(mt[1].str() + "<" + mt[4].str());
    if (s.twist || s.shift) m = shift_twist(m, s);
    return m.with_window(w);
  }
  std::filesystem::path p(arg);
  if (!std::filesystem::exists(p)) throw InputError("module '" + arg + "' is neither a builtin (A, k, A>=d, A<d, with optional (t)[s]) nor a file");
  std::string text = read_text_file(p);
  if (!has_module_lines(text)) throw InputError(arg + ": no modgen lines");
  return compile(parse_module(text, a, p.string()), w).with_label(p.stem().string());
}

}  // namespace dgcoh
