#include "dgcoh/algebra.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dgcoh {

namespace {

bool is_odd(const GeneratorSpec& g) { return g.parity == Parity::odd; }

Exponents extend(const Exponents& e, std::size_t n) {
  Exponents out = e;
  out.resize(n, 0);
  return out;
}

Polynomial extend(const Polynomial& p, std::size_t n) {
  Polynomial out;
  for (const auto& [m, c] : p) out[extend(m, n)] = c;
  return out;
}

std::string default_name(const std::string& stem, const std::string& letters, std::size_t i, std::size_t n) {
  if (n <= letters.size()) return std::string(1, letters[i]);
  return stem + std::to_string(i + 1);
}

}  // namespace

// FreeAlgebra ---------------------------------------------------------------

FreeAlgebra::FreeAlgebra(PrimeField field, std::vector<GeneratorSpec> gens) : field_(field), gens_(std::move(gens)) {}

Exponents FreeAlgebra::generator(std::size_t g) const {
  Exponents e = unit();
  e.at(g) = 1;
  return e;
}

Bidegree FreeAlgebra::degree(const Exponents& m) const {
  Bidegree b;
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    b.internal += m[g] * gens_[g].bidegree.internal;
    b.cohomological += m[g] * gens_[g].bidegree.cohomological;
  }
  return b;
}

std::optional<std::pair<Exponents, int>> FreeAlgebra::multiply(const Exponents& a, const Exponents& b) const {
  const std::size_t n = gens_.size();
  // odd factors of a with index > g, accumulated from the right
  int odd_after = 0;
  int swaps = 0;
  Exponents r(n);
  for (std::size_t k = n; k-- > 0;) {
    if (is_odd(gens_[k])) {
      if (a[k] && b[k]) return std::nullopt;
      if (b[k]) swaps += odd_after;
      if (a[k]) ++odd_after;
    }
    r[k] = a[k] + b[k];
  }
  return std::make_pair(std::move(r), (swaps & 1) ? -1 : 1);
}

Polynomial FreeAlgebra::multiply(const Polynomial& a, const Polynomial& b) const {
  Polynomial out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      auto prod = multiply(ma, mb);
      if (!prod) continue;
      Scalar c = field_.mul(ca, cb);
      if (prod->second < 0) c = field_.neg(c);
      Scalar& slot = out[prod->first];
      slot = field_.add(slot, c);
      if (slot == 0) out.erase(prod->first);
    }
  return out;
}

void FreeAlgebra::add_to(Polynomial& acc, const Polynomial& p, Scalar scale) const {
  for (const auto& [m, c] : p) {
    Scalar& slot = acc[m];
    slot = field_.add(slot, field_.mul(scale, c));
    if (slot == 0) acc.erase(m);
  }
}

std::optional<Bidegree> FreeAlgebra::homogeneous_degree(const Polynomial& p) const {
  std::optional<Bidegree> d;
  for (const auto& [m, c] : p) {
    Bidegree b = degree(m);
    if (d && *d != b) return std::nullopt;
    d = b;
  }
  return d;
}

Polynomial FreeAlgebra::differentiate(const Exponents& m, const std::vector<Polynomial>& gen_diffs) const {
  std::vector<std::size_t> word;
  for (std::size_t g = 0; g < gens_.size(); ++g)
    for (int e = 0; e < m[g]; ++e) word.push_back(g);
  Polynomial out;
  Exponents prefix = unit();
  int prefix_cohom = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const std::size_t g = word[k];
    Exponents suffix = unit();
    for (std::size_t l = k + 1; l < word.size(); ++l) ++suffix[word[l]];
    if (g < gen_diffs.size() && !gen_diffs[g].empty()) {
      Polynomial term = multiply(multiply(monomial(prefix, field_.one()), gen_diffs[g]), monomial(suffix, field_.one()));
      add_to(out, term, field_.sign(prefix_cohom));
    }
    ++prefix[g];
    prefix_cohom += gens_[g].bidegree.cohomological;
  }
  return out;
}

Polynomial FreeAlgebra::differentiate(const Polynomial& p, const std::vector<Polynomial>& gen_diffs) const {
  Polynomial out;
  for (const auto& [m, c] : p) add_to(out, differentiate(m, gen_diffs), c);
  return out;
}

std::map<int, std::vector<Exponents>> FreeAlgebra::monomials_of_internal_degree(int internal) const {
  std::map<int, std::vector<Exponents>> out;
  if (internal < 0) return out;
  Exponents cur = unit();
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t g, int remaining, int cohom) {
    if (g == gens_.size()) {
      if (remaining == 0) out[cohom].push_back(cur);
      return;
    }
    const int deg = gens_[g].bidegree.internal;
    if (deg <= 0) throw InputError("generator '" + gens_[g].name + "' must have internal degree >= 1");
    const int max_e = is_odd(gens_[g]) ? 1 : remaining / deg;
    for (int e = std::min(max_e, remaining / deg); e >= 0; --e) {
      cur[g] = e;
      rec(g + 1, remaining - e * deg, cohom + e * gens_[g].bidegree.cohomological);
    }
    cur[g] = 0;
  };
  rec(0, internal, 0);
  for (auto& [j, v] : out) std::sort(v.begin(), v.end(), std::greater<>());
  return out;
}

std::string FreeAlgebra::format(const Exponents& m) const {
  std::string s;
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    if (!m[g]) continue;
    if (!s.empty()) s += '*';
    s += gens_[g].name;
    if (m[g] > 1) s += '^' + std::to_string(m[g]);
  }
  return s.empty() ? "1" : s;
}

std::string FreeAlgebra::format(const Polynomial& p) const {
  if (p.empty()) return "0";
  std::string s;
  // descending monomial order for readability
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    std::int64_t c = field_.to_signed(it->second);
    std::string mono = format(it->first);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    std::int64_t a = c < 0 ? -c : c;
    if (mono == "1")
      s += std::to_string(a);
    else if (a == 1)
      s += mono;
    else
      s += std::to_string(a) + "*" + mono;
  }
  return s;
}

// Presentation --------------------------------------------------------------

std::optional<std::size_t> DgAlgebraPresentation::find_generator(const std::string& name) const {
  for (std::size_t g = 0; g < generators.size(); ++g)
    if (generators[g].name == name) return g;
  return std::nullopt;
}

std::string DgAlgebraPresentation::to_text() const {
  FreeAlgebra fa(field, generators);
  std::ostringstream os;
  os << "field p=" << field.characteristic() << '\n';
  for (const auto& g : generators)
    os << "gen " << g.name << " internal=" << g.bidegree.internal << " cohom=" << g.bidegree.cohomological << '\n';
  for (const auto& r : relations) os << "rel " << fa.format(r) << '\n';
  for (std::size_t g = 0; g < generators.size(); ++g)
    if (g < differential.size() && !differential[g].empty())
      os << "diff " << generators[g].name << " = " << fa.format(differential[g]) << '\n';
  return os.str();
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) os << v.what << " at " << v.where << ": " << v.detail << '\n';
  return os.str();
}

// Algebra -------------------------------------------------------------------

Algebra::Algebra(DgAlgebraPresentation presentation)
    : pres_(std::move(presentation)), free_(pres_.field, pres_.generators) {
  pres_.differential.resize(pres_.generators.size());
  auto report = check_presentation(pres_);
  if (!report.ok()) throw InputError("invalid algebra presentation: " + report.summary());
}

int Algebra::max_generator_internal_degree() const {
  int m = 1;
  for (const auto& g : pres_.generators) m = std::max(m, g.bidegree.internal);
  return m;
}

std::shared_ptr<const BidegreeBasis> Algebra::basis(const Bidegree& b) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = bases_.find(b); it != bases_.end()) return it->second;

  auto out = std::make_shared<BidegreeBasis>();
  out->bidegree = b;
  auto free_at = [&](const Bidegree& d) -> const std::vector<Exponents>* {
    if (d.internal < 0) return nullptr;
    auto it = free_by_internal_.find(d.internal);
    if (it == free_by_internal_.end())
      it = free_by_internal_.emplace(d.internal, free_.monomials_of_internal_degree(d.internal)).first;
    auto jt = it->second.find(d.cohomological);
    return jt == it->second.end() ? nullptr : &jt->second;
  };
  if (const auto* fm = free_at(b)) out->free_monomials = *fm;
  for (std::size_t k = 0; k < out->free_monomials.size(); ++k) out->free_index[out->free_monomials[k]] = k;

  const PrimeField& f = pres_.field;
  Echelon<PrimeField> ideal(f, out->free_monomials.size());
  for (const auto& rel : pres_.relations) {
    auto rdeg = free_.homogeneous_degree(rel);
    if (!rdeg) continue;
    const auto* mults = free_at(b - *rdeg);
    if (!mults) continue;
    for (const auto& m : *mults) {
      Polynomial prod = free_.multiply(free_.monomial(m, f.one()), rel);
      Vec v;
      for (const auto& [mono, c] : prod) v.emplace_back(static_cast<std::uint32_t>(out->free_index.at(mono)), c);
      std::sort(v.begin(), v.end());
      ideal.insert(v);
    }
  }
  ideal.make_reduced();
  std::vector<int> rep_of(out->free_monomials.size(), -1);
  for (std::size_t k = 0; k < out->free_monomials.size(); ++k)
    if (ideal.pivot_row(k) < 0) {
      rep_of[k] = static_cast<int>(out->representatives.size());
      out->representatives.push_back(k);
    }
  out->normal_form.resize(out->free_monomials.size());
  for (std::size_t k = 0; k < out->free_monomials.size(); ++k) {
    if (rep_of[k] >= 0) {
      out->normal_form[k] = {{static_cast<std::uint32_t>(rep_of[k]), f.one()}};
      continue;
    }
    const auto& row = ideal.rows()[ideal.pivot_row(k)];
    Vec v;
    for (std::size_t e = 1; e < row.size(); ++e)
      v.emplace_back(static_cast<std::uint32_t>(rep_of[row[e].first]), f.neg(row[e].second));
    std::sort(v.begin(), v.end());
    out->normal_form[k] = std::move(v);
  }
  bases_[b] = out;
  return out;
}

std::vector<int> Algebra::support_column(int internal) const {
  std::map<int, std::vector<Exponents>> fm;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = free_by_internal_.find(internal);
    if (it == free_by_internal_.end())
      it = free_by_internal_.emplace(internal, free_.monomials_of_internal_degree(internal)).first;
    fm = it->second;
  }
  std::vector<int> out;
  for (const auto& [j, v] : fm)
    if (dim({internal, j}) > 0) out.push_back(j);
  return out;
}

Vec Algebra::normal_form(const Polynomial& p, const Bidegree& b) const {
  auto bas = basis(b);
  const PrimeField& f = pres_.field;
  std::map<std::uint32_t, Scalar> acc;
  for (const auto& [m, c] : p) {
    auto it = bas->free_index.find(m);
    if (it == bas->free_index.end())
      throw EngineError("monomial " + free_.format(m) + " is not of bidegree " + to_string(b));
    for (const auto& [k, v] : bas->normal_form[it->second]) acc[k] = f.add(acc[k], f.mul(c, v));
  }
  Vec out;
  for (const auto& [k, v] : acc)
    if (v) out.emplace_back(k, v);
  return out;
}

Polynomial Algebra::to_polynomial(const Bidegree& b, const Vec& v) const {
  auto bas = basis(b);
  Polynomial p;
  for (const auto& [k, c] : v) p[bas->monomial(k)] = c;
  return p;
}

Vec Algebra::multiply(const Bidegree& bx, const Vec& x, const Bidegree& by, const Vec& y) const {
  if (x.empty() || y.empty()) return {};
  auto basx = basis(bx);
  auto basy = basis(by);
  Bidegree bz = bx + by;
  auto basz = basis(bz);
  const PrimeField& f = pres_.field;
  std::map<std::uint32_t, Scalar> acc;
  for (const auto& [u, cu] : x)
    for (const auto& [v, cv] : y) {
      auto prod = free_.multiply(basx->monomial(u), basy->monomial(v));
      if (!prod) continue;
      Scalar c = f.mul(cu, cv);
      if (prod->second < 0) c = f.neg(c);
      for (const auto& [k, w] : basz->normal_form[basz->free_index.at(prod->first)]) acc[k] = f.add(acc[k], f.mul(c, w));
    }
  Vec out;
  for (const auto& [k, v] : acc)
    if (v) out.emplace_back(k, v);
  return out;
}

Matrix Algebra::mult_matrix(std::size_t g, const Bidegree& b) const {
  const Bidegree dg = pres_.generators.at(g).bidegree;
  auto src = basis(b);
  MatrixBuilder<PrimeField> m(pres_.field, dim(b + dg), src->dim());
  Vec gen = normal_form(free_.monomial(free_.generator(g), pres_.field.one()), dg);
  for (std::size_t k = 0; k < src->dim(); ++k)
    for (const auto& [r, v] : multiply(dg, gen, b, {{static_cast<std::uint32_t>(k), pres_.field.one()}})) m.add(r, k, v);
  return m.build();
}

Matrix Algebra::right_mult_matrix(std::size_t g, const Bidegree& b) const {
  const Bidegree dg = pres_.generators.at(g).bidegree;
  return right_mult_matrix(dg, normal_form(free_.monomial(free_.generator(g), pres_.field.one()), dg), b);
}

Matrix Algebra::right_mult_matrix(const Bidegree& bc, const Vec& c, const Bidegree& b) const {
  auto src = basis(b);
  MatrixBuilder<PrimeField> m(pres_.field, dim(b + bc), src->dim());
  for (std::size_t k = 0; k < src->dim(); ++k)
    for (const auto& [r, v] : multiply(b, {{static_cast<std::uint32_t>(k), pres_.field.one()}}, bc, c)) m.add(r, k, v);
  return m.build();
}

Polynomial Algebra::free_diff(const Exponents& m) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = diff_cache_.find(m); it != diff_cache_.end()) return it->second;
  }
  Polynomial d = free_.differentiate(m, pres_.differential);
  std::lock_guard<std::mutex> lock(mu_);
  diff_cache_.emplace(m, d);
  return d;
}

Matrix Algebra::diff_matrix(const Bidegree& b) const {
  auto src = basis(b);
  const Bidegree tgt = b + Bidegree{0, 1};
  MatrixBuilder<PrimeField> m(pres_.field, dim(tgt), src->dim());
  for (std::size_t k = 0; k < src->dim(); ++k)
    for (const auto& [r, v] : normal_form(free_diff(src->monomial(k)), tgt)) m.add(r, k, v);
  return m.build();
}

Vec Algebra::differentiate(const Bidegree& b, const Vec& v) const { return apply(pres_.field, diff_matrix(b), v); }

// Validation ----------------------------------------------------------------

ValidationReport check_presentation(const DgAlgebraPresentation& p) {
  ValidationReport rep;
  FreeAlgebra fa(p.field, p.generators);
  for (const auto& g : p.generators) {
    if (g.bidegree.internal < 1)
      rep.violations.push_back({"generator internal degree must be >= 1", g.bidegree, g.name});
    if (g.bidegree.cohomological > 0)
      rep.violations.push_back({"generator cohomological degree must be <= 0", g.bidegree, g.name});
    if (g.parity != parity_of(g.bidegree.cohomological))
      rep.violations.push_back({"parity must equal cohomological degree mod 2", g.bidegree, g.name});
  }
  if (!rep.ok()) return rep;
  for (std::size_t r = 0; r < p.relations.size(); ++r) {
    auto d = fa.homogeneous_degree(p.relations[r]);
    if (!d && !p.relations[r].empty())
      rep.violations.push_back({"non-homogeneous relation", {}, fa.format(p.relations[r])});
  }
  for (std::size_t g = 0; g < p.generators.size() && g < p.differential.size(); ++g) {
    const auto& dg = p.differential[g];
    if (dg.empty()) continue;
    auto d = fa.homogeneous_degree(dg);
    Bidegree want = p.generators[g].bidegree + Bidegree{0, 1};
    if (!d)
      rep.violations.push_back({"non-homogeneous differential", p.generators[g].bidegree, p.generators[g].name});
    else if (*d != want)
      rep.violations.push_back({"differential bidegree mismatch (expected " + to_string(want) + ", got " +
                                    to_string(*d) + ")",
                                p.generators[g].bidegree, p.generators[g].name});
  }
  return rep;
}

ValidationReport check_dga(const Algebra& a, const Window& w) {
  ValidationReport rep = check_presentation(a.presentation());
  if (!rep.ok()) return rep;
  const PrimeField& f = a.field();
  const auto& pres = a.presentation();
  const FreeAlgebra& fa = a.free();
  for (int i = std::max(0, w.i_min); i <= w.i_max; ++i) {
    for (int j : a.support_column(i)) {
      Bidegree b{i, j};
      if (i == 0 && j != 0) rep.violations.push_back({"not connected: A_0 != k", b, "nonzero A_0^j"});
      if (i == 0 && j == 0 && a.dim(b) != 1) rep.violations.push_back({"not connected: dim A_0^0 != 1", b, ""});
      if (j > 0) rep.violations.push_back({"not connected: positive cohomological degree", b, ""});
      Bidegree b1 = b + Bidegree{0, 1};
      Matrix dd = multiply(f, a.diff_matrix(b1), a.diff_matrix(b));
      if (!dd.is_zero()) {
        auto bas = a.basis(b);
        std::string mono;
        for (std::size_t r = 0; r < dd.rows() && mono.empty(); ++r)
          if (!dd.row(r).empty()) mono = fa.format(bas->monomial(dd.row(r).front().first));
        rep.violations.push_back({"d^2 != 0", b, mono});
      }
      // d(ideal) contained in ideal: d(m * rel) must vanish in the quotient
      for (const auto& rel : pres.relations) {
        auto rdeg = fa.homogeneous_degree(rel);
        if (!rdeg) continue;
        Bidegree md = b - *rdeg;
        if (md.internal < 0) continue;
        auto mons = fa.monomials_of_internal_degree(md.internal);
        auto it = mons.find(md.cohomological);
        if (it == mons.end()) continue;
        for (const auto& m : it->second) {
          Polynomial prod = fa.multiply(fa.monomial(m, f.one()), rel);
          Polynomial dprod = fa.differentiate(prod, pres.differential);
          if (!a.normal_form(dprod, b1).empty()) {
            rep.violations.push_back({"differential does not preserve the relation ideal", b, fa.format(prod)});
            break;
          }
        }
      }
      // Leibniz on generators: d(g m) = d(g) m + (-1)^{|g|} g d(m)
      for (std::size_t g = 0; g < a.num_generators(); ++g) {
        const Bidegree dgb = a.generator(g).bidegree;
        Bidegree t = b + dgb;
        if (t.internal > w.i_max) continue;
        Matrix lhs = multiply(f, a.diff_matrix(t), a.mult_matrix(g, b));
        Bidegree ddeg = dgb + Bidegree{0, 1};
        Vec dgen = a.normal_form(pres.differential[g], ddeg);
        MatrixBuilder<PrimeField> left_dg(f, a.dim(t + Bidegree{0, 1}), a.dim(b));
        for (std::size_t k = 0; k < a.dim(b); ++k)
          for (const auto& [r, v] : a.multiply(ddeg, dgen, b, {{static_cast<std::uint32_t>(k), f.one()}}))
            left_dg.add(r, k, v);
        Matrix rhs = add(f, left_dg.build(), multiply(f, a.mult_matrix(g, b1), a.diff_matrix(b)), f.sign(dgb.cohomological));
        if (!(lhs == rhs)) rep.violations.push_back({"Leibniz rule fails", b, a.generator(g).name});
      }
    }
  }
  return rep;
}

// Builders ------------------------------------------------------------------

DgAlgebraPresentation polynomial_algebra(PrimeField f, const std::vector<int>& internal_degrees,
                                         const std::vector<std::string>& names) {
  DgAlgebraPresentation p{f, {}, {}, {}};
  for (std::size_t i = 0; i < internal_degrees.size(); ++i) {
    std::string n = i < names.size() ? names[i] : default_name("x", "xyzw", i, internal_degrees.size());
    p.generators.push_back({n, {internal_degrees[i], 0}, Parity::even});
  }
  p.differential.resize(p.generators.size());
  return p;
}

DgAlgebraPresentation exterior_algebra(PrimeField f, const std::vector<Bidegree>& degrees,
                                       const std::vector<std::string>& names) {
  DgAlgebraPresentation p{f, {}, {}, {}};
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    std::string n = i < names.size() ? names[i] : (degrees.size() == 1 ? "e" : "e" + std::to_string(i + 1));
    p.generators.push_back({n, degrees[i], parity_of(degrees[i].cohomological)});
  }
  FreeAlgebra fa(f, p.generators);
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (p.generators[i].parity == Parity::even) {
      Exponents e = fa.unit();
      e[i] = 2;
      p.relations.push_back({{e, f.one()}});
    }
  p.differential.resize(p.generators.size());
  return p;
}

DgAlgebraPresentation koszul_algebra(const DgAlgebraPresentation& s, const std::vector<Polynomial>& forms) {
  DgAlgebraPresentation p = s;
  FreeAlgebra fs(s.field, s.generators);
  const std::size_t n = s.generators.size() + forms.size();
  for (std::size_t i = 0; i < forms.size(); ++i) {
    auto d = fs.homogeneous_degree(forms[i]);
    if (!d || d->cohomological != 0) throw InputError("Koszul forms must be homogeneous of cohomological degree 0");
    std::string name = forms.size() == 1 ? "e" : "e" + std::to_string(i + 1);
    p.generators.push_back({name, {d->internal, -1}, Parity::odd});
  }
  for (auto& r : p.relations) r = extend(r, n);
  p.differential.resize(s.generators.size());
  for (auto& d : p.differential) d = extend(d, n);
  for (const auto& form : forms) p.differential.push_back(extend(form, n));
  return p;
}

DgAlgebraPresentation truncation(const DgAlgebraPresentation& a, int d) {
  if (d < 1) throw InputError("truncation degree must be >= 1");
  DgAlgebraPresentation p = a;
  FreeAlgebra fa(a.field, a.generators);
  int maxdeg = 1;
  for (const auto& g : a.generators) maxdeg = std::max(maxdeg, g.bidegree.internal);
  for (int i = d; i < d + maxdeg; ++i)
    for (const auto& [j, mons] : fa.monomials_of_internal_degree(i))
      for (const auto& m : mons) p.relations.push_back({{m, a.field.one()}});
  return p;
}

DgAlgebraPresentation trivial_extension(const DgAlgebraPresentation& b, int a) {
  for (const auto& g : b.generators)
    if (g.bidegree.cohomological != 0) throw InputError("trivial extension needs a cohomological-degree-0 algebra");
  for (const auto& d : b.differential)
    if (!d.empty()) throw InputError("trivial extension needs zero differential");
  Algebra B(b);
  const PrimeField& f = b.field;
  // basis of B by internal degree until it dies out
  std::vector<std::size_t> dims;
  int top = -1;
  const int maxdeg = B.max_generator_internal_degree();
  for (int i = 0, zeros = 0; zeros < maxdeg; ++i) {
    if (i > 512) throw InputError("trivial extension needs a finite-dimensional algebra");
    dims.push_back(B.dim({i, 0}));
    if (dims.back()) {
      top = i;
      zeros = 0;
    } else {
      ++zeros;
    }
  }
  if (a <= top) throw InputError("trivial extension twist must exceed the top degree of B");

  DgAlgebraPresentation p = b;
  // u-generators: dual basis of B_s placed at internal a - s
  std::vector<std::vector<std::size_t>> u_index(top + 1);
  for (int s = 0; s <= top; ++s)
    for (std::size_t k = 0; k < dims[s]; ++k) {
      u_index[s].push_back(p.generators.size());
      p.generators.push_back({"u" + std::to_string(p.generators.size() - b.generators.size() + 1), {a - s, 0}, Parity::even});
    }
  const std::size_t n = p.generators.size();
  for (auto& r : p.relations) r = extend(r, n);
  p.differential.assign(n, {});
  FreeAlgebra fa(f, p.generators);
  auto mono = [&](std::size_t g1, std::size_t g2) {
    Exponents e = fa.unit();
    ++e[g1];
    ++e[g2];
    return e;
  };
  std::vector<std::size_t> us;
  for (const auto& v : u_index) us.insert(us.end(), v.begin(), v.end());
  for (std::size_t x = 0; x < us.size(); ++x)
    for (std::size_t y = x; y < us.size(); ++y) p.relations.push_back({{mono(us[x], us[y]), f.one()}});
  // u_k * x_g = sum_l (coefficient of b_k in x_g * b_l) u_l
  for (int s = 0; s <= top; ++s)
    for (std::size_t k = 0; k < dims[s]; ++k)
      for (std::size_t g = 0; g < b.generators.size(); ++g) {
        const int t = s - b.generators[g].bidegree.internal;
        Polynomial rel{{mono(u_index[s][k], g), f.one()}};
        if (t >= 0) {
          Matrix xm = B.mult_matrix(g, {t, 0});
          for (const auto& [l, c] : xm.row(k)) {
            Exponents e = fa.unit();
            e[u_index[t][l]] = 1;
            rel[e] = f.neg(c);
          }
        }
        p.relations.push_back(rel);
      }
  return p;
}

}  // namespace dgcoh
