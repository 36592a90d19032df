#include "dgcoh/dgmodule.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dgcoh {

// CachedSource --------------------------------------------------------------

std::size_t CachedSource::dim(const Bidegree& b) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = dims_.find(b); it != dims_.end()) return it->second;
  }
  std::size_t d = inner_->dim(b);
  std::lock_guard<std::mutex> lock(mu_);
  dims_.emplace(b, d);
  return d;
}

std::vector<int> CachedSource::support(int internal) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = support_.find(internal); it != support_.end()) return it->second;
  }
  auto s = inner_->support(internal);
  std::lock_guard<std::mutex> lock(mu_);
  support_.emplace(internal, s);
  return s;
}

Matrix CachedSource::diff(const Bidegree& b) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = diff_.find(b); it != diff_.end()) return it->second;
  }
  Matrix m = inner_->diff(b);
  std::lock_guard<std::mutex> lock(mu_);
  diff_.emplace(b, m);
  return m;
}

Matrix CachedSource::act(std::size_t g, const Bidegree& b) const {
  auto key = std::make_pair(g, b);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = act_.find(key); it != act_.end()) return it->second;
  }
  Matrix m = inner_->act(g, b);
  std::lock_guard<std::mutex> lock(mu_);
  act_.emplace(key, m);
  return m;
}

// WindowedComplex -----------------------------------------------------------

WindowedComplex::WindowedComplex(std::shared_ptr<const Algebra> algebra, std::shared_ptr<const ModuleSource> source,
                                 Window window, std::optional<int> known_lo, std::optional<int> known_hi,
                                 std::string label)
    : algebra_(std::move(algebra)),
      source_(std::make_shared<CachedSource>(std::move(source))),
      window_(window),
      known_lo_(known_lo),
      known_hi_(known_hi),
      label_(std::move(label)) {}

bool WindowedComplex::known_zero(int internal) const {
  return (known_lo_ && internal < *known_lo_) || (known_hi_ && internal > *known_hi_);
}

bool WindowedComplex::available(int internal) const {
  return known_zero(internal) || (internal >= window_.i_min && internal <= window_.i_max);
}

void WindowedComplex::require(int internal) const {
  if (!available(internal))
    throw OutOfWindow("internal degree " + std::to_string(internal) + " of " + (label_.empty() ? "module" : label_) +
                      " is outside the window " + window_.str());
}

std::size_t WindowedComplex::dim(const Bidegree& b) const {
  require(b.internal);
  if (known_zero(b.internal)) return 0;
  return source_->dim(b);
}

std::vector<int> WindowedComplex::support(int internal) const {
  require(internal);
  if (known_zero(internal)) return {};
  return source_->support(internal);
}

Matrix WindowedComplex::diff(const Bidegree& b) const {
  const Bidegree t = b + Bidegree{0, 1};
  std::size_t r = dim(t), c = dim(b);
  if (!r || !c) return Matrix(r, c);
  return source_->diff(b);
}

Matrix WindowedComplex::act(std::size_t g, const Bidegree& b) const {
  const Bidegree t = b + algebra_->generator(g).bidegree;
  std::size_t r = dim(t), c = dim(b);
  if (!r || !c) return Matrix(r, c);
  return source_->act(g, b);
}

Matrix WindowedComplex::act_monomial(const Exponents& m, const Bidegree& b) const {
  const PrimeField& f = field();
  Matrix cur = identity_matrix(f, dim(b));
  Bidegree at = b;
  for (std::size_t g = 0; g < m.size(); ++g)
    for (int e = 0; e < m[g]; ++e) {
      cur = multiply(f, act(g, at), cur);
      at = at + algebra_->generator(g).bidegree;
    }
  return cur;
}

Matrix WindowedComplex::act_element(const Bidegree& bc, const Vec& c, const Bidegree& b) const {
  const PrimeField& f = field();
  auto basis = algebra_->basis(bc);
  MatrixBuilder<PrimeField> out(f, dim(b + bc), dim(b));
  for (const auto& [k, v] : c) out.add_block(0, 0, act_monomial(basis->monomial(k), b), v);
  return out.build();
}

WindowedComplex WindowedComplex::with_window(const Window& w) const {
  WindowedComplex out = *this;
  out.window_ = w;
  return out;
}

WindowedComplex WindowedComplex::with_label(std::string label) const {
  WindowedComplex out = *this;
  out.label_ = std::move(label);
  return out;
}

namespace {

Matrix unit_section(const PrimeField& f, std::size_t n, const Matrix& proj) {
  // columns of proj that are unit vectors give a section of the projection
  MatrixBuilder<PrimeField> sec(f, proj.cols(), n);
  std::vector<int> hits(proj.cols(), 0);
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& e : proj.row(r)) ++hits[e.first];
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& [c, x] : proj.row(r))
      if (x == f.one() && hits[c] == 1) {
        sec.add(c, r, f.one());
        break;
      }
  return sec.build();
}

Matrix basis_matrix(const PrimeField& f, std::size_t ambient, const std::vector<Vec>& basis) {
  MatrixBuilder<PrimeField> m(f, ambient, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (const auto& [r, x] : basis[k]) m.add(r, k, x);
  return m.build();
}

/// Expresses the columns of `a` in the basis `z` (columns of zm).
Matrix coordinates(const PrimeField& f, const Matrix& zm, const Matrix& a, const Bidegree& where) {
  Solver<PrimeField> solver(f, zm);
  auto cols = a.transpose();
  MatrixBuilder<PrimeField> out(f, zm.cols(), a.cols());
  for (std::size_t c = 0; c < cols.rows(); ++c) {
    auto x = solver.solve(cols.row(c));
    if (!x) throw EngineError("smart truncation is not stable under the action at " + to_string(where));
    for (const auto& [r, v] : *x) out.add(r, c, v);
  }
  return out.build();
}

// Presented modules ---------------------------------------------------------

class PresentedSource : public ModuleSource {
 public:
  explicit PresentedSource(const PresentedDgModule& m) : m_(m), a_(*m.algebra) {
    for (const auto& dg : m_.differential) {
      std::vector<std::pair<std::size_t, std::pair<Bidegree, Vec>>> terms;
      for (const auto& [s, poly] : dg) {
        auto d = a_.free().homogeneous_degree(poly);
        if (!d) continue;
        terms.push_back({s, {*d, a_.normal_form(poly, *d)}});
      }
      diff_coeffs_.push_back(std::move(terms));
    }
  }

  struct Quotient {
    std::vector<std::size_t> offsets;  // per generator, into free coordinates
    std::size_t free_dim = 0;
    std::size_t dim = 0;
    Matrix proj;     // free -> quotient
    Matrix section;  // quotient -> free
  };

  std::shared_ptr<const Quotient> quotient(const Bidegree& b) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = quot_.find(b); it != quot_.end()) return it->second;
    }
    const PrimeField& f = a_.field();
    auto q = std::make_shared<Quotient>();
    for (const auto& g : m_.generators) {
      q->offsets.push_back(q->free_dim);
      Bidegree ab = b - g.bidegree;
      if (ab.internal >= 0) q->free_dim += a_.dim(ab);
    }
    // relation span: r * a for every relation r and basis element a
    std::vector<Vec> rel_vecs;
    for (const auto& r : m_.relations) {
      auto rb = m_.homogeneous_degree(r);
      if (!rb) continue;
      Bidegree ab = b - *rb;
      if (ab.internal < 0) continue;
      const std::size_t n = a_.dim(ab);
      for (std::size_t k = 0; k < n; ++k) {
        Vec ek{{static_cast<std::uint32_t>(k), f.one()}};
        Vec v;
        for (const auto& [t, poly] : r) {
          Bidegree cb = *rb - m_.generators[t].bidegree;
          Vec prod = a_.multiply(cb, a_.normal_form(poly, cb), ab, ek);
          for (const auto& [c, x] : prod) v.emplace_back(static_cast<std::uint32_t>(q->offsets[t] + c), x);
        }
        std::sort(v.begin(), v.end());
        rel_vecs.push_back(std::move(v));
      }
    }
    MatrixBuilder<PrimeField> relm(f, q->free_dim, rel_vecs.size());
    for (std::size_t c = 0; c < rel_vecs.size(); ++c)
      for (const auto& [r, x] : rel_vecs[c]) relm.add(r, c, x);
    auto [n, proj] = cokernel_basis(f, relm.build());
    q->dim = n;
    q->proj = std::move(proj);
    q->section = unit_section(f, n, q->proj);
    std::lock_guard<std::mutex> lock(mu_);
    quot_.emplace(b, q);
    return q;
  }

  Matrix free_diff(const Bidegree& b, const Quotient& src, const Quotient& tgt) const {
    const PrimeField& f = a_.field();
    MatrixBuilder<PrimeField> out(f, tgt.free_dim, src.free_dim);
    for (std::size_t t = 0; t < m_.generators.size(); ++t) {
      Bidegree ab = b - m_.generators[t].bidegree;
      if (ab.internal < 0) continue;
      const std::size_t n = a_.dim(ab);
      if (!n) continue;
      // (-1)^{q_t} g_t * d(a)
      out.add_block(tgt.offsets[t], src.offsets[t], a_.diff_matrix(ab), f.sign(m_.generators[t].bidegree.cohomological));
      // d(g_t) * a = sum_s g_s * (c_st a)
      for (const auto& [s, cb] : diff_coeffs_[t]) {
        const auto& [cdeg, cvec] = cb;
        for (std::size_t k = 0; k < n; ++k) {
          Vec prod = a_.multiply(cdeg, cvec, ab, {{static_cast<std::uint32_t>(k), f.one()}});
          for (const auto& [r, x] : prod) out.add(tgt.offsets[s] + r, src.offsets[t] + k, x);
        }
      }
    }
    return out.build();
  }

  Matrix free_act(std::size_t g, const Bidegree& b, const Quotient& src, const Quotient& tgt) const {
    MatrixBuilder<PrimeField> out(a_.field(), tgt.free_dim, src.free_dim);
    for (std::size_t t = 0; t < m_.generators.size(); ++t) {
      Bidegree ab = b - m_.generators[t].bidegree;
      if (ab.internal < 0 || !a_.dim(ab)) continue;
      out.add_block(tgt.offsets[t], src.offsets[t], a_.right_mult_matrix(g, ab), a_.field().one());
    }
    return out.build();
  }

  std::size_t dim(const Bidegree& b) const override { return quotient(b)->dim; }

  std::vector<int> support(int internal) const override {
    std::set<int> js;
    for (const auto& g : m_.generators)
      for (int j : a_.support_column(internal - g.bidegree.internal)) js.insert(j + g.bidegree.cohomological);
    std::vector<int> out;
    for (int j : js)
      if (dim({internal, j})) out.push_back(j);
    return out;
  }

  Matrix diff(const Bidegree& b) const override {
    const PrimeField& f = a_.field();
    auto src = quotient(b);
    auto tgt = quotient(b + Bidegree{0, 1});
    return multiply(f, tgt->proj, multiply(f, free_diff(b, *src, *tgt), src->section));
  }

  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& f = a_.field();
    auto src = quotient(b);
    auto tgt = quotient(b + a_.generator(g).bidegree);
    return multiply(f, tgt->proj, multiply(f, free_act(g, b, *src, *tgt), src->section));
  }

  /// Relations must be d-stable: d_F(relation span) maps to zero in the quotient.
  bool relations_stable(const Bidegree& b) const {
    const PrimeField& f = a_.field();
    auto src = quotient(b);
    auto tgt = quotient(b + Bidegree{0, 1});
    Matrix dfree = free_diff(b, *src, *tgt);
    // kernel of the projection at b = relation span; check proj_t * d * (ker proj_b) = 0
    auto ker = kernel(f, src->proj);
    for (const auto& v : ker.basis)
      if (!apply(f, tgt->proj, apply(f, dfree, v)).empty()) return false;
    return true;
  }

 private:
  PresentedDgModule m_;
  const Algebra& a_;
  std::vector<std::vector<std::pair<std::size_t, std::pair<Bidegree, Vec>>>> diff_coeffs_;
  mutable std::mutex mu_;
  mutable std::map<Bidegree, std::shared_ptr<const Quotient>> quot_;
};

class AlgebraSource : public ModuleSource {
 public:
  explicit AlgebraSource(std::shared_ptr<const Algebra> a) : a_(std::move(a)) {}
  std::size_t dim(const Bidegree& b) const override { return b.internal < 0 ? 0 : a_->dim(b); }
  std::vector<int> support(int internal) const override {
    return internal < 0 ? std::vector<int>{} : a_->support_column(internal);
  }
  Matrix diff(const Bidegree& b) const override { return a_->diff_matrix(b); }
  Matrix act(std::size_t g, const Bidegree& b) const override { return a_->right_mult_matrix(g, b); }

 private:
  std::shared_ptr<const Algebra> a_;
};

class ShiftSource : public ModuleSource {
 public:
  ShiftSource(std::shared_ptr<const ModuleSource> in, ShiftSpec s, PrimeField f) : in_(std::move(in)), s_(s), f_(f) {}
  std::size_t dim(const Bidegree& b) const override { return in_->dim(apply_shift(b, s_)); }
  std::vector<int> support(int internal) const override {
    auto js = in_->support(internal + s_.twist);
    for (int& j : js) j -= s_.shift;
    return js;
  }
  Matrix diff(const Bidegree& b) const override {
    Matrix m = in_->diff(apply_shift(b, s_));
    if (!(s_.shift & 1)) return m;
    MatrixBuilder<PrimeField> out(f_, m.rows(), m.cols());
    out.add_block(0, 0, m, f_.neg(f_.one()));
    return out.build();
  }
  Matrix act(std::size_t g, const Bidegree& b) const override { return in_->act(g, apply_shift(b, s_)); }

 private:
  std::shared_ptr<const ModuleSource> in_;
  ShiftSpec s_;
  PrimeField f_;
};

/// Keeps internal degrees in [lo, hi] (either side optional): a submodule
/// (lo only) or quotient (hi only) of the input.
class TruncSource : public ModuleSource {
 public:
  TruncSource(std::shared_ptr<const ModuleSource> in, std::shared_ptr<const Algebra> a, std::optional<int> lo,
              std::optional<int> hi)
      : in_(std::move(in)), a_(std::move(a)), lo_(lo), hi_(hi) {}
  bool keep(int i) const { return (!lo_ || i >= *lo_) && (!hi_ || i <= *hi_); }
  std::size_t dim(const Bidegree& b) const override { return keep(b.internal) ? in_->dim(b) : 0; }
  std::vector<int> support(int internal) const override {
    return keep(internal) ? in_->support(internal) : std::vector<int>{};
  }
  Matrix diff(const Bidegree& b) const override {
    if (!keep(b.internal)) return Matrix(0, 0);
    return in_->diff(b);
  }
  Matrix act(std::size_t g, const Bidegree& b) const override {
    Bidegree t = b + a_->generator(g).bidegree;
    if (!keep(b.internal) || !keep(t.internal)) return Matrix(dim(t), dim(b));
    return in_->act(g, b);
  }

 private:
  std::shared_ptr<const ModuleSource> in_;
  std::shared_ptr<const Algebra> a_;
  std::optional<int> lo_, hi_;
};

class DualSource : public ModuleSource {
 public:
  DualSource(std::shared_ptr<const ModuleSource> in, std::shared_ptr<const Algebra> a) : in_(std::move(in)), a_(std::move(a)) {}
  std::size_t dim(const Bidegree& b) const override { return in_->dim(dual_bidegree(b)); }
  std::vector<int> support(int internal) const override {
    auto js = in_->support(-internal);
    for (int& j : js) j = -j;
    std::reverse(js.begin(), js.end());
    return js;
  }
  // (d alpha)(m) = -(-1)^{|alpha|} alpha(d m)
  Matrix diff(const Bidegree& b) const override {
    const PrimeField& f = a_->field();
    Matrix m = in_->diff({-b.internal, -b.cohomological - 1}).transpose();
    MatrixBuilder<PrimeField> out(f, m.rows(), m.cols());
    out.add_block(0, 0, m, f.neg(f.sign(b.cohomological)));
    return out.build();
  }
  // (alpha . x)(m) = (-1)^{|x|(|alpha|+1)} alpha(m . x), the sign for which Leibniz holds
  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& f = a_->field();
    const Bidegree c = a_->generator(g).bidegree;
    Bidegree src = dual_bidegree(b + c);
    Matrix m = in_->act(g, src).transpose();
    MatrixBuilder<PrimeField> out(f, m.rows(), m.cols());
    out.add_block(0, 0, m, f.sign(c.cohomological * (b.cohomological + 1)));
    return out.build();
  }

 private:
  std::shared_ptr<const ModuleSource> in_;
  std::shared_ptr<const Algebra> a_;
};

class ConeSource : public ModuleSource {
 public:
  ConeSource(WindowedComplex m, WindowedComplex n, ChainMapFn f) : m_(std::move(m)), n_(std::move(n)), f_(std::move(f)) {}
  std::size_t dim(const Bidegree& b) const override { return m_.dim(b + Bidegree{0, 1}) + n_.dim(b); }
  std::vector<int> support(int internal) const override {
    std::set<int> js;
    for (int j : m_.support(internal)) js.insert(j - 1);
    for (int j : n_.support(internal)) js.insert(j);
    return {js.begin(), js.end()};
  }
  Matrix diff(const Bidegree& b) const override {
    const PrimeField& fld = m_.field();
    const Bidegree b1 = b + Bidegree{0, 1}, b2 = b + Bidegree{0, 2};
    const std::size_t ms = m_.dim(b1), mt = m_.dim(b2);
    MatrixBuilder<PrimeField> out(fld, mt + n_.dim(b1), ms + n_.dim(b));
    out.add_block(0, 0, m_.diff(b1), fld.neg(fld.one()));
    out.add_block(mt, 0, f_(b1), fld.one());
    out.add_block(mt, ms, n_.diff(b), fld.one());
    return out.build();
  }
  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& fld = m_.field();
    const Bidegree c = m_.algebra()->generator(g).bidegree;
    const Bidegree b1 = b + Bidegree{0, 1};
    MatrixBuilder<PrimeField> out(fld, m_.dim(b1 + c) + n_.dim(b + c), m_.dim(b1) + n_.dim(b));
    out.add_block(0, 0, m_.act(g, b1), fld.one());
    out.add_block(m_.dim(b1 + c), m_.dim(b1), n_.act(g, b), fld.one());
    return out.build();
  }

 private:
  WindowedComplex m_, n_;
  ChainMapFn f_;
};

/// sigma^{<=n}: M^j below n, Z^n in degree n (a subcomplex).
class SmartLeSource : public ModuleSource {
 public:
  SmartLeSource(WindowedComplex m, int n) : m_(std::move(m)), n_(n) {}
  Matrix cycles(int i) const {
    const Bidegree b{i, n_};
    return basis_matrix(m_.field(), m_.dim(b), kernel(m_.field(), m_.diff(b)).basis);
  }
  std::size_t dim(const Bidegree& b) const override {
    if (b.cohomological > n_) return 0;
    if (b.cohomological == n_) return cycles(b.internal).cols();
    return m_.dim(b);
  }
  std::vector<int> support(int internal) const override {
    std::vector<int> out;
    for (int j : m_.support(internal))
      if (dim({internal, j})) out.push_back(j);
    return out;
  }
  Matrix diff(const Bidegree& b) const override {
    if (b.cohomological >= n_) return Matrix(dim(b + Bidegree{0, 1}), dim(b));
    Matrix d = m_.diff(b);
    if (b.cohomological + 1 == n_) return coordinates(m_.field(), cycles(b.internal), d, b);
    return d;
  }
  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& f = m_.field();
    const Bidegree t = b + m_.algebra()->generator(g).bidegree;
    if (b.cohomological > n_ || t.cohomological > n_) return Matrix(dim(t), dim(b));
    Matrix a = m_.act(g, b);
    if (b.cohomological == n_) a = multiply(f, a, cycles(b.internal));
    if (t.cohomological == n_) a = coordinates(f, cycles(t.internal), a, b);
    return a;
  }

 private:
  WindowedComplex m_;
  int n_;
};

/// sigma^{>=n}: M^n / B^n in degree n, M^j above (a quotient complex).
class SmartGeSource : public ModuleSource {
 public:
  SmartGeSource(WindowedComplex m, int n) : m_(std::move(m)), n_(n) {}
  std::pair<std::size_t, Matrix> quot(int i) const { return cokernel_basis(m_.field(), m_.diff({i, n_ - 1})); }
  std::size_t dim(const Bidegree& b) const override {
    if (b.cohomological < n_) return 0;
    if (b.cohomological == n_) return quot(b.internal).first;
    return m_.dim(b);
  }
  std::vector<int> support(int internal) const override {
    std::vector<int> out;
    for (int j : m_.support(internal))
      if (dim({internal, j})) out.push_back(j);
    return out;
  }
  Matrix diff(const Bidegree& b) const override {
    if (b.cohomological < n_) return Matrix(dim(b + Bidegree{0, 1}), dim(b));
    Matrix d = m_.diff(b);
    if (b.cohomological == n_) {
      auto [qd, p] = quot(b.internal);
      return multiply(m_.field(), d, unit_section(m_.field(), qd, p));
    }
    return d;
  }
  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& f = m_.field();
    const Bidegree t = b + m_.algebra()->generator(g).bidegree;
    if (b.cohomological < n_ || t.cohomological < n_) return Matrix(dim(t), dim(b));
    Matrix a = m_.act(g, b);
    if (t.cohomological == n_) a = multiply(f, quot(t.internal).second, a);
    if (b.cohomological == n_) {
      auto [qd, p] = quot(b.internal);
      for (const auto& v : image(f, m_.diff({b.internal, n_ - 1})).basis)
        if (!apply(f, a, v).empty()) throw EngineError("smart truncation is not stable under the action at " + to_string(b));
      a = multiply(f, a, unit_section(f, qd, p));
    }
    return a;
  }

 private:
  WindowedComplex m_;
  int n_;
};

}  // namespace

// PresentedDgModule ---------------------------------------------------------

std::optional<std::size_t> PresentedDgModule::find_generator(const std::string& name) const {
  for (std::size_t g = 0; g < generators.size(); ++g)
    if (generators[g].name == name) return g;
  return std::nullopt;
}

std::optional<Bidegree> PresentedDgModule::homogeneous_degree(const ModElement& e) const {
  std::optional<Bidegree> d;
  for (const auto& [t, poly] : e) {
    if (poly.empty()) continue;
    auto pd = algebra->free().homogeneous_degree(poly);
    if (!pd) return std::nullopt;
    Bidegree b = generators.at(t).bidegree + *pd;
    if (d && *d != b) return std::nullopt;
    d = b;
  }
  return d;
}

std::string PresentedDgModule::format(const ModElement& e) const {
  std::string s;
  for (const auto& [t, poly] : e) {
    if (poly.empty()) continue;
    if (!s.empty()) s += " + ";
    std::string p = algebra->free().format(poly);
    if (p == "1")
      s += generators[t].name;
    else
      s += generators[t].name + "*(" + p + ")";
  }
  return s.empty() ? "0" : s;
}

std::string PresentedDgModule::to_text() const {
  std::ostringstream os;
  for (const auto& g : generators)
    os << "modgen " << g.name << " internal=" << g.bidegree.internal << " cohom=" << g.bidegree.cohomological << '\n';
  for (std::size_t t = 0; t < generators.size() && t < differential.size(); ++t)
    if (!differential[t].empty()) os << "moddiff " << generators[t].name << " = " << format(differential[t]) << '\n';
  for (const auto& r : relations) os << "modrel " << format(r) << '\n';
  return os.str();
}

WindowedComplex compile(const PresentedDgModule& m, const Window& w) {
  if (!m.algebra) throw InputError("module without algebra");
  PresentedDgModule pm = m;
  pm.differential.resize(pm.generators.size());
  for (std::size_t t = 0; t < pm.generators.size(); ++t) {
    const auto& g = pm.generators[t];
    if (g.parity != parity_of(g.bidegree.cohomological))
      throw InputError("module generator " + g.name + ": parity must equal cohomological degree mod 2");
    bool empty = true;
    for (const auto& [s, p] : pm.differential[t]) empty = empty && p.empty();
    if (empty) continue;
    auto d = pm.homogeneous_degree(pm.differential[t]);
    if (!d) throw InputError("non-homogeneous differential of module generator " + g.name);
    if (*d != g.bidegree + Bidegree{0, 1})
      throw InputError("differential of module generator " + g.name + " has bidegree " + to_string(*d) +
                       ", expected " + to_string(g.bidegree + Bidegree{0, 1}));
  }
  for (const auto& r : pm.relations)
    if (!pm.homogeneous_degree(r)) throw InputError("non-homogeneous module relation " + pm.format(r));

  auto src = std::make_shared<PresentedSource>(pm);
  std::optional<int> lo, hi;
  for (const auto& g : pm.generators) lo = lo ? std::min(*lo, g.bidegree.internal) : g.bidegree.internal;
  if (!lo) {
    lo = 0;
    hi = -1;
  } else if (auto top = algebra_top_degree(*pm.algebra)) {
    int mx = *lo;
    for (const auto& g : pm.generators) mx = std::max(mx, g.bidegree.internal);
    hi = mx + *top;
  }
  WindowedComplex out(pm.algebra, src, w, lo, hi, "module");
  // d^2 = 0 and stability of the relations on the window
  const PrimeField& f = pm.algebra->field();
  for (int i = w.i_min; i <= w.i_max; ++i) {
    if (out.known_zero(i)) continue;
    for (int j : out.support(i)) {
      Bidegree b{i, j};
      if (!multiply(f, out.diff(b + Bidegree{0, 1}), out.diff(b)).is_zero())
        throw InputError("module differential does not square to zero at " + to_string(b));
      if (!src->relations_stable(b)) throw InputError("module relations are not stable under d at " + to_string(b));
    }
  }
  return out;
}

WindowedComplex compile_unchecked(const PresentedDgModule& m, const Window& w, std::optional<int> known_lo,
                                  std::optional<int> known_hi) {
  PresentedDgModule pm = m;
  pm.differential.resize(pm.generators.size());
  return WindowedComplex(pm.algebra, std::make_shared<PresentedSource>(pm), w, known_lo, known_hi, "F");
}

ValidationReport check_module(const WindowedComplex& m) {
  ValidationReport rep;
  const PrimeField& f = m.field();
  const Algebra& a = *m.algebra();
  const Window& w = m.window();
  for (int i = w.i_min; i <= w.i_max; ++i) {
    for (int j : m.support(i)) {
      Bidegree b{i, j};
      const Bidegree b1 = b + Bidegree{0, 1};
      if (!multiply(f, m.diff(b1), m.diff(b)).is_zero()) rep.violations.push_back({"d^2 != 0", b, m.label()});
      for (std::size_t g = 0; g < a.num_generators(); ++g) {
        const Bidegree c = a.generator(g).bidegree;
        if (!m.available(i + c.internal)) continue;
        // d(m x) = d(m) x + (-1)^{|m|} m dx
        Matrix lhs = multiply(f, m.diff(b + c), m.act(g, b));
        Bidegree dc = c + Bidegree{0, 1};
        Vec dx = a.normal_form(a.presentation().differential[g], dc);
        Matrix rhs = add(f, multiply(f, m.act(g, b1), m.diff(b)), m.act_element(dc, dx, b), f.sign(j));
        if (!(lhs == rhs)) rep.violations.push_back({"Leibniz rule fails for action", b, a.generator(g).name});
        for (std::size_t h = g; h < a.num_generators(); ++h) {
          const Bidegree e = a.generator(h).bidegree;
          if (!m.available(i + c.internal + e.internal)) continue;
          Matrix xy = multiply(f, m.act(h, b + c), m.act(g, b));
          Matrix yx = multiply(f, m.act(g, b + e), m.act(h, b));
          if (!(xy == add(f, Matrix(xy.rows(), xy.cols()), yx, f.sign(c.cohomological * e.cohomological))))
            rep.violations.push_back({"action is not graded-commutative", b,
                                      a.generator(g).name + "," + a.generator(h).name});
        }
      }
    }
  }
  return rep;
}

// Cohomology ----------------------------------------------------------------

CohomologyTable cohomology(const WindowedComplex& m) { return cohomology(m, m.window()); }

CohomologyTable cohomology(const WindowedComplex& m, const Window& w) {
  const PrimeField& f = m.field();
  CohomologyTable out{DimTable(w)};
  for (int i = w.i_min; i <= w.i_max; ++i) {
    if (m.known_zero(i)) continue;
    auto js = m.support(i);
    std::map<int, std::size_t> ranks;  // rank of d leaving (i, j)
    auto d_rank = [&](int j) {
      auto it = ranks.find(j);
      if (it == ranks.end()) it = ranks.emplace(j, rank(f, m.diff({i, j}))).first;
      return it->second;
    };
    for (int j : js) {
      if (j < w.j_min || j > w.j_max) continue;
      const std::size_t d = m.dim({i, j});
      out.table.set({i, j}, static_cast<int>(d - d_rank(j) - d_rank(j - 1)));
    }
  }
  return out;
}

std::vector<Vec> cohomology_representatives(const WindowedComplex& m, const Bidegree& b) {
  const PrimeField& f = m.field();
  auto z = kernel(f, m.diff(b));
  auto bd = image(f, m.diff(b - Bidegree{0, 1}));
  Echelon<PrimeField> ech(f, m.dim(b));
  for (const auto& v : bd.basis) ech.insert(v);
  std::vector<Vec> reps;
  for (const auto& v : z.basis)
    if (ech.insert(v)) reps.push_back(v);
  return reps;
}

// Functors ------------------------------------------------------------------

WindowedComplex shift_twist(const WindowedComplex& m, const ShiftSpec& s) {
  auto src = std::make_shared<ShiftSource>(m.source(), s, m.field());
  auto sh = [&](std::optional<int> v) -> std::optional<int> {
    if (!v) return v;
    return *v - s.twist;
  };
  return WindowedComplex(m.algebra(), src, m.window().shifted(s), sh(m.known_lo()), sh(m.known_hi()),
                         m.label() + "(" + std::to_string(s.twist) + ")[" + std::to_string(s.shift) + "]");
}

WindowedComplex truncate_ge(const WindowedComplex& m, int d) {
  auto src = std::make_shared<TruncSource>(m.source(), m.algebra(), d, std::nullopt);
  std::optional<int> lo = m.known_lo() ? std::max(*m.known_lo(), d) : d;
  return WindowedComplex(m.algebra(), src, m.window(), lo, m.known_hi(), m.label() + ">=" + std::to_string(d));
}

WindowedComplex truncate_lt(const WindowedComplex& m, int d) {
  auto src = std::make_shared<TruncSource>(m.source(), m.algebra(), std::nullopt, d - 1);
  std::optional<int> hi = m.known_hi() ? std::min(*m.known_hi(), d - 1) : d - 1;
  return WindowedComplex(m.algebra(), src, m.window(), m.known_lo(), hi, m.label() + "<" + std::to_string(d));
}

WindowedComplex k_dual(const WindowedComplex& m) {
  auto src = std::make_shared<DualSource>(m.source(), m.algebra());
  const Window& w = m.window();
  auto neg = [](std::optional<int> v) -> std::optional<int> {
    if (!v) return v;
    return -*v;
  };
  return WindowedComplex(m.algebra(), src, Window(-w.i_max, -w.i_min, -w.j_max, -w.j_min), neg(m.known_hi()),
                         neg(m.known_lo()), m.label() + "*");
}

WindowedComplex smart_truncate_ge(const WindowedComplex& m, int n) {
  return WindowedComplex(m.algebra(), std::make_shared<SmartGeSource>(m, n), m.window(), m.known_lo(), m.known_hi(),
                         m.label() + " sigma>=" + std::to_string(n));
}

WindowedComplex smart_truncate_le(const WindowedComplex& m, int n) {
  return WindowedComplex(m.algebra(), std::make_shared<SmartLeSource>(m, n), m.window(), m.known_lo(), m.known_hi(),
                         m.label() + " sigma<=" + std::to_string(n));
}

WindowedComplex cone(const WindowedComplex& m, const WindowedComplex& n, ChainMapFn f) {
  auto w = m.window().intersect(n.window());
  if (!w) throw WindowTooSmall("cone of complexes with disjoint windows");
  std::optional<int> lo, hi;
  if (m.known_lo() && n.known_lo()) lo = std::min(*m.known_lo(), *n.known_lo());
  if (m.known_hi() && n.known_hi()) hi = std::max(*m.known_hi(), *n.known_hi());
  return WindowedComplex(m.algebra(), std::make_shared<ConeSource>(m, n, std::move(f)), *w, lo, hi,
                         "cone(" + m.label() + "->" + n.label() + ")");
}

std::optional<int> algebra_top_degree(const Algebra& a, int limit) {
  const int maxdeg = a.max_generator_internal_degree();
  int top = 0, zeros = 0;
  for (int i = 1; i <= limit; ++i) {
    if (a.support_column(i).empty()) {
      if (++zeros >= maxdeg) return top;
    } else {
      top = i;
      zeros = 0;
    }
  }
  return std::nullopt;
}

WindowedComplex free_module(std::shared_ptr<const Algebra> a, const Window& w) {
  auto top = algebra_top_degree(*a);
  return WindowedComplex(a, std::make_shared<AlgebraSource>(a), w, 0, top, "A");
}

WindowedComplex residue_field(std::shared_ptr<const Algebra> a, const Window& w) {
  return truncate_lt(free_module(std::move(a), w), 1).with_label("k");
}

WindowedComplex standard_object(std::shared_ptr<const Algebra> a, StandardKind kind, int d, const Window& w) {
  switch (kind) {
    case StandardKind::residue_field:
      return residue_field(a, w);
    case StandardKind::free:
      return free_module(a, w);
    case StandardKind::truncated:
      return truncate_ge(free_module(a, w), d).with_label("A>=" + std::to_string(d));
    case StandardKind::quotient:
      return truncate_lt(free_module(a, w), d).with_label("A<" + std::to_string(d));
  }
  throw InputError("unknown standard object");
}

}  // namespace dgcoh
