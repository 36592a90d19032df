#include "dgcoh/homology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dgcoh {

namespace {

class HomSource : public ModuleSource {
 public:
  HomSource(std::shared_ptr<const ResolutionData> r, WindowedComplex n) : r_(std::move(r)), n_(std::move(n)) {}

  std::vector<std::size_t> offsets(const Bidegree& b, std::size_t* total) const {
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (const auto& g : r_->generators) {
      off.push_back(acc);
      acc += n_.dim(g.bidegree + b);
    }
    *total = acc;
    return off;
  }

  std::size_t dim(const Bidegree& b) const override {
    std::size_t total = 0;
    offsets(b, &total);
    return total;
  }

  std::vector<int> support(int internal) const override {
    std::set<int> js;
    for (const auto& g : r_->generators) {
      const int p = g.bidegree.internal + internal;
      if (n_.known_zero(p)) continue;
      for (int j : n_.support(p)) js.insert(j - g.bidegree.cohomological);
    }
    return {js.begin(), js.end()};
  }

  Matrix diff(const Bidegree& b) const override {
    const PrimeField& f = n_.field();
    const Bidegree b1 = b + Bidegree{0, 1};
    std::size_t rows = 0, cols = 0;
    auto out_off = offsets(b1, &rows), in_off = offsets(b, &cols);
    MatrixBuilder<PrimeField> m(f, rows, cols);
    const auto& gens = r_->generators;
    const Scalar s = f.neg(f.sign(b.cohomological));
    for (std::size_t t = 0; t < gens.size(); ++t) {
      m.add_block(out_off[t], in_off[t], n_.diff(gens[t].bidegree + b), f.one());
      for (const auto& [src, c] : r_->diff[t]) {
        const Bidegree cb = gens[t].bidegree + Bidegree{0, 1} - gens[src].bidegree;
        m.add_block(out_off[t], in_off[src], n_.act_element(cb, c, gens[src].bidegree + b), s);
      }
    }
    return m.build();
  }

  Matrix act(std::size_t g, const Bidegree& b) const override {
    const PrimeField& f = n_.field();
    const Bidegree e = n_.algebra()->generator(g).bidegree;
    std::size_t rows = 0, cols = 0;
    auto out_off = offsets(b + e, &rows), in_off = offsets(b, &cols);
    MatrixBuilder<PrimeField> m(f, rows, cols);
    const auto& gens = r_->generators;
    for (std::size_t t = 0; t < gens.size(); ++t)
      m.add_block(out_off[t], in_off[t], n_.act(g, gens[t].bidegree + b),
                  f.sign(e.cohomological * gens[t].bidegree.cohomological));
    return m.build();
  }

 private:
  std::shared_ptr<const ResolutionData> r_;
  WindowedComplex n_;
};

std::optional<int> opt_sub(std::optional<int> a, int b) {
  if (!a) return a;
  return *a - b;
}

}  // namespace

WindowedComplex hom_complex(std::shared_ptr<const ResolutionData> r, const WindowedComplex& n, const Window& w) {
  const int top = r->top_generator_degree().value_or(r->start);
  Window nw(std::min(r->start + w.i_min, n.window().i_min), std::max(top + w.i_max, n.window().i_max),
            n.window().j_min, n.window().j_max);
  std::optional<int> hi = r->bounded_below ? opt_sub(n.known_hi(), r->start) : std::nullopt;
  std::string label = "Hom(" + r->target.label() + "," + n.label() + ")";
  return WindowedComplex(n.algebra(), std::make_shared<HomSource>(r, n.with_window(nw)), w, std::nullopt, hi, label);
}

Matrix precompose(const ResolutionData& from, const ResolutionData& to, const ChainMapLift& psi,
                  const WindowedComplex& n_in, const Bidegree& b) {
  const PrimeField& f = n_in.field();
  const int lo = std::min(from.start, to.start), hi = std::max(from.depth, to.depth);
  const WindowedComplex n = n_in.with_window(Window(lo + b.internal, hi + b.internal, n_in.window().j_min,
                                                    n_in.window().j_max));
  std::vector<std::size_t> out_off, in_off;
  std::size_t rows = 0, cols = 0;
  for (const auto& g : from.generators) {
    out_off.push_back(rows);
    rows += n.dim(g.bidegree + b);
  }
  for (const auto& g : to.generators) {
    in_off.push_back(cols);
    cols += n.dim(g.bidegree + b);
  }
  MatrixBuilder<PrimeField> m(f, rows, cols);
  for (std::size_t t = 0; t < from.generators.size(); ++t)
    for (const auto& [s, c] : psi.psi[t]) {
      const Bidegree cb = from.generators[t].bidegree - to.generators[s].bidegree;
      m.add_block(out_off[t], in_off[s], n.act_element(cb, c, to.generators[s].bidegree + b), f.one());
    }
  return m.build();
}

bool ext_certified(const ResolutionData& r, const WindowedComplex& n_in, const Bidegree& b, int band) {
  if (!r.bounded_below) return false;
  const WindowedComplex n = n_in.with_window(Window(r.depth - band + 1 + b.internal, r.depth + b.internal,
                                                    n_in.window().j_min, n_in.window().j_max));
  // every missing generator sits at internal degree > depth
  if (n.known_hi() && r.depth + 1 + b.internal > *n.known_hi()) return true;
  for (const auto& g : r.generators) {
    if (g.bidegree.internal <= r.depth - band) continue;
    const int p = g.bidegree.internal + b.internal;
    if (n.known_zero(p)) continue;
    for (int dj = -1; dj <= 1; ++dj)
      if (n.dim({p, g.bidegree.cohomological + b.cohomological + dj})) return false;
  }
  return true;
}

std::size_t induced_rank(const PrimeField& f, const Matrix& map_b, const Matrix& dx_out, const Matrix& dy_in) {
  auto z = kernel(f, dx_out);
  if (z.basis.empty()) return 0;
  Echelon<PrimeField> ech(f, map_b.rows());
  for (const auto& v : image(f, dy_in).basis) ech.insert(v);
  std::size_t r = 0;
  for (const auto& v : z.basis)
    if (ech.insert(apply(f, map_b, v))) ++r;
  return r;
}

int default_band(const Algebra& a) {
  int top = 1;
  for (std::size_t g = 0; g < a.num_generators(); ++g) top = std::max(top, a.generator(g).bidegree.internal);
  return 2 * top;
}

int ext_depth(const WindowedComplex& m, const WindowedComplex& n, const Window& w, int band) {
  const Algebra& a = *m.algebra();
  const int lo = m.known_lo().value_or(w.i_min);
  if (n.known_hi()) return std::max(lo, *n.known_hi() - w.i_min);
  const int base = m.known_hi().value_or(lo);
  const int spread = static_cast<int>(a.num_generators() + 2) * (band / 2);
  return std::max(base + spread + band, lo + w.j_max - w.j_min + band);
}

namespace {

std::shared_ptr<const ResolutionData> resolve_to(const WindowedComplex& m, int depth, const EngineOptions& opt) {
  const int lo = m.known_lo().value_or(depth);
  Window rw(std::min(lo, depth), depth, m.window().j_min, m.window().j_max);
  auto r = std::make_shared<const ResolutionData>(cached_resolution(m.with_window(rw), rw, opt.cache_dir));
  if (opt.on_resolution) opt.on_resolution(*r);
  return r;
}

DimTable hom_cohomology(const WindowedComplex& hom, const ResolutionData& r, const WindowedComplex& n,
                        const Window& w, int band) {
  DimTable t = cohomology(hom, w).table;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j)
      if (!ext_certified(r, n, {i, j}, band)) t.mark_uncertified({i, j});
  return t;
}

}  // namespace

ExtTable ext_table(const WindowedComplex& m, const WindowedComplex& n, const Window& w, const EngineOptions& opt) {
  const int band = opt.band ? opt.band : default_band(*m.algebra());
  int depth = opt.depth.value_or(ext_depth(m, n, w, band));
  // without a bound on N the top band decides; deepen a few times if needed
  for (int attempt = 0;; ++attempt) {
    auto r = resolve_to(m, depth, opt);
    WindowedComplex hom = hom_complex(r, n, w);
    DimTable t = hom_cohomology(hom, *r, n, w, band);
    if (t.holes().empty() || opt.depth || n.known_hi() || attempt == 3)
      return {std::move(t), m.label(), n.label(), r};
    depth += std::max(2 * band, (depth - r->start) / 2);
  }
}

// Colimits ------------------------------------------------------------------

std::string StabilizedColimit::stabilized_csv() const {
  std::ostringstream os;
  os << "internal,cohomological,stabilized_at\n";
  for (const auto& [b, d] : stabilized_at) os << b.internal << ',' << b.cohomological << ',' << d << '\n';
  return os.str();
}

std::string StabilizedColimit::warnings_text() const {
  std::ostringstream os;
  for (const auto& b : unstable) os << "unstable " << to_string(b) << '\n';
  for (const auto& w : warnings) os << w << '\n';
  return os.str();
}

StabilizedColimit stabilize(const DirectedSystem& sys, const Window& w) {
  constexpr int kSettle = 2, kRecheck = 3;
  const int levels = sys.d_max - sys.d_min + 1;
  // levels and ranks are built on demand: most bidegrees settle long before
  // d_max, and the floor skips the first levels
  std::vector<std::optional<WindowedComplex>> x(levels);
  std::vector<std::map<Bidegree, std::size_t>> ranks_of_d(levels);
  auto level = [&](int k) -> const WindowedComplex& {
    if (!x[k]) x[k] = sys.level(sys.d_min + k);
    return *x[k];
  };
  const PrimeField& f = level(0).field();
  auto d_rank = [&](int k, const Bidegree& b) {
    auto it = ranks_of_d[k].find(b);
    if (it == ranks_of_d[k].end()) it = ranks_of_d[k].emplace(b, rank(f, level(k).diff(b))).first;
    return it->second;
  };
  auto h_dim = [&](int k, const Bidegree& b) -> int {
    const WindowedComplex& c = level(k);
    if (c.known_zero(b.internal)) return 0;
    const std::size_t d = c.dim(b);
    return d ? static_cast<int>(d - d_rank(k, b) - d_rank(k, b - Bidegree{0, 1})) : 0;
  };
  auto known = [&](int k, const Bidegree& b) { return !sys.certified || sys.certified(sys.d_min + k, b); };

  StabilizedColimit out{DimTable(w), {}, {}, {}};
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      std::vector<int> dims(levels, -1), ranks(levels, -1);
      auto dim_at = [&](int k) {
        if (dims[k] == -1) dims[k] = known(k, b) ? h_dim(k, b) : -2;
        return dims[k];
      };
      auto rank_at = [&](int k) {
        if (ranks[k] == -1) {
          if (dim_at(k) < 0 || dim_at(k + 1) < 0)
            ranks[k] = -2;
          else if (!dims[k] || !dims[k + 1])
            ranks[k] = 0;
          else
            ranks[k] = static_cast<int>(induced_rank(f, sys.transition(sys.d_min + k, b), level(k).diff(b),
                                                     level(k + 1).diff(b - Bidegree{0, 1})));
        }
        return ranks[k];
      };
      auto iso = [&](int k) { return dim_at(k) >= 0 && dim_at(k + 1) == dim_at(k) && rank_at(k) == dim_at(k); };
      std::optional<int> found;
      const int first = sys.floor ? std::max(0, sys.floor(b) - sys.d_min) : 0;
      for (int k = first; k + kSettle + kRecheck < levels && !found; ++k) {
        bool settled = true;
        for (int s = 0; s < kSettle && settled; ++s) settled = iso(k + s);
        if (!settled) continue;
        int bad = -1;
        for (int s = kSettle; s < kSettle + kRecheck && bad < 0; ++s)
          if (!iso(k + s)) bad = k + s;
        if (bad >= 0) {
          out.warnings.push_back("transition at d=" + std::to_string(sys.d_min + bad) + " is not an isomorphism at " +
                                 to_string(b) + " after apparent stabilization at d=" +
                                 std::to_string(sys.d_min + k));
          continue;
        }
        found = k;
      }
      if (found) {
        out.table.set(b, dim_at(*found));
        out.stabilized_at[b] = sys.d_min + *found;
      } else {
        out.table.mark_uncertified(b);
        out.unstable.push_back(b);
      }
    }
  return out;
}

int default_d_max(const Algebra& a, const Window& w, std::optional<int> lo) {
  return std::max({lo.value_or(0) - w.i_min + 1, w.i_max + 1, 1}) + default_band(a) + 4;
}

namespace {

std::function<int(const Bidegree&)> floor_from(std::optional<int> lo) {
  if (!lo) return {};
  return [l = *lo](const Bidegree& b) { return l - b.internal + 1; };
}

}  // namespace

StabilizedColimit ext_colimit(const std::function<WindowedComplex(int)>& x, const std::function<ChainMapFn(int)>& map,
                              const WindowedComplex& n, const Window& w, int d_min, int d_max,
                              const EngineOptions& opt) {
  const int band = opt.band ? opt.band : default_band(*n.algebra());
  int depth = opt.depth.value_or(ext_depth(x(d_max), n, w, band));
  if (!opt.depth && !n.known_hi())
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto r = resolve_to(x(d_max), depth, opt);
      bool clear = true;
      for (int i = w.i_min; i <= w.i_max && clear; ++i)
        for (int j = w.j_min; j <= w.j_max && clear; ++j) clear = ext_certified(*r, n, {i, j}, band);
      if (clear) break;
      depth += std::max(2 * band, (depth - r->start) / 2);
    }

  struct State {
    std::map<int, std::shared_ptr<const ResolutionData>> res;
    std::map<int, ChainMapLift> lifts;
  };
  auto st = std::make_shared<State>();
  auto resolution = [=](int d) {
    auto& slot = st->res[d];
    if (!slot) slot = resolve_to(x(d), depth, opt);
    return slot;
  };
  DirectedSystem sys;
  sys.d_min = d_min;
  sys.d_max = d_max;
  sys.level = [=](int d) { return hom_complex(resolution(d), n, w); };
  sys.transition = [=](int d, const Bidegree& b) {
    auto from = resolution(d + 1), to = resolution(d);
    auto it = st->lifts.find(d);
    if (it == st->lifts.end()) it = st->lifts.emplace(d, lift_chain_map(*from, *to, map(d))).first;
    return precompose(*from, *to, it->second, n, b);
  };
  sys.certified = [=](int d, const Bidegree& b) { return ext_certified(*resolution(d), n, b, band); };
  sys.floor = floor_from(n.known_lo());
  return stabilize(sys, w);
}

namespace {

// Sources are exact in every degree; the colimit systems index freely.
WindowedComplex unbounded(const WindowedComplex& m) {
  const Window& w = m.window();
  return m.with_window(Window(-(1 << 20), 1 << 20, w.j_min, w.j_max));
}

WindowedComplex wide_free(std::shared_ptr<const Algebra> a) { return unbounded(free_module(std::move(a), Window(0, 0, -1, 0))); }

ChainMapFn projection(int d, const WindowedComplex& big, const WindowedComplex& small) {
  // big = X / X_{>=d+1} -> small = X / X_{>=d}
  return [=](const Bidegree& b) {
    return b.internal < d ? identity_matrix(small.field(), small.dim(b)) : Matrix(0, big.dim(b));
  };
}

ChainMapFn inclusion(int d, const WindowedComplex& big) {
  // small = X_{>=d+1} -> big = X_{>=d}
  return [=](const Bidegree& b) {
    return b.internal > d ? identity_matrix(big.field(), big.dim(b)) : Matrix(big.dim(b), 0);
  };
}

}  // namespace

StabilizedColimit local_cohomology_colim(const WindowedComplex& m, const Window& w, const EngineOptions& opt,
                                         std::optional<int> d_max) {
  auto a = m.algebra();
  const WindowedComplex A = wide_free(a);
  auto x = [A](int d) { return truncate_lt(A, d); };
  auto map = [x](int d) { return projection(d, x(d + 1), x(d)); };
  return ext_colimit(x, map, m, w, 1, d_max.value_or(default_d_max(*a, w, m.known_lo())), opt);
}

StabilizedColimit ext_qgr(const WindowedComplex& m, const WindowedComplex& n, const Window& w,
                          const EngineOptions& opt, std::optional<int> d_max) {
  const int d_min = std::max(1, m.known_lo().value_or(1));
  const int top = d_max.value_or(std::max(d_min, default_d_max(*m.algebra(), w, n.known_lo())));
  auto x = [m](int d) { return unbounded(truncate_ge(m, d)); };
  auto map = [x](int d) { return inclusion(d, x(d)); };
  return ext_colimit(x, map, n, w, d_min, top, opt);
}

StabilizedColimit derived_global_sections(const WindowedComplex& m, const Window& w, const EngineOptions& opt,
                                          std::optional<int> d_max) {
  return ext_qgr(wide_free(m.algebra()), m, w, opt, d_max);
}

// Cech pipeline --------------------------------------------------------------

namespace {

class KoszulSource : public ModuleSource {
 public:
  KoszulSource(WindowedComplex m, std::vector<std::size_t> seq, int n) : m_(std::move(m)), seq_(std::move(seq)), n_(n) {
    const Algebra& a = *m_.algebra();
    for (unsigned s = 0; s < (1u << seq_.size()); ++s) {
      int e = 0, k = 0;
      for (std::size_t l = 0; l < seq_.size(); ++l)
        if (s >> l & 1) {
          e += a.generator(seq_[l]).bidegree.internal;
          ++k;
        }
      shift_.push_back({n_ * e, k});
    }
  }

  /// Component S at total bidegree b is M at b + (n e_S, -|S|).
  Bidegree component(unsigned s, const Bidegree& b) const {
    return {b.internal + shift_[s].internal, b.cohomological - shift_[s].cohomological};
  }

  std::vector<std::size_t> offsets(const Bidegree& b, std::size_t* total) const {
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (unsigned s = 0; s < shift_.size(); ++s) {
      off.push_back(acc);
      acc += m_.dim(component(s, b));
    }
    *total = acc;
    return off;
  }

  std::size_t dim(const Bidegree& b) const override {
    std::size_t t = 0;
    offsets(b, &t);
    return t;
  }

  std::vector<int> support(int internal) const override {
    std::set<int> js;
    for (unsigned s = 0; s < shift_.size(); ++s) {
      const int p = internal + shift_[s].internal;
      if (m_.known_zero(p)) continue;
      for (int j : m_.support(p)) js.insert(j + shift_[s].cohomological);
    }
    return {js.begin(), js.end()};
  }

  Matrix diff(const Bidegree& b) const override {
    const PrimeField& f = m_.field();
    std::size_t rows = 0, cols = 0;
    auto out_off = offsets(b + Bidegree{0, 1}, &rows), in_off = offsets(b, &cols);
    MatrixBuilder<PrimeField> out(f, rows, cols);
    for (unsigned s = 0; s < shift_.size(); ++s) {
      const Bidegree c = component(s, b);
      out.add_block(out_off[s], in_off[s], m_.diff(c), f.one());
      int before = 0;
      for (std::size_t l = 0; l < seq_.size(); ++l) {
        if (s >> l & 1) {
          ++before;
          continue;
        }
        Exponents e(m_.algebra()->num_generators(), 0);
        e[seq_[l]] = n_;
        out.add_block(out_off[s | 1u << l], in_off[s], m_.act_monomial(e, c), f.sign(c.cohomological + before));
      }
    }
    return out.build();
  }

  Matrix act(std::size_t, const Bidegree&) const override {
    throw EngineError("the Koszul complex is used as a complex of vector spaces only");
  }

  /// Multiplication by x_S on each component: K(x^n) -> K(x^{n+1}).
  Matrix transition(const KoszulSource& next, const Bidegree& b) const {
    const PrimeField& f = m_.field();
    std::size_t rows = 0, cols = 0;
    auto out_off = next.offsets(b, &rows), in_off = offsets(b, &cols);
    MatrixBuilder<PrimeField> out(f, rows, cols);
    for (unsigned s = 0; s < shift_.size(); ++s) {
      Exponents e(m_.algebra()->num_generators(), 0);
      for (std::size_t l = 0; l < seq_.size(); ++l)
        if (s >> l & 1) e[seq_[l]] = 1;
      out.add_block(out_off[s], in_off[s], m_.act_monomial(e, component(s, b)), f.one());
    }
    return out.build();
  }

 private:
  WindowedComplex m_;
  std::vector<std::size_t> seq_;
  int n_;
  std::vector<Bidegree> shift_;  // (n e_S, |S|)
};

WindowedComplex widen_for_koszul(const WindowedComplex& m, const std::vector<std::size_t>& seq, int n,
                                 const Window& w) {
  int top = 0;
  for (std::size_t l : seq) top += m.algebra()->generator(l).bidegree.internal;
  Window mw(std::min(w.i_min, m.window().i_min), std::max(w.i_max + (n + 1) * top, m.window().i_max),
            m.window().j_min, m.window().j_max);
  return m.with_window(mw);
}

}  // namespace

std::vector<std::size_t> cech_sequence(const Algebra& a) {
  std::vector<std::size_t> seq;
  for (std::size_t g = 0; g < a.num_generators(); ++g) {
    const auto& gen = a.generator(g);
    if (gen.bidegree.cohomological == 0 && gen.parity == Parity::even) seq.push_back(g);
  }
  return seq;
}

WindowedComplex koszul_power_complex(const WindowedComplex& m, const std::vector<std::size_t>& seq, int n,
                                     const Window& w) {
  auto src = std::make_shared<KoszulSource>(widen_for_koszul(m, seq, n, w), seq, n);
  return WindowedComplex(m.algebra(), src, w, std::nullopt, m.known_hi(),
                         "K(" + m.label() + ";" + std::to_string(n) + ")");
}

StabilizedColimit local_cohomology_cech(const WindowedComplex& m, const Window& w, std::optional<int> n_max,
                                        std::optional<std::vector<std::size_t>> sequence) {
  // A^0 is generated by the cohomological-degree-0 generators, all even, so
  // it is commutative and the default sequence generates its maximal ideal.
  const Algebra& a = *m.algebra();
  const auto seq = sequence.value_or(cech_sequence(a));
  auto sources = std::make_shared<std::map<int, std::shared_ptr<KoszulSource>>>();
  auto source = [=](int n) {
    auto& s = (*sources)[n];
    if (!s) s = std::make_shared<KoszulSource>(widen_for_koszul(m, seq, n + 1, w), seq, n);
    return s;
  };
  DirectedSystem sys;
  sys.d_min = 1;
  sys.d_max = n_max.value_or(default_d_max(a, w, m.known_lo()));
  sys.floor = floor_from(m.known_lo());
  sys.level = [=](int n) {
    return WindowedComplex(m.algebra(), source(n), w, std::nullopt, m.known_hi(), "K(" + std::to_string(n) + ")");
  };
  sys.transition = [=](int n, const Bidegree& b) { return source(n)->transition(*source(n + 1), b); };
  auto out = stabilize(sys, w);
  if (sequence && *sequence != cech_sequence(a)) {
    // a supplied sequence must generate m^0 up to radical: H^0 of the Cech
    // complex of A vanishes in high internal degrees
    const int band = default_band(a);
    Window top(std::max(w.i_min, w.i_max - band + 1), w.i_max, 0, 0);
    auto h0 = local_cohomology_cech(free_module(m.algebra(), top), top, sys.d_max, cech_sequence(a) == seq
                                                                                       ? std::nullopt
                                                                                       : std::optional(seq));
    for (const auto& [b, d] : h0.table.nonzero())
      out.warnings.push_back("Cech H^0 of A is nonzero at " + to_string(b) +
                             ": the sequence may not generate the maximal ideal up to radical");
  }
  return out;
}

// Triangle -------------------------------------------------------------------

std::vector<Bidegree> triangle_check(const DimTable& torsion, const DimTable& h, const DimTable& sections) {
  std::vector<Bidegree> bad;
  const Window& w = h.valid();
  for (int i = w.i_min; i <= w.i_max; ++i) {
    // ... -> H^j_m -> H^j -> R^jGamma -> H^{j+1}_m -> ...
    std::vector<std::pair<Bidegree, int>> seq;
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      for (const DimTable* t : {&torsion, &h, &sections}) seq.push_back({b, t->certified(b) ? t->at(b) : -1});
    }
    for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
      const int prev = seq[k - 1].second, cur = seq[k].second, next = seq[k + 1].second;
      if (prev >= 0 && cur >= 0 && next >= 0 && cur > prev + next) bad.push_back(seq[k].first);
    }
    // stretches bounded by zeros have alternating sum zero
    std::optional<std::size_t> open;
    long sum = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const int v = seq[k].second;
      if (v < 0) {
        open.reset();
        continue;
      }
      if (v == 0) {
        if (open && sum != 0) bad.push_back(seq[*open].first);
        open = k;
        sum = 0;
        continue;
      }
      if (open) sum += ((k - *open) % 2 ? 1 : -1) * v;
    }
  }
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

}  // namespace dgcoh
