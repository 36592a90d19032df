#include "dgcoh/resolve.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <functional>
#include <thread>

#include <unistd.h>

#include "dgcoh/parse.hpp"

namespace dgcoh {

namespace {

/// Free coordinates of F_b: one block A_{b - deg g_t} per generator.
struct Layout {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
};

Layout layout(const Algebra& a, const std::vector<GeneratorSpec>& gens, const Bidegree& b) {
  Layout l;
  for (const auto& g : gens) {
    Bidegree ab = b - g.bidegree;
    std::size_t n = ab.internal < 0 ? 0 : a.dim(ab);
    l.offsets.push_back(l.total);
    l.sizes.push_back(n);
    l.total += n;
  }
  return l;
}

/// d_F : F_b -> F_{b+(0,1)} in free coordinates.
Matrix free_diff(const ResolutionData& r, const Bidegree& b) {
  const Algebra& a = *r.algebra;
  const PrimeField& f = a.field();
  Layout src = layout(a, r.generators, b), tgt = layout(a, r.generators, b + Bidegree{0, 1});
  MatrixBuilder<PrimeField> out(f, tgt.total, src.total);
  for (std::size_t t = 0; t < r.generators.size(); ++t) {
    if (!src.sizes[t]) continue;
    const Bidegree ab = b - r.generators[t].bidegree;
    out.add_block(tgt.offsets[t], src.offsets[t], a.diff_matrix(ab), f.sign(r.generators[t].bidegree.cohomological));
    for (const auto& [s, c] : r.diff[t]) {
      const Bidegree cb = r.generators[t].bidegree + Bidegree{0, 1} - r.generators[s].bidegree;
      for (std::size_t k = 0; k < src.sizes[t]; ++k)
        for (const auto& [row, x] : a.multiply(cb, c, ab, {{static_cast<std::uint32_t>(k), f.one()}}))
          out.add(tgt.offsets[s] + row, src.offsets[t] + k, x);
    }
  }
  return out.build();
}

/// Evaluates the A-linear map determined by images v_t (in X at deg g_t + shift)
/// on F_b: column (t,k) = v_t . a_k.
Matrix evaluate_on_free(const Algebra& a, const std::vector<GeneratorSpec>& gens, const std::vector<Vec>& images,
                        const Bidegree& shift, const WindowedComplex& x, const Bidegree& b) {
  const PrimeField& f = a.field();
  Layout src = layout(a, gens, b);
  MatrixBuilder<PrimeField> out(f, x.dim(b + shift), src.total);
  for (std::size_t t = 0; t < gens.size(); ++t) {
    if (!src.sizes[t] || images[t].empty()) continue;
    const Bidegree ab = b - gens[t].bidegree, base = gens[t].bidegree + shift;
    auto basis = a.basis(ab);
    // v_t . m, built up one generator at a time in the order act_monomial uses
    std::map<Exponents, Vec> orbit;
    orbit[Exponents(a.num_generators(), 0)] = images[t];
    std::function<const Vec&(const Exponents&)> image = [&](const Exponents& m) -> const Vec& {
      if (auto it = orbit.find(m); it != orbit.end()) return it->second;
      std::size_t g = m.size() - 1;
      while (!m[g]) --g;
      Exponents prev = m;
      --prev[g];
      const Vec& v = image(prev);
      Bidegree at = base;
      for (std::size_t h = 0; h < prev.size(); ++h)
        at = at + Bidegree{prev[h] * a.generator(h).bidegree.internal, prev[h] * a.generator(h).bidegree.cohomological};
      Vec out = v.empty() ? Vec{} : apply(f, x.act(g, at), v);
      return orbit.emplace(m, std::move(out)).first->second;
    };
    for (std::size_t k = 0; k < src.sizes[t]; ++k)
      for (const auto& [row, v] : image(basis->monomial(k))) out.add(row, src.offsets[t] + k, v);
  }
  return out.build();
}

/// Splits a vector in free coordinates into per-generator coefficient vectors.
std::vector<std::pair<std::size_t, Vec>> split(const Layout& l, const Vec& v) {
  std::map<std::size_t, Vec> parts;
  for (const auto& [c, x] : v) {
    std::size_t t = std::upper_bound(l.offsets.begin(), l.offsets.end(), c) - l.offsets.begin() - 1;
    while (l.sizes[t] == 0 || c >= l.offsets[t] + l.sizes[t]) --t;  // skip empty blocks sharing an offset
    parts[t].emplace_back(static_cast<std::uint32_t>(c - l.offsets[t]), x);
  }
  return {parts.begin(), parts.end()};
}

/// Matrix of d_C : C^j -> C^{j+1} for the cone of phi at internal degree p,
/// C^j = F^{(p,j+1)} + M^{(p,j)}, d(f,m) = (-d f, phi f + d m).
Matrix cone_diff(const ResolutionData& r, const WindowedComplex& m, int p, int j) {
  const PrimeField& f = m.field();
  const Bidegree fb{p, j + 1}, mb{p, j};
  Layout fs = layout(*r.algebra, r.generators, fb), ft = layout(*r.algebra, r.generators, fb + Bidegree{0, 1});
  const std::size_t ms = m.dim(mb), mt = m.dim(mb + Bidegree{0, 1});
  MatrixBuilder<PrimeField> out(f, ft.total + mt, fs.total + ms);
  out.add_block(0, 0, free_diff(r, fb), f.neg(f.one()));
  out.add_block(ft.total, 0, evaluate_on_free(*r.algebra, r.generators, r.phi, {}, m, fb), f.one());
  out.add_block(ft.total, fs.total, m.diff(mb), f.one());
  return out.build();
}

/// Cohomological degrees where the cone at internal degree p can be nonzero.
std::pair<int, int> cone_range(const ResolutionData& r, const WindowedComplex& m, int p) {
  int lo = 1, hi = -1;
  auto widen = [&](int j) {
    if (lo > hi) {
      lo = hi = j;
    } else {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  };
  for (int j : m.support(p)) widen(j);
  for (const auto& g : r.generators) {
    if (g.bidegree.internal > p) continue;
    for (int j : r.algebra->support_column(p - g.bidegree.internal)) widen(j + g.bidegree.cohomological - 1);
  }
  return {lo - 1, hi + 1};
}

}  // namespace

std::optional<int> ResolutionData::top_generator_degree() const {
  if (generators.empty()) return std::nullopt;
  return generators.back().bidegree.internal;
}

bool ResolutionData::band_clear(int band) const {
  for (const auto& g : generators)
    if (g.bidegree.internal > depth - band && g.bidegree.internal <= depth) return false;
  return true;
}

PresentedDgModule ResolutionData::presentation() const {
  PresentedDgModule m;
  m.algebra = algebra;
  m.generators = generators;
  for (std::size_t t = 0; t < generators.size(); ++t) {
    ModElement e;
    for (const auto& [s, c] : diff[t]) {
      const Bidegree cb = generators[t].bidegree + Bidegree{0, 1} - generators[s].bidegree;
      e[s] = algebra->to_polynomial(cb, c);
    }
    m.differential.push_back(e);
  }
  return m;
}

WindowedComplex ResolutionData::free_complex() const {
  Window w(start, std::max(start, depth), -1, 1);
  std::optional<int> lo = generators.empty() ? std::optional<int>(depth + 1) : std::optional<int>(start);
  return compile_unchecked(presentation(), w, lo, std::nullopt).with_label("F(" + target.label() + ")");
}

Matrix ResolutionData::comparison(const WindowedComplex& f, const Bidegree& b) const {
  (void)f;
  return evaluate_on_free(*algebra, generators, phi, {}, target, b);
}

ResolutionData semifree_resolution(const WindowedComplex& m, const Window& w) {
  ResolutionData r;
  r.algebra = m.algebra();
  r.target = m;
  r.bounded_below = m.known_lo().has_value();
  r.start = m.known_lo() ? *m.known_lo() : w.i_min;
  r.depth = w.i_max;
  const PrimeField& f = m.field();
  for (int p = r.start; p <= r.depth; ++p) {
    if (!m.available(p))
      throw WindowTooSmall("resolution needs internal degree " + std::to_string(p) + " of " + m.label() +
                           ", outside its window " + m.window().str());
    auto [jlo, jhi] = cone_range(r, m, p);
    std::vector<GeneratorSpec> new_gens;
    std::vector<std::vector<std::pair<std::size_t, Vec>>> new_diff;
    std::vector<Vec> new_phi;
    for (int j = jlo; j <= jhi; ++j) {
      Matrix dj = cone_diff(r, m, p, j);
      if (dj.cols() == 0) continue;
      Matrix dprev = cone_diff(r, m, p, j - 1);
      auto z = kernel(f, dj);
      if (z.basis.empty()) continue;
      Echelon<PrimeField> ech(f, dj.cols());
      for (const auto& v : image(f, dprev).basis) ech.insert(v);
      Layout fl = layout(*r.algebra, r.generators, {p, j + 1});
      for (const auto& v : z.basis) {
        if (!ech.insert(v)) continue;
        Vec fpart, mpart;
        for (const auto& [c, x] : v) {
          if (c < fl.total)
            fpart.emplace_back(c, f.neg(x));
          else
            mpart.emplace_back(static_cast<std::uint32_t>(c - fl.total), x);
        }
        new_gens.push_back({"g" + std::to_string(r.generators.size() + new_gens.size()), {p, j}, parity_of(j)});
        new_diff.push_back(split(fl, fpart));
        new_phi.push_back(mpart);
      }
    }
    for (std::size_t k = 0; k < new_gens.size(); ++k) {
      r.generators.push_back(new_gens[k]);
      r.diff.push_back(std::move(new_diff[k]));
      r.phi.push_back(std::move(new_phi[k]));
    }
  }
  return r;
}

ResolutionReport verify_resolution(const ResolutionData& r) {
  ResolutionReport rep;
  const PrimeField& f = r.algebra->field();
  const WindowedComplex& m = r.target;
  // minimality: a coefficient of internal degree 0 is a unit
  for (std::size_t t = 0; t < r.generators.size(); ++t)
    for (const auto& [s, c] : r.diff[t]) {
      const Bidegree cb = r.generators[t].bidegree + Bidegree{0, 1} - r.generators[s].bidegree;
      if (cb.internal == 0 && !c.empty()) {
        rep.minimal = false;
        rep.violations.push_back({"non-minimal: unit coefficient", r.generators[t].bidegree,
                                  r.generators[t].name + " -> " + r.generators[s].name});
      }
    }
  for (int p = r.start; p <= r.depth; ++p) {
    auto [jlo, jhi] = cone_range(r, m, p);
    for (int j = jlo; j <= jhi; ++j) {
      const Bidegree b{p, j};
      Matrix d0 = free_diff(r, b), d1 = free_diff(r, b + Bidegree{0, 1});
      if (!multiply(f, d1, d0).is_zero()) {
        rep.d_squared_zero = false;
        rep.violations.push_back({"d^2 != 0 on F", b, ""});
      }
      Matrix phi0 = evaluate_on_free(*r.algebra, r.generators, r.phi, {}, m, b);
      Matrix phi1 = evaluate_on_free(*r.algebra, r.generators, r.phi, {}, m, b + Bidegree{0, 1});
      if (!(multiply(f, phi1, d0) == multiply(f, m.diff(b), phi0)))
        rep.violations.push_back({"comparison map is not a chain map", b, ""});
      Matrix dj = cone_diff(r, m, p, j), dprev = cone_diff(r, m, p, j - 1);
      if (dj.cols() && kernel(f, dj).basis.size() != rank(f, dprev)) {
        rep.quasi_iso = false;
        rep.violations.push_back({"cone not acyclic (comparison not a quasi-isomorphism)", b, ""});
      }
    }
  }
  return rep;
}

ChainMapLift lift_chain_map(const ResolutionData& from, const ResolutionData& to, const ChainMapFn& fmap) {
  const Algebra& a = *from.algebra;
  const PrimeField& f = a.field();
  const WindowedComplex& mt = to.target;
  ChainMapLift out;
  const WindowedComplex g = to.free_complex();
  std::vector<Vec> psi_free;  // psi(g_t) in free coordinates of G at deg g_t
  for (std::size_t t = 0; t < from.generators.size(); ++t) {
    const Bidegree b = from.generators[t].bidegree;
    const int p = b.internal, q = b.cohomological;
    if (p > to.depth)
      throw WindowTooSmall("lifting needs the target resolution through internal degree " + std::to_string(p));
    const Bidegree b1 = b + Bidegree{0, 1};
    // d g_t in free coordinates of F at b1
    Layout fl = layout(a, from.generators, b1);
    Vec dg;
    for (const auto& [s, c] : from.diff[t])
      for (const auto& [k, x] : c) dg.emplace_back(static_cast<std::uint32_t>(fl.offsets[s] + k), x);
    std::sort(dg.begin(), dg.end());
    std::vector<Vec> prefix_psi(psi_free.begin(), psi_free.end());
    std::vector<Vec> prefix_h(out.homotopy.begin(), out.homotopy.end());
    prefix_psi.resize(from.generators.size());
    prefix_h.resize(from.generators.size());
    Vec psi_dg = apply(f, evaluate_on_free(a, from.generators, prefix_psi, {}, g, b1), dg);
    Vec h_dg = apply(f, evaluate_on_free(a, from.generators, prefix_h, {0, -1}, mt, b1), dg);
    Vec fphi = apply(f, fmap(b), from.phi[t]);
    // target (-psi(dg), f phi(g) + h(dg)) in C^q of cone(phi_G) at internal p
    Layout gl = layout(a, to.generators, b1);
    Vec rhs;
    for (const auto& [c, x] : psi_dg) rhs.emplace_back(c, f.neg(x));
    std::map<std::uint32_t, Scalar> low;
    for (const auto& [c, x] : fphi) low[c] = f.add(low[c], x);
    for (const auto& [c, x] : h_dg) low[c] = f.add(low[c], x);
    for (const auto& [c, x] : low)
      if (x) rhs.emplace_back(static_cast<std::uint32_t>(gl.total + c), x);
    Matrix dc = cone_diff(to, mt, p, q - 1);
    auto sol = solve(f, dc, rhs);
    if (!sol) throw EngineError("chain map lift failed at " + to_string(b) + " (target resolution incomplete?)");
    Layout gy = layout(a, to.generators, b);
    Vec y, z;
    for (const auto& [c, x] : *sol) {
      if (c < gy.total)
        y.emplace_back(c, x);
      else
        z.emplace_back(static_cast<std::uint32_t>(c - gy.total), f.neg(x));
    }
    psi_free.push_back(y);
    out.homotopy.push_back(z);
    out.psi.push_back(split(gy, y));
  }
  return out;
}

// Cache ---------------------------------------------------------------------

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

void dump_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << 'x' << m.cols();
  for (const auto& [r, c, v] : m.entries()) os << ' ' << r << ',' << c << ',' << v;
  os << '\n';
}

}  // namespace

std::string canonical_dump(const WindowedComplex& m, int start, int depth) {
  std::ostringstream os;
  const Algebra& a = *m.algebra();
  os << a.presentation().to_text() << "range " << start << ' ' << depth << '\n';
  for (int p = start; p <= depth; ++p)
    for (int j : m.support(p)) {
      Bidegree b{p, j};
      os << "dim " << p << ' ' << j << ' ' << m.dim(b) << "\nd ";
      dump_matrix(os, m.diff(b));
      for (std::size_t g = 0; g < a.num_generators(); ++g)
        if (p + a.generator(g).bidegree.internal <= depth) {
          os << "act " << g << ' ';
          dump_matrix(os, m.act(g, b));
        }
    }
  return os.str();
}

std::string serialize_resolution(const ResolutionData& r, const std::string& hash) {
  std::ostringstream os;
  os << "# manifest sha256=" << hash << " start=" << r.start << " depth=" << r.depth
     << " bounded_below=" << (r.bounded_below ? 1 : 0) << '\n';
  os << r.presentation().to_text();
  for (std::size_t t = 0; t < r.generators.size(); ++t) {
    os << "# phi " << r.generators[t].name;
    for (const auto& [c, x] : r.phi[t]) os << ' ' << c << ':' << x;
    os << '\n';
  }
  return os.str();
}

ResolutionData deserialize_resolution(const std::string& text, const WindowedComplex& target, std::string* hash) {
  ResolutionData r;
  r.algebra = target.algebra();
  r.target = target;
  PresentedDgModule pm = parse_module(text, r.algebra, "cache");
  r.generators = pm.generators;
  pm.differential.resize(pm.generators.size());
  r.phi.assign(r.generators.size(), {});
  for (std::size_t t = 0; t < r.generators.size(); ++t) {
    std::vector<std::pair<std::size_t, Vec>> d;
    for (const auto& [s, poly] : pm.differential[t]) {
      const Bidegree cb = r.generators[t].bidegree + Bidegree{0, 1} - r.generators[s].bidegree;
      d.emplace_back(s, r.algebra->normal_form(poly, cb));
    }
    r.diff.push_back(std::move(d));
  }
  std::istringstream is(text);
  std::string line;
  bool manifest = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string hashmark, kw;
    ls >> hashmark >> kw;
    if (hashmark != "#") continue;
    if (kw == "manifest") {
      std::string tok;
      while (ls >> tok) {
        auto eq = tok.find('=');
        std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "sha256" && hash) *hash = v;
        if (k == "start") r.start = std::stoi(v);
        if (k == "depth") r.depth = std::stoi(v);
        if (k == "bounded_below") r.bounded_below = v == "1";
      }
      manifest = true;
    } else if (kw == "phi") {
      std::string name, tok;
      ls >> name;
      auto g = pm.find_generator(name);
      if (!g) throw InputError("cache: phi for unknown generator " + name);
      while (ls >> tok) {
        auto colon = tok.find(':');
        r.phi[*g].emplace_back(static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
                               static_cast<Scalar>(std::stoul(tok.substr(colon + 1))));
      }
    }
  }
  if (!manifest) throw InputError("cache file without manifest line");
  return r;
}

ResolutionData cached_resolution(const WindowedComplex& m, const Window& w, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return semifree_resolution(m, w);
  const int start = m.known_lo() ? *m.known_lo() : w.i_min;
  std::string hash;
  try {
    hash = sha256_hex(canonical_dump(m, start, w.i_max) + (m.known_lo() ? "bounded" : "unbounded"));
  } catch (const OutOfWindow& e) {
    throw WindowTooSmall(e.what());
  }
  std::filesystem::path file = cache_dir / (hash + ".res");
  if (std::filesystem::exists(file)) {
    std::string stored;
    ResolutionData r = deserialize_resolution(read_text_file(file), m, &stored);
    if (stored == hash) return r;
  }
  ResolutionData r = semifree_resolution(m, w);
  std::filesystem::create_directories(cache_dir);
  std::filesystem::path tmp = file;
  tmp += ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    out << serialize_resolution(r, hash);
  }
  std::filesystem::rename(tmp, file);
  return r;
}

}  // namespace dgcoh
