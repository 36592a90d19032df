#include "dgcoh/duality.hpp"

#include <sstream>

namespace dgcoh {

namespace {

Window dual_window(const Window& w) { return Window(-w.i_max, -w.i_min, -w.j_max, -w.j_min); }

void add_unstable(DualityReport& rep, const Bidegree& b) {
  if (std::find(rep.unstable.begin(), rep.unstable.end(), b) == rep.unstable.end()) rep.unstable.push_back(b);
}

/// Compares lhs(b) with rhs(image(b)) for b in w.
template <class Image>
void compare(DualityReport& rep, const DimTable& lhs, const DimTable& rhs, const Window& w, Image image,
             const std::string& what) {
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j}, c = image(b);
      if (!lhs.certified(b)) {
        add_unstable(rep, b);
        continue;
      }
      if (!rhs.certified(c)) {
        add_unstable(rep, b);
        continue;
      }
      ++rep.compared;
      if (lhs.at(b) != rhs.at(c)) rep.mismatches.push_back({b, lhs.at(b), rhs.at(c), what});
    }
}

}  // namespace

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::local: return "local-duality";
    case Theorem::serre: return "serre";
    case Theorem::balanced: return "balanced";
    case Theorem::reflexive: return "reflexive";
    case Theorem::chi: return "chi";
    case Theorem::vanishing: return "vanishing";
    case Theorem::finiteness: return "finiteness";
  }
  return "?";
}

std::string DualityReport::summary() const {
  std::ostringstream os;
  os << (passed() ? "PASS " : "FAIL ") << theorem_name(theorem) << " window=" << window.str()
     << " compared=" << compared << " mismatches=" << mismatches.size() << " unstable=" << unstable.size();
  return os.str();
}

std::string DualityReport::mismatches_csv() const {
  std::ostringstream os;
  os << "internal,cohomological,lhs,rhs,what\n";
  for (const auto& m : mismatches)
    os << m.at.internal << ',' << m.at.cohomological << ',' << m.lhs << ',' << m.rhs << ',' << m.what << '\n';
  return os.str();
}

std::string DualityReport::text() const {
  std::ostringstream os;
  os << summary() << '\n';
  for (const auto& n : notes) os << "note: " << n << '\n';
  for (const auto& m : mismatches)
    os << "mismatch " << to_string(m.at) << ' ' << m.what << ": " << m.lhs << " vs " << m.rhs << '\n';
  for (const auto& b : unstable) os << "unstable " << to_string(b) << '\n';
  return os.str();
}

GorensteinCertificate gorenstein_detect(std::shared_ptr<const Algebra> a, const Window& w, const EngineOptions& opt) {
  GorensteinCertificate cert;
  cert.evidence = ext_table(residue_field(a, w), free_module(a, w), w, opt);
  const auto& nz = cert.evidence.table.nonzero();
  if (cert.evidence.table.holes().empty() && nz.size() == 1 && nz.begin()->second == 1) {
    cert.gorenstein_in_window = true;
    cert.a = -nz.begin()->first.internal;
    cert.n = nz.begin()->first.cohomological;
  }
  return cert;
}

WindowedComplex dualizing_module(std::shared_ptr<const Algebra> a, const GorensteinCertificate& cert,
                                 const Window& w) {
  if (!cert.gorenstein_in_window) throw EngineError("algebra is not Gorenstein on the window");
  return shift_twist(free_module(std::move(a), w), {-cert.a, cert.n});
}

DualityReport balanced_check(std::shared_ptr<const Algebra> a, const WindowedComplex& r, const Window& w,
                             const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::balanced;
  rep.window = w;
  rep.notes.push_back("A is graded-commutative: the A^op clause coincides with the A clause");
  const DimTable dual = cohomology(k_dual(free_module(a, dual_window(w)))).table;
  auto same = [](const Bidegree& b) { return b; };
  compare(rep, local_cohomology_colim(r, w, opt).table, dual, w, same, "H_m(R) (colimit) vs Hom_k(A,k)");
  compare(rep, local_cohomology_cech(r, w).table, dual, w, same, "H_m(R) (Cech) vs Hom_k(A,k)");
  return rep;
}

DualityReport local_duality_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                  const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::local;
  rep.window = w;
  const DimTable ext = ext_table(m, r, dual_window(w), opt).table;
  auto flip = [](const Bidegree& b) { return dual_bidegree(b); };
  compare(rep, local_cohomology_colim(m, w, opt).table, ext, w, flip, "H_m(M) (colimit) vs Ext(M,R)*");
  compare(rep, local_cohomology_cech(m, w).table, ext, w, flip, "H_m(M) (Cech) vs Ext(M,R)*");
  return rep;
}

DualityReport serre_duality_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w, int twist_lo,
                                  int twist_hi, const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::serre;
  const Window gw(twist_lo, twist_hi, w.j_min, w.j_max);
  const Window ew(-twist_hi, -twist_lo, -w.j_max - 1, -w.j_min - 1);
  rep.window = gw;
  auto image = [](const Bidegree& b) { return Bidegree{-b.internal, -b.cohomological - 1}; };
  const DimTable sections = derived_global_sections(m, gw, opt).table;
  compare(rep, sections, ext_qgr(m, r, ew, opt).table, gw, image, "RGamma vs Ext_qgr(M,R)*");
  // finite form: for d >= 1, R^jGamma(M(l)~) = Ext^{-j-1}(M(l)_{>=d}, R)_0^*
  for (int l = twist_lo; l <= twist_hi; ++l)
    for (int d = 1; d <= 2; ++d) {
      const Window col(-l, -l, ew.j_min, ew.j_max);
      const DimTable fin = ext_table(truncate_ge(m, l + d), r, col, opt).table;
      compare(rep, sections, fin, Window(l, l, w.j_min, w.j_max), image,
              "RGamma vs Ext(M_{>=" + std::to_string(l + d) + "},R)*");
    }
  return rep;
}

DualityReport condition_chi_check(std::shared_ptr<const Algebra> a, const WindowedComplex& m, const Window& w,
                                  const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::chi;
  rep.window = w;
  const int band = opt.band ? opt.band : default_band(*a);
  const DimTable ext = ext_table(residue_field(a, w), m, w, opt).table;
  for (int j = w.j_min; j <= w.j_max; ++j) {
    std::optional<int> top;
    for (int i = w.i_min; i <= w.i_max; ++i) {
      const Bidegree b{i, j};
      if (!ext.certified(b)) {
        add_unstable(rep, b);
        continue;
      }
      if (ext.at(b)) top = i;
      if (i > w.i_max - band) {
        ++rep.compared;
        if (ext.at(b)) rep.mismatches.push_back({b, ext.at(b), 0, "Ext(k,M) nonzero in the top band"});
      }
    }
    if (top) rep.notes.push_back("j=" + std::to_string(j) + ": top occupied internal degree " + std::to_string(*top));
  }
  return rep;
}

DualityReport vanishing_range_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                    const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::vanishing;
  rep.window = w;
  const auto hm = cohomology(m, w), hr = cohomology(r, w);
  if (!hr.inf() || (hm.inf().has_value() != hm.sup().has_value())) {
    rep.notes.push_back("inf/sup not finite on the window");
    return rep;
  }
  // H(M) = 0 on the window: the range is empty and RGamma must vanish
  const bool empty = !hm.inf();
  const int lo = empty ? 1 : *hm.inf(), hi = empty ? 0 : *hm.sup() - *hr.inf() - 1;
  rep.notes.push_back(empty ? std::string("H(M) = 0: empty range")
                            : "allowed range " + std::to_string(lo) + ".." + std::to_string(hi));
  const DimTable g = derived_global_sections(m, w, opt).table;
  bool low_seen = false, high_seen = false;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      if (!g.certified(b)) {
        add_unstable(rep, b);
        continue;
      }
      ++rep.compared;
      const int v = g.at(b);
      if (v && (j < lo || j > hi)) rep.mismatches.push_back({b, v, 0, "R^jGamma outside the vanishing range"});
      if (v && j == lo) low_seen = true;
      if (v && j == hi) high_seen = true;
    }
  rep.attained = low_seen && high_seen;
  rep.notes.push_back(std::string("range ") + (rep.attained ? "attained at both ends" : "not attained at both ends"));
  return rep;
}

DualityReport finiteness_check(const WindowedComplex& m, int i0, const Window& w, const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::finiteness;
  const Window gw(std::max(i0, w.i_min), w.i_max, w.j_min, w.j_max);
  rep.window = gw;
  if (gw.i_min > gw.i_max) return rep;
  const auto g = derived_global_sections(m, gw, opt);
  for (const auto& b : g.unstable) add_unstable(rep, b);
  const Window tw(gw.i_min, gw.i_max, gw.j_min, gw.j_max + 1);
  const DimTable tors = local_cohomology_cech(m, tw).table;
  const DimTable h = cohomology(m, gw).table;
  for (int i = gw.i_min; i <= gw.i_max; ++i)
    for (int j = gw.j_min; j <= gw.j_max; ++j) {
      const Bidegree b{i, j}, b1{i, j + 1};
      if (!g.table.certified(b)) continue;
      ++rep.compared;
      if (!tors.certified(b) || !tors.certified(b1) || tors.at(b) || tors.at(b1)) continue;
      if (g.table.at(b) != h.at(b)) rep.mismatches.push_back({b, g.table.at(b), h.at(b), "RGamma vs H(M) off torsion"});
    }
  return rep;
}

DualityReport reflexivity_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                const EngineOptions& opt) {
  DualityReport rep;
  rep.theorem = Theorem::reflexive;
  rep.window = w;
  const Algebra& a = *m.algebra();
  const int band = opt.band ? opt.band : default_band(a);
  // RHom(M, R) through a resolution deep enough to look finite
  const Window inner(-(w.i_max + band), -w.i_min + band, -w.j_max - band, -w.j_min + band);
  const ExtTable first = ext_table(m, r, inner, opt);
  const ResolutionData& res = *first.resolution;
  if (!res.bounded_below || !res.band_clear(band) || !r.known_lo())
    throw WindowTooSmall("RHom(M,R) is not bounded below on this window (resolution of " + m.label() +
                         " does not terminate)");
  rep.notes.push_back("resolution of M taken as finite: no generators in the top band (heuristic)");
  const int top = res.top_generator_degree().value_or(res.start);
  const int lo = *r.known_lo() - top;
  const std::optional<int> hi = r.known_hi() ? std::optional<int>(*r.known_hi() - res.start) : std::nullopt;
  const Window dw(lo, hi.value_or(lo + 64), -64, 64);
  const WindowedComplex open = hom_complex(first.resolution, r, dw);
  const WindowedComplex dual(m.algebra(), open.source(), dw, lo, hi, "RHom(" + m.label() + ",R)");
  const DimTable twice = ext_table(dual, r, w, opt).table;
  compare(rep, twice, cohomology(m, w).table, w, [](const Bidegree& b) { return b; }, "Ext(Ext(M,R),R) vs H(M)");
  return rep;
}

}  // namespace dgcoh
