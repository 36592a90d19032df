#pragma once

// Derived functors.  Every table here is a DimTable whose holes mark entries
// that could not be certified.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgcoh/resolve.hpp"

namespace dgcoh {

/// Hom_A(F, N) for a semifree F: Hom_(i,j) = sum_t N_(deg g_t + (i,j)),
/// (d alpha)(g_t) = d alpha(g_t) - (-1)^j alpha(d g_t),
/// (alpha a)(g_t) = (-1)^{|a| q_t} alpha(g_t) a.
/// Only the generators through r.depth are present; see ext_certified.
WindowedComplex hom_complex(std::shared_ptr<const ResolutionData> r, const WindowedComplex& n, const Window& w);

/// Precomposition with a lifted chain map psi : F -> G,
/// Hom(G, N)_b -> Hom(F, N)_b.
Matrix precompose(const ResolutionData& from, const ResolutionData& to, const ChainMapLift& psi,
                  const WindowedComplex& n, const Bidegree& b);

/// Whether H^j Hom(F, N)_i is unaffected by generators beyond the depth.
/// Exact when N has a proven internal upper bound; otherwise the top band
/// (depth - band, depth] of the resolution must not touch the entry.
bool ext_certified(const ResolutionData& r, const WindowedComplex& n, const Bidegree& b, int band);

/// Rank of H(f) : H_b(X) -> H_b(Y) from the chain map's matrix at b.
std::size_t induced_rank(const PrimeField& f, const Matrix& map_b, const Matrix& dx_out, const Matrix& dy_in);

struct EngineOptions {
  std::filesystem::path cache_dir;  // empty: no cache
  int band = 0;                     // 0: twice the largest generator internal degree
  std::optional<int> depth;         // resolution depth override
  /// Called on every resolution the engine builds or loads (e.g. to run
  /// verify_resolution on all of them); must be thread-safe.
  std::function<void(const ResolutionData&)> on_resolution;
};

int default_band(const Algebra& a);

struct ExtTable {
  DimTable table;
  std::string source, target;
  std::shared_ptr<const ResolutionData> resolution;
};

/// Resolution depth that makes ext_table(M, N) exact on w when N is bounded
/// above, otherwise a depth past the band heuristic's reach.
int ext_depth(const WindowedComplex& m, const WindowedComplex& n, const Window& w, int band);

ExtTable ext_table(const WindowedComplex& m, const WindowedComplex& n, const Window& w, const EngineOptions& opt = {});

struct StabilizedColimit {
  DimTable table;
  std::map<Bidegree, int> stabilized_at;
  std::vector<Bidegree> unstable;
  std::vector<std::string> warnings;

  std::string stabilized_csv() const;
  std::string warnings_text() const;
};

/// A directed system X_{d_min} -> X_{d_min+1} -> ... of complexes.
struct DirectedSystem {
  int d_min = 1, d_max = 1;
  std::function<WindowedComplex(int d)> level;
  /// X_d -> X_{d+1} at b.
  std::function<Matrix(int d, const Bidegree& b)> transition;
  /// Whether entry b of level d is certified (unset: all are).
  std::function<bool(int d, const Bidegree& b)> certified;
  /// Earliest level at which b may be declared stable (unset: d_min).
  /// Colimits that start out zero and only later see a bidegree would
  /// otherwise look stable on the leading zeros.
  std::function<int(const Bidegree& b)> floor;
};

/// Per-bidegree colimit: stable at d when dims agree at d, d+1, d+2 and the
/// transitions at d and d+1 have full rank; then re-checked for three more
/// steps.  Anything not settled by d_max is left as a hole.
StabilizedColimit stabilize(const DirectedSystem& sys, const Window& w);

/// Default truncation range for colimits on w into a target whose
/// internal support starts at `lo`.
int default_d_max(const Algebra& a, const Window& w, std::optional<int> lo);

/// colim_d Ext(X_d, N) for an inverse system of modules X_d with maps
/// X_{d+1} -> X_d.
StabilizedColimit ext_colimit(const std::function<WindowedComplex(int)>& x, const std::function<ChainMapFn(int)>& map,
                              const WindowedComplex& n, const Window& w, int d_min, int d_max,
                              const EngineOptions& opt = {});

/// H_m(M) = colim_d Ext(A / A_{>=d}, M).
StabilizedColimit local_cohomology_colim(const WindowedComplex& m, const Window& w, const EngineOptions& opt = {},
                                         std::optional<int> d_max = std::nullopt);

/// Stable Koszul (Cech) complex on the even cohomological-degree-0 algebra
/// generators: colim_n of the Koszul complex on x_1^n, ..., x_r^n.
StabilizedColimit local_cohomology_cech(const WindowedComplex& m, const Window& w,
                                        std::optional<int> n_max = std::nullopt,
                                        std::optional<std::vector<std::size_t>> sequence = std::nullopt);
/// The Koszul complex K(x_1^n, ..., x_r^n; M) on w.
WindowedComplex koszul_power_complex(const WindowedComplex& m, const std::vector<std::size_t>& seq, int n,
                                     const Window& w);
/// Generators used by local_cohomology_cech.
std::vector<std::size_t> cech_sequence(const Algebra& a);

/// RGamma_*(M~) = colim_d Ext(A_{>=d}, M), internal-degree columns.
StabilizedColimit derived_global_sections(const WindowedComplex& m, const Window& w, const EngineOptions& opt = {},
                                          std::optional<int> d_max = std::nullopt);

/// Ext(M~, N~) = colim_d Ext(M_{>=d}, N).
StabilizedColimit ext_qgr(const WindowedComplex& m, const WindowedComplex& n, const Window& w,
                          const EngineOptions& opt = {}, std::optional<int> d_max = std::nullopt);

/// Consistency of H_m(M) -> H(M) -> H(RGamma_*) -> along each internal
/// degree: every stretch of certified entries bounded by zeros must have
/// alternating sum zero, and no entry may exceed the sum of its neighbours.
/// Returns the offending bidegrees.
std::vector<Bidegree> triangle_check(const DimTable& torsion, const DimTable& h, const DimTable& sections);

}  // namespace dgcoh
