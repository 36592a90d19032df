#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgcoh/dgmodule.hpp"

namespace dgcoh {

/// Minimal semifree resolution phi : F -> M, complete through internal degree
/// `depth` (F has every generator of internal degree <= depth; phi is a
/// quasi-isomorphism in those internal degrees).
struct ResolutionData {
  std::shared_ptr<const Algebra> algebra;
  WindowedComplex target;
  std::vector<GeneratorSpec> generators;  // weakly increasing internal degree
  /// d(g_t) = sum_s g_s * c_st, c_st in A at deg g_t + (0,1) - deg g_s.
  std::vector<std::vector<std::pair<std::size_t, Vec>>> diff;
  /// phi(g_t) in M at deg g_t.
  std::vector<Vec> phi;
  int start = 0;  // lowest internal degree examined
  int depth = 0;  // complete through this internal degree
  bool bounded_below = true;  // false if the target had no proven lower bound

  /// Largest generator internal degree, if any.
  std::optional<int> top_generator_degree() const;
  /// True when no generator has internal degree in (depth - band, depth].
  bool band_clear(int band) const;

  /// F as a presented module (no relations).
  PresentedDgModule presentation() const;
  /// F compiled on internal degrees [start, depth] (known zero below start).
  WindowedComplex free_complex() const;
  /// phi : F_b -> M_b.
  Matrix comparison(const WindowedComplex& f, const Bidegree& b) const;
};

/// Cone-killing construction by increasing internal degree, from the proven
/// lower support bound of M (or the window's lower edge) through w.i_max.
/// Throws WindowTooSmall when M is not available at a needed internal degree.
ResolutionData semifree_resolution(const WindowedComplex& m, const Window& w);

struct ResolutionReport {
  std::vector<Violation> violations;
  bool minimal = true;
  bool quasi_iso = true;
  bool d_squared_zero = true;
  bool ok() const { return violations.empty(); }
};

/// Independent re-check: d^2 = 0, phi a chain map, minimality (no unit
/// coefficients), acyclic cone in every internal degree through depth.
ResolutionReport verify_resolution(const ResolutionData& r);

/// Generator-wise lift of a chain map f : M -> M' to psi : F -> G together
/// with a homotopy h : F -> M' (degree -1) such that
/// phi_G psi - f phi_F = d h + h d.
struct ChainMapLift {
  /// psi(g_t) = sum_s g'_s * c_st
  std::vector<std::vector<std::pair<std::size_t, Vec>>> psi;
  std::vector<Vec> homotopy;  // h(g_t) in M' at deg g_t - (0,1)
};
ChainMapLift lift_chain_map(const ResolutionData& from, const ResolutionData& to, const ChainMapFn& f);

/// Resolution with an on-disk cache keyed by the SHA-256 of the target's
/// canonical dump (algebra, data through the depth).  `cache_dir` empty:
/// no caching.
ResolutionData cached_resolution(const WindowedComplex& m, const Window& w, const std::filesystem::path& cache_dir);

/// Canonical text of the target through `depth` (what the cache key hashes).
std::string canonical_dump(const WindowedComplex& m, int start, int depth);
std::string sha256_hex(const std::string& data);

/// Cache file text: module lines of F, phi lines, manifest line.
std::string serialize_resolution(const ResolutionData& r, const std::string& hash);
/// Inverse of serialize_resolution (target supplied by the caller).
ResolutionData deserialize_resolution(const std::string& text, const WindowedComplex& target, std::string* hash = nullptr);

}  // namespace dgcoh
