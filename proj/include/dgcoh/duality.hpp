#pragma once

// Duality statements as dimension-table identities on certified windows.

#include <string>
#include <vector>

#include "dgcoh/homology.hpp"

namespace dgcoh {

struct GorensteinCertificate {
  bool gorenstein_in_window = false;
  int a = 0, n = 0;
  ExtTable evidence;  // Ext_A(k, A)
};

/// Ext_A(k, A) on w; Gorenstein iff it is certified and has a single
/// nonzero entry, of dimension 1, at (-a, n).
GorensteinCertificate gorenstein_detect(std::shared_ptr<const Algebra> a, const Window& w,
                                        const EngineOptions& opt = {});

/// R = A(-a)[n].  Throws EngineError when the certificate is negative.
WindowedComplex dualizing_module(std::shared_ptr<const Algebra> a, const GorensteinCertificate& cert,
                                 const Window& w);

enum class Theorem { local, serre, balanced, reflexive, chi, vanishing, finiteness };
std::string theorem_name(Theorem t);

struct Mismatch {
  Bidegree at;
  int lhs = 0, rhs = 0;
  std::string what;
};

struct DualityReport {
  Theorem theorem = Theorem::local;
  Window window;
  std::vector<Mismatch> mismatches;
  std::vector<Bidegree> unstable;
  std::vector<std::string> notes;
  std::size_t compared = 0;  // entries compared on the certified window
  bool attained = false;     // vanishing: both ends of the range occur

  bool passed() const { return mismatches.empty() && compared > 0; }
  /// "PASS <theorem> window=... compared=... mismatches=... unstable=..."
  std::string summary() const;
  std::string mismatches_csv() const;
  std::string text() const;
};

/// H_m(R) by both pipelines against Hom_k(A, k).
DualityReport balanced_check(std::shared_ptr<const Algebra> a, const WindowedComplex& r, const Window& w,
                             const EngineOptions& opt = {});

/// Ext(Ext(M, R), R) against H(M).  Needs a bounded-below RHom(M, R).
DualityReport reflexivity_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                const EngineOptions& opt = {});

/// dim H^j_m(M)_i against dim Ext^{-j}(M, R)_{-i}.
DualityReport local_duality_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                  const EngineOptions& opt = {});

/// dim R^jGamma(M(l)~) against dim Ext^{-j-1}(M~, R~)_{-l} for l in
/// [twist_lo, twist_hi] and j in w, plus the finite form
/// Ext^{-j-1}(M_{>=d}, R)_{-l} at d = l+1 and l+2.
DualityReport serre_duality_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w, int twist_lo,
                                  int twist_hi, const EngineOptions& opt = {});

/// Ext^j(k, M) vanishes in the top band of internal degrees of w.
DualityReport condition_chi_check(std::shared_ptr<const Algebra> a, const WindowedComplex& m, const Window& w,
                                  const EngineOptions& opt = {});

/// R^jGamma(M(l)~) = 0 unless inf(M) <= j <= sup(M) - inf(R) - 1.
DualityReport vanishing_range_check(const WindowedComplex& m, const WindowedComplex& r, const Window& w,
                                    const EngineOptions& opt = {});

/// Every H^j RGamma_*(M)_l with l >= i0 stabilizes, and equals H^j(M)_l
/// wherever H^j_m and H^{j+1}_m vanish.
DualityReport finiteness_check(const WindowedComplex& m, int i0, const Window& w, const EngineOptions& opt = {});

}  // namespace dgcoh
