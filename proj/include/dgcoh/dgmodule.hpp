#pragma once

// Right dg-modules over a compiled Algebra.  Every internal-degree column of
// the objects handled here is finite-dimensional (algebra generators have
// internal degree >= 1 and cohomological degree <= 0), so a module is served
// column by column from a ModuleSource.  A WindowedComplex restricts access to
// a window of internal degrees and records what is known about the support.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dgcoh/algebra.hpp"
#include "dgcoh/bigraded.hpp"

namespace dgcoh {

/// Per-bidegree data of a right dg-A-module.
class ModuleSource {
 public:
  virtual ~ModuleSource() = default;
  virtual std::size_t dim(const Bidegree& b) const = 0;
  /// Cohomological degrees j with nonzero M_i^j, ascending.
  virtual std::vector<int> support(int internal) const = 0;
  /// d : M_b -> M_{b+(0,1)}.
  virtual Matrix diff(const Bidegree& b) const = 0;
  /// Right action of algebra generator g : M_b -> M_{b + deg g}.
  virtual Matrix act(std::size_t g, const Bidegree& b) const = 0;
};

/// Memoizing wrapper; thread-safe.
class CachedSource : public ModuleSource {
 public:
  explicit CachedSource(std::shared_ptr<const ModuleSource> inner) : inner_(std::move(inner)) {}
  std::size_t dim(const Bidegree& b) const override;
  std::vector<int> support(int internal) const override;
  Matrix diff(const Bidegree& b) const override;
  Matrix act(std::size_t g, const Bidegree& b) const override;

 private:
  std::shared_ptr<const ModuleSource> inner_;
  mutable std::mutex mu_;
  mutable std::map<Bidegree, std::size_t> dims_;
  mutable std::map<int, std::vector<int>> support_;
  mutable std::map<Bidegree, Matrix> diff_;
  mutable std::map<std::pair<std::size_t, Bidegree>, Matrix> act_;
};

class WindowedComplex {
 public:
  WindowedComplex() = default;
  /// `known_lo`/`known_hi`: proven bounds on the internal-degree support.
  WindowedComplex(std::shared_ptr<const Algebra> algebra, std::shared_ptr<const ModuleSource> source, Window window,
                  std::optional<int> known_lo, std::optional<int> known_hi, std::string label = {});

  const std::shared_ptr<const Algebra>& algebra() const { return algebra_; }
  const PrimeField& field() const { return algebra_->field(); }
  const Window& window() const { return window_; }
  std::optional<int> known_lo() const { return known_lo_; }
  std::optional<int> known_hi() const { return known_hi_; }
  const std::string& label() const { return label_; }
  const std::shared_ptr<const ModuleSource>& source() const { return source_; }

  /// True when internal degree i may be queried.
  bool available(int internal) const;
  /// True when M_i is known to vanish (outside the proven support bounds).
  bool known_zero(int internal) const;

  // Accessors throw OutOfWindow for internal degrees outside the window
  // unless the column is known to vanish.
  std::size_t dim(const Bidegree& b) const;
  std::vector<int> support(int internal) const;
  Matrix diff(const Bidegree& b) const;
  Matrix act(std::size_t g, const Bidegree& b) const;
  /// Right action of a normal-form algebra monomial / element.
  Matrix act_monomial(const Exponents& m, const Bidegree& b) const;
  Matrix act_element(const Bidegree& bc, const Vec& c, const Bidegree& b) const;

  /// Same module, different window (the source is exact everywhere).
  WindowedComplex with_window(const Window& w) const;
  WindowedComplex with_label(std::string label) const;

 private:
  void require(int internal) const;

  std::shared_ptr<const Algebra> algebra_;
  std::shared_ptr<const ModuleSource> source_;
  Window window_;
  std::optional<int> known_lo_, known_hi_;
  std::string label_;
};

// Presented modules --------------------------------------------------------

/// Element of a free module: generator index -> coefficient g * a.
using ModElement = std::map<std::size_t, Polynomial>;

struct PresentedDgModule {
  std::shared_ptr<const Algebra> algebra;
  std::vector<GeneratorSpec> generators;
  std::vector<ModElement> differential;  // one per generator
  std::vector<ModElement> relations;

  std::optional<std::size_t> find_generator(const std::string& name) const;
  std::optional<Bidegree> homogeneous_degree(const ModElement& e) const;
  std::string format(const ModElement& e) const;
  std::string to_text() const;  // module lines (modgen/moddiff/modrel)
};

/// Linearizes a presentation on the window.  Throws InputError on
/// non-homogeneous data, on d^2 != 0 and on relations not stable under d.
WindowedComplex compile(const PresentedDgModule& m, const Window& w);
/// Same linearization without the structural checks (trusted input, e.g. a
/// semifree module built by the engine); support bounds supplied by the caller.
WindowedComplex compile_unchecked(const PresentedDgModule& m, const Window& w, std::optional<int> known_lo,
                                  std::optional<int> known_hi);

/// Structural check on the window: d^2 = 0, Leibniz for every generator
/// action, graded commutativity of the action.  Returns violations.
ValidationReport check_module(const WindowedComplex& m);

// Cohomology ---------------------------------------------------------------

struct CohomologyTable {
  DimTable table;
  std::optional<int> sup() const { return table.sup(); }
  std::optional<int> inf() const { return table.inf(); }
};

/// dim ker - rank im on every bidegree of the window.
CohomologyTable cohomology(const WindowedComplex& m);
/// Same on an explicit window (internal range must be available).
CohomologyTable cohomology(const WindowedComplex& m, const Window& w);

/// Basis of Z^b / B^b: representative cycles, one per cohomology class.
std::vector<Vec> cohomology_representatives(const WindowedComplex& m, const Bidegree& b);

// Functor calculus ---------------------------------------------------------

/// M(twist)[shift]: spaces reindexed, differential times (-1)^shift.
WindowedComplex shift_twist(const WindowedComplex& m, const ShiftSpec& s);
/// Brutal truncation M_{>=d} in internal degree (a dg-submodule).
WindowedComplex truncate_ge(const WindowedComplex& m, int d);
/// Quotient M / M_{>=d}.
WindowedComplex truncate_lt(const WindowedComplex& m, int d);
/// Hom_k(M, k), (M*)_b = (M_{-b})*.
WindowedComplex k_dual(const WindowedComplex& m);
/// Smart truncations in cohomological degree: sigma^{>=n} is the quotient
/// M^n/B^n -> M^{n+1} -> ..., sigma^{<=n} the subcomplex ... -> M^{n-1} -> Z^n.
/// The action is induced where it is well defined (always when A is
/// concentrated in cohomological degree 0); otherwise EngineError.
WindowedComplex smart_truncate_ge(const WindowedComplex& m, int n);
WindowedComplex smart_truncate_le(const WindowedComplex& m, int n);

/// Mapping cone of a chain map given per bidegree (f(b) : M_b -> N_b).
/// cone^j = M^{j+1} + N^j, d(m, n) = (-d m, f m + d n).
using ChainMapFn = std::function<Matrix(const Bidegree&)>;
WindowedComplex cone(const WindowedComplex& m, const WindowedComplex& n, ChainMapFn f);

/// Standard objects over A on the window.
enum class StandardKind { residue_field, free, truncated, quotient };
WindowedComplex standard_object(std::shared_ptr<const Algebra> a, StandardKind kind, int d, const Window& w);
WindowedComplex free_module(std::shared_ptr<const Algebra> a, const Window& w);     // A
WindowedComplex residue_field(std::shared_ptr<const Algebra> a, const Window& w);   // k = A / A_{>=1}

/// Largest internal degree with A nonzero, if A is finite-dimensional
/// (searched up to `limit`).
std::optional<int> algebra_top_degree(const Algebra& a, int limit = 256);

}  // namespace dgcoh
