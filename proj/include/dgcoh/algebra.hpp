#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dgcoh/bigraded.hpp"
#include "dgcoh/field.hpp"
#include "dgcoh/linalg.hpp"

namespace dgcoh {

using Scalar = PrimeField::Elem;
using Vec = SparseVec<Scalar>;
using Matrix = SparseMatrix<Scalar>;

enum class Parity { even, odd };

struct GeneratorSpec {
  std::string name;
  Bidegree bidegree;
  Parity parity = Parity::even;
};

inline Parity parity_of(int cohomological) { return (cohomological % 2 == 0) ? Parity::even : Parity::odd; }

/// Exponent vector over the algebra generators, in declaration order.
using Exponents = std::vector<int>;

/// Element of the free graded-commutative algebra on a generator list.
using Polynomial = std::map<Exponents, Scalar>;

/// Multiplication and Leibniz differentiation in the free graded-commutative
/// algebra k<x_1..x_n>/(graded commutativity).  Normal-form monomials list
/// generators in declaration order; odd generators occur at most once.
class FreeAlgebra {
 public:
  FreeAlgebra(PrimeField field, std::vector<GeneratorSpec> gens);

  const PrimeField& field() const { return field_; }
  const std::vector<GeneratorSpec>& generators() const { return gens_; }
  std::size_t num_generators() const { return gens_.size(); }

  Exponents unit() const { return Exponents(gens_.size(), 0); }
  Exponents generator(std::size_t g) const;
  Bidegree degree(const Exponents& m) const;

  /// Product of two normal-form monomials: nullopt when it vanishes (repeated odd
  /// generator), otherwise the product monomial and the Koszul sign (+1/-1).
  std::optional<std::pair<Exponents, int>> multiply(const Exponents& a, const Exponents& b) const;

  Polynomial multiply(const Polynomial& a, const Polynomial& b) const;
  void add_to(Polynomial& acc, const Polynomial& p, Scalar scale) const;
  Polynomial monomial(const Exponents& m, Scalar c) const { return c ? Polynomial{{m, c}} : Polynomial{}; }

  /// Homogeneity check; returns the common bidegree or nullopt.
  std::optional<Bidegree> homogeneous_degree(const Polynomial& p) const;

  /// Leibniz extension of the generator differentials to a monomial.
  Polynomial differentiate(const Exponents& m, const std::vector<Polynomial>& gen_diffs) const;
  Polynomial differentiate(const Polynomial& p, const std::vector<Polynomial>& gen_diffs) const;

  /// All normal-form monomials of the given internal degree, grouped by cohomological degree.
  /// Every generator must have internal degree >= 1.
  std::map<int, std::vector<Exponents>> monomials_of_internal_degree(int internal) const;

  std::string format(const Exponents& m) const;
  std::string format(const Polynomial& p) const;

 private:
  PrimeField field_;
  std::vector<GeneratorSpec> gens_;
};

/// A connected graded-commutative dg-algebra given by generators, homogeneous
/// relations and the differential on generators.
struct DgAlgebraPresentation {
  PrimeField field;
  std::vector<GeneratorSpec> generators;
  std::vector<Polynomial> relations;
  std::vector<Polynomial> differential;  // one per generator; empty = 0

  std::optional<std::size_t> find_generator(const std::string& name) const;
  std::string to_text() const;  // canonical algebra-file rendering
};

/// Basis of A_b: normal-form representatives of the quotient of the free span
/// by the relation-ideal span in bidegree b.
struct BidegreeBasis {
  Bidegree bidegree;
  std::vector<Exponents> free_monomials;      // descending lexicographic
  std::vector<std::size_t> representatives;   // indices into free_monomials
  std::vector<Vec> normal_form;               // free index -> coordinates in representatives
  std::map<Exponents, std::size_t> free_index;

  std::size_t dim() const { return representatives.size(); }
  const Exponents& monomial(std::size_t k) const { return free_monomials[representatives[k]]; }
};

struct Violation {
  std::string what;
  Bidegree where;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Compiled, memoized linearization of a presentation.  Thread-safe.
class Algebra {
 public:
  explicit Algebra(DgAlgebraPresentation presentation);

  const DgAlgebraPresentation& presentation() const { return pres_; }
  const FreeAlgebra& free() const { return free_; }
  const PrimeField& field() const { return pres_.field; }
  std::size_t num_generators() const { return pres_.generators.size(); }
  const GeneratorSpec& generator(std::size_t g) const { return pres_.generators[g]; }
  int max_generator_internal_degree() const;

  std::shared_ptr<const BidegreeBasis> basis(const Bidegree& b) const;
  std::size_t dim(const Bidegree& b) const { return basis(b)->dim(); }
  /// Cohomological degrees with nonzero A_{internal}^j.
  std::vector<int> support_column(int internal) const;

  Vec normal_form(const Polynomial& p, const Bidegree& b) const;
  Polynomial to_polynomial(const Bidegree& b, const Vec& v) const;

  /// Product of normal-form vectors x in A_bx and y in A_by.
  Vec multiply(const Bidegree& bx, const Vec& x, const Bidegree& by, const Vec& y) const;

  /// Left multiplication g * (-) : A_b -> A_{b + deg g}.
  Matrix mult_matrix(std::size_t g, const Bidegree& b) const;
  /// Right multiplication (-) * g : A_b -> A_{b + deg g}.
  Matrix right_mult_matrix(std::size_t g, const Bidegree& b) const;
  /// Right multiplication by an arbitrary element c of A_{bc}.
  Matrix right_mult_matrix(const Bidegree& bc, const Vec& c, const Bidegree& b) const;
  /// Differential A_b -> A_{b + (0,1)}.
  Matrix diff_matrix(const Bidegree& b) const;

  /// Differential of a normal-form vector.
  Vec differentiate(const Bidegree& b, const Vec& v) const;

 private:
  Polynomial free_diff(const Exponents& m) const;

  DgAlgebraPresentation pres_;
  FreeAlgebra free_;
  mutable std::mutex mu_;
  mutable std::map<Bidegree, std::shared_ptr<const BidegreeBasis>> bases_;
  mutable std::map<int, std::map<int, std::vector<Exponents>>> free_by_internal_;
  mutable std::map<Exponents, Polynomial> diff_cache_;
};

/// Structural validation on the window: generator degrees, connectedness,
/// homogeneity of relations and differentials, d^2 = 0, d(ideal) in ideal,
/// Leibniz consistency.  Violations name the generator/monomial and bidegree.
ValidationReport check_dga(const Algebra& a, const Window& w);
ValidationReport check_presentation(const DgAlgebraPresentation& p);

// Builders ------------------------------------------------------------------

/// k[x_1..x_n] with the given internal degrees (cohomological degree 0).
DgAlgebraPresentation polynomial_algebra(PrimeField f, const std::vector<int>& internal_degrees,
                                         const std::vector<std::string>& names = {});
/// Exterior algebra on generators of the given bidegrees.  Generators of even
/// cohomological degree get the explicit relation e^2 = 0.
DgAlgebraPresentation exterior_algebra(PrimeField f, const std::vector<Bidegree>& degrees,
                                       const std::vector<std::string>& names = {});
/// S tensor Lambda(e_1..e_c) with e_i in (deg f_i, -1) and d e_i = f_i.
DgAlgebraPresentation koszul_algebra(const DgAlgebraPresentation& s, const std::vector<Polynomial>& forms);
/// A / A_{>=d} (relations: every monomial of internal degree in [d, d + maxdeg)).
DgAlgebraPresentation truncation(const DgAlgebraPresentation& a, int d);
/// B ⋉ Hom_k(B,k)(-a) for a finite-dimensional B with zero differential in
/// cohomological degree 0; requires a larger than the top degree of B.
DgAlgebraPresentation trivial_extension(const DgAlgebraPresentation& b, int a);

}  // namespace dgcoh
