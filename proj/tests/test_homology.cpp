#include "doctest.h"
#include "dgcoh/homology.hpp"

using namespace dgcoh;

namespace {

std::shared_ptr<const Algebra> poly_ring(int n) {
  return std::make_shared<Algebra>(polynomial_algebra(PrimeField(), std::vector<int>(n, 1)));
}

std::shared_ptr<const Algebra> koszul_x2() {
  PrimeField f;
  auto s = polynomial_algebra(f, {1});
  FreeAlgebra fs(f, s.generators);
  return std::make_shared<Algebra>(koszul_algebra(s, {fs.monomial({2}, f.one())}));
}

std::map<Bidegree, int> entries(const DimTable& t) { return t.nonzero(); }

}  // namespace

TEST_CASE("Ext over k[x] from the Koszul resolution") {
  auto a = poly_ring(1);
  Window w(-4, 4, -3, 3);
  auto k = residue_field(a, w), A = free_module(a, w);
  auto ka = ext_table(k, A, w);
  CHECK(ka.table.holes().empty());
  CHECK(entries(ka.table) == std::map<Bidegree, int>{{{-1, 1}, 1}});
  auto kk = ext_table(k, k, w);
  CHECK(entries(kk.table) == std::map<Bidegree, int>{{{-1, 1}, 1}, {{0, 0}, 1}});
}

TEST_CASE("Ext(A, N) = H(N)") {
  auto a = koszul_x2();
  Window w(-3, 6, -3, 2);
  auto A = free_module(a, w);
  for (const auto& n : {A, residue_field(a, w), truncate_lt(A, 4), shift_twist(A, {-2, 1})}) {
    auto e = ext_table(A, n, w);
    CHECK(e.table.holes().empty());
    CHECK(e.table == cohomology(n, w).table);
  }
}

TEST_CASE("Hom complexes are dg-modules") {
  auto a = koszul_x2();
  Window w(-3, 3, -4, 2);
  auto k = residue_field(a, Window(0, 6, -7, 1));
  auto r = std::make_shared<const ResolutionData>(semifree_resolution(k, Window(0, 6, -7, 1)));
  for (const auto& n : {free_module(a, w), truncate_lt(free_module(a, w), 3)}) {
    auto hom = hom_complex(r, n, w);
    CHECK(check_module(hom).ok());
  }
  auto e = std::make_shared<Algebra>(exterior_algebra(PrimeField(), {{1, 0}, {2, -1}}));
  auto ke = residue_field(e, Window(0, 6, -7, 1));
  auto re = std::make_shared<const ResolutionData>(semifree_resolution(ke, Window(0, 6, -7, 1)));
  auto hom = hom_complex(re, free_module(e, w), w);
  CHECK(check_module(hom).ok());
}

TEST_CASE("Ext(k, A) over polynomial rings is k(c)[-c]") {
  for (int c = 1; c <= 3; ++c) {
    auto a = poly_ring(c);
    Window w(-5, 2, -1, 4);
    auto e = ext_table(residue_field(a, w), free_module(a, w), w);
    CHECK(e.table.holes().empty());
    CHECK(entries(e.table) == std::map<Bidegree, int>{{{-c, c}, 1}});
  }
}

TEST_CASE("Ext over the Koszul dg-algebra matches k[x]/(x^2)") {
  Window w(-6, 3, -2, 6);
  auto kz = koszul_x2();
  auto ring = std::make_shared<Algebra>(truncation(polynomial_algebra(PrimeField(), {1}), 2));
  auto e1 = ext_table(residue_field(kz, w), free_module(kz, w), w);
  auto e2 = ext_table(residue_field(ring, w), free_module(ring, w), w);
  CHECK(e1.table.holes().empty());
  CHECK(e2.table.holes().empty());
  CHECK(e1.table == e2.table);
  CHECK(entries(e1.table) == std::map<Bidegree, int>{{{1, 0}, 1}});
  auto k1 = ext_table(residue_field(kz, w), residue_field(kz, w), w);
  auto k2 = ext_table(residue_field(ring, w), residue_field(ring, w), w);
  CHECK(k1.table == k2.table);
  for (int t = 0; t <= 6; ++t) CHECK(k1.table.at({-t, t}) == 1);
}

TEST_CASE("induced_rank on a projection") {
  PrimeField f;
  // X = Y = k^2 with zero differential, map = diag(1,0)
  Matrix zero_out(0, 2), zero_in(2, 0);
  CHECK(induced_rank(f, from_dense(f, {{1, 0}, {0, 0}}), zero_out, zero_in) == 1);
  // the image lands in the boundaries of Y
  CHECK(induced_rank(f, from_dense(f, {{1, 0}, {0, 0}}), zero_out, from_dense(f, {{1}, {0}})) == 0);
}

TEST_CASE("local cohomology of k[x]: both pipelines") {
  auto a = poly_ring(1);
  Window w(-6, 4, -2, 3);
  auto A = free_module(a, w);
  auto colim = local_cohomology_colim(A, w);
  auto cech = local_cohomology_cech(A, w);
  CHECK(colim.unstable.empty());
  CHECK(cech.unstable.empty());
  std::map<Bidegree, int> expect;
  for (int i = -6; i <= -1; ++i) expect[{i, 1}] = 1;
  CHECK(entries(colim.table) == expect);
  CHECK(colim.table == cech.table);
  auto k = residue_field(a, w);
  CHECK(entries(local_cohomology_colim(k, w).table) == std::map<Bidegree, int>{{{0, 0}, 1}});
  CHECK(entries(local_cohomology_cech(k, w).table) == std::map<Bidegree, int>{{{0, 0}, 1}});
}

TEST_CASE("local cohomology of k[x,y]") {
  auto a = poly_ring(2);
  Window w(-6, 3, -1, 3);
  auto A = free_module(a, w);
  auto colim = local_cohomology_colim(A, w);
  auto cech = local_cohomology_cech(A, w);
  std::map<Bidegree, int> expect;
  for (int i = -6; i <= -2; ++i) expect[{i, 2}] = -i - 1;
  CHECK(entries(cech.table) == expect);
  CHECK(entries(colim.table) == expect);
  CHECK(colim.unstable.empty());
}

TEST_CASE("finite-dimensional cohomology is all torsion") {
  auto a = std::make_shared<Algebra>(exterior_algebra(PrimeField(), {{1, 0}}));
  Window w(-4, 4, -2, 2);
  auto A = free_module(a, w);
  CHECK(local_cohomology_colim(A, w).table == cohomology(A, w).table);
  CHECK(local_cohomology_cech(A, w).table == cohomology(A, w).table);
  auto g = derived_global_sections(A, w);
  CHECK(g.unstable.empty());
  CHECK(g.table.nonzero().empty());
}

TEST_CASE("derived global sections on P^1") {
  auto a = poly_ring(2);
  Window w(-5, 5, -1, 2);
  auto A = free_module(a, w);
  auto g = derived_global_sections(A, w);
  CHECK(g.unstable.empty());
  for (int l = -5; l <= 5; ++l) {
    CHECK(g.table.at({l, 0}) == std::max(l + 1, 0));
    CHECK(g.table.at({l, 1}) == std::max(-l - 1, 0));
    CHECK(g.table.at({l, 2}) == 0);
  }
  auto tors = local_cohomology_cech(A, w);
  CHECK(triangle_check(tors.table, cohomology(A, w).table, g.table).empty());
}

TEST_CASE("Ext in the quotient category") {
  auto a = poly_ring(1);
  Window w(-3, 3, -1, 2);
  auto A = free_module(a, w);
  auto e = ext_qgr(A, A, w);
  CHECK(e.unstable.empty());
  // Proj k[x] is a point and O(l) = O
  for (int l = -3; l <= 3; ++l) {
    CHECK(e.table.at({l, 0}) == 1);
    CHECK(e.table.at({l, 1}) == 0);
  }
}
