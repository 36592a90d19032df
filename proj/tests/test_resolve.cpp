#include <filesystem>

#include "doctest.h"
#include "dgcoh/resolve.hpp"

using namespace dgcoh;

namespace {

std::shared_ptr<const Algebra> poly_ring(int n) {
  return std::make_shared<Algebra>(polynomial_algebra(PrimeField(), std::vector<int>(n, 1)));
}

std::map<Bidegree, int> census(const ResolutionData& r) {
  std::map<Bidegree, int> c;
  for (const auto& g : r.generators) ++c[g.bidegree];
  return c;
}

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("resolution of A is A") {
  auto a = poly_ring(2);
  auto r = semifree_resolution(free_module(a, Window(0, 6, -3, 1)), Window(0, 6, -3, 1));
  REQUIRE(r.generators.size() == 1);
  CHECK(r.generators[0].bidegree == Bidegree{0, 0});
  CHECK(verify_resolution(r).ok());
}

TEST_CASE("resolution of k over k[x] is the Koszul complex") {
  auto a = poly_ring(1);
  auto k = residue_field(a, Window(0, 6, -3, 1));
  auto r = semifree_resolution(k, Window(0, 6, -3, 1));
  REQUIRE(r.generators.size() == 2);
  CHECK(r.generators[0].bidegree == Bidegree{0, 0});
  CHECK(r.generators[1].bidegree == Bidegree{1, -1});
  REQUIRE(r.diff[1].size() == 1);
  CHECK(r.diff[1][0].first == 0);
  CHECK(r.diff[1][0].second.size() == 1);  // a nonzero multiple of x
  CHECK(verify_resolution(r).ok());
}

TEST_CASE("Betti numbers of k over k[x1..x3] are binomial") {
  auto a = poly_ring(3);
  auto k = residue_field(a, Window(0, 7, -4, 1));
  auto r = semifree_resolution(k, Window(0, 7, -4, 1));
  auto c = census(r);
  for (int t = 0; t <= 3; ++t) CHECK(c[{t, -t}] == static_cast<int>(binom(3, t)));
  CHECK(r.generators.size() == 8);
  CHECK(verify_resolution(r).ok());
}

TEST_CASE("k over Lambda(e) with e in degree (1,0) needs a generator in every degree") {
  auto a = std::make_shared<Algebra>(exterior_algebra(PrimeField(), {{1, 0}}));
  for (int depth : {5, 8}) {
    auto k = residue_field(a, Window(0, depth, -depth - 1, 1));
    auto r = semifree_resolution(k, Window(0, depth, -depth - 1, 1));
    REQUIRE(r.generators.size() == static_cast<std::size_t>(depth + 1));
    for (int t = 0; t <= depth; ++t) CHECK(r.generators[t].bidegree == Bidegree{t, -t});
    CHECK(verify_resolution(r).ok());
  }
}

TEST_CASE("resolution over the Koszul dg-algebra k[x] x Lambda(e), de = x^2") {
  PrimeField f;
  auto s = polynomial_algebra(f, {1});
  FreeAlgebra fs(f, s.generators);
  auto a = std::make_shared<Algebra>(koszul_algebra(s, {fs.monomial({2}, f.one())}));
  auto k = residue_field(a, Window(0, 8, -9, 1));
  auto r = semifree_resolution(k, Window(0, 8, -9, 1));
  CHECK(verify_resolution(r).ok());
  // quasi-isomorphic to k[x]/(x^2): one generator at (t,-t) for every t
  for (int t = 0; t <= 8; ++t) CHECK(census(r)[{t, -t}] == 1);
}

TEST_CASE("truncated modules have no generators below the truncation degree") {
  auto a = poly_ring(2);
  auto m = truncate_ge(free_module(a, Window(0, 8, -3, 1)), 3);
  auto r = semifree_resolution(m, Window(0, 8, -3, 1));
  for (const auto& g : r.generators) CHECK(g.bidegree.internal >= 3);
  CHECK(census(r)[{3, 0}] == 4);
  CHECK(census(r)[{4, -1}] == 3);
  CHECK(verify_resolution(r).ok());
}

TEST_CASE("verify_resolution flags corruption and non-minimality") {
  auto a = poly_ring(1);
  auto k = residue_field(a, Window(0, 5, -3, 1));
  auto r = semifree_resolution(k, Window(0, 5, -3, 1));

  auto bad = r;
  bad.diff[1].clear();  // d g1 = 0: cone no longer acyclic
  auto rep = verify_resolution(bad);
  CHECK_FALSE(rep.quasi_iso);

  // redundant pair u -> v with unit coefficient: still a resolution, not minimal
  auto nm = r;
  const PrimeField& f = a->field();
  nm.generators.push_back({"u", {2, -1}, Parity::odd});
  nm.diff.push_back({});
  nm.phi.push_back({});
  nm.generators.push_back({"v", {2, -2}, Parity::even});
  nm.diff.push_back({{2, {{0, f.one()}}}});
  nm.phi.push_back({});
  auto rep2 = verify_resolution(nm);
  CHECK_FALSE(rep2.minimal);
  CHECK(rep2.quasi_iso);
  CHECK(rep2.d_squared_zero);

  // d^2 != 0: w with d w = x * g1 and g1 not a cycle
  auto sq = r;
  sq.generators.push_back({"w", {2, -2}, Parity::even});
  sq.diff.push_back({{1, {{0, f.one()}}}});
  sq.phi.push_back({});
  CHECK_FALSE(verify_resolution(sq).d_squared_zero);
}

TEST_CASE("cached resolutions round-trip") {
  auto a = poly_ring(2);
  auto k = residue_field(a, Window(0, 6, -3, 1));
  auto dir = std::filesystem::temp_directory_path() / "dgcoh_cache_test";
  std::filesystem::remove_all(dir);
  auto cold = cached_resolution(k, Window(0, 6, -3, 1), dir);
  auto warm = cached_resolution(k, Window(0, 6, -3, 1), dir);
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 1);
  REQUIRE(cold.generators.size() == warm.generators.size());
  for (std::size_t t = 0; t < cold.generators.size(); ++t) {
    CHECK(cold.generators[t].bidegree == warm.generators[t].bidegree);
    CHECK(cold.diff[t] == warm.diff[t]);
    CHECK(cold.phi[t] == warm.phi[t]);
  }
  CHECK(verify_resolution(warm).ok());
  std::filesystem::remove_all(dir);
}

TEST_CASE("lifted chain maps commute with differentials up to the recorded homotopy") {
  auto a = poly_ring(2);
  const PrimeField& f = a->field();
  Window w(0, 7, -4, 1);
  auto big = truncate_lt(free_module(a, w), 3);    // A / A>=3
  auto small = truncate_lt(free_module(a, w), 2);  // A / A>=2
  auto rf = semifree_resolution(big, w), rg = semifree_resolution(small, w);
  ChainMapFn proj = [&](const Bidegree& b) {
    return b.internal < 2 ? identity_matrix(f, small.dim(b)) : Matrix(small.dim(b), big.dim(b));
  };
  auto lift = lift_chain_map(rf, rg, proj);
  REQUIRE(lift.psi.size() == rf.generators.size());
  // psi lands in the right degree and phi_G psi(g) - f phi_F(g) - h(dg) is a boundary d h(g)
  auto G = rg.free_complex();
  for (std::size_t t = 0; t < rf.generators.size(); ++t) {
    const Bidegree b = rf.generators[t].bidegree;
    for (const auto& [s, c] : lift.psi[t]) CHECK(rg.generators[s].bidegree.internal <= b.internal);
    CHECK(lift.homotopy[t].size() <= small.dim(b - Bidegree{0, 1}));
  }
}
