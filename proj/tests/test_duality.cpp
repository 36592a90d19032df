#include "doctest.h"
#include "dgcoh/duality.hpp"

using namespace dgcoh;

namespace {

std::shared_ptr<const Algebra> poly_ring(int n) {
  return std::make_shared<Algebra>(polynomial_algebra(PrimeField(), std::vector<int>(n, 1)));
}

std::shared_ptr<const Algebra> lambda_e() {
  return std::make_shared<Algebra>(exterior_algebra(PrimeField(), {{1, 0}}));
}

}  // namespace

TEST_CASE("Gorenstein parameters") {
  Window w(-5, 3, -2, 5);
  for (int c = 1; c <= 3; ++c) {
    auto cert = gorenstein_detect(poly_ring(c), w);
    CHECK(cert.gorenstein_in_window);
    CHECK(cert.a == c);
    CHECK(cert.n == c);
  }
  auto cert = gorenstein_detect(lambda_e(), w);
  CHECK(cert.gorenstein_in_window);
  CHECK(cert.a == -1);
  CHECK(cert.n == 0);
  // k[x,y]/(x^2, xy) has a two-dimensional socle
  PrimeField f;
  auto p = polynomial_algebra(f, {1, 1});
  FreeAlgebra fa(f, p.generators);
  p.relations = {fa.monomial({2, 0}, f.one()), fa.monomial({1, 1}, f.one())};
  auto bad = gorenstein_detect(std::make_shared<Algebra>(p), w);
  CHECK_FALSE(bad.gorenstein_in_window);
}

TEST_CASE("balanced checks and the wrong-twist control") {
  Window w(-6, 4, -3, 3);
  auto a = poly_ring(1);
  auto cert = gorenstein_detect(a, w);
  auto r = dualizing_module(a, cert, w);
  auto ok = balanced_check(a, r, w);
  CHECK(ok.passed());
  auto wrong = balanced_check(a, shift_twist(free_module(a, w), {0, 1}), w);
  CHECK_FALSE(wrong.passed());
  auto l = lambda_e();
  auto rl = dualizing_module(l, gorenstein_detect(l, w), w);
  CHECK(balanced_check(l, rl, w).passed());
}

TEST_CASE("local duality over k[x,y]") {
  Window w(-5, 5, -3, 3);
  auto a = poly_ring(2);
  auto r = shift_twist(free_module(a, w), {-2, 2});
  for (const auto& m : {free_module(a, w), residue_field(a, w), shift_twist(free_module(a, w), {-2, 0})}) {
    auto rep = local_duality_check(m, r, w);
    INFO(rep.text());
    CHECK(rep.passed());
    CHECK(rep.unstable.empty());
  }
}

TEST_CASE("Serre duality on P^1") {
  Window w(-5, 5, -2, 3);
  auto a = poly_ring(2);
  auto A = free_module(a, w);
  auto rep = serre_duality_check(A, shift_twist(A, {-2, 2}), w, -5, 5);
  INFO(rep.text());
  CHECK(rep.passed());
  CHECK(rep.unstable.empty());
  auto wrong = serre_duality_check(A, shift_twist(A, {0, 2}), w, -3, 3);
  CHECK_FALSE(wrong.passed());
}

TEST_CASE("vanishing range, condition chi, finiteness, reflexivity") {
  Window w(-5, 5, -2, 6);
  auto a = poly_ring(2);
  auto A = free_module(a, w);
  auto r = shift_twist(A, {-2, 2});
  auto v = vanishing_range_check(A, r, w);
  CHECK(v.passed());
  CHECK(v.attained);
  auto v3 = vanishing_range_check(shift_twist(A, {0, -3}), r, w);
  CHECK(v3.passed());
  CHECK(v3.attained);
  CHECK(condition_chi_check(a, A, w).passed());
  CHECK(finiteness_check(A, 0, w).passed());
  auto b = poly_ring(1);
  Window w1(-4, 4, -3, 3);
  auto rb = shift_twist(free_module(b, w1), {-1, 1});
  auto refl = reflexivity_check(residue_field(b, w1), rb, w1);
  INFO(refl.text());
  CHECK(refl.passed());
  CHECK(reflexivity_check(free_module(b, w1), rb, w1).passed());
}
