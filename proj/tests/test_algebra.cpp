#include "doctest.h"
#include "dgcoh/algebra.hpp"

using namespace dgcoh;

namespace {

Polynomial mono(const FreeAlgebra& fa, std::initializer_list<int> e, std::int64_t c = 1) {
  return fa.monomial(Exponents(e), fa.field().from_int(c));
}

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("polynomial ring dimensions are binomial coefficients") {
  PrimeField f;
  for (std::size_t n = 1; n <= 3; ++n) {
    Algebra a(polynomial_algebra(f, std::vector<int>(n, 1)));
    for (int i = 0; i <= 6; ++i) {
      CHECK(a.dim({i, 0}) == binom(i + n - 1, n - 1));
      CHECK(a.dim({i, -1}) == 0);
    }
  }
}

TEST_CASE("odd generators anticommute and square to zero") {
  PrimeField f;
  auto p = exterior_algebra(f, {{1, -1}, {1, -1}});
  FreeAlgebra fa(f, p.generators);
  auto e1e2 = fa.multiply(mono(fa, {1, 0}), mono(fa, {0, 1}));
  auto e2e1 = fa.multiply(mono(fa, {0, 1}), mono(fa, {1, 0}));
  CHECK(e1e2 == mono(fa, {1, 1}));
  CHECK(e2e1 == mono(fa, {1, 1}, -1));
  CHECK(fa.multiply(mono(fa, {1, 0}), mono(fa, {1, 0})).empty());
  Algebra a(p);
  CHECK(a.dim({2, -2}) == 1);
  CHECK(a.dim({1, -1}) == 2);
  CHECK(a.dim({3, -3}) == 0);
}

TEST_CASE("even-degree exterior generator gets an explicit square-zero relation") {
  PrimeField f;
  Algebra a(exterior_algebra(f, {{1, 0}}));
  CHECK(a.dim({1, 0}) == 1);
  CHECK(a.dim({2, 0}) == 0);
  CHECK(check_dga(a, Window(0, 4, -2, 0)).ok());
}

TEST_CASE("quotient dimensions of k[x,y]/(xy) and k[x]/(x^2)") {
  PrimeField f;
  auto p = polynomial_algebra(f, {1, 1});
  FreeAlgebra fa(f, p.generators);
  p.relations.push_back(mono(fa, {1, 1}));
  Algebra a(p);
  CHECK(a.dim({0, 0}) == 1);
  for (int i = 1; i <= 5; ++i) CHECK(a.dim({i, 0}) == 2);
  // x*y normal form is zero, x^2*y as well
  CHECK(a.normal_form(mono(fa, {2, 1}), {3, 0}).empty());

  auto q = polynomial_algebra(f, {1});
  FreeAlgebra fq(f, q.generators);
  q.relations.push_back(mono(fq, {2}));
  Algebra b(q);
  CHECK(b.dim({1, 0}) == 1);
  CHECK(b.dim({2, 0}) == 0);
  CHECK(b.dim({5, 0}) == 0);
}

TEST_CASE("normal forms reduce modulo a non-monomial relation") {
  PrimeField f;
  auto p = polynomial_algebra(f, {1, 1});
  FreeAlgebra fa(f, p.generators);
  Polynomial rel = mono(fa, {2, 0});
  fa.add_to(rel, mono(fa, {0, 2}), f.one());  // x^2 + y^2
  p.relations.push_back(rel);
  Algebra a(p);
  CHECK(a.dim({2, 0}) == 2);
  CHECK(a.dim({3, 0}) == 2);
  Vec x2 = a.normal_form(mono(fa, {2, 0}), {2, 0});
  Vec y2 = a.normal_form(mono(fa, {0, 2}), {2, 0});
  Vec sum = x2;
  for (const auto& [k, v] : y2) {
    bool found = false;
    for (auto& e : sum)
      if (e.first == k) {
        e.second = f.add(e.second, v);
        found = true;
      }
    if (!found) sum.emplace_back(k, v);
  }
  for (const auto& [k, v] : sum) CHECK(v == 0);
}

TEST_CASE("Koszul algebra passes validation; a wrong differential does not") {
  PrimeField f;
  auto s = polynomial_algebra(f, {1, 1});
  FreeAlgebra fs(f, s.generators);
  Polynomial form = mono(fs, {2, 0});
  fs.add_to(form, mono(fs, {0, 2}), f.one());
  auto k = koszul_algebra(s, {form});
  Algebra a(k);
  auto rep = check_dga(a, Window(0, 6, -2, 0));
  CHECK_MESSAGE(rep.ok(), rep.summary());
  // e at (2,-1); d e in A_{(2,0)}
  CHECK(a.dim({2, -1}) == 1);
  CHECK(a.diff_matrix({2, -1}).nnz() == 2);  // x^2 + y^2

  // d x = e would have the wrong bidegree
  auto bad = k;
  FreeAlgebra fk(f, bad.generators);
  bad.differential[0] = mono(fk, {0, 0, 1});
  CHECK_THROWS_AS(Algebra{bad}, InputError);
  auto rep2 = check_presentation(bad);
  REQUIRE_FALSE(rep2.ok());
  CHECK(rep2.violations.front().detail == "x");
}

TEST_CASE("d^2 violation is reported with a bidegree") {
  PrimeField f;
  // odd e1 at (1,-1), e2 at (2,-1) ... use k[x] tensor Lambda(e, t) with d t = e*x, d e = x: d^2 t = x*x != 0
  DgAlgebraPresentation p{f, {{"x", {1, 0}, Parity::even}, {"e", {1, -1}, Parity::odd}, {"t", {2, -2}, Parity::even}}, {}, {}};
  FreeAlgebra fa(f, p.generators);
  p.differential = {{}, mono(fa, {1, 0, 0}), mono(fa, {1, 1, 0})};
  Algebra a(p);
  auto rep = check_dga(a, Window(0, 3, -3, 0));
  REQUIRE_FALSE(rep.ok());
  bool saw = false;
  for (const auto& v : rep.violations)
    if (v.what == "d^2 != 0" && v.where == Bidegree{2, -2}) saw = true;
  CHECK(saw);
}

TEST_CASE("Leibniz rule holds on products in the Koszul complex of two forms") {
  PrimeField f;
  auto s = polynomial_algebra(f, {1, 1});
  FreeAlgebra fs(f, s.generators);
  Algebra a(koszul_algebra(s, {mono(fs, {1, 0}), mono(fs, {0, 1})}));
  auto rep = check_dga(a, Window(0, 5, -2, 0));
  CHECK_MESSAGE(rep.ok(), rep.summary());
  // d(e1 e2) = x e2 - y e1 : both terms present
  CHECK(a.diff_matrix({2, -2}).nnz() == 2);
}

TEST_CASE("truncation and trivial extension") {
  PrimeField f;
  Algebra t(truncation(polynomial_algebra(f, {1, 1}), 3));
  CHECK(t.dim({2, 0}) == 3);
  CHECK(t.dim({3, 0}) == 0);
  CHECK(t.dim({4, 0}) == 0);

  auto b = polynomial_algebra(f, {1});
  FreeAlgebra fb(f, b.generators);
  b.relations.push_back(mono(fb, {2}));  // B = k[x]/(x^2), top degree 1
  Algebra e(trivial_extension(b, 3));
  // B plus B*(-3) in degrees 2,3
  CHECK(e.dim({0, 0}) == 1);
  CHECK(e.dim({1, 0}) == 1);
  CHECK(e.dim({2, 0}) == 1);
  CHECK(e.dim({3, 0}) == 1);
  CHECK(e.dim({4, 0}) == 0);
  CHECK(check_dga(e, Window(0, 5, 0, 0)).ok());
  CHECK_THROWS_AS(trivial_extension(b, 1), InputError);
}
