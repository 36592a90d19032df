// Invariants that hold for every input: elimination paths agree, shifts
// commute with the functors, Euler characteristics, thread count and lifts.

#include <random>

#include "doctest.h"
#include "dgcoh/corpus.hpp"

using namespace dgcoh;

namespace {

// Same arithmetic as PrimeField, but a distinct type, so Echelon takes its
// generic (eager) reduction path.
struct EagerField : PrimeField {
  using PrimeField::PrimeField;
};

Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, double density) {
  const PrimeField f;
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<std::uint32_t> val(1, f.characteristic() - 1);
  MatrixBuilder<PrimeField> b(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (coin(rng) < density) b.add(r, c, val(rng));
  return b.build();
}

std::shared_ptr<const Algebra> poly_ring(int n) {
  return std::make_shared<Algebra>(polynomial_algebra(PrimeField(), std::vector<int>(n, 1)));
}

WindowedComplex cone_x2(std::shared_ptr<const Algebra> a, const Window& w) {
  return compile(parse_module("modgen g0 internal=0 cohom=0\nmodgen g1 internal=2 cohom=-1\nmoddiff g1 = x^2*g0\n",
                              a),
                 w);
}

/// Entries certified in both tables that differ; `n` counts the comparisons.
std::vector<Bidegree> differences(const DimTable& x, const DimTable& y, const Window& w, std::size_t* n) {
  std::vector<Bidegree> out;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      if (!x.certified(b) || !y.certified(b)) continue;
      ++*n;
      if (x.at(b) != y.at(b)) out.push_back(b);
    }
  return out;
}

}  // namespace

TEST_CASE("lazy and eager elimination give the same rank and kernel") {
  std::mt19937 rng(7);
  const PrimeField f;
  const EagerField g;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng() % 40, cols = 1 + rng() % 40;
    const Matrix m = random_matrix(rng, rows, cols, trial % 3 == 0 ? 0.6 : 0.15);
    CHECK(rank(f, m) == rank(g, m));
    CHECK(kernel(f, m) == kernel(g, m));
    CHECK(image(f, m) == image(g, m));
  }
}

TEST_CASE("matrix copies do not share writes") {
  std::mt19937 rng(3);
  const Matrix m = random_matrix(rng, 5, 5, 0.5);
  Matrix copy = m;
  const auto before = m.row(2);
  copy.set_row(2, {{0, 1}});
  CHECK(m.row(2) == before);
  CHECK(copy.row(2) == Vec{{0, 1}});
  CHECK(copy.row(3) == m.row(3));
}

TEST_CASE("shift and twist commute with cohomology, Ext and local cohomology") {
  auto a = poly_ring(2);
  const Window w(-4, 6, -3, 3);
  const WindowedComplex m = cone_x2(a, Window(-12, 14, -6, 6));
  const WindowedComplex n = free_module(a, Window(-12, 14, -6, 6));
  for (const ShiftSpec s : {ShiftSpec{1, 0}, ShiftSpec{-2, 1}, ShiftSpec{0, -1}}) {
    INFO("twist " << s.twist << " shift " << s.shift);
    const WindowedComplex ms = shift_twist(m, s);
    std::size_t compared = 0;
    // V(t)[s] has V_b at b - (t, s)
    const Window ws = w.shifted(s);
    CHECK(differences(cohomology(ms, ws).table, cohomology(m, w).table.shifted(s), ws, &compared).empty());
    CHECK(differences(local_cohomology_cech(ms, ws).table, local_cohomology_cech(m, w).table.shifted(s), ws, &compared)
              .empty());
    // Hom(M(t)[s], N) = Hom(M, N)(-t)[-s]
    const ShiftSpec inv{-s.twist, -s.shift};
    const Window we = w.shifted(inv);
    CHECK(differences(ext_table(ms, n, we).table, ext_table(m, n, w).table.shifted(inv), we, &compared).empty());
    CHECK(compared > 0);
  }
}

TEST_CASE("Euler characteristic of cohomology equals that of the complex") {
  PrimeField f;
  auto s = polynomial_algebra(f, {1, 1});
  FreeAlgebra fs(f, s.generators);
  Polynomial q = fs.monomial({2, 0}, f.one());
  fs.add_to(q, fs.monomial({0, 2}, f.one()), f.one());
  auto koszul = std::make_shared<Algebra>(koszul_algebra(s, {q}));
  const Window w(0, 8, -4, 1);
  for (const WindowedComplex& m :
       {free_module(koszul, w), residue_field(koszul, w), cone_x2(poly_ring(2), w), cone_x2(poly_ring(1), w)}) {
    const DimTable h = cohomology(m, w).table;
    for (int i = w.i_min; i <= w.i_max; ++i) {
      long chi_h = 0, chi_m = 0;
      for (int j = w.j_min; j <= w.j_max; ++j) {
        const int sign = (j % 2 == 0) ? 1 : -1;
        chi_h += sign * h.at({i, j});
        chi_m += sign * static_cast<long>(m.dim({i, j}));
      }
      CHECK_MESSAGE(chi_h == chi_m, m.label() << " at internal degree " << i);
    }
  }
}

TEST_CASE("Ext(k, k) over k[x1..xn] is exterior: binomial entries summing to 2^n") {
  for (int n = 1; n <= 3; ++n) {
    auto a = poly_ring(n);
    const Window w(-6, 6, -1, 6);
    const auto e = ext_table(residue_field(a, w), residue_field(a, w), w);
    CHECK(e.table.holes().empty());
    int total = 0;
    for (const auto& [b, d] : e.table.nonzero()) {
      total += d;
      CHECK(b.internal == -b.cohomological);
    }
    CHECK(total == (1 << n));
  }
}

TEST_CASE("corpus outcomes do not depend on the thread count") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "dgcoh_threads_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const char* name : {"kx.alg", "lambda_e.alg", "cone_x.mod", "cone_x2.mod"})
    std::filesystem::copy_file(std::filesystem::path(DGCOH_SOURCE_DIR) / "corpus" / name, dir / name);
  const auto entries = load_corpus(dir);
  const auto one = run_corpus(entries, {}, 1), three = run_corpus(entries, {}, 3);
  CHECK(one.summary_csv() == three.summary_csv());
  REQUIRE(one.outcomes.size() == three.outcomes.size());
  for (std::size_t k = 0; k < one.outcomes.size(); ++k) {
    REQUIRE(one.outcomes[k].artifacts.size() == three.outcomes[k].artifacts.size());
    for (std::size_t l = 0; l < one.outcomes[k].artifacts.size(); ++l) {
      CHECK(one.outcomes[k].artifacts[l].path == three.outcomes[k].artifacts[l].path);
      CHECK(one.outcomes[k].artifacts[l].content == three.outcomes[k].artifacts[l].content);
    }
  }
  CHECK(one.status == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lifts of the identity and zero maps act as identity and zero on Ext") {
  auto a = poly_ring(2);
  const Window w(-6, 2, -1, 4);
  const WindowedComplex k = residue_field(a, Window(0, 8, -4, 1));
  const auto r = std::make_shared<const ResolutionData>(semifree_resolution(k, Window(0, 8, -4, 1)));
  const WindowedComplex n = residue_field(a, w);
  const WindowedComplex hom = hom_complex(r, n, w);
  const DimTable ext = cohomology(hom, w).table;
  const PrimeField& f = a->field();
  const auto id = lift_chain_map(*r, *r, [&](const Bidegree& b) { return identity_matrix(f, k.dim(b)); });
  const auto zero = lift_chain_map(*r, *r, [&](const Bidegree& b) { return Matrix(k.dim(b), k.dim(b)); });
  int seen = 0;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      const auto dx = hom.diff(b), dy = hom.diff(b - Bidegree{0, 1});
      CHECK(induced_rank(f, precompose(*r, *r, id, n, b), dx, dy) == static_cast<std::size_t>(ext.at(b)));
      CHECK(induced_rank(f, precompose(*r, *r, zero, n, b), dx, dy) == 0);
      seen += ext.at(b);
    }
  CHECK(seen == 4);
}
