#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "dgcoh/parse.hpp"

using namespace dgcoh;

namespace {

const char* kKoszul = R"(# k[x] with e, d e = x^2
field p=32003
gen x internal=1 cohom=0
gen e internal=2 cohom=-1
diff e = x^2
)";

std::string error_of(const std::string& text) {
  try {
    parse_algebra(text, {}, "alg.txt");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("algebra files parse into validated presentations") {
  auto p = parse_algebra(kKoszul);
  CHECK(p.generators.size() == 2);
  Algebra a(p);
  CHECK(check_dga(a, Window(0, 6, -3, 0)).ok());
  CHECK(a.dim({4, -1}) == 1);  // x^2 e
}

TEST_CASE("malformed input reports the line") {
  CHECK(error_of("gen x internal=1 cohom=0\nrel x^2 +* x\n").rfind("alg.txt:2:", 0) == 0);
  CHECK(error_of("gen x internal=1 cohom=0\ngen y internal=2 cohom=0\nrel x^2 + y^3\n").rfind("alg.txt:3:", 0) == 0);
  CHECK(error_of("gen x internal=1\n").rfind("alg.txt:1:", 0) == 0);
  CHECK(error_of("gen x internal=1 cohom=0\nfrobnicate x\n").rfind("alg.txt:2:", 0) == 0);
  CHECK(error_of("field p=2\ngen x internal=1 cohom=0\n").rfind("alg.txt:1:", 0) == 0);
  FieldOptions two;
  two.allow_char_2 = true;
  CHECK_NOTHROW(parse_algebra("field p=2\ngen x internal=1 cohom=0\n", two));
}

TEST_CASE("module lines and builtin module arguments") {
  auto a = std::make_shared<Algebra>(parse_algebra("gen x internal=1 cohom=0\ngen y internal=1 cohom=0\n"));
  Window w(-2, 6, -2, 2);
  auto cone = parse_module("modgen g0 internal=0 cohom=0\nmodgen g1 internal=1 cohom=-1\nmoddiff g1 = x*g0\n", a);
  auto m = compile(cone, w);
  CHECK(check_module(m).ok());
  auto h = cohomology(m, w).table;  // k[y]
  for (int i = 0; i <= 6; ++i) CHECK(h.at({i, 0}) == 1);

  CHECK(module_argument("A", a, w).dim({3, 0}) == 4);
  CHECK(module_argument("k", a, w).dim({0, 0}) == 1);
  CHECK(module_argument("A>=2", a, w).dim({1, 0}) == 0);
  CHECK(module_argument("A>=2", a, w).dim({2, 0}) == 3);
  CHECK(module_argument("A<2", a, w).dim({2, 0}) == 0);
  CHECK(module_argument("A(-2)", a, w).dim({2, 0}) == 1);
  CHECK(module_argument("A[-3]", a, w).dim({0, 3}) == 1);
  CHECK(module_argument("k(1)[-2]", a, w).dim({-1, 2}) == 1);
  CHECK_THROWS_AS(module_argument("B>=2", a, w), InputError);

  auto dir = std::filesystem::temp_directory_path() / "dgcoh_parse_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "cone.mod") << "modgen g0 internal=0 cohom=0\nmodgen g1 internal=1 cohom=-1\nmoddiff g1 = x*g0\n";
  CHECK(cohomology(module_argument((dir / "cone.mod").string(), a, w), w).table == h);
  std::filesystem::remove_all(dir);
}

TEST_CASE("non-homogeneous module data is rejected") {
  auto a = std::make_shared<Algebra>(parse_algebra("gen x internal=1 cohom=0\n"));
  CHECK_THROWS_AS(parse_module("modgen g0 internal=0 cohom=0\nmodgen g1 internal=1 cohom=-1\nmoddiff g1 = x^2*g0\n", a),
                  InputError);
  auto sq = parse_module("modgen g0 internal=0 cohom=0\nmodgen g1 internal=1 cohom=-1\nmodgen g2 internal=2 cohom=-2\n"
                         "moddiff g1 = x*g0\nmoddiff g2 = x*g1\n", a);
  CHECK_THROWS_AS(compile(sq, Window(0, 4, -3, 1)), InputError);  // d^2 = x^2 g0
}
