#pragma once

// Text formats.
//
// Algebra file:
//   field p=32003
//   gen x internal=1 cohom=0
//   rel x*y
//   diff e = x^2
// Module lines (same file or a separate one):
//   modgen g0 internal=0 cohom=0
//   moddiff g1 = x*g0
//   modrel x^2*g0
// Lines starting with '#' are comments.  A module term a*g means
// (-1)^{|a||g|} g*a in the right module.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "dgcoh/algebra.hpp"
#include "dgcoh/dgmodule.hpp"

namespace dgcoh {

struct FieldOptions {
  std::optional<std::uint32_t> prime;  // overrides the file's field line
  bool allow_char_2 = false;
};

std::string read_text_file(const std::filesystem::path& p);

/// Parses the algebra lines of `text` (module lines are skipped).  Errors are
/// InputError messages of the form "<source>:<line>: ...".
DgAlgebraPresentation parse_algebra(const std::string& text, const FieldOptions& opts = {},
                                    const std::string& source = "<input>");

bool has_module_lines(const std::string& text);

/// Parses the module lines of `text` over `a`.
PresentedDgModule parse_module(const std::string& text, std::shared_ptr<const Algebra> a,
                               const std::string& source = "<input>");

Polynomial parse_polynomial(const std::string& expr, const FreeAlgebra& fa);
ModElement parse_module_element(const std::string& expr, const PresentedDgModule& m);

/// Module argument: a builtin expression (A, k, A>=d, A<d, each optionally
/// followed by (twist)[shift]) or a module file path.
WindowedComplex module_argument(const std::string& arg, std::shared_ptr<const Algebra> a, const Window& w);

}  // namespace dgcoh
