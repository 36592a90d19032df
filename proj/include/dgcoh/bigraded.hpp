#pragma once

#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgcoh {

/// (internal, cohomological) = (i, j) for the component V_i^j.
struct Bidegree {
  int internal = 0;
  int cohomological = 0;

  auto operator<=>(const Bidegree&) const = default;
  Bidegree operator+(const Bidegree& o) const { return {internal + o.internal, cohomological + o.cohomological}; }
  Bidegree operator-(const Bidegree& o) const { return {internal - o.internal, cohomological - o.cohomological}; }
};

std::ostream& operator<<(std::ostream& os, const Bidegree& b);
std::string to_string(const Bidegree& b);

/// V(twist)[shift].
struct ShiftSpec {
  int twist = 0;
  int shift = 0;
};

/// V(m)[n] at b is V at the returned bidegree.
inline Bidegree apply_shift(const Bidegree& b, const ShiftSpec& s) {
  return {b.internal + s.twist, b.cohomological + s.shift};
}

/// Component of the k-dual: (V*)_b = (V_{dual_bidegree(b)})*.
inline Bidegree dual_bidegree(const Bidegree& b) { return {-b.internal, -b.cohomological}; }

struct Window {
  int i_min = 0, i_max = 0, j_min = 0, j_max = 0;

  Window() = default;
  Window(int imin, int imax, int jmin, int jmax);

  bool contains(const Bidegree& b) const {
    return b.internal >= i_min && b.internal <= i_max && b.cohomological >= j_min && b.cohomological <= j_max;
  }
  bool contains(const Window& w) const {
    return w.i_min >= i_min && w.i_max <= i_max && w.j_min >= j_min && w.j_max <= j_max;
  }
  /// Empty result (nullopt) when the rectangles are disjoint.
  std::optional<Window> intersect(const Window& o) const;
  Window shifted(const ShiftSpec& s) const;  // image under b -> b - s
  bool operator==(const Window&) const = default;

  /// "imin:imax:jmin:jmax"
  static Window parse(const std::string& text);
  std::string str() const;
};

/// Base class for every contract failure raised by the engine.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public EngineError {
 public:
  using EngineError::EngineError;
};

/// Raised when a value is requested outside the certified region.
class OutOfWindow : public EngineError {
 public:
  explicit OutOfWindow(const std::string& what) : EngineError(what) {}
};

/// Raised when a window cannot hold the data an operation needs.
class WindowTooSmall : public EngineError {
 public:
  using EngineError::EngineError;
};

/// Dimensions per bidegree, certified on `valid()` minus explicit holes.
class DimTable {
 public:
  DimTable() = default;
  explicit DimTable(Window valid) : valid_(valid) {}

  const Window& valid() const { return valid_; }
  const std::set<Bidegree>& holes() const { return holes_; }
  bool certified(const Bidegree& b) const { return valid_.contains(b) && !holes_.count(b); }

  /// Throws OutOfWindow outside the certified region.
  int at(const Bidegree& b) const;
  void set(const Bidegree& b, int dim);
  void mark_uncertified(const Bidegree& b);

  /// Nonzero entries, all certified.
  const std::map<Bidegree, int>& nonzero() const { return dims_; }

  /// Largest / smallest cohomological degree with a nonzero certified entry.
  std::optional<int> sup() const;
  std::optional<int> inf() const;

  /// Restricts certification to `w` (entries outside are dropped).
  DimTable restricted(const Window& w) const;
  /// Table of V(s.twist)[s.shift] given the table of V.
  DimTable shifted(const ShiftSpec& s) const;

  /// Header comment, then `internal,cohomological,dim` rows for every
  /// certified bidegree (zeros included), lexicographic order.
  std::string to_csv() const;

  bool operator==(const DimTable&) const = default;

 private:
  Window valid_;
  std::map<Bidegree, int> dims_;
  std::set<Bidegree> holes_;
};

/// Bidegrees in `w` where the tables differ.  Throws OutOfWindow unless `w`
/// is certified in both tables.
std::vector<Bidegree> table_equal(const DimTable& a, const DimTable& b, const Window& w);

}  // namespace dgcoh
