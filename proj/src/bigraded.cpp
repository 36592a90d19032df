#include "dgcoh/bigraded.hpp"

#include <algorithm>
#include <sstream>

namespace dgcoh {

std::ostream& operator<<(std::ostream& os, const Bidegree& b) {
  return os << '(' << b.internal << ',' << b.cohomological << ')';
}

std::string to_string(const Bidegree& b) {
  std::ostringstream os;
  os << b;
  return os.str();
}

Window::Window(int imin, int imax, int jmin, int jmax) : i_min(imin), i_max(imax), j_min(jmin), j_max(jmax) {
  if (imin > imax || jmin > jmax) throw InputError("empty window " + str());
}

std::optional<Window> Window::intersect(const Window& o) const {
  int a = std::max(i_min, o.i_min), b = std::min(i_max, o.i_max);
  int c = std::max(j_min, o.j_min), d = std::min(j_max, o.j_max);
  if (a > b || c > d) return std::nullopt;
  return Window(a, b, c, d);
}

Window Window::shifted(const ShiftSpec& s) const {
  return Window(i_min - s.twist, i_max - s.twist, j_min - s.shift, j_max - s.shift);
}

Window Window::parse(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("malformed window '" + text + "', expected imin:imax:jmin:jmax");
    }
  }
  if (parts.size() != 4) throw InputError("malformed window '" + text + "', expected imin:imax:jmin:jmax");
  return Window(parts[0], parts[1], parts[2], parts[3]);
}

std::string Window::str() const {
  std::ostringstream os;
  os << i_min << ':' << i_max << ':' << j_min << ':' << j_max;
  return os.str();
}

int DimTable::at(const Bidegree& b) const {
  if (!certified(b))
    throw OutOfWindow("bidegree " + to_string(b) + " is outside the certified window " + valid_.str());
  auto it = dims_.find(b);
  return it == dims_.end() ? 0 : it->second;
}

void DimTable::set(const Bidegree& b, int dim) {
  if (!valid_.contains(b)) throw OutOfWindow("cannot record " + to_string(b) + " outside " + valid_.str());
  if (dim < 0) throw std::invalid_argument("negative dimension");
  holes_.erase(b);
  if (dim == 0)
    dims_.erase(b);
  else
    dims_[b] = dim;
}

void DimTable::mark_uncertified(const Bidegree& b) {
  if (!valid_.contains(b)) return;
  dims_.erase(b);
  holes_.insert(b);
}

std::optional<int> DimTable::sup() const {
  std::optional<int> s;
  for (const auto& [b, d] : dims_) s = s ? std::max(*s, b.cohomological) : b.cohomological;
  return s;
}

std::optional<int> DimTable::inf() const {
  std::optional<int> s;
  for (const auto& [b, d] : dims_) s = s ? std::min(*s, b.cohomological) : b.cohomological;
  return s;
}

DimTable DimTable::restricted(const Window& w) const {
  auto inter = valid_.intersect(w);
  if (!inter) throw OutOfWindow("window " + w.str() + " does not meet " + valid_.str());
  DimTable out(*inter);
  for (const auto& [b, d] : dims_)
    if (inter->contains(b)) out.dims_[b] = d;
  for (const auto& b : holes_)
    if (inter->contains(b)) out.holes_.insert(b);
  return out;
}

DimTable DimTable::shifted(const ShiftSpec& s) const {
  DimTable out(valid_.shifted(s));
  for (const auto& [b, d] : dims_) out.dims_[b - Bidegree{s.twist, s.shift}] = d;
  for (const auto& b : holes_) out.holes_.insert(b - Bidegree{s.twist, s.shift});
  return out;
}

std::string DimTable::to_csv() const {
  std::ostringstream os;
  os << "# window " << valid_.str() << " uncertified " << holes_.size() << '\n';
  os << "internal,cohomological,dim\n";
  for (int i = valid_.i_min; i <= valid_.i_max; ++i)
    for (int j = valid_.j_min; j <= valid_.j_max; ++j) {
      Bidegree b{i, j};
      if (holes_.count(b)) continue;
      os << i << ',' << j << ',' << at(b) << '\n';
    }
  return os.str();
}

std::vector<Bidegree> table_equal(const DimTable& a, const DimTable& b, const Window& w) {
  if (!a.valid().contains(w) || !b.valid().contains(w))
    throw OutOfWindow("comparison window " + w.str() + " is not certified in both tables");
  std::vector<Bidegree> out;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      Bidegree bd{i, j};
      if (a.at(bd) != b.at(bd)) out.push_back(bd);
    }
  return out;
}

}  // namespace dgcoh
