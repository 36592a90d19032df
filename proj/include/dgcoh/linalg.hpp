#pragma once

// Exact sparse linear algebra over a field policy F (PrimeField or
// RationalField).  Matrices act on column vectors: a map V -> W is stored as
// a dim(W) x dim(V) matrix.  Pivoting is always on the lowest column index,
// so every echelon form produced here is reproducible.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "dgcoh/field.hpp"

namespace dgcoh {

template <class E>
using SparseVec = std::vector<std::pair<std::uint32_t, E>>;

template <class E>
class SparseMatrix {
 public:
  using Row = SparseVec<E>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(std::make_shared<std::vector<Row>>(rows)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Row& row(std::size_t r) const { return (*data_)[r]; }

  std::size_t nnz() const {
    std::size_t n = 0;
    if (data_)
      for (const auto& r : *data_) n += r.size();
    return n;
  }
  bool is_zero() const { return nnz() == 0; }

  /// Replaces a row; `entries` must be sorted by column, nonzero, in range.
  void set_row(std::size_t r, Row entries) {
    if (data_.use_count() > 1) data_ = std::make_shared<std::vector<Row>>(*data_);
    (*data_)[r] = std::move(entries);
  }

  std::vector<std::tuple<std::uint32_t, std::uint32_t, E>> entries() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, E>> out;
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& [c, v] : (*data_)[r]) out.emplace_back(static_cast<std::uint32_t>(r), c, v);
    return out;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& [c, v] : (*data_)[r]) (*t.data_)[c].emplace_back(static_cast<std::uint32_t>(r), v);
    return t;
  }

  bool operator==(const SparseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    return data_ == o.data_ || !rows_ || *data_ == *o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  // shared between copies; set_row copies first when shared
  std::shared_ptr<std::vector<Row>> data_;
};

/// Accumulates (row, col, value) triplets; duplicates are summed and zeros dropped.
template <class F>
class MatrixBuilder {
 public:
  using E = typename F::Elem;

  MatrixBuilder(const F& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols) {}

  void add(std::size_t r, std::size_t c, const E& v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix entry out of range");
    if (!field_.is_zero(v)) triplets_.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v);
  }

  /// Adds `block` with its (0,0) entry placed at (r0, c0), scaled by `scale`.
  void add_block(std::size_t r0, std::size_t c0, const SparseMatrix<E>& block, const E& scale) {
    if (field_.is_zero(scale)) return;
    for (std::size_t r = 0; r < block.rows(); ++r)
      for (const auto& [c, v] : block.row(r)) add(r0 + r, c0 + c, field_.mul(scale, v));
  }

  SparseMatrix<E> build() {
    std::sort(triplets_.begin(), triplets_.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    SparseMatrix<E> m(rows_, cols_);
    std::vector<SparseVec<E>> rows(rows_);
    for (const auto& [r, c, v] : triplets_) {
      auto& row = rows[r];
      if (!row.empty() && row.back().first == c)
        row.back().second = field_.add(row.back().second, v);
      else
        row.emplace_back(c, v);
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      auto& row = rows[r];
      row.erase(std::remove_if(row.begin(), row.end(), [&](const auto& e) { return field_.is_zero(e.second); }),
                row.end());
      m.set_row(r, std::move(row));
    }
    triplets_.clear();
    return m;
  }

 private:
  F field_;
  std::size_t rows_, cols_;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, E>> triplets_;
};

template <class F>
SparseMatrix<typename F::Elem> identity_matrix(const F& field, std::size_t n) {
  SparseMatrix<typename F::Elem> m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_row(i, {{static_cast<std::uint32_t>(i), field.one()}});
  return m;
}

template <class F>
SparseMatrix<typename F::Elem> from_dense(const F& field, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  MatrixBuilder<F> b(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) b.add(r, c, field.from_int(rows[r][c]));
  return b.build();
}

template <class F>
SparseMatrix<typename F::Elem> multiply(const F& field, const SparseMatrix<typename F::Elem>& a,
                                        const SparseMatrix<typename F::Elem>& b) {
  using E = typename F::Elem;
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  SparseMatrix<E> out(a.rows(), b.cols());
  std::vector<E> acc(b.cols(), field.zero());
  std::vector<char> seen(b.cols(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    touched.clear();
    for (const auto& [j, av] : a.row(r))
      for (const auto& [k, bv] : b.row(j)) {
        if (!seen[k]) {
          seen[k] = 1;
          touched.push_back(k);
        }
        acc[k] = field.add(acc[k], field.mul(av, bv));
      }
    std::sort(touched.begin(), touched.end());
    SparseVec<E> row;
    for (auto k : touched) {
      if (!field.is_zero(acc[k])) row.emplace_back(k, acc[k]);
      acc[k] = field.zero();
      seen[k] = 0;
    }
    out.set_row(r, std::move(row));
  }
  return out;
}

template <class F>
SparseMatrix<typename F::Elem> add(const F& field, const SparseMatrix<typename F::Elem>& a,
                                   const SparseMatrix<typename F::Elem>& b,
                                   const typename F::Elem& scale_b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
  MatrixBuilder<F> m(field, a.rows(), a.cols());
  m.add_block(0, 0, a, field.one());
  m.add_block(0, 0, b, scale_b);
  return m.build();
}

template <class F>
SparseVec<typename F::Elem> apply(const F& field, const SparseMatrix<typename F::Elem>& m,
                                  const SparseVec<typename F::Elem>& v) {
  using E = typename F::Elem;
  std::vector<E> dense(m.cols(), field.zero());
  for (const auto& [c, x] : v) {
    if (c >= m.cols()) throw std::out_of_range("vector longer than matrix domain");
    dense[c] = x;
  }
  SparseVec<E> out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    E s = field.zero();
    for (const auto& [c, x] : m.row(r))
      if (!field.is_zero(dense[c])) s = field.add(s, field.mul(x, dense[c]));
    if (!field.is_zero(s)) out.emplace_back(static_cast<std::uint32_t>(r), s);
  }
  return out;
}

/// Incremental echelon basis of a subspace of F^dim.  Each stored row has a
/// unique leading column normalized to 1; reduction against the basis is full
/// (the remainder vanishes on every pivot column).  Optionally tracks, for
/// every row, its expression as a combination of the inserted vectors.
template <class F>
class Echelon {
 public:
  using E = typename F::Elem;
  using Vec = SparseVec<E>;

  Echelon(const F& field, std::size_t dim, std::size_t tag_dim = 0)
      : field_(field), dim_(dim), tag_dim_(tag_dim), pivot_of_(dim, -1) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<Vec>& tags() const { return tags_; }
  int pivot_row(std::size_t col) const { return pivot_of_[col]; }

  /// Full reduction of `v`; if `tag_out` is given, receives c with
  /// v - remainder = sum_r c_r * tagged-input combination (negated convention
  /// handled internally: remainder = v - sum_j tag_out[j] * input_j).
  Vec reduce(const Vec& v, Vec* tag_out = nullptr) const { return reduce_impl(v, 0, tag_out); }

  bool contains(const Vec& v) const { return reduce(v).empty(); }

  /// Inserts `v` (tagged with `tag`); returns true when it enlarged the span.
  bool insert(const Vec& v, const Vec& tag = {}) {
    Vec tag_red;
    Vec r = reduce_impl(v, 0, tag_dim_ ? &tag_red : nullptr);
    if (r.empty()) return false;
    // remainder = v - sum tag_red_j input_j, so remainder's tag is tag - tag_red.
    Vec new_tag;
    if (tag_dim_) new_tag = axpy(tag, tag_red, field_.neg(field_.one()));
    E inv = field_.inv(r.front().second);
    for (auto& e : r) e.second = field_.mul(e.second, inv);
    for (auto& e : new_tag) e.second = field_.mul(e.second, inv);
    pivot_of_[r.front().first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    tags_.push_back(std::move(new_tag));
    reduced_ = false;
    return true;
  }

  /// Back-substitutes so that every row vanishes on all other pivot columns.
  void make_reduced() {
    if (reduced_) return;
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
    for (std::size_t idx : order) {
      Vec tag_red;
      Vec tail(rows_[idx].begin() + 1, rows_[idx].end());
      Vec red = reduce_impl(tail, rows_[idx].front().first + 1, tag_dim_ ? &tag_red : nullptr);
      Vec row;
      row.reserve(red.size() + 1);
      row.push_back(rows_[idx].front());
      row.insert(row.end(), red.begin(), red.end());
      rows_[idx] = std::move(row);
      if (tag_dim_) tags_[idx] = axpy(tags_[idx], tag_red, field_.neg(field_.one()));
    }
    reduced_ = true;
  }

  /// Rows sorted by leading column (reduced echelon form after make_reduced()).
  std::vector<Vec> sorted_rows() const {
    std::vector<Vec> out = rows_;
    std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) { return a.front().first < b.front().first; });
    return out;
  }

  std::vector<std::uint32_t> pivot_columns() const {
    std::vector<std::uint32_t> out;
    for (const auto& r : rows_) out.push_back(r.front().first);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  Vec axpy(const Vec& x, const Vec& y, const E& a) const {
    Vec out;
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        out.push_back(x[i++]);
      } else if (i == x.size() || y[j].first < x[i].first) {
        E v = field_.mul(a, y[j].second);
        if (!field_.is_zero(v)) out.emplace_back(y[j].first, v);
        ++j;
      } else {
        E v = field_.add(x[i].second, field_.mul(a, y[j].second));
        if (!field_.is_zero(v)) out.emplace_back(x[i].first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }

  Vec reduce_impl(const Vec& v, std::size_t start, Vec* tag_out) const {
    if (v.empty()) {
      if (tag_out) tag_out->clear();
      return {};
    }
    if constexpr (std::is_same_v<F, PrimeField>) return reduce_lazy(v, start, tag_out);
    std::vector<E>& acc = scratch_;
    if (acc.size() != dim_) acc.assign(dim_, field_.zero());
    std::size_t lo = dim_, hi = 0;
    for (const auto& [c, x] : v) {
      if (c >= dim_) throw std::out_of_range("vector index exceeds echelon dimension");
      acc[c] = x;
      lo = std::min<std::size_t>(lo, c);
      hi = std::max<std::size_t>(hi, c);
    }
    std::vector<E> tag_acc;
    if (tag_out) tag_acc.assign(tag_dim_, field_.zero());
    for (std::size_t c = std::max(lo, start); c <= hi; ++c) {
      if (field_.is_zero(acc[c])) continue;
      int r = pivot_of_[c];
      if (r < 0) continue;
      E coeff = acc[c];
      for (const auto& [cc, x] : rows_[r]) {
        acc[cc] = field_.sub(acc[cc], field_.mul(coeff, x));
        hi = std::max<std::size_t>(hi, cc);
      }
      if (tag_out)
        for (const auto& [tc, x] : tags_[r]) tag_acc[tc] = field_.add(tag_acc[tc], field_.mul(coeff, x));
    }
    Vec out;
    for (std::size_t c = lo; c <= hi; ++c) {
      if (!field_.is_zero(acc[c])) out.emplace_back(static_cast<std::uint32_t>(c), acc[c]);
      acc[c] = field_.zero();
    }
    if (tag_out) {
      tag_out->clear();
      for (std::size_t t = 0; t < tag_dim_; ++t)
        if (!field_.is_zero(tag_acc[t])) tag_out->emplace_back(static_cast<std::uint32_t>(t), tag_acc[t]);
    }
    return out;
  }

  // Same as the generic path with residues reduced only when read: products
  // are below 2^62, so a 64-bit accumulator can take one more after any
  // reduction point.
  Vec reduce_lazy(const Vec& v, std::size_t start, Vec* tag_out) const {
    constexpr std::uint64_t kFold = std::uint64_t(1) << 63;
    const std::uint64_t p = field_.characteristic();
    std::vector<std::uint64_t>& acc = scratch64_;
    if (acc.size() != dim_) acc.assign(dim_, 0);
    std::size_t lo = dim_, hi = 0;
    for (const auto& [c, x] : v) {
      if (c >= dim_) throw std::out_of_range("vector index exceeds echelon dimension");
      acc[c] = x;
      lo = std::min<std::size_t>(lo, c);
      hi = std::max<std::size_t>(hi, c);
    }
    std::vector<std::uint64_t> tag_acc;
    if (tag_out) tag_acc.assign(tag_dim_, 0);
    for (std::size_t c = std::max(lo, start); c <= hi; ++c) {
      if (!acc[c]) continue;
      const int r = pivot_of_[c];
      if (r < 0) continue;
      const std::uint64_t coeff = acc[c] % p;
      acc[c] = 0;
      if (!coeff) continue;
      const std::uint64_t neg = p - coeff;
      const auto& row = rows_[r];
      for (std::size_t k = 1; k < row.size(); ++k) {
        std::uint64_t& a = acc[row[k].first];
        a += neg * row[k].second;
        if (a >= kFold) a %= p;
      }
      if (!row.empty()) hi = std::max<std::size_t>(hi, row.back().first);
      if (tag_out)
        for (const auto& [tc, x] : tags_[r]) {
          std::uint64_t& a = tag_acc[tc];
          a += coeff * x;
          if (a >= kFold) a %= p;
        }
    }
    Vec out;
    for (std::size_t c = lo; c <= hi; ++c) {
      if (acc[c]) {
        const auto x = static_cast<E>(acc[c] % p);
        if (x) out.emplace_back(static_cast<std::uint32_t>(c), x);
      }
      acc[c] = 0;
    }
    if (tag_out) {
      tag_out->clear();
      for (std::size_t t = 0; t < tag_dim_; ++t)
        if (const auto x = static_cast<E>(tag_acc[t] % p)) tag_out->emplace_back(static_cast<std::uint32_t>(t), x);
    }
    return out;
  }

  F field_;
  std::size_t dim_;
  std::size_t tag_dim_;
  std::vector<int> pivot_of_;
  std::vector<Vec> rows_;
  std::vector<Vec> tags_;
  bool reduced_ = true;
  mutable std::vector<E> scratch_;
  mutable std::vector<std::uint64_t> scratch64_;
};

/// A subspace of F^ambient, represented by its unique reduced echelon basis.
template <class E>
struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<SparseVec<E>> basis;

  std::size_t dim() const { return basis.size(); }
  bool operator==(const Subspace& o) const { return ambient_dim == o.ambient_dim && basis == o.basis; }
};

template <class F>
Subspace<typename F::Elem> span(const F& field, std::size_t ambient, const std::vector<SparseVec<typename F::Elem>>& vs) {
  Echelon<F> ech(field, ambient);
  for (const auto& v : vs) ech.insert(v);
  ech.make_reduced();
  return {ambient, ech.sorted_rows()};
}

template <class F>
std::size_t rank(const F& field, const SparseMatrix<typename F::Elem>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.rows() > m.cols()) {
    auto t = m.transpose();
    Echelon<F> ech(field, t.cols());
    for (std::size_t r = 0; r < t.rows(); ++r) ech.insert(t.row(r));
    return ech.rank();
  }
  Echelon<F> ech(field, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
  return ech.rank();
}

template <class F>
Subspace<typename F::Elem> kernel(const F& field, const SparseMatrix<typename F::Elem>& m) {
  using E = typename F::Elem;
  Echelon<F> ech(field, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
  ech.make_reduced();
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : ech.pivot_columns()) is_pivot[c] = 1;
  // column f of the reduced rows, gathered once
  std::vector<SparseVec<E>> col_entries(m.cols());
  for (const auto& row : ech.rows())
    for (std::size_t k = 1; k < row.size(); ++k)
      col_entries[row[k].first].emplace_back(row.front().first, field.neg(row[k].second));
  std::vector<SparseVec<E>> vecs;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVec<E> v = col_entries[f];
    v.emplace_back(static_cast<std::uint32_t>(f), field.one());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    vecs.push_back(std::move(v));
  }
  return span(field, m.cols(), vecs);
}

/// Column space of m, as a subspace of F^rows.
template <class F>
Subspace<typename F::Elem> image(const F& field, const SparseMatrix<typename F::Elem>& m) {
  auto t = m.transpose();
  std::vector<SparseVec<typename F::Elem>> cols;
  for (std::size_t r = 0; r < t.rows(); ++r) cols.push_back(t.row(r));
  return span(field, m.rows(), cols);
}

/// Returns (dim coker, P) where P : F^rows -> F^dim is surjective with P*m = 0.
/// The complement coordinates are the non-pivot rows of the image's echelon form.
template <class F>
std::pair<std::size_t, SparseMatrix<typename F::Elem>> cokernel_basis(const F& field,
                                                                      const SparseMatrix<typename F::Elem>& m) {
  auto img = image(field, m);
  std::vector<int> coord(m.rows(), -1);
  std::vector<char> is_pivot(m.rows(), 0);
  for (const auto& v : img.basis) is_pivot[v.front().first] = 1;
  std::size_t n = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!is_pivot[r]) coord[r] = static_cast<int>(n++);
  MatrixBuilder<F> p(field, n, m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!is_pivot[r]) p.add(coord[r], r, field.one());
  for (const auto& v : img.basis)
    for (std::size_t k = 1; k < v.size(); ++k) p.add(coord[v[k].first], v.front().first, field.neg(v[k].second));
  return {n, p.build()};
}

namespace linalg_config {
/// When set, every solve() result is substituted back and checked.
inline bool& verify_solutions() {
  static bool flag = false;
  return flag;
}
}  // namespace linalg_config

/// Solves m x = b for many right-hand sides against a fixed matrix.
template <class F>
class Solver {
 public:
  using E = typename F::Elem;

  Solver(const F& field, SparseMatrix<E> m) : field_(field), m_(std::move(m)), ech_(field, m_.rows(), m_.cols()) {
    auto t = m_.transpose();
    for (std::size_t c = 0; c < t.rows(); ++c) ech_.insert(t.row(c), {{static_cast<std::uint32_t>(c), field_.one()}});
  }

  std::optional<SparseVec<E>> solve(const SparseVec<E>& b) const {
    SparseVec<E> tag;
    auto rem = ech_.reduce(b, &tag);
    if (!rem.empty()) return std::nullopt;
    if (linalg_config::verify_solutions() && apply(field_, m_, tag) != b)
      throw std::logic_error("linear solve failed substitution check");
    return tag;
  }

  const SparseMatrix<E>& matrix() const { return m_; }

 private:
  F field_;
  SparseMatrix<E> m_;
  Echelon<F> ech_;
};

template <class F>
std::optional<SparseVec<typename F::Elem>> solve(const F& field, const SparseMatrix<typename F::Elem>& m,
                                                  const SparseVec<typename F::Elem>& b) {
  return Solver<F>(field, m).solve(b);
}

}  // namespace dgcoh
