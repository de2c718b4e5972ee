#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dglift/scalar.hpp"

namespace dglift {

/// Sparse vector with strictly increasing indices and no stored zeros.
class SparseVec {
 public:
  using Entry = std::pair<std::size_t, Scalar>;

  SparseVec() = default;
  static SparseVec unit(const Field& f, std::size_t i) {
    SparseVec v;
    v.entries_.emplace_back(i, Scalar::one(f));
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  /// Returns the coefficient at i, or nullptr when it is zero.
  const Scalar* find(std::size_t i) const;
  /// Adds c at index i (indices may arrive in any order).
  void add(std::size_t i, const Scalar& c);
  /// this += c * w
  void add_scaled(const SparseVec& w, const Scalar& c);
  void scale(const Scalar& c);
  SparseVec scaled(const Scalar& c) const {
    SparseVec r = *this;
    r.scale(c);
    return r;
  }
  /// Shifts every index by `offset`.
  SparseVec offset(std::size_t offset) const;
  std::size_t max_index_plus_one() const { return entries_.empty() ? 0 : entries_.back().first + 1; }

  bool operator==(const SparseVec& o) const;
  bool operator!=(const SparseVec& o) const { return !(*this == o); }

 private:
  std::vector<Entry> entries_;
};

/// Column-major sparse matrix; column j holds the image of the j-th basis vector.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

  static SparseMatrix identity(const Field& f, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const SparseVec& column(std::size_t j) const { return columns_.at(j); }
  /// Replaces column j; throws std::out_of_range on an index past rows().
  void set_column(std::size_t j, SparseVec v);
  void add(std::size_t r, std::size_t c, const Scalar& value);
  Scalar at(const Field& f, std::size_t r, std::size_t c) const;

  std::size_t nnz() const;
  SparseVec apply(const SparseVec& x) const;
  /// this * other
  SparseMatrix compose(const SparseMatrix& other) const;
  SparseMatrix transpose() const;
  /// Rows of the matrix as sparse vectors indexed by column.
  std::vector<SparseVec> row_vectors() const;

  bool operator==(const SparseMatrix& o) const;
  bool operator!=(const SparseMatrix& o) const { return !(*this == o); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVec> columns_;
};

/// Incremental row echelon form. Stored rows are normalized to a leading one.
/// Optional tags carry along the linear combination of inserted vectors.
class Echelon {
 public:
  struct Reduction {
    SparseVec remainder;
    SparseVec combination;
  };

  Echelon() = default;

  std::size_t rank() const { return rows_.size(); }
  bool has_pivot(std::size_t col) const;

  /// Reduces v against the pivot rows. combination starts at `tag` and picks up
  /// the same operations applied to the stored tags.
  Reduction reduce(const SparseVec& v, const SparseVec& tag = {}) const;
  /// Inserts v; returns false (and stores nothing) when v is dependent.
  bool insert(const SparseVec& v, const SparseVec& tag = {});

  /// Back-substitutes to reduced row echelon form.
  void make_reduced();
  const std::vector<SparseVec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const std::vector<SparseVec>& tags() const { return tags_; }

 private:
  std::vector<SparseVec> rows_;
  std::vector<SparseVec> tags_;
  std::vector<std::size_t> pivots_;
  std::vector<std::ptrdiff_t> row_of_pivot_;  // indexed by column, -1 when none
};

std::size_t rank(const SparseMatrix& m);
/// Returns some x with m x = b (free coordinates zero), or nullopt when
/// inconsistent. Throws std::invalid_argument when b is longer than rows().
std::optional<SparseVec> solve(const Field& f, const SparseMatrix& m, const SparseVec& b);
/// Basis of ker(m); one vector per non-pivot column.
std::vector<SparseVec> kernel_basis(const Field& f, const SparseMatrix& m);

/// A fixed spanning family with exact coordinate extraction.
class SpanCoordinates {
 public:
  SpanCoordinates() = default;
  SpanCoordinates(const Field& f, const std::vector<SparseVec>& generators);

  std::size_t size() const { return count_; }
  /// Coordinates of v in the generators, or nullopt when v is outside the span.
  std::optional<SparseVec> coordinates(const SparseVec& v) const;

 private:
  Echelon ech_;
  std::size_t count_ = 0;
};

}  // namespace dglift
