#pragma once

// Hom in the homotopy category by brute force: unknowns are arbitrary k-linear
// maps between the graded pieces, B-linearity is imposed as equations. Only for
// modules whose total dimension is finite inside [lo, hi].

#include <cstddef>
#include <vector>

#include "dense_oracle.hpp"
#include "dglift/module.hpp"

namespace dglift::testing {

namespace oracle_detail {

struct Layout {
  int lo = 0;
  std::vector<std::size_t> rows, cols, offset;
  std::size_t total = 0;
  std::size_t at(int d, std::size_t r, std::size_t c) const {
    const auto k = static_cast<std::size_t>(d - lo);
    return offset[k] + r * cols[k] + c;
  }
  bool has(int d) const { return d >= lo && d < lo + static_cast<int>(rows.size()); }
};

// Maps M_d -> N_{d + k - s} for lo <= d <= hi.
inline Layout layout(const SemifreeModule& m, const SemifreeModule& n, int s, int k, int lo, int hi) {
  Layout l;
  l.lo = lo;
  for (int d = lo; d <= hi; ++d) {
    l.offset.push_back(l.total);
    l.rows.push_back(n.dim(d + k - s));
    l.cols.push_back(m.dim(d));
    l.total += l.rows.back() * l.cols.back();
  }
  return l;
}

inline std::vector<Monomial> algebra_generators(const Algebra& alg) {
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < alg.num_variables(); ++i) out.push_back(alg.generator(i).terms().begin()->first);
  if (!alg.base().is_field()) out.push_back(alg.base_generator().terms().begin()->first);
  return out;
}

// X_{d+g} R^M - R^N X_d = 0 for every algebra generator.
inline void linearity(Dense& eqs, const Layout& l, const SemifreeModule& m, const SemifreeModule& n, int s, int k) {
  const Field& f = m.algebra().field();
  for (const auto& x : algebra_generators(m.algebra())) {
    const int g = m.algebra().degree(x);
    for (int d = l.lo; l.has(d); ++d) {
      const int dn = d + k - s;
      Dense rm = to_dense(f, m.right_action_matrix(x, d));
      Dense rn = to_dense(f, n.right_action_matrix(x, dn));
      const std::size_t out_rows = n.dim(dn + g);
      const std::size_t out_cols = m.dim(d);
      for (std::size_t i = 0; i < out_rows; ++i) {
        for (std::size_t j = 0; j < out_cols; ++j) {
          std::vector<Scalar> row(l.total, Scalar::zero(f));
          if (l.has(d + g))
            for (std::size_t c = 0; c < rm.size(); ++c) row[l.at(d + g, i, c)] += rm[c][j];
          for (std::size_t r = 0; r < n.dim(dn); ++r) row[l.at(d, r, j)] -= rn[i][r];
          eqs.push_back(std::move(row));
        }
      }
    }
  }
}

inline Scalar sgn(const Field& f, int e) { return e % 2 == 0 ? Scalar::one(f) : -Scalar::one(f); }

}  // namespace oracle_detail

/// dim Hom_K(M, Sigma^s N) where M lives in degrees [lo, hi].
inline std::size_t dense_hom_dim(const SemifreeModule& m, const SemifreeModule& n, int s, int lo, int hi) {
  using namespace oracle_detail;
  const Field& f = m.algebra().field();
  const Layout lf = layout(m, n, s, 0, lo, hi);
  const Layout lh = layout(m, n, s, 1, lo, hi);

  Dense ef;
  linearity(ef, lf, m, n, s, 0);
  // (-1)^s D^N F_d - F_{d-1} D^M = 0
  for (int d = lo; d <= hi + 1; ++d) {
    Dense dn = to_dense(f, n.differential_matrix(d - s));
    Dense dm = to_dense(f, m.differential_matrix(d));
    for (std::size_t i = 0; i < n.dim(d - 1 - s); ++i) {
      for (std::size_t j = 0; j < m.dim(d); ++j) {
        std::vector<Scalar> row(lf.total, Scalar::zero(f));
        if (lf.has(d))
          for (std::size_t r = 0; r < n.dim(d - s); ++r) row[lf.at(d, r, j)] += sgn(f, s) * dn[i][r];
        if (lf.has(d - 1))
          for (std::size_t c = 0; c < m.dim(d - 1); ++c) row[lf.at(d - 1, i, c)] -= dm[c][j];
        ef.push_back(std::move(row));
      }
    }
  }

  Dense eh;
  linearity(eh, lh, m, n, s, 1);
  const std::size_t eh_rank = dense_rank(eh);
  // Rows of the boundary map H -> (-1)^s D^N H_d + H_{d-1} D^M, one per F unknown.
  Dense stacked = eh;
  for (int d = lo; d <= hi; ++d) {
    Dense dn = to_dense(f, n.differential_matrix(d + 1 - s));
    Dense dm = to_dense(f, m.differential_matrix(d));
    for (std::size_t i = 0; i < n.dim(d - s); ++i) {
      for (std::size_t j = 0; j < m.dim(d); ++j) {
        std::vector<Scalar> row(lh.total, Scalar::zero(f));
        for (std::size_t r = 0; r < n.dim(d + 1 - s); ++r) row[lh.at(d, r, j)] += sgn(f, s) * dn[i][r];
        if (lh.has(d - 1))
          for (std::size_t c = 0; c < m.dim(d - 1); ++c) row[lh.at(d - 1, i, c)] += dm[c][j];
        stacked.push_back(std::move(row));
      }
    }
  }
  const std::size_t cycles = lf.total - dense_rank(ef);
  const std::size_t boundaries = dense_rank(stacked) - eh_rank;
  return cycles - boundaries;
}

}  // namespace dglift::testing
