#include "dglift/sparse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace dglift {

const Scalar* SparseVec::find(std::size_t i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, std::size_t k) { return e.first < k; });
  if (it == entries_.end() || it->first != i) return nullptr;
  return &it->second;
}

void SparseVec::add(std::size_t i, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, std::size_t k) { return e.first < k; });
  if (it != entries_.end() && it->first == i) {
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
  } else {
    entries_.insert(it, Entry(i, c));
  }
}

void SparseVec::add_scaled(const SparseVec& w, const Scalar& c) {
  if (c.is_zero() || w.empty()) return;
  std::vector<Entry> out;
  out.reserve(entries_.size() + w.entries_.size());
  auto a = entries_.begin();
  auto b = w.entries_.begin();
  while (a != entries_.end() || b != w.entries_.end()) {
    if (b == w.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == entries_.end() || b->first < a->first) {
      out.emplace_back(b->first, b->second * c);
      ++b;
    } else {
      Scalar s = a->second + b->second * c;
      if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(out);
}

void SparseVec::scale(const Scalar& c) {
  if (c.is_zero()) {
    entries_.clear();
    return;
  }
  for (auto& e : entries_) e.second *= c;
}

SparseVec SparseVec::offset(std::size_t off) const {
  SparseVec r = *this;
  for (auto& e : r.entries_) e.first += off;
  return r;
}

bool SparseVec::operator==(const SparseVec& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first != o.entries_[i].first || entries_[i].second != o.entries_[i].second) return false;
  }
  return true;
}

SparseMatrix SparseMatrix::identity(const Field& f, std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i] = SparseVec::unit(f, i);
  return m;
}

void SparseMatrix::set_column(std::size_t j, SparseVec v) {
  if (v.max_index_plus_one() > rows_) throw std::out_of_range("SparseMatrix::set_column: row index out of range");
  columns_.at(j) = std::move(v);
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Scalar& value) {
  if (r >= rows_) throw std::out_of_range("SparseMatrix::add: row index out of range");
  columns_.at(c).add(r, value);
}

Scalar SparseMatrix::at(const Field& f, std::size_t r, std::size_t c) const {
  const Scalar* s = columns_.at(c).find(r);
  return s ? *s : Scalar::zero(f);
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.nnz();
  return n;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [j, c] : x.entries()) {
    if (j >= cols_) throw std::out_of_range("SparseMatrix::apply: vector longer than column count");
    out.add_scaled(columns_[j], c);
  }
  return out;
}

SparseMatrix SparseMatrix::compose(const SparseMatrix& other) const {
  if (other.rows_ != cols_) throw std::invalid_argument("SparseMatrix::compose: shape mismatch");
  SparseMatrix out(rows_, other.cols_);
  for (std::size_t j = 0; j < other.cols_; ++j) out.columns_[j] = apply(other.columns_[j]);
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  auto rowsv = row_vectors();
  for (std::size_t i = 0; i < rows_; ++i) t.columns_[i] = std::move(rowsv[i]);
  return t;
}

std::vector<SparseVec> SparseMatrix::row_vectors() const {
  std::vector<std::vector<SparseVec::Entry>> buckets(rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    for (const auto& [i, c] : columns_[j].entries()) buckets[i].emplace_back(j, c);
  }
  std::vector<SparseVec> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (auto& [j, c] : buckets[i]) out[i].add(j, c);
  }
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && columns_ == o.columns_;
}

bool Echelon::has_pivot(std::size_t col) const {
  return col < row_of_pivot_.size() && row_of_pivot_[col] >= 0;
}

Echelon::Reduction Echelon::reduce(const SparseVec& v, const SparseVec& tag) const {
  Reduction r{v, tag};
  // Entries only move rightward under reduction, so one left-to-right sweep suffices.
  std::size_t pos = 0;
  while (pos < r.remainder.entries().size()) {
    const auto& [col, c] = r.remainder.entries()[pos];
    if (!has_pivot(col)) {
      ++pos;
      continue;
    }
    const auto row = static_cast<std::size_t>(row_of_pivot_[col]);
    const Scalar factor = -c;
    r.remainder.add_scaled(rows_[row], factor);
    if (!tags_[row].empty()) r.combination.add_scaled(tags_[row], factor);
  }
  return r;
}

bool Echelon::insert(const SparseVec& v, const SparseVec& tag) {
  Reduction r = reduce(v, tag);
  if (r.remainder.empty()) return false;
  const auto [col, lead] = r.remainder.entries().front();
  const Scalar inv = lead.inverse();
  r.remainder.scale(inv);
  r.combination.scale(inv);
  if (row_of_pivot_.size() <= col) row_of_pivot_.resize(col + 1, -1);
  row_of_pivot_[col] = static_cast<std::ptrdiff_t>(rows_.size());
  rows_.push_back(std::move(r.remainder));
  tags_.push_back(std::move(r.combination));
  pivots_.push_back(col);
  return true;
}

void Echelon::make_reduced() {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] > pivots_[b]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t src = order[k];
    const std::size_t col = pivots_[src];
    for (std::size_t other = 0; other < rows_.size(); ++other) {
      if (other == src || pivots_[other] >= col) continue;
      const Scalar* c = rows_[other].find(col);
      if (!c) continue;
      const Scalar factor = -*c;
      rows_[other].add_scaled(rows_[src], factor);
      if (!tags_[src].empty() || !tags_[other].empty()) tags_[other].add_scaled(tags_[src], factor);
    }
  }
}

namespace {

// Sparse rows first, then small coefficients: keeps fill-in and rational growth down.
std::vector<std::size_t> pivot_order(const std::vector<SparseVec>& rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> cost(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t w = 0;
    for (const auto& e : rows[i].entries()) w += e.second.weight();
    cost[i] = {rows[i].nnz(), w};
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
  return order;
}

Echelon row_echelon(const std::vector<SparseVec>& rows) {
  Echelon e;
  for (std::size_t i : pivot_order(rows)) e.insert(rows[i]);
  return e;
}

// Over Q: clear denominators, then eliminate with integer row operations and
// divide out each row's content. Avoids the fraction growth of normalized pivots.
using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

IntRow integer_row(const SparseVec& v) {
  mpz_class den = 1;
  for (const auto& [i, c] : v.entries()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.rational().get_den_mpz_t());
  IntRow out;
  for (const auto& [i, c] : v.entries()) out.emplace_back(i, c.rational().get_num() * (den / c.rational().get_den()));
  return out;
}

void remove_content(IntRow& r) {
  mpz_class g = 0;
  for (const auto& [i, c] : r) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& [i, c] : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// a * r - b * p, both sorted by index.
IntRow combine(const IntRow& r, const mpz_class& a, const IntRow& p, const mpz_class& b) {
  IntRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.emplace_back(r[i].first, a * r[i].second);
      ++i;
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, -b * p[j].second);
      ++j;
    } else {
      mpz_class c = a * r[i].second - b * p[j].second;
      if (c != 0) out.emplace_back(r[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

std::size_t rational_rank(const std::vector<SparseVec>& vectors) {
  std::map<std::size_t, IntRow> pivots;
  for (std::size_t k : pivot_order(vectors)) {
    IntRow r = integer_row(vectors[k]);
    remove_content(r);
    while (!r.empty()) {
      auto it = pivots.find(r.front().first);
      if (it == pivots.end()) break;
      const IntRow& p = it->second;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), p.front().second.get_mpz_t(), r.front().second.get_mpz_t());
      r = combine(r, p.front().second / g, p, r.front().second / g);
      remove_content(r);
    }
    if (!r.empty()) pivots.emplace(r.front().first, std::move(r));
  }
  return pivots.size();
}

bool is_rational_matrix(const SparseMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m.column(j).empty()) return m.column(j).entries().front().second.is_rational();
  return false;
}

}  // namespace

std::size_t rank(const SparseMatrix& m) {
  if (is_rational_matrix(m)) {
    if (m.rows() < m.cols()) {
      std::vector<SparseVec> cols;
      for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
      return rational_rank(cols);
    }
    return rational_rank(m.row_vectors());
  }
  if (m.rows() < m.cols()) {
    Echelon e;
    for (std::size_t j = 0; j < m.cols(); ++j) e.insert(m.column(j));
    return e.rank();
  }
  return row_echelon(m.row_vectors()).rank();
}

std::optional<SparseVec> solve([[maybe_unused]] const Field& f, const SparseMatrix& m, const SparseVec& b) {
  if (b.max_index_plus_one() > m.rows()) throw std::invalid_argument("solve: right-hand side longer than row count");
  std::vector<SparseVec> rows = m.row_vectors();
  const std::size_t rhs = m.cols();
  for (const auto& [i, c] : b.entries()) rows[i].add(rhs, c);
  Echelon e = row_echelon(rows);
  if (e.has_pivot(rhs)) return std::nullopt;
  e.make_reduced();
  SparseVec x;
  for (std::size_t r = 0; r < e.rank(); ++r) {
    const Scalar* c = e.rows()[r].find(rhs);
    if (c) x.add(e.pivots()[r], *c);
  }
  if (m.apply(x) != b) throw std::logic_error("solve: back-substitution failed verification");
  return x;
}

std::vector<SparseVec> kernel_basis(const Field& f, const SparseMatrix& m) {
  Echelon e = row_echelon(m.row_vectors());
  e.make_reduced();
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : e.pivots()) is_pivot[p] = true;
  std::vector<SparseVec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    SparseVec x = SparseVec::unit(f, free);
    for (std::size_t r = 0; r < e.rank(); ++r) {
      const Scalar* c = e.rows()[r].find(free);
      if (c) x.add(e.pivots()[r], -*c);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

SpanCoordinates::SpanCoordinates(const Field& f, const std::vector<SparseVec>& generators)
    : count_(generators.size()) {
  for (std::size_t i = 0; i < generators.size(); ++i) ech_.insert(generators[i], SparseVec::unit(f, i));
}

std::optional<SparseVec> SpanCoordinates::coordinates(const SparseVec& v) const {
  Echelon::Reduction r = ech_.reduce(v);
  if (!r.remainder.empty()) return std::nullopt;
  // reduce() subtracts; the accumulated combination is the negated coordinate vector.
  SparseVec out;
  for (const auto& [i, c] : r.combination.entries()) out.add(i, -c);
  return out;
}

}  // namespace dglift
