#include "qmoney/f2core.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "qmoney/errors.h"

namespace qmoney::f2 {

namespace {

size_t word_count(size_t length) { return (length + 63) / 64; }

void require_same_length(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("bit vector lengths differ: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

}  // namespace

BitVector::BitVector(size_t length) : length_(length), words_(word_count(length), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1': " + std::string(bits));
    }
  }
  return v;
}

BitVector BitVector::from_index(uint64_t index, size_t length) {
  if (length > 64) {
    throw DimensionMismatch("from_index supports at most 64 entries");
  }
  if (length < 64 && (index >> length) != 0) {
    throw DimensionMismatch("index does not fit in " + std::to_string(length) + " bits");
  }
  BitVector v(length);
  if (length > 0) {
    v.words_[0] = index;
  }
  return v;
}

void BitVector::set(size_t i, bool value) {
  uint64_t mask = uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require_same_length(*this, other);
  for (size_t w = 0; w < words_.size(); ++w) {
    words_[w] ^= other.words_[w];
  }
  return *this;
}

bool BitVector::dot(const BitVector& other) const {
  require_same_length(*this, other);
  uint64_t acc = 0;
  for (size_t w = 0; w < words_.size(); ++w) {
    acc ^= words_[w] & other.words_[w];
  }
  return std::popcount(acc) & 1;
}

size_t BitVector::weight() const {
  size_t total = 0;
  for (uint64_t w : words_) {
    total += static_cast<size_t>(std::popcount(w));
  }
  return total;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

size_t BitVector::first_set() const {
  for (size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) {
      return w * 64 + static_cast<size_t>(std::countr_zero(words_[w]));
    }
  }
  return length_;
}

uint64_t BitVector::to_index() const {
  if (length_ > 64) {
    throw DimensionMismatch("to_index supports at most 64 entries");
  }
  return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_string() const {
  std::string out(length_, '0');
  for (size_t i = 0; i < length_; ++i) {
    if (get(i)) {
      out[i] = '1';
    }
  }
  return out;
}

bool BitVector::operator<(const BitVector& other) const {
  if (length_ != other.length_) {
    return length_ < other.length_;
  }
  for (size_t w = words_.size(); w-- > 0;) {
    if (words_[w] != other.words_[w]) {
      return words_[w] < other.words_[w];
    }
  }
  return false;
}

BitMatrix::BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(size_t n) {
  BitMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) {
    m.set(i, i, true);
  }
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, size_t cols) {
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw DimensionMismatch("row length " + std::to_string(r.size()) + " != " +
                              std::to_string(cols));
    }
  }
  BitMatrix m;
  m.cols_ = cols;
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::parse(std::string_view text) {
  std::vector<BitVector> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string bits;
    for (char ch : line) {
      if (ch == '0' || ch == '1') {
        bits.push_back(ch);
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        throw std::invalid_argument("unexpected character in matrix text: '" + std::string(1, ch) +
                                    "'");
      }
    }
    if (!bits.empty()) {
      rows.push_back(BitVector::from_string(bits));
    }
  }
  size_t cols = rows.empty() ? 0 : rows.front().size();
  return from_rows(std::move(rows), cols);
}

BitVector BitMatrix::multiply(const BitVector& v) const {
  if (v.size() != cols_) {
    throw DimensionMismatch("matrix has " + std::to_string(cols_) + " columns, vector has " +
                            std::to_string(v.size()) + " entries");
  }
  BitVector out(rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) {
    out.set(r, rows_[r].dot(v));
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) {
    for (size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) {
        t.set(c, r, true);
      }
    }
  }
  return t;
}

BitMatrix BitMatrix::rref(std::vector<size_t>* pivots) const {
  std::vector<BitVector> work = rows_;
  std::vector<size_t> pivot_cols;
  size_t lead = 0;
  for (size_t col = 0; col < cols_ && lead < work.size(); ++col) {
    size_t sel = lead;
    while (sel < work.size() && !work[sel].get(col)) {
      ++sel;
    }
    if (sel == work.size()) {
      continue;
    }
    std::swap(work[lead], work[sel]);
    for (size_t r = 0; r < work.size(); ++r) {
      if (r != lead && work[r].get(col)) {
        work[r] ^= work[lead];
      }
    }
    pivot_cols.push_back(col);
    ++lead;
  }
  work.resize(lead);
  if (pivots != nullptr) {
    *pivots = std::move(pivot_cols);
  }
  return from_rows(std::move(work), cols_);
}

size_t BitMatrix::rank() const { return rref().num_rows(); }

std::string BitMatrix::to_string() const {
  std::string out;
  for (const auto& r : rows_) {
    out += r.to_string();
    out += '\n';
  }
  return out;
}

Subspace::Subspace(size_t ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

Subspace Subspace::span(size_t ambient_dim, std::span<const BitVector> vectors) {
  Subspace s(ambient_dim);
  BitMatrix m = BitMatrix::from_rows({vectors.begin(), vectors.end()}, ambient_dim);
  s.basis_ = m.rref(&s.pivots_);
  return s;
}

Subspace Subspace::full(size_t ambient_dim) {
  BitMatrix id = BitMatrix::identity(ambient_dim);
  return span(ambient_dim, id.rows());
}

bool Subspace::contains(const BitVector& v) const {
  if (v.size() != ambient_) {
    throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                            " != ambient dimension " + std::to_string(ambient_));
  }
  BitVector residue = v;
  for (size_t r = 0; r < pivots_.size(); ++r) {
    if (residue.get(pivots_[r])) {
      residue ^= basis_.row(r);
    }
  }
  return residue.is_zero();
}

std::vector<BitVector> Subspace::elements() const {
  if (dim() > 30) {
    throw std::length_error("refusing to enumerate a subspace of dimension " +
                            std::to_string(dim()));
  }
  std::vector<BitVector> out;
  out.reserve(size_t{1} << dim());
  BitVector current(ambient_);
  out.push_back(current);
  for (uint64_t g = 1; g < (uint64_t{1} << dim()); ++g) {
    current ^= basis_.row(static_cast<size_t>(std::countr_zero(g)));
    out.push_back(current);
  }
  return out;
}

Subspace kernel_basis(const BitMatrix& m) {
  std::vector<size_t> pivots;
  BitMatrix r = m.rref(&pivots);
  size_t n = m.num_cols();
  std::vector<bool> is_pivot(n, false);
  for (size_t p : pivots) {
    is_pivot[p] = true;
  }
  std::vector<BitVector> gens;
  for (size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) {
      continue;
    }
    BitVector v(n);
    v.set(free, true);
    for (size_t row = 0; row < pivots.size(); ++row) {
      if (r.get(row, free)) {
        v.set(pivots[row], true);
      }
    }
    gens.push_back(std::move(v));
  }
  return Subspace::span(n, gens);
}

Subspace random_subspace(size_t n, Rng& rng) {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument("random_subspace needs a positive even dimension, got " +
                                std::to_string(n));
  }
  size_t k = n / 2;
  while (true) {
    std::vector<BitVector> rows;
    rows.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      BitVector v(n);
      for (size_t j = 0; j < n; ++j) {
        v.set(j, rng.bit());
      }
      rows.push_back(std::move(v));
    }
    Subspace s = Subspace::span(n, rows);
    if (s.dim() == k) {
      return s;
    }
  }
}

Subspace orthogonal_complement(const Subspace& s) { return kernel_basis(s.basis()); }

bool subspace_equal(const Subspace& s, const Subspace& t) {
  if (s.ambient_dim() != t.ambient_dim()) {
    throw DimensionMismatch("subspaces live in GF(2)^" + std::to_string(s.ambient_dim()) +
                            " and GF(2)^" + std::to_string(t.ambient_dim()));
  }
  return s.basis() == t.basis();
}

bool membership(const Subspace& s, const BitVector& v) { return s.contains(v); }

BitVector sample_uniform(const Subspace& s, Rng& rng) {
  BitVector out(s.ambient_dim());
  for (const auto& row : s.basis().rows()) {
    if (rng.bit()) {
      out ^= row;
    }
  }
  return out;
}

Subspace intersection(const Subspace& s, const Subspace& t) {
  if (s.ambient_dim() != t.ambient_dim()) {
    throw DimensionMismatch("intersection of subspaces with different ambient dimensions");
  }
  Subspace sp = orthogonal_complement(s);
  Subspace tp = orthogonal_complement(t);
  std::vector<BitVector> gens = sp.basis().rows();
  gens.insert(gens.end(), tp.basis().rows().begin(), tp.basis().rows().end());
  return orthogonal_complement(Subspace::span(s.ambient_dim(), gens));
}

}  // namespace qmoney::f2
