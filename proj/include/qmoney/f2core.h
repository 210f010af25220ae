#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmoney/rng.h"

namespace qmoney::f2 {

/// Fixed-length vector over GF(2), packed 64 entries per word.
///
/// Entry i of a vector corresponds to bit i of its basis-state index (see
/// from_index / to_index). Unused high bits of the last word are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(size_t length);

  /// Parses a string of '0'/'1' characters, entry 0 first.
  static BitVector from_string(std::string_view bits);
  static BitVector from_index(uint64_t index, size_t length);

  size_t size() const { return length_; }
  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool value);
  void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  /// Inner product over GF(2).
  bool dot(const BitVector& other) const;
  size_t weight() const;
  bool is_zero() const;
  /// Index of the lowest set entry, or size() when zero.
  size_t first_set() const;

  uint64_t to_index() const;
  std::string to_string() const;

  std::span<const uint64_t> words() const { return words_; }

  bool operator==(const BitVector& other) const = default;
  bool operator<(const BitVector& other) const;

 private:
  size_t length_ = 0;
  std::vector<uint64_t> words_;
};

/// Dense GF(2) matrix stored as packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols);

  static BitMatrix identity(size_t n);
  static BitMatrix from_rows(std::vector<BitVector> rows, size_t cols);
  /// Rows of '0'/'1' characters separated by newlines. Blank lines and
  /// whitespace inside a row are ignored.
  static BitMatrix parse(std::string_view text);

  size_t num_rows() const { return rows_.size(); }
  size_t num_cols() const { return cols_; }
  bool get(size_t r, size_t c) const { return rows_[r].get(c); }
  void set(size_t r, size_t c, bool value) { rows_[r].set(c, value); }
  const BitVector& row(size_t r) const { return rows_[r]; }
  const std::vector<BitVector>& rows() const { return rows_; }

  /// M * v for a column vector v of length num_cols().
  BitVector multiply(const BitVector& v) const;
  BitMatrix transpose() const;
  size_t rank() const;

  /// Reduced row echelon form. Zero rows are dropped; the pivot column of
  /// each remaining row is written to `pivots` when provided.
  BitMatrix rref(std::vector<size_t>* pivots = nullptr) const;

  std::string to_string() const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// Linear subspace of GF(2)^n, canonically represented by the reduced row
/// echelon form of a basis.
class Subspace {
 public:
  explicit Subspace(size_t ambient_dim = 0);

  /// Span of arbitrary (possibly dependent) vectors of length ambient_dim.
  static Subspace span(size_t ambient_dim, std::span<const BitVector> vectors);
  static Subspace full(size_t ambient_dim);

  size_t ambient_dim() const { return ambient_; }
  size_t dim() const { return basis_.num_rows(); }
  const BitMatrix& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }

  bool contains(const BitVector& v) const;
  /// All 2^dim elements in Gray-code order starting from zero. dim <= 30.
  std::vector<BitVector> elements() const;

  bool operator==(const Subspace& other) const = default;

 private:
  size_t ambient_ = 0;
  BitMatrix basis_;
  std::vector<size_t> pivots_;
};

/// {v : M v = 0} as a subspace of GF(2)^{cols(M)}.
Subspace kernel_basis(const BitMatrix& m);

/// Uniformly random (n/2)-dimensional subspace of GF(2)^n, n even.
Subspace random_subspace(size_t n, Rng& rng);

/// {w : w . s = 0 for all s in S}.
Subspace orthogonal_complement(const Subspace& s);

/// Equality of subspaces; throws DimensionMismatch on differing ambient dims.
bool subspace_equal(const Subspace& s, const Subspace& t);
bool membership(const Subspace& s, const BitVector& v);

/// Uniformly random element of S.
BitVector sample_uniform(const Subspace& s, Rng& rng);

/// S ∩ T, computed as (S^⊥ + T^⊥)^⊥.
Subspace intersection(const Subspace& s, const Subspace& t);

}  // namespace qmoney::f2
