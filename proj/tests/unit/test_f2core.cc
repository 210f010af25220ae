#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "qmoney/errors.h"
#include "qmoney/f2core.h"
#include "test_support.h"

using namespace qmoney;
using namespace qmoney::f2;
namespace support = qmoney::test_support;

namespace {

BitMatrix random_matrix(size_t rows, size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      m.set(r, c, rng.bit());
    }
  }
  return m;
}

// Set of integer encodings of all elements spanned by the given rows.
std::set<uint64_t> span_set(const std::vector<BitVector>& rows) {
  std::set<uint64_t> out{0};
  for (const auto& r : rows) {
    std::set<uint64_t> next = out;
    for (uint64_t v : out) {
      next.insert(v ^ r.to_index());
    }
    out = std::move(next);
  }
  return out;
}

Subspace example_subspace() {
  return Subspace::span(8, BitMatrix::parse(support::read_fixture("paper84/generator.txt")).rows());
}

}  // namespace

TEST(BitVector, StringRoundTripAndIndexOrder) {
  BitVector v = BitVector::from_string("0101");
  EXPECT_EQ(v.to_string(), "0101");
  EXPECT_EQ(v.to_index(), 0b1010u);
  EXPECT_EQ(BitVector::from_index(0b1010, 4), v);
  EXPECT_EQ(v.weight(), 2u);
  EXPECT_EQ(v.first_set(), 1u);
  EXPECT_THROW(BitVector::from_string("01x"), std::invalid_argument);
}

TEST(BitVector, DotAndXorRejectLengthMismatch) {
  EXPECT_THROW(BitVector(3).dot(BitVector(4)), DimensionMismatch);
  BitVector a(3);
  EXPECT_THROW(a ^= BitVector(5), DimensionMismatch);
}

TEST(BitVector, WideVectorsCrossWordBoundaries) {
  BitVector a(130), b(130);
  a.set(0, true);
  a.set(64, true);
  a.set(129, true);
  b.set(129, true);
  EXPECT_TRUE(a.dot(b));
  EXPECT_EQ((a ^ b).weight(), 2u);
}

TEST(KernelBasis, ZeroMatrixGivesFullSpace) {
  for (size_t n : {1, 5, 70}) {
    Subspace k = kernel_basis(BitMatrix(n, n));
    EXPECT_EQ(k.dim(), n);
    EXPECT_TRUE(subspace_equal(k, Subspace::full(n)));
  }
}

TEST(KernelBasis, IdentityGivesZeroSpace) {
  EXPECT_EQ(kernel_basis(BitMatrix::identity(9)).dim(), 0u);
}

TEST(KernelBasis, ExampleJacobianKernelIsGeneratorRowSpace) {
  BitMatrix j = BitMatrix::parse(support::read_fixture("paper84/jacobian.txt"));
  ASSERT_EQ(j.num_rows(), 9u);
  ASSERT_EQ(j.num_cols(), 8u);
  EXPECT_TRUE(subspace_equal(kernel_basis(j), example_subspace()));
}

TEST(KernelBasis, RankNullityAndAnnihilationOnRandomMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    size_t rows = 1 + rng.below(20);
    size_t cols = 1 + rng.below(90);
    BitMatrix m = random_matrix(rows, cols, rng);
    Subspace k = kernel_basis(m);
    EXPECT_EQ(m.rank() + k.dim(), cols);
    EXPECT_EQ(k.basis().rank(), k.dim());
    for (const auto& v : k.basis().rows()) {
      EXPECT_TRUE(m.multiply(v).is_zero());
    }
  }
}

TEST(KernelBasis, MatchesBruteForceAtSmallSize) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    size_t cols = 1 + rng.below(10);
    BitMatrix m = random_matrix(1 + rng.below(8), cols, rng);
    std::set<uint64_t> brute;
    for (uint64_t x = 0; x < (uint64_t{1} << cols); ++x) {
      if (m.multiply(BitVector::from_index(x, cols)).is_zero()) {
        brute.insert(x);
      }
    }
    EXPECT_EQ(span_set(kernel_basis(m).basis().rows()), brute);
  }
}

TEST(RandomSubspace, SmallestCaseHitsAllThreeLines) {
  Rng rng(3);
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) {
    Subspace s = random_subspace(2, rng);
    ASSERT_EQ(s.dim(), 1u);
    seen.insert(s.basis().to_string());
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(RandomSubspace, HalfDimensionAtN8) {
  Rng rng(8);
  Subspace s = random_subspace(8, rng);
  EXPECT_EQ(s.dim(), 4u);
  EXPECT_EQ(s.basis().rank(), 4u);
  EXPECT_THROW(random_subspace(7, rng), std::invalid_argument);
}

TEST(RandomSubspace, UniformOverAll35PlanesOfF2_4) {
  // Independent enumeration of every 2-dimensional subspace of GF(2)^4.
  std::set<std::set<uint64_t>> planes;
  for (uint64_t a = 1; a < 16; ++a) {
    for (uint64_t b = a + 1; b < 16; ++b) {
      planes.insert({0, a, b, a ^ b});
    }
  }
  ASSERT_EQ(planes.size(), 35u);
  std::map<std::set<uint64_t>, size_t> slot;
  for (const auto& p : planes) {
    slot.emplace(p, slot.size());
  }
  std::vector<size_t> counts(35, 0);
  Rng rng(2024);
  const size_t draws = 100000;
  for (size_t i = 0; i < draws; ++i) {
    counts[slot.at(span_set(random_subspace(4, rng).basis().rows()))]++;
  }
  double expected = draws / 35.0;
  double sigma = std::sqrt(expected * (1 - 1 / 35.0));
  for (size_t c : counts) {
    EXPECT_NEAR(static_cast<double>(c), expected, 3.5 * sigma);
  }
  EXPECT_LT(support::chi_square_uniform(counts), support::chi_square_critical(34));
}

TEST(OrthogonalComplement, FullSpaceAndLine) {
  EXPECT_EQ(orthogonal_complement(Subspace::full(6)).dim(), 0u);
  std::vector<BitVector> e1{BitVector::from_string("10")};
  std::vector<BitVector> e2{BitVector::from_string("01")};
  EXPECT_TRUE(subspace_equal(orthogonal_complement(Subspace::span(2, e1)), Subspace::span(2, e2)));
}

TEST(OrthogonalComplement, ExampleSubspaceExhaustiveDotProducts) {
  Subspace a = example_subspace();
  Subspace ap = orthogonal_complement(a);
  EXPECT_EQ(ap.dim(), 4u);
  for (const auto& w : ap.elements()) {
    for (const auto& v : a.elements()) {
      EXPECT_FALSE(w.dot(v));
    }
  }
}

TEST(OrthogonalComplement, IsAnInvolutionWithComplementaryDimension) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.below(40);
    BitMatrix m = random_matrix(rng.below(n + 1), n, rng);
    Subspace s = Subspace::span(n, m.rows());
    Subspace sp = orthogonal_complement(s);
    EXPECT_EQ(s.dim() + sp.dim(), n);
    EXPECT_TRUE(subspace_equal(orthogonal_complement(sp), s));
  }
}

TEST(SubspaceEqual, InvariantUnderRebasingAndShuffling) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    Subspace s = random_subspace(10, rng);
    std::vector<BitVector> rows = s.basis().rows();
    // Random invertible re-basing: add random multiples of later rows.
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t j = i + 1; j < rows.size(); ++j) {
        if (rng.bit()) {
          rows[i] ^= rows[j];
        }
      }
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_TRUE(subspace_equal(s, Subspace::span(10, rows)));
  }
}

TEST(SubspaceEqual, EquivalenceRelationAndMismatch) {
  Rng rng(7);
  Subspace a = random_subspace(6, rng), b = random_subspace(6, rng);
  Subspace a2 = Subspace::span(6, a.basis().rows());
  EXPECT_TRUE(subspace_equal(a, a));
  EXPECT_EQ(subspace_equal(a, b), subspace_equal(b, a));
  if (subspace_equal(a, b)) {
    EXPECT_TRUE(subspace_equal(a2, b));
  }
  EXPECT_THROW(subspace_equal(a, random_subspace(8, rng)), DimensionMismatch);
}

TEST(Membership, ExamplePointLiesInA) {
  EXPECT_TRUE(membership(example_subspace(), BitVector::from_string("01010011")));
  EXPECT_FALSE(membership(example_subspace(), BitVector::from_string("10000000")));
  EXPECT_THROW(membership(example_subspace(), BitVector(7)), DimensionMismatch);
}

TEST(SampleUniform, ChiSquareOverFourOutcomes) {
  std::vector<BitVector> gens{BitVector::from_string("1100"), BitVector::from_string("0111")};
  Subspace s = Subspace::span(4, gens);
  std::map<uint64_t, size_t> counts;
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    BitVector v = sample_uniform(s, rng);
    ASSERT_TRUE(s.contains(v));
    counts[v.to_index()]++;
  }
  ASSERT_EQ(counts.size(), 4u);
  std::vector<size_t> c;
  for (auto& [k, n] : counts) {
    c.push_back(n);
  }
  EXPECT_LT(support::chi_square_uniform(c), support::chi_square_critical(3));
}

TEST(Intersection, MatchesElementwiseIntersection) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    Subspace s = random_subspace(8, rng), t = random_subspace(8, rng);
    std::set<uint64_t> ss = span_set(s.basis().rows()), ts = span_set(t.basis().rows()), both;
    std::set_intersection(ss.begin(), ss.end(), ts.begin(), ts.end(),
                          std::inserter(both, both.begin()));
    EXPECT_EQ(span_set(intersection(s, t).basis().rows()), both);
  }
}

TEST(Elements, GrayCodeEnumerationIsExhaustive) {
  Subspace a = example_subspace();
  std::vector<BitVector> e = a.elements();
  EXPECT_EQ(e.size(), 16u);
  std::set<uint64_t> idx;
  for (const auto& v : e) {
    idx.insert(v.to_index());
  }
  EXPECT_EQ(idx, span_set(a.basis().rows()));
}
