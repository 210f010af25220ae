#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "qmoney/errors.h"
#include "qmoney/hidden_subspace.h"
#include "test_support.h"

using namespace qmoney;
using namespace qmoney::hs;
namespace support = qmoney::test_support;

namespace {

f2::Subspace example_subspace() {
  return f2::Subspace::span(
      8, f2::BitMatrix::parse(support::read_fixture("paper84/generator.txt")).rows());
}

sv::StateVector subspace_state(const f2::Subspace& s) {
  return sv::prepare_uniform(s.ambient_dim(), s.elements());
}

}  // namespace

TEST(HsGen, ExampleShape) {
  Rng rng(1);
  HSParams p{8, 3, 9, 8};
  EXPECT_EQ(p.m(), 9u);
  HSInstance inst = hs_gen(p, rng);
  EXPECT_EQ(inst.secret.dim(), 4u);
  EXPECT_EQ(inst.secret.basis().num_cols(), 8u);
  EXPECT_EQ(inst.note.serial.polys.size(), 9u);
  for (const auto& poly : inst.note.serial.polys) {
    EXPECT_LE(poly.degree(), 3u);
    for (const auto& a : inst.secret.elements()) {
      EXPECT_FALSE(poly.evaluate(a));
    }
  }
}

TEST(HsGen, ParamValidation) {
  EXPECT_THROW((HSParams{7, 3, 2, 1}).validate(), std::invalid_argument);
  EXPECT_THROW((HSParams{8, 3, 1, 1}).validate(), std::invalid_argument);
  EXPECT_THROW((HSParams{8, 3, 2, 0}).validate(), std::invalid_argument);
}

TEST(HsGen, CommonRootSetIsAAtN16) {
  HSParams p{16, 3, 2, 1};
  const int trials = 200;
  int exact = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(16, t);
    HSInstance inst = hs_gen(p, rng);
    std::vector<f2::BitVector> zeros = f2::common_zeros(inst.note.serial);
    bool same = zeros.size() == 256;
    for (const auto& z : zeros) {
      same = same && inst.secret.contains(z);
    }
    exact += same;
  }
  EXPECT_GE(exact, 198);
}

TEST(HsMeasure, ZeroSubspaceGivesZero) {
  Rng rng(2);
  HSBanknote note{f2::PolySystem{4, 1, {}}, f2::Subspace(4)};
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(hs_measure(note, rng).is_zero());
  }
}

TEST(HsMeasure, UniformOverSixteenElements) {
  Rng rng(3);
  HSBanknote note{f2::PolySystem{8, 3, {}}, example_subspace()};
  std::map<uint64_t, size_t> counts;
  for (int i = 0; i < 10000; ++i) {
    f2::BitVector x = hs_measure(note, rng);
    ASSERT_TRUE(f2::membership(note.money, x));
    counts[x.to_index()]++;
  }
  ASSERT_EQ(counts.size(), 16u);
  std::vector<size_t> c;
  for (auto& [k, v] : counts) {
    c.push_back(v);
  }
  EXPECT_LT(support::chi_square_uniform(c), support::chi_square_critical(15));
}

TEST(HsAttack, ExampleFixtureRecoversA) {
  f2::PolySystem serial = f2::parse_system(support::read_fixture("paper84/polys.txt"), 8, 3);
  f2::Subspace rec = hs_attack(serial, f2::BitVector::from_string("01010011"));
  EXPECT_TRUE(f2::subspace_equal(rec, example_subspace()));
}

TEST(HsAttack, LinearFormsRecoverAAtEveryPoint) {
  f2::PolySystem h = f2::parse_system(support::read_fixture("paper84/linear_forms.txt"), 8, 1);
  for (const auto& x : example_subspace().elements()) {
    EXPECT_TRUE(f2::subspace_equal(hs_attack(h, x), example_subspace()));
  }
}

TEST(HsAttack, RejectsNonRoot) {
  f2::PolySystem serial = f2::parse_system(support::read_fixture("paper84/polys.txt"), 8, 3);
  uint64_t non_root = 0;
  while (serial.is_common_root(f2::BitVector::from_index(non_root, 8))) {
    ++non_root;
  }
  EXPECT_THROW(hs_attack(serial, f2::BitVector::from_index(non_root, 8)), std::invalid_argument);
}

TEST(HsAttack, MonteCarloRateAndDeterministicInclusion) {
  AttackStats stats = run_attack_trials(HSParams{8, 3, 2, 1}, 1000, 42);
  const double target = 1.0 - std::ldexp(1.0, -8);
  EXPECT_GE(stats.success_rate(), target - support::three_sigma(target, 1000));
  EXPECT_EQ(stats.inclusion, 1000u);
  EXPECT_EQ(stats.failures_not_superspace, 0u);
  RecordProperty("success_rate", std::to_string(stats.success_rate()));
}

TEST(HsAttack, InclusionHoldsAtEveryPointOfA) {
  for (int t = 0; t < 20; ++t) {
    Rng rng = Rng::stream(5, t);
    HSInstance inst = hs_gen(HSParams{8, 3, 9, 8}, rng);
    for (const auto& x : inst.secret.elements()) {
      f2::Subspace rec = hs_attack(inst.note.serial, x);
      EXPECT_EQ(f2::intersection(rec, inst.secret).dim(), 4u);
      if (!f2::subspace_equal(rec, inst.secret)) {
        EXPECT_GT(rec.dim(), 4u);
      }
    }
  }
}

TEST(HsVerify, MoneyStateAcceptsWithCertainty) {
  HSBanknote note{f2::PolySystem{8, 3, {}}, example_subspace()};
  EXPECT_NEAR(hs_verify_state(note, subspace_state(note.money)), 1.0, 1e-12);
}

TEST(HsVerify, OtherSubspaceOverlapFormula) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    f2::Subspace a = f2::random_subspace(8, rng), b = f2::random_subspace(8, rng);
    HSBanknote note{f2::PolySystem{8, 3, {}}, a};
    // Direct amplitude computation of |<B|A>|^2.
    size_t common = 0;
    for (uint64_t i = 0; i < 256; ++i) {
      f2::BitVector v = f2::BitVector::from_index(i, 8);
      common += a.contains(v) && b.contains(v);
    }
    double expect = static_cast<double>(common * common) / (16.0 * 16.0);
    EXPECT_NEAR(hs_verify_state(note, subspace_state(b)), expect, 1e-12);
  }
}

TEST(HsVerify, BasisStateInA) {
  f2::Subspace a = example_subspace();
  HSBanknote note{f2::PolySystem{8, 3, {}}, a};
  sv::StateVector x = sv::StateVector::basis_state(8, f2::BitVector::from_string("01010011").to_index());
  EXPECT_NEAR(hs_verify_state(note, x), 1.0 / 16.0, 1e-12);
}

TEST(HsVerify, OperatorIsTheRankOneProjectorExhaustively) {
  Rng rng(7);
  for (size_t n = 2; n <= 12; n += 2) {
    f2::Subspace a = f2::random_subspace(n, rng);
    VerifierOperator v(a);
    const size_t dim = size_t{1} << n;
    const double entry = std::ldexp(1.0, -static_cast<int>(n) / 2);
    std::vector<sv::Amplitude> e(dim, 0);
    double worst = 0, worst_idem = 0;
    for (size_t c = 0; c < dim; ++c) {
      e[c] = 1;
      std::vector<sv::Amplitude> col = v.apply(e);
      std::vector<sv::Amplitude> col2 = v.apply(col);
      e[c] = 0;
      bool c_in = a.contains(f2::BitVector::from_index(c, n));
      for (size_t r = 0; r < dim; ++r) {
        bool r_in = a.contains(f2::BitVector::from_index(r, n));
        double expect = (c_in && r_in) ? entry : 0.0;
        worst = std::max(worst, std::abs(col[r] - expect));
        worst_idem = std::max(worst_idem, std::abs(col2[r] - col[r]));
      }
    }
    EXPECT_LT(worst, 1e-9) << "n=" << n;
    EXPECT_LT(worst_idem, 1e-9) << "n=" << n;
  }
}
