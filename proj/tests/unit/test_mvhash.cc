#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <iostream>
#include <sstream>

#include "qmoney/errors.h"
#include "qmoney/mvhash.h"
#include "test_support.h"

using namespace qmoney;
using namespace qmoney::mv;
namespace support = qmoney::test_support;

namespace {

bool parity(uint64_t v) { return (std::popcount(v) & 1) != 0; }

// Independent evaluation: sum_{j <= k} a_jk x_j x_k.
uint64_t bilinear_hash(const MVHashKey& key, uint64_t x) {
  uint64_t y = 0;
  for (size_t i = 0; i < key.n; ++i) {
    bool bit = false;
    for (size_t j = 0; j < key.m; ++j) {
      for (size_t k = j; k < key.m; ++k) {
        bit ^= key.matrices[i].get(j, k) && ((x >> j) & 1) && ((x >> k) & 1);
      }
    }
    y |= static_cast<uint64_t>(bit) << i;
  }
  return y;
}

MVHashKey zero_key(size_t m, size_t n) {
  return MVHashKey{m, n, std::vector<f2::BitMatrix>(n, f2::BitMatrix(m, m))};
}

// f(x)_i = x_i: a balanced linear map, so the phi_r are orthonormal.
MVHashKey diagonal_key(size_t m, size_t n) {
  MVHashKey key = zero_key(m, n);
  for (size_t i = 0; i < n; ++i) {
    key.matrices[i].set(i, i, true);
  }
  return key;
}

MVHashKey seeded_key(uint64_t seed, size_t m = 8, size_t n = 3) {
  Rng rng(seed);
  return mv_keygen(m, n, rng);
}

std::vector<double> real_parts(const sv::StateVector& s) {
  std::vector<double> v;
  for (auto a : s.amplitudes()) {
    v.push_back(a.real());
  }
  return v;
}

// ||u - proj_v u|| / ||u||: zero iff u is parallel to v.
double parallel_residual(const std::vector<double>& u, const std::vector<double>& v) {
  double uv = 0, vv = 0, uu = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    vv += v[i] * v[i];
    uu += u[i] * u[i];
  }
  double r = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    double d = u[i] - uv / vv * v[i];
    r += d * d;
  }
  return std::sqrt(r / uu);
}

std::vector<double> phi_kernel_sum(const MVHashKey& key, uint64_t y) {
  std::vector<double> sum(size_t{1} << key.m, 0);
  for (uint64_t r = 0; r < (uint64_t{1} << key.n); ++r) {
    if (parity(r & y)) {
      continue;
    }
    auto phi = real_parts(make_phi(key, r));
    for (size_t x = 0; x < sum.size(); ++x) {
      sum[x] += phi[x];
    }
  }
  return sum;
}

std::vector<double> weighted_bolts(const MVHashKey& key, uint64_t y, double w0, double wy) {
  auto b0 = real_parts(exact_bolt_component(key, 0).state);
  auto by = real_parts(exact_bolt_component(key, y).state);
  std::vector<double> out(b0.size());
  for (size_t x = 0; x < out.size(); ++x) {
    out[x] = w0 * b0[x] + wy * by[x];
  }
  return out;
}

sv::StateVector random_state(size_t q, Rng& rng) {
  std::vector<sv::Amplitude> a(size_t{1} << q);
  double n = 0;
  for (auto& z : a) {
    z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    n += std::norm(z);
  }
  for (auto& z : a) {
    z /= std::sqrt(n);
  }
  return sv::StateVector::from_amplitudes(a);
}

}  // namespace

TEST(MvHash, OriginHashesToZero) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(mv_hash_index(seeded_key(seed), 0), 0u);
  }
}

TEST(MvHash, ZeroKeyIsConstant) {
  MVHashKey key = zero_key(6, 2);
  for (uint64_t x = 0; x < 64; ++x) {
    EXPECT_EQ(mv_hash_index(key, x), 0u);
  }
}

TEST(MvHash, AgreesWithBilinearExpansion) {
  for (uint64_t seed : {8003u, 1u, 2u}) {
    MVHashKey key = seeded_key(seed);
    auto table = hash_table(key);
    for (uint64_t x = 0; x < 256; ++x) {
      ASSERT_EQ(table[x], bilinear_hash(key, x)) << "x=" << x;
      ASSERT_EQ(mv_hash(key, f2::BitVector::from_index(x, 8)).to_index(), table[x]);
    }
  }
}

TEST(MvHash, KeyShape) {
  MVHashKey key = seeded_key(5);
  EXPECT_EQ(key.matrices.size(), 3u);
  for (const auto& a : key.matrices) {
    for (size_t j = 0; j < 8; ++j) {
      for (size_t k = 0; k < j; ++k) {
        EXPECT_FALSE(a.get(j, k));
      }
    }
  }
  key.matrices[1].set(4, 2, true);
  EXPECT_THROW(key.validate(), std::invalid_argument);
  EXPECT_THROW(mv_hash_index(key, 1), std::invalid_argument);

  MVHashKey short_key = seeded_key(5);
  short_key.matrices.pop_back();
  EXPECT_THROW(short_key.validate(), DimensionMismatch);

  Rng rng(0);
  EXPECT_THROW(mv_keygen(3, 3, rng), std::invalid_argument);
  EXPECT_THROW(mv_hash(seeded_key(5), f2::BitVector(7)), DimensionMismatch);
}

TEST(MvHash, KeygenIsUniformOnUpperEntries) {
  Rng rng(77);
  size_t ones = 0, total = 0;
  for (int t = 0; t < 200; ++t) {
    MVHashKey key = mv_keygen(8, 3, rng);
    for (const auto& a : key.matrices) {
      for (size_t j = 0; j < 8; ++j) {
        for (size_t k = j; k < 8; ++k) {
          ones += a.get(j, k);
          ++total;
        }
      }
    }
  }
  double p = static_cast<double>(ones) / static_cast<double>(total);
  EXPECT_NEAR(p, 0.5, support::three_sigma(0.5, total));
}

TEST(Census, ZeroKey) {
  PreimageCensus c = census(zero_key(7, 3));
  EXPECT_EQ(c.at(0), 128u);
  for (uint64_t y = 1; y < 8; ++y) {
    EXPECT_EQ(c.at(y), 0u);
  }
  EXPECT_FALSE(c.surjective());
  EXPECT_EQ(c.image_size(), 1u);
}

TEST(Census, TotalsTwoToTheM) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(census(seeded_key(seed, 10, 4)).total(), 1024u);
  }
}

TEST(Census, MatchesRecordedFixture) {
  std::istringstream in(support::read_fixture("mvhash/census_m8_n3_seed8003.txt"));
  std::string line;
  bool surjective = false;
  std::vector<uint64_t> counts(8);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "surjective") {
      int s;
      ls >> s;
      surjective = s != 0;
    } else {
      ls >> counts.at(std::stoul(head));
    }
  }
  MVHashKey key = seeded_key(8003);
  PreimageCensus c = census(key);
  EXPECT_EQ(c.counts, counts);
  EXPECT_EQ(c.surjective(), surjective);

  std::vector<uint64_t> oracle(8, 0);
  for (uint64_t x = 0; x < 256; ++x) {
    oracle[bilinear_hash(key, x)]++;
  }
  EXPECT_EQ(oracle, counts);
}

TEST(Census, CapExceeded) {
  EXPECT_THROW(census(zero_key(23, 2)), CapExceeded);
}

TEST(Phi, ZeroIsUniform) {
  sv::StateVector phi = make_phi(seeded_key(3), 0);
  for (auto a : phi.amplitudes()) {
    EXPECT_DOUBLE_EQ(a.real(), 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(a.imag(), 0.0);
  }
}

TEST(Phi, GramMatchesCensusFourier) {
  // <phi_r|phi_s> = 2^{-m} sum_y C_y (-1)^{(r xor s) . y}.
  for (uint64_t seed : {8003u, 11u, 12u}) {
    MVHashKey key = seeded_key(seed);
    PreimageCensus c = census(key);
    for (uint64_t r = 0; r < 8; ++r) {
      for (uint64_t s = 0; s < 8; ++s) {
        double expect = 0;
        for (uint64_t y = 0; y < 8; ++y) {
          expect += parity((r ^ s) & y) ? -double(c.at(y)) : double(c.at(y));
        }
        expect /= 256.0;
        EXPECT_NEAR(sv::inner_product(make_phi(key, r), make_phi(key, s)).real(), expect, 1e-12);
      }
    }
  }
}

TEST(Phi, OrthonormalForBalancedSurjectiveKey) {
  MVHashKey key = diagonal_key(8, 3);
  PreimageCensus c = census(key);
  ASSERT_TRUE(c.surjective());
  for (uint64_t y = 0; y < 8; ++y) {
    ASSERT_EQ(c.at(y), 32u);
  }
  for (uint64_t r = 0; r < 8; ++r) {
    for (uint64_t s = 0; s < 8; ++s) {
      EXPECT_NEAR(std::abs(sv::inner_product(make_phi(key, r), make_phi(key, s))), r == s ? 1.0 : 0.0,
                  1e-12);
    }
  }
}

TEST(Phi, SpanEqualsBoltSpan) {
  for (uint64_t seed = 0; seed < 15; ++seed) {
    MVHashKey key = seeded_key(seed);
    PreimageCensus c = census(key);
    PhiSpan span = phi_span(key);
    EXPECT_EQ(span.rank(), c.image_size()) << "seed " << seed;
    EXPECT_EQ(span.rank_defect(), 8 - c.image_size());

    // Bolts lie in span{phi}.
    for (uint64_t y = 0; y < 8; ++y) {
      if (c.at(y) == 0) {
        EXPECT_THROW(exact_bolt_component(key, y), EmptyFiber);
        continue;
      }
      sv::StateVector b = exact_bolt_component(key, y).state;
      auto pb = project_onto_b(span, b);
      double res = 0;
      for (size_t x = 0; x < pb.size(); ++x) {
        res += std::norm(pb[x] - b.amplitude(x));
      }
      EXPECT_LT(std::sqrt(res), 1e-9);
    }
    // Each phi lies in span{bolts}: the bolts are orthonormal, so project directly.
    for (uint64_t r = 0; r < 8; ++r) {
      sv::StateVector phi = make_phi(key, r);
      std::vector<sv::Amplitude> proj(256, 0);
      for (uint64_t y = 0; y < 8; ++y) {
        if (c.at(y) == 0) {
          continue;
        }
        sv::StateVector b = exact_bolt_component(key, y).state;
        sv::Amplitude coef = sv::inner_product(b, phi);
        for (size_t x = 0; x < 256; ++x) {
          proj[x] += coef * b.amplitude(x);
        }
      }
      double res = 0;
      for (size_t x = 0; x < 256; ++x) {
        res += std::norm(proj[x] - phi.amplitude(x));
      }
      EXPECT_LT(std::sqrt(res), 1e-9);
    }
  }
}

TEST(Phi, RankDefectOnNonSurjectiveKey) {
  MVHashKey key = zero_key(6, 3);
  key.matrices[0].set(0, 1, true);  // f = (x0 x1, 0, 0): image {0, 1}
  EXPECT_EQ(phi_span(key).rank(), 2u);
  EXPECT_EQ(phi_span(key).rank_defect(), 6u);
}

TEST(RecoverR, ExactPhi) {
  MVHashKey key = diagonal_key(8, 3);
  for (uint64_t r = 0; r < 8; ++r) {
    EXPECT_EQ(recover_r(key, make_phi(key, r)), r);
  }
}

TEST(RecoverR, DuplicatesResolveToSmallest) {
  MVHashKey key = zero_key(6, 3);
  key.matrices[0].set(0, 1, true);
  // phi_r depends only on r_0, so every odd r gives phi_1.
  for (uint64_t r = 0; r < 8; ++r) {
    EXPECT_EQ(recover_r(key, make_phi(key, r)), r & 1);
  }
}

TEST(RecoverR, NoisyPhi) {
  MVHashKey key = diagonal_key(8, 3);
  Rng rng(4);
  for (uint64_t r = 0; r < 8; ++r) {
    auto amps = make_phi(key, r).amplitudes();
    double n = 0;
    for (auto& a : amps) {
      a += sv::Amplitude{rng.uniform(-1e-8, 1e-8), rng.uniform(-1e-8, 1e-8)};
      n += std::norm(a);
    }
    for (auto& a : amps) {
      a /= std::sqrt(n);
    }
    EXPECT_EQ(recover_r(key, sv::StateVector::from_amplitudes(amps)), r);
  }
}

TEST(RecoverR, BoltInputRaises) {
  for (uint64_t seed : {8003u, 21u}) {
    MVHashKey key = seeded_key(seed);
    PreimageCensus c = census(key);
    for (uint64_t y = 0; y < 8; ++y) {
      if (c.at(y) == 0) {
        continue;
      }
      sv::StateVector b = exact_bolt_component(key, y).state;
      // |<phi_r|bolt_y>| = sqrt(C_y / 2^m) for every r.
      for (double ov : phi_overlaps(key, b)) {
        EXPECT_NEAR(ov, std::sqrt(c.at(y) / 256.0), 1e-12);
      }
      EXPECT_THROW(recover_r(key, b), NumericalFailure);
    }
  }
}

TEST(Verify, OwnBoltAcceptsAlways) {
  MVHashKey key = seeded_key(8003);
  Rng rng(9);
  for (uint64_t y = 0; y < 8; ++y) {
    sv::StateVector b = exact_bolt_component(key, y).state;
    EXPECT_NEAR(mv_accept_probability(key, y, b), 1.0, 1e-12);
    for (int shot = 0; shot < 20; ++shot) {
      VerifyOutcome v = mv_verify(key, y, b, rng);
      ASSERT_TRUE(v.accept);
      EXPECT_NEAR(sv::fidelity(v.post_state, b), 1.0, 1e-12);
    }
  }
}

TEST(Verify, OtherBoltRejectsWithItsSerial) {
  MVHashKey key = seeded_key(8003);
  Rng rng(10);
  for (uint64_t y = 0; y < 8; ++y) {
    for (uint64_t yp = 0; yp < 8; ++yp) {
      if (y == yp) {
        continue;
      }
      sv::StateVector b = exact_bolt_component(key, yp).state;
      EXPECT_NEAR(mv_accept_probability(key, y, b), 0.0, 1e-12);
      VerifyOutcome v = mv_verify(key, y, b, rng);
      EXPECT_FALSE(v.accept);
      EXPECT_TRUE(v.in_b);
      EXPECT_EQ(v.measured, yp);
    }
  }
}

TEST(Verify, BasisStateMatchesProjectorPrediction) {
  MVHashKey key = seeded_key(8003);
  PreimageCensus c = census(key);
  Rng rng(11);
  for (uint64_t x : {3u, 77u, 200u}) {
    sv::StateVector s = sv::StateVector::basis_state(8, x);
    uint64_t y = mv_hash_index(key, x);
    // P_B |x> = sum_y' |bolt_y'><bolt_y'|x>, so Pi_y P_B |x> has norm^2 1 / C_y.
    double predicted = 1.0 / static_cast<double>(c.at(y));
    EXPECT_NEAR(mv_accept_probability(key, y, s), predicted, 1e-12);
    size_t accepted = 0;
    for (int shot = 0; shot < 1000; ++shot) {
      accepted += mv_verify(key, y, s, rng).accept;
    }
    EXPECT_NEAR(accepted / 1000.0, predicted, 0.05);
  }
}

TEST(Verify, AncillaAgreesOnOrthonormalFamily) {
  MVHashKey key = diagonal_key(8, 3);
  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    sv::StateVector psi = random_state(8, rng);
    auto pb = project_onto_b(phi_span(key), psi);
    Rng a(100 + t);
    AncillaVerifyOutcome anc = mv_verify_ancilla(key, 5, psi, a);
    EXPECT_NEAR(anc.zero_branch_probability, sv::kernels::squared_norm(pb), 1e-10);
  }
}

TEST(Verify, AncillaPostStateMatchesExactProjection) {
  for (uint64_t seed : {8003u, 31u}) {
    MVHashKey key = seeded_key(seed);
    Rng rng(seed);
    for (int t = 0; t < 10; ++t) {
      sv::StateVector psi = random_state(8, rng);
      AncillaVerifyOutcome anc = mv_verify_ancilla(key, 0, psi, rng);
      if (!anc.outcome.in_b) {
        continue;
      }
      // Exact post-state for hash outcome y': normalized Pi_{y'} P_B psi.
      auto pb = project_onto_b(phi_span(key), psi);
      auto table = hash_table(key);
      std::vector<sv::Amplitude> expect(256, 0);
      double n = 0;
      for (size_t x = 0; x < 256; ++x) {
        if (table[x] == anc.outcome.measured) {
          expect[x] = pb[x];
          n += std::norm(pb[x]);
        }
      }
      for (auto& z : expect) {
        z /= std::sqrt(n);
      }
      EXPECT_NEAR(sv::fidelity(anc.outcome.post_state, sv::StateVector::from_amplitudes(expect)), 1.0,
                  1e-9);
    }
  }
}

TEST(Verify, AncillaCapEnforced) {
  Rng rng(1);
  MVHashKey key = seeded_key(1, 10, 3);
  EXPECT_THROW(mv_verify_ancilla(key, 0, sv::StateVector(10), rng), CapExceeded);
}

TEST(BoltIdentity, SqrtWeightedSumIsParallelToKernelPhiSum) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    MVHashKey key = seeded_key(1000 + seed);
    PreimageCensus c = census(key);
    for (uint64_t y = 1; y < 8; ++y) {
      if (c.at(y) == 0 || c.at(0) == 0) {
        continue;
      }
      auto lhs = weighted_bolts(key, y, std::sqrt(double(c.at(0))), std::sqrt(double(c.at(y))));
      EXPECT_LT(parallel_residual(lhs, phi_kernel_sum(key, y)), 1e-10);
    }
  }
}

TEST(BoltIdentity, LinearWeightsAreParallelOnlyForEqualFibers) {
  MVHashKey key = seeded_key(8003);
  PreimageCensus c = census(key);
  for (uint64_t y = 1; y < 8; ++y) {
    auto lhs = weighted_bolts(key, y, double(c.at(0)), double(c.at(y)));
    double res = parallel_residual(lhs, phi_kernel_sum(key, y));
    if (c.at(y) == c.at(0)) {
      EXPECT_LT(res, 1e-10);
    } else {
      EXPECT_GT(res, 1e-3);
    }
  }
}

TEST(Clone, PsiYIsUniformOverXy) {
  MVHashKey key = seeded_key(8003);
  auto table = hash_table(key);
  for (uint64_t y = 1; y < 8; ++y) {
    sv::StateVector s = psi_y(key, y);
    PreimageCensus c = census(key);
    double a = 1.0 / std::sqrt(double(c.at(0) + c.at(y)));
    for (uint64_t x = 0; x < 256; ++x) {
      bool in = table[x] == 0 || table[x] == y;
      EXPECT_NEAR(s.amplitude(x).real(), in ? a : 0.0, 1e-12);
    }
  }
}

TEST(Clone, IterationMatchesPsiY) {
  MVHashKey key = seeded_key(8003);
  Rng rng(13);
  for (uint64_t y = 1; y < 8; ++y) {
    CloneIteration it = clone_iteration(key, y, rng);
    EXPECT_GT(it.uncompute_norm, 0.0);
    uint64_t want = it.success ? y : 0;
    EXPECT_EQ(it.measured, want);
    EXPECT_NEAR(sv::fidelity(it.state, exact_bolt_component(key, want).state), 1.0, 1e-9);
  }
}

TEST(Clone, FidelityAndSupport) {
  for (uint64_t seed : {8003u, 40u, 41u}) {
    MVHashKey key = seeded_key(seed);
    PreimageCensus c = census(key);
    auto table = hash_table(key);
    Rng rng(seed);
    for (uint64_t y = 1; y < 8; ++y) {
      if (c.at(y) == 0) {
        EXPECT_THROW(attack_clone(key, y, rng), EmptyFiber);
        continue;
      }
      CloneResult res = attack_clone(key, y, rng);
      EXPECT_EQ(res.bolt.serial, y);
      EXPECT_GE(sv::fidelity(res.bolt.state, exact_bolt_component(key, y).state), 1 - 1e-9);
      for (uint64_t x = 0; x < 256; ++x) {
        if (std::abs(res.bolt.state.amplitude(x)) > 1e-12) {
          EXPECT_EQ(table[x], y);
        }
      }
    }
  }
}

TEST(Clone, SuccessRateMatchesCensus) {
  MVHashKey key = seeded_key(8003);
  PreimageCensus c = census(key);
  Rng rng(14);
  for (uint64_t y : {1u, 4u}) {
    double p = double(c.at(y)) / double(c.at(0) + c.at(y));
    size_t hits = 0;
    for (int t = 0; t < 1000; ++t) {
      hits += clone_iteration(key, y, rng).success;
    }
    EXPECT_NEAR(hits / 1000.0, p, 0.05);
    EXPECT_NEAR(hits / 1000.0, p, support::three_sigma(p, 1000));
  }
}

TEST(Clone, OutputPassesVerification) {
  MVHashKey key = seeded_key(8003);
  Rng rng(15);
  CloneResult res = attack_clone(key, 6, rng);
  EXPECT_NEAR(mv_accept_probability(key, 6, res.bolt.state), 1.0, 1e-9);
  for (int shot = 0; shot < 100; ++shot) {
    ASSERT_TRUE(mv_verify(key, 6, res.bolt.state, rng).accept);
  }
}

TEST(Clone, RejectsZeroSerial) {
  Rng rng(0);
  EXPECT_THROW(attack_clone(seeded_key(8003), 0, rng), std::invalid_argument);
}

TEST(Clone, FullBoltHasKPlusOneFactors) {
  MVHashKey key = seeded_key(8003);
  Rng rng(16);
  FullBolt fb = attack_full_bolt(key, 3, 2, rng);
  ASSERT_EQ(fb.components.size(), 3u);
  EXPECT_GE(fb.iterations, 3u);
  sv::StateVector exact = exact_bolt_component(key, 3).state;
  for (const auto& comp : fb.components) {
    EXPECT_GE(sv::fidelity(comp.state, exact), 1 - 1e-9);
  }
}

TEST(SchemeParamsTest, PublishedSetting) {
  SchemeParams p = SchemeParams::published(3);
  EXPECT_EQ(p.k, 6u);
  EXPECT_EQ(p.m(), 18u);
  EXPECT_TRUE(p.matches_published());
  EXPECT_FALSE((SchemeParams{3, 2}).matches_published());
}

TEST(LangWeil, MinFiberRatioPositive) {
  SchemeParams p = SchemeParams::published(2);
  ASSERT_EQ(p.m(), 8u);
  double worst = 1.0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    PreimageCensus c = census(seeded_key(5000 + seed, p.m(), p.n));
    double r = min_fiber_ratio(c);
    EXPECT_GT(r, 0.0) << "seed " << seed;
    worst = std::min(worst, r);
  }
  std::cout << "min C_y/(C_0+C_y) over 50 keys at n=2, m=8: " << worst << "\n";
  RecordProperty("min_fiber_ratio", std::to_string(worst));
}
