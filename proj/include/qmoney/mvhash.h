#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmoney/f2core.h"
#include "qmoney/rng.h"
#include "qmoney/statevec.h"

namespace qmoney::mv {

/// f(x)_i = x^T A_i x over GF(2), A_i upper triangular (diagonal included).
struct MVHashKey {
  size_t m = 0;
  size_t n = 0;
  std::vector<f2::BitMatrix> matrices;

  /// Shape check: n matrices, each m x m with zeros strictly below the diagonal.
  void validate() const;
};

/// The requested fiber is empty, so no bolt with that serial exists.
struct EmptyFiber : std::domain_error {
  using std::domain_error::domain_error;
};

inline constexpr size_t kMaxHashInputBits = 22;
inline constexpr size_t kMaxHashOutputBits = 16;

MVHashKey mv_keygen(size_t m, size_t n, Rng& rng);
f2::BitVector mv_hash(const MVHashKey& key, const f2::BitVector& x);
/// Hash of basis index x (bit j = x_j), as an index (bit i = f(x)_i).
uint64_t mv_hash_index(const MVHashKey& key, uint64_t x);
/// f over all 2^m inputs, indexed by input.
std::vector<uint64_t> hash_table(const MVHashKey& key);

struct PreimageCensus {
  size_t m = 0;
  size_t n = 0;
  std::vector<uint64_t> counts;  // counts[y] = #f^{-1}(y)

  bool surjective() const;
  size_t image_size() const;
  uint64_t total() const;
  uint64_t at(uint64_t y) const { return counts.at(y); }
};

/// Exhaustive preimage counts; m <= kMaxHashInputBits.
PreimageCensus census(const MVHashKey& key);

/// 2^{-m/2} sum_x (-1)^{r . f(x)} |x>.
sv::StateVector make_phi(const MVHashKey& key, uint64_t r);

/// Index r maximizing |<phi_r|psi>| by enumeration of all 2^n candidates.
/// Exact duplicates phi_r = phi_s resolve to the smallest index. Throws
/// NumericalFailure when the best overlap is below 0.9.
uint64_t recover_r(const MVHashKey& key, const sv::StateVector& psi);
/// |<phi_r|psi>| for every r.
std::vector<double> phi_overlaps(const MVHashKey& key, const sv::StateVector& psi);

/// Uniform superposition over f^{-1}(y). Throws EmptyFiber when C_y = 0.
struct BoltComponent {
  uint64_t serial = 0;
  sv::StateVector state{0};
};
BoltComponent exact_bolt_component(const MVHashKey& key, uint64_t y);

/// Orthonormal basis of B = span{phi_r} from Gram-Schmidt over r = 0..2^n-1.
struct PhiSpan {
  std::vector<std::vector<double>> basis;
  size_t num_phi = 0;
  size_t rank() const { return basis.size(); }
  /// num_phi - rank: collisions among the phi_r (non-surjective keys).
  size_t rank_defect() const { return num_phi - rank(); }
};
PhiSpan phi_span(const MVHashKey& key);

/// Orthogonal projection onto B, unnormalized.
std::vector<sv::Amplitude> project_onto_b(const PhiSpan& span, const sv::StateVector& psi);

struct VerifyOutcome {
  bool accept = false;
  bool in_b = false;          // outcome of the projective measurement onto B
  uint64_t measured = 0;      // hash measurement, valid when in_b
  sv::StateVector post_state{0};
};

/// Two-step verification: measure {P_B, 1 - P_B}, then measure f and compare
/// with y. Uses the exact span projector.
VerifyOutcome mv_verify(const MVHashKey& key, uint64_t y, const sv::StateVector& psi, Rng& rng);
/// Probability that mv_verify accepts: ||Pi_y P_B psi||^2.
double mv_accept_probability(const MVHashKey& key, uint64_t y, const sv::StateVector& psi);

/// Ancilla-register form of the projection step: compute r into a register,
/// uncompute phi_r, measure the x register against 0, recompute and
/// uncompute. The r-oracle is modeled as psi -> sum_r alpha_r |r>|phi_r> +
/// |0>|psi_perp> with alpha the (minimum-norm) coordinates of P_B psi in the
/// phi family, renormalized. Needs m + 2n <= 14.
struct AncillaVerifyOutcome {
  VerifyOutcome outcome;
  /// Probability that the x register reads 0 after uncomputing phi_r.
  double zero_branch_probability = 0;
};
AncillaVerifyOutcome mv_verify_ancilla(const MVHashKey& key, uint64_t y, const sv::StateVector& psi,
                                       Rng& rng);

struct CloneIteration {
  bool success = false;
  uint64_t measured = 0;
  /// Squared norm kept by post-selecting the r register on 0 after
  /// uncomputing r.
  double uncompute_norm = 0;
  sv::StateVector state{0};  // x register after the hash measurement
};

/// One pass of the cloning loop for serial y (steps 2-6).
CloneIteration clone_iteration(const MVHashKey& key, uint64_t y, Rng& rng);
/// State before the hash measurement: normalized sum_{r . y = 0} phi_r.
sv::StateVector psi_y(const MVHashKey& key, uint64_t y);

struct CloneResult {
  BoltComponent bolt;
  size_t iterations = 0;
};

/// Repeats clone_iteration until the hash measurement yields y. Throws
/// EmptyFiber when C_y = 0 and NumericalFailure after max_iterations.
CloneResult attack_clone(const MVHashKey& key, uint64_t y, Rng& rng, size_t max_iterations = 100000);

/// k + 1 independent clones, i.e. the factors of |$_y> = |$'_y>^{(k+1)}.
struct FullBolt {
  std::vector<BoltComponent> components;
  size_t iterations = 0;
};
FullBolt attack_full_bolt(const MVHashKey& key, uint64_t y, size_t k, Rng& rng);

/// Scheme parameters (n, k, m = k n).
struct SchemeParams {
  size_t n = 0;
  size_t k = 0;
  size_t m() const { return k * n; }
  /// True iff k = 2n, the published setting (m = 2n^2).
  bool matches_published() const { return k == 2 * n; }
  static SchemeParams published(size_t n) { return SchemeParams{n, 2 * n}; }
};

/// min over nonzero y of C_y / (C_0 + C_y).
double min_fiber_ratio(const PreimageCensus& c);

}  // namespace qmoney::mv
