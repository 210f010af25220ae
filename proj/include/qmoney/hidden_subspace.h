#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmoney/f2core.h"
#include "qmoney/f2poly.h"
#include "qmoney/rng.h"
#include "qmoney/statevec.h"

namespace qmoney::hs {

struct HSParams {
  size_t n = 8;
  unsigned d = 3;
  uint64_t beta_num = 2;
  uint64_t beta_den = 1;

  /// Number of serial polynomials, floor(beta * n).
  size_t m() const { return static_cast<size_t>(n * beta_num / beta_den); }
  /// Throws std::invalid_argument unless n is even, d >= 1 and beta > 1.
  void validate() const;
};

/// Serial polynomials plus the classical description of the money state.
struct HSBanknote {
  f2::PolySystem serial;
  f2::Subspace money;
};

struct HSInstance {
  f2::Subspace secret;
  HSBanknote note;
};

HSInstance hs_gen(const HSParams& params, Rng& rng);

/// Computational-basis measurement of |A>: a uniform element of A.
f2::BitVector hs_measure(const HSBanknote& note, Rng& rng);

/// Kernel of the Jacobian of the serial at x. Throws std::invalid_argument
/// when x is not a common root.
f2::Subspace hs_attack(const f2::PolySystem& serial, const f2::BitVector& x);

/// The verifier V_A = H P_{A-perp} H P_A assembled from membership
/// projectors, applicable to arbitrary (unnormalized) amplitude vectors.
class VerifierOperator {
 public:
  explicit VerifierOperator(const f2::Subspace& a);
  size_t num_qubits() const { return n_; }
  std::vector<sv::Amplitude> apply(std::span<const sv::Amplitude> psi) const;

 private:
  size_t n_;
  std::vector<bool> in_a_;
  std::vector<bool> in_perp_;
};

/// Acceptance probability |<A|psi>|^2 of the verifier. Evaluates the
/// operator form and checks it against the rank-one projector (1e-9),
/// raising InvariantViolation on disagreement.
double hs_verify_state(const HSBanknote& note, const sv::StateVector& psi);

struct AttackTrial {
  bool exact = false;
  bool contains_secret = false;
  size_t recovered_dim = 0;
};

struct AttackStats {
  size_t trials = 0;
  size_t exact = 0;
  size_t inclusion = 0;
  /// Failures whose recovered space was not a strict superspace of A.
  size_t failures_not_superspace = 0;
  std::vector<AttackTrial> records;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(exact) / trials; }
};

/// Fresh instance, measurement and attack per trial; trial t draws from
/// Rng::stream(seed, t).
AttackStats run_attack_trials(const HSParams& params, size_t trials, uint64_t seed);

}  // namespace qmoney::hs
