#include "qmoney/hidden_subspace.h"

#include <cmath>
#include <string>

#include "qmoney/errors.h"

namespace qmoney::hs {

void HSParams::validate() const {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument("n must be a positive even integer, got " + std::to_string(n));
  }
  if (d < 1) {
    throw std::invalid_argument("degree must be at least 1");
  }
  if (beta_den == 0 || beta_num <= beta_den) {
    throw std::invalid_argument("beta must be a rational > 1");
  }
}

HSInstance hs_gen(const HSParams& params, Rng& rng) {
  params.validate();
  f2::Subspace a = f2::random_subspace(params.n, rng);
  f2::PolySystem serial = f2::sample_vanishing(a, params.d, params.m(), rng);
  return HSInstance{a, HSBanknote{std::move(serial), a}};
}

f2::BitVector hs_measure(const HSBanknote& note, Rng& rng) { return f2::sample_uniform(note.money, rng); }

f2::Subspace hs_attack(const f2::PolySystem& serial, const f2::BitVector& x) {
  if (!serial.is_common_root(x)) {
    throw std::invalid_argument("attack point " + x.to_string() + " is not a common root of the serial");
  }
  return f2::kernel_basis(f2::jacobian_at(serial, x));
}

VerifierOperator::VerifierOperator(const f2::Subspace& a) : n_(a.ambient_dim()) {
  if (n_ > sv::qubit_cap()) {
    throw CapExceeded("verifier on " + std::to_string(n_) + " qubits exceeds the cap");
  }
  in_a_.assign(size_t{1} << n_, false);
  in_perp_.assign(size_t{1} << n_, false);
  for (const auto& x : a.elements()) {
    in_a_[x.to_index()] = true;
  }
  for (const auto& y : f2::orthogonal_complement(a).elements()) {
    in_perp_[y.to_index()] = true;
  }
}

std::vector<sv::Amplitude> VerifierOperator::apply(std::span<const sv::Amplitude> psi) const {
  if (psi.size() != in_a_.size()) {
    throw DimensionMismatch("verifier on " + std::to_string(n_) + " qubits applied to " +
                            std::to_string(psi.size()) + " amplitudes");
  }
  std::vector<sv::Amplitude> v(psi.begin(), psi.end());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!in_a_[i]) {
      v[i] = 0;
    }
  }
  sv::kernels::walsh_hadamard(v, 0, n_);
  for (size_t i = 0; i < v.size(); ++i) {
    if (!in_perp_[i]) {
      v[i] = 0;
    }
  }
  sv::kernels::walsh_hadamard(v, 0, n_);
  return v;
}

double hs_verify_state(const HSBanknote& note, const sv::StateVector& psi) {
  const f2::Subspace& a = note.money;
  if (psi.num_qubits() != a.ambient_dim()) {
    throw DimensionMismatch("state width differs from the subspace ambient dimension");
  }
  std::vector<sv::Amplitude> projected = VerifierOperator(a).apply(psi.amplitudes());

  // Rank-one form <A|psi> |A>.
  std::vector<f2::BitVector> points = a.elements();
  const double amp = 1.0 / std::sqrt(static_cast<double>(points.size()));
  sv::Amplitude overlap = 0;
  for (const auto& x : points) {
    overlap += amp * psi.amplitude(x.to_index());
  }
  std::vector<sv::Amplitude> expected(psi.dim(), 0);
  for (const auto& x : points) {
    expected[x.to_index()] = overlap * amp;
  }
  double err = 0;
  for (size_t i = 0; i < expected.size(); ++i) {
    err = std::max(err, std::abs(projected[i] - expected[i]));
  }
  if (err > 1e-9) {
    throw InvariantViolation("verifier operator deviates from |A><A| by " + std::to_string(err));
  }
  return sv::kernels::squared_norm(projected);
}

AttackStats run_attack_trials(const HSParams& params, size_t trials, uint64_t seed) {
  params.validate();
  AttackStats stats;
  stats.trials = trials;
  for (size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    HSInstance inst = hs_gen(params, rng);
    f2::BitVector x = hs_measure(inst.note, rng);
    f2::Subspace recovered = hs_attack(inst.note.serial, x);
    AttackTrial rec;
    rec.exact = f2::subspace_equal(recovered, inst.secret);
    rec.contains_secret = f2::intersection(recovered, inst.secret).dim() == inst.secret.dim();
    rec.recovered_dim = recovered.dim();
    stats.exact += rec.exact;
    stats.inclusion += rec.contains_secret;
    if (!rec.exact && !(rec.contains_secret && rec.recovered_dim > inst.secret.dim())) {
      ++stats.failures_not_superspace;
    }
    stats.records.push_back(rec);
  }
  return stats;
}

}  // namespace qmoney::hs
