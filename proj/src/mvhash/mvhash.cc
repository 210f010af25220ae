#include "qmoney/mvhash.h"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <string>

#include "qmoney/errors.h"

namespace qmoney::mv {

namespace {

bool parity(uint64_t v) { return (std::popcount(v) & 1) != 0; }

std::vector<uint64_t> row_words(const MVHashKey& key) {
  std::vector<uint64_t> rows;
  rows.reserve(key.n * key.m);
  for (const auto& a : key.matrices) {
    for (size_t j = 0; j < key.m; ++j) {
      rows.push_back(a.row(j).to_index());
    }
  }
  return rows;
}

uint64_t hash_with_rows(const std::vector<uint64_t>& rows, size_t m, size_t n, uint64_t x) {
  uint64_t y = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t acc = 0;
    for (uint64_t rest = x; rest != 0; rest &= rest - 1) {
      acc ^= rows[i * m + static_cast<size_t>(std::countr_zero(rest))] & x;
    }
    y |= static_cast<uint64_t>(parity(acc)) << i;
  }
  return y;
}

void require_table_size(const MVHashKey& key) {
  key.validate();
  if (key.m > kMaxHashInputBits) {
    throw CapExceeded("m = " + std::to_string(key.m) + " exceeds the enumeration cap of " +
                      std::to_string(kMaxHashInputBits));
  }
}

std::vector<double> phi_amplitudes(const std::vector<uint64_t>& table, uint64_t r) {
  const double a = 1.0 / std::sqrt(static_cast<double>(table.size()));
  std::vector<double> v(table.size());
  for (size_t x = 0; x < table.size(); ++x) {
    v[x] = parity(r & table[x]) ? -a : a;
  }
  return v;
}

sv::StateVector normalized_state(std::vector<sv::Amplitude> amps) {
  double n = std::sqrt(sv::kernels::squared_norm(amps));
  if (n == 0) {
    throw NumericalFailure("cannot normalize the zero vector");
  }
  for (auto& a : amps) {
    a /= n;
  }
  return sv::StateVector::from_amplitudes(std::move(amps));
}

// Recovers r from each |r>|phi_r> branch and XORs it into the r register,
// then keeps the r = 0 part. Returns the x-register vector (unnormalized).
std::vector<sv::Amplitude> uncompute_r(const MVHashKey& key, const std::vector<sv::Amplitude>& amps,
                                       const sv::Register& r, const sv::Register& x) {
  std::vector<sv::Amplitude> kept(size_t{1} << x.width, 0);
  for (uint64_t rv = 0; rv < (uint64_t{1} << r.width); ++rv) {
    std::vector<sv::Amplitude> branch(kept.size());
    for (uint64_t xv = 0; xv < branch.size(); ++xv) {
      branch[xv] = amps[r.place(rv) | x.place(xv)];
    }
    if (sv::kernels::squared_norm(branch) < 1e-30) {
      continue;
    }
    uint64_t rhat = recover_r(key, normalized_state(branch));
    if ((rv ^ rhat) != 0) {
      continue;  // branch lands on a nonzero r register and is discarded
    }
    for (uint64_t xv = 0; xv < branch.size(); ++xv) {
      kept[xv] += branch[xv];
    }
  }
  return kept;
}

struct HashMeasurement {
  uint64_t outcome;
  sv::StateVector state;
};

// Computes f into a fresh n-qubit ancilla and measures it.
HashMeasurement measure_hash(const std::vector<uint64_t>& table, size_t n, const sv::StateVector& x_state,
                             Rng& rng) {
  size_t m = x_state.num_qubits();
  sv::Register xr{"x", 0, m};
  sv::Register anc{"anc", m, n};
  sv::StateVector joint = sv::tensor(x_state, sv::StateVector(n));
  joint = sv::compute_into(joint, xr, anc, [&](uint64_t xv) { return table[xv]; });
  sv::Measurement meas = sv::measure_register(joint, anc, rng);
  return HashMeasurement{meas.outcome, sv::extract_register(meas.collapsed, xr)};
}

}  // namespace

void MVHashKey::validate() const {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("hash dimensions must be positive");
  }
  if (m > 64 || n > kMaxHashOutputBits) {
    throw CapExceeded("hash dimensions exceed m <= 64, n <= " + std::to_string(kMaxHashOutputBits));
  }
  if (matrices.size() != n) {
    throw DimensionMismatch("key has " + std::to_string(matrices.size()) + " matrices, expected " +
                            std::to_string(n));
  }
  for (const auto& a : matrices) {
    if (a.num_rows() != m || a.num_cols() != m) {
      throw DimensionMismatch("key matrix is not " + std::to_string(m) + " x " + std::to_string(m));
    }
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < j; ++k) {
        if (a.get(j, k)) {
          throw std::invalid_argument("key matrix has an entry below the diagonal");
        }
      }
    }
  }
}

MVHashKey mv_keygen(size_t m, size_t n, Rng& rng) {
  if (m <= n) {
    throw std::invalid_argument("mv_keygen needs m > n");
  }
  MVHashKey key{m, n, {}};
  for (size_t i = 0; i < n; ++i) {
    f2::BitMatrix a(m, m);
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = j; k < m; ++k) {
        a.set(j, k, rng.bit());
      }
    }
    key.matrices.push_back(std::move(a));
  }
  key.validate();
  return key;
}

uint64_t mv_hash_index(const MVHashKey& key, uint64_t x) {
  key.validate();
  return hash_with_rows(row_words(key), key.m, key.n, x);
}

f2::BitVector mv_hash(const MVHashKey& key, const f2::BitVector& x) {
  if (x.size() != key.m) {
    throw DimensionMismatch("hash input has " + std::to_string(x.size()) + " bits, expected " +
                            std::to_string(key.m));
  }
  return f2::BitVector::from_index(mv_hash_index(key, x.to_index()), key.n);
}

std::vector<uint64_t> hash_table(const MVHashKey& key) {
  require_table_size(key);
  std::vector<uint64_t> rows = row_words(key);
  std::vector<uint64_t> table(size_t{1} << key.m);
  for (uint64_t x = 0; x < table.size(); ++x) {
    table[x] = hash_with_rows(rows, key.m, key.n, x);
  }
  return table;
}

bool PreimageCensus::surjective() const { return image_size() == counts.size(); }

size_t PreimageCensus::image_size() const {
  size_t k = 0;
  for (uint64_t c : counts) {
    k += c > 0;
  }
  return k;
}

uint64_t PreimageCensus::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) {
    t += c;
  }
  return t;
}

PreimageCensus census(const MVHashKey& key) {
  PreimageCensus c{key.m, key.n, std::vector<uint64_t>(size_t{1} << key.n, 0)};
  for (uint64_t y : hash_table(key)) {
    c.counts[y]++;
  }
  return c;
}

sv::StateVector make_phi(const MVHashKey& key, uint64_t r) {
  if (r >> key.n) {
    throw DimensionMismatch("r has more than n bits");
  }
  std::vector<double> v = phi_amplitudes(hash_table(key), r);
  return sv::StateVector::from_amplitudes({v.begin(), v.end()});
}

std::vector<double> phi_overlaps(const MVHashKey& key, const sv::StateVector& psi) {
  std::vector<uint64_t> table = hash_table(key);
  if (psi.dim() != table.size()) {
    throw DimensionMismatch("state is not on m qubits");
  }
  // Fiber sums s_y, then <phi_r|psi> = 2^{-m/2} sum_y (-1)^{r.y} s_y.
  std::vector<sv::Amplitude> fiber(size_t{1} << key.n, 0);
  for (size_t x = 0; x < table.size(); ++x) {
    fiber[table[x]] += psi.amplitude(x);
  }
  const double a = 1.0 / std::sqrt(static_cast<double>(table.size()));
  std::vector<double> out(fiber.size());
  for (uint64_t r = 0; r < fiber.size(); ++r) {
    sv::Amplitude acc = 0;
    for (uint64_t y = 0; y < fiber.size(); ++y) {
      acc += parity(r & y) ? -fiber[y] : fiber[y];
    }
    out[r] = std::abs(acc) * a;
  }
  return out;
}

uint64_t recover_r(const MVHashKey& key, const sv::StateVector& psi) {
  std::vector<double> ov = phi_overlaps(key, psi);
  uint64_t best = 0;
  for (uint64_t r = 1; r < ov.size(); ++r) {
    if (ov[r] > ov[best] + 1e-10) {
      best = r;
    }
  }
  if (ov[best] < 0.9) {
    throw NumericalFailure("no phi_r has overlap >= 0.9 with the input (best " +
                           std::to_string(ov[best]) + ")");
  }
  return best;
}

BoltComponent exact_bolt_component(const MVHashKey& key, uint64_t y) {
  std::vector<uint64_t> table = hash_table(key);
  std::vector<uint64_t> fiber;
  for (uint64_t x = 0; x < table.size(); ++x) {
    if (table[x] == y) {
      fiber.push_back(x);
    }
  }
  if (fiber.empty()) {
    throw EmptyFiber("no preimage of serial " + std::to_string(y));
  }
  return BoltComponent{y, sv::prepare_uniform(key.m, fiber)};
}

PhiSpan phi_span(const MVHashKey& key) {
  std::vector<uint64_t> table = hash_table(key);
  PhiSpan span;
  span.num_phi = size_t{1} << key.n;
  for (uint64_t r = 0; r < span.num_phi; ++r) {
    std::vector<double> v = phi_amplitudes(table, r);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : span.basis) {
        double c = 0;
        for (size_t i = 0; i < v.size(); ++i) {
          c += b[i] * v[i];
        }
        for (size_t i = 0; i < v.size(); ++i) {
          v[i] -= c * b[i];
        }
      }
    }
    double nrm = 0;
    for (double t : v) {
      nrm += t * t;
    }
    nrm = std::sqrt(nrm);
    if (nrm < 1e-9) {
      continue;
    }
    for (double& t : v) {
      t /= nrm;
    }
    span.basis.push_back(std::move(v));
  }
  return span;
}

std::vector<sv::Amplitude> project_onto_b(const PhiSpan& span, const sv::StateVector& psi) {
  std::vector<sv::Amplitude> out(psi.dim(), 0);
  for (const auto& b : span.basis) {
    if (b.size() != psi.dim()) {
      throw DimensionMismatch("state is not on m qubits");
    }
    sv::Amplitude c = 0;
    for (size_t i = 0; i < b.size(); ++i) {
      c += b[i] * psi.amplitude(i);
    }
    for (size_t i = 0; i < b.size(); ++i) {
      out[i] += c * b[i];
    }
  }
  return out;
}

VerifyOutcome mv_verify(const MVHashKey& key, uint64_t y, const sv::StateVector& psi, Rng& rng) {
  std::vector<uint64_t> table = hash_table(key);
  std::vector<sv::Amplitude> pb = project_onto_b(phi_span(key), psi);
  double p_in = sv::kernels::squared_norm(pb);
  VerifyOutcome out;
  out.in_b = rng.uniform01() < p_in;
  if (!out.in_b) {
    std::vector<sv::Amplitude> rest = psi.amplitudes();
    for (size_t i = 0; i < rest.size(); ++i) {
      rest[i] -= pb[i];
    }
    out.post_state = normalized_state(std::move(rest));
    return out;
  }
  HashMeasurement hm = measure_hash(table, key.n, normalized_state(std::move(pb)), rng);
  out.measured = hm.outcome;
  out.accept = hm.outcome == y;
  out.post_state = hm.state;
  return out;
}

double mv_accept_probability(const MVHashKey& key, uint64_t y, const sv::StateVector& psi) {
  std::vector<uint64_t> table = hash_table(key);
  std::vector<sv::Amplitude> pb = project_onto_b(phi_span(key), psi);
  double p = 0;
  for (size_t x = 0; x < table.size(); ++x) {
    if (table[x] == y) {
      p += std::norm(pb[x]);
    }
  }
  return p;
}

AncillaVerifyOutcome mv_verify_ancilla(const MVHashKey& key, uint64_t y, const sv::StateVector& psi,
                                       Rng& rng) {
  if (key.m + 2 * key.n > 14) {
    throw CapExceeded("ancilla verification needs m + 2n <= 14");
  }
  std::vector<uint64_t> table = hash_table(key);
  const size_t dim_x = table.size(), num_r = size_t{1} << key.n;

  // Minimum-norm coordinates of P_B psi in the phi family.
  Eigen::MatrixXd phi(dim_x, num_r);
  for (uint64_t r = 0; r < num_r; ++r) {
    std::vector<double> v = phi_amplitudes(table, r);
    for (size_t x = 0; x < dim_x; ++x) {
      phi(x, r) = v[x];
    }
  }
  Eigen::VectorXd re(dim_x), im(dim_x);
  for (size_t x = 0; x < dim_x; ++x) {
    re(x) = psi.amplitude(x).real();
    im(x) = psi.amplitude(x).imag();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(phi);
  Eigen::VectorXd a_re = cod.solve(re), a_im = cod.solve(im);
  Eigen::VectorXd perp_re = re - phi * a_re, perp_im = im - phi * a_im;

  sv::RegisterLayout layout;
  sv::Register xr = layout.add("x", key.m);
  sv::Register rr = layout.add("r", key.n);
  std::vector<sv::Amplitude> amps(size_t{1} << layout.total_qubits(), 0);
  for (uint64_t r = 0; r < num_r; ++r) {
    sv::Amplitude alpha{a_re(r), a_im(r)};
    for (size_t x = 0; x < dim_x; ++x) {
      amps[rr.place(r) | xr.place(x)] += alpha * phi(x, r);
    }
  }
  for (size_t x = 0; x < dim_x; ++x) {
    amps[xr.place(x)] += sv::Amplitude{perp_re(x), perp_im(x)};
  }
  sv::StateVector s = normalized_state(std::move(amps));

  auto controlled_phase = [&](uint64_t idx) { return parity(rr.extract(idx) & table[xr.extract(idx)]); };
  // Uncompute phi_r: U_r^dagger = H^m (-1)^{r.f(x)}.
  s = sv::phase_oracle(s, controlled_phase);
  s = sv::hadamard(s, xr);

  AncillaVerifyOutcome res;
  std::vector<double> dist = sv::register_distribution(s, xr);
  res.zero_branch_probability = dist[0];
  sv::Measurement mx = sv::measure_register(s, xr, rng);
  if (mx.outcome != 0) {
    res.outcome.in_b = false;
    return res;
  }
  res.outcome.in_b = true;
  // Recompute phi_r, then uncompute r.
  s = sv::hadamard(mx.collapsed, xr);
  s = sv::phase_oracle(s, controlled_phase);
  sv::StateVector projected = normalized_state(uncompute_r(key, s.amplitudes(), rr, xr));
  HashMeasurement hm = measure_hash(table, key.n, projected, rng);
  res.outcome.measured = hm.outcome;
  res.outcome.accept = hm.outcome == y;
  res.outcome.post_state = hm.state;
  return res;
}

sv::StateVector psi_y(const MVHashKey& key, uint64_t y) {
  std::vector<uint64_t> table = hash_table(key);
  std::vector<sv::Amplitude> sum(table.size(), 0);
  for (uint64_t r = 0; r < (uint64_t{1} << key.n); ++r) {
    if (parity(r & y)) {
      continue;
    }
    std::vector<double> v = phi_amplitudes(table, r);
    for (size_t x = 0; x < sum.size(); ++x) {
      sum[x] += v[x];
    }
  }
  return normalized_state(std::move(sum));
}

CloneIteration clone_iteration(const MVHashKey& key, uint64_t y, Rng& rng) {
  std::vector<uint64_t> table = hash_table(key);
  sv::RegisterLayout layout;
  sv::Register rr = layout.add("r", key.n);
  sv::Register xr = layout.add("x", key.m);

  // Uniform superposition over {r : r . y = 0}.
  std::vector<uint64_t> kernel;
  for (uint64_t r = 0; r < (uint64_t{1} << key.n); ++r) {
    if (!parity(r & y)) {
      kernel.push_back(rr.place(r));
    }
  }
  sv::StateVector s = sv::prepare_uniform(layout.total_qubits(), kernel);
  // |r>|0> -> |r>|phi_r>.
  s = sv::hadamard(s, xr);
  s = sv::phase_oracle(s, [&](uint64_t idx) { return parity(rr.extract(idx) & table[xr.extract(idx)]); });

  CloneIteration it;
  std::vector<sv::Amplitude> x_part = uncompute_r(key, s.amplitudes(), rr, xr);
  it.uncompute_norm = sv::kernels::squared_norm(x_part);
  HashMeasurement hm = measure_hash(table, key.n, normalized_state(std::move(x_part)), rng);
  it.measured = hm.outcome;
  it.success = hm.outcome == y;
  it.state = hm.state;
  return it;
}

CloneResult attack_clone(const MVHashKey& key, uint64_t y, Rng& rng, size_t max_iterations) {
  if (y == 0 || (y >> key.n) != 0) {
    throw std::invalid_argument("serial must be a nonzero n-bit value");
  }
  PreimageCensus c = census(key);
  if (c.at(y) == 0) {
    throw EmptyFiber("serial " + std::to_string(y) +
                     " has no preimage; the cloning loop would never terminate");
  }
  CloneResult res;
  while (res.iterations < max_iterations) {
    ++res.iterations;
    CloneIteration it = clone_iteration(key, y, rng);
    if (it.success) {
      res.bolt = BoltComponent{y, it.state};
      return res;
    }
  }
  throw NumericalFailure("cloning did not succeed within " + std::to_string(max_iterations) +
                         " iterations");
}

FullBolt attack_full_bolt(const MVHashKey& key, uint64_t y, size_t k, Rng& rng) {
  FullBolt fb;
  for (size_t i = 0; i <= k; ++i) {
    CloneResult r = attack_clone(key, y, rng);
    fb.iterations += r.iterations;
    fb.components.push_back(std::move(r.bolt));
  }
  return fb;
}

double min_fiber_ratio(const PreimageCensus& c) {
  double best = 1.0;
  for (uint64_t y = 1; y < c.counts.size(); ++y) {
    uint64_t x_y = c.counts[0] + c.counts[y];
    best = std::min(best, x_y == 0 ? 0.0 : static_cast<double>(c.counts[y]) / static_cast<double>(x_y));
  }
  return best;
}

}  // namespace qmoney::mv
