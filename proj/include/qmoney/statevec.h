#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qmoney/f2core.h"
#include "qmoney/rng.h"

namespace qmoney::sv {

using Amplitude = std::complex<double>;
/// Row-major 2x2 matrix {u00, u01, u10, u11}.
using Gate1 = std::array<Amplitude, 4>;

inline constexpr size_t kDefaultQubitCap = 24;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr size_t kNormCheckInterval = 100;

/// Maximum register width; QMONEY_QUBIT_CAP overrides the default of 24.
size_t qubit_cap();

/// Contiguous bit range [offset, offset + width) of a basis-state index.
/// Bit t of the register value is qubit offset + t.
struct Register {
  std::string name;
  size_t offset = 0;
  size_t width = 0;

  uint64_t mask() const { return width == 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1) << offset; }
  uint64_t extract(uint64_t index) const { return (index & mask()) >> offset; }
  uint64_t place(uint64_t value) const { return (value << offset) & mask(); }
  bool overlaps(const Register& other) const;
};

/// Named registers packed from qubit 0 upward in order of addition.
class RegisterLayout {
 public:
  const Register& add(const std::string& name, size_t width);
  const Register& get(const std::string& name) const;
  size_t total_qubits() const { return total_; }
  const std::vector<Register>& registers() const { return regs_; }

 private:
  std::vector<Register> regs_;
  size_t total_ = 0;
};

/// Dense pure state over q qubits. Basis index bit i is qubit i.
///
/// Values are immutable: every operation returns a new state carrying an
/// incremented gate counter. Every kNormCheckInterval gates the norm is
/// re-checked and drift beyond kNormTolerance raises InvariantViolation.
class StateVector {
 public:
  /// |0...0> on q qubits.
  explicit StateVector(size_t num_qubits);
  static StateVector basis_state(size_t num_qubits, uint64_t index);
  /// Throws if the vector is not normalized within kNormTolerance.
  static StateVector from_amplitudes(std::vector<Amplitude> amps);

  size_t num_qubits() const { return q_; }
  size_t dim() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude amplitude(uint64_t index) const { return amps_.at(index); }
  double norm() const;
  size_t gate_count() const { return gates_; }

  /// Successor state with new amplitudes after `gates` gate applications.
  StateVector evolve(std::vector<Amplitude> amps, size_t gates = 1) const;

 private:
  StateVector() = default;
  size_t q_ = 0;
  std::vector<Amplitude> amps_;
  size_t gates_ = 0;
};

StateVector prepare_uniform(size_t num_qubits, std::span<const f2::BitVector> points);
StateVector prepare_uniform(size_t num_qubits, std::span<const uint64_t> indices);

/// Flips the sign of every amplitude whose index satisfies pred.
StateVector phase_oracle(const StateVector& s, const std::function<bool(uint64_t)>& pred);

/// |x>|t> -> |x>|t XOR f(x)> with x read from `source`, t in `target`.
StateVector compute_into(const StateVector& s, const Register& source, const Register& target,
                         const std::function<uint64_t(uint64_t)>& f);

struct Measurement {
  uint64_t outcome = 0;
  double probability = 0;
  StateVector collapsed;
};

/// Born-rule measurement of one register; the rest is renormalized.
Measurement measure_register(const StateVector& s, const Register& reg, Rng& rng);
/// Probability of each register value.
std::vector<double> register_distribution(const StateVector& s, const Register& reg);
/// Projects onto reg == value and renormalizes; probability written to *prob.
StateVector postselect(const StateVector& s, const Register& reg, uint64_t value, double* prob);

StateVector hadamard_all(const StateVector& s);
StateVector hadamard(const StateVector& s, const Register& reg);
StateVector apply_single_qubit(const StateVector& s, size_t qubit, const Gate1& u);

/// |low> (x) |high>: low occupies the least significant qubits.
StateVector tensor(const StateVector& low, const StateVector& high);
/// Amplitudes of reg when the other qubits are in a known product with it.
/// Throws if the state is not a product across reg (within 1e-9).
StateVector extract_register(const StateVector& s, const Register& reg);

/// <a|b>, conjugate-linear in a.
Amplitude inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);
/// ||a><a| - |b><b|||_1 = 2 sqrt(1 - |<a|b>|^2).
double trace_distance_pure(const StateVector& a, const StateVector& b);

/// CSV rows "index,re,im" for every amplitude.
void dump_csv(const StateVector& s, std::ostream& out);

namespace kernels {
/// In-place Hadamard on qubits [offset, offset + width) of a raw amplitude
/// array; the array need not be normalized.
void walsh_hadamard(std::span<Amplitude> amps, size_t offset, size_t width);
double squared_norm(std::span<const Amplitude> amps);
}  // namespace kernels

}  // namespace qmoney::sv
