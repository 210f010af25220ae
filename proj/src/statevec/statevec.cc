#include "qmoney/statevec.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "qmoney/errors.h"

namespace qmoney::sv {

namespace {

void require_cap(size_t q) {
  if (q > qubit_cap()) {
    throw CapExceeded(std::to_string(q) + " qubits exceeds the cap of " +
                      std::to_string(qubit_cap()));
  }
}

void require_register(const StateVector& s, const Register& reg) {
  if (reg.width == 0 || reg.offset + reg.width > s.num_qubits()) {
    throw DimensionMismatch("register '" + reg.name + "' does not fit in " +
                            std::to_string(s.num_qubits()) + " qubits");
  }
}

void require_same_size(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionMismatch("states on " + std::to_string(a.num_qubits()) + " and " +
                            std::to_string(b.num_qubits()) + " qubits");
  }
}

}  // namespace

size_t qubit_cap() {
  if (const char* env = std::getenv("QMONEY_QUBIT_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 40) {
      return v;
    }
  }
  return kDefaultQubitCap;
}

bool Register::overlaps(const Register& other) const {
  return offset < other.offset + other.width && other.offset < offset + width;
}

const Register& RegisterLayout::add(const std::string& name, size_t width) {
  for (const auto& r : regs_) {
    if (r.name == name) {
      throw std::invalid_argument("duplicate register '" + name + "'");
    }
  }
  regs_.push_back(Register{name, total_, width});
  total_ += width;
  return regs_.back();
}

const Register& RegisterLayout::get(const std::string& name) const {
  for (const auto& r : regs_) {
    if (r.name == name) {
      return r;
    }
  }
  throw std::invalid_argument("unknown register '" + name + "'");
}

StateVector::StateVector(size_t num_qubits) : q_(num_qubits) {
  require_cap(num_qubits);
  amps_.assign(size_t{1} << num_qubits, Amplitude{0, 0});
  amps_[0] = 1;
}

StateVector StateVector::basis_state(size_t num_qubits, uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) {
    throw DimensionMismatch("basis index out of range");
  }
  s.amps_[0] = 0;
  s.amps_[index] = 1;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
  size_t q = 0;
  while ((size_t{1} << q) < amps.size()) {
    ++q;
  }
  if ((size_t{1} << q) != amps.size()) {
    throw DimensionMismatch("amplitude count " + std::to_string(amps.size()) +
                            " is not a power of two");
  }
  require_cap(q);
  double n2 = kernels::squared_norm(amps);
  if (std::abs(std::sqrt(n2) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("amplitudes are not normalized (norm " +
                                std::to_string(std::sqrt(n2)) + ")");
  }
  StateVector s;
  s.q_ = q;
  s.amps_ = std::move(amps);
  return s;
}

double StateVector::norm() const { return std::sqrt(kernels::squared_norm(amps_)); }

StateVector StateVector::evolve(std::vector<Amplitude> amps, size_t gates) const {
  if (amps.size() != amps_.size()) {
    throw DimensionMismatch("evolved amplitude vector has the wrong size");
  }
  StateVector next;
  next.q_ = q_;
  next.amps_ = std::move(amps);
  next.gates_ = gates_ + gates;
  if (next.gates_ / kNormCheckInterval != gates_ / kNormCheckInterval) {
    double drift = std::abs(next.norm() - 1.0);
    if (drift > kNormTolerance) {
      throw InvariantViolation("norm drift " + std::to_string(drift) + " after " +
                               std::to_string(next.gates_) + " gates");
    }
  }
  return next;
}

StateVector prepare_uniform(size_t num_qubits, std::span<const uint64_t> indices) {
  if (indices.empty()) {
    throw std::invalid_argument("prepare_uniform needs at least one point");
  }
  StateVector zero(num_qubits);
  std::vector<Amplitude> amps(zero.dim(), 0);
  double a = 1.0 / std::sqrt(static_cast<double>(indices.size()));
  for (uint64_t i : indices) {
    if (i >= amps.size()) {
      throw DimensionMismatch("point outside the register");
    }
    if (amps[i] != Amplitude{0, 0}) {
      throw std::invalid_argument("prepare_uniform points must be distinct");
    }
    amps[i] = a;
  }
  return zero.evolve(std::move(amps));
}

StateVector prepare_uniform(size_t num_qubits, std::span<const f2::BitVector> points) {
  std::vector<uint64_t> idx;
  idx.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != num_qubits) {
      throw DimensionMismatch("point length differs from qubit count");
    }
    idx.push_back(p.to_index());
  }
  return prepare_uniform(num_qubits, idx);
}

StateVector phase_oracle(const StateVector& s, const std::function<bool(uint64_t)>& pred) {
  std::vector<Amplitude> amps = s.amplitudes();
  for (uint64_t i = 0; i < amps.size(); ++i) {
    if (pred(i)) {
      amps[i] = -amps[i];
    }
  }
  return s.evolve(std::move(amps));
}

StateVector compute_into(const StateVector& s, const Register& source, const Register& target,
                         const std::function<uint64_t(uint64_t)>& f) {
  require_register(s, source);
  require_register(s, target);
  if (source.overlaps(target)) {
    throw std::invalid_argument("compute_into: source and target registers overlap");
  }
  const auto& in = s.amplitudes();
  std::vector<Amplitude> out(in.size(), 0);
  for (uint64_t i = 0; i < in.size(); ++i) {
    if (in[i] == Amplitude{0, 0}) {
      continue;
    }
    uint64_t fx = target.place(f(source.extract(i)));
    out[i ^ fx] += in[i];
  }
  return s.evolve(std::move(out));
}

std::vector<double> register_distribution(const StateVector& s, const Register& reg) {
  require_register(s, reg);
  std::vector<double> dist(size_t{1} << reg.width, 0.0);
  const auto& a = s.amplitudes();
  for (uint64_t i = 0; i < a.size(); ++i) {
    dist[reg.extract(i)] += std::norm(a[i]);
  }
  return dist;
}

StateVector postselect(const StateVector& s, const Register& reg, uint64_t value, double* prob) {
  require_register(s, reg);
  std::vector<Amplitude> amps = s.amplitudes();
  double p = 0;
  for (uint64_t i = 0; i < amps.size(); ++i) {
    if (reg.extract(i) == value) {
      p += std::norm(amps[i]);
    } else {
      amps[i] = 0;
    }
  }
  if (prob != nullptr) {
    *prob = p;
  }
  if (p <= 0) {
    throw NumericalFailure("post-selection on a zero-probability outcome");
  }
  double scale = 1.0 / std::sqrt(p);
  for (auto& a : amps) {
    a *= scale;
  }
  return s.evolve(std::move(amps));
}

Measurement measure_register(const StateVector& s, const Register& reg, Rng& rng) {
  require_register(s, reg);
  const auto& a = s.amplitudes();
  double u = rng.uniform01() * kernels::squared_norm(a);
  double acc = 0;
  uint64_t chosen = a.size();
  for (uint64_t i = 0; i < a.size(); ++i) {
    double w = std::norm(a[i]);
    if (w == 0) {
      continue;
    }
    chosen = i;
    acc += w;
    if (u < acc) {
      break;
    }
  }
  if (chosen == a.size()) {
    throw NumericalFailure("measurement of the zero vector");
  }
  Measurement m{reg.extract(chosen), 0, s};
  m.collapsed = postselect(s, reg, m.outcome, &m.probability);
  return m;
}

void kernels::walsh_hadamard(std::span<Amplitude> amps, size_t offset, size_t width) {
  const double h = 1.0 / std::sqrt(2.0);
  for (size_t b = offset; b < offset + width; ++b) {
    size_t stride = size_t{1} << b;
    for (size_t i = 0; i < amps.size(); ++i) {
      if (i & stride) {
        continue;
      }
      Amplitude x = amps[i], y = amps[i | stride];
      amps[i] = (x + y) * h;
      amps[i | stride] = (x - y) * h;
    }
  }
}

double kernels::squared_norm(std::span<const Amplitude> amps) {
  double n = 0;
  for (const auto& a : amps) {
    n += std::norm(a);
  }
  return n;
}

StateVector hadamard(const StateVector& s, const Register& reg) {
  require_register(s, reg);
  std::vector<Amplitude> amps = s.amplitudes();
  kernels::walsh_hadamard(amps, reg.offset, reg.width);
  return s.evolve(std::move(amps), reg.width);
}

StateVector hadamard_all(const StateVector& s) {
  std::vector<Amplitude> amps = s.amplitudes();
  kernels::walsh_hadamard(amps, 0, s.num_qubits());
  return s.evolve(std::move(amps), s.num_qubits());
}

StateVector apply_single_qubit(const StateVector& s, size_t qubit, const Gate1& u) {
  if (qubit >= s.num_qubits()) {
    throw DimensionMismatch("qubit index out of range");
  }
  std::vector<Amplitude> amps = s.amplitudes();
  size_t stride = size_t{1} << qubit;
  for (size_t i = 0; i < amps.size(); ++i) {
    if (i & stride) {
      continue;
    }
    Amplitude x = amps[i], y = amps[i | stride];
    amps[i] = u[0] * x + u[1] * y;
    amps[i | stride] = u[2] * x + u[3] * y;
  }
  return s.evolve(std::move(amps));
}

StateVector tensor(const StateVector& low, const StateVector& high) {
  size_t q = low.num_qubits() + high.num_qubits();
  StateVector out(q);
  std::vector<Amplitude> amps(out.dim());
  for (size_t h = 0; h < high.dim(); ++h) {
    for (size_t l = 0; l < low.dim(); ++l) {
      amps[(h << low.num_qubits()) | l] = high.amplitude(h) * low.amplitude(l);
    }
  }
  return out.evolve(std::move(amps), 0);
}

StateVector extract_register(const StateVector& s, const Register& reg) {
  require_register(s, reg);
  const auto& a = s.amplitudes();
  // Anchor on the largest amplitude; its complement pattern fixes the rest.
  size_t best = 0;
  for (size_t i = 1; i < a.size(); ++i) {
    if (std::norm(a[i]) > std::norm(a[best])) {
      best = i;
    }
  }
  uint64_t rest = best & ~reg.mask();
  std::vector<Amplitude> sub(size_t{1} << reg.width);
  for (uint64_t v = 0; v < sub.size(); ++v) {
    sub[v] = a[rest | reg.place(v)];
  }
  double n = std::sqrt(kernels::squared_norm(sub));
  for (auto& x : sub) {
    x /= n;
  }
  // Product check: the reconstructed state must reproduce s.
  std::vector<Amplitude> other;
  double other_norm = 0;
  std::vector<uint64_t> rest_patterns;
  for (uint64_t i = 0; i < a.size(); ++i) {
    if ((i & reg.mask()) == 0) {
      rest_patterns.push_back(i);
    }
  }
  for (uint64_t r : rest_patterns) {
    Amplitude c = 0;
    for (uint64_t v = 0; v < sub.size(); ++v) {
      c += std::conj(sub[v]) * a[r | reg.place(v)];
    }
    other.push_back(c);
    other_norm += std::norm(c);
  }
  if (std::abs(other_norm - 1.0) > 1e-9) {
    throw std::invalid_argument("state is entangled across register '" + reg.name + "'");
  }
  StateVector out(reg.width);
  return out.evolve(std::move(sub), 0);
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  require_same_size(a, b);
  Amplitude acc = 0;
  for (size_t i = 0; i < a.dim(); ++i) {
    acc += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return acc;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

double trace_distance_pure(const StateVector& a, const StateVector& b) {
  // 1 - |<a|b>|^2 = d (2 - d) / 4 with d = ||a - e^{i theta} b||^2, which
  // avoids cancellation for nearly equal states.
  Amplitude ov = inner_product(a, b);
  Amplitude phase = std::abs(ov) > 0 ? std::conj(ov) / std::abs(ov) : Amplitude(1.0);
  double d = 0;
  for (size_t i = 0; i < a.dim(); ++i) {
    d += std::norm(a.amplitude(i) - phase * b.amplitude(i));
  }
  return 2.0 * std::sqrt(std::max(0.0, d * (4.0 - d) / 4.0));
}

void dump_csv(const StateVector& s, std::ostream& out) {
  out << "index,re,im\n";
  out.precision(17);
  for (size_t i = 0; i < s.dim(); ++i) {
    out << i << ',' << s.amplitude(i).real() << ',' << s.amplitude(i).imag() << '\n';
  }
}

}  // namespace qmoney::sv
