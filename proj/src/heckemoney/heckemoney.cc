#include "qmoney/heckemoney.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qmoney/errors.h"

namespace qmoney::hecke {

namespace {

constexpr double kDegeneracyGap = 1e-6;
constexpr double kResidualTolerance = 1e-9;
constexpr double kConditionLimit = 1e12;

void fix_sign(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-9) {
      if (v(i) < 0) {
        v = -v;
      }
      return;
    }
  }
}

Eigen::VectorXd alpha_from_state(const Eigen::VectorXd& u, const std::vector<int64_t>& w) {
  Eigen::VectorXd a(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    a(j) = u(j) / std::sqrt(static_cast<double>(w[j]) / 2.0);
  }
  return a;
}

bool is_prime(int64_t n) {
  if (n < 2) {
    return false;
  }
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<size_t> EigenBasis::cusp_indices() const {
  std::vector<size_t> out;
  for (size_t f = 0; f < size(); ++f) {
    if (f != eisenstein_index) {
      out.push_back(f);
    }
  }
  return out;
}

const Eigen::MatrixXd& EigenBasis::hecke(int64_t n) const {
  auto it = operators.find(n);
  if (it == operators.end()) {
    throw std::out_of_range("T_" + std::to_string(n) + " is not available");
  }
  return it->second;
}

Eigen::VectorXd eisenstein_state(const std::vector<int64_t>& weights) {
  Eigen::VectorXd u(weights.size());
  for (size_t j = 0; j < weights.size(); ++j) {
    u(j) = std::sqrt(2.0 / static_cast<double>(weights[j]));
  }
  return u.normalized();
}

EigenBasis compute_eigenbasis(const quat::BrandtTable& bt, const std::vector<int64_t>& primes, Rng& rng) {
  if (primes.size() < 2) {
    throw std::invalid_argument("at least two primes are needed");
  }
  for (int64_t l : primes) {
    if (!is_prime(l) || l == bt.p || l > bt.n_max) {
      throw std::invalid_argument("prime " + std::to_string(l) + " is unusable (must be prime, != p, <= n_max)");
    }
  }
  const auto& w = bt.classes.weights;
  const Eigen::Index h = static_cast<Eigen::Index>(w.size());

  EigenBasis basis;
  basis.p = bt.p;
  basis.weights = w;
  basis.primes = primes;
  for (const auto& [n, b] : bt.matrices) {
    Eigen::MatrixXd s(h, h);
    for (Eigen::Index i = 0; i < h; ++i) {
      for (Eigen::Index j = 0; j < h; ++j) {
        double nij = static_cast<double>(b(i, j) * w[j]);
        s(i, j) = nij / std::sqrt(static_cast<double>(w[i] * w[j]));
      }
    }
    basis.operators.emplace(n, std::move(s));
  }

  Eigen::MatrixXd vectors;
  for (basis.attempts = 1; basis.attempts <= 3; ++basis.attempts) {
    basis.combination.clear();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(h, h);
    for (int64_t l : primes) {
      double c = rng.uniform(1.0, 2.0);
      basis.combination.push_back(c);
      m += c * basis.operators.at(l);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& ev = es.eigenvalues();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < h; ++i) {
      gap = std::min(gap, ev(i) - ev(i - 1));
    }
    if (gap >= kDegeneracyGap) {
      vectors = es.eigenvectors();
      break;
    }
  }
  if (vectors.size() == 0) {
    throw NumericalFailure("eigenvalues of the Hecke combination stay degenerate after 3 attempts");
  }

  Eigen::VectorXd eis = eisenstein_state(w);
  double best_overlap = -1;
  for (Eigen::Index f = 0; f < h; ++f) {
    Eigen::VectorXd u = vectors.col(f);
    fix_sign(u);
    std::map<int64_t, double> values;
    for (const auto& [n, s] : basis.operators) {
      double lambda = u.dot(s * u);
      double res = (s * u - lambda * u).norm();
      if (res > kResidualTolerance) {
        throw InvariantViolation("eigenvector residual " + std::to_string(res) + " for T_" + std::to_string(n));
      }
      values[n] = lambda;
    }
    double overlap = std::abs(u.dot(eis));
    if (overlap > best_overlap) {
      best_overlap = overlap;
      basis.eisenstein_index = static_cast<size_t>(f);
    }
    basis.alphas.push_back(alpha_from_state(u, w));
    basis.states.push_back(std::move(u));
    basis.eigenvalues.push_back(std::move(values));
  }
  if (best_overlap < 1 - 1e-9) {
    throw InvariantViolation("no eigenvector matches the Eisenstein state");
  }
  return basis;
}

double rayleigh_quotient(const EigenBasis& basis, const Eigen::VectorXd& state, int64_t n) {
  return state.dot(basis.hecke(n) * state) / state.squaredNorm();
}

QMBanknote mint(const EigenBasis& basis, const std::vector<int64_t>& operators, double eps, Rng& rng,
                std::optional<size_t> form) {
  if (eps < 0) {
    throw std::invalid_argument("noise bound must be non-negative");
  }
  QMBanknote note;
  if (form) {
    note.form = form.value();
    if (note.form >= basis.size()) {
      throw std::out_of_range("form index out of range");
    }
  } else {
    auto cusp = basis.cusp_indices();
    if (cusp.empty()) {
      throw std::invalid_argument("no cusp forms at this level");
    }
    note.form = cusp[rng.below(cusp.size())];
  }
  note.operators = operators;
  note.money = basis.states[note.form];
  for (int64_t n : operators) {
    note.serial.push_back(basis.eigenvalue(note.form, n) + rng.uniform(-eps, eps));
  }
  return note;
}

bool verify(const EigenBasis& basis, const QMBanknote& note, double tol) {
  if (note.serial.size() != note.operators.size()) {
    return false;
  }
  for (size_t t = 0; t < note.operators.size(); ++t) {
    if (std::abs(rayleigh_quotient(basis, note.money, note.operators[t]) - note.serial[t]) > tol) {
      return false;
    }
  }
  return true;
}

size_t primes_needed(size_t h) {
  size_t s = 0;
  while ((size_t{1} << s) < h) {
    ++s;
  }
  return s;
}

std::vector<int64_t> reduction_indices(const std::vector<int64_t>& primes, size_t count) {
  const size_t s = primes.size();
  if (count > (size_t{1} << s)) {
    throw std::invalid_argument("too few primes for " + std::to_string(count) + " indices");
  }
  std::vector<int64_t> out;
  for (size_t j = 0; j < count; ++j) {
    int64_t n = 1;
    for (size_t t = 0; t < s; ++t) {
      if ((j >> (s - 1 - t)) & 1) {
        n *= primes[t];
      }
    }
    out.push_back(n);
  }
  return out;
}

ReductionSystem build_reduction(const quat::BrandtTable& bt, size_t pivot, const std::vector<int64_t>& primes) {
  const size_t h = bt.classes.size();
  if (pivot >= h) {
    throw std::out_of_range("pivot class index out of range");
  }
  const size_t s = primes_needed(h);
  if (primes.size() < s) {
    throw std::invalid_argument("need " + std::to_string(s) + " primes for h = " + std::to_string(h));
  }
  ReductionSystem rs;
  rs.pivot = pivot;
  rs.primes.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(s));
  for (int64_t l : rs.primes) {
    if (!is_prime(l) || l == bt.p) {
      throw std::invalid_argument("prime " + std::to_string(l) + " must be prime and coprime to p");
    }
  }
  rs.indices = reduction_indices(rs.primes, h);
  rs.weights = bt.classes.weights;
  rs.a.resize(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h));
  for (size_t i = 0; i < h; ++i) {
    if (rs.indices[i] > bt.n_max) {
      throw std::invalid_argument("index " + std::to_string(rs.indices[i]) + " exceeds the Brandt table");
    }
    for (size_t j = 0; j < h; ++j) {
      // B(n)_kj w_j / 2 = N_kj(n) / 2.
      rs.a(i, j) = static_cast<double>(bt.counts[pivot][j][rs.indices[i]]) / 2.0;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rs.a);
  const auto& sv = svd.singularValues();
  double smin = sv(sv.size() - 1);
  rs.condition = smin == 0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
  rs.singular = !(rs.condition <= kConditionLimit);
  return rs;
}

ReductionSystem build_reduction_random_pivot(const quat::BrandtTable& bt, const std::vector<int64_t>& primes,
                                             Rng& rng) {
  std::vector<size_t> order(bt.classes.size());
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  for (size_t k : order) {
    ReductionSystem rs = build_reduction(bt, k, primes);
    if (!rs.singular) {
      return rs;
    }
  }
  throw NumericalFailure("every pivot gives a singular reduction system");
}

Reconstruction attack_reconstruct(const ReductionSystem& rs, const std::vector<double>& a_primes) {
  if (a_primes.size() != rs.primes.size()) {
    throw std::invalid_argument("expected one eigenvalue estimate per prime");
  }
  if (rs.singular) {
    throw NumericalFailure("reduction system is singular (condition " + std::to_string(rs.condition) +
                           "); the pivot coordinate of the target form may vanish");
  }
  const size_t h = rs.indices.size();
  const size_t s = rs.primes.size();
  Reconstruction out;
  auto& d = out.diagnostics;
  d.condition = rs.condition;
  d.a_vector.resize(static_cast<Eigen::Index>(h));
  for (size_t j = 0; j < h; ++j) {
    double v = 1;
    for (size_t t = 0; t < s; ++t) {
      if ((j >> (s - 1 - t)) & 1) {
        v *= a_primes[t];
      }
    }
    d.a_vector(static_cast<Eigen::Index>(j)) = v;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rs.a);
  Eigen::VectorXd x = qr.solve(d.a_vector);
  x += qr.solve(d.a_vector - rs.a * x);
  d.residual = (rs.a * x - d.a_vector).norm();

  Eigen::VectorXd u(static_cast<Eigen::Index>(h));
  for (size_t j = 0; j < h; ++j) {
    u(static_cast<Eigen::Index>(j)) = x(static_cast<Eigen::Index>(j)) * std::sqrt(rs.weights[j] / 2.0);
  }
  double norm = u.norm();
  if (norm == 0) {
    throw NumericalFailure("reconstructed vector is zero");
  }
  u /= norm;
  fix_sign(u);
  out.alpha = alpha_from_state(u, rs.weights);
  out.state = std::move(u);
  return out;
}

sv::StateVector product_state(const std::vector<double>& a_primes) {
  const size_t s = a_primes.size();
  std::vector<sv::Amplitude> amps(size_t{1} << s);
  double norm = 1;
  for (double a : a_primes) {
    norm *= std::sqrt(1 + a * a);
  }
  for (size_t j = 0; j < amps.size(); ++j) {
    double v = 1;
    for (size_t t = 0; t < s; ++t) {
      if ((j >> (s - 1 - t)) & 1) {
        v *= a_primes[t];
      }
    }
    amps[j] = v / norm;
  }
  return sv::StateVector::from_amplitudes(std::move(amps));
}

sv::StateVector direct_a_state(const EigenBasis& basis, size_t form, const std::vector<int64_t>& primes) {
  auto idx = reduction_indices(primes, size_t{1} << primes.size());
  std::vector<sv::Amplitude> amps;
  double n2 = 0;
  for (int64_t n : idx) {
    double a = basis.eigenvalue(form, n);
    amps.emplace_back(a);
    n2 += a * a;
  }
  for (auto& z : amps) {
    z /= std::sqrt(n2);
  }
  return sv::StateVector::from_amplitudes(std::move(amps));
}

double TraceDistanceChain::bound() const { return std::accumulate(per_factor.begin(), per_factor.end(), 0.0); }

TraceDistanceChain trace_distance_chain(const std::vector<double>& exact, const std::vector<double>& noisy) {
  if (exact.size() != noisy.size()) {
    throw DimensionMismatch("eigenvalue lists differ in length");
  }
  TraceDistanceChain c;
  c.total = sv::trace_distance_pure(product_state(exact), product_state(noisy));
  for (size_t t = 0; t < exact.size(); ++t) {
    c.per_factor.push_back(sv::trace_distance_pure(product_state({exact[t]}), product_state({noisy[t]})));
  }
  return c;
}

std::vector<double> noisy_prime_eigenvalues(const EigenBasis& basis, size_t form,
                                            const std::vector<int64_t>& primes, double eps, Rng& rng) {
  std::vector<double> out;
  for (int64_t l : primes) {
    out.push_back(basis.eigenvalue(form, l) + rng.uniform(-eps, eps));
  }
  return out;
}

}  // namespace qmoney::hecke
