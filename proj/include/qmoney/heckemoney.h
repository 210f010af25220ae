#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qmoney/quatalg.h"
#include "qmoney/rng.h"
#include "qmoney/statevec.h"

namespace qmoney::hecke {

/// Simultaneous eigenvectors of the Hecke operators on formal sums of ideal
/// classes.
///
/// A class combination sum_j alpha_j [I_j] is stored in two coordinate
/// systems: `alphas` (class coefficients, T_n acting as B(n)^T) and `states`
/// (u_j = alpha_j sqrt(w_j / 2), orthonormal for the Petersson pairing
/// <[I_i], [I_j]> = delta_ij w_i / 2). In state coordinates every T_n is the
/// symmetric matrix W^{-1/2} N(n) W^{-1/2} with N(n)_ij = B(n)_ij w_j.
struct EigenBasis {
  int64_t p = 0;
  std::vector<int64_t> weights;
  std::vector<int64_t> primes;
  std::vector<Eigen::VectorXd> states;  // unit vectors, first entry above 1e-9 positive
  std::vector<Eigen::VectorXd> alphas;
  /// eigenvalues[f][n] for every n with a symmetric operator stored.
  std::vector<std::map<int64_t, double>> eigenvalues;
  size_t eisenstein_index = 0;
  std::map<int64_t, Eigen::MatrixXd> operators;  // n -> symmetric T_n
  std::vector<double> combination;                // coefficients of the splitting combination
  int attempts = 0;

  size_t size() const { return states.size(); }
  std::vector<size_t> cusp_indices() const;
  double eigenvalue(size_t form, int64_t n) const { return eigenvalues.at(form).at(n); }
  const Eigen::MatrixXd& hecke(int64_t n) const;
};

/// Diagonalizes a random positive combination of the prime operators,
/// retrying up to 3 times while two eigenvalues stay within 1e-6. Throws
/// NumericalFailure on persistent degeneracy and InvariantViolation if any
/// stored operator leaves a residual above 1e-9.
EigenBasis compute_eigenbasis(const quat::BrandtTable& bt, const std::vector<int64_t>& primes, Rng& rng);

/// Petersson-normalized Eisenstein state, proportional to sqrt(2/w_j).
Eigen::VectorXd eisenstein_state(const std::vector<int64_t>& weights);

double rayleigh_quotient(const EigenBasis& basis, const Eigen::VectorXd& state, int64_t n);

struct QMBanknote {
  size_t form = 0;
  std::vector<int64_t> operators;  // n_j
  std::vector<double> serial;      // b_j
  Eigen::VectorXd money;
};

/// Chooses a cusp form uniformly (or the given form), money = its state,
/// serial = exact eigenvalues plus uniform noise in [-eps, eps].
QMBanknote mint(const EigenBasis& basis, const std::vector<int64_t>& operators, double eps, Rng& rng,
                std::optional<size_t> form = std::nullopt);

/// Accepts iff every Rayleigh quotient <money, T_{n_j} money> is within tol of b_j.
bool verify(const EigenBasis& basis, const QMBanknote& note, double tol);

struct ReductionSystem {
  size_t pivot = 0;
  std::vector<int64_t> primes;   // l_1 .. l_s
  std::vector<int64_t> indices;  // n_0 .. n_{h-1}
  std::vector<int64_t> weights;
  Eigen::MatrixXd a;             // a(i, j) = <T_{n_i}[I_k], [I_j]>
  double condition = 0;
  bool singular = false;
};

/// n_j = prod l_t^{b_t} where b_1 .. b_s are the binary digits of j, b_1 the
/// most significant, for j = 0 .. count - 1.
std::vector<int64_t> reduction_indices(const std::vector<int64_t>& primes, size_t count);
/// Number of primes needed: ceil(log2 h), at least 1.
size_t primes_needed(size_t h);

/// Builds A from the integer Brandt data. Singular systems (condition above
/// 1e12) are flagged, not thrown. Throws std::invalid_argument if the primes
/// are too few, not coprime to p, or an index exceeds the table.
ReductionSystem build_reduction(const quat::BrandtTable& bt, size_t pivot, const std::vector<int64_t>& primes);

struct ReconstructionDiagnostics {
  Eigen::VectorXd a_vector;  // a~_{n_j}
  double residual = 0;       // ||A x - a~|| after refinement
  double condition = 0;
};

struct Reconstruction {
  Eigen::VectorXd state;  // unit, Petersson coordinates
  Eigen::VectorXd alpha;
  ReconstructionDiagnostics diagnostics;
};

/// Solves A x = a~ with a~_{n_j} = prod a~_{l_t}^{b_t} and normalizes.
/// a_primes[t] estimates the eigenvalue of T_{l_t}. Throws NumericalFailure
/// if the system is singular.
Reconstruction attack_reconstruct(const ReductionSystem& rs, const std::vector<double>& a_primes);

/// Pivot chosen uniformly among classes with a nonsingular system; throws
/// NumericalFailure if none exists.
ReductionSystem build_reduction_random_pivot(const quat::BrandtTable& bt, const std::vector<int64_t>& primes,
                                             Rng& rng);

/// Tensor product of (|0> + a_t |1>) / sqrt(1 + a_t^2); prime l_1 sits on the
/// most significant qubit so amplitude j is proportional to a_{n_j}.
sv::StateVector product_state(const std::vector<double>& a_primes);
/// Normalized (a_{n_0}, ..., a_{n_{2^s - 1}}) from the eigenvalues of T_{n_j}.
sv::StateVector direct_a_state(const EigenBasis& basis, size_t form, const std::vector<int64_t>& primes);

struct TraceDistanceChain {
  double total = 0;                 // || rho_a - rho_a~ ||_1 of the product states
  std::vector<double> per_factor;   // || rho_{a_t} - rho_{a~_t} ||_1
  double bound() const;             // sum of per_factor
};
TraceDistanceChain trace_distance_chain(const std::vector<double>& exact, const std::vector<double>& noisy);

/// Eigenvalues of T_l for each prime, plus uniform noise in [-eps, eps].
std::vector<double> noisy_prime_eigenvalues(const EigenBasis& basis, size_t form,
                                            const std::vector<int64_t>& primes, double eps, Rng& rng);

}  // namespace qmoney::hecke
