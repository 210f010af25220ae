#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmoney/rng.h"

namespace qmoney::quat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BrandtMatrix = Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// t + x i + y j + z k with exact rational coefficients.
struct Quaternion {
  Rational t, x, y, z;

  static Quaternion scalar(const Rational& s) { return {s, 0, 0, 0}; }
  std::array<Rational, 4> coords() const { return {t, x, y, z}; }
  static Quaternion from_coords(const std::array<Rational, 4>& c) { return {c[0], c[1], c[2], c[3]}; }

  Quaternion conj() const { return {t, -x, -y, -z}; }
  Rational trd() const { return 2 * t; }
  bool is_zero() const { return t == 0 && x == 0 && y == 0 && z == 0; }

  Quaternion operator+(const Quaternion& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
  Quaternion operator-(const Quaternion& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
  Quaternion operator-() const { return {-t, -x, -y, -z}; }
  Quaternion operator*(const Rational& s) const { return {t * s, x * s, y * s, z * s}; }
  bool operator==(const Quaternion& o) const = default;

  std::string to_string() const;
};

/// B_{p,inf} = (a, b | Q) with a = -1, b = -p, k = ij = -ji.
class Algebra {
 public:
  /// Throws std::invalid_argument unless p is a prime congruent to 3 mod 4.
  explicit Algebra(int64_t p);

  int64_t p() const { return p_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  Quaternion mul(const Quaternion& u, const Quaternion& v) const;
  /// u conj(u) = t^2 - a x^2 - b y^2 + ab z^2.
  Rational nrd(const Quaternion& u) const;
  Quaternion inverse(const Quaternion& u) const;

 private:
  int64_t p_;
  Rational a_, b_;
};

/// Rank-4 Z-lattice in B_{p,inf}: rows of an integer Hermite normal form
/// divided by a common denominator. Equal lattices have equal representations.
class QuatLattice {
 public:
  /// Lattice generated by the given elements. Throws InvariantViolation if
  /// the rank is below 4.
  static QuatLattice from_generators(const std::vector<Quaternion>& gens);

  std::vector<Quaternion> basis() const;
  const Integer& denominator() const { return denom_; }
  const std::array<std::array<Integer, 4>, 4>& hnf() const { return hnf_; }

  bool contains(const Quaternion& q) const;
  bool contains(const QuatLattice& other) const;
  bool operator==(const QuatLattice& o) const { return denom_ == o.denom_ && hnf_ == o.hnf_; }

  QuatLattice conj() const;
  QuatLattice scaled(const Rational& s) const;
  QuatLattice left_mul(const Algebra& alg, const Quaternion& q) const;   // q L
  QuatLattice right_mul(const Algebra& alg, const Quaternion& q) const;  // L q
  /// Dual with respect to the coordinate dot product.
  QuatLattice dual() const;
  /// Covolume relative to Z^4 in (1, i, j, k) coordinates.
  Rational covolume() const;

  std::string to_string() const;

 private:
  Integer denom_ = 1;
  std::array<std::array<Integer, 4>, 4> hnf_{};
};

QuatLattice lattice_sum(const QuatLattice& a, const QuatLattice& b);
QuatLattice lattice_intersection(const QuatLattice& a, const QuatLattice& b);

/// The algebra together with the maximal order <1, i, (i+j)/2, (1+k)/2>.
struct AlgebraSetup {
  Algebra alg;
  QuatLattice order;
};

/// Builds the algebra and maximal order and checks integrality and that the
/// reduced discriminant equals p. Throws std::invalid_argument for
/// unsupported p.
AlgebraSetup algebra_setup(int64_t p);

/// trd(b_a conj(b_b)) over the lattice basis.
std::array<std::array<Rational, 4>, 4> trace_gram(const Algebra& alg, const QuatLattice& l);
Rational determinant(const std::array<std::array<Rational, 4>, 4>& m);
/// sqrt(det trace_gram(order)); equals p for a maximal order.
Integer reduced_discriminant(const Algebra& alg, const QuatLattice& order);

QuatLattice ideal_mul(const Algebra& alg, const QuatLattice& i, const QuatLattice& j);
/// Positive generator of the Z-module spanned by nrd over the lattice.
Rational reduced_norm(const Algebra& alg, const QuatLattice& l);
QuatLattice left_order(const Algebra& alg, const QuatLattice& l);
QuatLattice right_order(const Algebra& alg, const QuatLattice& l);
/// conj(I) / nrd(I).
QuatLattice ideal_inverse(const Algebra& alg, const QuatLattice& l);
/// Throws NonInvertibleIdeal unless I I^{-1} = O_L(I).
void check_invertible(const Algebra& alg, const QuatLattice& l);

struct NonInvertibleIdeal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integral right ideal beta O + ell O with ell | nrd(beta), beta not in
/// ell O; its reduced norm is ell.
QuatLattice random_ideal_of_prime_norm(const AlgebraSetup& setup, int64_t ell, Rng& rng);

using IntGram = std::array<std::array<int64_t, 4>, 4>;

/// Integer Gram matrix G of Q(v) = nrd(v) / scale, so Q(x) = x^T G x / 2.
/// Throws InvariantViolation if an entry is not integral.
IntGram norm_form(const Algebra& alg, const QuatLattice& l, const Rational& scale);

struct LatticePoint {
  std::array<int64_t, 4> coords;
  int64_t value;  // Q(x)
};

/// All x in Z^4 with x^T G x / 2 <= bound (Fincke-Pohst). G must be positive
/// definite; the decomposition is exact rational arithmetic.
std::vector<LatticePoint> short_vectors(const IntGram& g, int64_t bound);

/// counts[n] = #{v in L : nrd(v) = n * scale} for n = 0..n_max.
std::vector<int64_t> representation_counts(const Algebra& alg, const QuatLattice& l, const Rational& scale,
                                           int64_t n_max);

/// #{u in order : nrd(u) = 1}.
int64_t unit_count(const Algebra& alg, const QuatLattice& order);

/// I ~ J (I = alpha J) for right ideals of the same order.
bool is_equivalent(const Algebra& alg, const QuatLattice& i, const QuatLattice& j);

/// The ell + 1 right ideals J of I with nrd(J) = ell nrd(I) and the same
/// right order, for a prime ell != p, ell <= 7.
std::vector<QuatLattice> neighbors(const Algebra& alg, const QuatLattice& i, int64_t ell);

struct ClassSet {
  int64_t p = 0;
  std::vector<QuatLattice> reps;       // right O-ideals, reps[0] = O
  std::vector<QuatLattice> left_orders;
  std::vector<int64_t> weights;        // unit counts of the left orders
  Rational mass() const;
  size_t size() const { return reps.size(); }
};

/// Breadth-first search over 2-neighbors until the mass reaches (p - 1)/24.
/// Throws InvariantViolation on overshoot or if the search exhausts.
ClassSet enumerate_classes(const AlgebraSetup& setup);

/// Sum of divisors of n coprime to p.
int64_t sigma_prime(int64_t n, int64_t p);

enum class BrandtConvention {
  kRowWeight,     // N_ij / w_i
  kColumnWeight,  // N_ij / w_j
};
std::string to_string(BrandtConvention c);

struct ConventionCheck {
  bool integral = false;
  bool row_sums = false;           // row sums equal sigma'(n) for (n, p) = 1
  bool weighted_symmetric = false; // diag(1/w) B(n) symmetric
  bool valid() const { return integral && row_sums && weighted_symmetric; }
};

/// Brandt matrices B(1..n_max) and representation counts
/// N_ij(n) = #{alpha in I_j I_i^{-1} : nrd(alpha) = n nrd(I_j I_i^{-1})}.
/// Both weight conventions are evaluated; the one satisfying every invariant
/// is adopted (ties resolve to kColumnWeight). Matrices at multiples of p are
/// included.
struct BrandtTable {
  int64_t p = 0;
  ClassSet classes;
  int64_t n_max = 0;
  std::vector<std::vector<std::vector<int64_t>>> counts;  // counts[i][j][n]
  std::map<int64_t, BrandtMatrix> matrices;
  BrandtConvention convention = BrandtConvention::kColumnWeight;
  ConventionCheck row_check, column_check;

  const BrandtMatrix& matrix(int64_t n) const;
  /// r(0..n_max) of the norm form on I_j I_i^{-1}.
  std::vector<int64_t> theta(size_t i, size_t j) const;
};

BrandtTable build_brandt_table(const AlgebraSetup& setup, const ClassSet& cs, int64_t n_max);
BrandtMatrix brandt_matrix(const AlgebraSetup& setup, const ClassSet& cs, int64_t n);
std::vector<int64_t> theta_coefficients(const AlgebraSetup& setup, const ClassSet& cs, size_t i, size_t j,
                                        int64_t n_max);

}  // namespace qmoney::quat
