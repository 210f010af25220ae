#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qmoney/f2core.h"
#include "qmoney/rng.h"

namespace qmoney::f2 {

/// Exponent vector of a monomial in T_1..T_n (stored 0-based).
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(size_t n_vars) : exps_(n_vars, 0) {}
  explicit Monomial(std::vector<uint8_t> exps) : exps_(std::move(exps)) {}

  size_t n_vars() const { return exps_.size(); }
  uint8_t exponent(size_t var) const { return exps_[var]; }
  void set_exponent(size_t var, uint8_t e) { exps_[var] = e; }
  const std::vector<uint8_t>& exponents() const { return exps_; }

  unsigned degree() const;
  bool is_squarefree() const;
  /// Caps every exponent at 1; agrees with *this pointwise on GF(2)^n.
  Monomial reduce() const;
  /// Product of x_i over variables with nonzero exponent.
  bool evaluate(const BitVector& x) const;

  /// Graded lexicographic: by total degree, then by exponents of T_1, T_2, ...
  std::strong_ordering operator<=>(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<uint8_t> exps_;
};

/// Polynomial over GF(2): a set of monomials, each with coefficient 1.
class F2Poly {
 public:
  F2Poly() = default;
  explicit F2Poly(size_t n_vars) : n_vars_(n_vars) {}

  /// Parses '+'-separated monomials of '*'-separated T<i>^<e> factors.
  /// "1" is the constant monomial, "0" the zero polynomial. Whitespace is
  /// ignored; repeated monomials cancel in pairs.
  static F2Poly parse(std::string_view text, size_t n_vars);

  size_t n_vars() const { return n_vars_; }
  const std::set<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  /// Adds one monomial (mod 2).
  void toggle(const Monomial& m);
  F2Poly& operator+=(const F2Poly& other);
  friend F2Poly operator+(F2Poly a, const F2Poly& b) { return a += b; }

  bool evaluate(const BitVector& x) const;
  F2Poly reduce() const;
  /// d/dT_var, var 0-based.
  F2Poly formal_derivative(size_t var) const;
  /// (d/dT_var)(x) without materializing the derivative.
  bool derivative_at(size_t var, const BitVector& x) const;

  /// Highest graded-lex monomial first; "0" for the zero polynomial.
  std::string to_string() const;

  bool operator==(const F2Poly& other) const = default;

 private:
  size_t n_vars_ = 0;
  std::set<Monomial> terms_;
};

struct PolySystem {
  size_t n_vars = 0;
  unsigned degree = 0;
  std::vector<F2Poly> polys;

  /// Checks shared n_vars and the degree bound; throws on violation.
  void validate() const;
  bool is_common_root(const BitVector& x) const;
};

bool evaluate(const F2Poly& p, const BitVector& x);
/// var is 1-based, matching T_1..T_n.
F2Poly formal_derivative(const F2Poly& p, size_t var);
BitMatrix jacobian_at(const PolySystem& s, const BitVector& x);

/// Parses one polynomial per non-empty line; '#' starts a comment.
PolySystem parse_system(std::string_view text, size_t n_vars, unsigned degree);
std::string format_system(const PolySystem& s);

/// Draws uniform elements of I_{d,A}: degree <= d polynomials in n variables
/// lying in the ideal of the linear forms that cut out A.
///
/// Membership is tested formally: writing the points of A as combinations
/// sum_k s_k g_k of its basis rows, a polynomial belongs to I_{d,A} iff the
/// substitution T_j -> sum_k g_k[j] S_k yields the zero polynomial in S.
/// Merely vanishing on the GF(2)-points of A is weaker (T_1^2 + T_1 vanishes
/// everywhere) and would break the tangent-space structure the attack uses.
class VanishingSampler {
 public:
  static constexpr unsigned kMaxDegree = 3;
  static constexpr size_t kMaxAmbient = 28;

  VanishingSampler(const Subspace& a, unsigned degree);

  F2Poly draw(Rng& rng) const;
  /// dim_GF(2) I_{d,A}.
  size_t dim() const { return basis_.size(); }
  std::vector<F2Poly> basis() const;

 private:
  F2Poly to_poly(const BitVector& coeffs) const;

  size_t n_vars_;
  // Coefficient vectors indexed by position in monomials_.
  std::vector<Monomial> monomials_;
  std::vector<BitVector> basis_;
};

PolySystem sample_vanishing(const Subspace& a, unsigned degree, size_t count, Rng& rng);

/// Values of p at every point of GF(2)^n, packed: bit x of the result is
/// p(x) where point x has coordinate i equal to bit i of x. n <= 30.
std::vector<uint64_t> truth_table(const F2Poly& p);

/// All common zeros of the system, by exhaustive truth-table evaluation.
std::vector<BitVector> common_zeros(const PolySystem& s);

/// All exponent vectors in n variables with total degree <= d, graded-lex order.
std::vector<Monomial> monomials_up_to(size_t n_vars, unsigned degree, bool squarefree_only);

}  // namespace qmoney::f2
