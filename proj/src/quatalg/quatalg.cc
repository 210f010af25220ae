#include "qmoney/quatalg.h"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qmoney/errors.h"

namespace qmoney::quat {

namespace bmp = boost::multiprecision;

namespace {

using Row = std::array<Integer, 4>;
using RatMatrix = std::array<std::array<Rational, 4>, 4>;

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

Integer floor_of(const Rational& r) { return floor_div(bmp::numerator(r), bmp::denominator(r)); }

bool is_integer(const Rational& r) { return bmp::denominator(r) == 1; }

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) {
    return bmp::abs(b);
  }
  if (b == 0) {
    return bmp::abs(a);
  }
  Integer num = bmp::gcd(bmp::numerator(a) * bmp::denominator(b), bmp::numerator(b) * bmp::denominator(a));
  return Rational(num, bmp::denominator(a) * bmp::denominator(b));
}

// Row Hermite normal form of a full-rank integer matrix with 4 columns.
std::array<Row, 4> hermite(std::vector<Row> rows) {
  size_t r0 = 0;
  for (size_t col = 0; col < 4; ++col) {
    while (true) {
      size_t best = rows.size();
      for (size_t r = r0; r < rows.size(); ++r) {
        if (rows[r][col] != 0 && (best == rows.size() || bmp::abs(rows[r][col]) < bmp::abs(rows[best][col]))) {
          best = r;
        }
      }
      if (best == rows.size()) {
        throw InvariantViolation("lattice generators have rank below 4");
      }
      std::swap(rows[r0], rows[best]);
      bool reduced = true;
      for (size_t r = r0 + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) {
          continue;
        }
        Integer q = rows[r][col] / rows[r0][col];
        for (size_t c = col; c < 4; ++c) {
          rows[r][c] -= q * rows[r0][c];
        }
        reduced = reduced && rows[r][col] == 0;
      }
      if (reduced) {
        break;
      }
    }
    if (rows[r0][col] < 0) {
      for (auto& v : rows[r0]) {
        v = -v;
      }
    }
    for (size_t r = 0; r < r0; ++r) {
      Integer q = floor_div(rows[r][col], rows[r0][col]);
      for (size_t c = col; c < 4; ++c) {
        rows[r][c] -= q * rows[r0][c];
      }
    }
    ++r0;
  }
  return {rows[0], rows[1], rows[2], rows[3]};
}

RatMatrix basis_matrix(const QuatLattice& l) {
  RatMatrix m;
  auto b = l.basis();
  for (size_t r = 0; r < 4; ++r) {
    m[r] = b[r].coords();
  }
  return m;
}

RatMatrix inverse(RatMatrix m) {
  RatMatrix inv{};
  for (size_t i = 0; i < 4; ++i) {
    inv[i][i] = 1;
  }
  for (size_t c = 0; c < 4; ++c) {
    size_t piv = c;
    while (piv < 4 && m[piv][c] == 0) {
      ++piv;
    }
    if (piv == 4) {
      throw InvariantViolation("singular lattice basis");
    }
    std::swap(m[c], m[piv]);
    std::swap(inv[c], inv[piv]);
    Rational s = m[c][c];
    for (size_t k = 0; k < 4; ++k) {
      m[c][k] /= s;
      inv[c][k] /= s;
    }
    for (size_t r = 0; r < 4; ++r) {
      if (r == c || m[r][c] == 0) {
        continue;
      }
      Rational f = m[r][c];
      for (size_t k = 0; k < 4; ++k) {
        m[r][k] -= f * m[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
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

std::vector<Quaternion> pairwise_products(const Algebra& alg, const QuatLattice& a, const QuatLattice& b) {
  std::vector<Quaternion> gens;
  for (const auto& u : a.basis()) {
    for (const auto& v : b.basis()) {
      gens.push_back(alg.mul(u, v));
    }
  }
  return gens;
}

}  // namespace

std::string Quaternion::to_string() const {
  std::ostringstream s;
  s << t << " + " << x << "i + " << y << "j + " << z << "k";
  return s.str();
}

Algebra::Algebra(int64_t p) : p_(p), a_(-1), b_(-p) {
  if (!is_prime(p) || p % 4 != 3) {
    throw std::invalid_argument("p = " + std::to_string(p) +
                                " is not a prime congruent to 3 mod 4 (only that case is supported)");
  }
}

Quaternion Algebra::mul(const Quaternion& u, const Quaternion& v) const {
  const Rational& a = a_;
  const Rational& b = b_;
  return {u.t * v.t + a * u.x * v.x + b * u.y * v.y - a * b * u.z * v.z,
          u.t * v.x + u.x * v.t - b * u.y * v.z + b * u.z * v.y,
          u.t * v.y + u.y * v.t + a * u.x * v.z - a * u.z * v.x,
          u.t * v.z + u.z * v.t + u.x * v.y - u.y * v.x};
}

Rational Algebra::nrd(const Quaternion& u) const {
  return u.t * u.t - a_ * u.x * u.x - b_ * u.y * u.y + a_ * b_ * u.z * u.z;
}

Quaternion Algebra::inverse(const Quaternion& u) const {
  Rational n = nrd(u);
  if (n == 0) {
    throw std::domain_error("zero quaternion has no inverse");
  }
  return u.conj() * (1 / n);
}

QuatLattice QuatLattice::from_generators(const std::vector<Quaternion>& gens) {
  Integer d = 1;
  for (const auto& g : gens) {
    for (const auto& c : g.coords()) {
      d = bmp::lcm(d, bmp::denominator(c));
    }
  }
  std::vector<Row> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) {
    Row r;
    auto c = g.coords();
    for (size_t k = 0; k < 4; ++k) {
      r[k] = bmp::numerator(Rational(c[k] * d));
    }
    rows.push_back(r);
  }
  QuatLattice l;
  l.hnf_ = hermite(std::move(rows));
  Integer g = d;
  for (const auto& r : l.hnf_) {
    for (const auto& v : r) {
      g = bmp::gcd(g, v);
    }
  }
  l.denom_ = d / g;
  for (auto& r : l.hnf_) {
    for (auto& v : r) {
      v /= g;
    }
  }
  return l;
}

std::vector<Quaternion> QuatLattice::basis() const {
  std::vector<Quaternion> b;
  for (const auto& r : hnf_) {
    b.push_back({Rational(r[0], denom_), Rational(r[1], denom_), Rational(r[2], denom_), Rational(r[3], denom_)});
  }
  return b;
}

bool QuatLattice::contains(const Quaternion& q) const {
  Row v;
  auto c = q.coords();
  for (size_t k = 0; k < 4; ++k) {
    Rational s = c[k] * denom_;
    if (!is_integer(s)) {
      return false;
    }
    v[k] = bmp::numerator(s);
  }
  for (size_t r = 0; r < 4; ++r) {
    if (v[r] % hnf_[r][r] != 0) {
      return false;
    }
    Integer coef = v[r] / hnf_[r][r];
    for (size_t k = r; k < 4; ++k) {
      v[k] -= coef * hnf_[r][k];
    }
  }
  return true;
}

bool QuatLattice::contains(const QuatLattice& other) const {
  for (const auto& b : other.basis()) {
    if (!contains(b)) {
      return false;
    }
  }
  return true;
}

QuatLattice QuatLattice::conj() const {
  std::vector<Quaternion> gens;
  for (const auto& b : basis()) {
    gens.push_back(b.conj());
  }
  return from_generators(gens);
}

QuatLattice QuatLattice::scaled(const Rational& s) const {
  std::vector<Quaternion> gens;
  for (const auto& b : basis()) {
    gens.push_back(b * s);
  }
  return from_generators(gens);
}

QuatLattice QuatLattice::left_mul(const Algebra& alg, const Quaternion& q) const {
  std::vector<Quaternion> gens;
  for (const auto& b : basis()) {
    gens.push_back(alg.mul(q, b));
  }
  return from_generators(gens);
}

QuatLattice QuatLattice::right_mul(const Algebra& alg, const Quaternion& q) const {
  std::vector<Quaternion> gens;
  for (const auto& b : basis()) {
    gens.push_back(alg.mul(b, q));
  }
  return from_generators(gens);
}

QuatLattice QuatLattice::dual() const {
  RatMatrix inv = inverse(basis_matrix(*this));
  std::vector<Quaternion> gens;
  for (size_t c = 0; c < 4; ++c) {
    gens.push_back({inv[0][c], inv[1][c], inv[2][c], inv[3][c]});
  }
  return from_generators(gens);
}

Rational QuatLattice::covolume() const { return bmp::abs(determinant(basis_matrix(*this))); }

std::string QuatLattice::to_string() const {
  std::ostringstream s;
  s << "(1/" << denom_ << ")[";
  for (size_t r = 0; r < 4; ++r) {
    s << (r ? "; " : "") << hnf_[r][0] << " " << hnf_[r][1] << " " << hnf_[r][2] << " " << hnf_[r][3];
  }
  s << "]";
  return s.str();
}

QuatLattice lattice_sum(const QuatLattice& a, const QuatLattice& b) {
  auto gens = a.basis();
  auto more = b.basis();
  gens.insert(gens.end(), more.begin(), more.end());
  return QuatLattice::from_generators(gens);
}

QuatLattice lattice_intersection(const QuatLattice& a, const QuatLattice& b) {
  return lattice_sum(a.dual(), b.dual()).dual();
}

Rational determinant(const RatMatrix& in) {
  RatMatrix m = in;
  Rational det = 1;
  for (size_t c = 0; c < 4; ++c) {
    size_t piv = c;
    while (piv < 4 && m[piv][c] == 0) {
      ++piv;
    }
    if (piv == 4) {
      return 0;
    }
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < 4; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (size_t k = c; k < 4; ++k) {
        m[r][k] -= f * m[c][k];
      }
    }
  }
  return det;
}

RatMatrix trace_gram(const Algebra& alg, const QuatLattice& l) {
  auto b = l.basis();
  RatMatrix g;
  for (size_t r = 0; r < 4; ++r) {
    for (size_t c = 0; c < 4; ++c) {
      g[r][c] = alg.mul(b[r], b[c].conj()).trd();
    }
  }
  return g;
}

Integer reduced_discriminant(const Algebra& alg, const QuatLattice& order) {
  Rational det = bmp::abs(determinant(trace_gram(alg, order)));
  if (!is_integer(det)) {
    throw InvariantViolation("trace form determinant is not integral");
  }
  Integer d = bmp::numerator(det);
  Integer s = bmp::sqrt(d);
  if (s * s != d) {
    throw InvariantViolation("trace form determinant is not a square");
  }
  return s;
}

AlgebraSetup algebra_setup(int64_t p) {
  Algebra alg(p);
  Rational h(1, 2);
  QuatLattice order = QuatLattice::from_generators(
      {Quaternion::scalar(1), {0, 1, 0, 0}, {0, h, h, 0}, {h, 0, 0, h}});
  if (!order.contains(Quaternion::scalar(1))) {
    throw InvariantViolation("order does not contain 1");
  }
  for (const auto& u : order.basis()) {
    for (const auto& v : order.basis()) {
      Quaternion w = alg.mul(u, v);
      if (!order.contains(w) || !is_integer(w.trd()) || !is_integer(alg.nrd(w))) {
        throw InvariantViolation("order is not a ring of integral elements");
      }
    }
  }
  if (reduced_discriminant(alg, order) != p) {
    throw InvariantViolation("order is not maximal");
  }
  return AlgebraSetup{alg, order};
}

QuatLattice ideal_mul(const Algebra& alg, const QuatLattice& i, const QuatLattice& j) {
  return QuatLattice::from_generators(pairwise_products(alg, i, j));
}

Rational reduced_norm(const Algebra& alg, const QuatLattice& l) {
  auto b = l.basis();
  Rational g = 0;
  for (size_t r = 0; r < 4; ++r) {
    g = rational_gcd(g, alg.nrd(b[r]));
    for (size_t c = r + 1; c < 4; ++c) {
      g = rational_gcd(g, alg.nrd(b[r] + b[c]));
    }
  }
  return g;
}

QuatLattice left_order(const Algebra& alg, const QuatLattice& l) {
  auto b = l.basis();
  QuatLattice acc = l.right_mul(alg, alg.inverse(b[0]));
  for (size_t k = 1; k < 4; ++k) {
    acc = lattice_intersection(acc, l.right_mul(alg, alg.inverse(b[k])));
  }
  return acc;
}

QuatLattice right_order(const Algebra& alg, const QuatLattice& l) {
  auto b = l.basis();
  QuatLattice acc = l.left_mul(alg, alg.inverse(b[0]));
  for (size_t k = 1; k < 4; ++k) {
    acc = lattice_intersection(acc, l.left_mul(alg, alg.inverse(b[k])));
  }
  return acc;
}

QuatLattice ideal_inverse(const Algebra& alg, const QuatLattice& l) {
  return l.conj().scaled(1 / reduced_norm(alg, l));
}

void check_invertible(const Algebra& alg, const QuatLattice& l) {
  if (!(ideal_mul(alg, l, ideal_inverse(alg, l)) == left_order(alg, l))) {
    throw NonInvertibleIdeal("I I^{-1} differs from the left order of " + l.to_string());
  }
}

QuatLattice random_ideal_of_prime_norm(const AlgebraSetup& setup, int64_t ell, Rng& rng) {
  if (!is_prime(ell)) {
    throw std::invalid_argument("ideal norm must be prime");
  }
  auto e = setup.order.basis();
  while (true) {
    Quaternion beta{};
    bool zero = true;
    for (const auto& ek : e) {
      int64_t c = static_cast<int64_t>(rng.below(static_cast<uint64_t>(ell)));
      zero = zero && c == 0;
      beta = beta + ek * Rational(c);
    }
    if (zero || bmp::numerator(setup.alg.nrd(beta)) % ell != 0) {
      continue;
    }
    std::vector<Quaternion> gens;
    for (const auto& ek : e) {
      gens.push_back(setup.alg.mul(beta, ek));
      gens.push_back(ek * Rational(ell));
    }
    return QuatLattice::from_generators(gens);
  }
}

IntGram norm_form(const Algebra& alg, const QuatLattice& l, const Rational& scale) {
  RatMatrix t = trace_gram(alg, l);
  IntGram g;
  for (size_t r = 0; r < 4; ++r) {
    for (size_t c = 0; c < 4; ++c) {
      Rational v = t[r][c] / scale;
      if (!is_integer(v) || (r == c && bmp::numerator(v) % 2 != 0)) {
        throw InvariantViolation("norm form is not integral at scale " + scale.str());
      }
      g[r][c] = static_cast<int64_t>(bmp::numerator(v));
    }
  }
  return g;
}

std::vector<LatticePoint> short_vectors(const IntGram& g, int64_t bound) {
  // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2, exact.
  RatMatrix q;
  for (size_t r = 0; r < 4; ++r) {
    for (size_t c = 0; c < 4; ++c) {
      q[r][c] = Rational(g[r][c], 2);
    }
  }
  for (size_t i = 0; i < 4; ++i) {
    if (q[i][i] <= 0) {
      throw InvariantViolation("quadratic form is not positive definite");
    }
    for (size_t j = i + 1; j < 4; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (size_t k = i + 1; k < 4; ++k) {
      for (size_t l = k; l < 4; ++l) {
        q[k][l] -= q[k][i] * q[i][l];
      }
    }
  }

  std::vector<LatticePoint> out;
  std::array<int64_t, 4> x{};
  std::function<void(int, const Rational&)> descend = [&](int i, const Rational& remaining) {
    if (i < 0) {
      int64_t twice = 0;
      for (size_t r = 0; r < 4; ++r) {
        for (size_t c = 0; c < 4; ++c) {
          twice += x[r] * g[r][c] * x[c];
        }
      }
      out.push_back({x, twice / 2});
      return;
    }
    Rational center = 0;
    for (int j = i + 1; j < 4; ++j) {
      center -= q[i][j] * x[j];
    }
    auto visit = [&](int64_t v) {
      Rational d = Rational(v) - center;
      Rational used = q[i][i] * d * d;
      if (used > remaining) {
        return false;
      }
      x[i] = v;
      descend(i - 1, remaining - used);
      return true;
    };
    int64_t start = static_cast<int64_t>(floor_of(center));
    for (int64_t v = start; visit(v); --v) {
    }
    for (int64_t v = start + 1; visit(v); ++v) {
    }
  };
  descend(3, Rational(bound));
  return out;
}

std::vector<int64_t> representation_counts(const Algebra& alg, const QuatLattice& l, const Rational& scale,
                                           int64_t n_max) {
  std::vector<int64_t> counts(static_cast<size_t>(n_max) + 1, 0);
  for (const auto& pt : short_vectors(norm_form(alg, l, scale), n_max)) {
    counts[static_cast<size_t>(pt.value)]++;
  }
  return counts;
}

int64_t unit_count(const Algebra& alg, const QuatLattice& order) {
  return representation_counts(alg, order, 1, 1)[1];
}

bool is_equivalent(const Algebra& alg, const QuatLattice& i, const QuatLattice& j) {
  QuatLattice l = ideal_mul(alg, i, j.conj());
  Rational target = reduced_norm(alg, i) * reduced_norm(alg, j);
  return representation_counts(alg, l, target, 1)[1] > 0;
}

std::vector<QuatLattice> neighbors(const Algebra& alg, const QuatLattice& i, int64_t ell) {
  if (!is_prime(ell) || ell == alg.p() || ell > 7) {
    throw std::invalid_argument("neighbors need a prime ell != p with ell <= 7");
  }
  QuatLattice ol = left_order(alg, i);
  auto e = ol.basis();
  std::vector<QuatLattice> left_ideals;
  std::array<int64_t, 4> c{};
  const int64_t total = ell * ell * ell * ell;
  for (int64_t code = 1; code < total; ++code) {
    int64_t rest = code;
    Quaternion beta{};
    for (size_t k = 0; k < 4; ++k) {
      c[k] = rest % ell;
      rest /= ell;
      beta = beta + e[k] * Rational(c[k]);
    }
    if (bmp::numerator(alg.nrd(beta)) % ell != 0) {
      continue;
    }
    std::vector<Quaternion> gens;
    for (const auto& ek : e) {
      gens.push_back(alg.mul(beta, ek));
      gens.push_back(ek * Rational(ell));
    }
    QuatLattice a = QuatLattice::from_generators(gens);
    if (reduced_norm(alg, a) != ell) {
      continue;
    }
    if (std::find(left_ideals.begin(), left_ideals.end(), a) == left_ideals.end()) {
      left_ideals.push_back(a);
    }
  }
  if (left_ideals.size() != static_cast<size_t>(ell + 1)) {
    throw InvariantViolation("found " + std::to_string(left_ideals.size()) + " ideals of norm " +
                             std::to_string(ell) + ", expected " + std::to_string(ell + 1));
  }
  std::vector<QuatLattice> out;
  for (const auto& a : left_ideals) {
    out.push_back(ideal_mul(alg, a, i));
  }
  return out;
}

Rational ClassSet::mass() const {
  Rational m = 0;
  for (int64_t w : weights) {
    m += Rational(1, w);
  }
  return m;
}

ClassSet enumerate_classes(const AlgebraSetup& setup) {
  const Algebra& alg = setup.alg;
  const Rational target(alg.p() - 1, 24);
  ClassSet cs;
  cs.p = alg.p();
  auto add = [&](const QuatLattice& rep) {
    QuatLattice ol = left_order(alg, rep);
    cs.reps.push_back(rep);
    cs.left_orders.push_back(ol);
    cs.weights.push_back(unit_count(alg, ol));
  };
  add(setup.order);
  for (size_t next = 0; cs.mass() < target; ++next) {
    if (next >= cs.reps.size()) {
      throw InvariantViolation("2-neighbor search exhausted below the mass (p - 1)/24");
    }
    for (const auto& j : neighbors(alg, cs.reps[next], 2)) {
      bool known = std::any_of(cs.reps.begin(), cs.reps.end(),
                               [&](const QuatLattice& r) { return is_equivalent(alg, j, r); });
      if (known) {
        continue;
      }
      add(j);
      if (cs.mass() > target) {
        throw InvariantViolation("class mass " + cs.mass().str() + " overshoots " + target.str());
      }
      if (cs.mass() == target) {
        break;
      }
    }
  }
  return cs;
}

int64_t sigma_prime(int64_t n, int64_t p) {
  int64_t s = 0;
  for (int64_t d = 1; d <= n; ++d) {
    if (n % d == 0 && d % p != 0) {
      s += d;
    }
  }
  return s;
}

std::string to_string(BrandtConvention c) {
  return c == BrandtConvention::kRowWeight ? "divide_by_row_weight" : "divide_by_column_weight";
}

const BrandtMatrix& BrandtTable::matrix(int64_t n) const {
  auto it = matrices.find(n);
  if (it == matrices.end()) {
    throw std::out_of_range("B(" + std::to_string(n) + ") not computed (n_max = " + std::to_string(n_max) + ")");
  }
  return it->second;
}

std::vector<int64_t> BrandtTable::theta(size_t i, size_t j) const { return counts.at(i).at(j); }

BrandtTable build_brandt_table(const AlgebraSetup& setup, const ClassSet& cs, int64_t n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("n_max must be at least 1");
  }
  const Algebra& alg = setup.alg;
  const size_t h = cs.size();
  BrandtTable bt;
  bt.p = cs.p;
  bt.classes = cs;
  bt.n_max = n_max;
  bt.counts.assign(h, std::vector<std::vector<int64_t>>(h));
  std::vector<QuatLattice> inverses;
  for (const auto& rep : cs.reps) {
    inverses.push_back(ideal_inverse(alg, rep));
  }
  for (size_t i = 0; i < h; ++i) {
    for (size_t j = 0; j < h; ++j) {
      QuatLattice l = ideal_mul(alg, cs.reps[j], inverses[i]);
      bt.counts[i][j] = representation_counts(alg, l, reduced_norm(alg, l), n_max);
    }
  }

  auto evaluate = [&](BrandtConvention conv) {
    ConventionCheck chk{true, true, true};
    for (int64_t n = 1; n <= n_max; ++n) {
      std::vector<std::vector<Rational>> b(h, std::vector<Rational>(h));
      for (size_t i = 0; i < h; ++i) {
        for (size_t j = 0; j < h; ++j) {
          int64_t w = conv == BrandtConvention::kRowWeight ? cs.weights[i] : cs.weights[j];
          b[i][j] = Rational(bt.counts[i][j][n], w);
          chk.integral = chk.integral && is_integer(b[i][j]);
        }
      }
      for (size_t i = 0; i < h; ++i) {
        Rational row = 0;
        for (size_t j = 0; j < h; ++j) {
          row += b[i][j];
          chk.weighted_symmetric = chk.weighted_symmetric &&
                                   b[i][j] / cs.weights[i] == b[j][i] / cs.weights[j];
        }
        if (n % cs.p != 0) {
          chk.row_sums = chk.row_sums && row == sigma_prime(n, cs.p);
        }
      }
    }
    return chk;
  };
  bt.row_check = evaluate(BrandtConvention::kRowWeight);
  bt.column_check = evaluate(BrandtConvention::kColumnWeight);
  if (bt.column_check.valid()) {
    bt.convention = BrandtConvention::kColumnWeight;
  } else if (bt.row_check.valid()) {
    bt.convention = BrandtConvention::kRowWeight;
  } else {
    throw InvariantViolation("neither Brandt weight convention satisfies the integrality, row-sum and "
                             "weighted-symmetry invariants");
  }

  for (int64_t n = 1; n <= n_max; ++n) {
    BrandtMatrix b(h, h);
    for (size_t i = 0; i < h; ++i) {
      for (size_t j = 0; j < h; ++j) {
        int64_t w = bt.convention == BrandtConvention::kRowWeight ? cs.weights[i] : cs.weights[j];
        b(i, j) = bt.counts[i][j][n] / w;
      }
    }
    bt.matrices.emplace(n, std::move(b));
  }
  return bt;
}

BrandtMatrix brandt_matrix(const AlgebraSetup& setup, const ClassSet& cs, int64_t n) {
  return build_brandt_table(setup, cs, n).matrix(n);
}

std::vector<int64_t> theta_coefficients(const AlgebraSetup& setup, const ClassSet& cs, size_t i, size_t j,
                                        int64_t n_max) {
  if (i >= cs.size() || j >= cs.size()) {
    throw std::out_of_range("class index out of range");
  }
  QuatLattice l = ideal_mul(setup.alg, cs.reps[j], ideal_inverse(setup.alg, cs.reps[i]));
  return representation_counts(setup.alg, l, reduced_norm(setup.alg, l), n_max);
}

}  // namespace qmoney::quat
