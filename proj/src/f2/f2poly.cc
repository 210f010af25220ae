#include "qmoney/f2poly.h"

#include <algorithm>
#include <map>
#include <cctype>
#include <numeric>
#include <sstream>

#include "qmoney/errors.h"

namespace qmoney::f2 {

unsigned Monomial::degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }

bool Monomial::is_squarefree() const {
  return std::all_of(exps_.begin(), exps_.end(), [](uint8_t e) { return e <= 1; });
}

Monomial Monomial::reduce() const {
  Monomial r = *this;
  for (auto& e : r.exps_) {
    e = e > 0 ? 1 : 0;
  }
  return r;
}

bool Monomial::evaluate(const BitVector& x) const {
  for (size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] != 0 && !x.get(i)) {
      return false;
    }
  }
  return true;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  if (auto c = degree() <=> other.degree(); c != 0) {
    return c;
  }
  return exps_ <=> other.exps_;
}

namespace {

void require_vars(size_t expected, const BitVector& x) {
  if (x.size() != expected) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, polynomial has " +
                            std::to_string(expected) + " variables");
  }
}

Monomial parse_monomial(std::string_view text, size_t n_vars) {
  Monomial m(n_vars);
  if (text == "1") {
    return m;
  }
  size_t pos = 0;
  auto read_int = [&](const char* what) {
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (start == pos) {
      throw std::invalid_argument(std::string("expected ") + what + " in monomial '" +
                                  std::string(text) + "'");
    }
    return std::stoul(std::string(text.substr(start, pos - start)));
  };
  while (pos < text.size()) {
    if (text[pos] == '*') {
      ++pos;
      continue;
    }
    if (text[pos] != 'T') {
      throw std::invalid_argument("bad monomial '" + std::string(text) + "'");
    }
    ++pos;
    size_t var = read_int("variable index");
    if (var < 1 || var > n_vars) {
      throw DimensionMismatch("variable T" + std::to_string(var) + " outside T1..T" +
                              std::to_string(n_vars));
    }
    unsigned long e = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      e = read_int("exponent");
    }
    unsigned long total = m.exponent(var - 1) + e;
    if (total > 255) {
      throw std::invalid_argument("exponent overflow in '" + std::string(text) + "'");
    }
    m.set_exponent(var - 1, static_cast<uint8_t>(total));
  }
  return m;
}

}  // namespace

F2Poly F2Poly::parse(std::string_view text, size_t n_vars) {
  std::string compact;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      compact.push_back(ch);
    }
  }
  F2Poly p(n_vars);
  if (compact.empty()) {
    throw std::invalid_argument("empty polynomial text");
  }
  if (compact == "0") {
    return p;
  }
  size_t start = 0;
  while (start <= compact.size()) {
    size_t end = compact.find('+', start);
    if (end == std::string::npos) {
      end = compact.size();
    }
    std::string_view term(compact.data() + start, end - start);
    if (term.empty()) {
      throw std::invalid_argument("empty monomial in '" + std::string(text) + "'");
    }
    p.toggle(parse_monomial(term, n_vars));
    start = end + 1;
  }
  return p;
}

unsigned F2Poly::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->degree(); }

void F2Poly::toggle(const Monomial& m) {
  if (m.n_vars() != n_vars_) {
    throw DimensionMismatch("monomial in " + std::to_string(m.n_vars()) + " variables added to a " +
                            std::to_string(n_vars_) + "-variable polynomial");
  }
  auto [it, inserted] = terms_.insert(m);
  if (!inserted) {
    terms_.erase(it);
  }
}

F2Poly& F2Poly::operator+=(const F2Poly& other) {
  if (other.n_vars_ != n_vars_) {
    throw DimensionMismatch("adding polynomials in different numbers of variables");
  }
  for (const auto& m : other.terms_) {
    toggle(m);
  }
  return *this;
}

bool F2Poly::evaluate(const BitVector& x) const {
  require_vars(n_vars_, x);
  bool acc = false;
  for (const auto& m : terms_) {
    acc ^= m.evaluate(x);
  }
  return acc;
}

F2Poly F2Poly::reduce() const {
  F2Poly r(n_vars_);
  for (const auto& m : terms_) {
    r.toggle(m.reduce());
  }
  return r;
}

F2Poly F2Poly::formal_derivative(size_t var) const {
  if (var >= n_vars_) {
    throw DimensionMismatch("derivative with respect to a missing variable");
  }
  F2Poly d(n_vars_);
  for (const auto& m : terms_) {
    uint8_t e = m.exponent(var);
    if (e % 2 == 1) {
      Monomial dm = m;
      dm.set_exponent(var, static_cast<uint8_t>(e - 1));
      d.toggle(dm);
    }
  }
  return d;
}

bool F2Poly::derivative_at(size_t var, const BitVector& x) const {
  require_vars(n_vars_, x);
  bool acc = false;
  for (const auto& m : terms_) {
    uint8_t e = m.exponent(var);
    if (e % 2 == 0) {
      continue;
    }
    bool value = true;
    for (size_t i = 0; i < n_vars_ && value; ++i) {
      uint8_t ei = i == var ? static_cast<uint8_t>(e - 1) : m.exponent(i);
      if (ei != 0 && !x.get(i)) {
        value = false;
      }
    }
    acc ^= value;
  }
  return acc;
}

std::string F2Poly::to_string() const {
  if (terms_.empty()) {
    return "0";
  }
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) {
      out += " + ";
    }
    std::string mono;
    for (size_t i = 0; i < n_vars_; ++i) {
      uint8_t e = it->exponent(i);
      if (e == 0) {
        continue;
      }
      if (!mono.empty()) {
        mono += '*';
      }
      mono += "T" + std::to_string(i + 1);
      if (e > 1) {
        mono += "^" + std::to_string(e);
      }
    }
    out += mono.empty() ? "1" : mono;
  }
  return out;
}

void PolySystem::validate() const {
  for (size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].n_vars() != n_vars) {
      throw DimensionMismatch("polynomial " + std::to_string(i + 1) + " has " +
                              std::to_string(polys[i].n_vars()) + " variables, system has " +
                              std::to_string(n_vars));
    }
    if (polys[i].degree() > degree) {
      throw std::invalid_argument("polynomial " + std::to_string(i + 1) + " has degree " +
                                  std::to_string(polys[i].degree()) + " > bound " +
                                  std::to_string(degree));
    }
  }
}

bool PolySystem::is_common_root(const BitVector& x) const {
  return std::none_of(polys.begin(), polys.end(), [&](const F2Poly& p) { return p.evaluate(x); });
}

bool evaluate(const F2Poly& p, const BitVector& x) { return p.evaluate(x); }

F2Poly formal_derivative(const F2Poly& p, size_t var) {
  if (var < 1 || var > p.n_vars()) {
    throw DimensionMismatch("variable index " + std::to_string(var) + " outside 1.." +
                            std::to_string(p.n_vars()));
  }
  return p.formal_derivative(var - 1);
}

BitMatrix jacobian_at(const PolySystem& s, const BitVector& x) {
  require_vars(s.n_vars, x);
  BitMatrix j(s.polys.size(), s.n_vars);
  for (size_t i = 0; i < s.polys.size(); ++i) {
    if (s.polys[i].n_vars() != s.n_vars) {
      throw DimensionMismatch("system polynomial with mismatched variable count");
    }
    for (size_t v = 0; v < s.n_vars; ++v) {
      j.set(i, v, s.polys[i].derivative_at(v, x));
    }
  }
  return j;
}

PolySystem parse_system(std::string_view text, size_t n_vars, unsigned degree) {
  PolySystem s{n_vars, degree, {}};
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      continue;
    }
    s.polys.push_back(F2Poly::parse(line, n_vars));
  }
  s.validate();
  return s;
}

std::string format_system(const PolySystem& s) {
  std::string out;
  for (const auto& p : s.polys) {
    out += p.to_string();
    out += '\n';
  }
  return out;
}

std::vector<Monomial> monomials_up_to(size_t n_vars, unsigned degree, bool squarefree_only) {
  std::vector<Monomial> out;
  Monomial current(n_vars);
  // Depth-first over variables, distributing the remaining degree budget.
  auto recurse = [&](auto&& self, size_t var, unsigned budget) -> void {
    if (var == n_vars) {
      out.push_back(current);
      return;
    }
    unsigned cap = squarefree_only ? std::min(budget, 1u) : budget;
    for (unsigned e = 0; e <= cap; ++e) {
      current.set_exponent(var, static_cast<uint8_t>(e));
      self(self, var + 1, budget - e);
    }
    current.set_exponent(var, 0);
  };
  recurse(recurse, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

VanishingSampler::VanishingSampler(const Subspace& a, unsigned degree) : n_vars_(a.ambient_dim()) {
  if (degree < 1) {
    throw std::invalid_argument("vanishing sampler needs degree >= 1");
  }
  if (degree > kMaxDegree) {
    throw CapExceeded("degree " + std::to_string(degree) + " exceeds the supported maximum " +
                      std::to_string(kMaxDegree));
  }
  if (n_vars_ > kMaxAmbient) {
    throw CapExceeded("ambient dimension " + std::to_string(n_vars_) + " exceeds " +
                      std::to_string(kMaxAmbient));
  }
  const size_t k = a.dim();
  monomials_ = monomials_up_to(n_vars_, degree, false);
  std::vector<Monomial> targets = monomials_up_to(k, degree, false);
  std::map<Monomial, size_t> target_index;
  for (size_t i = 0; i < targets.size(); ++i) {
    target_index.emplace(targets[i], i);
  }

  // T_j restricted to A, as the set of parameters S_k it depends on.
  std::vector<std::vector<size_t>> form(n_vars_);
  for (size_t r = 0; r < k; ++r) {
    for (size_t j = 0; j < n_vars_; ++j) {
      if (a.basis().get(r, j)) {
        form[j].push_back(r);
      }
    }
  }

  // Restriction matrix: column c holds the image of monomial c in GF(2)[S].
  BitMatrix restriction(targets.size(), monomials_.size());
  for (size_t c = 0; c < monomials_.size(); ++c) {
    std::set<Monomial> image{Monomial(k)};
    for (size_t j = 0; j < n_vars_; ++j) {
      for (unsigned e = 0; e < monomials_[c].exponent(j); ++e) {
        std::set<Monomial> next;
        for (const auto& term : image) {
          for (size_t s : form[j]) {
            Monomial t = term;
            t.set_exponent(s, static_cast<uint8_t>(t.exponent(s) + 1));
            if (auto [it, fresh] = next.insert(t); !fresh) {
              next.erase(it);
            }
          }
        }
        image = std::move(next);
      }
    }
    for (const auto& term : image) {
      restriction.set(target_index.at(term), c, true);
    }
  }
  basis_ = kernel_basis(restriction).basis().rows();
}

F2Poly VanishingSampler::to_poly(const BitVector& coeffs) const {
  F2Poly p(n_vars_);
  for (size_t i = 0; i < monomials_.size(); ++i) {
    if (coeffs.get(i)) {
      p.toggle(monomials_[i]);
    }
  }
  return p;
}

F2Poly VanishingSampler::draw(Rng& rng) const {
  BitVector coeffs(monomials_.size());
  for (const auto& b : basis_) {
    if (rng.bit()) {
      coeffs ^= b;
    }
  }
  return to_poly(coeffs);
}

std::vector<F2Poly> VanishingSampler::basis() const {
  std::vector<F2Poly> out;
  for (const auto& b : basis_) {
    out.push_back(to_poly(b));
  }
  return out;
}

std::vector<uint64_t> truth_table(const F2Poly& p) {
  size_t n = p.n_vars();
  if (n > 30) {
    throw CapExceeded("truth table over more than 2^30 points");
  }
  size_t bits = size_t{1} << n;
  std::vector<uint64_t> table((bits + 63) / 64, 0);
  // Algebraic normal form of the squarefree reduction, then the Moebius
  // transform: f(x) = XOR over monomials u with u ⊆ x.
  for (const auto& m : p.terms()) {
    uint64_t u = 0;
    for (size_t i = 0; i < n; ++i) {
      if (m.exponent(i) != 0) {
        u |= uint64_t{1} << i;
      }
    }
    table[u >> 6] ^= uint64_t{1} << (u & 63);
  }
  static constexpr uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL,
                                       0x0F0F0F0F0F0F0F0FULL, 0x00FF00FF00FF00FFULL,
                                       0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  for (size_t i = 0; i < std::min<size_t>(n, 6); ++i) {
    size_t shift = size_t{1} << i;
    for (auto& w : table) {
      w ^= (w & kLow[i]) << shift;
    }
  }
  for (size_t i = 6; i < n; ++i) {
    size_t stride = size_t{1} << (i - 6);
    for (size_t w = 0; w < table.size(); ++w) {
      if (w & stride) {
        table[w] ^= table[w ^ stride];
      }
    }
  }
  if (bits < 64) {
    table[0] &= (uint64_t{1} << bits) - 1;
  }
  return table;
}

std::vector<BitVector> common_zeros(const PolySystem& s) {
  size_t bits = size_t{1} << s.n_vars;
  std::vector<uint64_t> any_nonzero((bits + 63) / 64, 0);
  for (const auto& p : s.polys) {
    std::vector<uint64_t> t = truth_table(p);
    for (size_t w = 0; w < t.size(); ++w) {
      any_nonzero[w] |= t[w];
    }
  }
  std::vector<BitVector> zeros;
  for (uint64_t x = 0; x < bits; ++x) {
    if (((any_nonzero[x >> 6] >> (x & 63)) & 1) == 0) {
      zeros.push_back(BitVector::from_index(x, s.n_vars));
    }
  }
  return zeros;
}

PolySystem sample_vanishing(const Subspace& a, unsigned degree, size_t count, Rng& rng) {
  VanishingSampler sampler(a, degree);
  PolySystem s{a.ambient_dim(), degree, {}};
  s.polys.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    s.polys.push_back(sampler.draw(rng));
  }
  return s;
}

}  // namespace qmoney::f2
