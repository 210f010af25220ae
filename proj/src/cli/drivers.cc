#include "drivers.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "qmoney/cli.h"
#include "qmoney/heckemoney.h"
#include "qmoney/hidden_subspace.h"
#include "qmoney/mvhash.h"
#include "qmoney/quatalg.h"

namespace qmoney::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Json rows_json(const f2::BitMatrix& m) {
  Json out = Json::array();
  for (const auto& r : m.rows()) {
    out.push_back(r.to_string());
  }
  return out;
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

void require_primes(const std::vector<int64_t>& primes, int64_t p) {
  if (primes.empty()) {
    throw UsageError("--primes must list at least one prime");
  }
  for (size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i]) || primes[i] == p) {
      throw UsageError("--primes entry " + std::to_string(primes[i]) + " must be a prime different from p");
    }
    if (std::find(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(i), primes[i]) !=
        primes.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw UsageError("--primes entries must be distinct");
    }
  }
}

Json matrix_json(const quat::BrandtMatrix& b) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      row.push_back(b(i, j));
    }
    out.push_back(row);
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

Json check_json(const quat::ConventionCheck& c) {
  return Json{{"integral", c.integral}, {"row_sums", c.row_sums}, {"weighted_symmetric", c.weighted_symmetric}};
}

struct Level {
  quat::AlgebraSetup setup;
  quat::ClassSet classes;
  quat::BrandtTable table;
};

Level build_level(int64_t p, int64_t n_max) {
  if (!is_prime(p)) {
    throw UsageError("--p must be prime");
  }
  Level lv{quat::algebra_setup(p), {}, {}};
  lv.classes = quat::enumerate_classes(lv.setup);
  lv.table = quat::build_brandt_table(lv.setup, lv.classes, n_max);
  return lv;
}

}  // namespace

Report::Report(std::string command, Json config) {
  doc_["schema"] = std::string(kSchemaVersion);
  doc_["tool_version"] = std::string(kToolVersion);
  doc_["command"] = std::move(command);
  doc_["config"] = std::move(config);
  doc_["results"] = Json::object();
  doc_["formulas"] = Json::object();
  doc_["invariants"] = Json::array();
}

void Report::set_trials(Json records, Json aggregate) {
  doc_["trials"] = std::move(records);
  if (!doc_["trials"].empty()) {
    doc_["aggregate"] = std::move(aggregate);
  }
}

void Report::invariant(const std::string& name, bool passed, const std::string& oracle) {
  doc_["invariants"].push_back(Json{{"name", name}, {"passed", passed}, {"oracle", oracle}});
}

void Report::formula(const std::string& field, const std::string& description) {
  doc_["formulas"][field] = description;
}

bool Report::passed() const {
  return std::all_of(doc_["invariants"].begin(), doc_["invariants"].end(),
                     [](const Json& j) { return j["passed"].get<bool>(); });
}

Json Report::json() const {
  Json out = doc_;
  out["passed"] = passed();
  return out;
}

Report hs_demo(const HsDemoConfig& c) {
  if (c.fixture != "paper84") {
    throw UsageError("unknown fixture '" + c.fixture + "' (available: paper84)");
  }
  Report r("hidden-subspace demo", Json{{"fixture", c.fixture}});
  const std::string dir = c.fixture_dir + "/paper84/";
  f2::PolySystem serial = f2::parse_system(read_text(dir + "polys.txt"), 8, 3);
  f2::BitVector x = f2::BitVector::from_string(trim(read_text(dir + "point.txt")));
  f2::BitMatrix printed_jac = f2::BitMatrix::parse(read_text(dir + "jacobian.txt"));
  f2::Subspace printed = f2::Subspace::span(8, f2::BitMatrix::parse(read_text(dir + "generator.txt")).rows());

  f2::BitMatrix jac = f2::jacobian_at(serial, x);
  f2::Subspace kernel = f2::kernel_basis(jac);
  f2::Subspace recovered = hs::hs_attack(serial, x);

  f2::PolySystem product = serial;
  product.polys[4] = f2::parse_system(read_text(dir + "p5_product_reading.txt"), 8, 6).polys.at(0);
  product.degree = 6;
  f2::BitVector row5_product = f2::jacobian_at(product, x).row(4);

  Json& res = r.results();
  res["point"] = x.to_string();
  res["jacobian"] = rows_json(jac);
  res["jacobian_rank"] = jac.rank();
  res["kernel_basis"] = rows_json(kernel.basis());
  res["recovered_basis"] = rows_json(recovered.basis());
  res["printed_generator"] = rows_json(printed.basis());
  res["p5_row"] = Json{{"additive_reading", jac.row(4).to_string()},
                       {"product_reading", row5_product.to_string()},
                       {"printed", printed_jac.row(4).to_string()}};
  r.formula("jacobian_rank", "rank over GF(2) of the Jacobian at the point");

  r.invariant("point_is_common_root", serial.is_common_root(x), "direct evaluation of every polynomial");
  r.invariant("jacobian_matches_fixture", jac == printed_jac, "printed Jacobian fixture");
  r.invariant("kernel_equals_generator_span", f2::subspace_equal(kernel, printed), "printed generator matrix");
  r.invariant("attack_recovers_generator_span", f2::subspace_equal(recovered, printed), "printed generator matrix");
  r.invariant("p5_readings_share_row", row5_product == printed_jac.row(4), "printed Jacobian row 5");
  return r;
}

Report hs_bench(const HsBenchConfig& c) {
  uint64_t num = 0, den = 1;
  {
    auto slash = c.beta.find('/');
    try {
      size_t used = 0;
      num = std::stoull(c.beta.substr(0, slash), &used);
      if (used != c.beta.substr(0, slash).size()) {
        throw std::invalid_argument("trailing characters");
      }
      if (slash != std::string::npos) {
        std::string d = c.beta.substr(slash + 1);
        den = std::stoull(d, &used);
        if (used != d.size()) {
          throw std::invalid_argument("trailing characters");
        }
      }
    } catch (const std::exception&) {
      throw UsageError("--beta must be an integer or a fraction a/b");
    }
  }
  hs::HSParams params{c.n, c.d, num, den};
  params.validate();
  Report r("hidden-subspace bench",
           Json{{"n", c.n}, {"beta", c.beta}, {"d", c.d}, {"trials", c.trials}, {"seed", c.seed}});
  hs::AttackStats stats = hs::run_attack_trials(params, c.trials, c.seed);
  r.results()["m"] = params.m();

  Json records = Json::array();
  for (size_t t = 0; t < stats.records.size(); ++t) {
    const auto& rec = stats.records[t];
    records.push_back(Json{{"trial", t},
                           {"exact", rec.exact},
                           {"contains_secret", rec.contains_secret},
                           {"recovered_dim", rec.recovered_dim}});
  }
  const double target = 1.0 - std::ldexp(1.0, -static_cast<int>(c.n));
  const double band = c.trials == 0 ? 0.0 : 3.0 * std::sqrt(target * (1 - target) / static_cast<double>(c.trials));
  r.set_trials(records, Json{{"exact", stats.exact},
                             {"inclusion", stats.inclusion},
                             {"success_rate", stats.success_rate()},
                             {"target_rate", target},
                             {"three_sigma", band},
                             {"rate_within_band", stats.success_rate() >= target - band}});
  r.formula("success_rate", "exact / trials");
  r.formula("target_rate", "1 - 2^-n");
  r.formula("three_sigma", "3 sqrt(target_rate (1 - target_rate) / trials)");
  r.formula("recovered_dim", "dimension of the Jacobian kernel at the measured point");

  r.invariant("secret_contained_every_trial", stats.inclusion == stats.trials,
              "subspace intersection with the generated secret");
  r.invariant("no_failure_below_secret", stats.failures_not_superspace == 0,
              "subspace intersection with the generated secret");
  return r;
}

Report clone_census(const CloneCensusConfig& c) {
  Rng key_rng = Rng::stream(c.seed, 0);
  mv::MVHashKey key = mv::mv_keygen(c.m, c.n, key_rng);
  Report r("zhandry census", Json{{"m", c.m}, {"n", c.n}, {"seed", c.seed}});
  mv::PreimageCensus cs = mv::census(key);

  Json& res = r.results();
  res["counts"] = cs.counts;
  res["total"] = cs.total();
  res["image_size"] = cs.image_size();
  res["surjective"] = cs.surjective();
  res["min_fiber_ratio"] = mv::min_fiber_ratio(cs);
  r.formula("counts", "#f^-1(y) by exhaustive hashing of all 2^m inputs");
  r.formula("min_fiber_ratio", "min over nonzero y of C_y / (C_0 + C_y)");
  if (c.m + c.n <= 16) {
    mv::PhiSpan span = mv::phi_span(key);
    res["phi_rank"] = span.rank();
    res["phi_count"] = span.num_phi;
    res["phi_rank_defect"] = span.rank_defect();
    r.formula("phi_rank", "rank of {phi_r} by modified Gram-Schmidt with drop threshold 1e-9");
  }
  r.invariant("census_total", cs.total() == (uint64_t{1} << c.m), "2^m inputs");
  r.invariant("origin_in_zero_fiber", cs.at(0) >= 1, "f(0) = 0 for homogeneous quadratic forms");
  return r;
}

Report clone_attack(const CloneAttackConfig& c) {
  uint64_t y = 0;
  try {
    size_t used = 0;
    y = std::stoull(c.y, &used, 16);
    if (used != c.y.size()) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw UsageError("--y must be a hexadecimal integer");
  }
  if (c.n == 0 || c.n > mv::kMaxHashOutputBits || y == 0 || y >= (uint64_t{1} << c.n)) {
    throw UsageError("--y must be a nonzero value below 2^n");
  }
  Rng key_rng = Rng::stream(c.seed, 0);
  mv::MVHashKey key = mv::mv_keygen(c.m, c.n, key_rng);
  Report r("zhandry attack", Json{{"m", c.m}, {"n", c.n}, {"y", c.y}, {"trials", c.trials}, {"seed", c.seed}});
  mv::PreimageCensus cs = mv::census(key);
  const uint64_t c0 = cs.at(0), cy = cs.at(y);
  const double predicted = static_cast<double>(cy) / static_cast<double>(c0 + cy);

  Json& res = r.results();
  res["census"] = Json{{"counts", cs.counts},
                       {"surjective", cs.surjective()},
                       {"image_size", cs.image_size()},
                       {"c0", c0},
                       {"cy", cy}};
  res["predicted_rate"] = predicted;
  r.formula("predicted_rate", "C_y / (C_0 + C_y) from the census");
  r.invariant("fiber_nonempty", cy > 0, "preimage census");
  if (cy == 0) {
    r.set_trials(Json::array(), Json::object());
    return r;
  }

  const std::vector<uint64_t> table = mv::hash_table(key);
  const mv::BoltComponent exact = mv::exact_bolt_component(key, y);
  Json records = Json::array();
  size_t total_iterations = 0;
  double min_fid = 1, min_acc = 1;
  bool all_supported = true;
  for (size_t t = 0; t < c.trials; ++t) {
    Rng rng = Rng::stream(c.seed, t + 1);
    mv::CloneResult cr = mv::attack_clone(key, y, rng);
    double fid = sv::fidelity(cr.bolt.state, exact.state);
    double acc = mv::mv_accept_probability(key, y, cr.bolt.state);
    bool supported = true;
    for (uint64_t x = 0; x < cr.bolt.state.dim(); ++x) {
      if (std::abs(cr.bolt.state.amplitude(x)) > 1e-12 && table[x] != y) {
        supported = false;
      }
    }
    total_iterations += cr.iterations;
    min_fid = std::min(min_fid, fid);
    min_acc = std::min(min_acc, acc);
    all_supported = all_supported && supported;
    records.push_back(Json{{"trial", t},
                           {"iterations", cr.iterations},
                           {"fidelity", fid},
                           {"accept_probability", acc},
                           {"y_supported", supported}});
  }
  const double rate = total_iterations == 0 ? 0.0 : static_cast<double>(c.trials) / total_iterations;
  const double band =
      total_iterations == 0 ? 0.0 : 3.0 * std::sqrt(predicted * (1 - predicted) / static_cast<double>(total_iterations));
  r.set_trials(records, Json{{"total_iterations", total_iterations},
                             {"success_rate", rate},
                             {"predicted_rate", predicted},
                             {"three_sigma", band},
                             {"rate_within_band", std::abs(rate - predicted) <= band},
                             {"min_fidelity", min_fid},
                             {"min_accept_probability", min_acc}});
  r.formula("fidelity", "|<clone|exact bolt component>|^2");
  r.formula("accept_probability", "||P_B clone||^2 times the probability the hash measures y");
  r.formula("success_rate", "trials / total_iterations");
  r.formula("three_sigma", "3 sqrt(predicted_rate (1 - predicted_rate) / total_iterations)");

  r.invariant("clone_fidelity", min_fid >= 1 - 1e-9, "normalized uniform superposition over the fiber of y");
  r.invariant("clone_passes_verification", min_acc >= 1 - 1e-9, "exact projector onto span{phi_r}");
  r.invariant("clone_y_supported", all_supported, "hash table");
  return r;
}

Report brandt(const BrandtConfig& c) {
  if (c.n_max < 1 || c.n_max > 100) {
    throw UsageError("--nmax must lie in [1, 100]");
  }
  Level lv = build_level(c.p, c.n_max);
  const auto& bt = lv.table;
  const auto& w = lv.classes.weights;
  const size_t h = lv.classes.size();
  Report r("brandt", Json{{"p", c.p}, {"nmax", c.n_max}});

  Json& res = r.results();
  res["class_count"] = h;
  res["weights"] = w;
  res["mass"] = lv.classes.mass().str();
  res["convention"] = quat::to_string(bt.convention);
  res["convention_checks"] = Json{{quat::to_string(quat::BrandtConvention::kRowWeight), check_json(bt.row_check)},
                                  {quat::to_string(quat::BrandtConvention::kColumnWeight), check_json(bt.column_check)}};
  Json mats = Json::object();
  for (int64_t n = 1; n <= c.n_max; ++n) {
    mats[std::to_string(n)] = matrix_json(bt.matrix(n));
  }
  res["brandt_matrices"] = mats;
  r.formula("weights", "#{u in left order : nrd(u) = 1}");
  r.formula("mass", "sum of 1 / w_i");
  r.formula("brandt_matrices", "B(n)_ij = N_ij(n) / w_j, N from I_j I_i^-1");
  r.formula("theta", "representation counts of the scaled norm form, Fincke-Pohst enumeration");

  r.invariant("mass_formula", lv.classes.mass() == quat::Rational(c.p - 1, 24), "(p - 1) / 24");
  const quat::ConventionCheck& chosen =
      bt.convention == quat::BrandtConvention::kColumnWeight ? bt.column_check : bt.row_check;
  r.invariant("convention_valid", chosen.valid(), "integrality, row sums and weighted symmetry");

  bool row_sums = true;
  for (int64_t n = 1; n <= c.n_max; ++n) {
    if (n % c.p == 0) {
      continue;
    }
    for (Eigen::Index i = 0; i < bt.matrix(n).rows(); ++i) {
      row_sums = row_sums && bt.matrix(n).row(i).sum() == quat::sigma_prime(n, c.p);
    }
  }
  r.invariant("row_sums", row_sums, "sum of divisors coprime to p");

  Json theta = Json::array();
  bool theta_ok = true;
  for (size_t i = 0; i < h; ++i) {
    for (size_t j = 0; j < h; ++j) {
      std::vector<int64_t> coeffs = quat::theta_coefficients(lv.setup, lv.classes, i, j, c.n_max);
      theta_ok = theta_ok && coeffs[0] == 1;
      for (int64_t n = 1; n <= c.n_max; ++n) {
        theta_ok = theta_ok && coeffs[static_cast<size_t>(n)] == bt.matrix(n)(static_cast<Eigen::Index>(i),
                                                                                static_cast<Eigen::Index>(j)) *
                                                                     w[j];
      }
      if (i <= j) {
        theta.push_back(Json{{"i", i}, {"j", j}, {"coefficients", coeffs}});
      }
    }
  }
  res["theta"] = theta;
  r.invariant("theta_equals_petersson_pairing", theta_ok, "2 <T_n [I_i], [I_j]> = B(n)_ij w_j");

  bool mult = true, squares = true, commute = true;
  for (int64_t a = 2; a <= c.n_max; ++a) {
    for (int64_t b = a + 1; a * b <= c.n_max; ++b) {
      if (std::gcd(a, b) == 1) {
        mult = mult && bt.matrix(a * b) == bt.matrix(a) * bt.matrix(b);
      }
    }
    if (is_prime(a) && a != c.p && a * a <= c.n_max) {
      quat::BrandtMatrix id = quat::BrandtMatrix::Identity(bt.matrix(1).rows(), bt.matrix(1).cols());
      squares = squares && bt.matrix(a * a) == bt.matrix(a) * bt.matrix(a) - a * id;
    }
    for (int64_t b = 2; b <= std::min<int64_t>(c.n_max, 12); ++b) {
      if (a <= 12) {
        commute = commute && bt.matrix(a) * bt.matrix(b) == bt.matrix(b) * bt.matrix(a);
      }
    }
  }
  r.invariant("hecke_multiplicative", mult, "B(ab) = B(a) B(b) for coprime a, b");
  r.invariant("hecke_prime_squares", squares, "B(l^2) = B(l)^2 - l I");
  r.invariant("hecke_commute", commute, "B(a) B(b) = B(b) B(a)");

  if (c.p == 11) {
    std::istringstream in(read_text(c.fixture_dir + "/modular/level11_an.txt"));
    std::string line;
    bool ok = true;
    Json cross = Json::array();
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') {
        continue;
      }
      std::istringstream ls(line);
      int64_t n = 0, an = 0;
      ls >> n >> an;
      if (n > c.n_max) {
        continue;
      }
      int64_t trace = bt.matrix(n).trace();
      ok = ok && trace - quat::sigma_prime(n, c.p) == an;
      cross.push_back(Json{{"n", n}, {"trace", trace}, {"published_a_n", an}});
    }
    res["cusp_form_cross_check"] = cross;
    r.invariant("trace_matches_published_cusp_form", ok, "published level-11 newform coefficients");
  }
  return r;
}

Report hecke_eigen(const HeckeEigenConfig& c) {
  require_primes(c.primes, c.p);
  const int64_t max_prime = *std::max_element(c.primes.begin(), c.primes.end());
  if (c.n_max < max_prime || c.n_max > 100) {
    throw UsageError("--nmax must lie in [max prime, 100]");
  }
  if (c.primes.size() < 2) {
    throw UsageError("--primes needs at least two primes");
  }
  Level lv = build_level(c.p, c.n_max);
  Rng rng = Rng::stream(c.seed, 0);
  hecke::EigenBasis eb = hecke::compute_eigenbasis(lv.table, c.primes, rng);
  Report r("hecke eigen", Json{{"p", c.p}, {"primes", c.primes}, {"nmax", c.n_max}, {"seed", c.seed}});

  Json& res = r.results();
  res["class_count"] = eb.size();
  res["weights"] = eb.weights;
  res["eisenstein_index"] = eb.eisenstein_index;
  res["combination"] = eb.combination;
  res["attempts"] = eb.attempts;
  Json forms = Json::array();
  bool eis_ok = true, deligne = true, ortho = true;
  for (size_t f = 0; f < eb.size(); ++f) {
    Json ev = Json::object();
    for (const auto& [n, v] : eb.eigenvalues[f]) {
      ev[std::to_string(n)] = v;
      if (f == eb.eisenstein_index) {
        eis_ok = eis_ok && std::abs(v - static_cast<double>(quat::sigma_prime(n, c.p))) <= 1e-9;
      } else if (is_prime(n) && n != c.p) {
        deligne = deligne && std::abs(v) <= 2 * std::sqrt(static_cast<double>(n)) + 1e-9;
      }
    }
    for (size_t g = 0; g < eb.size(); ++g) {
      ortho = ortho && std::abs(eb.states[f].dot(eb.states[g]) - (f == g ? 1.0 : 0.0)) <= 1e-10;
    }
    forms.push_back(Json{{"index", f},
                         {"eisenstein", f == eb.eisenstein_index},
                         {"state", vector_json(eb.states[f])},
                         {"eigenvalues", ev}});
  }
  res["forms"] = forms;
  r.formula("state", "u_j = alpha_j sqrt(w_j / 2), unit Petersson norm");
  r.formula("eigenvalues", "u^T T_n u with T_n = W^-1/2 N(n) W^-1/2");
  r.invariant("eisenstein_eigenvalues", eis_ok, "sum of divisors coprime to p");
  r.invariant("deligne_bound", deligne, "|a_l| <= 2 sqrt(l)");
  r.invariant("orthonormal_states", ortho, "Petersson inner product");
  return r;
}

Report hecke_attack(const HeckeAttackConfig& c) {
  require_primes(c.primes, c.p);
  if (c.primes.size() < 2) {
    throw UsageError("--primes needs at least two primes");
  }
  if (!(c.eps >= 0) || c.eps > 1) {
    throw UsageError("--eps must lie in [0, 1]");
  }
  std::optional<size_t> fixed_pivot;
  if (c.pivot != "auto") {
    try {
      size_t used = 0;
      fixed_pivot = std::stoull(c.pivot, &used);
      if (used != c.pivot.size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw UsageError("--pivot must be 'auto' or a class index");
    }
  }

  // Table size must cover both the primes and the largest reduction index.
  if (!is_prime(c.p)) {
    throw UsageError("--p must be prime");
  }
  quat::AlgebraSetup setup = quat::algebra_setup(c.p);
  quat::ClassSet classes = quat::enumerate_classes(setup);
  const size_t s = hecke::primes_needed(classes.size());
  if (c.primes.size() < s) {
    throw UsageError("--primes needs at least " + std::to_string(s) + " primes for h = " +
                     std::to_string(classes.size()));
  }
  int64_t n_max = *std::max_element(c.primes.begin(), c.primes.end());
  int64_t prod = 1;
  for (size_t t = 0; t < s; ++t) {
    prod *= c.primes[t];
  }
  n_max = std::max(n_max, prod);
  if (n_max > 200) {
    throw UsageError("reduction indices exceed 200; choose smaller primes");
  }
  quat::BrandtTable bt = quat::build_brandt_table(setup, classes, n_max);
  Rng basis_rng = Rng::stream(c.seed, 0);
  hecke::EigenBasis eb = hecke::compute_eigenbasis(bt, c.primes, basis_rng);
  if (fixed_pivot && *fixed_pivot >= classes.size()) {
    throw UsageError("--pivot exceeds the class count");
  }

  Report r("hecke attack", Json{{"p", c.p}, {"primes", c.primes}, {"eps", c.eps}, {"pivot", c.pivot}, {"seed", c.seed}});
  Json& res = r.results();
  res["class_count"] = classes.size();
  res["weights"] = classes.weights;
  res["reduction_primes"] = std::vector<int64_t>(c.primes.begin(), c.primes.begin() + static_cast<std::ptrdiff_t>(s));
  res["reduction_indices"] = hecke::reduction_indices(
      std::vector<int64_t>(c.primes.begin(), c.primes.begin() + static_cast<std::ptrdiff_t>(s)), classes.size());
  r.formula("condition", "largest over smallest singular value of A");
  r.formula("exact_fidelity", "|<reconstructed|eigenform>|^2 from exact eigenvalues");
  r.formula("noisy_fidelity", "|<reconstructed|eigenform>|^2 from eigenvalues with uniform noise in [-eps, eps]");
  r.formula("residual", "||A x - a|| after one refinement step");
  r.formula("trace_distance", "|| rho - rho~ ||_1 = 2 sqrt(1 - |<a|a~>|^2)");
  r.formula("product_direct_gap", "max entrywise |product state - normalized a vector|");

  Json records = Json::array();
  bool exact_ok = true, noisy_ok = true, chain_ok = true, product_ok = true;
  double worst_exact = 1, worst_noisy = 1, max_condition = 0;
  for (size_t f : eb.cusp_indices()) {
    Rng rng = Rng::stream(c.seed, f + 1);
    hecke::ReductionSystem rs = fixed_pivot ? hecke::build_reduction(bt, *fixed_pivot, c.primes)
                                            : hecke::build_reduction_random_pivot(bt, c.primes, rng);
    Json rec{{"form", f}, {"pivot", rs.pivot}, {"condition", rs.condition}, {"singular", rs.singular}};
    const bool pivot_zero = std::abs(eb.alphas[f](static_cast<Eigen::Index>(rs.pivot))) < 1e-9;
    rec["pivot_coordinate_zero"] = pivot_zero;
    if (rs.singular || pivot_zero) {
      records.push_back(rec);
      continue;
    }
    std::vector<double> exact, noisy;
    for (int64_t l : rs.primes) {
      exact.push_back(eb.eigenvalue(f, l));
    }
    noisy = hecke::noisy_prime_eigenvalues(eb, f, rs.primes, c.eps, rng);

    hecke::Reconstruction re = hecke::attack_reconstruct(rs, exact);
    hecke::Reconstruction rn = hecke::attack_reconstruct(rs, noisy);
    const double fe = std::pow(re.state.dot(eb.states[f]), 2);
    const double fn = std::pow(rn.state.dot(eb.states[f]), 2);
    exact_ok = exact_ok && fe >= 1 - 1e-9;
    if (rs.condition * c.eps < 0.01) {
      noisy_ok = noisy_ok && fn >= 1 - 10 * rs.condition * c.eps;
    }
    worst_exact = std::min(worst_exact, fe);
    worst_noisy = std::min(worst_noisy, fn);
    max_condition = std::max(max_condition, rs.condition);

    hecke::TraceDistanceChain chain = hecke::trace_distance_chain(exact, noisy);
    chain_ok = chain_ok && chain.total <= chain.bound() + 1e-9;
    sv::StateVector prod_state = hecke::product_state(exact);
    sv::StateVector direct = hecke::direct_a_state(eb, f, rs.primes);
    double gap = 0;
    for (uint64_t j = 0; j < prod_state.dim(); ++j) {
      gap = std::max(gap, std::abs(prod_state.amplitude(j) - direct.amplitude(j)));
    }
    product_ok = product_ok && gap <= 1e-12;

    rec["exact_eigenvalues"] = exact;
    rec["noisy_eigenvalues"] = noisy;
    rec["exact_fidelity"] = fe;
    rec["noisy_fidelity"] = fn;
    rec["exact_residual"] = re.diagnostics.residual;
    rec["noisy_residual"] = rn.diagnostics.residual;
    rec["noise_bound_applies"] = rs.condition * c.eps < 0.01;
    rec["trace_distance"] = Json{{"total", chain.total}, {"per_factor", chain.per_factor}, {"bound", chain.bound()}};
    rec["product_direct_gap"] = gap;
    records.push_back(rec);
  }
  r.set_trials(records, Json{{"min_exact_fidelity", worst_exact},
                             {"min_noisy_fidelity", worst_noisy},
                             {"max_condition", max_condition}});
  r.invariant("exact_reconstruction", exact_ok, "eigenbasis of the Brandt matrices");
  r.invariant("noisy_fidelity_within_condition_bound", noisy_ok, "1 - 10 kappa eps when kappa eps < 0.01");
  r.invariant("trace_distance_subadditive", chain_ok, "sum of per-factor trace distances");
  r.invariant("product_state_matches_direct", product_ok, "normalized eigenvalue vector (a_{n_j})");
  return r;
}

}  // namespace qmoney::cli
