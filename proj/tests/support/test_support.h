#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmoney::test_support {

inline std::string fixture_path(const std::string& rel) {
  return std::string(QMONEY_FIXTURE_DIR) + "/" + rel;
}

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture_path(rel));
  if (!in) {
    throw std::runtime_error("missing fixture " + rel);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Pearson statistic against a uniform expectation.
inline double chi_square_uniform(const std::vector<size_t>& counts) {
  size_t total = 0;
  for (size_t c : counts) {
    total += c;
  }
  double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0;
  for (size_t c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

/// Upper critical value of chi-square with `dof` degrees of freedom at level alpha.
inline double chi_square_critical(size_t dof, double alpha = 1e-3) {
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

/// Half-width of a 3-sigma binomial band.
inline double three_sigma(double p, size_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace qmoney::test_support
