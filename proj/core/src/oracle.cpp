// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace puchain::oracle {

double kahan_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > kOracleCap / base) {
      throw SpaceTooLarge("oracle enumeration exceeds 2^20 outcomes");
    }
    result *= base;
  }
  return result;
}

std::vector<StateIndex> decode_tuple(std::size_t i, std::size_t base, std::size_t length) {
  std::vector<StateIndex> y(length);
  for (std::size_t k = length; k-- > 0;) {
    y[k] = static_cast<StateIndex>(i % base);
    i /= base;
  }
  return y;
}

}  // namespace

ExactLaw::ExactLaw(std::size_t base, std::size_t length, std::vector<double> mass)
    : base_(base), length_(length), mass_(std::move(mass)) {
  if (base_ == 0) throw std::invalid_argument("law over an empty alphabet");
  if (mass_.size() != checked_power(base_, length_)) throw std::invalid_argument("mass vector has the wrong size");
}

std::vector<StateIndex> ExactLaw::outcome(std::size_t i) const { return decode_tuple(i, base_, length_); }

std::vector<double> ExactLaw::marginal(std::size_t k) const {
  if (k >= length_) throw std::out_of_range("marginal coordinate out of range");
  std::vector<std::vector<double>> parts(base_);
  for (std::size_t i = 0; i < mass_.size(); ++i) parts[outcome(i)[k]].push_back(mass_[i]);
  std::vector<double> m(base_);
  for (std::size_t y = 0; y < base_; ++y) m[y] = kahan_sum(parts[y]);
  return m;
}

ExactLaw enumerate_trajectory_law(const StochasticMatrix& P, StateIndex x0, std::size_t T) {
  if (!P.is_square()) throw std::invalid_argument("trajectory law needs a square matrix");
  const std::size_t n = P.cols();
  if (x0 >= n) throw std::invalid_argument("initial state out of range");
  std::vector<double> mass(checked_power(n, T));
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const auto y = decode_tuple(i, n, T);
    double m = 1.0;
    StateIndex previous = x0;
    for (StateIndex next : y) {
      m *= P(previous, next);
      previous = next;
    }
    mass[i] = m;
  }
  return ExactLaw(n, T, std::move(mass));
}

ExactLaw pushforward_z_law(const StochasticMatrix& P, const PermutationFamily& family, StateIndex x0,
                           std::size_t T) {
  if (family.size() != P.cols()) throw std::invalid_argument("family and matrix sizes differ");
  const ExactLaw x_law = enumerate_trajectory_law(P, x0, T);
  const std::size_t n = P.cols();
  std::vector<double> mass(x_law.num_outcomes(), 0.0);
  for (std::size_t i = 0; i < x_law.num_outcomes(); ++i) {
    if (x_law[i] == 0.0) continue;
    const auto x = x_law.outcome(i);
    std::size_t index = 0;
    StateIndex previous = x0;
    for (StateIndex next : x) {
      index = index * n + family.apply(previous, next);
      previous = next;
    }
    // sigma_a is a bijection for each a, so x -> z is injective: no collisions.
    mass[index] += x_law[i];
  }
  return ExactLaw(n, T, std::move(mass));
}

double product_law_residual(const ExactLaw& law, std::span<const double> mu) {
  if (mu.size() != law.base()) throw std::invalid_argument("mu has the wrong size");
  double worst = 0.0;
  for (std::size_t i = 0; i < law.num_outcomes(); ++i) {
    double expected = 1.0;
    for (StateIndex z : law.outcome(i)) expected *= mu[z];
    worst = std::max(worst, std::abs(law[i] - expected));
  }
  return worst;
}

double independence_residual(const ExactLaw& law) {
  std::vector<std::vector<double>> marginals;
  for (std::size_t k = 0; k < law.length(); ++k) marginals.push_back(law.marginal(k));
  double worst = 0.0;
  for (std::size_t i = 0; i < law.num_outcomes(); ++i) {
    const auto y = law.outcome(i);
    double expected = 1.0;
    for (std::size_t k = 0; k < y.size(); ++k) expected *= marginals[k][y[k]];
    worst = std::max(worst, std::abs(law[i] - expected));
  }
  return worst;
}

double brute_partition(const ExpFamilySpec& family, std::span<const double> theta) {
  if (family.num_states() > kOracleCap) throw SpaceTooLarge("brute partition exceeds 2^20 states");
  const ParamVector eta = family.eta()(theta);
  std::vector<double> exponents;
  exponents.reserve(family.num_states());
  for (std::size_t x = 0; x < family.num_states(); ++x) {
    const double k = family.kappa(x);
    if (k == 0.0) continue;
    const auto tau = family.tau(x);
    double e = std::log(k);
    for (std::size_t j = 0; j < tau.size(); ++j) e += eta[j] * tau[j];
    exponents.push_back(e);
  }
  if (exponents.empty()) throw std::invalid_argument("brute partition of a family with kappa == 0");
  const double shift = *std::max_element(exponents.begin(), exponents.end());
  for (double& e : exponents) e = std::exp(e - shift);
  return shift + std::log(kahan_sum(exponents));
}

ExactLaw brute_union_law(int n, std::span<const double> simple_law, int t) {
  if (n < 2 || t < 1) throw std::invalid_argument("union law needs n >= 2 and t >= 1");
  const auto N = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t simple_size = checked_power(2, N);
  if (simple_law.size() != simple_size) throw std::invalid_argument("simple law has the wrong size");
  const std::size_t tuples = checked_power(simple_size, static_cast<std::size_t>(t));
  const auto base = static_cast<std::size_t>(t + 1);
  const std::size_t union_size = checked_power(base, N);

  std::vector<double> sum(union_size, 0.0);
  std::vector<double> compensation(union_size, 0.0);
  std::vector<std::size_t> graphs(static_cast<std::size_t>(t));
  for (std::size_t i = 0; i < tuples; ++i) {
    std::size_t rest = i;
    double mass = 1.0;
    for (auto& g : graphs) {
      g = rest % simple_size;
      rest /= simple_size;
      mass *= simple_law[g];
    }
    std::size_t index = 0;
    for (std::size_t f = N; f-- > 0;) {
      std::size_t w = 0;
      for (std::size_t g : graphs) w += (g >> f) & 1u;
      index = index * base + w;
    }
    const double y = mass - compensation[index];
    const double s = sum[index] + y;
    compensation[index] = (s - sum[index]) - y;
    sum[index] = s;
  }
  return ExactLaw(union_size, 1, std::move(sum));
}

SumProductCheck sum_product_identity_check(const std::vector<std::vector<double>>& tables, double rel_tol) {
  if (tables.empty()) throw std::invalid_argument("no tables");
  std::size_t tuples = 1;
  for (const auto& table : tables) {
    if (table.empty()) throw std::invalid_argument("empty table");
    if (tuples > kOracleCap / table.size()) throw SpaceTooLarge("sum-product check exceeds 2^20 tuples");
    tuples *= table.size();
  }
  SumProductCheck check{1.0, 0.0, 0.0, false};
  for (const auto& table : tables) check.product_of_sums *= kahan_sum(table);

  std::vector<double> products(tuples);
  for (std::size_t i = 0; i < tuples; ++i) {
    std::size_t rest = i;
    double p = 1.0;
    for (const auto& table : tables) {
      p *= table[rest % table.size()];
      rest /= table.size();
    }
    products[i] = p;
  }
  check.sum_of_products = kahan_sum(products);
  const double scale = std::max(std::abs(check.product_of_sums), std::abs(check.sum_of_products));
  check.relative_error = scale == 0.0 ? 0.0 : std::abs(check.product_of_sums - check.sum_of_products) / scale;
  check.equal = check.relative_error <= rel_tol;
  return check;
}

}  // namespace puchain::oracle
