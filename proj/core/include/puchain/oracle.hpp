// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <span>
#include <vector>

#include "puchain/expfam.hpp"
#include "puchain/matrix.hpp"
#include "puchain/permutation.hpp"

/// Brute-force references. Nothing here calls puniform, ermgm, netstat or the
/// evaluation half of expfam; only the core value types are shared.
namespace puchain::oracle {

inline constexpr std::size_t kOracleCap = std::size_t{1} << 20;

/// Sum with Kahan compensation.
double kahan_sum(std::span<const double> values);

/// A pmf over tuples (y_1, ..., y_length) with y_i in [0, base). The tuple
/// index is sum_i y_i base^(length - i), so y_1 is the most significant digit.
class ExactLaw {
 public:
  ExactLaw(std::size_t base, std::size_t length, std::vector<double> mass);

  std::size_t base() const { return base_; }
  std::size_t length() const { return length_; }
  std::size_t num_outcomes() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> mass() const { return mass_; }
  std::vector<StateIndex> outcome(std::size_t i) const;
  double total() const { return kahan_sum(mass_); }
  /// Law of the k-th coordinate (0-based).
  std::vector<double> marginal(std::size_t k) const;

 private:
  std::size_t base_;
  std::size_t length_;
  std::vector<double> mass_;
};

/// Law of (X_1, ..., X_T) given X_0 = x0.
ExactLaw enumerate_trajectory_law(const StochasticMatrix& P, StateIndex x0, std::size_t T);

/// Law of (Z_1, ..., Z_T) with Z_{i+1} = sigma_{X_i}(X_{i+1}).
ExactLaw pushforward_z_law(const StochasticMatrix& P, const PermutationFamily& family, StateIndex x0,
                           std::size_t T);

/// max over outcomes of |law(z) - prod_i mu(z_i)|.
double product_law_residual(const ExactLaw& law, std::span<const double> mu);

/// max over outcomes of |law(z) - prod_i marginal_i(z_i)|: zero iff the
/// coordinates are independent.
double independence_residual(const ExactLaw& law);

/// log sum_x kappa(x) exp(eta(theta) . tau(x)), direct and compensated.
double brute_partition(const ExpFamilySpec& family, std::span<const double> theta);

/// Law of the dyadwise sum of t iid simple graphs on n vertices drawn from
/// `simple_law` (indexed by the G(n, 1) codec). The result is indexed by the
/// G(n, t) codec.
ExactLaw brute_union_law(int n, std::span<const double> simple_law, int t);

struct SumProductCheck {
  double product_of_sums;
  double sum_of_products;
  double relative_error;
  bool equal;
};

/// prod_i sum_b f_i(b) against sum over tuples y of prod_i f_i(y_i).
SumProductCheck sum_product_identity_check(const std::vector<std::vector<double>>& tables, double rel_tol = 1e-10);

}  // namespace puchain::oracle
