// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "puchain/matrix.hpp"
#include "puchain/permutation.hpp"
#include "puchain/puniform.hpp"
#include "puchain/state_space.hpp"

namespace puchain {

using ParamVector = std::vector<double>;

/// Raised when a specification lacks the structure an operation needs, e.g.
/// asking for MEF-only quantities from a CEF whose row normalizers differ.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EtaKind { natural, scalar_log, density_logit, table };

/// The parameter function eta: Theta -> R^l.
class ParameterMap {
 public:
  /// eta(theta) = theta, d = l = dim.
  static ParameterMap natural(std::size_t dim = 1);
  /// eta(theta) = log(theta) on (0, inf).
  static ParameterMap scalar_log();
  /// eta(p) = (n - 1) log(p / (1 - p)) on (0, 1).
  static ParameterMap density_logit(int n);
  /// Finite list of (theta, eta(theta)) samples; evaluation is an exact lookup.
  static ParameterMap table(std::vector<std::pair<ParamVector, ParamVector>> samples);

  EtaKind kind() const { return kind_; }
  std::size_t param_dim() const { return param_dim_; }
  std::size_t stat_dim() const { return stat_dim_; }
  int vertex_count() const { return n_; }
  const std::vector<std::pair<ParamVector, ParamVector>>& samples() const { return samples_; }

  bool in_domain(std::span<const double> theta) const;
  /// Throws std::domain_error outside the declared domain.
  ParamVector operator()(std::span<const double> theta) const;

  /// Diagonal of the Jacobian for the named forms (all have d = l and act
  /// coordinatewise). Empty for table maps.
  std::optional<ParamVector> jacobian_diagonal(std::span<const double> theta) const;

  /// Five probes spread over the domain (the samples, for table maps).
  std::vector<ParamVector> default_probes() const;

 private:
  ParameterMap(EtaKind kind, std::size_t d, std::size_t l, int n,
               std::vector<std::pair<ParamVector, ParamVector>> samples);

  EtaKind kind_;
  std::size_t param_dim_;
  std::size_t stat_dim_;
  int n_;
  std::vector<std::pair<ParamVector, ParamVector>> samples_;
};

/// kappa(a) exp(eta(theta) . tau(a) - psi(theta)) on a finite space.
class ExpFamilySpec {
 public:
  /// `tau` is row-major, num_states x stat_dim.
  ExpFamilySpec(StateSpace space, std::vector<double> kappa, std::size_t stat_dim, std::vector<double> tau,
                ParameterMap eta);

  const StateSpace& space() const { return space_; }
  std::size_t num_states() const { return kappa_.size(); }
  std::size_t stat_dim() const { return stat_dim_; }
  double kappa(std::size_t a) const { return kappa_[a]; }
  std::span<const double> kappa() const { return kappa_; }
  std::span<const double> tau(std::size_t a) const { return {tau_.data() + a * stat_dim_, stat_dim_}; }
  std::span<const double> tau_table() const { return tau_; }
  const ParameterMap& eta() const { return eta_; }

 private:
  StateSpace space_;
  std::vector<double> kappa_;
  std::size_t stat_dim_;
  std::vector<double> tau_;
  ParameterMap eta_;
};

/// P(a, b) = kappa(a, b) exp(eta(theta) . tau(a, b) - psi(a, theta)).
///
/// Rows index the first num_rows() states of the space; a square spec is a
/// transition-matrix family, a row-prefix spec is a partial fixture. Rows with
/// kappa identically zero are accepted here so that validate_cef can report
/// them; anything that normalizes a row refuses them.
class CefSpec {
 public:
  using KappaFn = std::function<double(StateIndex, StateIndex)>;
  using TauFn = std::function<void(StateIndex, StateIndex, std::span<double>)>;

  /// `kappa` is num_rows x |S| row-major, or empty for kappa == 1.
  /// `tau` is num_rows x |S| x stat_dim row-major.
  CefSpec(StateSpace space, std::size_t num_rows, std::vector<double> kappa, std::size_t stat_dim,
          std::vector<double> tau, ParameterMap eta);

  /// Tabulates a square spec from callables; a null kappa means kappa == 1.
  static CefSpec tabulate(StateSpace space, std::size_t stat_dim, const TauFn& tau, const KappaFn& kappa,
                          ParameterMap eta);

  const StateSpace& space() const { return space_; }
  std::size_t num_states() const { return space_.size(); }
  std::size_t num_rows() const { return num_rows_; }
  bool is_square() const { return num_rows_ == space_.size(); }
  std::size_t stat_dim() const { return stat_dim_; }
  bool unit_kappa() const { return kappa_.empty(); }

  double kappa(std::size_t a, std::size_t b) const {
    return kappa_.empty() ? 1.0 : kappa_[a * space_.size() + b];
  }
  std::span<const double> tau(std::size_t a, std::size_t b) const {
    return {tau_.data() + (a * space_.size() + b) * stat_dim_, stat_dim_};
  }
  /// kappa restricted to row a (tabulated); ones when unit_kappa().
  std::vector<double> kappa_row(std::size_t a) const;
  const ParameterMap& eta() const { return eta_; }

  /// The spec restricted to its first `rows` rows.
  CefSpec restrict_rows(std::size_t rows) const;

 private:
  StateSpace space_;
  std::size_t num_rows_;
  std::vector<double> kappa_;
  std::size_t stat_dim_;
  std::vector<double> tau_;
  ParameterMap eta_;
};

/// A CEF together with the outcome of mef_check. Operations that rely on a
/// shared log-partition refuse unverified specs.
class MefSpec {
 public:
  /// Runs mef_check on the given probes (default: eta's default probes).
  static MefSpec check(CefSpec cef, std::span<const ParamVector> probes = {}, double tol = 1e-9);
  /// For constructions that are MEFs by design; mef_check is still run and
  /// InvariantViolation is raised if it fails.
  static MefSpec by_construction(CefSpec cef);

  const CefSpec& cef() const { return cef_; }
  bool verified() const { return verified_; }

 private:
  MefSpec(CefSpec cef, bool verified) : cef_(std::move(cef)), verified_(verified) {}
  CefSpec cef_;
  bool verified_;
};

/// log(sum of exp(values)), shifted by the maximum. -inf for an empty input.
double log_sum_exp(std::span<const double> values);

double log_partition(const ExpFamilySpec& family, std::span<const double> theta);
Pmf pmf(const ExpFamilySpec& family, std::span<const double> theta);

/// psi(a, theta) for one row.
double row_log_partition(const CefSpec& cef, std::size_t row, std::span<const double> theta);
StochasticMatrix cef_transition_matrix(const CefSpec& cef, std::span<const double> theta);

struct CefValidation {
  std::vector<ParamVector> probes;
  /// raw_row_sums[probe][row] = sum_b kappa(a, b) exp(eta . tau(a, b)).
  std::vector<std::vector<double>> raw_row_sums;
  /// Rows whose kappa is identically zero and so cannot normalize.
  std::vector<std::size_t> zero_rows;
  /// Per probe, rows whose raw sum differs from row 0's (relative tolerance).
  std::vector<std::vector<std::size_t>> rows_breaking_shared_normalizer;
  bool shared_normalizer;
};

CefValidation validate_cef(const CefSpec& cef, std::span<const ParamVector> probes, double rel_tol = 1e-9);

struct MefCheck {
  bool is_mef;
  /// Largest |psi(a, theta) - psi(0, theta)| over rows and probes.
  double max_spread;
  explicit operator bool() const { return is_mef; }
};

/// True iff every probed theta has max_a |psi(a, theta) - psi(0, theta)| <= tol * max(1, |psi(0, theta)|).
MefCheck mef_check(const CefSpec& cef, std::span<const ParamVector> probes, double tol = 1e-9);

struct RowValueSets {
  std::vector<std::vector<double>> sets;
  bool all_equal;
};

/// {tau(a, b) : b} for each row of a scalar-statistic spec (values closer than
/// tol are merged). Unequal sets certify that the spec is not an MEF.
RowValueSets gani_row_value_sets(const CefSpec& cef, double tol = 1e-12);

/// N(a, b) = number of a -> b transitions.
class CountMatrix {
 public:
  explicit CountMatrix(std::size_t n) : n_(n), counts_(n * n, 0) {}
  std::size_t size() const { return n_; }
  std::uint64_t operator()(std::size_t a, std::size_t b) const { return counts_[a * n_ + b]; }
  std::uint64_t& at(std::size_t a, std::size_t b) { return counts_[a * n_ + b]; }
  std::uint64_t total() const;
  /// N 1: visits to each state at times 0..T-1.
  std::vector<std::uint64_t> row_sums() const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

CountMatrix transition_counts(const Trajectory& x);

/// A log-probability; impossible events carry -inf and the flag.
struct LogProb {
  double value;
  bool impossible;
  static LogProb impossible_event() { return {-std::numeric_limits<double>::infinity(), true}; }
};

/// sum_{a,b} N(a, b) log P(a, b) with 0 log 0 = 0.
LogProb joint_log_pmf_from_counts(const StochasticMatrix& P, const CountMatrix& N);

/// eta . sum tau(x_i, x_{i+1}) - T psi + sum log kappa(x_i, x_{i+1}); x includes x_0.
LogProb mef_joint_log_pmf(const MefSpec& mef, std::span<const double> theta, const Trajectory& x);

struct MeanParameter {
  ParamVector mean;
  /// Row expectations sum_b tau(a, b) P(a, b), one per row.
  std::vector<ParamVector> per_row;
  double row_spread;
  /// J^{-1} grad psi by central differences (named eta forms only).
  std::optional<ParamVector> gradient_estimate;
  std::optional<double> gradient_error;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-6;

/// Throws ModelError when the spec is unverified or its rows disagree beyond row_tol.
MeanParameter mean_parameter(const MefSpec& mef, std::span<const double> theta, double row_tol = 1e-10);

/// kappa'(b) = kappa(0, sigma_0^{-1} b), tau'(b) = tau(0, sigma_0^{-1} b).
/// Throws ModelError if the realized matrix is not p-uniform at the probe or
/// if re-deriving from row 1 disagrees.
ExpFamilySpec puniform_cef_to_expfam(const CefSpec& cef, const PermutationFamily& family,
                                     std::optional<ParamVector> probe = std::nullopt);

/// kappa'(a, b) = kappa(sigma_a b), tau'(a, b) = tau(sigma_a b).
MefSpec expfam_to_mef(const ExpFamilySpec& family, const PermutationFamily& perm);

struct KappaTauReport {
  bool kappa_puniform;
  /// One entry per coordinate of tau.
  std::vector<bool> tau_coordinate_puniform;
  bool tau_puniform;
  std::optional<ViolationTriple> tau_violation;
  /// False when some row of some tau coordinate is not a rearrangement of row 0,
  /// which rules out p-uniformity under every family.
  bool tau_rows_are_permutations;
  std::vector<bool> matrix_puniform;
  bool kappa_never_zero;
  bool eta_affinely_independent;
};

/// Raises InvariantViolation if kappa and tau are p-uniform but a realized
/// matrix is not.
KappaTauReport kappa_tau_puniformity(const CefSpec& cef, const PermutationFamily& perm,
                                     std::span<const ParamVector> probes = {});

/// True iff the vectors contain l+1 affinely independent points, i.e.
/// rank{v_i - v_0} = l (singular values above 1e-10 times the largest).
bool affinely_independent_entries(std::span<const ParamVector> eta_samples);

}  // namespace puchain
