// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/expfam.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <string>

namespace puchain {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

}  // namespace

// ---------------------------------------------------------------------------
// ParameterMap

ParameterMap::ParameterMap(EtaKind kind, std::size_t d, std::size_t l, int n,
                           std::vector<std::pair<ParamVector, ParamVector>> samples)
    : kind_(kind), param_dim_(d), stat_dim_(l), n_(n), samples_(std::move(samples)) {}

ParameterMap ParameterMap::natural(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("natural parameter needs dimension >= 1");
  return ParameterMap(EtaKind::natural, dim, dim, 0, {});
}

ParameterMap ParameterMap::scalar_log() { return ParameterMap(EtaKind::scalar_log, 1, 1, 0, {}); }

ParameterMap ParameterMap::density_logit(int n) {
  if (n < 2) throw std::invalid_argument("density parameter map needs n >= 2");
  return ParameterMap(EtaKind::density_logit, 1, 1, n, {});
}

ParameterMap ParameterMap::table(std::vector<std::pair<ParamVector, ParamVector>> samples) {
  if (samples.empty()) throw std::invalid_argument("parameter table needs at least one sample");
  const std::size_t d = samples.front().first.size();
  const std::size_t l = samples.front().second.size();
  if (d == 0 || l == 0) throw std::invalid_argument("parameter table entries must be non-empty");
  for (const auto& [theta, eta] : samples) {
    if (theta.size() != d || eta.size() != l) throw std::invalid_argument("ragged parameter table");
  }
  return ParameterMap(EtaKind::table, d, l, 0, std::move(samples));
}

bool ParameterMap::in_domain(std::span<const double> theta) const {
  if (theta.size() != param_dim_) return false;
  switch (kind_) {
    case EtaKind::natural:
      return std::all_of(theta.begin(), theta.end(), [](double x) { return std::isfinite(x); });
    case EtaKind::scalar_log:
      return theta[0] > 0.0 && std::isfinite(theta[0]);
    case EtaKind::density_logit:
      return theta[0] > 0.0 && theta[0] < 1.0;
    case EtaKind::table:
      return std::any_of(samples_.begin(), samples_.end(),
                         [&](const auto& s) { return std::equal(theta.begin(), theta.end(), s.first.begin()); });
  }
  return false;
}

ParamVector ParameterMap::operator()(std::span<const double> theta) const {
  if (!in_domain(theta)) throw std::domain_error("parameter outside the domain of eta");
  switch (kind_) {
    case EtaKind::natural:
      return ParamVector(theta.begin(), theta.end());
    case EtaKind::scalar_log:
      return {std::log(theta[0])};
    case EtaKind::density_logit:
      return {(n_ - 1) * std::log(theta[0] / (1.0 - theta[0]))};
    case EtaKind::table:
      for (const auto& [t, e] : samples_) {
        if (std::equal(theta.begin(), theta.end(), t.begin())) return e;
      }
  }
  throw std::domain_error("parameter outside the domain of eta");
}

std::optional<ParamVector> ParameterMap::jacobian_diagonal(std::span<const double> theta) const {
  if (!in_domain(theta)) throw std::domain_error("parameter outside the domain of eta");
  switch (kind_) {
    case EtaKind::natural:
      return ParamVector(param_dim_, 1.0);
    case EtaKind::scalar_log:
      return ParamVector{1.0 / theta[0]};
    case EtaKind::density_logit:
      return ParamVector{(n_ - 1) / (theta[0] * (1.0 - theta[0]))};
    case EtaKind::table:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<ParamVector> ParameterMap::default_probes() const {
  switch (kind_) {
    case EtaKind::natural: {
      constexpr std::array<double, 5> base{-2.0, -1.0, 0.5, 1.0, 2.0};
      std::vector<ParamVector> probes(5, ParamVector(param_dim_));
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t k = 0; k < param_dim_; ++k) probes[i][k] = base[(i + k) % 5];
      }
      return probes;
    }
    case EtaKind::scalar_log:
      return {{0.25}, {0.5}, {1.0}, {2.0}, {4.0}};
    case EtaKind::density_logit:
      return {{0.1}, {0.3}, {0.5}, {0.7}, {0.9}};
    case EtaKind::table: {
      std::vector<ParamVector> probes;
      for (const auto& s : samples_) probes.push_back(s.first);
      return probes;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Specs

ExpFamilySpec::ExpFamilySpec(StateSpace space, std::vector<double> kappa, std::size_t stat_dim,
                             std::vector<double> tau, ParameterMap eta)
    : space_(std::move(space)), kappa_(std::move(kappa)), stat_dim_(stat_dim), tau_(std::move(tau)),
      eta_(std::move(eta)) {
  if (kappa_.size() != space_.size()) throw std::invalid_argument("kappa must have one entry per state");
  if (stat_dim_ == 0 || tau_.size() != kappa_.size() * stat_dim_) {
    throw std::invalid_argument("tau must be num_states x stat_dim");
  }
  if (eta_.stat_dim() != stat_dim_) throw std::invalid_argument("eta and tau dimensions differ");
  bool positive = false;
  for (double k : kappa_) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("kappa must be finite and nonnegative");
    positive = positive || k > 0.0;
  }
  if (!positive) throw ModelError("undefined family: kappa is identically zero");
}

CefSpec::CefSpec(StateSpace space, std::size_t num_rows, std::vector<double> kappa, std::size_t stat_dim,
                 std::vector<double> tau, ParameterMap eta)
    : space_(std::move(space)), num_rows_(num_rows), kappa_(std::move(kappa)), stat_dim_(stat_dim),
      tau_(std::move(tau)), eta_(std::move(eta)) {
  const std::size_t n = space_.size();
  if (num_rows_ == 0 || num_rows_ > n) throw std::invalid_argument("CEF row count must be in [1, |S|]");
  if (!kappa_.empty() && kappa_.size() != num_rows_ * n) throw std::invalid_argument("kappa must be rows x |S|");
  if (stat_dim_ == 0 || tau_.size() != num_rows_ * n * stat_dim_) {
    throw std::invalid_argument("tau must be rows x |S| x stat_dim");
  }
  if (eta_.stat_dim() != stat_dim_) throw std::invalid_argument("eta and tau dimensions differ");
  for (double k : kappa_) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("kappa must be finite and nonnegative");
  }
}

CefSpec CefSpec::tabulate(StateSpace space, std::size_t stat_dim, const TauFn& tau, const KappaFn& kappa,
                          ParameterMap eta) {
  const std::size_t n = space.size();
  std::vector<double> tau_table(n * n * stat_dim);
  std::vector<double> kappa_table;
  if (kappa) kappa_table.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto sa = static_cast<StateIndex>(a);
      const auto sb = static_cast<StateIndex>(b);
      tau(sa, sb, std::span<double>(tau_table.data() + (a * n + b) * stat_dim, stat_dim));
      if (kappa) kappa_table[a * n + b] = kappa(sa, sb);
    }
  }
  return CefSpec(std::move(space), n, std::move(kappa_table), stat_dim, std::move(tau_table), std::move(eta));
}

std::vector<double> CefSpec::kappa_row(std::size_t a) const {
  const std::size_t n = space_.size();
  if (kappa_.empty()) return std::vector<double>(n, 1.0);
  return std::vector<double>(kappa_.begin() + static_cast<std::ptrdiff_t>(a * n),
                             kappa_.begin() + static_cast<std::ptrdiff_t>((a + 1) * n));
}

CefSpec CefSpec::restrict_rows(std::size_t rows) const {
  if (rows == 0 || rows > num_rows_) throw std::invalid_argument("cannot restrict to that many rows");
  const std::size_t n = space_.size();
  std::vector<double> kappa;
  if (!kappa_.empty()) kappa.assign(kappa_.begin(), kappa_.begin() + static_cast<std::ptrdiff_t>(rows * n));
  std::vector<double> tau(tau_.begin(), tau_.begin() + static_cast<std::ptrdiff_t>(rows * n * stat_dim_));
  return CefSpec(space_, rows, std::move(kappa), stat_dim_, std::move(tau), eta_);
}

MefSpec MefSpec::check(CefSpec cef, std::span<const ParamVector> probes, double tol) {
  std::vector<ParamVector> defaults;
  if (probes.empty()) {
    defaults = cef.eta().default_probes();
    probes = defaults;
  }
  const bool ok = mef_check(cef, probes, tol).is_mef;
  return MefSpec(std::move(cef), ok);
}

MefSpec MefSpec::by_construction(CefSpec cef) {
  const auto probes = cef.eta().default_probes();
  if (!mef_check(cef, probes).is_mef) throw InvariantViolation("construction did not produce an MEF");
  return MefSpec(std::move(cef), true);
}

// ---------------------------------------------------------------------------
// Partition functions and transition matrices

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double log_partition(const ExpFamilySpec& family, std::span<const double> theta) {
  const ParamVector eta = family.eta()(theta);
  std::vector<double> terms;
  terms.reserve(family.num_states());
  for (std::size_t a = 0; a < family.num_states(); ++a) {
    if (family.kappa(a) > 0.0) terms.push_back(std::log(family.kappa(a)) + dot(eta, family.tau(a)));
  }
  if (terms.empty()) throw ModelError("undefined family: kappa is identically zero");
  return log_sum_exp(terms);
}

Pmf pmf(const ExpFamilySpec& family, std::span<const double> theta) {
  const ParamVector eta = family.eta()(theta);
  const double psi = log_partition(family, theta);
  std::vector<double> p(family.num_states(), 0.0);
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (family.kappa(a) > 0.0) p[a] = family.kappa(a) * std::exp(dot(eta, family.tau(a)) - psi);
  }
  return Pmf(std::move(p));
}

namespace {

// log kappa(a, b) + eta . tau(a, b) for every b, -inf where kappa is zero.
std::vector<double> row_log_weights(const CefSpec& cef, std::size_t a, std::span<const double> eta) {
  const std::size_t n = cef.num_states();
  std::vector<double> w(n);
  for (std::size_t b = 0; b < n; ++b) {
    const double k = cef.kappa(a, b);
    w[b] = k > 0.0 ? std::log(k) + dot(eta, cef.tau(a, b)) : -std::numeric_limits<double>::infinity();
  }
  return w;
}

double row_psi(const CefSpec& cef, std::size_t a, std::span<const double> eta) {
  const double psi = log_sum_exp(row_log_weights(cef, a, eta));
  if (!std::isfinite(psi)) {
    throw ModelError("row " + std::to_string(a) + " has kappa identically zero and cannot normalize");
  }
  return psi;
}

}  // namespace

double row_log_partition(const CefSpec& cef, std::size_t row, std::span<const double> theta) {
  if (row >= cef.num_rows()) throw std::out_of_range("CEF row out of range");
  return row_psi(cef, row, cef.eta()(theta));
}

StochasticMatrix cef_transition_matrix(const CefSpec& cef, std::span<const double> theta) {
  const ParamVector eta = cef.eta()(theta);
  const std::size_t n = cef.num_states();
  std::vector<double> entries(cef.num_rows() * n);
  for (std::size_t a = 0; a < cef.num_rows(); ++a) {
    const auto w = row_log_weights(cef, a, eta);
    const double psi = log_sum_exp(w);
    if (!std::isfinite(psi)) {
      throw ModelError("row " + std::to_string(a) + " has kappa identically zero and cannot normalize");
    }
    for (std::size_t b = 0; b < n; ++b) entries[a * n + b] = std::exp(w[b] - psi);
  }
  return StochasticMatrix(cef.num_rows(), n, std::move(entries));
}

CefValidation validate_cef(const CefSpec& cef, std::span<const ParamVector> probes, double rel_tol) {
  if (probes.empty()) throw std::invalid_argument("validate_cef needs at least one probe");
  CefValidation report;
  report.probes.assign(probes.begin(), probes.end());
  report.shared_normalizer = true;

  for (std::size_t a = 0; a < cef.num_rows(); ++a) {
    const auto k = cef.kappa_row(a);
    if (std::all_of(k.begin(), k.end(), [](double x) { return x == 0.0; })) report.zero_rows.push_back(a);
  }
  for (const auto& theta : probes) {
    const ParamVector eta = cef.eta()(theta);
    std::vector<double> sums(cef.num_rows());
    for (std::size_t a = 0; a < cef.num_rows(); ++a) sums[a] = std::exp(log_sum_exp(row_log_weights(cef, a, eta)));
    std::vector<std::size_t> breaking;
    for (std::size_t a = 1; a < sums.size(); ++a) {
      if (std::abs(sums[a] - sums[0]) > rel_tol * std::max(std::abs(sums[0]), std::abs(sums[a]))) {
        breaking.push_back(a);
      }
    }
    if (!breaking.empty()) report.shared_normalizer = false;
    report.raw_row_sums.push_back(std::move(sums));
    report.rows_breaking_shared_normalizer.push_back(std::move(breaking));
  }
  if (!report.zero_rows.empty()) report.shared_normalizer = false;
  return report;
}

MefCheck mef_check(const CefSpec& cef, std::span<const ParamVector> probes, double tol) {
  if (probes.empty()) throw std::invalid_argument("mef_check needs at least one probe");
  MefCheck result{true, 0.0};
  for (const auto& theta : probes) {
    const ParamVector eta = cef.eta()(theta);
    const double psi0 = log_sum_exp(row_log_weights(cef, 0, eta));
    if (!std::isfinite(psi0)) return {false, std::numeric_limits<double>::infinity()};
    for (std::size_t a = 1; a < cef.num_rows(); ++a) {
      const double psi = log_sum_exp(row_log_weights(cef, a, eta));
      const double spread = std::abs(psi - psi0);
      result.max_spread = std::max(result.max_spread, std::isfinite(spread) ? spread
                                                                            : std::numeric_limits<double>::infinity());
      if (!(spread <= tol * std::max(1.0, std::abs(psi0)))) result.is_mef = false;
    }
  }
  return result;
}

RowValueSets gani_row_value_sets(const CefSpec& cef, double tol) {
  if (cef.stat_dim() != 1) throw std::invalid_argument("row value sets need a scalar statistic");
  RowValueSets result{{}, true};
  const std::size_t n = cef.num_states();
  for (std::size_t a = 0; a < cef.num_rows(); ++a) {
    std::vector<double> values(n);
    for (std::size_t b = 0; b < n; ++b) values[b] = cef.tau(a, b)[0];
    std::sort(values.begin(), values.end());
    std::vector<double> set;
    for (double v : values) {
      if (set.empty() || !close(v, set.back(), tol)) set.push_back(v);
    }
    result.sets.push_back(std::move(set));
  }
  const auto& first = result.sets.front();
  for (const auto& s : result.sets) {
    if (s.size() != first.size() ||
        !std::equal(s.begin(), s.end(), first.begin(), [&](double x, double y) { return close(x, y, tol); })) {
      result.all_equal = false;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Joint laws

std::uint64_t CountMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

std::vector<std::uint64_t> CountMatrix::row_sums() const {
  std::vector<std::uint64_t> sums(n_, 0);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) sums[a] += counts_[a * n_ + b];
  }
  return sums;
}

CountMatrix transition_counts(const Trajectory& x) {
  if (x.empty()) throw std::invalid_argument("transition_counts needs a non-empty trajectory");
  CountMatrix counts(x.num_states());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) ++counts.at(x[i], x[i + 1]);
  return counts;
}

LogProb joint_log_pmf_from_counts(const StochasticMatrix& P, const CountMatrix& N) {
  if (N.size() != P.cols()) throw std::invalid_argument("count matrix and transition matrix sizes differ");
  double total = 0.0;
  for (std::size_t a = 0; a < N.size(); ++a) {
    for (std::size_t b = 0; b < N.size(); ++b) {
      const std::uint64_t count = N(a, b);
      if (count == 0) continue;
      if (a >= P.rows()) throw std::invalid_argument("transition leaves a state with no defined row");
      const double p = P(a, b);
      if (p == 0.0) return LogProb::impossible_event();
      total += static_cast<double>(count) * std::log(p);
    }
  }
  return {total, false};
}

LogProb mef_joint_log_pmf(const MefSpec& mef, std::span<const double> theta, const Trajectory& x) {
  if (!mef.verified()) throw ModelError("mef_joint_log_pmf: specification has not passed mef_check");
  const CefSpec& cef = mef.cef();
  if (x.num_states() != cef.num_states()) throw std::invalid_argument("trajectory and spec sizes differ");
  if (x.empty()) throw std::invalid_argument("trajectory must contain x_0");

  const ParamVector eta = cef.eta()(theta);
  const double psi = row_psi(cef, 0, eta);
  ParamVector tau_sum(cef.stat_dim(), 0.0);
  double log_kappa_sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] >= cef.num_rows()) throw std::invalid_argument("transition leaves a state with no defined row");
    const double k = cef.kappa(x[i], x[i + 1]);
    if (k == 0.0) return LogProb::impossible_event();
    log_kappa_sum += std::log(k);
    const auto tau = cef.tau(x[i], x[i + 1]);
    for (std::size_t j = 0; j < tau.size(); ++j) tau_sum[j] += tau[j];
  }
  const auto transitions = static_cast<double>(x.num_transitions());
  return {dot(eta, tau_sum) - transitions * psi + log_kappa_sum, false};
}

MeanParameter mean_parameter(const MefSpec& mef, std::span<const double> theta, double row_tol) {
  if (!mef.verified()) throw ModelError("mean_parameter: specification has not passed mef_check");
  const CefSpec& cef = mef.cef();
  const std::size_t n = cef.num_states();
  const std::size_t l = cef.stat_dim();
  const StochasticMatrix P = cef_transition_matrix(cef, theta);

  MeanParameter result;
  result.row_spread = 0.0;
  for (std::size_t a = 0; a < cef.num_rows(); ++a) {
    ParamVector expectation(l, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
      const double p = P(a, b);
      if (p == 0.0) continue;
      const auto tau = cef.tau(a, b);
      for (std::size_t k = 0; k < l; ++k) expectation[k] += tau[k] * p;
    }
    if (a > 0) {
      for (std::size_t k = 0; k < l; ++k) {
        result.row_spread = std::max(result.row_spread, std::abs(expectation[k] - result.per_row[0][k]));
      }
    }
    result.per_row.push_back(std::move(expectation));
  }
  if (result.row_spread > row_tol) {
    throw ModelError("row expectations disagree by " + std::to_string(result.row_spread) + ": not an MEF");
  }
  result.mean = result.per_row.front();

  const ParameterMap& eta = cef.eta();
  const auto jacobian = eta.jacobian_diagonal(theta);
  if (jacobian && eta.param_dim() == l) {
    ParamVector estimate(l);
    bool complete = true;
    for (std::size_t k = 0; k < l && complete; ++k) {
      ParamVector up(theta.begin(), theta.end());
      ParamVector down(theta.begin(), theta.end());
      up[k] += kFiniteDifferenceStep;
      down[k] -= kFiniteDifferenceStep;
      if (!eta.in_domain(up) || !eta.in_domain(down)) {
        complete = false;
        break;
      }
      const double slope =
          (row_log_partition(cef, 0, up) - row_log_partition(cef, 0, down)) / (2.0 * kFiniteDifferenceStep);
      estimate[k] = slope / (*jacobian)[k];
    }
    if (complete) {
      double error = 0.0;
      for (std::size_t k = 0; k < l; ++k) error = std::max(error, std::abs(estimate[k] - result.mean[k]));
      result.gradient_estimate = std::move(estimate);
      result.gradient_error = error;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// P-uniformity and exponential families

ExpFamilySpec puniform_cef_to_expfam(const CefSpec& cef, const PermutationFamily& family,
                                     std::optional<ParamVector> probe) {
  if (!cef.is_square()) throw std::invalid_argument("puniform_cef_to_expfam needs a square spec");
  const std::size_t n = cef.num_states();
  if (family.size() != n) throw std::invalid_argument("family and spec sizes differ");
  const ParamVector theta = probe ? *probe : cef.eta().default_probes().front();

  const auto check = check_puniform(cef_transition_matrix(cef, theta), family);
  if (!check) throw ModelError("realized transition matrix is not p-uniform under the family");

  const std::size_t l = cef.stat_dim();
  auto derive = [&](StateIndex row, std::vector<double>& kappa, std::vector<double>& tau) {
    kappa.resize(n);
    tau.resize(n * l);
    for (std::size_t b = 0; b < n; ++b) {
      const StateIndex source = family.apply_inverse(row, static_cast<StateIndex>(b));
      kappa[b] = cef.kappa(row, source);
      const auto t = cef.tau(row, source);
      std::copy(t.begin(), t.end(), tau.begin() + static_cast<std::ptrdiff_t>(b * l));
    }
  };

  std::vector<double> kappa;
  std::vector<double> tau;
  derive(0, kappa, tau);
  if (n > 1) {
    std::vector<double> kappa1;
    std::vector<double> tau1;
    derive(1, kappa1, tau1);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(kappa[i] - kappa1[i]) > 1e-10) throw ModelError("kappa is not p-uniform under the family");
    }
    for (std::size_t i = 0; i < n * l; ++i) {
      if (std::abs(tau[i] - tau1[i]) > 1e-10) throw ModelError("tau is not p-uniform under the family");
    }
  }
  return ExpFamilySpec(cef.space(), std::move(kappa), l, std::move(tau), cef.eta());
}

MefSpec expfam_to_mef(const ExpFamilySpec& family, const PermutationFamily& perm) {
  const std::size_t n = family.num_states();
  if (perm.size() != n) throw std::invalid_argument("family and permutations sizes differ");
  const std::size_t l = family.stat_dim();
  std::vector<double> kappa(n * n);
  std::vector<double> tau(n * n * l);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const StateIndex image = perm.apply(static_cast<StateIndex>(a), static_cast<StateIndex>(b));
      kappa[a * n + b] = family.kappa(image);
      const auto t = family.tau(image);
      std::copy(t.begin(), t.end(), tau.begin() + static_cast<std::ptrdiff_t>((a * n + b) * l));
    }
  }
  return MefSpec::by_construction(CefSpec(family.space(), n, std::move(kappa), l, std::move(tau), family.eta()));
}

namespace {

bool rows_are_rearrangements(std::span<const double> table, std::size_t n, double tol) {
  std::vector<double> reference(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(reference.begin(), reference.end());
  std::vector<double> row(n);
  for (std::size_t a = 1; a < n; ++a) {
    std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(a * n), n, row.begin());
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(row[k] - reference[k]) > tol) return false;
    }
  }
  return true;
}

}  // namespace

KappaTauReport kappa_tau_puniformity(const CefSpec& cef, const PermutationFamily& perm,
                                     std::span<const ParamVector> probes) {
  if (!cef.is_square()) throw std::invalid_argument("kappa_tau_puniformity needs a square spec");
  const std::size_t n = cef.num_states();
  if (perm.size() != n) throw std::invalid_argument("family and spec sizes differ");
  std::vector<ParamVector> defaults;
  if (probes.empty()) {
    defaults = cef.eta().default_probes();
    probes = defaults;
  }

  KappaTauReport report{};
  std::vector<double> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = cef.kappa(a, b);
  }
  report.kappa_puniform = check_puniform(table, n, perm).puniform;
  report.kappa_never_zero = std::all_of(table.begin(), table.end(), [](double k) { return k > 0.0; });

  report.tau_puniform = true;
  report.tau_rows_are_permutations = true;
  for (std::size_t k = 0; k < cef.stat_dim(); ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) table[a * n + b] = cef.tau(a, b)[k];
    }
    const auto check = check_puniform(table, n, perm);
    report.tau_coordinate_puniform.push_back(check.puniform);
    if (!check.puniform && report.tau_puniform) {
      report.tau_puniform = false;
      report.tau_violation = check.violation;
    }
    if (!rows_are_rearrangements(table, n, kDefaultMatchTolerance)) report.tau_rows_are_permutations = false;
  }

  std::vector<ParamVector> etas;
  for (const auto& theta : probes) {
    const auto P = cef_transition_matrix(cef, theta);
    report.matrix_puniform.push_back(check_puniform(P, perm).puniform);
    etas.push_back(cef.eta()(theta));
  }
  report.eta_affinely_independent = affinely_independent_entries(etas);

  if (report.kappa_puniform && report.tau_puniform) {
    for (bool ok : report.matrix_puniform) {
      if (!ok) throw InvariantViolation("kappa and tau are p-uniform but a realized matrix is not");
    }
  }
  return report;
}

bool affinely_independent_entries(std::span<const ParamVector> eta_samples) {
  if (eta_samples.empty()) throw std::invalid_argument("need at least one eta sample");
  const std::size_t l = eta_samples.front().size();
  if (eta_samples.size() < l + 1) return false;
  Eigen::MatrixXd differences(static_cast<Eigen::Index>(eta_samples.size() - 1), static_cast<Eigen::Index>(l));
  for (std::size_t i = 1; i < eta_samples.size(); ++i) {
    if (eta_samples[i].size() != l) throw std::invalid_argument("eta samples have different dimensions");
    for (std::size_t k = 0; k < l; ++k) {
      differences(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(k)) =
          eta_samples[i][k] - eta_samples[0][k];
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(differences);
  const auto& singular = svd.singularValues();
  if (singular.size() == 0 || singular(0) == 0.0) return false;
  const double threshold = 1e-10 * singular(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i) rank += singular(i) > threshold ? 1 : 0;
  return rank == l;
}

}  // namespace puchain
