// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/matrix.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace puchain {

namespace {

void require_distribution(std::span<const double> p, double tol, const std::string& what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + " has a negative or non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > tol) {
    throw std::invalid_argument(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

std::vector<double> normalize(std::vector<double> w, const std::string& what) {
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + " has a negative or non-finite weight");
    total += v;
  }
  if (total <= 0.0) throw std::invalid_argument(what + " has zero total weight");
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

Pmf::Pmf(std::vector<double> p, double tol) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("pmf must have at least one entry");
  require_distribution(p_, tol, "pmf");
}

Pmf Pmf::normalized(std::vector<double> weights) { return Pmf(normalize(std::move(weights), "pmf")); }

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                                   double tol)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("stochastic matrix must be non-empty");
  if (rows > cols) throw std::invalid_argument("stochastic matrix has more rows than states");
  if (entries_.size() != rows * cols) throw std::invalid_argument("stochastic matrix entry count mismatch");
  for (std::size_t a = 0; a < rows_; ++a) require_distribution(row(a), tol, "row " + std::to_string(a));
}

StochasticMatrix StochasticMatrix::from_rows(const std::vector<std::vector<double>>& rows, double tol) {
  if (rows.empty()) throw std::invalid_argument("stochastic matrix must be non-empty");
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return StochasticMatrix(rows.size(), cols, std::move(entries), tol);
}

StochasticMatrix StochasticMatrix::normalized_rows(const std::vector<std::vector<double>>& raw) {
  std::vector<std::vector<double>> rows;
  rows.reserve(raw.size());
  for (std::size_t a = 0; a < raw.size(); ++a) rows.push_back(normalize(raw[a], "row " + std::to_string(a)));
  return from_rows(rows);
}

std::size_t StochasticMatrix::size() const {
  if (!is_square()) throw std::invalid_argument("operation needs a square transition matrix");
  return rows_;
}

}  // namespace puchain
