// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace puchain {

inline constexpr double kStochasticTolerance = 1e-12;

/// A probability mass function on indices 0..size-1.
class Pmf {
 public:
  /// Throws std::invalid_argument unless p is nonnegative and sums to 1 within tol.
  explicit Pmf(std::vector<double> p, double tol = kStochasticTolerance);
  /// Scales nonnegative weights to unit mass.
  static Pmf normalized(std::vector<double> weights);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

 private:
  std::vector<double> p_;
};

/// A row-stochastic matrix, stored dense and row-major.
///
/// Rows index a prefix of the column states, so rows() may be smaller than
/// cols(); every chain operation requires the square case.
class StochasticMatrix {
 public:
  StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                   double tol = kStochasticTolerance);
  static StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    double tol = kStochasticTolerance);
  /// Divides every row of a nonnegative matrix by its sum.
  static StochasticMatrix normalized_rows(const std::vector<std::vector<double>>& raw);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  /// Number of states; throws if the matrix is not square.
  std::size_t size() const;

  double operator()(std::size_t a, std::size_t b) const { return entries_[a * cols_ + b]; }
  std::span<const double> row(std::size_t a) const { return {entries_.data() + a * cols_, cols_}; }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

}  // namespace puchain
