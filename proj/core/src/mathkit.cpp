// SPDX-License-Identifier: Apache-2.0
#include "iegirs/mathkit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iegirs {
namespace {

constexpr double kSeriesLimit = 30.0;

// e^{-z} I_nu(z) by the ascending series, nu in {0, 1}.
double scaled_bessel_series(int nu, double z) {
  const double half = 0.5 * z;
  const double q = half * half;
  double term = (nu == 0) ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-z);
}

// Hankel expansion e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k t_k, truncated at
// the smallest term. At z >= 30 the truncation error is below e^{-2z}.
double scaled_bessel_asymptotic(int nu, double z) {
  const double four_nu2 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (odd * odd - four_nu2) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * z);
}

void require_nonnegative(double z, const char* what) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw std::domain_error(std::string(what) + ": argument must be finite and >= 0, got " +
                            std::to_string(z));
  }
}

}  // namespace

double bessel_i0_scaled(double z) {
  require_nonnegative(z, "bessel_i0_scaled");
  return z < kSeriesLimit ? scaled_bessel_series(0, z) : scaled_bessel_asymptotic(0, z);
}

double bessel_i1_scaled(double z) {
  require_nonnegative(z, "bessel_i1_scaled");
  return z < kSeriesLimit ? scaled_bessel_series(1, z) : scaled_bessel_asymptotic(1, z);
}

double laguerre_half(double x) {
  require_nonnegative(x, "laguerre_half");
  const double z = 0.5 * x;
  return (1.0 + x) * bessel_i0_scaled(z) + x * bessel_i1_scaled(z);
}

ComplexVector array_response_cosine(std::size_t n, double direction_cosine) {
  if (n == 0) throw std::domain_error("array_response: element count must be >= 1");
  ComplexVector a(static_cast<Eigen::Index>(n));
  const double step = kPi * direction_cosine;
  for (std::size_t i = 0; i < n; ++i) {
    a[static_cast<Eigen::Index>(i)] = std::polar(1.0, step * static_cast<double>(i));
  }
  return a;
}

ComplexVector array_response(std::size_t n, double theta) {
  return array_response_cosine(n, std::sin(theta));
}

ComplexVector planar_response(std::size_t rows, std::size_t cols, double u_row, double u_col) {
  const ComplexVector ar = array_response_cosine(rows, u_row);
  const ComplexVector ac = array_response_cosine(cols, u_col);
  ComplexVector a(static_cast<Eigen::Index>(rows * cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      a[static_cast<Eigen::Index>(r * cols + c)] =
          ar[static_cast<Eigen::Index>(r)] * ac[static_cast<Eigen::Index>(c)];
    }
  }
  return a;
}

std::pair<std::size_t, std::size_t> near_square_factor(std::size_t n) {
  if (n == 0) throw std::domain_error("near_square_factor: n must be >= 1");
  auto rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (rows * rows > n) --rows;
  while (n % rows != 0) --rows;
  return {rows, n / rows};
}

double group_shrink_factor(std::size_t groups) {
  if (groups == 0) throw std::domain_error("group_shrink_factor: Q must be >= 1");
  if (groups == 1) return 0.0;
  const double x = kPi / static_cast<double>(groups);
  return std::sin(x) / x;
}

ComplexVector virtual_los_direction(std::size_t groups) {
  if (groups == 0) throw std::domain_error("virtual_los_direction: Q must be >= 1");
  ComplexVector v(static_cast<Eigen::Index>(groups));
  const auto q_count = static_cast<double>(groups);
  for (std::size_t q = 0; q < groups; ++q) {
    v[static_cast<Eigen::Index>(q)] = std::polar(1.0, -(2.0 * static_cast<double>(q) + 1.0) * kPi / q_count);
  }
  return v;
}

}  // namespace iegirs
