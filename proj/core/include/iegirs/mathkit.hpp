// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace iegirs {

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// e^{-z} I_0(z) for z >= 0.
///
/// Power series below z = 30, Hankel asymptotic expansion above. The scaled
/// form never overflows, so callers can take arguments in the 1e8 range.
double bessel_i0_scaled(double z);

/// e^{-z} I_1(z) for z >= 0. Same evaluation strategy as bessel_i0_scaled.
double bessel_i1_scaled(double z);

/// Laguerre polynomial of order 1/2 at -x:
///   L_{1/2}(-x) = e^{-x/2} [(1 + x) I_0(x/2) + x I_1(x/2)].
///
/// This is the shape factor of the Rician mean: for h ~ CN(m, s^2) with
/// |m|^2 / s^2 = K, E|h| = (sqrt(pi) / 2) s L_{1/2}(-K).
///
/// Throws std::domain_error for negative or non-finite x.
double laguerre_half(double x);

/// N-element half-wavelength ULA response, entry n = exp(j n pi sin(theta)).
ComplexVector array_response(std::size_t n, double theta);

/// ULA response parameterised by the direction cosine u = sin(theta) along
/// the array axis.
ComplexVector array_response_cosine(std::size_t n, double direction_cosine);

/// Kronecker UPA response: rows x cols elements in raster order
/// (index = row * cols + col), with direction cosines along each axis.
ComplexVector planar_response(std::size_t rows, std::size_t cols, double u_row, double u_col);

/// Factor n = rows * cols with rows the largest divisor not exceeding sqrt(n).
std::pair<std::size_t, std::size_t> near_square_factor(std::size_t n);

/// sin(pi/Q) / (pi/Q); Q = 1 is defined as exactly 0.
double group_shrink_factor(std::size_t groups);

/// Group-phase direction of the combined deterministic cascade: entry q
/// (0-based) is exp(-j (2q + 1) pi / Q).
ComplexVector virtual_los_direction(std::size_t groups);

}  // namespace iegirs
