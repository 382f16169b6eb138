// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations that share no code with the library routines they
// check. Slow by design.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "iegirs/mathkit.hpp"

namespace iegirs::oracle {

/// L_{1/2}(-x) from the ascending Bessel series carried in long double,
/// without exponential scaling. Valid up to x ~ 2e4.
long double laguerre_half_series(long double x);

/// Number of surjective maps from n elements onto q labels, divided by q!,
/// by exhaustive enumeration of q^n assignments.
std::uint64_t set_partitions_bruteforce(unsigned n, unsigned q);

/// Golden-section search for the maximiser of a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, int iterations = 200);

/// max over xi of 2 a Re{xi^* omega} - |xi|^2 chi by coordinate-wise golden
/// section on the real and imaginary parts.
std::complex<double> maximize_xi(double a, std::complex<double> omega, double chi);

/// max over s >= 0 of w ln(1+s) - w s + 2 sqrt(w(1+s)) Re{xi^* omega}.
double maximize_varsigma(double weight, std::complex<double> xi, std::complex<double> omega);

/// Scalar precoder: grid over |w| in [0, sqrt(p_max)] and phase, returning
/// the best objective 2 Re{zeta^* w} - l |w|^2.
double scalar_precoder_grid(std::complex<double> zeta, double l, double p_max, int magnitude_points,
                            int phase_points);

/// Brute force over a uniform phase grid of the reflection subproblem
/// max -v^H U v - 2 Re{v^H phi} for Q <= 3.
double rcv_grid_max(const ComplexMatrix& U, const ComplexVector& phi, int points_per_axis);

}  // namespace iegirs::oracle
