// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iegirs/channel.hpp"
#include "iegirs/mathkit.hpp"

namespace iegirs {

/// Single-antenna setting of the asymptotic analysis. N = Q * mu exactly.
struct AsymptoticInputs {
  std::size_t N = 1;
  std::size_t Q = 1;
  double delta_bi = 1.0;
  double delta_iu = 1.0;
  double kappa_bi = 0.0;
  double kappa_iu = 0.0;

  /// Throws std::invalid_argument unless Q divides N.
  static AsymptoticInputs make(std::size_t N, std::size_t Q, double kappa_bi, double kappa_iu,
                               double delta_bi = 1.0, double delta_iu = 1.0);

  double mu() const { return static_cast<double>(N) / static_cast<double>(Q); }
  CascadeCoefficients coefficients() const { return cascade_coefficients(kappa_bi, kappa_iu); }
};

/// Gain of a Q-element ungrouped surface with aligned phases:
///   Q^2 (pi^2 d_bi^2 d_iu^2 a~^2 / 16) L^2(-k_bi) L^2(-k_iu).
/// Only the Rician factors and amplitudes of `in` are used.
double uirs_gain(std::size_t Q, const AsymptoticInputs& in);

struct GroupDistribution {
  ComplexVector mean;     // mu d d i a_bar exp(-j (2q+1) pi / Q), q = 0..Q-1
  double variance = 0.0;  // mu d^2 d^2 (1 - a_bar^2)
};

/// Gaussian law of the combined cascade under the equal-arc phase grouping.
GroupDistribution lemma1_distribution(const AsymptoticInputs& in);

/// Gain of the grouped surface: N d^4 (1 - a^2) for Q = 1, otherwise
///   N Q (pi d^4 / 4) (1 - a^2) L^2(-i^2 a^2 mu / (1 - a^2)).
double ieg_gain(const AsymptoticInputs& in);

/// 1 - 4 (1+k_bi+k_iu) L^2(-k_bi k_iu mu / (1+k_bi+k_iu)) / (pi L^2(-k_bi) L^2(-k_iu) mu).
double performance_loss(double kappa_bi, double kappa_iu, double mu);

/// One draw of the single-antenna cascade c = conj(h_iu) .* conj(h_bi) for
/// half-wavelength ULAs with sin(theta_bi) = sin(theta_iu) = delta_phase, so
/// the deterministic part rotates as exp(-j 2 pi n delta_phase).
ComplexVector sample_su_cascade(const AsymptoticInputs& in, double delta_phase, Rng& rng);

struct Lemma1Report {
  GroupDistribution expected;
  ComplexVector empirical_mean;
  RealVector empirical_variance;
  double max_modulus_error = 0.0;  // relative
  double max_phase_error = 0.0;    // radians
  double max_variance_error = 0.0; // relative
  double zero_mean_ratio = 0.0;    // max |m| / (d d sqrt(mu)), used when a_bar = 0
  double kurtosis = 0.0;           // pooled over standardized real and imaginary parts
  bool mean_ok = false;
  bool variance_ok = false;
  bool normal_ok = false;
  bool pass = false;
};

/// Monte Carlo check of lemma1_distribution with the equal-arc grouping of
/// frac(n * delta_phase).
Lemma1Report validate_lemma1_monte_carlo(const AsymptoticInputs& in, std::size_t trials, std::uint64_t seed,
                                         double delta_phase = 0.70710678118654752440, std::size_t threads = 1);

struct GainEstimate {
  double empirical = 0.0;
  double closed_form = 0.0;
  double standard_error = 0.0;

  double relative_error() const;
};

/// E ||c||_1^2 / Q^2 for a Q-element ungrouped surface versus uirs_gain / Q^2.
GainEstimate uirs_gain_monte_carlo(std::size_t Q, double kappa_bi, double kappa_iu, std::size_t trials,
                                   std::uint64_t seed, std::size_t threads = 1);

/// E (sum_q |(G c)_q|)^2 under the equal-arc grouping versus ieg_gain.
GainEstimate grouped_gain_monte_carlo(const AsymptoticInputs& in, std::size_t trials, std::uint64_t seed,
                                      double delta_phase = 0.70710678118654752440, std::size_t threads = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace iegirs
