// SPDX-License-Identifier: Apache-2.0
#include "iegirs/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iegirs/grouping.hpp"
#include "iegirs/parallel.hpp"

namespace iegirs {

AsymptoticInputs AsymptoticInputs::make(std::size_t N, std::size_t Q, double kappa_bi, double kappa_iu,
                                        double delta_bi, double delta_iu) {
  if (Q == 0 || N % Q != 0) {
    throw std::invalid_argument("AsymptoticInputs: N = " + std::to_string(N) + " is not a multiple of Q = " +
                                std::to_string(Q));
  }
  return {N, Q, delta_bi, delta_iu, kappa_bi, kappa_iu};
}

double uirs_gain(std::size_t Q, const AsymptoticInputs& in) {
  const CascadeCoefficients c = in.coefficients();
  const double q = static_cast<double>(Q);
  const double lb = laguerre_half(in.kappa_bi);
  const double li = laguerre_half(in.kappa_iu);
  const double d2 = in.delta_bi * in.delta_bi * in.delta_iu * in.delta_iu;
  return q * q * (kPi * kPi * d2 * c.a_tilde * c.a_tilde / 16.0) * lb * lb * li * li;
}

GroupDistribution lemma1_distribution(const AsymptoticInputs& in) {
  const CascadeCoefficients c = in.coefficients();
  const double dd = in.delta_bi * in.delta_iu;
  const double mu = in.mu();
  const double shrink = group_shrink_factor(in.Q);
  GroupDistribution out;
  // Q = 1 has no phase structure; the single group's deterministic sum
  // averages out.
  out.mean = (mu * dd * shrink * c.a_bar) * virtual_los_direction(in.Q);
  out.variance = mu * dd * dd * (1.0 - c.a_bar * c.a_bar);
  return out;
}

double ieg_gain(const AsymptoticInputs& in) {
  const CascadeCoefficients c = in.coefficients();
  const double n = static_cast<double>(in.N);
  const double d2 = in.delta_bi * in.delta_bi * in.delta_iu * in.delta_iu;
  const double a2 = c.a_bar * c.a_bar;
  if (in.Q == 1) return n * d2 * (1.0 - a2);
  const double i2 = std::pow(group_shrink_factor(in.Q), 2);
  const double rest = 1.0 - a2;
  if (!(rest > 0.0)) return n * n * d2 * i2 * a2;  // pure LoS limit
  const double l = laguerre_half(i2 * a2 * in.mu() / rest);
  return n * static_cast<double>(in.Q) * (kPi * d2 / 4.0) * rest * l * l;
}

double performance_loss(double kappa_bi, double kappa_iu, double mu) {
  if (!(mu >= 1.0)) throw std::domain_error("performance_loss: mu must be >= 1");
  const double s = 1.0 + kappa_bi + kappa_iu;
  const double num = laguerre_half(kappa_bi * kappa_iu * mu / s);
  const double lb = laguerre_half(kappa_bi);
  const double li = laguerre_half(kappa_iu);
  return 1.0 - 4.0 * s * num * num / (kPi * lb * lb * li * li * mu);
}

ComplexVector sample_su_cascade(const AsymptoticInputs& in, double delta_phase, Rng& rng) {
  const ComplexVector a = array_response_cosine(in.N, delta_phase);
  const auto n = static_cast<Eigen::Index>(in.N);
  const RicianLink bi{in.delta_bi, in.kappa_bi, ComplexMatrix(a)};
  const RicianLink iu{in.delta_iu, in.kappa_iu, ComplexMatrix(a)};
  const ComplexVector h_bi = sample_rician(bi, rng).col(0);
  const ComplexVector h_iu = sample_rician(iu, rng).col(0);
  ComplexVector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = std::conj(h_iu[i]) * std::conj(h_bi[i]);
  return c;
}

Lemma1Report validate_lemma1_monte_carlo(const AsymptoticInputs& in, std::size_t trials, std::uint64_t seed,
                                         double delta_phase, std::size_t threads) {
  if (trials < 2) throw std::invalid_argument("validate_lemma1_monte_carlo: need at least two trials");
  const GroupingMatrix g = phase_partition_grouping(delta_phase, in.N, in.Q).grouping;
  const auto q = static_cast<Eigen::Index>(in.Q);
  ComplexMatrix samples(q, static_cast<Eigen::Index>(trials));
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    samples.col(static_cast<Eigen::Index>(t)) = combine_cascade(g, sample_su_cascade(in, delta_phase, rng));
  });

  Lemma1Report r;
  r.expected = lemma1_distribution(in);
  const double nt = static_cast<double>(trials);
  r.empirical_mean = samples.rowwise().sum() / nt;
  r.empirical_variance.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    r.empirical_variance[i] = (samples.row(i).array() - r.empirical_mean[i]).abs2().sum() / (nt - 1.0);
  }

  const double dd = in.delta_bi * in.delta_iu;
  const bool zero_mean = in.coefficients().a_bar == 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    const cplx m = r.empirical_mean[i];
    const cplx e = r.expected.mean[i];
    r.zero_mean_ratio = std::max(r.zero_mean_ratio, std::abs(m) / (dd * std::sqrt(in.mu())));
    if (!zero_mean) {
      r.max_modulus_error = std::max(r.max_modulus_error, std::abs(std::abs(m) - std::abs(e)) / std::abs(e));
      r.max_phase_error = std::max(r.max_phase_error, std::abs(std::arg(m * std::conj(e))));
    }
    r.max_variance_error =
        std::max(r.max_variance_error, std::abs(r.empirical_variance[i] - r.expected.variance) / r.expected.variance);
  }

  // Kurtosis of each real and imaginary series after standardization, pooled.
  double m4 = 0.0;
  double count = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    for (int part = 0; part < 2; ++part) {
      RealVector x(samples.cols());
      for (Eigen::Index t = 0; t < samples.cols(); ++t) {
        x[t] = part == 0 ? samples(i, t).real() : samples(i, t).imag();
      }
      const double mean = x.mean();
      const double var = (x.array() - mean).square().mean();
      if (!(var > 0.0)) continue;
      m4 += ((x.array() - mean).square() / var).square().sum();
      count += static_cast<double>(x.size());
    }
  }
  r.kurtosis = count > 0.0 ? m4 / count : 0.0;

  r.mean_ok = zero_mean ? r.zero_mean_ratio < 0.1 : (r.max_modulus_error <= 0.05 && r.max_phase_error <= 0.05);
  r.variance_ok = r.max_variance_error <= 0.10;
  r.normal_ok = std::abs(r.kurtosis - 3.0) <= 0.3;
  r.pass = r.mean_ok && r.variance_ok && r.normal_ok;
  return r;
}

double GainEstimate::relative_error() const { return std::abs(empirical - closed_form) / std::abs(closed_form); }

namespace {

GainEstimate summarize(const std::vector<double>& v, double closed_form) {
  GainEstimate g;
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  g.empirical = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - g.empirical) * (x - g.empirical);
  g.standard_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  g.closed_form = closed_form;
  return g;
}

}  // namespace

GainEstimate uirs_gain_monte_carlo(std::size_t Q, double kappa_bi, double kappa_iu, std::size_t trials,
                                   std::uint64_t seed, std::size_t threads) {
  const AsymptoticInputs in = AsymptoticInputs::make(Q, 1, kappa_bi, kappa_iu);
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const ComplexVector c = sample_su_cascade(in, 0.70710678118654752440, rng);
    const double l1 = c.cwiseAbs().sum();
    values[t] = l1 * l1 / (static_cast<double>(Q) * static_cast<double>(Q));
  });
  const double q = static_cast<double>(Q);
  return summarize(values, uirs_gain(Q, in) / (q * q));
}

GainEstimate grouped_gain_monte_carlo(const AsymptoticInputs& in, std::size_t trials, std::uint64_t seed,
                                      double delta_phase, std::size_t threads) {
  const GroupingMatrix g = phase_partition_grouping(delta_phase, in.N, in.Q).grouping;
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const double l1 = combine_cascade(g, sample_su_cascade(in, delta_phase, rng)).cwiseAbs().sum();
    values[t] = l1 * l1;
  });
  return summarize(values, ieg_gain(in));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace iegirs
