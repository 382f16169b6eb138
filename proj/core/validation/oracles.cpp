// SPDX-License-Identifier: Apache-2.0
#include "iegirs/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace iegirs::oracle {

namespace {

long double bessel_series(int nu, long double z) {
  const long double q = z * z / 4.0L;
  long double term = nu == 0 ? 1.0L : z / 2.0L;
  long double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + nu));
    sum += term;
    if (term < sum * 1e-21L && static_cast<long double>(k) > z) break;
  }
  return sum;
}

}  // namespace

long double laguerre_half_series(long double x) {
  if (x < 0.0L) throw std::domain_error("laguerre_half_series: x must be >= 0");
  const long double z = x / 2.0L;
  return std::exp(-z) * ((1.0L + x) * bessel_series(0, z) + x * bessel_series(1, z));
}

std::uint64_t set_partitions_bruteforce(unsigned n, unsigned q) {
  if (q == 0) return n == 0 ? 1 : 0;
  if (n > 12) throw std::invalid_argument("set_partitions_bruteforce: n too large");
  std::uint64_t total = 1;
  for (unsigned i = 0; i < n; ++i) total *= q;
  std::uint64_t surjective = 0;
  std::vector<unsigned> labels(n, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    std::vector<bool> seen(q, false);
    for (unsigned i = 0; i < n; ++i) {
      seen[c % q] = true;
      c /= q;
    }
    bool all = true;
    for (bool s : seen) all = all && s;
    if (all) ++surjective;
  }
  std::uint64_t fact = 1;
  for (unsigned i = 2; i <= q; ++i) fact *= i;
  return surjective / fact;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, int iterations) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iterations && (b - a) > 1e-15 * (std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::complex<double> maximize_xi(double a, std::complex<double> omega, double chi) {
  const double bound = 2.0 * a * std::abs(omega) / chi + 1e-300;
  auto objective = [&](double re, double im) {
    const std::complex<double> xi(re, im);
    return 2.0 * a * std::real(std::conj(xi) * omega) - std::norm(xi) * chi;
  };
  double re = 0.0;
  double im = 0.0;
  for (int sweep = 0; sweep < 3; ++sweep) {
    re = golden_section_max([&](double x) { return objective(x, im); }, -bound, bound);
    im = golden_section_max([&](double y) { return objective(re, y); }, -bound, bound);
  }
  return {re, im};
}

double maximize_varsigma(double weight, std::complex<double> xi, std::complex<double> omega) {
  const double e = std::real(std::conj(xi) * omega);
  auto objective = [&](double s) {
    return weight * std::log1p(s) - weight * s + 2.0 * std::sqrt(weight * (1.0 + s)) * e;
  };
  const double hi = 4.0 * (e * e / weight + 1.0) + 10.0;
  return golden_section_max(objective, 0.0, hi);
}

double scalar_precoder_grid(std::complex<double> zeta, double l, double p_max, int magnitude_points,
                            int phase_points) {
  double best = -std::numeric_limits<double>::infinity();
  const double rmax = std::sqrt(p_max);
  for (int i = 0; i <= magnitude_points; ++i) {
    const double r = rmax * static_cast<double>(i) / static_cast<double>(magnitude_points);
    for (int j = 0; j < phase_points; ++j) {
      const std::complex<double> w = std::polar(r, 2.0 * kPi * static_cast<double>(j) / phase_points);
      best = std::max(best, 2.0 * std::real(std::conj(zeta) * w) - l * std::norm(w));
    }
  }
  return best;
}

double rcv_grid_max(const ComplexMatrix& U, const ComplexVector& phi, int points) {
  const Eigen::Index q = phi.size();
  if (q < 1 || q > 3) throw std::invalid_argument("rcv_grid_max: Q must be 1..3");
  std::vector<int> idx(static_cast<std::size_t>(q), 0);
  double best = -std::numeric_limits<double>::infinity();
  ComplexVector v(q);
  for (;;) {
    for (Eigen::Index i = 0; i < q; ++i) {
      v[i] = std::polar(1.0, 2.0 * kPi * idx[static_cast<std::size_t>(i)] / points);
    }
    const double f = -std::real(v.dot(U * v)) - 2.0 * std::real(v.dot(phi));
    best = std::max(best, f);
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == points) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return best;
}

}  // namespace iegirs::oracle
