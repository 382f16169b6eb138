// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "iegirs/config.hpp"
#include "iegirs/mathkit.hpp"

namespace iegirs {

using Rng = std::mt19937_64;

/// Independent stream for (master seed, index); stable under changes to the
/// number of streams requested.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

enum class PathLossModel { los, nlos };

/// 3GPP-style path loss in dB at a link length of d metres.
double path_loss_db(PathLossModel model, double distance_m);

/// Amplitude factor delta = 10^(-PL/20).
double amplitude_from_db(double path_loss_db);

/// Rician link H = delta (sqrt(k/(1+k)) Hbar + sqrt(1/(1+k)) Htilde).
/// Vectors are stored as single-column matrices.
struct RicianLink {
  double delta = 1.0;
  double kappa = 0.0;
  ComplexMatrix los;

  /// delta * sqrt(k/(1+k)) * los; the statistical part of the link.
  ComplexMatrix deterministic() const;
  double los_weight() const;
  double nlos_weight() const;
};

/// Draws one realization. Always consumes rows*cols complex normals from rng,
/// including in the kappa = inf limit, so streams stay aligned.
ComplexMatrix sample_rician(const RicianLink& link, Rng& rng);

/// Fills a matrix with i.i.d. CN(0, 1) entries.
ComplexMatrix standard_complex_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

struct CascadeCoefficients {
  double a_bar = 0.0;
  double a_tilde = 1.0;
  double b_bar = 0.0;
  double b_tilde = 0.0;
};

CascadeCoefficients cascade_coefficients(double kappa_bi, double kappa_iu);

/// Deterministic cascaded component and the coefficients of the split
/// c = c1 + c2 for ULA LoS components at angles theta_bi, theta_iu.
struct CascadePair {
  ComplexVector c1;
  CascadeCoefficients coeffs;
  double scale = 1.0;  // delta_bi * delta_iu
};

CascadePair cascade_decompose(double kappa_bi, double kappa_iu, double delta_bi, double delta_iu,
                              double theta_bi, double theta_iu, std::size_t n);

/// C_k = diag(conj(h_iu_k)) H_bi^H, an N x M matrix.
ComplexMatrix cascaded_channel(const ComplexVector& h_iu_k, const ComplexMatrix& H_bi);

struct LinkStats {
  PathLossModel model = PathLossModel::los;
  double distance = 0.0;
  double delta = 0.0;
  double kappa = 0.0;
};

/// One realization of every link of the scene plus its statistical twins.
struct ChannelSet {
  std::size_t M = 0;
  std::size_t N = 0;
  std::size_t K = 0;
  std::size_t irs_rows = 1;
  std::size_t irs_cols = 1;

  ComplexMatrix H_bi;                 // M x N
  std::vector<ComplexVector> h_iu;    // K of length N
  std::vector<ComplexVector> h_bu;    // K of length M

  ComplexMatrix H_bi_stat;
  std::vector<ComplexVector> h_iu_stat;
  std::vector<ComplexVector> h_bu_stat;

  LinkStats bi;
  std::vector<LinkStats> iu;
  std::vector<LinkStats> bu;

  std::vector<Vec3> users;
  double noise_power = 0.0;

  /// Instantaneous cascades C_k, N x M each.
  std::vector<ComplexMatrix> cascades() const;
  /// Statistical cascades built from the LoS twins.
  std::vector<ComplexMatrix> statistical_cascades() const;
};

/// Steering data derived from the geometry alone.
struct LosGeometry {
  ComplexMatrix H_bi;                 // unit-modulus, rank one
  std::vector<ComplexVector> h_iu;
  std::vector<ComplexVector> h_bu;
};

/// BS ULA along the y axis; IRS in the plane y = const with rows along z and
/// columns along x. Each response uses the direction cosine of the link onto
/// the array axis.
LosGeometry los_geometry(const ScenarioConfig& config, const std::vector<Vec3>& users);

/// User positions drawn uniformly in the configured ball.
std::vector<Vec3> place_users(const ScenarioConfig& config, Rng& rng);

ChannelSet build_scenario(const ScenarioConfig& config, Rng& rng);

}  // namespace iegirs
