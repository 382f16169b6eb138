// SPDX-License-Identifier: Apache-2.0
#include "iegirs/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace iegirs {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finaliser over a Weyl step.
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double path_loss_db(PathLossModel model, double distance_m) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw std::domain_error("path_loss_db: distance must be positive and finite");
  }
  const double l = std::log10(distance_m);
  return model == PathLossModel::los ? 42.0 + 22.0 * l : 40.9 + 36.7 * l;
}

double amplitude_from_db(double path_loss_db) { return std::pow(10.0, -path_loss_db / 20.0); }

double RicianLink::los_weight() const {
  if (std::isinf(kappa)) return 1.0;
  return std::sqrt(kappa / (1.0 + kappa));
}

double RicianLink::nlos_weight() const {
  if (std::isinf(kappa)) return 0.0;
  return std::sqrt(1.0 / (1.0 + kappa));
}

ComplexMatrix RicianLink::deterministic() const { return (delta * los_weight()) * los; }

ComplexMatrix standard_complex_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = cplx(re, im);
    }
  }
  return m;
}

ComplexMatrix sample_rician(const RicianLink& link, Rng& rng) {
  if (link.kappa < 0.0 || link.delta < 0.0) {
    throw std::invalid_argument("sample_rician: kappa and delta must be >= 0");
  }
  const ComplexMatrix nlos = standard_complex_normal(link.los.rows(), link.los.cols(), rng);
  return link.delta * (link.los_weight() * link.los + link.nlos_weight() * nlos);
}

CascadeCoefficients cascade_coefficients(double kappa_bi, double kappa_iu) {
  if (kappa_bi < 0.0 || kappa_iu < 0.0) {
    throw std::invalid_argument("cascade_coefficients: Rician factors must be >= 0");
  }
  const double denom = (1.0 + kappa_bi) * (1.0 + kappa_iu);
  return {std::sqrt(kappa_bi * kappa_iu / denom), std::sqrt(1.0 / denom), std::sqrt(kappa_iu / denom),
          std::sqrt(kappa_bi / denom)};
}

CascadePair cascade_decompose(double kappa_bi, double kappa_iu, double delta_bi, double delta_iu,
                              double theta_bi, double theta_iu, std::size_t n) {
  CascadePair out;
  out.coeffs = cascade_coefficients(kappa_bi, kappa_iu);
  out.scale = delta_bi * delta_iu;
  const ComplexVector h_bi = array_response(n, theta_bi);
  const ComplexVector h_iu = array_response(n, theta_iu);
  out.c1 = (out.coeffs.a_bar * out.scale) * (h_iu.conjugate().cwiseProduct(h_bi.conjugate()));
  return out;
}

ComplexMatrix cascaded_channel(const ComplexVector& h_iu_k, const ComplexMatrix& H_bi) {
  if (H_bi.cols() != h_iu_k.size()) {
    throw std::invalid_argument("cascaded_channel: H_bi has " + std::to_string(H_bi.cols()) +
                                " columns but h_iu has " + std::to_string(h_iu_k.size()) + " entries");
  }
  return h_iu_k.conjugate().asDiagonal() * H_bi.adjoint();
}

std::vector<ComplexMatrix> ChannelSet::cascades() const {
  std::vector<ComplexMatrix> out;
  out.reserve(K);
  for (std::size_t k = 0; k < K; ++k) out.push_back(cascaded_channel(h_iu[k], H_bi));
  return out;
}

std::vector<ComplexMatrix> ChannelSet::statistical_cascades() const {
  std::vector<ComplexMatrix> out;
  out.reserve(K);
  for (std::size_t k = 0; k < K; ++k) out.push_back(cascaded_channel(h_iu_stat[k], H_bi_stat));
  return out;
}

namespace {

Vec3 unit_direction(const Vec3& from, const Vec3& to, const char* what) {
  const Vec3 d = to - from;
  const double len = norm(d);
  if (!(len > 1e-9)) throw std::invalid_argument(std::string("build_scenario: coincident points for ") + what);
  return (1.0 / len) * d;
}

ComplexVector irs_response(const ScenarioConfig& cfg, const Vec3& dir) {
  if (!cfg.irs_planar) return array_response_cosine(cfg.N, dir.x);
  const auto [rows, cols] = near_square_factor(cfg.N);
  return planar_response(rows, cols, dir.z, dir.x);
}

}  // namespace

LosGeometry los_geometry(const ScenarioConfig& cfg, const std::vector<Vec3>& users) {
  const Geometry& g = cfg.geometry;
  LosGeometry out;
  const Vec3 bs_to_irs = unit_direction(g.bs, g.irs, "BS-IRS");
  const Vec3 irs_to_bs = (-1.0) * bs_to_irs;
  const ComplexVector a_bs = array_response_cosine(cfg.M, bs_to_irs.y);
  const ComplexVector a_irs = irs_response(cfg, irs_to_bs);
  out.H_bi = a_bs * a_irs.transpose();
  out.h_iu.reserve(users.size());
  out.h_bu.reserve(users.size());
  for (const Vec3& u : users) {
    out.h_iu.push_back(irs_response(cfg, unit_direction(g.irs, u, "IRS-user")));
    out.h_bu.push_back(array_response_cosine(cfg.M, unit_direction(g.bs, u, "BS-user").y));
  }
  return out;
}

std::vector<Vec3> place_users(const ScenarioConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double r = cfg.geometry.user_radius;
  std::vector<Vec3> users;
  users.reserve(cfg.K);
  while (users.size() < cfg.K) {
    const Vec3 p{unit(rng), unit(rng), unit(rng)};
    if (norm(p) <= 1.0) users.push_back(cfg.geometry.user_center + r * p);
  }
  return users;
}

ChannelSet build_scenario(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  ChannelSet cs;
  cs.M = cfg.M;
  cs.N = cfg.N;
  cs.K = cfg.K;
  if (cfg.irs_planar) {
    std::tie(cs.irs_rows, cs.irs_cols) = near_square_factor(cfg.N);
  } else {
    cs.irs_rows = 1;
    cs.irs_cols = cfg.N;
  }
  cs.noise_power = cfg.noise_watts();
  cs.users = place_users(cfg, rng);

  const LosGeometry los = los_geometry(cfg, cs.users);
  const Geometry& g = cfg.geometry;

  auto make_stats = [](PathLossModel model, double d, double kappa) {
    return LinkStats{model, d, amplitude_from_db(path_loss_db(model, d)), kappa};
  };

  cs.bi = make_stats(PathLossModel::los, norm(g.irs - g.bs), cfg.kappa_bi);
  const RicianLink bi_link{cs.bi.delta, cs.bi.kappa, los.H_bi};
  cs.H_bi_stat = bi_link.deterministic();
  cs.H_bi = sample_rician(bi_link, rng);

  const PathLossModel direct_model =
      cfg.scenario == Scenario::obscured ? PathLossModel::nlos : PathLossModel::los;
  for (std::size_t k = 0; k < cfg.K; ++k) {
    cs.iu.push_back(make_stats(PathLossModel::los, norm(cs.users[k] - g.irs), cfg.kappa_iu));
    cs.bu.push_back(make_stats(direct_model, norm(cs.users[k] - g.bs), cfg.kappa_bu));

    const RicianLink iu_link{cs.iu[k].delta, cs.iu[k].kappa, los.h_iu[k]};
    const RicianLink bu_link{cs.bu[k].delta, cs.bu[k].kappa, los.h_bu[k]};
    cs.h_iu_stat.push_back(iu_link.deterministic().col(0));
    cs.h_bu_stat.push_back(bu_link.deterministic().col(0));
    cs.h_iu.push_back(sample_rician(iu_link, rng).col(0));
    cs.h_bu.push_back(sample_rician(bu_link, rng).col(0));
  }
  return cs;
}

}  // namespace iegirs
