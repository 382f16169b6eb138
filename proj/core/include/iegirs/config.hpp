// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace iegirs {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double norm(const Vec3& v);

enum class Scenario { obscured, unobscured };

enum class GroupingMethod { qp, phase_partition, knn, adjacent, identity };

enum class InitMode { heuristic, random };

enum class SchemeId { ieg, aeg, uirs_q, random_rcv, no_irs };

std::string_view to_string(Scenario s);
std::string_view to_string(GroupingMethod m);
std::string_view to_string(InitMode m);
std::string_view to_string(SchemeId s);
Scenario parse_scenario(std::string_view s);
GroupingMethod parse_grouping_method(std::string_view s);
InitMode parse_init_mode(std::string_view s);
SchemeId parse_scheme(std::string_view s);

/// Alternating-solver knobs shared by every scheme.
struct SolverOptions {
  double tol = 1e-6;
  int max_outer = 200;
  int max_inner_mm = 50;
  double mm_tol = 1e-9;
  InitMode init = InitMode::heuristic;
  std::uint64_t init_seed = 0;
  GroupingMethod grouping = GroupingMethod::qp;
  /// Weight on the sum_n Gamma_n^T G_n term of the relaxed grouping QP.
  double qp_regularization = 1.0;
  /// Re-run the statistical bootstrap and the grouping step once more.
  bool regroup_pass = false;
  /// Safeguarded extrapolation of the reflection phases between outer iterations.
  bool extrapolate = true;
};

struct Geometry {
  Vec3 bs{0.0, 6.0, 16.0};
  Vec3 irs{300.0, 0.0, 8.0};
  Vec3 user_center{300.0, 6.0, 0.0};
  double user_radius = 2.0;
};

/// One simulation scene. Defaults are the desk-scale setup; set N = 10000
/// for the full-size surface.
struct ScenarioConfig {
  std::size_t M = 4;
  std::size_t K = 4;
  std::size_t N = 1024;
  std::size_t Q = 4;
  std::size_t Q0 = 4;
  Geometry geometry;
  double kappa_bi = 1.0;
  double kappa_iu = 1.0;
  double kappa_bu = 1.0;
  Scenario scenario = Scenario::obscured;
  double power_dbm = 10.0;
  double noise_dbm = -100.0;
  /// Per-user rate weights; empty means all ones.
  std::vector<double> weights;
  /// IRS layout: planar (Kronecker UPA, near-square) or linear.
  bool irs_planar = true;
  std::size_t trials = 20;
  std::uint64_t master_seed = 1;
  std::vector<SchemeId> schemes{SchemeId::ieg, SchemeId::aeg, SchemeId::random_rcv, SchemeId::no_irs};
  SolverOptions solver;
  /// Worker threads for trial-level parallelism; 0 = hardware concurrency.
  std::size_t threads = 1;
  /// Fill runtime_ms in CSV rows. Off keeps CSV output byte-reproducible.
  bool record_timing = false;

  std::vector<double> user_weights() const;
  double power_watts() const;
  double noise_watts() const;

  /// Throws std::invalid_argument on Q <= Q0 <= N, trials >= 1, etc.
  void validate() const;
};

double dbm_to_watts(double dbm);

/// Parse a nested JSON configuration. Unknown keys are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(std::string_view json_text);

}  // namespace iegirs
