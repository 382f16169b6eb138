// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iegirs/channel.hpp"
#include "iegirs/config.hpp"
#include "iegirs/mathkit.hpp"

namespace iegirs {

/// Everything needed to recompute a reported rate from the channels alone.
struct SolutionArtifacts {
  std::vector<long long> grouping;  // 1-based labels; empty without grouping
  RealVector element_phases;        // N element-level phases; empty for no_irs
  ComplexMatrix W;                  // M x K
};

struct TrialResult {
  SchemeId scheme = SchemeId::ieg;
  std::string axis = "none";
  double axis_value = 0.0;
  std::size_t N = 0;
  std::size_t Q = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double wsr_bits = 0.0;
  int iterations = 0;
  double runtime_ms = 0.0;
  /// Reflection dimensions optimized from instantaneous CSI.
  std::size_t pilot_dimensions = 0;
  SolutionArtifacts artifacts;
};

/// Weighted sum rate recomputed from element-level phases and W.
double audit_wsr(const ChannelSet& channels, const SolutionArtifacts& artifacts, const std::vector<double>& weights);

/// Runs one scheme on one channel realization. `scheme_seed` drives the
/// random phases of the uirs_q and random_rcv baselines. The reported rate is
/// checked against audit_wsr and the pilot budget against config.Q0.
TrialResult run_scheme(SchemeId scheme, const ChannelSet& channels, const ScenarioConfig& config,
                       std::uint64_t scheme_seed);

enum class SweepAxis { none, groups, elements, distance, power };

std::string_view to_string(SweepAxis a);
SweepAxis parse_axis(std::string_view s);

/// Config with the axis parameter set to value. Distance moves the IRS
/// along x; groups raises Q0 when needed.
ScenarioConfig apply_axis(const ScenarioConfig& config, SweepAxis axis, double value);

struct Aggregate {
  SchemeId scheme = SchemeId::ieg;
  double axis_value = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double standard_error = 0.0;
};

struct SweepReport {
  std::vector<TrialResult> rows;  // sorted by (scheme, axis_value, trial)
  std::vector<Aggregate> aggregates;
  double wall_ms = 0.0;
  /// Set when a trial failed; rows hold every completed trial.
  std::optional<std::string> failure;
};

/// Trial t uses seed derive_seed(master_seed, t) for every axis value, so
/// schemes and axis values see common channel draws.
SweepReport sweep(SweepAxis axis, const std::vector<double>& values, const ScenarioConfig& config);

/// One configuration, all configured schemes and trials.
SweepReport run_monte_carlo(const ScenarioConfig& config);

std::vector<Aggregate> aggregate(const std::vector<TrialResult>& rows);

inline constexpr const char* kCsvHeader =
    "scheme,axis,axis_value,N,Q,trial,seed,wsr_bits_per_hz,iterations,runtime_ms";

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& rows);
void write_summary_csv(std::ostream& out, const std::vector<Aggregate>& aggregates);
/// One JSON object per row with the grouping, element phases and precoder.
void write_artifacts_jsonl(std::ostream& out, const std::vector<TrialResult>& rows);

}  // namespace iegirs
