// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "iegirs/beamforming.hpp"
#include "iegirs/channel.hpp"
#include "iegirs/config.hpp"
#include "iegirs/grouping.hpp"

namespace iegirs {

/// Statistical precoders obtained by running the alternating stage on the
/// LoS twins of the channels with a fixed grouping.
struct StatisticalSolution {
  GroupingMatrix grouping;
  std::vector<ComplexMatrix> C_bar;  // K of size N x M
  ComplexMatrix w_bar;               // M x K
  ReflectionVector v_bar;
  FPAuxiliaries aux;
};

StatisticalSolution solve_statistical(const ChannelSet& channels, const GroupingMatrix& grouping,
                                      std::span<const double> weights, double p_max, const SolverOptions& opts);

/// Per-element beam-domain signal s_n = sum_k w_k (C_k w_bar_k)_n e^{-j arg(h_bu_k^H w_bar_k)}.
ComplexVector beam_domain_signal(const std::vector<ComplexMatrix>& C_bar, const std::vector<ComplexVector>& h_bu_bar,
                                 const ComplexMatrix& w_bar, std::span<const double> weights);

/// Statistical reflection heuristic: v_q = exp(j arg((G s)_q)).
ReflectionVector heuristic_rcv(const GroupingMatrix& grouping, const ComplexVector& beam_signal);

struct TwoStageResult {
  GroupingMatrix grouping;
  PrecodingMatrix W;
  ReflectionVector v;
  double wsr_bits = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  bool qp_fell_back = false;
  bool qp_concave = true;
  std::size_t repairs = 0;
};

/// Stage 1 picks G from S-CSI with the configured method; stage 2 runs the
/// alternating solver on the combined instantaneous channels.
TwoStageResult two_stage_solve(const ChannelSet& channels, std::size_t groups, std::span<const double> weights,
                               double p_max, const SolverOptions& opts);

/// Stage 2 alone for a given grouping, initialised from the statistical
/// heuristic (or randomly when opts.init is random).
TwoStageResult solve_with_grouping(const ChannelSet& channels, const GroupingMatrix& grouping,
                                   std::span<const double> weights, double p_max, const SolverOptions& opts);

/// Stage-1 grouping only.
struct StageOneResult {
  GroupingMatrix grouping;
  StatisticalSolution statistics;
  bool qp_fell_back = false;
  bool qp_concave = true;
  std::size_t repairs = 0;
};

StageOneResult select_grouping(const ChannelSet& channels, std::size_t groups, std::span<const double> weights,
                               double p_max, const SolverOptions& opts);

}  // namespace iegirs
