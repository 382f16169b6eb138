// SPDX-License-Identifier: Apache-2.0
#include "iegirs/two_stage.hpp"

#include <cmath>
#include <stdexcept>

namespace iegirs {

namespace {

std::vector<ComplexMatrix> combine_all(const GroupingMatrix& g, const std::vector<ComplexMatrix>& C) {
  std::vector<ComplexMatrix> out;
  out.reserve(C.size());
  for (const auto& c : C) out.push_back(combine_cascade(g, c));
  return out;
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

PrecodingMatrix random_precoder(Eigen::Index m, Eigen::Index k, double p_max, Rng& rng) {
  ComplexMatrix w = standard_complex_normal(m, k, rng);
  w *= std::sqrt(p_max) / w.norm();
  return PrecodingMatrix(std::move(w), p_max);
}

ReflectionVector random_rcv(Eigen::Index q, Rng& rng) {
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  RealVector p(q);
  for (Eigen::Index i = 0; i < q; ++i) p[i] = phase(rng);
  return ReflectionVector(std::move(p));
}

}  // namespace

StatisticalSolution solve_statistical(const ChannelSet& ch, const GroupingMatrix& grouping,
                                      std::span<const double> weights, double p_max, const SolverOptions& opts) {
  StatisticalSolution s;
  s.grouping = grouping;
  s.C_bar = ch.statistical_cascades();
  Stage2Problem p{combine_all(grouping, s.C_bar), ch.h_bu_stat, ch.noise_power, to_vector(weights), p_max};

  // Beam towards the dominant row space of each cascade with the coherent
  // combining gain of a fully aligned surface, plus the direct link.
  ComplexMatrix Hc(static_cast<Eigen::Index>(ch.M), static_cast<Eigen::Index>(ch.K));
  for (std::size_t k = 0; k < ch.K; ++k) {
    ComplexVector g = s.C_bar[k].adjoint() * s.C_bar[k].col(0);
    const double gn = g.norm();
    if (gn > 0.0) g *= s.C_bar[k].rowwise().norm().sum() / gn;
    Hc.col(static_cast<Eigen::Index>(k)) = g + ch.h_bu_stat[k];
  }
  const PrecodingMatrix W_mf = matched_filter(Hc, p_max);
  const ComplexVector sig = beam_domain_signal(s.C_bar, ch.h_bu_stat, W_mf.w(), weights);
  const ReflectionVector v0 = heuristic_rcv(grouping, sig);
  const PrecodingMatrix W0 = matched_filter(effective_channels(v0, p.C_hat, p.h_bu), p_max);

  const Stage2Result r = solve_stage2(p, v0, W0, opts, true);
  s.w_bar = r.W.w();
  s.v_bar = r.v;
  s.aux = r.aux;
  return s;
}

ComplexVector beam_domain_signal(const std::vector<ComplexMatrix>& C_bar, const std::vector<ComplexVector>& h_bu_bar,
                                 const ComplexMatrix& w_bar, std::span<const double> weights) {
  if (C_bar.empty()) throw std::invalid_argument("beam_domain_signal: no users");
  ComplexVector s = ComplexVector::Zero(C_bar[0].rows());
  for (std::size_t k = 0; k < C_bar.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const cplx d = h_bu_bar[k].dot(w_bar.col(kk));
    const cplx rot = d == cplx(0.0) ? cplx(1.0) : std::polar(1.0, -std::arg(d));
    s += (weights[k] * rot) * (C_bar[k] * w_bar.col(kk));
  }
  return s;
}

ReflectionVector heuristic_rcv(const GroupingMatrix& grouping, const ComplexVector& beam_signal) {
  return ReflectionVector::from_coefficients(combine_cascade(grouping, beam_signal));
}

namespace {

std::vector<double> phases_of(const ComplexVector& s) {
  std::vector<double> p(static_cast<std::size_t>(s.size()));
  for (Eigen::Index n = 0; n < s.size(); ++n) p[static_cast<std::size_t>(n)] = std::arg(s[n]);
  return p;
}

}  // namespace

StageOneResult select_grouping(const ChannelSet& ch, std::size_t groups, std::span<const double> weights,
                               double p_max, const SolverOptions& opts) {
  if (groups == 0 || groups > ch.N) throw std::invalid_argument("select_grouping: need 1 <= Q <= N");
  StageOneResult out;
  if (opts.grouping == GroupingMethod::identity) {
    if (groups != ch.N) throw std::invalid_argument("select_grouping: identity grouping needs Q = N");
    out.grouping = identity_grouping(ch.N);
    return out;
  }
  if (opts.grouping == GroupingMethod::adjacent) {
    out.grouping = adjacent_grouping(ch.N, groups);
    return out;
  }

  out.statistics = solve_statistical(ch, adjacent_grouping(ch.N, groups), weights, p_max, opts);
  const std::vector<double> wts = to_vector(weights);

  for (int pass = 0; pass < (opts.regroup_pass ? 2 : 1); ++pass) {
    const StatisticalSolution& st = out.statistics;
    const ComplexVector sig = beam_domain_signal(st.C_bar, ch.h_bu_stat, st.w_bar, weights);
    const std::vector<double> phases = phases_of(sig);

    if (opts.grouping == GroupingMethod::phase_partition) {
      GroupingOutcome o = arc_partition_from_phases(phases, groups);
      out.grouping = std::move(o.grouping);
      out.repairs = o.repairs;
    } else if (opts.grouping == GroupingMethod::knn) {
      Rng rng(derive_seed(opts.init_seed, 0x6b6e6e));
      KnnOutcome o = circular_knn_grouping(phases, groups, rng);
      out.grouping = std::move(o.grouping);
      out.repairs = o.repairs;
    } else {
      // The relaxation is posed around the equal-arc split of the beam-domain
      // signal and the matching heuristic group phases.
      GroupingOutcome arc = arc_partition_from_phases(phases, groups);
      GroupingProblem gp{st.C_bar, ch.h_bu_stat, st.w_bar, heuristic_rcv(arc.grouping, sig).coefficients(),
                         st.aux, wts};
      QpOptions qo;
      qo.regularization = opts.qp_regularization;
      qo.initial = arc.grouping;
      QpOutcome o = relaxed_qp_grouping(gp, groups, qo);
      out.grouping = std::move(o.grouping);
      out.repairs = o.repairs + arc.repairs;
      out.qp_fell_back = o.fell_back;
      out.qp_concave = o.concave;
    }
    if (opts.regroup_pass && pass == 0) {
      out.statistics = solve_statistical(ch, out.grouping, weights, p_max, opts);
    }
  }
  return out;
}

TwoStageResult solve_with_grouping(const ChannelSet& ch, const GroupingMatrix& grouping,
                                   std::span<const double> weights, double p_max, const SolverOptions& opts) {
  const GroupingReport rep = validate(grouping);
  if (!rep.ok()) throw std::invalid_argument("solve_with_grouping: " + rep.message);
  if (grouping.elements() != ch.N) throw std::invalid_argument("solve_with_grouping: grouping size differs from N");

  Stage2Problem p{combine_all(grouping, ch.cascades()), ch.h_bu, ch.noise_power, to_vector(weights), p_max};
  ReflectionVector v0;
  PrecodingMatrix W0;
  if (opts.init == InitMode::random) {
    Rng rng(derive_seed(opts.init_seed, 0x696e6974));
    v0 = random_rcv(static_cast<Eigen::Index>(grouping.groups()), rng);
    W0 = random_precoder(static_cast<Eigen::Index>(ch.M), static_cast<Eigen::Index>(ch.K), p_max, rng);
  } else {
    const StatisticalSolution st = grouping.groups() == ch.N && grouping.groups() > 512
                                       ? StatisticalSolution{}
                                       : solve_statistical(ch, grouping, weights, p_max, opts);
    if (st.v_bar.size() == static_cast<Eigen::Index>(grouping.groups())) {
      const ComplexVector sig = beam_domain_signal(st.C_bar, ch.h_bu_stat, st.w_bar, weights);
      v0 = heuristic_rcv(grouping, sig);
    } else {
      v0 = ReflectionVector::zeros(static_cast<Eigen::Index>(grouping.groups()));
    }
    W0 = matched_filter(effective_channels(v0, p.C_hat, p.h_bu), p_max);
  }

  const Stage2Result r = solve_stage2(p, v0, W0, opts, true);
  TwoStageResult out;
  out.grouping = grouping;
  out.W = r.W;
  out.v = r.v;
  out.wsr_bits = r.wsr_bits;
  out.trace = r.trace;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

TwoStageResult two_stage_solve(const ChannelSet& ch, std::size_t groups, std::span<const double> weights,
                               double p_max, const SolverOptions& opts) {
  StageOneResult s1 = select_grouping(ch, groups, weights, p_max, opts);
  TwoStageResult out = solve_with_grouping(ch, s1.grouping, weights, p_max, opts);
  out.qp_fell_back = s1.qp_fell_back;
  out.qp_concave = s1.qp_concave;
  out.repairs = s1.repairs;
  return out;
}

}  // namespace iegirs
