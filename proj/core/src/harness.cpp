// SPDX-License-Identifier: Apache-2.0
#include "iegirs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "iegirs/beamforming.hpp"
#include "iegirs/grouping.hpp"
#include "iegirs/parallel.hpp"
#include "iegirs/two_stage.hpp"

namespace iegirs {

double audit_wsr(const ChannelSet& ch, const SolutionArtifacts& a, const std::vector<double>& weights) {
  ComplexMatrix H(static_cast<Eigen::Index>(ch.M), static_cast<Eigen::Index>(ch.K));
  const bool has_irs = a.element_phases.size() > 0;
  if (has_irs && a.element_phases.size() != static_cast<Eigen::Index>(ch.N)) {
    throw std::invalid_argument("audit_wsr: element phase count differs from N");
  }
  const ComplexVector theta = has_irs ? ReflectionVector(a.element_phases).coefficients() : ComplexVector();
  for (std::size_t k = 0; k < ch.K; ++k) {
    ComplexVector h = ch.h_bu[k];
    if (has_irs) h += cascaded_channel(ch.h_iu[k], ch.H_bi).adjoint() * theta;
    H.col(static_cast<Eigen::Index>(k)) = h;
  }
  return wsr(sinr_all(H, PrecodingMatrix(a.W, 0.0), ch.noise_power), weights);
}

namespace {

RealVector random_phases(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  RealVector p(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = phase(rng);
  return p;
}

RealVector expand_phases(const GroupingMatrix& g, const ReflectionVector& v) {
  RealVector p(static_cast<Eigen::Index>(g.elements()));
  for (std::size_t n = 0; n < g.elements(); ++n) p[static_cast<Eigen::Index>(n)] = v.phases()[static_cast<Eigen::Index>(g.group_of(n))];
  return p;
}

// BS-only optimization on fixed effective channels.
Stage2Result solve_bs_only(const std::vector<ComplexVector>& h, const ChannelSet& ch, const std::vector<double>& w,
                           double p_max, const SolverOptions& opts) {
  Stage2Problem p{{}, h, ch.noise_power, w, p_max};
  ComplexMatrix H(static_cast<Eigen::Index>(ch.M), static_cast<Eigen::Index>(ch.K));
  for (std::size_t k = 0; k < ch.K; ++k) H.col(static_cast<Eigen::Index>(k)) = h[k];
  return solve_stage2(p, ReflectionVector(), matched_filter(H, p_max), opts, false);
}

}  // namespace

TrialResult run_scheme(SchemeId scheme, const ChannelSet& ch, const ScenarioConfig& cfg, std::uint64_t scheme_seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> weights = cfg.user_weights();
  const double p_max = cfg.power_watts();
  TrialResult r;
  r.scheme = scheme;
  r.N = cfg.N;
  r.Q = cfg.Q;

  switch (scheme) {
    case SchemeId::ieg:
    case SchemeId::aeg: {
      const TwoStageResult s = scheme == SchemeId::ieg
                                   ? two_stage_solve(ch, cfg.Q, weights, p_max, cfg.solver)
                                   : solve_with_grouping(ch, adjacent_grouping(cfg.N, cfg.Q), weights, p_max, cfg.solver);
      r.wsr_bits = s.wsr_bits;
      r.iterations = s.iterations;
      r.pilot_dimensions = static_cast<std::size_t>(s.v.size());
      r.artifacts.grouping = s.grouping.one_based();
      r.artifacts.element_phases = expand_phases(s.grouping, s.v);
      r.artifacts.W = s.W.w();
      break;
    }
    case SchemeId::uirs_q: {
      Rng rng(scheme_seed);
      const std::size_t q = cfg.Q;
      const RealVector rest = random_phases(cfg.N - q, rng);
      const ComplexVector rest_v = ReflectionVector(rest).coefficients();
      std::vector<ComplexMatrix> C_ctrl;
      std::vector<ComplexVector> h_eff;
      const auto Q = static_cast<Eigen::Index>(q);
      const auto tail = static_cast<Eigen::Index>(cfg.N - q);
      ComplexMatrix Hc(static_cast<Eigen::Index>(ch.M), static_cast<Eigen::Index>(ch.K));
      for (std::size_t k = 0; k < ch.K; ++k) {
        const ComplexMatrix C = cascaded_channel(ch.h_iu[k], ch.H_bi);
        C_ctrl.push_back(C.topRows(Q));
        ComplexVector h = ch.h_bu[k];
        if (tail > 0) h += C.bottomRows(tail).adjoint() * rest_v;
        h_eff.push_back(h);
        ComplexVector g = C_ctrl.back().adjoint() * C_ctrl.back().col(0);
        const double gn = g.norm();
        if (gn > 0.0) g *= C_ctrl.back().rowwise().norm().sum() / gn;
        Hc.col(static_cast<Eigen::Index>(k)) = g + h;
      }
      const PrecodingMatrix W_mf = matched_filter(Hc, p_max);
      const ReflectionVector v0 = heuristic_rcv(identity_grouping(q), beam_domain_signal(C_ctrl, h_eff, W_mf.w(), weights));
      Stage2Problem p{C_ctrl, h_eff, ch.noise_power, weights, p_max};
      const PrecodingMatrix W0 = matched_filter(effective_channels(v0, p.C_hat, p.h_bu), p_max);
      const Stage2Result s = solve_stage2(p, v0, W0, cfg.solver, true);
      r.wsr_bits = s.wsr_bits;
      r.iterations = s.iterations;
      r.pilot_dimensions = static_cast<std::size_t>(s.v.size());
      r.artifacts.element_phases.resize(static_cast<Eigen::Index>(cfg.N));
      r.artifacts.element_phases << s.v.phases(), rest;
      r.artifacts.W = s.W.w();
      break;
    }
    case SchemeId::random_rcv: {
      Rng rng(scheme_seed);
      const RealVector theta = random_phases(cfg.N, rng);
      const ComplexVector tv = ReflectionVector(theta).coefficients();
      std::vector<ComplexVector> h;
      for (std::size_t k = 0; k < ch.K; ++k) h.push_back(ch.h_bu[k] + cascaded_channel(ch.h_iu[k], ch.H_bi).adjoint() * tv);
      const Stage2Result s = solve_bs_only(h, ch, weights, p_max, cfg.solver);
      r.wsr_bits = s.wsr_bits;
      r.iterations = s.iterations;
      r.artifacts.element_phases = theta;
      r.artifacts.W = s.W.w();
      break;
    }
    case SchemeId::no_irs: {
      const Stage2Result s = solve_bs_only(ch.h_bu, ch, weights, p_max, cfg.solver);
      r.wsr_bits = s.wsr_bits;
      r.iterations = s.iterations;
      r.artifacts.W = s.W.w();
      break;
    }
  }

  const std::size_t expected_dims =
      (scheme == SchemeId::random_rcv || scheme == SchemeId::no_irs) ? 0 : cfg.Q;
  if (r.pilot_dimensions != expected_dims || r.pilot_dimensions > cfg.Q0) {
    throw std::logic_error("run_scheme: " + std::string(to_string(scheme)) + " optimized " +
                           std::to_string(r.pilot_dimensions) + " reflection dimensions, budget is " +
                           std::to_string(expected_dims));
  }
  const double audited = audit_wsr(ch, r.artifacts, weights);
  if (std::abs(audited - r.wsr_bits) > 1e-9 * std::max(std::abs(r.wsr_bits), 1e-12)) {
    throw std::logic_error("run_scheme: reported WSR " + std::to_string(r.wsr_bits) + " differs from audited " +
                           std::to_string(audited));
  }
  if (cfg.record_timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::groups: return "groups";
    case SweepAxis::elements: return "elements";
    case SweepAxis::distance: return "distance";
    case SweepAxis::power: return "power";
  }
  return "none";
}

SweepAxis parse_axis(std::string_view s) {
  for (SweepAxis a : {SweepAxis::none, SweepAxis::groups, SweepAxis::elements, SweepAxis::distance, SweepAxis::power}) {
    if (to_string(a) == s) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

ScenarioConfig apply_axis(const ScenarioConfig& cfg, SweepAxis axis, double value) {
  ScenarioConfig c = cfg;
  auto as_count = [&](const char* what) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw std::invalid_argument(std::string("sweep: ") + what + " values must be positive integers");
    }
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::none: break;
    case SweepAxis::groups:
      c.Q = as_count("groups");
      c.Q0 = std::max(c.Q0, c.Q);
      break;
    case SweepAxis::elements: c.N = as_count("elements"); break;
    case SweepAxis::distance: c.geometry.irs.x = value; break;
    case SweepAxis::power: c.power_dbm = value; break;
  }
  c.validate();
  return c;
}

std::vector<Aggregate> aggregate(const std::vector<TrialResult>& rows) {
  std::map<std::pair<int, double>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{static_cast<int>(r.scheme), r.axis_value}].push_back(r.wsr_bits);
  std::vector<Aggregate> out;
  for (const auto& [key, v] : groups) {
    Aggregate a;
    a.scheme = static_cast<SchemeId>(key.first);
    a.axis_value = key.second;
    a.count = v.size();
    double s = 0.0;
    for (double x : v) s += x;
    a.mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - a.mean) * (x - a.mean);
    const double n = static_cast<double>(v.size());
    a.standard_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    out.push_back(a);
  }
  return out;
}

SweepReport sweep(SweepAxis axis, const std::vector<double>& values, const ScenarioConfig& cfg) {
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<ScenarioConfig> configs;
  for (double v : values) configs.push_back(apply_axis(cfg, axis, v));

  const std::size_t tasks = configs.size() * cfg.trials;
  std::vector<std::vector<TrialResult>> slots(tasks);
  std::vector<bool> done(tasks, false);
  std::mutex failure_mutex;
  std::optional<std::string> failure;

  parallel_for(tasks, cfg.threads, [&](std::size_t i) {
    const std::size_t vi = i / cfg.trials;
    const std::size_t t = i % cfg.trials;
    try {
      const ScenarioConfig& c = configs[vi];
      const std::uint64_t seed = derive_seed(c.master_seed, t);
      Rng rng(seed);
      const ChannelSet ch = build_scenario(c, rng);
      for (SchemeId s : c.schemes) {
        TrialResult r = run_scheme(s, ch, c, derive_seed(seed, 1000 + static_cast<std::uint64_t>(s)));
        r.axis = std::string(to_string(axis));
        r.axis_value = values[vi];
        r.trial = t;
        r.seed = seed;
        slots[i].push_back(std::move(r));
      }
      done[i] = true;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = "axis value " + std::to_string(values[vi]) + ", trial " + std::to_string(t) + ": " + e.what();
      slots[i].clear();
    }
  });

  SweepReport rep;
  for (std::size_t i = 0; i < tasks; ++i) {
    if (done[i]) std::move(slots[i].begin(), slots[i].end(), std::back_inserter(rep.rows));
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const TrialResult& a, const TrialResult& b) {
    return std::make_tuple(static_cast<int>(a.scheme), a.axis_value, a.trial) <
           std::make_tuple(static_cast<int>(b.scheme), b.axis_value, b.trial);
  });
  rep.aggregates = aggregate(rep.rows);
  rep.failure = failure;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SweepReport run_monte_carlo(const ScenarioConfig& cfg) { return sweep(SweepAxis::none, {0.0}, cfg); }

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << r.axis << ',' << num(r.axis_value) << ',' << r.N << ',' << r.Q << ','
        << r.trial << ',' << r.seed << ',' << num(r.wsr_bits) << ',' << r.iterations << ',' << num(r.runtime_ms)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<Aggregate>& aggregates) {
  out << "scheme,axis_value,trials,mean_wsr_bits_per_hz,stderr_wsr_bits_per_hz\n";
  for (const auto& a : aggregates) {
    out << to_string(a.scheme) << ',' << num(a.axis_value) << ',' << a.count << ',' << num(a.mean) << ','
        << num(a.standard_error) << '\n';
  }
}

void write_artifacts_jsonl(std::ostream& out, const std::vector<TrialResult>& rows) {
  for (const auto& r : rows) {
    nlohmann::json j;
    j["scheme"] = to_string(r.scheme);
    j["axis"] = r.axis;
    j["axis_value"] = r.axis_value;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["wsr_bits_per_hz"] = r.wsr_bits;
    j["grouping"] = r.artifacts.grouping;
    j["element_phases"] = std::vector<double>(r.artifacts.element_phases.data(),
                                              r.artifacts.element_phases.data() + r.artifacts.element_phases.size());
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index m = 0; m < r.artifacts.W.rows(); ++m) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < r.artifacts.W.cols(); ++k) {
        row.push_back({r.artifacts.W(m, k).real(), r.artifacts.W(m, k).imag()});
      }
      w.push_back(row);
    }
    j["W"] = w;
    out << j.dump() << '\n';
  }
}

}  // namespace iegirs
