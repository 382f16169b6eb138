// SPDX-License-Identifier: Apache-2.0
#include "iegirs/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "iegirs/asymptotics.hpp"
#include "iegirs/beamforming.hpp"
#include "iegirs/harness.hpp"
#include "iegirs/oracles.hpp"
#include "iegirs/parallel.hpp"
#include "iegirs/two_stage.hpp"

namespace iegirs::validation {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

ComplexMatrix random_cmatrix(Eigen::Index r, Eigen::Index c, Rng& rng) { return standard_complex_normal(r, c, rng); }

// ---------------------------------------------------------------------------

void special_functions(Outcome& o, const CriteriaOptions&) {
  double worst = 0.0;
  for (double x : {0.0, 0.1, 1.0, 10.0, 1e4}) {
    const double ref = static_cast<double>(oracle::laguerre_half_series(x));
    worst = std::max(worst, rel(laguerre_half(x), ref));
  }
  const bool exact_zero = laguerre_half(0.0) == 1.0;
  o.pass = worst <= 1e-8 && exact_zero;
  o.detail << "max rel err " << fmt("%.2e", worst) << " (tol 1e-8), L(0) == 1: " << (exact_zero ? "yes" : "no");
}

void ungrouped_gain(Outcome& o, const CriteriaOptions& opt) {
  double worst = 0.0;
  for (double k : {0.0, 1.0, 10.0}) {
    const GainEstimate g = uirs_gain_monte_carlo(4096, k, k, 100, 0x1001 + static_cast<std::uint64_t>(k), opt.threads);
    worst = std::max(worst, g.relative_error());
    o.detail << "k=" << k << ": " << fmt("%.4f", g.empirical) << " vs " << fmt("%.4f", g.closed_form) << "; ";
  }
  o.pass = worst <= 0.05;
  o.detail << "max rel err " << fmt("%.3f", worst) << " (tol 0.05)";
}

void group_law(Outcome& o, const CriteriaOptions& opt) {
  const AsymptoticInputs in = AsymptoticInputs::make(4 * 2048, 4, 10.0, 10.0);
  const Lemma1Report r = validate_lemma1_monte_carlo(in, 2000, 0x2002, 0.70710678118654752440, opt.threads);
  o.pass = r.pass;
  o.detail << "modulus err " << fmt("%.4f", r.max_modulus_error) << ", phase err " << fmt("%.4f", r.max_phase_error)
           << " rad, variance err " << fmt("%.4f", r.max_variance_error) << ", kurtosis " << fmt("%.3f", r.kurtosis);
}

void scaling_laws(Outcome& o, const CriteriaOptions& opt) {
  const std::vector<double> ns{256, 1024, 4096, 16384};
  for (std::size_t q : {std::size_t{4}, std::size_t{1}}) {
    std::vector<double> gains;
    for (double n : ns) {
      const AsymptoticInputs in = AsymptoticInputs::make(static_cast<std::size_t>(n), q, 10.0, 10.0);
      gains.push_back(grouped_gain_monte_carlo(in, 50, 0x3003 + static_cast<std::uint64_t>(n), 0.70710678118654752440,
                                               opt.threads)
                          .empirical);
    }
    const double slope = loglog_slope(ns, gains);
    const double target = q == 1 ? 1.0 : 2.0;
    const bool ok = std::abs(slope - target) <= 0.1;
    o.pass = o.pass && ok;
    o.detail << (q == 1 ? "; " : "") << "Q=" << q << " slope " << fmt("%.4f", slope) << " (target " << target << " +- 0.1)";
  }
}

void group_gap(Outcome& o, const CriteriaOptions&) {
  const double g2 = 1.0 - std::pow(group_shrink_factor(2), 2);
  const double g4 = 1.0 - std::pow(group_shrink_factor(4), 2);
  const double r2 = std::round(g2 * 1000.0) / 1000.0;
  const double r4 = std::round(g4 * 1000.0) / 1000.0;
  o.pass = std::abs(r2 - 0.595) < 1e-12 && std::abs(r4 - 0.189) < 1e-12;
  o.detail << "Q=2: " << fmt("%.5f", g2) << ", Q=4: " << fmt("%.5f", g4) << " (expected 0.595, 0.189)";
}

void loss_identity(Outcome& o, const CriteriaOptions&) {
  double worst = 0.0;
  const std::size_t q_inf = 10000;
  for (double k : {1.0, 10.0, 100.0}) {
    for (double mu : {100.0, 1000.0, 10000.0}) {
      const auto n = static_cast<std::size_t>(mu) * q_inf;
      const AsymptoticInputs in = AsymptoticInputs::make(n, q_inf, k, k);
      const double ratio = ieg_gain(in) / uirs_gain(n, in);
      worst = std::max(worst, std::abs(performance_loss(k, k, mu) - (1.0 - ratio)));
    }
  }
  const double loss = performance_loss(100.0, 100.0, 1e4);
  o.pass = worst <= 1e-3 && loss < 0.05;
  o.detail << "max |L - (1 - ratio)| " << fmt("%.2e", worst) << " (tol 1e-3), L(100, 1e4) = " << fmt("%.4f", loss);
}

void fp_closed_forms(Outcome& o, const CriteriaOptions&) {
  Rng rng(0x7007);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  double worst_xi = 0.0;
  double worst_s_oracle = 0.0;
  double worst_identity = 0.0;
  for (int inst = 0; inst < 1000; ++inst) {
    const int m = dim(rng);
    const int k = dim(rng);
    const ComplexMatrix H = random_cmatrix(m, k, rng);
    const PrecodingMatrix W(random_cmatrix(m, k, rng), 1.0);
    const double sigma2 = u(rng);
    std::vector<double> w(static_cast<std::size_t>(k));
    for (auto& x : w) x = u(rng);
    const FPAuxiliaries aux = update_auxiliaries(H, W, sigma2, w);
    const ComplexMatrix G = H.adjoint() * W.w();
    const RealVector gamma = sinr_all(H, W, sigma2);
    for (int j = 0; j < k; ++j) {
      const double chi = G.row(j).squaredNorm() + sigma2;
      const double alpha = std::sqrt(w[static_cast<std::size_t>(j)] * (1.0 + aux.varsigma[j]));
      const cplx xi_ref = oracle::maximize_xi(alpha, G(j, j), chi);
      worst_xi = std::max(worst_xi, std::abs(xi_ref - aux.xi[j]) / std::max(std::abs(aux.xi[j]), 1e-300));
      const double s_ref = oracle::maximize_varsigma(w[static_cast<std::size_t>(j)], aux.xi[j], G(j, j));
      worst_s_oracle = std::max(worst_s_oracle, std::abs(s_ref - aux.varsigma[j]) / std::max(aux.varsigma[j], 1e-3));
      worst_identity = std::max(worst_identity, rel(aux.varsigma[j], gamma[j]));
    }
  }
  o.pass = worst_xi <= 1e-6 && worst_s_oracle <= 1e-6 && worst_identity <= 1e-10;
  o.detail << "xi vs 2-D oracle " << fmt("%.2e", worst_xi) << ", varsigma vs 1-D oracle " << fmt("%.2e", worst_s_oracle)
           << " (tol 1e-6); varsigma = SINR " << fmt("%.2e", worst_identity) << " (tol 1e-10)";
}

void precoder_update(Outcome& o, const CriteriaOptions&) {
  Rng rng(0x8008);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  int infeasible = 0;
  int binding = 0;
  double worst_binding = 0.0;
  int regressions = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int m = dim(rng);
    const int k = dim(rng);
    const ComplexMatrix H = random_cmatrix(m, k, rng);
    // Scaling spans slack and binding budgets.
    const double p_max = std::pow(10.0, -2.0 + 4.0 * (u(rng) - 0.1) / 1.9);
    std::vector<double> w(static_cast<std::size_t>(k));
    for (auto& x : w) x = u(rng);
    PrecodingMatrix prev(random_cmatrix(m, k, rng), p_max);
    prev = PrecodingMatrix(prev.w() * std::sqrt(p_max * 0.9 / prev.power()), p_max);
    const FPAuxiliaries aux = update_auxiliaries(H, prev, u(rng), w);
    const PrecoderUpdate up = update_precoder(aux, H, w, p_max);
    if (!up.W.feasible(1e-12)) ++infeasible;
    if (up.lambda > 0.0) {
      ++binding;
      worst_binding = std::max(worst_binding, std::abs(up.W.power() - p_max) / p_max);
    }
    const double f_new = precoder_objective(aux, H, w, up.W.w());
    const double f_old = precoder_objective(aux, H, w, prev.w());
    if (f_new < f_old - 1e-12 * std::max(std::abs(f_old), 1.0)) ++regressions;
  }

  // Scalar case against a magnitude-phase grid.
  double worst_grid_excess = 0.0;
  int grid_below = 0;
  for (int inst = 0; inst < 40; ++inst) {
    const ComplexMatrix h = random_cmatrix(1, 1, rng);
    const PrecodingMatrix w0(random_cmatrix(1, 1, rng), 1.0);
    const double p_max = u(rng);
    const std::vector<double> wt{u(rng)};
    const FPAuxiliaries aux = update_auxiliaries(h, w0, u(rng), wt);
    const PrecoderUpdate up = update_precoder(aux, h, wt, p_max);
    const double ours = precoder_objective(aux, h, wt, up.W.w());
    const cplx zeta = std::sqrt(wt[0] * (1.0 + aux.varsigma[0])) * aux.xi[0] * h(0, 0);
    const double l = std::norm(aux.xi[0]) * std::norm(h(0, 0));
    const int mags = 2000;
    const int phases = 720;
    const double grid = oracle::scalar_precoder_grid(zeta, l, p_max, mags, phases);
    const double dr = std::sqrt(p_max) / mags;
    const double tol = 2.0 * std::abs(zeta) * dr + 2.0 * l * std::sqrt(p_max) * dr +
                       2.0 * std::abs(zeta) * std::sqrt(p_max) * (1.0 - std::cos(kPi / phases));
    if (ours < grid - 1e-12 * std::max(std::abs(grid), 1.0)) ++grid_below;
    worst_grid_excess = std::max(worst_grid_excess, (ours - grid) / std::max(tol, 1e-300));
  }
  o.pass = infeasible == 0 && worst_binding <= 1e-6 && regressions == 0 && grid_below == 0 && worst_grid_excess <= 1.0;
  o.detail << "infeasible " << infeasible << "/500, binding cases " << binding << " with max power gap "
           << fmt("%.2e", worst_binding) << " (tol 1e-6), objective regressions " << regressions
           << ", scalar grid: below grid " << grid_below << ", excess/resolution " << fmt("%.3f", worst_grid_excess);
}

RcvSubproblem random_rcv_instance(int q, Rng& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const int m = dim(rng);
  const int k = dim(rng);
  std::vector<ComplexMatrix> C;
  std::vector<ComplexVector> hbu;
  for (int i = 0; i < k; ++i) {
    C.push_back(random_cmatrix(q, m, rng));
    hbu.push_back(random_cmatrix(m, 1, rng).col(0));
  }
  const PrecodingMatrix W(random_cmatrix(m, k, rng), 1.0);
  FPAuxiliaries aux{RealVector(k), ComplexVector(k)};
  for (int i = 0; i < k; ++i) {
    aux.varsigma[i] = u(rng);
    aux.xi[i] = random_cmatrix(1, 1, rng)(0, 0);
  }
  const std::vector<double> w(static_cast<std::size_t>(k), 1.0);
  return build_rcv_subproblem(W, aux, C, hbu, w);
}

ReflectionVector random_phases_rv(int q, Rng& rng) {
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  RealVector p(q);
  for (int i = 0; i < q; ++i) p[i] = ph(rng);
  return ReflectionVector(p);
}

void mm_update(Outcome& o, const CriteriaOptions&) {
  Rng rng(0x9009);
  std::uniform_int_distribution<int> qdim(1, 8);
  double worst_bound = 0.0;
  double worst_tangency = 0.0;
  int decreases = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int q = qdim(rng);
    const RcvSubproblem sub = random_rcv_instance(q, rng);
    const double lmax = max_eigenvalue(sub.U);
    const double scale = std::max(lmax * q, 1.0);
    const ReflectionVector vt = random_phases_rv(q, rng);
    const ComplexVector cvt = vt.coefficients();
    worst_tangency = std::max(worst_tangency,
                              std::abs(mm_surrogate(sub, lmax, cvt, cvt) - std::real(cvt.dot(sub.U * cvt))) / scale);
    for (int p = 0; p < 100; ++p) {
      const ComplexVector v = random_phases_rv(q, rng).coefficients();
      const double gap = mm_surrogate(sub, lmax, v, cvt) - std::real(v.dot(sub.U * v));
      worst_bound = std::max(worst_bound, -gap / scale);
    }
    const MmResult r = run_mm(sub, vt, 200, 0.0);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      if (r.objective_trace[i] < r.objective_trace[i - 1]) ++decreases;
    }
  }

  // Q <= 2 against a phase grid.
  double worst_grid = 0.0;
  for (int inst = 0; inst < 30; ++inst) {
    const int q = inst % 2 == 0 ? 1 : 2;
    const RcvSubproblem sub = random_rcv_instance(q, rng);
    const int points = q == 1 ? 10000 : 256;
    const double grid = oracle::rcv_grid_max(sub.U, sub.phi, points);
    // MM is a local method; start it from a coarse 8-per-axis phase lattice.
    double ours = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < (q == 1 ? 1 : 64); ++s) {
      RealVector start(q);
      start[0] = 2.0 * kPi * (s % 8) / 8.0;
      if (q == 2) start[1] = 2.0 * kPi * (s / 8) / 8.0;
      ours = std::max(ours, run_mm(sub, ReflectionVector(start), 500, 0.0).objective_trace.back());
    }
    // Grid points are within pi/points of the optimum on every axis.
    double lipschitz = 0.0;
    for (int i = 0; i < q; ++i) lipschitz += 2.0 * (sub.U.row(i).cwiseAbs().sum() + std::abs(sub.phi[i]));
    const double tol = lipschitz * kPi / points;
    worst_grid = std::max(worst_grid, std::abs(ours - grid) / tol);
  }
  o.pass = worst_bound <= 1e-10 && worst_tangency <= 1e-10 && decreases == 0 && worst_grid <= 1.0;
  o.detail << "bound violation " << fmt("%.2e", worst_bound) << ", tangency gap " << fmt("%.2e", worst_tangency)
           << " (tol 1e-10), inner decreases " << decreases << ", |MM - grid|/resolution " << fmt("%.3f", worst_grid);
}

void monotone_convergence(Outcome& o, const CriteriaOptions& opt) {
  ScenarioConfig cfg;
  int bad_trace = 0;
  int unconverged = 0;
  int max_iter = 0;
  std::vector<int> failures(20, 0);
  std::vector<int> iters(20, 0);
  std::vector<int> conv(20, 0);
  parallel_for(20, opt.threads, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.master_seed, t));
    const ChannelSet ch = build_scenario(cfg, rng);
    const TwoStageResult r = two_stage_solve(ch, cfg.Q, cfg.user_weights(), cfg.power_watts(), cfg.solver);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      if (r.trace[i] < r.trace[i - 1] - 1e-8 * std::abs(r.trace[i - 1])) failures[t] = 1;
    }
    iters[t] = r.iterations;
    conv[t] = r.converged ? 1 : 0;
  });
  for (int t = 0; t < 20; ++t) {
    bad_trace += failures[static_cast<std::size_t>(t)];
    unconverged += 1 - conv[static_cast<std::size_t>(t)];
    max_iter = std::max(max_iter, iters[static_cast<std::size_t>(t)]);
  }
  o.pass = bad_trace == 0 && unconverged == 0;
  o.detail << "non-monotone traces " << bad_trace << "/20, unconverged " << unconverged << "/20, max outer iterations "
           << max_iter;
}

double mean_of(const SweepReport& rep, SchemeId s, double axis_value) {
  for (const auto& a : rep.aggregates) {
    if (a.scheme == s && a.axis_value == axis_value) return a.mean;
  }
  throw std::logic_error("missing aggregate");
}

void trends(Outcome& o, const CriteriaOptions& opt) {
  ScenarioConfig cfg;
  cfg.threads = opt.threads;
  const SweepReport rep = run_monte_carlo(cfg);
  if (rep.failure) throw std::runtime_error(*rep.failure);
  const double ieg = mean_of(rep, SchemeId::ieg, 0.0);
  const double aeg = mean_of(rep, SchemeId::aeg, 0.0);
  const double rnd = mean_of(rep, SchemeId::random_rcv, 0.0);
  const double none = mean_of(rep, SchemeId::no_irs, 0.0);
  std::vector<double> ieg_t(cfg.trials, 0.0);
  std::vector<double> aeg_t(cfg.trials, 0.0);
  for (const auto& r : rep.rows) {
    if (r.scheme == SchemeId::ieg) ieg_t[r.trial] = r.wsr_bits;
    if (r.scheme == SchemeId::aeg) aeg_t[r.trial] = r.wsr_bits;
  }
  std::size_t wins = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) wins += ieg_t[t] > aeg_t[t] ? 1 : 0;
  const bool ordering = ieg > aeg && aeg > rnd && rnd > none;
  const bool paired = static_cast<double>(wins) >= 0.9 * static_cast<double>(cfg.trials);

  ScenarioConfig ecfg = cfg;
  ecfg.schemes = {SchemeId::ieg};
  const std::vector<double> ns{256, 1024, 4096};
  const SweepReport erep = sweep(SweepAxis::elements, ns, ecfg);
  if (erep.failure) throw std::runtime_error(*erep.failure);
  std::vector<double> m;
  for (double n : ns) m.push_back(mean_of(erep, SchemeId::ieg, n));
  const bool growing = m[0] < m[1] && m[1] < m[2];

  o.pass = ordering && paired && growing;
  o.detail << "means IEG " << fmt("%.3f", ieg) << " > AEG " << fmt("%.3f", aeg) << " > random " << fmt("%.3f", rnd)
           << " > none " << fmt("%.3f", none) << (ordering ? " holds" : " violated") << "; IEG > AEG in " << wins
           << "/" << cfg.trials << " trials; IEG over N=256/1024/4096: " << fmt("%.3f", m[0]) << ", "
           << fmt("%.3f", m[1]) << ", " << fmt("%.3f", m[2]);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Outcome& o, const CriteriaOptions& opt) {
  ScenarioConfig cfg;
  cfg.trials = 3;
  cfg.threads = opt.threads;
  std::ostringstream a;
  std::ostringstream b;
  write_trials_csv(a, run_monte_carlo(cfg).rows);
  write_trials_csv(b, run_monte_carlo(cfg).rows);
  const bool library_ok = a.str() == b.str() && !a.str().empty();
  o.detail << "library CSV " << (library_ok ? "identical" : "DIFFERS") << " (" << a.str().size() << " bytes)";
  bool cli_ok = true;
  if (!opt.cli_path.empty()) {
    const std::string f1 = opt.work_dir + "/determinism_a.csv";
    const std::string f2 = opt.work_dir + "/determinism_b.csv";
    const std::string base = "\"" + opt.cli_path + "\" simulate --trials 3 --seed 7 --out ";
    const int r1 = std::system((base + "\"" + f1 + "\" 2>/dev/null").c_str());
    const int r2 = std::system((base + "\"" + f2 + "\" 2>/dev/null").c_str());
    const std::string s1 = slurp(f1);
    cli_ok = r1 == 0 && r2 == 0 && !s1.empty() && s1 == slurp(f2);
    o.detail << "; CLI simulate CSV " << (cli_ok ? "identical" : "DIFFERS or failed") << " (" << s1.size() << " bytes)";
  }
  o.pass = library_ok && cli_ok;
}

struct Entry {
  const char* title;
  std::function<void(Outcome&, const CriteriaOptions&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"special-function oracle", special_functions},
      {"ungrouped gain Monte Carlo", ungrouped_gain},
      {"combined-cascade distribution", group_law},
      {"grouped gain scaling laws", scaling_laws},
      {"group-gap constants", group_gap},
      {"performance-loss identity", loss_identity},
      {"auxiliary closed forms", fp_closed_forms},
      {"precoder update", precoder_update},
      {"MM reflection update", mm_update},
      {"monotone two-stage convergence", monotone_convergence},
      {"desk-scale WSR trends", trends},
      {"end-to-end determinism", determinism},
  };
  return entries;
}

}  // namespace

CriterionResult run_criterion(int id, const CriteriaOptions& options) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("run_criterion: id must be 1..12");
  const Entry& e = registry()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    e.run(o, options);
    r.pass = o.pass;
    r.detail = o.detail.str();
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = o.detail.str() + " error: " + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_criteria(const CriteriaOptions& options, const std::vector<int>& ids) {
  std::vector<int> list = ids;
  if (list.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) list.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : list) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + "  " + (r.id < 10 ? " " : "") + std::to_string(r.id) + "  " +
         r.title + ": " + r.detail + buf;
}

}  // namespace iegirs::validation
