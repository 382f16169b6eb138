// SPDX-License-Identifier: Apache-2.0
#include "iegirs/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace iegirs {

GroupingMatrix GroupingMatrix::from_one_based(const std::vector<long long>& labels, std::size_t groups) {
  std::vector<std::size_t> a(labels.size());
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n] < 1) throw std::invalid_argument("GroupingMatrix: group labels start at 1");
    a[n] = static_cast<std::size_t>(labels[n] - 1);
  }
  return GroupingMatrix(std::move(a), groups);
}

std::vector<long long> GroupingMatrix::one_based() const {
  std::vector<long long> out(assignment_.size());
  for (std::size_t n = 0; n < assignment_.size(); ++n) out[n] = static_cast<long long>(assignment_[n]) + 1;
  return out;
}

std::vector<std::size_t> GroupingMatrix::group_sizes() const {
  std::vector<std::size_t> sizes(groups_, 0);
  for (std::size_t q : assignment_) {
    if (q < groups_) ++sizes[q];
  }
  return sizes;
}

Eigen::MatrixXd GroupingMatrix::dense() const {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(groups_),
                                            static_cast<Eigen::Index>(assignment_.size()));
  for (std::size_t n = 0; n < assignment_.size(); ++n) {
    if (assignment_[n] < groups_) G(static_cast<Eigen::Index>(assignment_[n]), static_cast<Eigen::Index>(n)) = 1.0;
  }
  return G;
}

namespace {

GroupingReport violation(GroupingReport::Violation v, std::size_t group, std::size_t element, std::string msg) {
  return {v, group, element, std::move(msg)};
}

}  // namespace

GroupingReport validate(const GroupingMatrix& g) {
  for (std::size_t n = 0; n < g.elements(); ++n) {
    if (g.group_of(n) >= g.groups()) {
      return violation(GroupingReport::Violation::column_sum, 0, n + 1,
                       "element " + std::to_string(n + 1) + " is assigned to group " +
                           std::to_string(g.group_of(n) + 1) + " > Q = " + std::to_string(g.groups()));
    }
  }
  const auto sizes = g.group_sizes();
  for (std::size_t q = 0; q < sizes.size(); ++q) {
    if (sizes[q] == 0) {
      return violation(GroupingReport::Violation::empty_group, q + 1, 0, "group " + std::to_string(q + 1) + " is empty");
    }
  }
  return {};
}

GroupingReport validate(const Eigen::MatrixXd& G) {
  for (Eigen::Index n = 0; n < G.cols(); ++n) {
    for (Eigen::Index q = 0; q < G.rows(); ++q) {
      if (G(q, n) != 0.0 && G(q, n) != 1.0) {
        return violation(GroupingReport::Violation::not_binary, static_cast<std::size_t>(q) + 1,
                         static_cast<std::size_t>(n) + 1,
                         "entry (" + std::to_string(q + 1) + ", " + std::to_string(n + 1) + ") is not binary");
      }
    }
  }
  for (Eigen::Index n = 0; n < G.cols(); ++n) {
    if (G.col(n).sum() != 1.0) {
      return violation(GroupingReport::Violation::column_sum, 0, static_cast<std::size_t>(n) + 1,
                       "column " + std::to_string(n + 1) + " does not sum to 1");
    }
  }
  for (Eigen::Index q = 0; q < G.rows(); ++q) {
    if (G.row(q).sum() < 1.0) {
      return violation(GroupingReport::Violation::empty_group, static_cast<std::size_t>(q) + 1, 0,
                       "group " + std::to_string(q + 1) + " is empty");
    }
  }
  return {};
}

boost::multiprecision::cpp_int count_groupings(std::size_t n, std::size_t q) {
  using boost::multiprecision::cpp_int;
  if (q == 0) return n == 0 ? 1 : 0;
  if (n < q) return 0;
  // Inclusion-exclusion: sum_i (-1)^i C(q, i) (q - i)^n, divided by q!.
  cpp_int sum = 0;
  cpp_int binom = 1;
  for (std::size_t i = 0; i <= q; ++i) {
    const cpp_int term = binom * boost::multiprecision::pow(cpp_int(q - i), static_cast<unsigned>(n));
    sum += (i % 2 == 0) ? term : cpp_int(-term);
    binom = binom * (q - i) / (i + 1);
  }
  cpp_int fact = 1;
  for (std::size_t i = 2; i <= q; ++i) fact *= i;
  return sum / fact;
}

namespace {

double circular_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

GroupingOutcome arc_partition(const std::vector<double>& t, std::size_t groups) {
  const std::size_t n = t.size();
  if (groups == 0 || n < groups) throw std::invalid_argument("arc_partition: need N >= Q >= 1");
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = static_cast<std::size_t>(std::floor(static_cast<double>(groups) * t[i]));
    a[i] = std::min(q, groups - 1);
  }
  GroupingOutcome out{GroupingMatrix(std::move(a), groups), 0};
  auto sizes = out.grouping.group_sizes();
  for (std::size_t q = 0; q < groups; ++q) {
    while (sizes[q] == 0) {
      const double centre = (static_cast<double>(q) + 0.5) / static_cast<double>(groups);
      std::size_t pick = n;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t from = out.grouping.group_of(i);
        if (sizes[from] <= 1) continue;
        const double gap = circular_gap(t[i], centre);
        if (gap < best) {
          best = gap;
          pick = i;
        }
      }
      const std::size_t from = out.grouping.group_of(pick);
      --sizes[from];
      ++sizes[q];
      out.grouping.assign(pick, q);
      ++out.repairs;
    }
  }
  return out;
}

GroupingOutcome arc_partition_from_phases(const std::vector<double>& phases, std::size_t groups) {
  std::vector<double> t(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) t[i] = frac(-phases[i] / (2.0 * kPi));
  return arc_partition(t, groups);
}

GroupingOutcome phase_partition_grouping(double delta, std::size_t n, std::size_t groups) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = frac(static_cast<double>(i) * delta);
  return arc_partition(t, groups);
}

namespace {

std::vector<double> centroids_of(const std::vector<double>& phases, const GroupingMatrix& g,
                                 const std::vector<double>& previous) {
  std::vector<cplx> sums(g.groups(), cplx(0.0));
  for (std::size_t i = 0; i < phases.size(); ++i) sums[g.group_of(i)] += std::polar(1.0, phases[i]);
  std::vector<double> c(g.groups());
  for (std::size_t q = 0; q < g.groups(); ++q) {
    // A vanishing resultant makes every direction optimal.
    c[q] = std::abs(sums[q]) > 1e-12 ? std::arg(sums[q]) : (q < previous.size() ? previous[q] : 0.0);
  }
  return c;
}

struct LloydRun {
  GroupingMatrix grouping;
  std::size_t repairs = 0;
  std::vector<double> trace;
  int iterations = 0;
};

LloydRun lloyd(const std::vector<double>& phases, GroupingMatrix g, std::vector<double> centroids, int max_iterations) {
  LloydRun run;
  const std::size_t n = phases.size();
  const std::size_t groups = g.groups();
  run.trace.push_back(circular_cluster_cost(phases, g));
  for (int it = 0; it < max_iterations; ++it) {
    centroids = centroids_of(phases, g, centroids);
    std::vector<std::size_t> a(n);
    std::vector<double> cost(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Keep the current group on ties so a fixed point is not left.
      std::size_t best_q = g.group_of(i);
      double best = 1.0 - std::cos(phases[i] - centroids[best_q]);
      for (std::size_t q = 0; q < groups; ++q) {
        const double d = 1.0 - std::cos(phases[i] - centroids[q]);
        if (d < best - 1e-15) {
          best = d;
          best_q = q;
        }
      }
      a[i] = best_q;
      cost[i] = best;
    }
    GroupingMatrix next(std::move(a), groups);
    auto sizes = next.group_sizes();
    for (std::size_t q = 0; q < groups; ++q) {
      if (sizes[q] != 0) continue;
      std::size_t pick = n;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[next.group_of(i)] <= 1) continue;
        if (cost[i] > worst) {
          worst = cost[i];
          pick = i;
        }
      }
      --sizes[next.group_of(pick)];
      ++sizes[q];
      next.assign(pick, q);
      cost[pick] = 0.0;
      centroids[q] = phases[pick];
      ++run.repairs;
    }
    ++run.iterations;
    const bool stable = next == g;
    g = std::move(next);
    run.trace.push_back(circular_cluster_cost(phases, g));
    if (stable) break;
  }
  run.grouping = std::move(g);
  return run;
}

GroupingMatrix nearest_centroid(const std::vector<double>& phases, const std::vector<double>& centroids) {
  std::vector<std::size_t> a(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    std::size_t best_q = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < centroids.size(); ++q) {
      const double d = 1.0 - std::cos(phases[i] - centroids[q]);
      if (d < best) {
        best = d;
        best_q = q;
      }
    }
    a[i] = best_q;
  }
  return GroupingMatrix(std::move(a), centroids.size());
}

}  // namespace

double circular_cluster_cost(const std::vector<double>& phases, const GroupingMatrix& g) {
  std::vector<cplx> sums(g.groups(), cplx(0.0));
  std::vector<double> counts(g.groups(), 0.0);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    sums[g.group_of(i)] += std::polar(1.0, phases[i]);
    counts[g.group_of(i)] += 1.0;
  }
  // min over the centroid of sum (1 - cos) is count - |resultant|.
  double cost = 0.0;
  for (std::size_t q = 0; q < g.groups(); ++q) cost += counts[q] - std::abs(sums[q]);
  return cost;
}

KnnOutcome circular_knn_grouping(const std::vector<double>& phases, std::size_t groups, Rng& rng, int restarts,
                                 int max_iterations) {
  const std::size_t n = phases.size();
  if (groups == 0 || n < groups) throw std::invalid_argument("circular_knn_grouping: need N >= Q >= 1");

  GroupingOutcome arc = arc_partition_from_phases(phases, groups);
  LloydRun best = lloyd(phases, arc.grouping, centroids_of(phases, arc.grouping, {}), max_iterations);
  best.repairs += arc.repairs;
  double best_cost = best.trace.back();

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> centroids{phases[pick(rng)]};
    while (centroids.size() < groups) {
      std::vector<double> d(n);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (double c : centroids) m = std::min(m, 1.0 - std::cos(phases[i] - c));
        d[i] = m;
        total += m;
      }
      std::size_t chosen = pick(rng);
      if (total > 0.0) {
        double u = unit(rng) * total;
        for (std::size_t i = 0; i < n; ++i) {
          u -= d[i];
          if (u <= 0.0) {
            chosen = i;
            break;
          }
        }
      }
      centroids.push_back(phases[chosen]);
    }
    LloydRun run = lloyd(phases, nearest_centroid(phases, centroids), centroids, max_iterations);
    if (run.trace.back() < best_cost - 1e-12) {
      best_cost = run.trace.back();
      best = std::move(run);
    }
  }
  KnnOutcome out;
  out.grouping = std::move(best.grouping);
  out.repairs = best.repairs;
  out.objective = best_cost;
  out.objective_trace = std::move(best.trace);
  out.iterations = best.iterations;
  return out;
}

GroupingMatrix adjacent_grouping(std::size_t n, std::size_t groups) {
  if (groups == 0 || n < groups) throw std::invalid_argument("adjacent_grouping: need N >= Q >= 1");
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = (i * groups) / n;
  return GroupingMatrix(std::move(a), groups);
}

GroupingMatrix identity_grouping(std::size_t n) {
  std::vector<std::size_t> a(n);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return GroupingMatrix(std::move(a), n);
}

ComplexMatrix combine_cascade(const GroupingMatrix& g, const ComplexMatrix& C) {
  if (static_cast<std::size_t>(C.rows()) != g.elements()) {
    throw std::invalid_argument("combine_cascade: cascade has " + std::to_string(C.rows()) + " rows, grouping has " +
                                std::to_string(g.elements()) + " elements");
  }
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(g.groups()), C.cols());
  for (std::size_t n = 0; n < g.elements(); ++n) {
    out.row(static_cast<Eigen::Index>(g.group_of(n))) += C.row(static_cast<Eigen::Index>(n));
  }
  return out;
}

ComplexVector combine_cascade(const GroupingMatrix& g, const ComplexVector& c) {
  return combine_cascade(g, ComplexMatrix(c)).col(0);
}

// ---------------------------------------------------------------------------
// Beam-domain grouping

namespace {

// z_kj = v^H G C_k w_j is linear in G through y = G^T conj(v): z = B^T y with
// column k*K + j of B equal to C_k w_j.
struct QpCache {
  Eigen::Index N = 0;
  Eigen::Index K = 0;
  Eigen::Index Q = 0;
  ComplexMatrix B;
  ComplexVector D;  // h_bu_k^H w_j
  RealVector alpha;
  RealVector xi2;
  ComplexVector xi;
  ComplexVector vconj;

  explicit QpCache(const GroupingProblem& p) {
    K = static_cast<Eigen::Index>(p.C_bar.size());
    if (K == 0) throw std::invalid_argument("grouping problem: no users");
    N = p.C_bar[0].rows();
    Q = p.v_bar.size();
    if (p.w_bar.cols() != K || static_cast<Eigen::Index>(p.h_bu_bar.size()) != K ||
        static_cast<Eigen::Index>(p.weights.size()) != K || p.aux.xi.size() != K || p.aux.varsigma.size() != K) {
      throw std::invalid_argument("grouping problem: per-user inputs are not dimensioned consistently");
    }
    B.resize(N, K * K);
    D.resize(K * K);
    for (Eigen::Index k = 0; k < K; ++k) {
      if (p.C_bar[static_cast<std::size_t>(k)].rows() != N || p.C_bar[static_cast<std::size_t>(k)].cols() != p.w_bar.rows()) {
        throw std::invalid_argument("grouping problem: cascade dimensions differ across users");
      }
      for (Eigen::Index j = 0; j < K; ++j) {
        B.col(k * K + j) = p.C_bar[static_cast<std::size_t>(k)] * p.w_bar.col(j);
        D[k * K + j] = p.h_bu_bar[static_cast<std::size_t>(k)].dot(p.w_bar.col(j));
      }
    }
    alpha.resize(K);
    xi2.resize(K);
    xi = p.aux.xi;
    for (Eigen::Index k = 0; k < K; ++k) {
      alpha[k] = std::sqrt(p.weights[static_cast<std::size_t>(k)] * (1.0 + p.aux.varsigma[k]));
      xi2[k] = std::norm(p.aux.xi[k]);
    }
    vconj = p.v_bar.conjugate();
  }

  ComplexVector z_dense(const Eigen::MatrixXd& G) const {
    const ComplexVector y = G.transpose().cast<cplx>() * vconj;
    return B.transpose() * y;
  }

  ComplexVector z_binary(const GroupingMatrix& g) const {
    ComplexVector y(N);
    for (Eigen::Index n = 0; n < N; ++n) y[n] = vconj[static_cast<Eigen::Index>(g.group_of(static_cast<std::size_t>(n)))];
    return B.transpose() * y;
  }

  double objective(const ComplexVector& z) const {
    double f = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      f += 2.0 * alpha[k] * std::real(std::conj(xi[k]) * z[k * K + k]);
      for (Eigen::Index j = 0; j < K; ++j) f -= xi2[k] * std::norm(z[k * K + j] + D[k * K + j]);
    }
    return f;
  }

  Eigen::MatrixXd gradient(const ComplexVector& z) const {
    ComplexVector coef(K * K);
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index j = 0; j < K; ++j) coef[k * K + j] = -2.0 * xi2[k] * std::conj(z[k * K + j] + D[k * K + j]);
      coef[k * K + k] += 2.0 * alpha[k] * std::conj(xi[k]);
    }
    const ComplexVector r = B * coef;
    return (vconj * r.transpose()).real();
  }
};

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& G) {
  Eigen::MatrixXd out(G.rows(), G.cols());
  for (Eigen::Index n = 0; n < G.cols(); ++n) out.col(n) = project_simplex(G.col(n));
  return out;
}

Eigen::MatrixXd normalized_columns(const Eigen::MatrixXd& G) {
  Eigen::MatrixXd out = G;
  for (Eigen::Index n = 0; n < G.cols(); ++n) {
    const double nn = G.col(n).norm();
    if (nn > 0.0) out.col(n) /= nn;
  }
  return out;
}

void polish(const QpCache& c, GroupingMatrix& g, int max_sweeps) {
  auto sizes = g.group_sizes();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    ComplexVector z = c.z_binary(g);
    double f = c.objective(z);
    bool improved = false;
    for (Eigen::Index n = 0; n < c.N; ++n) {
      const std::size_t from = g.group_of(static_cast<std::size_t>(n));
      if (sizes[from] <= 1) continue;
      const Eigen::RowVectorXcd row = c.B.row(n);
      std::size_t best_q = from;
      double best_f = f;
      ComplexVector best_z;
      for (Eigen::Index q = 0; q < c.Q; ++q) {
        if (static_cast<std::size_t>(q) == from) continue;
        const cplx step = c.vconj[q] - c.vconj[static_cast<Eigen::Index>(from)];
        ComplexVector zn = z + step * row.transpose();
        const double fn = c.objective(zn);
        if (fn > best_f + 1e-12 * std::max(std::abs(best_f), 1e-300)) {
          best_f = fn;
          best_q = static_cast<std::size_t>(q);
          best_z = std::move(zn);
        }
      }
      if (best_q != from) {
        --sizes[from];
        ++sizes[best_q];
        g.assign(static_cast<std::size_t>(n), best_q);
        z = std::move(best_z);
        f = best_f;
        improved = true;
      }
    }
    if (!improved) break;
  }
}

}  // namespace

RealVector project_simplex(const RealVector& x) {
  const Eigen::Index n = x.size();
  std::vector<double> s(x.data(), x.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += s[static_cast<std::size_t>(i)];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (s[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

double grouping_objective(const GroupingProblem& p, const GroupingMatrix& g) {
  const QpCache c(p);
  if (static_cast<Eigen::Index>(g.elements()) != c.N || static_cast<Eigen::Index>(g.groups()) != c.Q) {
    throw std::invalid_argument("grouping_objective: grouping does not match the problem dimensions");
  }
  return c.objective(c.z_binary(g));
}

double grouping_objective(const GroupingProblem& p, const Eigen::MatrixXd& G) {
  const QpCache c(p);
  if (G.cols() != c.N || G.rows() != c.Q) {
    throw std::invalid_argument("grouping_objective: relaxed matrix does not match the problem dimensions");
  }
  return c.objective(c.z_dense(G));
}

QpOutcome relaxed_qp_grouping(const GroupingProblem& p, std::size_t groups, const QpOptions& opt) {
  const QpCache c(p);
  if (static_cast<std::size_t>(c.Q) != groups) {
    throw std::invalid_argument("relaxed_qp_grouping: v_bar has " + std::to_string(c.Q) + " entries, Q = " +
                                std::to_string(groups));
  }
  if (groups == 0 || static_cast<std::size_t>(c.N) < groups) {
    throw std::invalid_argument("relaxed_qp_grouping: need N >= Q >= 1");
  }
  const double rho = opt.regularization;
  QpOutcome out;

  Eigen::MatrixXd G = Eigen::MatrixXd::Constant(c.Q, c.N, 1.0 / static_cast<double>(groups));
  auto relaxed = [&](const Eigen::MatrixXd& X, const Eigen::MatrixXd& Gamma) {
    return c.objective(c.z_dense(X)) + rho * (Gamma.cwiseProduct(X)).sum();
  };

  double step = 0.0;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    const Eigen::MatrixXd Gamma = normalized_columns(G);
    const Eigen::MatrixXd G_start = G;
    std::vector<double> trace{relaxed(G, Gamma)};
    for (int inner = 0; inner < opt.max_inner; ++inner) {
      const Eigen::MatrixXd grad = c.gradient(c.z_dense(G)) + rho * Gamma;
      const double gmax = grad.cwiseAbs().maxCoeff();
      if (!(gmax > 0.0)) break;
      double t = step > 0.0 ? 2.0 * step : 1.0 / gmax;
      const double f0 = trace.back();
      bool accepted = false;
      Eigen::MatrixXd Gn;
      double fn = f0;
      for (int halving = 0; halving < 60; ++halving) {
        Gn = project_columns(G + t * grad);
        const double ascent = grad.cwiseProduct(Gn - G).sum();
        fn = relaxed(Gn, Gamma);
        if (fn >= f0 + 1e-4 * ascent) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      step = t;
      const double moved = (Gn - G).cwiseAbs().maxCoeff();
      G = std::move(Gn);
      trace.push_back(fn);
      if (moved <= opt.tol) break;
    }
    out.inner_traces.push_back(std::move(trace));
    out.outer_iterations = outer + 1;
    if ((G - G_start).cwiseAbs().maxCoeff() <= opt.tol && outer > 0) {
      out.converged = true;
      break;
    }
  }

  // Numerical concavity check of the channel part along random directions.
  {
    Rng probe_rng(0x5eed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double f_mid = c.objective(c.z_dense(G));
    for (int probe = 0; probe < 4; ++probe) {
      Eigen::MatrixXd Dir(c.Q, c.N);
      for (Eigen::Index i = 0; i < Dir.size(); ++i) Dir.data()[i] = normal(probe_rng);
      Dir *= 1e-3 / Dir.norm();
      const double curv = c.objective(c.z_dense(G + Dir)) + c.objective(c.z_dense(G - Dir)) - 2.0 * f_mid;
      if (curv > 1e-9 * std::max(std::abs(f_mid), 1.0)) out.concave = false;
    }
  }

  // Argmax rounding with repair of empty groups by smallest margin.
  std::vector<std::size_t> a(static_cast<std::size_t>(c.N));
  for (Eigen::Index n = 0; n < c.N; ++n) {
    Eigen::Index q;
    G.col(n).maxCoeff(&q);
    a[static_cast<std::size_t>(n)] = static_cast<std::size_t>(q);
  }
  GroupingMatrix rounded(std::move(a), groups);
  auto sizes = rounded.group_sizes();
  for (std::size_t q = 0; q < groups; ++q) {
    if (sizes[q] != 0) continue;
    std::size_t pick = static_cast<std::size_t>(c.N);
    double best_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < c.N; ++n) {
      const std::size_t from = rounded.group_of(static_cast<std::size_t>(n));
      if (sizes[from] <= 1) continue;
      const double margin = G(static_cast<Eigen::Index>(from), n) - G(static_cast<Eigen::Index>(q), n);
      if (margin < best_margin) {
        best_margin = margin;
        pick = static_cast<std::size_t>(n);
      }
    }
    --sizes[rounded.group_of(pick)];
    ++sizes[q];
    rounded.assign(pick, q);
    ++out.repairs;
  }

  std::vector<GroupingMatrix> candidates{rounded, adjacent_grouping(static_cast<std::size_t>(c.N), groups)};
  if (opt.initial) {
    if (opt.initial->elements() != static_cast<std::size_t>(c.N) || opt.initial->groups() != groups ||
        !validate(*opt.initial).ok()) {
      throw std::invalid_argument("relaxed_qp_grouping: initial grouping is not valid for this problem");
    }
    candidates.push_back(*opt.initial);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (opt.polish) polish(c, candidates[i], 50);
    const double f = c.objective(c.z_binary(candidates[i]));
    if (f > best) {
      best = f;
      out.grouping = candidates[i];
      out.fell_back = i != 0;
    }
  }
  out.objective = best;
  return out;
}

}  // namespace iegirs
