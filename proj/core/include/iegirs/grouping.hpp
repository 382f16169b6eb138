// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iegirs/channel.hpp"
#include "iegirs/mathkit.hpp"
#include "iegirs/precoding.hpp"

namespace iegirs {

/// Assignment of N elements to Q groups. Stored 0-based; serialized 1-based.
/// Construction does not validate, so invalid matrices can be represented
/// and reported by validate().
class GroupingMatrix {
 public:
  GroupingMatrix() = default;
  GroupingMatrix(std::vector<std::size_t> assignment, std::size_t groups)
      : assignment_(std::move(assignment)), groups_(groups) {}

  static GroupingMatrix from_one_based(const std::vector<long long>& labels, std::size_t groups);

  std::size_t groups() const { return groups_; }
  std::size_t elements() const { return assignment_.size(); }
  std::size_t group_of(std::size_t n) const { return assignment_[n]; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  void assign(std::size_t n, std::size_t q) { assignment_[n] = q; }

  std::vector<long long> one_based() const;
  std::vector<std::size_t> group_sizes() const;
  /// Binary Q x N matrix.
  Eigen::MatrixXd dense() const;

  bool operator==(const GroupingMatrix&) const = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t groups_ = 0;
};

struct GroupingReport {
  enum class Violation { none, not_binary, column_sum, empty_group };
  Violation violation = Violation::none;
  std::size_t group = 0;    // 1-based where meaningful
  std::size_t element = 0;  // 1-based where meaningful
  std::string message;

  bool ok() const { return violation == Violation::none; }
};

/// Checks binary entries, unit column sums and non-empty rows, in that order.
GroupingReport validate(const GroupingMatrix& grouping);
GroupingReport validate(const Eigen::MatrixXd& dense);

/// Number of partitions of N elements into Q non-empty groups, S(N, Q).
boost::multiprecision::cpp_int count_groupings(std::size_t n, std::size_t q);

struct GroupingOutcome {
  GroupingMatrix grouping;
  std::size_t repairs = 0;
};

/// Equal-arc split of fractional phases in [0, 1): element n joins group
/// floor(Q * t_n), clamped to Q - 1. Empty groups are filled with the
/// nearest-phase elements of groups that can spare one.
GroupingOutcome arc_partition(const std::vector<double>& fractional_phases, std::size_t groups);

/// arc_partition with t_n = frac(-phase_n / 2 pi), so that elements whose
/// complex values point the same way share a group.
GroupingOutcome arc_partition_from_phases(const std::vector<double>& phases, std::size_t groups);

/// t_n = frac(n * delta) for n = 0 .. N-1.
GroupingOutcome phase_partition_grouping(double delta, std::size_t n, std::size_t groups);

struct KnnOutcome {
  GroupingMatrix grouping;
  std::size_t repairs = 0;
  double objective = 0.0;               // sum of 1 - cos(phase - centroid)
  std::vector<double> objective_trace;  // best start, one entry per iteration
  int iterations = 0;
};

/// Lloyd iterations on the unit circle. The first start is the arc partition
/// of the phases; `restarts` further starts use k-means++ seeding from rng.
KnnOutcome circular_knn_grouping(const std::vector<double>& phases, std::size_t groups, Rng& rng,
                                 int restarts = 4, int max_iterations = 100);

/// sum_n 1 - cos(phase_n - centroid of its group).
double circular_cluster_cost(const std::vector<double>& phases, const GroupingMatrix& grouping);

/// Contiguous raster-order blocks; sizes differ by at most one, larger first.
GroupingMatrix adjacent_grouping(std::size_t n, std::size_t groups);
GroupingMatrix identity_grouping(std::size_t n);

/// G * C: Q x M, row q the sum of the rows of C in group q.
ComplexMatrix combine_cascade(const GroupingMatrix& grouping, const ComplexMatrix& C);
ComplexVector combine_cascade(const GroupingMatrix& grouping, const ComplexVector& c);

/// Statistical quantities entering the beam-domain grouping problem.
struct GroupingProblem {
  std::vector<ComplexMatrix> C_bar;     // K of size N x M
  std::vector<ComplexVector> h_bu_bar;  // K of length M
  ComplexMatrix w_bar;                  // M x K
  ComplexVector v_bar;                  // Q unit-modulus coefficients
  FPAuxiliaries aux;
  std::vector<double> weights;
};

/// Beam-domain grouping objective
///   sum_k 2 sqrt(w_k(1+s_k)) Re{xi_k^* v^H G C_k w_k}
///        - |xi_k|^2 sum_j |(v^H G C_k + h_bu_k^H) w_j|^2
/// for a binary grouping or a relaxed Q x N matrix.
double grouping_objective(const GroupingProblem& problem, const GroupingMatrix& grouping);
double grouping_objective(const GroupingProblem& problem, const Eigen::MatrixXd& G);

struct QpOptions {
  double regularization = 1.0;
  int max_outer = 50;  // Gamma updates
  int max_inner = 25;  // projected-gradient steps per Gamma
  double tol = 1e-9;
  bool polish = true;
  /// Extra starting vertex; the result is never worse than it.
  std::optional<GroupingMatrix> initial;
};

struct QpOutcome {
  GroupingMatrix grouping;
  double objective = 0.0;
  /// Relaxed objective (with the Gamma term) per accepted step, one list per Gamma.
  std::vector<std::vector<double>> inner_traces;
  std::size_t repairs = 0;
  int outer_iterations = 0;
  bool converged = false;
  bool concave = true;
  bool fell_back = false;  // a baseline vertex beat the rounded relaxation
};

/// Continuous relaxation over {G >= 0, columns on the simplex}, alternating
/// projected-gradient ascent in G with Gamma_n = G_n / ||G_n||, followed by
/// argmax rounding, margin-based repair and single-element move polishing.
QpOutcome relaxed_qp_grouping(const GroupingProblem& problem, std::size_t groups, const QpOptions& options = {});

/// Euclidean projection of x onto the probability simplex.
RealVector project_simplex(const RealVector& x);

}  // namespace iegirs
