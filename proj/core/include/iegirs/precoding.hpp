// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "iegirs/mathkit.hpp"

namespace iegirs {

/// Quadratic-transform auxiliaries (varsigma_k >= 0, xi_k complex).
struct FPAuxiliaries {
  RealVector varsigma;
  ComplexVector xi;
};

/// Per-group unit-modulus reflection coefficients, stored as phases so the
/// unit-modulus constraint holds by construction.
class ReflectionVector {
 public:
  ReflectionVector() = default;
  explicit ReflectionVector(RealVector phases) : phases_(std::move(phases)) {}

  /// Phases of arbitrary complex entries; zero entries map to phase 0.
  static ReflectionVector from_coefficients(const ComplexVector& coefficients);
  static ReflectionVector zeros(Eigen::Index size) { return ReflectionVector(RealVector::Zero(size)); }

  Eigen::Index size() const { return phases_.size(); }
  const RealVector& phases() const { return phases_; }
  ComplexVector coefficients() const;

 private:
  RealVector phases_;
};

/// M x K stack of per-user beamformers with the BS power budget.
class PrecodingMatrix {
 public:
  PrecodingMatrix() = default;
  PrecodingMatrix(ComplexMatrix w, double p_max) : w_(std::move(w)), p_max_(p_max) {}

  const ComplexMatrix& w() const { return w_; }
  double p_max() const { return p_max_; }
  double power() const { return w_.squaredNorm(); }
  bool feasible(double slack = 1e-9) const { return power() <= p_max_ * (1.0 + slack) + slack; }
  Eigen::Index antennas() const { return w_.rows(); }
  Eigen::Index users() const { return w_.cols(); }

 private:
  ComplexMatrix w_;
  double p_max_ = 0.0;
};

}  // namespace iegirs
