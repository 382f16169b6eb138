// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "iegirs/config.hpp"
#include "iegirs/mathkit.hpp"
#include "iegirs/precoding.hpp"

namespace iegirs {

// Effective channels are carried as an M x K matrix whose column k is h_k,
// with h_k^H = v^H C_hat_k + h_bu_k^H.

ComplexVector effective_channel(const ReflectionVector& v, const ComplexMatrix& C_hat,
                                const ComplexVector& h_bu);

ComplexMatrix effective_channels(const ReflectionVector& v, std::span<const ComplexMatrix> C_hat,
                                 std::span<const ComplexVector> h_bu);

double sinr(const ComplexMatrix& H, const PrecodingMatrix& W, std::size_t k, double sigma2);
RealVector sinr_all(const ComplexMatrix& H, const PrecodingMatrix& W, double sigma2);

/// sum_k weight_k log2(1 + gamma_k).
double wsr(std::span<const double> gamma, std::span<const double> weights);
double wsr(const RealVector& gamma, std::span<const double> weights);

/// Quadratic-transform objective, natural-log form:
///   sum_k w_k ln(1+s_k) - w_k s_k + 2 sqrt(w_k (1+s_k)) Re{xi_k^* h_k^H w_k}
///         - |xi_k|^2 (sum_j |h_k^H w_j|^2 + sigma2).
double fp_objective(const ComplexMatrix& H, const PrecodingMatrix& W, const FPAuxiliaries& aux,
                    double sigma2, std::span<const double> weights);

/// Joint closed-form optimum of (xi, varsigma) for fixed (W, v). The
/// recovered varsigma_k equals the SINR of user k.
FPAuxiliaries update_auxiliaries(const ComplexMatrix& H, const PrecodingMatrix& W, double sigma2,
                                 std::span<const double> weights);

struct PrecoderUpdate {
  PrecodingMatrix W;
  double lambda = 0.0;
  int bisection_steps = 0;
};

/// Maximises 2 Re{zeta^H w} - w^H L w subject to ||w||^2 <= p_max. The
/// block-diagonal L shares one M x M block, so a single eigendecomposition
/// serves every user and the Lagrange multiplier is found by bisection.
PrecoderUpdate update_precoder(const FPAuxiliaries& aux, const ComplexMatrix& H,
                               std::span<const double> weights, double p_max);

double precoder_objective(const FPAuxiliaries& aux, const ComplexMatrix& H, std::span<const double> weights,
                          const ComplexMatrix& w);

/// Reflection subproblem max_v -v^H U v - 2 Re{v^H phi}, |v_q| = 1.
struct RcvSubproblem {
  ComplexMatrix U;
  ComplexVector phi;
};

RcvSubproblem build_rcv_subproblem(const PrecodingMatrix& W, const FPAuxiliaries& aux,
                                   std::span<const ComplexMatrix> C_hat, std::span<const ComplexVector> h_bu,
                                   std::span<const double> weights);

double rcv_objective(const RcvSubproblem& sub, const ComplexVector& v);

/// Majorizer of v^H U v with X = lambda_max I, tangent at v_t.
double mm_surrogate(const RcvSubproblem& sub, double lambda_max, const ComplexVector& v, const ComplexVector& v_t);

/// Largest eigenvalue of a Hermitian PSD matrix. Full eigendecomposition up
/// to 512 rows, padded power iteration beyond.
double max_eigenvalue(const ComplexMatrix& U);

struct MmResult {
  ReflectionVector v;
  std::vector<double> objective_trace;  // reflection-subproblem objective, starting point first
  int iterations = 0;
  double lambda_max = 0.0;
};

/// Throws std::invalid_argument when U is not Hermitian to 1e-9 relative.
MmResult run_mm(const RcvSubproblem& sub, const ReflectionVector& v_t, int max_inner, double tol);

MmResult update_rcv_mm(const ReflectionVector& v_t, const PrecodingMatrix& W, const FPAuxiliaries& aux,
                       std::span<const ComplexMatrix> C_hat, std::span<const ComplexVector> h_bu,
                       std::span<const double> weights, int max_inner, double tol);

/// w_k = h_k / ||h_k||, scaled to the full power budget.
PrecodingMatrix matched_filter(const ComplexMatrix& H, double p_max);

/// Inputs of the alternating stage on combined channels.
struct Stage2Problem {
  std::vector<ComplexMatrix> C_hat;  // K of size Q x M (Q may be 0)
  std::vector<ComplexVector> h_bu;   // K of length M
  double sigma2 = 1.0;
  std::vector<double> weights;
  double p_max = 1.0;
};

struct Stage2Result {
  PrecodingMatrix W;
  ReflectionVector v;
  FPAuxiliaries aux;
  /// FP objective (nats) at the start and after every outer iteration.
  std::vector<double> trace;
  /// FP objective after every individual block update.
  std::vector<double> block_trace;
  int iterations = 0;
  bool converged = false;
  double wsr_bits = 0.0;
};

/// Alternates the auxiliary, precoder and (optionally) reflection updates
/// until the relative change of the FP objective drops below opts.tol.
Stage2Result solve_stage2(const Stage2Problem& problem, const ReflectionVector& v0, const PrecodingMatrix& W0,
                          const SolverOptions& opts, bool optimize_rcv = true);

}  // namespace iegirs
