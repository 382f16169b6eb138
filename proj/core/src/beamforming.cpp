// SPDX-License-Identifier: Apache-2.0
#include "iegirs/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iegirs {

ReflectionVector ReflectionVector::from_coefficients(const ComplexVector& coefficients) {
  RealVector phases(coefficients.size());
  for (Eigen::Index q = 0; q < coefficients.size(); ++q) {
    phases[q] = coefficients[q] == cplx(0.0) ? 0.0 : std::arg(coefficients[q]);
  }
  return ReflectionVector(std::move(phases));
}

ComplexVector ReflectionVector::coefficients() const {
  ComplexVector v(phases_.size());
  for (Eigen::Index q = 0; q < phases_.size(); ++q) v[q] = std::polar(1.0, phases_[q]);
  return v;
}

ComplexVector effective_channel(const ReflectionVector& v, const ComplexMatrix& C_hat, const ComplexVector& h_bu) {
  if (v.size() == 0 && C_hat.rows() == 0) return h_bu;
  if (C_hat.rows() != v.size() || C_hat.cols() != h_bu.size()) {
    throw std::invalid_argument("effective_channel: C_hat is " + std::to_string(C_hat.rows()) + "x" +
                                std::to_string(C_hat.cols()) + ", v has " + std::to_string(v.size()) +
                                " entries, h_bu has " + std::to_string(h_bu.size()));
  }
  // h = C_hat^H v + h_bu  <=>  h^H = v^H C_hat + h_bu^H
  return C_hat.adjoint() * v.coefficients() + h_bu;
}

ComplexMatrix effective_channels(const ReflectionVector& v, std::span<const ComplexMatrix> C_hat,
                                 std::span<const ComplexVector> h_bu) {
  if (h_bu.empty()) throw std::invalid_argument("effective_channels: no users");
  if (!C_hat.empty() && C_hat.size() != h_bu.size()) {
    throw std::invalid_argument("effective_channels: cascade and direct-link counts differ");
  }
  const Eigen::Index m = h_bu[0].size();
  ComplexMatrix H(m, static_cast<Eigen::Index>(h_bu.size()));
  for (std::size_t k = 0; k < h_bu.size(); ++k) {
    const ComplexMatrix empty(0, m);
    H.col(static_cast<Eigen::Index>(k)) = effective_channel(v, C_hat.empty() ? empty : C_hat[k], h_bu[k]);
  }
  return H;
}

namespace {

void require_dims(const ComplexMatrix& H, const ComplexMatrix& W, const char* where) {
  if (H.rows() != W.rows() || H.cols() != W.cols()) {
    throw std::invalid_argument(std::string(where) + ": channel is " + std::to_string(H.rows()) + "x" +
                                std::to_string(H.cols()) + " but precoder is " + std::to_string(W.rows()) +
                                "x" + std::to_string(W.cols()));
  }
}

void require_weights(std::span<const double> weights, Eigen::Index users, const char* where) {
  if (static_cast<Eigen::Index>(weights.size()) != users) {
    throw std::invalid_argument(std::string(where) + ": expected one weight per user");
  }
}

}  // namespace

double sinr(const ComplexMatrix& H, const PrecodingMatrix& W, std::size_t k, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sinr: noise power must be positive");
  require_dims(H, W.w(), "sinr");
  const auto kk = static_cast<Eigen::Index>(k);
  if (kk >= H.cols()) throw std::out_of_range("sinr: user index out of range");
  const Eigen::RowVectorXcd g = H.col(kk).adjoint() * W.w();
  const double signal = std::norm(g[kk]);
  const double interference = g.squaredNorm() - signal;
  return signal / (std::max(interference, 0.0) + sigma2);
}

RealVector sinr_all(const ComplexMatrix& H, const PrecodingMatrix& W, double sigma2) {
  RealVector gamma(H.cols());
  for (Eigen::Index k = 0; k < H.cols(); ++k) gamma[k] = sinr(H, W, static_cast<std::size_t>(k), sigma2);
  return gamma;
}

double wsr(std::span<const double> gamma, std::span<const double> weights) {
  if (gamma.size() != weights.size()) throw std::invalid_argument("wsr: size mismatch");
  double r = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (gamma[k] < 0.0) throw std::invalid_argument("wsr: SINR must be >= 0");
    r += weights[k] * std::log2(1.0 + gamma[k]);
  }
  return r;
}

double wsr(const RealVector& gamma, std::span<const double> weights) {
  return wsr(std::span<const double>(gamma.data(), static_cast<std::size_t>(gamma.size())), weights);
}

double fp_objective(const ComplexMatrix& H, const PrecodingMatrix& W, const FPAuxiliaries& aux, double sigma2,
                    std::span<const double> weights) {
  require_dims(H, W.w(), "fp_objective");
  require_weights(weights, H.cols(), "fp_objective");
  const ComplexMatrix G = H.adjoint() * W.w();  // G(k, j) = h_k^H w_j
  double f = 0.0;
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const double wk = weights[static_cast<std::size_t>(k)];
    const double s = aux.varsigma[k];
    const cplx xi = aux.xi[k];
    const double chi = G.row(k).squaredNorm() + sigma2;
    f += wk * std::log1p(s) - wk * s + 2.0 * std::sqrt(wk * (1.0 + s)) * std::real(std::conj(xi) * G(k, k)) -
         std::norm(xi) * chi;
  }
  return f;
}

FPAuxiliaries update_auxiliaries(const ComplexMatrix& H, const PrecodingMatrix& W, double sigma2,
                                 std::span<const double> weights) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("update_auxiliaries: noise power must be positive");
  require_dims(H, W.w(), "update_auxiliaries");
  require_weights(weights, H.cols(), "update_auxiliaries");
  const ComplexMatrix G = H.adjoint() * W.w();
  FPAuxiliaries aux{RealVector(H.cols()), ComplexVector(H.cols())};
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const cplx omega = G(k, k);
    const double omega2 = std::norm(omega);
    const double chi = G.row(k).squaredNorm() + sigma2;
    const double guard = chi * chi - omega2 * chi;
    if (!(guard > 0.0)) {
      throw std::runtime_error("update_auxiliaries: chi^2 - |omega|^2 chi <= 0 for user " + std::to_string(k));
    }
    const double root = std::sqrt(guard);
    const double a = std::abs(omega) / root;
    const double b = omega2 / root;
    // The joint optimum carries sqrt(weight); with unit weights this is A_k.
    aux.xi[k] = std::sqrt(weights[static_cast<std::size_t>(k)]) * std::polar(a, std::arg(omega));
    aux.varsigma[k] = 0.5 * (b * b + b * std::sqrt(b * b + 4.0));
  }
  return aux;
}

namespace {

struct PrecoderSystem {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig;
  RealVector lambda;  // eigenvalues of the shared block
  ComplexMatrix Z;    // V^H zeta, null-space rows cleared
};

ComplexMatrix zeta_matrix(const FPAuxiliaries& aux, const ComplexMatrix& H, std::span<const double> weights) {
  ComplexMatrix zeta(H.rows(), H.cols());
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const double scale = std::sqrt(weights[static_cast<std::size_t>(k)] * (1.0 + aux.varsigma[k]));
    zeta.col(k) = (scale * aux.xi[k]) * H.col(k);
  }
  return zeta;
}

ComplexMatrix shared_block(const FPAuxiliaries& aux, const ComplexMatrix& H) {
  ComplexMatrix A = ComplexMatrix::Zero(H.rows(), H.rows());
  for (Eigen::Index k = 0; k < H.cols(); ++k) A += std::norm(aux.xi[k]) * (H.col(k) * H.col(k).adjoint());
  return A;
}

double power_at(const PrecoderSystem& s, double lambda) {
  double p = 0.0;
  for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
    const double d = s.lambda[i] + lambda;
    if (d <= 0.0) continue;
    p += s.Z.row(i).squaredNorm() / (d * d);
  }
  return p;
}

ComplexMatrix precoder_at(const PrecoderSystem& s, double lambda) {
  RealVector inv(s.lambda.size());
  for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
    const double d = s.lambda[i] + lambda;
    inv[i] = d > 0.0 ? 1.0 / d : 0.0;
  }
  return s.eig.eigenvectors() * (inv.asDiagonal() * s.Z);
}

}  // namespace

double precoder_objective(const FPAuxiliaries& aux, const ComplexMatrix& H, std::span<const double> weights,
                          const ComplexMatrix& w) {
  const ComplexMatrix zeta = zeta_matrix(aux, H, weights);
  const ComplexMatrix A = shared_block(aux, H);
  return 2.0 * std::real((zeta.adjoint() * w).trace()) - std::real((w.adjoint() * A * w).trace());
}

PrecoderUpdate update_precoder(const FPAuxiliaries& aux, const ComplexMatrix& H, std::span<const double> weights,
                               double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("update_precoder: p_max must be positive");
  require_weights(weights, H.cols(), "update_precoder");
  const ComplexMatrix zeta = zeta_matrix(aux, H, weights);
  PrecoderUpdate out;
  if (zeta.squaredNorm() == 0.0) {
    out.W = PrecodingMatrix(ComplexMatrix::Zero(H.rows(), H.cols()), p_max);
    return out;
  }

  PrecoderSystem sys;
  sys.eig.compute(shared_block(aux, H));
  sys.lambda = sys.eig.eigenvalues();
  sys.Z = sys.eig.eigenvectors().adjoint() * zeta;
  const double top = sys.lambda.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < sys.lambda.size(); ++i) {
    // The minimum-norm solution: zeta lies in the range of the block.
    if (sys.lambda[i] <= 1e-12 * top) {
      sys.lambda[i] = 0.0;
      sys.Z.row(i).setZero();
    }
  }

  if (power_at(sys, 0.0) <= p_max) {
    out.W = PrecodingMatrix(precoder_at(sys, 0.0), p_max);
    return out;
  }

  // ||w(lambda)||^2 <= ||Z||^2 / lambda^2 gives a feasible upper end directly.
  double hi = std::sqrt(sys.Z.squaredNorm() / p_max);
  if (!std::isfinite(hi) || !(hi > 0.0)) {
    throw std::runtime_error("update_precoder: cannot bracket the Lagrange multiplier (non-finite inputs)");
  }
  while (power_at(sys, hi) > p_max) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("update_precoder: bracket expansion diverged");
  }
  double lo = 0.0;
  int steps = 0;
  for (; steps < 200; ++steps) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (power_at(sys, mid) > p_max) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (p_max - power_at(sys, hi) <= 1e-12 * p_max) break;
  }
  out.lambda = hi;
  out.bisection_steps = steps;
  out.W = PrecodingMatrix(precoder_at(sys, hi), p_max);
  return out;
}

RcvSubproblem build_rcv_subproblem(const PrecodingMatrix& W, const FPAuxiliaries& aux,
                                   std::span<const ComplexMatrix> C_hat, std::span<const ComplexVector> h_bu,
                                   std::span<const double> weights) {
  if (C_hat.empty()) throw std::invalid_argument("build_rcv_subproblem: no combined cascades");
  const Eigen::Index q = C_hat[0].rows();
  const ComplexMatrix S = W.w() * W.w().adjoint();
  RcvSubproblem sub{ComplexMatrix::Zero(q, q), ComplexVector::Zero(q)};
  for (std::size_t k = 0; k < C_hat.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double xi2 = std::norm(aux.xi[kk]);
    const ComplexMatrix CS = C_hat[k] * S;
    sub.U += xi2 * (CS * C_hat[k].adjoint());
    const double alpha = std::sqrt(weights[k] * (1.0 + aux.varsigma[kk]));
    sub.phi += xi2 * (CS * h_bu[k]) - (alpha * std::conj(aux.xi[kk])) * (C_hat[k] * W.w().col(kk));
  }
  // Exact Hermitian symmetry; rounding leaves O(eps) skew parts.
  sub.U = 0.5 * (sub.U + sub.U.adjoint()).eval();
  return sub;
}

double rcv_objective(const RcvSubproblem& sub, const ComplexVector& v) {
  return -std::real(v.dot(sub.U * v)) - 2.0 * std::real(v.dot(sub.phi));
}

double mm_surrogate(const RcvSubproblem& sub, double lambda_max, const ComplexVector& v, const ComplexVector& v_t) {
  const ComplexVector Dvt = lambda_max * v_t - sub.U * v_t;  // (X - U) v_t
  return lambda_max * v.squaredNorm() - 2.0 * std::real(v.dot(Dvt)) + std::real(v_t.dot(Dvt));
}

double max_eigenvalue(const ComplexMatrix& U) {
  if (U.rows() == 0) return 0.0;
  if (U.rows() <= 512) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(U, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  ComplexVector x = ComplexVector::Ones(U.rows()).normalized();
  double est = 0.0;
  for (int it = 0; it < 2000; ++it) {
    ComplexVector y = U * x;
    const double next = std::real(x.dot(y));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(next - est) <= 1e-13 * std::abs(next)) {
      est = next;
      break;
    }
    est = next;
  }
  const double residual = (U * x - est * x).norm();
  return est + residual;
}

MmResult run_mm(const RcvSubproblem& sub, const ReflectionVector& v_t, int max_inner, double tol) {
  const double scale = std::max(sub.U.norm(), std::numeric_limits<double>::min());
  if ((sub.U - sub.U.adjoint()).norm() > 1e-9 * scale) {
    throw std::invalid_argument("update_rcv_mm: U is not Hermitian");
  }
  MmResult out;
  out.lambda_max = max_eigenvalue(sub.U);
  ComplexVector v = v_t.coefficients();
  RealVector phases = v_t.phases();
  double obj = rcv_objective(sub, v);
  out.objective_trace.push_back(obj);
  for (int it = 0; it < max_inner; ++it) {
    const ComplexVector target = out.lambda_max * v - sub.U * v - sub.phi;
    RealVector next_phases = phases;
    for (Eigen::Index q = 0; q < target.size(); ++q) {
      if (std::abs(target[q]) > 0.0) next_phases[q] = std::arg(target[q]);
    }
    ReflectionVector next(next_phases);
    const ComplexVector vn = next.coefficients();
    const double obj_next = rcv_objective(sub, vn);
    if (obj_next < obj) break;  // only reachable through rounding
    ++out.iterations;
    const double gain = obj_next - obj;
    v = vn;
    phases = std::move(next_phases);
    obj = obj_next;
    out.objective_trace.push_back(obj);
    if (gain <= tol * std::max(std::abs(obj), std::numeric_limits<double>::min())) break;
  }
  out.v = ReflectionVector(std::move(phases));
  return out;
}

MmResult update_rcv_mm(const ReflectionVector& v_t, const PrecodingMatrix& W, const FPAuxiliaries& aux,
                       std::span<const ComplexMatrix> C_hat, std::span<const ComplexVector> h_bu,
                       std::span<const double> weights, int max_inner, double tol) {
  return run_mm(build_rcv_subproblem(W, aux, C_hat, h_bu, weights), v_t, max_inner, tol);
}

PrecodingMatrix matched_filter(const ComplexMatrix& H, double p_max) {
  ComplexMatrix w(H.rows(), H.cols());
  const double per_user = std::sqrt(p_max / static_cast<double>(H.cols()));
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const double n = H.col(k).norm();
    if (n > 0.0) {
      w.col(k) = (per_user / n) * H.col(k);
    } else {
      w.col(k) = ComplexVector::Unit(H.rows(), 0) * per_user;
    }
  }
  return PrecodingMatrix(std::move(w), p_max);
}

Stage2Result solve_stage2(const Stage2Problem& p, const ReflectionVector& v0, const PrecodingMatrix& W0,
                          const SolverOptions& opts, bool optimize_rcv) {
  const std::span<const ComplexMatrix> C_hat(p.C_hat);
  const std::span<const ComplexVector> h_bu(p.h_bu);
  const std::span<const double> weights(p.weights);
  const bool has_irs = !p.C_hat.empty() && p.C_hat[0].rows() > 0;

  Stage2Result r;
  r.v = v0;
  r.W = W0;
  ComplexMatrix H = effective_channels(r.v, C_hat, h_bu);
  r.aux = update_auxiliaries(H, r.W, p.sigma2, weights);
  double f = fp_objective(H, r.W, r.aux, p.sigma2, weights);
  r.trace.push_back(f);
  r.block_trace.push_back(f);

  double beta = 1.0;
  for (int it = 0; it < opts.max_outer; ++it) {
    const double before = r.trace.back();
    const RealVector start_phases = r.v.phases();

    r.W = update_precoder(r.aux, H, weights, p.p_max).W;
    r.block_trace.push_back(fp_objective(H, r.W, r.aux, p.sigma2, weights));

    if (optimize_rcv && has_irs) {
      r.v = update_rcv_mm(r.v, r.W, r.aux, C_hat, h_bu, weights, opts.max_inner_mm, opts.mm_tol).v;
      H = effective_channels(r.v, C_hat, h_bu);
      r.block_trace.push_back(fp_objective(H, r.W, r.aux, p.sigma2, weights));
    }

    r.aux = update_auxiliaries(H, r.W, p.sigma2, weights);
    f = fp_objective(H, r.W, r.aux, p.sigma2, weights);
    r.block_trace.push_back(f);

    // Phase extrapolation along the last step, kept only if it raises the
    // objective (which equals the log-rate sum once the auxiliaries are fresh).
    if (optimize_rcv && has_irs && opts.extrapolate) {
      const RealVector step = (r.v.phases() - start_phases).unaryExpr([](double d) { return std::remainder(d, 2.0 * kPi); });
      bool accepted = false;
      if (step.size() > 0 && step.cwiseAbs().maxCoeff() > 0.0) {
        const ReflectionVector v_ext(r.v.phases() + beta * step);
        const ComplexMatrix H_ext = effective_channels(v_ext, C_hat, h_bu);
        const FPAuxiliaries aux_ext = update_auxiliaries(H_ext, r.W, p.sigma2, weights);
        const double f_ext = fp_objective(H_ext, r.W, aux_ext, p.sigma2, weights);
        if (f_ext > f) {
          r.v = v_ext;
          H = H_ext;
          r.aux = aux_ext;
          f = f_ext;
          r.block_trace.push_back(f);
          accepted = true;
        }
      }
      beta = accepted ? std::min(2.0 * beta, 64.0) : 1.0;
    }

    r.trace.push_back(f);
    r.iterations = it + 1;
    if (std::abs(f - before) <= opts.tol * std::max(std::abs(before), 1e-300)) {
      r.converged = true;
      break;
    }
  }
  r.wsr_bits = wsr(sinr_all(H, r.W, p.sigma2), weights);
  return r;
}

}  // namespace iegirs
