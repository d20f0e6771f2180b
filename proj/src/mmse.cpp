// SPDX-License-Identifier: Apache-2.0
//
// Virtual MMSE cost and its gradient with respect to the order-2 blocks.
//
// Notation per receiver i:
//   Sigma_i = I + rho sum_{l,j} H_ij^l H_ij^l^H      (received covariance)
//   M_i     = rho sum_l H_ii^l H_ii^l^H              (own-signal part)
//   J_i     = sum_l Tr(I - rho H_ii^l^H Sigma_i^-1 H_ii^l) = L K - Tr(Sigma_i^-1 M_i)
//
// Differentiating with respect to conj(H_ij^l):
//   j == i : -rho Sigma^-1 (Sigma - M) Sigma^-1 H_ii^l    (signal term)
//   j != i :  rho Sigma^-1 M Sigma^-1 H_ij^l              (interference term)
// The signal term is -A^H (AA^H + B)^-1 B (AA^H + B)^-1 transposed with
// A = sqrt(rho) H and B the interference-plus-noise covariance; the
// interference term has the same shape with M in place of B.
//
// The virtual channel is affine in W_j^l(2): H_ij^l = P_ij^l + Lift^l W_j^l(2),
// so dJ/dconj(W) = sum_i Lift^l^H G_ij^l. The returned gradient is with
// respect to real and imaginary parts, i.e. twice the conjugate derivative;
// stepping W -= beta * gradient descends J.

#include <cmath>

#include "gmat/precoders.hpp"

namespace gmat {

VirtualMmseModel::VirtualMmseModel(const CsitView& csit, const Schedule& schedule)
    : schedule_(schedule) {
  if (csit.now() < schedule.start(2) || csit.users() != schedule.users) {
    throw DomainError("VirtualMmseModel: CSIT view does not cover phase 1");
  }
  const int users = schedule.users;
  for (int l = 0; l < schedule.branches; ++l) lift_.push_back(branch_lift_operator(schedule, l));
  phase1_.resize(static_cast<std::size_t>(users));
  for (int i = 0; i < users; ++i) {
    for (int l = 0; l < schedule.branches; ++l) {
      for (int j = 0; j < users; ++j) {
        phase1_[static_cast<std::size_t>(i)].push_back(csit.h(i, schedule.phase1_slot(j, l)));
      }
    }
  }
}

std::vector<std::vector<CMatrix>> VirtualMmseModel::channels(const PrecoderSet& precoders) const {
  const int users = schedule_.users;
  std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(users));
  for (int i = 0; i < users; ++i) {
    for (int l = 0; l < schedule_.branches; ++l) {
      for (int j = 0; j < users; ++j) {
        CMatrix h = lift_[static_cast<std::size_t>(l)] * precoders.block(j, l);
        h.row(schedule_.phase1_slot(j, l)) =
            phase1_[static_cast<std::size_t>(i)][static_cast<std::size_t>(l * users + j)]
                .transpose();
        out[static_cast<std::size_t>(i)].push_back(std::move(h));
      }
    }
  }
  return out;
}

namespace {

CMatrix received_covariance(const std::vector<CMatrix>& hs, double rho, Eigen::Index dim) {
  CMatrix sigma = CMatrix::Identity(dim, dim);
  for (const auto& h : hs) sigma.noalias() += rho * h * h.adjoint();
  return sigma;
}

}  // namespace

double VirtualMmseModel::cost(const PrecoderSet& precoders, double rho) const {
  const int users = schedule_.users;
  const auto hs = channels(precoders);
  double j_total = 0.0;
  for (int i = 0; i < users; ++i) {
    const auto& hi = hs[static_cast<std::size_t>(i)];
    const CMatrix sigma = received_covariance(hi, rho, schedule_.total_slots);
    Eigen::LLT<CMatrix> llt(sigma);
    for (int l = 0; l < schedule_.branches; ++l) {
      const CMatrix x = llt.matrixL().solve(hi[static_cast<std::size_t>(l * users + i)]);
      j_total += users - rho * x.squaredNorm();
    }
  }
  return j_total;
}

std::vector<CMatrix> VirtualMmseModel::gradient(const PrecoderSet& precoders, double rho) const {
  const int users = schedule_.users;
  const int branches = schedule_.branches;
  const Eigen::Index dim = schedule_.total_slots;
  const auto hs = channels(precoders);

  std::vector<CMatrix> grad(static_cast<std::size_t>(users * branches),
                            CMatrix::Zero(schedule_.q(2), users));
  for (int i = 0; i < users; ++i) {
    const auto& hi = hs[static_cast<std::size_t>(i)];
    const CMatrix sigma = received_covariance(hi, rho, dim);
    Eigen::LLT<CMatrix> llt(sigma);
    const CMatrix sigma_inv = llt.solve(CMatrix::Identity(dim, dim));

    CMatrix own = CMatrix::Zero(dim, dim);
    for (int l = 0; l < branches; ++l) {
      const auto& h = hi[static_cast<std::size_t>(l * users + i)];
      own.noalias() += rho * h * h.adjoint();
    }
    const CMatrix sandwich = sigma_inv * own * sigma_inv;

    for (int l = 0; l < branches; ++l) {
      const auto& lift = lift_[static_cast<std::size_t>(l)];
      for (int j = 0; j < users; ++j) {
        const auto& h = hi[static_cast<std::size_t>(l * users + j)];
        CMatrix g = rho * sandwich * h;
        if (j == i) g -= rho * sigma_inv * h;
        grad[static_cast<std::size_t>(l * users + j)].noalias() += 2.0 * lift.adjoint() * g;
      }
    }
  }

  const auto& pairs = precoders.pairs();
  for (int l = 0; l < branches; ++l) {
    for (int j = 0; j < users; ++j) {
      auto& g = grad[static_cast<std::size_t>(l * users + j)];
      for (int r = 0; r < g.rows(); ++r) {
        if (!pairs.contains(r, j)) g.row(r).setZero();
      }
    }
  }
  return grad;
}

double mmse_cost(const PrecoderSet& precoders, const CsitView& csit,
                 const Schedule& schedule, double rho) {
  return VirtualMmseModel(csit, schedule).cost(precoders, rho);
}

std::vector<CMatrix> mmse_gradient(const PrecoderSet& precoders, const CsitView& csit,
                                   const Schedule& schedule, double rho) {
  return VirtualMmseModel(csit, schedule).gradient(precoders, rho);
}

PrecoderSet gmat_mmse_optimize(const CsitView& csit, const Schedule& schedule,
                               const MmseOptConfig& cfg, MmseOptReport* report) {
  if (!(cfg.beta > 0.0)) throw DomainError("gmat_mmse_optimize: beta must be positive");
  if (!(cfg.rho > 0.0)) throw DomainError("gmat_mmse_optimize: rho must be positive");
  if (cfg.max_iters < 0) throw DomainError("gmat_mmse_optimize: max_iters must be >= 0");

  const VirtualMmseModel model(csit, schedule);
  PrecoderSet current = mat_precoder(csit, schedule);
  normalize_to_budget(current, schedule);
  PrecoderSet best = current;

  MmseOptReport rep;
  rep.initial_cost = rep.best_cost = model.cost(current, cfg.rho);
  const int users = schedule.users;
  for (int n = 1; n <= cfg.max_iters; ++n) {
    const auto grad = model.gradient(current, cfg.rho);
    for (int l = 0; l < schedule.branches; ++l) {
      for (int j = 0; j < users; ++j) {
        current.block(j, l) -= cfg.beta * grad[static_cast<std::size_t>(l * users + j)];
      }
    }
    if (cfg.projection == Projection::kScaleToBudget) project_to_budget(current, schedule);
    const double j = model.cost(current, cfg.rho);
    rep.iterations = n;
    if (!std::isfinite(j)) {
      throw OptimizerDiverged("gmat_mmse_optimize: non-finite cost at iteration " +
                              std::to_string(n) + " (step too large?)");
    }
    if (j < rep.best_cost) {
      rep.best_cost = j;
      rep.best_iteration = n;
      best = current;
    }
  }
  if (report != nullptr) *report = rep;
  return best;
}

}  // namespace gmat
