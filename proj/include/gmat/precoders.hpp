// SPDX-License-Identifier: Apache-2.0
//
// Order-2 precoder designs: the MAT baseline, virtual-MMSE gradient descent,
// the closed-form dual-SINR solution, and the MRT / ZF beamformers of the
// equivalent two-user interference channel.
//
// Every design reads the channel through a CsitView taken at the first
// phase-2 slot, so only phase-1 history is available to it.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmat/channel.hpp"
#include "gmat/numerics.hpp"
#include "gmat/protocol.hpp"
#include "gmat/schedule.hpp"

namespace gmat {

/// w_ji^l = h_i at the phase-1 slot of s_j^l: each combining vector copies
/// the channel through which the peer user overheard the symbol.
PrecoderSet mat_precoder(const CsitView& csit, const Schedule& schedule);

// ---------------------------------------------------------------------------
// Virtual MMSE

enum class Projection { kScaleToBudget, kNone };

struct MmseOptConfig {
  double beta = 0.01;
  int max_iters = 500;
  double rho = 1.0;
  Projection projection = Projection::kScaleToBudget;
};

class OptimizerDiverged : public std::runtime_error {
 public:
  explicit OptimizerDiverged(const std::string& what) : std::runtime_error(what) {}
};

/// Virtual received-signal model at every user: effective channels with the
/// unknown present-slot coefficients set to one. Holds the phase-1 channels
/// and the per-branch lift operators; the precoders are supplied per call.
class VirtualMmseModel {
 public:
  VirtualMmseModel(const CsitView& csit, const Schedule& schedule);

  const Schedule& schedule() const { return schedule_; }

  /// Virtual H_ij^l for every (i, j, l), indexed [i][l * K + j].
  std::vector<std::vector<CMatrix>> channels(const PrecoderSet& precoders) const;

  /// J = sum_l sum_i Tr(I - rho H_ii^l^H (rho sum H H^H + I)^-1 H_ii^l).
  double cost(const PrecoderSet& precoders, double rho) const;

  /// dJ/dRe(W_j^l(2)) + i dJ/dIm(W_j^l(2)) for every (j, l), indexed l * K + j.
  /// Rows of W_j^l(2) that do not involve user j are structurally zero and
  /// get a zero gradient.
  std::vector<CMatrix> gradient(const PrecoderSet& precoders, double rho) const;

 private:
  Schedule schedule_;
  std::vector<CMatrix> lift_;                 // [l], T x Q_2
  std::vector<std::vector<CVector>> phase1_;  // [i][l * K + j], h_i at s_j^l's slot
};

double mmse_cost(const PrecoderSet& precoders, const CsitView& csit,
                 const Schedule& schedule, double rho);

std::vector<CMatrix> mmse_gradient(const PrecoderSet& precoders, const CsitView& csit,
                                   const Schedule& schedule, double rho);

struct MmseOptReport {
  double initial_cost = 0.0;
  double best_cost = 0.0;
  int best_iteration = 0;
  int iterations = 0;
};

/// Fixed-step gradient descent on the virtual MMSE cost starting from the
/// budget-normalized MAT precoders. Returns the lowest-cost iterate seen.
/// Throws OptimizerDiverged when the cost becomes non-finite.
PrecoderSet gmat_mmse_optimize(const CsitView& csit, const Schedule& schedule,
                               const MmseOptConfig& cfg, MmseOptReport* report = nullptr);

// ---------------------------------------------------------------------------
// Dual SINR

/// Regularized dual SINR for w_ji^l:
///   numerator   I + rho sum_{k != i} h_k^perp h_k^perp^H
///   denominator gamma I + rho h_i^perp h_i^perp^H,
///   gamma = ||w_ji^l||^2 + ||h_i||^2 + 1/rho,
/// all channels taken at the phase-1 slot of s_j^l.
struct DualSinrProblem {
  HermitianMatrix numerator;
  HermitianMatrix denominator;
  double gamma = 0.0;

  double operator()(const CVector& w) const {
    return rayleigh_quotient(numerator.matrix(), denominator.matrix(), w);
  }
};

DualSinrProblem make_dual_sinr_problem(const CsitView& csit, const Schedule& schedule,
                                       int j, int i, int l, double rho,
                                       double w_norm_sq = 1.0);

struct DsinrDesign {
  PrecoderSet precoders;
  int degenerate_solves = 0;
};

/// Each w_ji^l is the unit-norm dominant generalized eigenvector of its
/// dual-SINR pencil.
DsinrDesign gmat_dsinr_precoder(const CsitView& csit, const Schedule& schedule, double rho);

// ---------------------------------------------------------------------------
// Two-user interference-channel view

/// Channels entering the two-user closed forms. present_a / present_b are
/// h_{A1}(3) and h_{B1}(3); the CSIT constructor sets both to one.
struct TwoUserChannels {
  CVector ha1, ha2, hb1, hb2;
  cd present_a{1.0, 0.0};
  cd present_b{1.0, 0.0};
};

TwoUserChannels two_user_channels(const ChannelEpisode& episode);
TwoUserChannels two_user_channels(const CsitView& csit);

struct InterferenceDual {
  CMatrix h1, h2, g1, g2;  // 2 x 2 row-scaled channel stacks
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  std::array<double, 4> alpha{};
  std::array<double, 4> beta{};
  double rho = 0.0;
  double c = 0.0;  // (1 + rho ||h_A(1)||^2)(1 + rho ||h_B(2)||^2)

  double sinr1(const CVector& w1, const CVector& w2) const;
  double sinr2(const CVector& w1, const CVector& w2) const;
};

/// Only the norms of w1 and w2 enter the matrices.
InterferenceDual ic_dual_matrices(const TwoUserChannels& ch, const CVector& w1,
                                  const CVector& w2, double rho);

struct MrtZfDesign {
  PrecoderSet mrt;
  PrecoderSet zf;
  bool degenerate = false;
};

/// MRT: dominant eigenvectors of H1^H H1 and G2^H G2.
/// ZF: minor eigenvectors of G1^H G1 and H2^H H2.
MrtZfDesign mrt_zf_precoders(const InterferenceDual& dual, const Schedule& schedule);

}  // namespace gmat
