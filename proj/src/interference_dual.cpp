// SPDX-License-Identifier: Apache-2.0
//
// Two-user sum mutual information rewritten as a single-beam MIMO
// interference channel: w1 and w2 act as transmit beamformers towards two
// virtual 2-antenna receivers with row-scaled channels H1, H2, G1, G2.

#include <cmath>

#include "gmat/precoders.hpp"

namespace gmat {

namespace {

constexpr int kUserA = 0;
constexpr int kUserB = 1;

CMatrix scaled_stack(double top, const CVector& h, double bottom) {
  const CVector perp = orth_complement(h).complement.col(0);
  CMatrix m(2, h.size());
  m.row(0) = std::sqrt(top) * h.adjoint();
  m.row(1) = std::sqrt(bottom) * perp.adjoint();
  return m;
}

void require_two_users(int users) {
  if (users != 2) throw DomainError("interference-channel view requires K = 2");
}

}  // namespace

TwoUserChannels two_user_channels(const ChannelEpisode& episode) {
  require_two_users(episode.users());
  TwoUserChannels ch;
  ch.ha1 = episode.h(kUserA, 0);
  ch.ha2 = episode.h(kUserA, 1);
  ch.hb1 = episode.h(kUserB, 0);
  ch.hb2 = episode.h(kUserB, 1);
  ch.present_a = episode.coeff(kUserA, 0, 2);
  ch.present_b = episode.coeff(kUserB, 0, 2);
  return ch;
}

TwoUserChannels two_user_channels(const CsitView& csit) {
  require_two_users(csit.users());
  TwoUserChannels ch;
  ch.ha1 = csit.h(kUserA, 0);
  ch.ha2 = csit.h(kUserA, 1);
  ch.hb1 = csit.h(kUserB, 0);
  ch.hb2 = csit.h(kUserB, 1);
  return ch;
}

InterferenceDual ic_dual_matrices(const TwoUserChannels& ch, const CVector& w1,
                                  const CVector& w2, double rho) {
  if (!(rho > 0.0)) throw DomainError("ic_dual_matrices: rho must be positive");
  const double na1 = ch.ha1.squaredNorm();
  const double na2 = ch.ha2.squaredNorm();
  const double nb1 = ch.hb1.squaredNorm();
  const double nb2 = ch.hb2.squaredNorm();
  const double ca = std::norm(ch.present_a);
  const double cb = std::norm(ch.present_b);
  const double w1sq = w1.squaredNorm();
  const double w2sq = w2.squaredNorm();

  InterferenceDual d;
  d.rho = rho;
  d.alpha[1] = (1.0 + rho * na2) / (rho * na1);
  d.alpha[0] = d.alpha[1] / (1.0 + rho * na1);
  d.alpha[2] = 1.0 / (rho * cb * w1sq);
  d.alpha[3] = d.alpha[2] + 1.0;
  d.beta[1] = (1.0 + rho * nb1) / (rho * nb2);
  d.beta[0] = d.beta[1] / (1.0 + rho * nb2);
  d.beta[2] = 1.0 / (rho * ca * w2sq);
  d.beta[3] = d.beta[2] + 1.0;
  d.sigma1_sq = 1.0 / (rho * ca) + w2sq;
  d.sigma2_sq = 1.0 / (rho * cb) + w1sq;
  d.c = (1.0 + rho * na1) * (1.0 + rho * nb2);

  d.h1 = scaled_stack(d.alpha[0], ch.ha1, d.alpha[1]);
  d.h2 = scaled_stack(d.beta[2], ch.ha2, d.beta[3]);
  d.g1 = scaled_stack(d.alpha[2], ch.hb1, d.alpha[3]);
  d.g2 = scaled_stack(d.beta[0], ch.hb2, d.beta[1]);
  return d;
}

double InterferenceDual::sinr1(const CVector& w1, const CVector& w2) const {
  return rho * (h1 * w1).squaredNorm() / (sigma1_sq + rho * (h2 * w2).squaredNorm());
}

double InterferenceDual::sinr2(const CVector& w1, const CVector& w2) const {
  return rho * (g2 * w2).squaredNorm() / (sigma2_sq + rho * (g1 * w1).squaredNorm());
}

MrtZfDesign mrt_zf_precoders(const InterferenceDual& dual, const Schedule& schedule) {
  require_two_users(schedule.users);
  const auto eye = HermitianMatrix::identity(2);
  const auto gram = [](const CMatrix& m) { return HermitianMatrix(m.adjoint() * m); };

  const auto mrt1 = generalized_eig_extreme(gram(dual.h1), eye, Extreme::kMax);
  const auto mrt2 = generalized_eig_extreme(gram(dual.g2), eye, Extreme::kMax);
  const auto zf1 = generalized_eig_extreme(gram(dual.g1), eye, Extreme::kMin);
  const auto zf2 = generalized_eig_extreme(gram(dual.h2), eye, Extreme::kMin);

  MrtZfDesign out{PrecoderSet(schedule), PrecoderSet(schedule),
                  mrt1.degenerate || mrt2.degenerate || zf1.degenerate || zf2.degenerate};
  out.mrt.set_w(kUserA, kUserB, 0, mrt1.vector);
  out.mrt.set_w(kUserB, kUserA, 0, mrt2.vector);
  out.zf.set_w(kUserA, kUserB, 0, zf1.vector);
  out.zf.set_w(kUserB, kUserA, 0, zf2.vector);
  return out;
}

}  // namespace gmat
