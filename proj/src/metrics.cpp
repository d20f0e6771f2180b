// SPDX-License-Identifier: Apache-2.0

#include "gmat/metrics.hpp"

#include <cmath>
#include <numbers>

namespace gmat {

namespace {

constexpr double kUnitNormTol = 1e-9;

double to_bits(double nats) { return nats / std::numbers::ln2; }

CMatrix interference_covariance(const ReceiverChannels& ch, int l, double rho) {
  const Eigen::Index dim = ch.by_stream.front().rows();
  const auto target = static_cast<std::size_t>(l * ch.users + ch.receiver);
  CMatrix b = CMatrix::Identity(dim, dim);
  for (std::size_t s = 0; s < ch.by_stream.size(); ++s) {
    if (s == target) continue;
    b.noalias() += rho * ch.by_stream[s] * ch.by_stream[s].adjoint();
  }
  return b;
}

CMatrix received_covariance(const ReceiverChannels& ch, double rho) {
  const Eigen::Index dim = ch.by_stream.front().rows();
  CMatrix s = CMatrix::Identity(dim, dim);
  for (const auto& h : ch.by_stream) s.noalias() += rho * h * h.adjoint();
  return s;
}

CMatrix perp_projector(const CVector& h) {
  const CMatrix p = orth_complement(h).complement;
  return p * p.adjoint();
}

}  // namespace

ReceiverChannels receiver_channels(int i, const ChannelEpisode& episode,
                                   const Schedule& schedule, const PrecoderSet& precoders,
                                   const LiftingConstants& constants, bool is_virtual) {
  ReceiverChannels out{i, schedule.users, schedule.branches, {}};
  for (int l = 0; l < schedule.branches; ++l) {
    for (int j = 0; j < schedule.users; ++j) {
      out.by_stream.push_back(
          assemble_effective_channel(i, j, l, episode, schedule, precoders, constants, is_virtual)
              .matrix);
    }
  }
  return out;
}

CMatrix mmse_filter(const ReceiverChannels& ch, int l, double rho) {
  const CMatrix sigma = received_covariance(ch, rho);
  return std::sqrt(rho) * sigma.llt().solve(ch.of(ch.receiver, l));
}

double stream_mse(const ReceiverChannels& ch, int l, double rho) {
  const CMatrix sigma = received_covariance(ch, rho);
  const CMatrix& h = ch.of(ch.receiver, l);
  const CMatrix x = sigma.llt().matrixL().solve(h);
  return static_cast<double>(h.cols()) - rho * x.squaredNorm();
}

double mutual_information_exact(const ReceiverChannels& ch, int l, double rho) {
  const CMatrix b = interference_covariance(ch, l, rho);
  const CMatrix& h = ch.of(ch.receiver, l);
  const CMatrix total = b + rho * h * h.adjoint();
  return to_bits(logdet_hpd(HermitianMatrix(total)) - logdet_hpd(HermitianMatrix(b)));
}

double mmse_sinr_rate(const ReceiverChannels& ch, int l, double rho) {
  const CMatrix b = interference_covariance(ch, l, rho);
  const CMatrix& h = ch.of(ch.receiver, l);
  const Eigen::Index k = h.cols();
  const CMatrix info = CMatrix::Identity(k, k) + rho * h.adjoint() * b.llt().solve(h);
  const CMatrix err = info.llt().solve(CMatrix::Identity(k, k));
  double rate = 0.0;
  for (Eigen::Index s = 0; s < k; ++s) rate -= std::log2(err(s, s).real());
  return rate;
}

TwoUserMi mutual_information_2user_closed(const CVector& w1, const CVector& w2,
                                          const TwoUserChannels& ch, double rho) {
  const double na1 = ch.ha1.squaredNorm();
  const double na2 = ch.ha2.squaredNorm();
  const double nb1 = ch.hb1.squaredNorm();
  const double nb2 = ch.hb2.squaredNorm();
  const double ca = std::norm(ch.present_a);
  const double cb = std::norm(ch.present_b);
  const double w1sq = w1.squaredNorm();
  const double w2sq = w2.squaredNorm();

  const double theta1 = (1.0 + rho * na2) * rho * ca *
                        (w1sq + rho * w1sq * na1 - rho * std::norm(ch.ha1.dot(w1)));
  const double delta1 =
      (1.0 + rho * na2) * (1.0 + rho * ca * w2sq) - rho * rho * ca * std::norm(ch.ha2.dot(w2));
  const double theta2 = (1.0 + rho * nb1) * rho * cb *
                        (w2sq + rho * w2sq * nb2 - rho * std::norm(ch.hb2.dot(w2)));
  const double delta2 =
      (1.0 + rho * nb1) * (1.0 + rho * cb * w1sq) - rho * rho * cb * std::norm(ch.hb1.dot(w1));

  return TwoUserMi{std::log2(1.0 + rho * na1 + theta1 / delta1),
                   std::log2(1.0 + rho * nb2 + theta2 / delta2)};
}

double sum_mi_rayleigh_form(const CVector& w1, const CVector& w2, const TwoUserChannels& ch,
                            double rho) {
  if (std::abs(w1.norm() - 1.0) > kUnitNormTol || std::abs(w2.norm() - 1.0) > kUnitNormTol) {
    throw DomainError("sum_mi_rayleigh_form: precoders must have unit norm");
  }
  const double na1 = ch.ha1.squaredNorm();
  const double na2 = ch.ha2.squaredNorm();
  const double nb1 = ch.hb1.squaredNorm();
  const double nb2 = ch.hb2.squaredNorm();
  const double ca = std::norm(ch.present_a);
  const double cb = std::norm(ch.present_b);
  const double gamma1 = (1.0 + rho * na2) / (rho * ca) + w2.squaredNorm();
  const double gamma2 = (1.0 + rho * nb1) / (rho * cb) + w1.squaredNorm();
  const CMatrix eye = CMatrix::Identity(2, 2);

  const CMatrix r1 = (1.0 + rho * na2) * (eye + rho * perp_projector(ch.ha1));
  const CMatrix r2 = (1.0 + rho * na1) * (gamma1 * eye + rho * perp_projector(ch.ha2));
  const CMatrix q1 = (1.0 + rho * nb2) * (gamma2 * eye + rho * perp_projector(ch.hb1));
  const CMatrix q2 = (1.0 + rho * nb1) * (eye + rho * perp_projector(ch.hb2));
  const auto quad = [](const CMatrix& m, const CVector& v) { return v.dot(m * v).real(); };
  const double c = (1.0 + rho * na1) * (1.0 + rho * nb2);

  return std::log2(1.0 + quad(r1, w1) / quad(r2, w2)) +
         std::log2(1.0 + quad(q2, w2) / quad(q1, w1)) + std::log2(c);
}

double sum_rate(const ChannelEpisode& episode, const PrecoderSet& precoders, double rho,
                const Schedule& schedule, RateMode mode) {
  const auto constants = make_lifting_constants(schedule, episode);
  double total = 0.0;
  for (int i = 0; i < schedule.users; ++i) {
    const auto ch = receiver_channels(i, episode, schedule, precoders, constants, false);
    for (int l = 0; l < schedule.branches; ++l) {
      total += mode == RateMode::kExactMi ? mutual_information_exact(ch, l, rho)
                                          : mmse_sinr_rate(ch, l, rho);
    }
  }
  return total / schedule.total_slots;
}

double rho_from_snr_db(double snr_db, int users) {
  return std::pow(10.0, snr_db / 10.0) / users;
}

double dof_slope(const std::vector<RatePoint>& curve) {
  if (curve.size() < 2) throw DomainError("dof_slope: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : curve) {
    mx += std::log2(p.rho);
    my += p.sum_rate;
  }
  const double n = static_cast<double>(curve.size());
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : curve) {
    const double dx = std::log2(p.rho) - mx;
    sxy += dx * (p.sum_rate - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw DomainError("dof_slope: points must span distinct rho values");
  return sxy / sxx;
}

}  // namespace gmat
