// SPDX-License-Identifier: Apache-2.0

#include "gmat/channel.hpp"

#include <cmath>
#include <string>

namespace gmat {

void FadingConfig::validate() const {
  if (users < 2) throw DomainError("FadingConfig: users must be >= 2");
  if (!(tau_t >= 0.0 && tau_t < 1.0)) throw DomainError("FadingConfig: tau_t outside [0,1)");
  if (!(tau_r >= 0.0 && tau_r < 1.0)) throw DomainError("FadingConfig: tau_r outside [0,1)");
}

ChannelEpisode::ChannelEpisode(int users, std::vector<CMatrix> slots)
    : users_(users), slots_(std::move(slots)) {
  for (const auto& m : slots_) {
    if (m.rows() != users || m.cols() != users) {
      throw DomainError("ChannelEpisode: every slot must be K x K");
    }
  }
}

ChannelEpisode ChannelEpisode::with_slot(int t, CMatrix m) const {
  auto copy = slots_;
  copy.at(static_cast<std::size_t>(t)) = std::move(m);
  return ChannelEpisode(users_, std::move(copy));
}

const CMatrix& CsitView::at(int t) const {
  if (t < 0 || t >= now_) {
    throw DomainError("CsitView: slot " + std::to_string(t) +
                      " is not known at slot " + std::to_string(now_));
  }
  return known_[static_cast<std::size_t>(t)];
}

HermitianMatrix correlation_matrix(int users, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("correlation_matrix: tau outside [0,1)");
  if (users < 1) throw DomainError("correlation_matrix: users must be positive");
  CMatrix r(users, users);
  for (int i = 0; i < users; ++i) {
    for (int j = 0; j < users; ++j) r(i, j) = std::pow(tau, std::abs(i - j));
  }
  return HermitianMatrix(r);
}

ChannelEpisode sample_episode(const FadingConfig& cfg, const Schedule& schedule,
                              std::mt19937_64& rng) {
  cfg.validate();
  if (cfg.users != schedule.users) {
    throw DomainError("sample_episode: config and schedule disagree on K");
  }
  const int k = cfg.users;
  const CMatrix rt = hermitian_sqrt(correlation_matrix(k, cfg.tau_t));
  const CMatrix rr = hermitian_sqrt(correlation_matrix(k, cfg.tau_r));
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

  std::vector<CMatrix> slots;
  slots.reserve(static_cast<std::size_t>(schedule.total_slots));
  for (int t = 0; t < schedule.total_slots; ++t) {
    CMatrix hw(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        hw(i, j) = cd(re, im);
      }
    }
    slots.push_back(rr * hw * rt);
  }
  return ChannelEpisode(k, std::move(slots));
}

ChannelEpisode sample_episode(const FadingConfig& cfg, const Schedule& schedule) {
  std::mt19937_64 rng(cfg.seed);
  return sample_episode(cfg, schedule, rng);
}

CsitView csit_at(const ChannelEpisode& episode, int now) {
  if (now < 0 || now >= episode.slots()) {
    throw DomainError("csit_at: slot " + std::to_string(now) + " outside [0, " +
                      std::to_string(episode.slots()) + ")");
  }
  std::vector<CMatrix> known;
  known.reserve(static_cast<std::size_t>(now));
  for (int t = 0; t < now; ++t) known.push_back(episode.at(t));
  return CsitView(episode.users(), now, std::move(known));
}

}  // namespace gmat
