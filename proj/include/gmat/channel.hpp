// SPDX-License-Identifier: Apache-2.0
//
// Kronecker-correlated Rayleigh block fading and the delayed-CSIT view of a
// channel episode.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gmat/numerics.hpp"
#include "gmat/schedule.hpp"

namespace gmat {

struct FadingConfig {
  int users = 2;
  double tau_t = 0.0;
  double tau_r = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Channel matrices H(t) for every slot of one protocol run. Row i of H(t)
/// is h_i^T(t), the channel from the K transmit antennas to user i.
class ChannelEpisode {
 public:
  ChannelEpisode(int users, std::vector<CMatrix> slots);

  int users() const { return users_; }
  int slots() const { return static_cast<int>(slots_.size()); }
  const CMatrix& at(int t) const { return slots_.at(static_cast<std::size_t>(t)); }
  /// h_i(t) as a column vector.
  CVector h(int user, int t) const { return at(t).row(user).transpose(); }
  /// h_{i,a}(t): coefficient from antenna a to user i.
  cd coeff(int user, int antenna, int t) const { return at(t)(user, antenna); }

  /// Copy with slot t replaced; used to resample or poison future slots.
  ChannelEpisode with_slot(int t, CMatrix m) const;

 private:
  int users_;
  std::vector<CMatrix> slots_;
};

/// What the transmitter knows at the start of slot `now`: the channels of
/// slots [0, now). Later slots are not stored, so they cannot be reached.
class CsitView {
 public:
  int now() const { return now_; }
  int users() const { return users_; }
  const CMatrix& at(int t) const;
  CVector h(int user, int t) const { return at(t).row(user).transpose(); }

 private:
  friend CsitView csit_at(const ChannelEpisode& episode, int now);
  CsitView(int users, int now, std::vector<CMatrix> known)
      : users_(users), now_(now), known_(std::move(known)) {}

  int users_;
  int now_;
  std::vector<CMatrix> known_;
};

/// Entry (i, j) = tau^|i-j|.
HermitianMatrix correlation_matrix(int users, double tau);

/// Draws every slot as R_r^{1/2} H_w R_t^{1/2}, H_w i.i.d. CN(0, 1).
ChannelEpisode sample_episode(const FadingConfig& cfg, const Schedule& schedule,
                              std::mt19937_64& rng);
ChannelEpisode sample_episode(const FadingConfig& cfg, const Schedule& schedule);

/// 0 <= now < T; exposes slots 0..now-1.
CsitView csit_at(const ChannelEpisode& episode, int now);

}  // namespace gmat
