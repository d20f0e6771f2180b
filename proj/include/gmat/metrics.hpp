// SPDX-License-Identifier: Apache-2.0
//
// Receiver-side quantities: linear MMSE filters, mutual information in exact
// and closed forms, per-slot sum rate and high-SNR slope estimation.
// Rates are in bits.

#pragma once

#include <utility>
#include <vector>

#include "gmat/channel.hpp"
#include "gmat/numerics.hpp"
#include "gmat/precoders.hpp"
#include "gmat/protocol.hpp"
#include "gmat/schedule.hpp"

namespace gmat {

/// All effective channels seen by one receiver, indexed l * K + j.
struct ReceiverChannels {
  int receiver = 0;
  int users = 0;
  int branches = 0;
  std::vector<CMatrix> by_stream;

  const CMatrix& of(int j, int l) const {
    return by_stream.at(static_cast<std::size_t>(l * users + j));
  }
};

ReceiverChannels receiver_channels(int i, const ChannelEpisode& episode,
                                   const Schedule& schedule, const PrecoderSet& precoders,
                                   const LiftingConstants& constants, bool is_virtual);

/// V_i^l = sqrt(rho) (rho sum H H^H + I)^-1 H_ii^l, a T x K filter.
CMatrix mmse_filter(const ReceiverChannels& ch, int l, double rho);

/// Tr(I - rho H_ii^l^H (rho sum H H^H + I)^-1 H_ii^l).
double stream_mse(const ReceiverChannels& ch, int l, double rho);

/// I(s_i^l; y_i) with every other stream (other users and the receiver's own
/// other branches) treated as Gaussian interference.
double mutual_information_exact(const ReceiverChannels& ch, int l, double rho);

/// Sum over the K streams of s_i^l of log2(1 + SINR) at the output of a
/// per-stream linear MMSE receiver.
double mmse_sinr_rate(const ReceiverChannels& ch, int l, double rho);

struct TwoUserMi {
  double user_a = 0.0;
  double user_b = 0.0;
};

/// log(1 + rho ||h_A(1)||^2 + Theta_1(w1) / Delta_1(w2)) and the user-B
/// counterpart, in bits.
TwoUserMi mutual_information_2user_closed(const CVector& w1, const CVector& w2,
                                          const TwoUserChannels& ch, double rho);

/// log(1 + w1'R1w1 / w2'R2w2) + log(1 + w2'Q2w2 / w1'Q1w1) + log C in bits.
/// Requires ||w1|| = ||w2|| = 1.
double sum_mi_rayleigh_form(const CVector& w1, const CVector& w2, const TwoUserChannels& ch,
                            double rho);

enum class RateMode { kExactMi, kMmseSinr };

/// sum_i sum_l rate(s_i^l) / T over the true channels.
double sum_rate(const ChannelEpisode& episode, const PrecoderSet& precoders, double rho,
                const Schedule& schedule, RateMode mode = RateMode::kExactMi);

struct RatePoint {
  double snr_db = 0.0;
  double rho = 0.0;
  double sum_rate = 0.0;
  int realizations = 0;
  double std_err = 0.0;
};

/// rho = 10^(snr_db / 10) / K.
double rho_from_snr_db(double snr_db, int users);

/// Least-squares slope of sum_rate against log2(rho).
double dof_slope(const std::vector<RatePoint>& curve);

}  // namespace gmat
