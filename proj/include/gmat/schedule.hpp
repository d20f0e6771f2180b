// SPDX-License-Identifier: Apache-2.0
//
// Timing arithmetic of the K-phase delayed-CSIT protocol.

#pragma once

#include <cstdint>
#include <vector>

namespace gmat {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Phase layout for K users. Vectors indexed by phase k are sized K + 1 and
/// entry 0 is unused, so slots_in_phase[k] is T_k. Slot indices are 0-based.
struct Schedule {
  int users = 0;                        // K
  int branches = 0;                     // L = (K-1)!
  std::vector<int> slots_in_phase;      // T_k = L K / k
  std::vector<int> messages_in_phase;   // Q_k = binomial(K, k)
  std::vector<int> blocks_in_phase;     // l_k = T_k / Q_k
  std::vector<int> phase_start;         // first slot of phase k
  int total_slots = 0;                  // T
  Rational dof;                         // K^2 L / T

  int t(int k) const { return slots_in_phase.at(static_cast<std::size_t>(k)); }
  int q(int k) const { return messages_in_phase.at(static_cast<std::size_t>(k)); }
  int start(int k) const { return phase_start.at(static_cast<std::size_t>(k)); }

  /// Phase-1 slot carrying s_j^l (user j, branch l, both 0-based).
  int phase1_slot(int user, int branch) const { return users * branch + user; }

  /// Row offset of branch l's block inside phase k (2 <= k <= K-1), the
  /// quantity (ceil((l+1) l_k / L) - 1) Q_k.
  int block_offset(int k, int branch) const;
};

inline constexpr int kMaxUsers = 6;

Schedule make_schedule(int users, int max_users = kMaxUsers);

std::int64_t binomial(int n, int k);

}  // namespace gmat
