// SPDX-License-Identifier: Apache-2.0
//
// Message-generation structure of the K-phase protocol and the effective
// channels it induces at each receiver.
//
// Users, branches and slots are 0-based throughout. Branch l of user j is the
// symbol vector s_j^l sent alone in phase-1 slot K*l + j. Phase k >= 2 carries
// order-k messages, one per k-subset of users, in canonical lexicographic
// subset order.

#pragma once

#include <map>
#include <vector>

#include "gmat/channel.hpp"
#include "gmat/numerics.hpp"
#include "gmat/schedule.hpp"

namespace gmat {

/// Nonzero-block layout of an order-k message generation matrix.
struct GenMatrixTemplate {
  int users = 0;
  int order = 0;
  std::vector<std::vector<int>> rows;  // each row: sorted k-subset of users

  int row_of(const std::vector<int>& subset) const;
  bool contains(int row, int user) const;
};

GenMatrixTemplate gen_matrix_template(int users, int order);

/// Order-2 combining vectors w_ji^l, stored as the per-user generation blocks
/// W_j^l(2) (Q_2 x K). Row r of W_j^l(2) is w_ji^l^T when row r is the pair
/// {i, j}, and zero otherwise.
class PrecoderSet {
 public:
  explicit PrecoderSet(const Schedule& schedule);

  int users() const { return users_; }
  int branches() const { return branches_; }

  CVector w(int j, int i, int l) const;
  void set_w(int j, int i, int l, const CVector& v);

  const CMatrix& block(int j, int l) const { return blocks_[index(j, l)]; }
  CMatrix& block(int j, int l) { return blocks_[index(j, l)]; }
  const GenMatrixTemplate& pairs() const { return pairs_; }

  /// sum over l, j of ||W_j^l(2)||_F^2
  double power() const;
  void scale(double factor);

 private:
  std::size_t index(int j, int l) const {
    return static_cast<std::size_t>(l * users_ + j);
  }

  int users_;
  int branches_;
  GenMatrixTemplate pairs_;
  std::vector<CMatrix> blocks_;
};

/// K * T_2, the order-2 power budget.
double power_budget(const Schedule& schedule);

/// Scales the whole set so its power equals the budget exactly.
void normalize_to_budget(PrecoderSet& precoders, const Schedule& schedule);

/// Scales the whole set down onto the budget if it exceeds it.
void project_to_budget(PrecoderSet& precoders, const Schedule& schedule);

/// Constant combiners C(k) and channel-dependent scalings Lambda^l(k) used to
/// lift W_j^l(k) to W_j^l(k+1) = C(k) Lambda^l(k) W_j^l(k), k = 2..K-1.
/// C(k) does not depend on the branch l.
struct LiftingConstants {
  std::vector<CMatrix> combiners;              // [k]
  std::vector<std::vector<CVector>> scalings;  // [k][l], diagonal of Lambda^l(k)

  const CMatrix& combiner(int k) const { return combiners.at(static_cast<std::size_t>(k)); }
  const CVector& scaling(int k, int l) const {
    return scalings.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(l));
  }
};

/// Masked Vandermonde combiner for the lift out of phase k.
CMatrix combiner_matrix(const Schedule& schedule, int k);

LiftingConstants make_lifting_constants(const Schedule& schedule,
                                        const ChannelEpisode& episode);

/// Same combiners with every Lambda set to identity; this is what the
/// transmitter can form from delayed CSIT alone.
LiftingConstants make_virtual_lifting_constants(const Schedule& schedule);

CMatrix lift_generation_matrix(const CMatrix& w_k, const CMatrix& combiner,
                               const CVector& scaling);

/// Transmit antenna that carries branch l's phase-k messages.
int phase_antenna(const Schedule& schedule, int k, int l);

/// Slot of row r of branch l's block in phase k.
int phase_slot(const Schedule& schedule, int k, int l, int r);

struct EffectiveChannel {
  CMatrix matrix;  // T x K
  int receiver = 0;
  int owner = 0;
  int branch = 0;
  bool is_virtual = false;
};

/// H_ij^l: how s_j^l reaches receiver i over all T slots. With
/// is_virtual = true every present-slot coefficient (the D and Lambda
/// diagonals) is replaced by 1, so only phase-1 channels are used.
EffectiveChannel assemble_effective_channel(int i, int j, int l,
                                            const ChannelEpisode& episode,
                                            const Schedule& schedule,
                                            const PrecoderSet& precoders,
                                            const LiftingConstants& constants,
                                            bool is_virtual);

EffectiveChannel assemble_virtual_channel(int i, int j, int l, const CsitView& csit,
                                          const Schedule& schedule,
                                          const PrecoderSet& precoders);

/// T x Q_2 operator mapping W_j^l(2) onto rows T_1..T-1 of the virtual
/// H_ij^l (zero on phase-1 rows): identity at branch l's phase-2 block and
/// C(k-1)...C(2) at later phases.
CMatrix branch_lift_operator(const Schedule& schedule, int l);

}  // namespace gmat
