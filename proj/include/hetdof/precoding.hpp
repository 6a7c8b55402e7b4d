#pragma once

// Zero-forcing solves for both layers.
//
// Backhaul: SB k served by MB i receives h_{i,k}^T x_i, so a precoder x
// delivering payload w_k to each target and 0 to each null solves H x = W
// with H stacking h^T rows (targets first, then nulls).
//
// Transmission: a group of A SBs serving A MTs transmits x with G x = w,
// G(m, k) = gain(sb_k -> mt_m).

#include "hetdof/channel.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace hetdof {

/// Relative residual accepted from the linear solvers.
inline constexpr double kSolverTolerance = 1e-10;

struct BackhaulTask {
  int mb = 0;
  std::vector<std::pair<int, cd>> targets;  ///< (sb, payload)
  std::vector<int> nulls;
};

struct GroupPlan {
  std::vector<int> sbs;
  std::vector<int> mts;
  std::vector<cd> message_values;  ///< one per MT
};

/// Stacked constraint matrix: rows h_{mb,sb}^T for `sbs` in order.
Eigen::MatrixXcd backhaul_constraint_matrix(int mb, std::span<const int> sbs,
                                            const ChannelRealization& ch);

/// N x |targets| map from target payloads to the minimum-norm precoder that
/// also nulls at `nulls`. Column k is the precoder delivering 1 to target k
/// and 0 everywhere else.
/// Throws InfeasibleShape when |targets|+|nulls| > N and GenericityViolation
/// when the stacked system is rank deficient.
Eigen::MatrixXcd backhaul_precoder_basis(int mb, std::span<const int> targets,
                                         std::span<const int> nulls,
                                         const ChannelRealization& ch);

Eigen::VectorXcd solve_backhaul_precoder(const BackhaulTask& task, const ChannelRealization& ch);

/// A x A matrix G of the group (rows MTs, columns SBs).
Eigen::MatrixXcd group_channel_matrix(std::span<const int> sbs, std::span<const int> mts,
                                      const ChannelRealization& ch);

/// G^{-1}; throws GenericityViolation when G is singular or the shapes differ.
Eigen::MatrixXcd group_inverse(std::span<const int> sbs, std::span<const int> mts,
                               const ChannelRealization& ch);

/// SB -> transmitted scalar so that every group MT receives exactly its message.
std::map<int, cd> solve_group_combinations(const GroupPlan& plan, const ChannelRealization& ch);

/// max_k |(rows x)_k - specified_k| / (1 + |specified_k|); zero for no rows.
double verify_zero_forcing(const Eigen::MatrixXcd& rows, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& specified);
double verify_zero_forcing(const BackhaulTask& task, const Eigen::VectorXcd& x,
                           const ChannelRealization& ch);
/// Residual of the MT samples for the group's SBs transmitting `x` alone.
double verify_zero_forcing(const GroupPlan& plan, const std::map<int, cd>& x,
                           const ChannelRealization& ch);

}  // namespace hetdof
