#include "hetdof/precoding.hpp"

#include "hetdof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hetdof {

namespace {

// Beyond this the stacked system is treated as numerically rank deficient.
constexpr double kSingularCondition = 1e12;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Eigen::MatrixXcd backhaul_constraint_matrix(int mb, std::span<const int> sbs,
                                            const ChannelRealization& ch) {
  Eigen::MatrixXcd H(idx(sbs.size()), ch.antennas);
  for (std::size_t r = 0; r < sbs.size(); ++r) {
    H.row(idx(r)) = ch.backhaul_vector(mb, sbs[r]).transpose();
  }
  return H;
}

Eigen::MatrixXcd backhaul_precoder_basis(int mb, std::span<const int> targets,
                                         std::span<const int> nulls,
                                         const ChannelRealization& ch) {
  const std::size_t rows = targets.size() + nulls.size();
  if (static_cast<int>(rows) > ch.antennas) {
    throw InfeasibleShape("MB " + std::to_string(mb) + " needs " + std::to_string(rows) +
                          " antennas, has " + std::to_string(ch.antennas));
  }
  std::set<int> seen;
  for (int sb : targets) seen.insert(sb);
  for (int sb : nulls) {
    if (!seen.insert(sb).second) {
      throw InputError("SB " + std::to_string(sb) + " listed twice in the task of MB " +
                       std::to_string(mb));
    }
  }
  if (seen.size() != rows) throw InputError("duplicate target in the task of MB " + std::to_string(mb));

  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(ch.antennas, idx(targets.size()));
  if (targets.empty()) return basis;

  std::vector<int> stacked(targets.begin(), targets.end());
  stacked.insert(stacked.end(), nulls.begin(), nulls.end());
  const Eigen::MatrixXcd H = backhaul_constraint_matrix(mb, stacked, ch);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) == 0.0 || s(0) / s(s.size() - 1) > kSingularCondition) {
    throw GenericityViolation("rank-deficient backhaul system at MB " + std::to_string(mb));
  }
  // Minimum-norm right inverse restricted to the target columns.
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(idx(rows), idx(targets.size()));
  rhs.topRows(idx(targets.size())).setIdentity();
  basis = svd.solve(rhs);
  return basis;
}

Eigen::VectorXcd solve_backhaul_precoder(const BackhaulTask& task, const ChannelRealization& ch) {
  std::vector<int> targets;
  Eigen::VectorXcd payload(idx(task.targets.size()));
  for (std::size_t k = 0; k < task.targets.size(); ++k) {
    targets.push_back(task.targets[k].first);
    payload(idx(k)) = task.targets[k].second;
  }
  return backhaul_precoder_basis(task.mb, targets, task.nulls, ch) * payload;
}

Eigen::MatrixXcd group_channel_matrix(std::span<const int> sbs, std::span<const int> mts,
                                      const ChannelRealization& ch) {
  Eigen::MatrixXcd G(idx(mts.size()), idx(sbs.size()));
  for (std::size_t m = 0; m < mts.size(); ++m) {
    for (std::size_t k = 0; k < sbs.size(); ++k) G(idx(m), idx(k)) = ch.gain(sbs[k], mts[m]);
  }
  return G;
}

Eigen::MatrixXcd group_inverse(std::span<const int> sbs, std::span<const int> mts,
                               const ChannelRealization& ch) {
  if (sbs.size() != mts.size() || sbs.empty()) {
    throw GenericityViolation("group matrix must be square and non-empty");
  }
  const Eigen::MatrixXcd G = group_channel_matrix(sbs, mts, ch);
  if (!(condition_number(G) <= kSingularCondition)) {
    throw GenericityViolation("singular group matrix at SB " + std::to_string(sbs.front()));
  }
  return G.partialPivLu().inverse();
}

std::map<int, cd> solve_group_combinations(const GroupPlan& plan, const ChannelRealization& ch) {
  if (plan.message_values.size() != plan.mts.size()) {
    throw InputError("group needs one message value per MT");
  }
  const Eigen::MatrixXcd Ginv = group_inverse(plan.sbs, plan.mts, ch);
  const Eigen::VectorXcd w =
      Eigen::Map<const Eigen::VectorXcd>(plan.message_values.data(), idx(plan.message_values.size()));
  const Eigen::VectorXcd x = Ginv * w;
  std::map<int, cd> out;
  for (std::size_t k = 0; k < plan.sbs.size(); ++k) out[plan.sbs[k]] = x(idx(k));
  return out;
}

double verify_zero_forcing(const Eigen::MatrixXcd& rows, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& specified) {
  if (rows.rows() != specified.size() || rows.cols() != x.size()) {
    throw InputError("zero-forcing audit dimensions disagree");
  }
  double worst = 0.0;
  const Eigen::VectorXcd achieved = rows * x;
  for (Eigen::Index k = 0; k < achieved.size(); ++k) {
    worst = std::max(worst, std::abs(achieved(k) - specified(k)) / (1.0 + std::abs(specified(k))));
  }
  return worst;
}

double verify_zero_forcing(const BackhaulTask& task, const Eigen::VectorXcd& x,
                           const ChannelRealization& ch) {
  std::vector<int> stacked;
  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(idx(task.targets.size() + task.nulls.size()));
  for (std::size_t k = 0; k < task.targets.size(); ++k) {
    stacked.push_back(task.targets[k].first);
    spec(idx(k)) = task.targets[k].second;
  }
  stacked.insert(stacked.end(), task.nulls.begin(), task.nulls.end());
  return verify_zero_forcing(backhaul_constraint_matrix(task.mb, stacked, ch), x, spec);
}

double verify_zero_forcing(const GroupPlan& plan, const std::map<int, cd>& x,
                           const ChannelRealization& ch) {
  Eigen::VectorXcd xv(idx(plan.sbs.size()));
  for (std::size_t k = 0; k < plan.sbs.size(); ++k) {
    auto it = x.find(plan.sbs[k]);
    xv(idx(k)) = it == x.end() ? cd{} : it->second;
  }
  const Eigen::VectorXcd w =
      Eigen::Map<const Eigen::VectorXcd>(plan.message_values.data(), idx(plan.message_values.size()));
  return verify_zero_forcing(group_channel_matrix(plan.sbs, plan.mts, ch), xv, w);
}

}  // namespace hetdof
