#ifndef WAVEGEN_KINEMATICS_HPP
#define WAVEGEN_KINEMATICS_HPP

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavegen/demonstration.hpp"

namespace wavegen {

/// One revolute joint: rotation axis in the parent frame, displacement to the
/// next joint in the rotated frame, and angle limits in radians.
struct ChainJoint {
  Eigen::Vector3d axis{0.0, 0.0, 1.0};
  Eigen::Vector3d link_offset{0.0, 0.0, 0.0};
  double limit_min = -3.141592653589793;
  double limit_max = 3.141592653589793;

  double link_length() const { return link_offset.norm(); }
};

/// Serial chain description plus the mapping from trajectory columns to
/// chain joints. Joints without a mapped column hold their rest angle.
struct KinematicChain {
  std::vector<ChainJoint> joints;
  Eigen::Vector3d base_position{0.0, 0.0, 0.0};
  Eigen::Quaterniond base_orientation = Eigen::Quaterniond::Identity();
  std::vector<std::pair<int, int>> joint_map;  // (trajectory column, joint index)
  Eigen::VectorXd rest_angles;                 // one per joint

  int size() const { return static_cast<int>(joints.size()); }
};

inline void validate(const KinematicChain& chain) {
  if (chain.joints.empty())
    throw std::invalid_argument("chain: need at least one joint");
  for (size_t i = 0; i < chain.joints.size(); ++i) {
    const auto& joint = chain.joints[i];
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("chain: joint " + std::to_string(i) +
                                  " axis is not unit length");
    if (!(joint.limit_min <= joint.limit_max))
      throw std::invalid_argument("chain: joint " + std::to_string(i) +
                                  " has min limit above max");
  }
  if (chain.rest_angles.size() != 0 && chain.rest_angles.size() != chain.size())
    throw std::invalid_argument("chain: rest_angles length must equal joint count");
  std::vector<bool> used(chain.joints.size(), false);
  for (const auto& [dof, joint] : chain.joint_map) {
    if (joint < 0 || joint >= chain.size())
      throw std::invalid_argument("chain: joint_map references joint " +
                                  std::to_string(joint) + " outside the chain");
    if (dof < 0)
      throw std::invalid_argument("chain: joint_map references negative column");
    if (used[joint])
      throw std::invalid_argument("chain: joint " + std::to_string(joint) +
                                  " mapped twice");
    used[joint] = true;
  }
}

/// Expand one trajectory row into a full joint-angle vector using the chain's
/// column mapping; unmapped joints sit at rest. Without an explicit map,
/// column i drives joint i (requires no more columns than joints).
inline Eigen::VectorXd chain_angles(const KinematicChain& chain,
                                    const Eigen::VectorXd& row) {
  Eigen::VectorXd q = chain.rest_angles.size() == chain.size()
                          ? chain.rest_angles
                          : Eigen::VectorXd::Zero(chain.size());
  if (chain.joint_map.empty()) {
    if (row.size() > chain.size())
      throw std::invalid_argument("chain: trajectory has " + std::to_string(row.size()) +
                                  " columns but the chain has only " +
                                  std::to_string(chain.size()) +
                                  " joints and no joint map");
    q.head(row.size()) = row;
    return q;
  }
  for (const auto& [dof, joint] : chain.joint_map) {
    if (dof >= row.size())
      throw std::invalid_argument("chain: joint map references trajectory column " +
                                  std::to_string(dof) + " but the trajectory has " +
                                  std::to_string(row.size()));
    q[joint] = row[dof];
  }
  return q;
}

/// Positions of the base and every link tip (N+1 points) for one joint-angle
/// vector: per-joint rotations about their axes composed along the chain.
inline std::vector<Eigen::Vector3d> forward_kinematics(const KinematicChain& chain,
                                                       const Eigen::VectorXd& q) {
  if (q.size() != chain.size())
    throw std::invalid_argument("forward_kinematics: got " + std::to_string(q.size()) +
                                " angles for " + std::to_string(chain.size()) +
                                " joints");
  std::vector<Eigen::Vector3d> points;
  points.reserve(chain.joints.size() + 1);

  Eigen::Vector3d position = chain.base_position;
  Eigen::Quaterniond orientation = chain.base_orientation;
  points.push_back(position);
  for (size_t i = 0; i < chain.joints.size(); ++i) {
    orientation = orientation * Eigen::Quaterniond(
                                    Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)],
                                                      chain.joints[i].axis));
    position = position + orientation * chain.joints[i].link_offset;
    points.push_back(position);
  }
  return points;
}

/// One out-of-limit sample.
struct LimitViolation {
  int frame = 0;
  int joint = 0;
  double value = 0.0;
};

/// List every (frame, joint) pair outside its limits, boundary inclusive.
inline std::vector<LimitViolation> check_joint_limits(const KinematicChain& chain,
                                                      const Demonstration& traj) {
  std::vector<LimitViolation> report;
  for (int frame = 0; frame < traj.length(); ++frame) {
    const Eigen::VectorXd q = chain_angles(chain, traj.samples.row(frame).transpose());
    for (int joint = 0; joint < chain.size(); ++joint)
      if (q[joint] < chain.joints[joint].limit_min ||
          q[joint] > chain.joints[joint].limit_max)
        report.push_back({frame, joint, q[joint]});
  }
  return report;
}

inline KinematicChain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain config: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }

  try {
    KinematicChain chain;
    for (const auto& entry : doc.at("joints")) {
      ChainJoint joint;
      const auto axis = entry.at("axis").get<std::array<double, 3>>();
      const auto offset = entry.at("link_offset").get<std::array<double, 3>>();
      const auto limits = entry.at("limits").get<std::array<double, 2>>();
      joint.axis = Eigen::Vector3d(axis[0], axis[1], axis[2]);
      joint.link_offset = Eigen::Vector3d(offset[0], offset[1], offset[2]);
      joint.limit_min = limits[0];
      joint.limit_max = limits[1];
      chain.joints.push_back(joint);
    }
    if (doc.contains("base_pose")) {
      const auto& base = doc.at("base_pose");
      if (base.contains("position")) {
        const auto p = base.at("position").get<std::array<double, 3>>();
        chain.base_position = Eigen::Vector3d(p[0], p[1], p[2]);
      }
      if (base.contains("rpy")) {
        const auto rpy = base.at("rpy").get<std::array<double, 3>>();
        chain.base_orientation =
            Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX());
      }
    }
    if (doc.contains("joint_map"))
      for (const auto& entry : doc.at("joint_map")) {
        const auto pair = entry.get<std::array<int, 2>>();
        chain.joint_map.emplace_back(pair[0], pair[1]);
      }
    if (doc.contains("rest_angles")) {
      const auto rest = doc.at("rest_angles").get<std::vector<double>>();
      chain.rest_angles =
          Eigen::Map<const Eigen::VectorXd>(rest.data(), static_cast<Eigen::Index>(rest.size()));
    }
    validate(chain);
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": bad chain config: " + e.what());
  }
}

}  // namespace wavegen

#endif  // WAVEGEN_KINEMATICS_HPP
