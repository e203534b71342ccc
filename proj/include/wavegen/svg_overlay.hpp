#ifndef WAVEGEN_SVG_OVERLAY_HPP
#define WAVEGEN_SVG_OVERLAY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavegen/demonstration.hpp"
#include "wavegen/kinematics.hpp"

namespace wavegen {

enum class ProjectionPlane { Xy, Xz, Yz };

inline ProjectionPlane parse_plane(const std::string& name) {
  if (name == "xy") return ProjectionPlane::Xy;
  if (name == "xz") return ProjectionPlane::Xz;
  if (name == "yz") return ProjectionPlane::Yz;
  throw std::invalid_argument("unknown projection plane: " + name +
                              " (expected xy, xz or yz)");
}

namespace detail {

inline Eigen::Vector2d project(const Eigen::Vector3d& p, ProjectionPlane plane) {
  switch (plane) {
    case ProjectionPlane::Xy: return {p.x(), p.y()};
    case ProjectionPlane::Xz: return {p.x(), p.z()};
    case ProjectionPlane::Yz: return {p.y(), p.z()};
  }
  throw std::logic_error("bad projection plane");
}

inline std::string format_mm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

/// Render frames 0, stride, 2*stride, ... of a trajectory as one overlaid
/// SVG: one polyline through the chain's joint positions per rendered frame,
/// orthographically projected, later frames more opaque. Output bytes are a
/// pure function of the inputs. Coordinates are millimeters with `scale`
/// millimeters per meter.
inline std::string render_overlay(const KinematicChain& chain, const Demonstration& traj,
                                  int stride, ProjectionPlane plane,
                                  double scale = 1000.0) {
  if (traj.length() == 0) throw std::invalid_argument("render_overlay: empty trajectory");
  if (stride < 1) throw std::invalid_argument("render_overlay: stride must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("render_overlay: scale must be > 0");

  std::vector<std::vector<Eigen::Vector2d>> frames;
  for (int frame = 0; frame < traj.length(); frame += stride) {
    const auto points =
        forward_kinematics(chain, chain_angles(chain, traj.samples.row(frame).transpose()));
    std::vector<Eigen::Vector2d> flat;
    flat.reserve(points.size());
    for (const auto& p : points) flat.push_back(detail::project(p, plane));
    frames.push_back(std::move(flat));
  }

  Eigen::Vector2d lo = frames.front().front();
  Eigen::Vector2d hi = lo;
  for (const auto& frame : frames)
    for (const auto& p : frame) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }

  const double margin = 5.0;  // mm
  const double width = (hi.x() - lo.x()) * scale + 2.0 * margin;
  const double height = (hi.y() - lo.y()) * scale + 2.0 * margin;
  // SVG y grows downward; flip the vertical axis so the projection reads
  // like a plot.
  auto to_doc = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d((p.x() - lo.x()) * scale + margin,
                           (hi.y() - p.y()) * scale + margin);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << detail::format_mm(width) << "mm\" height=\"" << detail::format_mm(height)
      << "mm\" viewBox=\"0 0 " << detail::format_mm(width) << " "
      << detail::format_mm(height) << "\">\n";

  const size_t count = frames.size();
  for (size_t i = 0; i < count; ++i) {
    const double opacity =
        count == 1 ? 1.0
                   : 0.15 + 0.85 * static_cast<double>(i) / static_cast<double>(count - 1);
    char opacity_buf[16];
    std::snprintf(opacity_buf, sizeof(opacity_buf), "%.4f", opacity);
    out << "  <polyline points=\"";
    for (size_t j = 0; j < frames[i].size(); ++j) {
      if (j) out << " ";
      const Eigen::Vector2d p = to_doc(frames[i][j]);
      out << detail::format_mm(p.x()) << "," << detail::format_mm(p.y());
    }
    out << "\" fill=\"none\" stroke=\"#2266aa\" stroke-width=\"1.2\" stroke-opacity=\""
        << opacity_buf << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace wavegen

#endif  // WAVEGEN_SVG_OVERLAY_HPP
