#pragma once

#include <functional>
#include <map>

#include <Eigen/Core>

#include "lmles/mesh.hpp"

namespace lmles {

using VelocityData = std::function<Eigen::Vector2d(const Point&, double t)>;

enum class BoundaryKind : std::uint8_t {
  Dirichlet,      ///< full velocity prescribed (zero when no data is given)
  Natural,        ///< zero traction, nothing constrained
  NoPenetration,  ///< normal component zero, tangential free
};

struct BoundaryPrescription {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  VelocityData value;  ///< Dirichlet data; empty means zero
};

/// Velocity prescription per boundary marker.
class BoundaryConditions {
 public:
  void set(BoundaryMarker marker, BoundaryPrescription prescription);
  const BoundaryPrescription* find(BoundaryMarker marker) const;

  /// Throws ValidationError if a marker used by the mesh has no prescription.
  void validate_for(const Mesh& mesh) const;
  /// True when no part of the boundary leaves the normal velocity free, so
  /// the pressure is determined only up to a constant.
  bool encloses(const Mesh& mesh) const;

  /// Wall -> no-slip.
  static BoundaryConditions no_slip();
  /// Wall -> Dirichlet data (e.g. an exact solution).
  static BoundaryConditions dirichlet(VelocityData data);
  /// Wall -> no-slip, Inflow -> time-independent profile, Outflow -> natural
  /// (or no-penetration when `no_penetration_outflow`).
  static BoundaryConditions channel(std::function<Eigen::Vector2d(const Point&)> inflow,
                                    bool no_penetration_outflow = false);

 private:
  std::map<BoundaryMarker, BoundaryPrescription> by_marker_;
};

}  // namespace lmles
