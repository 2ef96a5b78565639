#include "lmles/stepper/boundary_conditions.hpp"

#include <string>

#include "lmles/error.hpp"

namespace lmles {

void BoundaryConditions::set(BoundaryMarker marker, BoundaryPrescription prescription) {
  by_marker_[marker] = std::move(prescription);
}

const BoundaryPrescription* BoundaryConditions::find(BoundaryMarker marker) const {
  auto it = by_marker_.find(marker);
  return it == by_marker_.end() ? nullptr : &it->second;
}

void BoundaryConditions::validate_for(const Mesh& mesh) const {
  for (auto marker : {BoundaryMarker::Wall, BoundaryMarker::Inflow, BoundaryMarker::Outflow}) {
    if (mesh.has_marker(marker) && !find(marker)) {
      throw ValidationError("no boundary prescription for marker '" +
                            std::string(to_string(marker)) + "'");
    }
  }
}

bool BoundaryConditions::encloses(const Mesh& mesh) const {
  for (auto marker : {BoundaryMarker::Wall, BoundaryMarker::Inflow, BoundaryMarker::Outflow}) {
    if (!mesh.has_marker(marker)) continue;
    const auto* p = find(marker);
    if (p && p->kind == BoundaryKind::Natural) return false;
  }
  return true;
}

BoundaryConditions BoundaryConditions::no_slip() {
  BoundaryConditions bc;
  bc.set(BoundaryMarker::Wall, {BoundaryKind::Dirichlet, {}});
  return bc;
}

BoundaryConditions BoundaryConditions::dirichlet(VelocityData data) {
  BoundaryConditions bc;
  bc.set(BoundaryMarker::Wall, {BoundaryKind::Dirichlet, std::move(data)});
  return bc;
}

BoundaryConditions BoundaryConditions::channel(std::function<Eigen::Vector2d(const Point&)> inflow,
                                               bool no_penetration_outflow) {
  BoundaryConditions bc;
  bc.set(BoundaryMarker::Wall, {BoundaryKind::Dirichlet, {}});
  bc.set(BoundaryMarker::Inflow,
         {BoundaryKind::Dirichlet,
          [inflow = std::move(inflow)](const Point& x, double) { return inflow(x); }});
  bc.set(BoundaryMarker::Outflow,
         {no_penetration_outflow ? BoundaryKind::NoPenetration : BoundaryKind::Natural, {}});
  return bc;
}

}  // namespace lmles
