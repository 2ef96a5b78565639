#include "lmles/forms/trilinear.hpp"

#include <array>

#include "lmles/error.hpp"
#include "lmles/fem/integrate.hpp"

namespace lmles {

namespace {

constexpr int kDegree = 8;

void check_same_space(const FeField& u, const FeField& v, const FeField& w) {
  for (const FeField* f : {&u, &v, &w}) {
    if (f->space().family() != Family::VectorP2) {
      throw SpaceMismatch("trilinear forms need VectorP2 fields");
    }
    if (!f->space().same_mesh(u.space())) throw SpaceMismatch("trilinear forms: mesh mismatch");
  }
}

}  // namespace

double eval_trilinear_skew(const FeField& u, const FeField& v, const FeField& w) {
  check_same_space(u, v, w);
  const std::array<const FeField*, 3> fields{&u, &v, &w};
  return integrate_field(
      fields,
      [](const Point&, std::span<const FieldSample> s) {
        const Eigen::Vector2d& uu = s[0].value;
        return 0.5 * ((s[1].gradient * uu).dot(s[2].value) - (s[2].gradient * uu).dot(s[1].value));
      },
      kDegree);
}

double eval_trilinear_emac(const FeField& u, const FeField& v, const FeField& w) {
  check_same_space(u, v, w);
  const std::array<const FeField*, 3> fields{&u, &v, &w};
  return integrate_field(
      fields,
      [](const Point&, std::span<const FieldSample> s) {
        const Eigen::Matrix2d& g = s[0].gradient;
        const Eigen::Matrix2d sym2 = g + g.transpose();
        return (sym2 * s[1].value).dot(s[2].value) + g.trace() * s[1].value.dot(s[2].value);
      },
      kDegree);
}

}  // namespace lmles
