#pragma once

#include "lmles/fem/fe_field.hpp"

namespace lmles {

/// b*(u, v, w) = 1/2 ((u.grad v, w) - (u.grad w, v))
double eval_trilinear_skew(const FeField& u, const FeField& v, const FeField& w);

/// c(u, v, w) = 2 (D(u) v, w) + ((div u) v, w), D(u) the symmetric gradient.
double eval_trilinear_emac(const FeField& u, const FeField& v, const FeField& w);

}  // namespace lmles
