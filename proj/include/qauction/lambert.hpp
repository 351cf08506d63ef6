#pragma once

namespace qa {

// Principal branch of the inverse of w -> w e^w, for z > -1/e.
// Halley iteration from a piecewise initial guess; residual |w e^w - z|
// lands well under 1e-13 on (-1/e, 10].
double lambert_w(double z);

}  // namespace qa
