#pragma once

#include "ucp/types.hpp"

namespace ucp {

/// Sign-exact orientation test. Positive when a, b, c turn counter-clockwise,
/// negative when clockwise, zero when collinear. The magnitude is only an
/// approximation of twice the signed area.
double orient2d(const Point2& a, const Point2& b, const Point2& c);

/// Sign-exact in-circle test. Positive when d lies strictly inside the
/// circumcircle of the counter-clockwise triangle a, b, c.
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

}  // namespace ucp
