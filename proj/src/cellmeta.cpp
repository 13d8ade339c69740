#include "ucp/cellmeta.hpp"

#include "ucp/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ucp {

void validate(const ProjectionSpec& s) {
  if (!(s.a > 0.0)) throw ConfigError("projection: semi-major axis must be positive");
  if (!(s.inv_f > 1.0)) throw ConfigError("projection: inverse flattening must exceed 1");
  if (!(s.scale > 0.0)) throw ConfigError("projection: scale factor must be positive");
  if (!(std::abs(s.central_meridian) <= 180.0)) throw ConfigError("projection: bad central meridian");
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// tan(conformal latitude) from tan(geodetic latitude).
double taupf(double tau, double e) {
  const double tau1 = std::hypot(1.0, tau);
  const double sig = std::sinh(e * std::atanh(e * tau / tau1));
  return std::hypot(1.0, sig) * tau - sig * tau1;
}

// Inverse of taupf by Newton's method.
double tauf(double taup, double e) {
  const double e2m = 1.0 - e * e;
  const double tol = 0.1 * std::sqrt(std::numeric_limits<double>::epsilon());
  double tau = taup / e2m;
  for (int i = 0; i < 8; ++i) {
    const double tp = taupf(tau, e);
    const double dtau = (taup - tp) * (1.0 + e2m * tau * tau) /
                        (e2m * std::hypot(1.0, tau) * std::hypot(1.0, tp));
    tau += dtau;
    if (!(std::abs(dtau) >= tol * std::max(1.0, std::abs(tau)))) break;
  }
  return tau;
}

std::array<double, 6> beta_coefficients(double n) {
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  return {
      n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 + 96199 * n6 / 604800,
      n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720,
      17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720,
      4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600,
      4583 * n5 / 161280 - 108847 * n6 / 3991680,
      20648693 * n6 / 638668800,
  };
}

}  // namespace

GeoPoint inverse_transverse_mercator(double x, double y, const ProjectionSpec& spec) {
  const double f = spec.flattening();
  const double n = f / (2.0 - f);
  const double e = std::sqrt(f * (2.0 - f));
  const double n2 = n * n;
  const double A = spec.a / (1.0 + n) * (1.0 + n2 / 4 + n2 * n2 / 64 + n2 * n2 * n2 / 256);

  const double xi = (y - spec.false_northing) / (spec.scale * A);
  const double eta = (x - spec.false_easting) / (spec.scale * A);
  // Beyond roughly 35 degrees of longitude from the meridian the series no
  // longer converges to useful accuracy.
  if (!std::isfinite(xi) || !std::isfinite(eta) || std::abs(eta) > 0.6 ||
      std::abs(xi) > std::numbers::pi / 2)
    throw OutOfDomain("point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") is outside the transverse Mercator domain");

  const auto beta = beta_coefficients(n);
  double xip = xi, etap = eta;
  for (int j = 1; j <= 6; ++j) {
    xip -= beta[j - 1] * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
    etap -= beta[j - 1] * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
  }
  const double s = std::sinh(etap), c = std::cos(xip);
  const double taup = std::sin(xip) / std::hypot(s, c);
  const double lam = std::atan2(s, c);

  GeoPoint g;
  g.lat = std::atan(tauf(taup, e)) / kDeg;
  g.lon = spec.central_meridian + lam / kDeg;
  g.in_zone = std::abs(lam / kDeg) <= 3.5;
  return g;
}

Maybe cell_mean_elevation(const Box2& cell, const HeightRaster& dem) {
  const PixelWindow w = centers_in(dem.geometry, cell);
  double sum = 0.0;
  long count = 0;
  for (int r = w.row_begin; r < w.row_end; ++r)
    for (int c = w.col_begin; c < w.col_end; ++c)
      if (!dem.is_nodata(r, c)) {
        sum += dem(r, c);
        ++count;
      }
  if (count == 0) return std::nullopt;
  return sum / count;
}

CellMeta cell_meta(const Box2& cell, const HeightRaster* dem, const ProjectionSpec& spec) {
  CellMeta m;
  const Point2 c = cell.center();
  m.x = c.x();
  m.y = c.y();
  const GeoPoint g = inverse_transverse_mercator(m.x, m.y, spec);
  m.lat = g.lat;
  m.lon = g.lon;
  if (dem) m.z_mean = cell_mean_elevation(cell, *dem);
  const Point2 size = cell.sizes();
  m.shape_length = 2.0 * (size.x() + size.y());
  m.shape_area = size.x() * size.y();
  return m;
}

}  // namespace ucp
