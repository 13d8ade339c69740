#pragma once

// Forward transverse Mercator and meridian arc, written from the series in
// the third flattening with the conformal latitude taken from the isometric
// latitude. Used only to check the inverse.

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

struct Ellipsoid {
  double a = 6378137.0;
  double f = 1.0 / 298.257223563;
};

inline void tm_forward(double lat_deg, double lon_deg, double lon0_deg, double k0, double fe,
                       double fn, double& x, double& y, const Ellipsoid& el = {}) {
  const double d = std::numbers::pi / 180.0;
  const double f = el.f;
  const double e = std::sqrt(f * (2 - f));
  const double n = f / (2 - f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  const double A = el.a / (1 + n) * (1 + n2 / 4 + n4 / 64 + n6 / 256);
  const std::array<double, 6> alpha = {
      n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800,
      13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360,
      61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440,
      49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600,
      34729 * n5 / 80640 - 3418889 * n6 / 1995840,
      212378941 * n6 / 319334400,
  };
  const double phi = lat_deg * d;
  const double lam = (lon_deg - lon0_deg) * d;
  // isometric latitude -> conformal latitude
  const double psi = std::asinh(std::tan(phi)) - e * std::atanh(e * std::sin(phi));
  const double chi = std::atan(std::sinh(psi));
  const double xip = std::atan2(std::tan(chi), std::cos(lam));
  const double etap = std::atanh(std::cos(chi) * std::sin(lam));
  double xi = xip, eta = etap;
  for (int j = 1; j <= 6; ++j) {
    xi += alpha[j - 1] * std::sin(2 * j * xip) * std::cosh(2 * j * etap);
    eta += alpha[j - 1] * std::cos(2 * j * xip) * std::sinh(2 * j * etap);
  }
  x = fe + k0 * A * eta;
  y = fn + k0 * A * xi;
}

// Meridian arc length from the equator by composite Gauss-Legendre quadrature.
inline double meridian_arc(double phi, const Ellipsoid& el = {}) {
  const double e2 = el.f * (2 - el.f);
  auto m = [&](double t) {
    const double s = std::sin(t);
    return el.a * (1 - e2) / std::pow(1 - e2 * s * s, 1.5);
  };
  static const double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                              -0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const int panels = 200;
  const double h = phi / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) sum += w[k] * m(mid + 0.5 * h * x[k]);
  }
  return sum * 0.5 * h;
}

// Latitude (radians) whose meridian arc equals s, by bisection.
inline double latitude_of_arc(double s, const Ellipsoid& el = {}) {
  double lo = 0.0, hi = std::numbers::pi / 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (meridian_arc(mid, el) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
