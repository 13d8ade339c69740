#include "ucp/predicates.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ucp {
namespace {

// Floating-point expansion arithmetic: a value is held as a sum of
// non-overlapping doubles in increasing magnitude, so sums and products are
// exact and the sign is the sign of the last component.
class Expansion {
 public:
  Expansion() = default;
  explicit Expansion(double v) {
    if (v != 0.0) terms_.push_back(v);
  }

  static Expansion difference(double a, double b) {
    const double x = a - b;
    const double bv = a - x;
    const double av = x + bv;
    const double err = (a - av) + (bv - b);
    Expansion e;
    if (err != 0.0) e.terms_.push_back(err);
    if (x != 0.0) e.terms_.push_back(x);
    return e;
  }

  void grow(double b) {
    std::vector<double> out;
    out.reserve(terms_.size() + 1);
    double q = b;
    for (double e : terms_) {
      const double x = q + e;
      const double bv = x - q;
      const double av = x - bv;
      const double err = (q - av) + (e - bv);
      q = x;
      if (err != 0.0) out.push_back(err);
    }
    if (q != 0.0) out.push_back(q);
    terms_ = std::move(out);
  }

  Expansion operator+(const Expansion& o) const {
    Expansion r = *this;
    for (double t : o.terms_) r.grow(t);
    return r;
  }

  Expansion operator-(const Expansion& o) const {
    Expansion r = *this;
    for (double t : o.terms_) r.grow(-t);
    return r;
  }

  Expansion operator*(double b) const {
    Expansion r;
    for (double e : terms_) {
      const double p = e * b;
      r.grow(std::fma(e, b, -p));
      r.grow(p);
    }
    return r;
  }

  Expansion operator*(const Expansion& o) const {
    Expansion r;
    for (double t : o.terms_) r = r + (*this * t);
    return r;
  }

  double sign() const { return terms_.empty() ? 0.0 : terms_.back(); }

 private:
  std::vector<double> terms_;
};

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

}  // namespace

double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double left = (a.x() - c.x()) * (b.y() - c.y());
  const double right = (a.y() - c.y()) * (b.x() - c.x());
  const double det = left - right;
  if (std::abs(det) > kOrientBound * (std::abs(left) + std::abs(right))) return det;

  const Expansion acx = Expansion::difference(a.x(), c.x());
  const Expansion bcy = Expansion::difference(b.y(), c.y());
  const Expansion acy = Expansion::difference(a.y(), c.y());
  const Expansion bcx = Expansion::difference(b.x(), c.x());
  return (acx * bcy - acy * bcx).sign();
}

double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kInCircleBound * permanent) return det;

  const Expansion eadx = Expansion::difference(a.x(), d.x());
  const Expansion eady = Expansion::difference(a.y(), d.y());
  const Expansion ebdx = Expansion::difference(b.x(), d.x());
  const Expansion ebdy = Expansion::difference(b.y(), d.y());
  const Expansion ecdx = Expansion::difference(c.x(), d.x());
  const Expansion ecdy = Expansion::difference(c.y(), d.y());

  const Expansion ealift = eadx * eadx + eady * eady;
  const Expansion eblift = ebdx * ebdx + ebdy * ebdy;
  const Expansion eclift = ecdx * ecdx + ecdy * ecdy;
  const Expansion bc = ebdx * ecdy - ecdx * ebdy;
  const Expansion ca = ecdx * eady - eadx * ecdy;
  const Expansion ab = eadx * ebdy - ebdx * eady;
  return (ealift * bc + eblift * ca + eclift * ab).sign();
}

}  // namespace ucp
