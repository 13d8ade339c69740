#include "doctest.h"

#include "ucp/direction.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ucp;

namespace {

StreetSegment seg_at(double azimuth, double length) {
  StreetSegment s;
  s.azimuth = azimuth;
  s.length = length;
  s.cell = 0;
  return s;
}

AzimuthHistogram hist_of(std::vector<double> L) {
  AzimuthHistogram h;
  h.n = static_cast<int>(L.size());
  h.h = 180.0 / h.n;
  h.L = std::move(L);
  return h;
}

Polyline line_at(Point2 c, double azimuth_deg, double half) {
  const double a = azimuth_deg * std::numbers::pi / 180.0;
  const Point2 d(std::sin(a), std::cos(a));
  return Polyline{{c - half * d, c + half * d}};
}

}  // namespace

TEST_CASE("line azimuth") {
  CHECK(line_azimuth({0, 0}, {0, 10}) == 0.0);
  CHECK(line_azimuth({0, 10}, {0, 0}) == 0.0);
  CHECK(line_azimuth({0, 0}, {10, 0}) == 90.0);
  CHECK(line_azimuth({0, 0}, {1, 1}) == doctest::Approx(45.0));
  CHECK(line_azimuth({1, 1}, {0, 0}) == line_azimuth({0, 0}, {1, 1}));
  CHECK(line_azimuth({0, 0}, {-1, 1}) == doctest::Approx(135.0));
}

TEST_CASE("splitting by grid") {
  const GridSpec g = make_grid(make_box(0, 0, 1000, 1000), 500);
  std::vector<Polyline> one{Polyline{{{0.0, 250.0}, {1000.0, 250.0}}}};
  auto s = split_segments_by_grid(one, g);
  REQUIRE(s.size() == 2);
  CHECK(s[0].length == 500.0);
  CHECK(s[1].length == 500.0);
  CHECK(s[0].cell == 2);  // southern row
  CHECK(s[1].cell == 3);

  std::vector<Polyline> inside{Polyline{{{10.0, 10.0}, {100.0, 20.0}, {200.0, 150.0}}}};
  s = split_segments_by_grid(inside, g);
  REQUIRE(s.size() == 2);
  CHECK(s[0].cell == s[1].cell);

  std::vector<Polyline> diag{Polyline{{{300.0, 310.0}, {720.0, 690.0}}}};
  s = split_segments_by_grid(diag, g);
  double total = 0.0;
  for (const auto& x : s) total += x.length;
  CHECK(std::abs(total - (Point2(720, 690) - Point2(300, 310)).norm()) <= 1e-9 * total);
  CHECK(s.size() == 3);  // crosses x=500 and y=500 at different points
}

TEST_CASE("histograms") {
  std::vector<StreetSegment> s{seg_at(45.0, 100.0)};
  CHECK(azimuth_histogram(s, 6).L == std::vector<double>{0, 100, 0, 0, 0, 0});
  s = {seg_at(10.0, 50.0), seg_at(170.0, 50.0)};
  CHECK(azimuth_histogram(s, 6).L == std::vector<double>{50, 0, 0, 0, 0, 50});
  s = {seg_at(30.0, 1.0)};
  CHECK(azimuth_histogram(s, 6).L[1] == 1.0);
  CHECK(azimuth_histogram(s, 7).h == doctest::Approx(25.7142857));
}

TEST_CASE("mode interpolation") {
  const DirectionResult r = find_modes(hist_of({10, 0, 6, 0, 2, 0}));
  CHECK(*r.dir1 == 15.0);
  CHECK(*r.dir2 == 75.0);
  CHECK(std::abs(*r.ratio - 10.0 / 6.0) < 1e-12);

  const DirectionResult single = find_modes(hist_of({0, 0, 0, 7, 0, 0}));
  CHECK(*single.dir1 == 105.0);
  CHECK_FALSE(single.dir2.has_value());
  CHECK_FALSE(single.ratio.has_value());

  const DirectionResult empty = find_modes(hist_of({0, 0, 0, 0, 0, 0}));
  CHECK_FALSE(empty.dir1.has_value());
  CHECK_FALSE(empty.dir2.has_value());

  // Neighbour of the main peak is a shoulder, not a second direction.
  const DirectionResult shoulder = find_modes(hist_of({10, 9, 0, 0, 0, 0}));
  CHECK_FALSE(shoulder.dir2.has_value());

  // Wrap-around: class 0's left neighbour is class N-1.
  const DirectionResult wrap = find_modes(hist_of({10, 0, 0, 0, 0, 5}));
  CHECK(*wrap.dir1 == doctest::Approx(30.0 * 5.0 / 15.0));
  CHECK_FALSE(wrap.dir2.has_value());

  // Lowest index wins ties.
  const DirectionResult tie = find_modes(hist_of({0, 4, 0, 0, 4, 0}));
  CHECK(*tie.dir1 == 45.0);
  CHECK(*tie.dir2 == 135.0);
  CHECK(*tie.ratio == 1.0);
}

TEST_CASE("orthogonal grid at 15 and 105 degrees") {
  std::vector<StreetSegment> s{seg_at(15.0, 200.0), seg_at(105.0, 100.0)};
  auto p = direction_params(s);
  CHECK(*p[0].dir1 == 15.0);
  CHECK(*p[0].dir2 == 105.0);
  CHECK(*p[0].ratio == 2.0);
  CHECK(*p[2].dir1 == 11.25);
}

TEST_CASE("single straight street") {
  const GridSpec g = make_grid(make_box(0, 0, 1000, 1000), 1000);
  std::vector<Polyline> roads{line_at(Point2(500, 500), 37.0, 400.0)};
  const auto s = split_segments_by_grid(roads, g);
  for (const auto& r : direction_params(s)) {
    CHECK(r.dir1.has_value());
    CHECK(*r.dir1 >= 0.0);
    CHECK(*r.dir1 < 180.0);
    CHECK_FALSE(r.dir2.has_value());
  }
}

TEST_CASE("reversal, scale and rotation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1000);
  std::vector<Polyline> roads;
  for (int i = 0; i < 40; ++i) roads.push_back(Polyline{{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}}});
  const GridSpec g = make_grid(make_box(0, 0, 1000, 1000), 500);

  auto per_cell = [&](const std::vector<Polyline>& r, const GridSpec& grid) {
    const auto segs = split_segments_by_grid(r, grid);
    std::vector<std::array<DirectionResult, 3>> out;
    for (int c = 0; c < grid.cell_count(); ++c) {
      std::vector<StreetSegment> mine;
      for (const auto& s : segs)
        if (s.cell == c) mine.push_back(s);
      out.push_back(direction_params(mine));
    }
    return out;
  };
  const auto base = per_cell(roads, g);

  std::vector<Polyline> reversed = roads;
  for (auto& r : reversed) std::reverse(r.vertices.begin(), r.vertices.end());
  std::reverse(reversed.begin(), reversed.end());
  const auto rev = per_cell(reversed, g);
  for (std::size_t c = 0; c < base.size(); ++c)
    for (int k = 0; k < 3; ++k) {
      CHECK(base[c][k].dir1 == rev[c][k].dir1);
      CHECK(base[c][k].dir2 == rev[c][k].dir2);
      CHECK(base[c][k].ratio == rev[c][k].ratio);
      if (base[c][k].ratio) CHECK(*base[c][k].ratio >= 1.0);
    }

  std::vector<Polyline> scaled = roads;
  for (auto& r : scaled)
    for (auto& p : r.vertices) p *= 3.0;
  const GridSpec g3 = make_grid(make_box(0, 0, 3000, 3000), 1500);
  const auto sc = per_cell(scaled, g3);
  for (std::size_t c = 0; c < base.size(); ++c)
    for (int k = 0; k < 3; ++k) {
      REQUIRE(base[c][k].dir1.has_value() == sc[c][k].dir1.has_value());
      if (base[c][k].dir1) CHECK(*sc[c][k].dir1 == doctest::Approx(*base[c][k].dir1));
      if (base[c][k].ratio && sc[c][k].ratio) CHECK(*sc[c][k].ratio == doctest::Approx(*base[c][k].ratio));
    }

  // A one-direction scene: DIR1 stays within h/2 of the true street azimuth
  // under rotation. For streets at 0 deg the 30 deg turn also moves DIR1 by
  // 30 +- h/2.
  for (int n = 0; n < 3; ++n) {
    const double h = 180.0 / kDirectionClasses[n];
    for (double az = 0.0; az < 180.0; az += 7.5) {
      const double turned = std::fmod(az + 30.0, 180.0);
      std::vector<StreetSegment> a{seg_at(az, 100.0)}, b{seg_at(turned, 100.0)};
      CHECK(std::abs(*direction_params(a)[n].dir1 - az) <= h / 2);
      CHECK(std::abs(*direction_params(b)[n].dir1 - turned) <= h / 2);
    }
    std::vector<StreetSegment> a{seg_at(0.0, 100.0)}, b{seg_at(30.0, 100.0)};
    const double shift = *direction_params(b)[n].dir1 - *direction_params(a)[n].dir1;
    CHECK(std::abs(shift - 30.0) <= h / 2);
  }
}

TEST_CASE("bearings on a class boundary survive coordinate rounding") {
  // A north-south street turned by 30 deg about a map-scale centre.
  const Point2 c(410500.0, 6170500.0);
  const double t = std::numbers::pi / 6;
  const Point2 a = c + Point2(-200.0 * std::sin(t), -200.0 * std::cos(t));
  const Point2 b = c + Point2(200.0 * std::sin(t), 200.0 * std::cos(t));
  CHECK(line_azimuth(a, b) == 30.0);
  CHECK(line_azimuth(b, a) == 30.0);
  CHECK(line_azimuth(Point2(0, 0), Point2(0, -5)) == 0.0);
}
