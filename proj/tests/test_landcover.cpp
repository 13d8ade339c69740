#include "doctest.h"
#include "oracles.hpp"

#include "ucp/errors.hpp"
#include "ucp/geometry.hpp"
#include "ucp/landcover.hpp"

#include <algorithm>
#include <deque>
#include <random>

using namespace ucp;

namespace {

struct Scene {
  std::deque<Feature> storage;
  std::vector<ClassifiedFeature> features;

  void add(Geometry g, SurfaceClass cls, Attributes attrs = {}) {
    storage.push_back(Feature{std::move(g), std::move(attrs), 0});
    features.push_back(ClassifiedFeature{&storage.back(), "test", cls});
  }
};

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}};
}

double ratio_sum(const ClassAreas& a) {
  double s = 0.0;
  for (double r : a.ratio) s += r;
  return s;
}

}  // namespace

TEST_CASE("make_grid") {
  GridSpec g = make_grid(make_box(0, 0, 1000, 1000), 500);
  CHECK(g.ncols == 2);
  CHECK(g.nrows == 2);
  g = make_grid(make_box(0, 0, 1000, 1000), 200);
  CHECK(g.ncols == 5);
  CHECK(g.nrows == 5);
  g = make_grid(make_box(130, 130, 1130, 1130), 1000);
  CHECK(g.origin == Point2(0, 0));
  CHECK(g.ncols == 2);
  CHECK(g.nrows == 2);
  CHECK(g.extent().contains(make_box(130, 130, 1130, 1130)));

  // Row 0 is the northern row; cells tile the extent.
  g = make_grid(make_box(410000, 6170000, 411000, 6171000), 500);
  CHECK(g.cell_rect(0).isApprox(make_box(410000, 6170500, 410500, 6171000), 0.0));
  CHECK(g.cell_rect(3).isApprox(make_box(410500, 6170000, 411000, 6170500), 0.0));
  CHECK_THROWS_AS(make_grid(make_box(0, 0, 0, 10), 100), ConfigError);
}

TEST_CASE("empty cell is all Other") {
  Scene s;
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));
  const ClassAreas a = classify_cell(make_box(0, 0, 500, 500), idx);
  CHECK(a.ratio_of(SurfaceClass::Other) == 1.0);
  CHECK(a.area_of(SurfaceClass::Other) == 250000.0);
  for (SurfaceClass c : kSurfaceClasses)
    if (c != SurfaceClass::Other) CHECK(a.ratio_of(c) == 0.0);
}

TEST_CASE("centred building") {
  Scene s;
  s.add(rect(225, 225, 275, 275), SurfaceClass::Building);
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));
  const ClassAreas a = classify_cell(make_box(0, 0, 500, 500), idx);
  CHECK(a.area_of(SurfaceClass::Building) == 2500.0);
  CHECK(a.ratio_of(SurfaceClass::Building) == 0.01);
  CHECK(ratio_sum(a) == 1.0);
}

TEST_CASE("building over green keeps priority") {
  Scene s;
  const Polygon park{{{10.3, 12.1}, {480.7, 30.2}, {470.1, 460.9}, {40.4, 490.2}}, {}};
  const Polygon house{{{150.25, 160.5}, {260.75, 170.1}, {250.6, 290.3}, {140.9, 280.2}}, {}};
  s.add(park, SurfaceClass::Green);
  s.add(house, SurfaceClass::Building);
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));
  const ClassAreas a = classify_cell(make_box(0, 0, 500, 500), idx);

  auto perimeter = [](const Polygon& p) {
    double l = 0.0;
    for (std::size_t i = 0; i < p.exterior.size(); ++i)
      l += (p.exterior[(i + 1) % p.exterior.size()] - p.exterior[i]).norm();
    return l;
  };
  // Each subpixel straddling an edge can be misassigned.
  const double bound = 1.0 * (perimeter(house) + 2.0);
  CHECK(std::abs(a.area_of(SurfaceClass::Building) - polygon_area(house)) <= bound);
  const double green_exact = polygon_area(park) - polygon_area(house);
  CHECK(std::abs(a.area_of(SurfaceClass::Green) - green_exact) <=
        1.0 * (perimeter(park) + perimeter(house) + 4.0));
  CHECK(ratio_sum(a) == 1.0);
}

TEST_CASE("holes are not painted") {
  Scene s;
  Polygon ring = rect(100, 100, 300, 300);
  ring.holes.push_back({{150, 150}, {150, 250}, {250, 250}, {250, 150}});
  s.add(ring, SurfaceClass::Water);
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));
  const ClassAreas a = classify_cell(make_box(0, 0, 500, 500), idx);
  CHECK(a.area_of(SurfaceClass::Water) == 30000.0);
}

TEST_CASE("road buffering") {
  const RoadWidthTable table;
  CHECK(table.half_width({{"highway", "primary"}}) == 15.0);
  CHECK(table.half_width({{"highway", "tertiary"}}) == 10.0);
  CHECK(table.half_width({{"highway", "residential"}}) == 7.0);
  CHECK(table.half_width({{"highway", "footway"}}) == 5.0);
  CHECK(table.half_width({}) == 5.0);

  Scene s;
  s.add(Polyline{{{100.0, 250.0}, {400.0, 250.0}}}, SurfaceClass::Road, {{"highway", "residential"}});
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));
  const ClassAreas a = classify_cell(make_box(0, 0, 500, 500), idx);
  // 300 x 14 strip plus two half 16-gons of radius 7.
  const double gon = 0.5 * 16 * 49.0 * std::sin(2.0 * 3.141592653589793 / 16);
  CHECK(a.area_of(SurfaceClass::Road) == doctest::Approx(300 * 14 + gon).epsilon(0.02));
}

TEST_CASE("closure and conservation on random scenes") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1000.0), sz(5.0, 150.0);
  std::uniform_int_distribution<int> cls(0, 4);
  Scene s;
  for (int i = 0; i < 120; ++i) {
    const double x = u(rng), y = u(rng), w = sz(rng), h = sz(rng);
    s.add(rect(x, y, x + w, y + h), kSurfaceClasses[cls(rng)]);
  }
  for (int i = 0; i < 10; ++i)
    s.add(Polyline{{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}}}, SurfaceClass::Road);
  const LandcoverIndex idx(s.features, {}, Point2(0, 0));

  const GridSpec coarse = make_grid(make_box(0, 0, 1000, 1000), 1000);
  const GridSpec fine = make_grid(make_box(0, 0, 1000, 1000), 200);
  const ClassAreas parent = classify_cell(coarse.cell_rect(0), idx);
  std::array<double, 6> sum{};
  for (int id = 0; id < fine.cell_count(); ++id) {
    const ClassAreas child = classify_cell(fine.cell_rect(id), idx);
    CHECK(ratio_sum(child) == 1.0);
    for (int k = 0; k < 6; ++k) sum[k] += child.area[k];
  }
  for (int k = 0; k < 6; ++k) CHECK(sum[k] == parent.area[k]);
  CHECK(ratio_sum(parent) == 1.0);

  // Feature order does not matter.
  Scene r;
  for (auto it = s.features.rbegin(); it != s.features.rend(); ++it)
    r.add(it->feature->geometry, it->cls);
  const LandcoverIndex ridx(r.features, {}, Point2(0, 0));
  const ClassAreas again = classify_cell(coarse.cell_rect(0), ridx);
  CHECK(again.area == parent.area);
  CHECK(again.ratio == parent.ratio);
}

TEST_CASE("errors and city means") {
  CHECK_THROWS_AS(classify_cell(make_box(0, 0, 100, 100), LandcoverIndex{}), IndexMissing);
  Scene s;
  LandcoverParams p;
  p.landcover_res = 3.0;
  const LandcoverIndex idx(s.features, p, Point2(0, 0));
  CHECK_THROWS_AS(classify_cell(make_box(0, 0, 100, 100), idx), ConfigError);

  CHECK_THROWS_AS(aggregate_city_means({}), EmptyInput);
  ClassAreas a, b;
  a.ratio = {0.0, 0.5, 0.0, 0.0, 0.0, 0.5};
  b.ratio = {0.2, 0.3, 0.0, 0.0, 0.0, 0.5};
  const std::array<ClassAreas, 1> one{a};
  CHECK(aggregate_city_means(one) == a.ratio);
  const std::array<ClassAreas, 2> two{a, b};
  const auto m = aggregate_city_means(two);
  CHECK(m[0] == doctest::Approx(0.1));
  CHECK(m[1] == doctest::Approx(0.4));
}
