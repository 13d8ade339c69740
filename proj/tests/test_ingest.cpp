#include "doctest.h"

#include "ucp/errors.hpp"
#include "ucp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace ucp;

namespace {

const char* kTwoSquares = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"building": "yes", "height": 21.5},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[0,10],[10,10],[10,0],[0,0]]]}},
    {"type": "Feature", "properties": {"landuse": "forest"},
     "geometry": {"type": "Polygon", "coordinates": [[[20,0],[30,0],[30,10],[20,10],[20,0]]]}}
  ]})";

const char* kUnclosed = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[10,0],[10,10],[0,10]]]}}
  ]})";

HeightRaster grid_from(const std::string& text) {
  std::istringstream in(text);
  return parse_ascii_grid(in);
}

}  // namespace

TEST_CASE("GeoJSON feature collection") {
  const VectorLayer layer = parse_vector_layer(kTwoSquares);
  REQUIRE(layer.features.size() == 2);
  CHECK(layer.warnings.empty());
  const Polygon& p = layer.features[0].polygon();
  CHECK(p.exterior.size() == 4);
  CHECK(layer.features[0].attributes.at("height") == "21.5");
  // Clockwise input is normalized to counter-clockwise.
  double s = 0.0;
  for (std::size_t i = 0; i < p.exterior.size(); ++i) {
    const Point2& a = p.exterior[i];
    const Point2& b = p.exterior[(i + 1) % p.exterior.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  CHECK(s > 0.0);
}

TEST_CASE("empty collection") {
  const VectorLayer layer = parse_vector_layer(R"({"type":"FeatureCollection","features":[]})");
  CHECK(layer.features.empty());
}

TEST_CASE("unclosed ring") {
  try {
    parse_vector_layer(kUnclosed, LoadOptions{true});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("feature 0") != std::string::npos);
  }
  const VectorLayer lenient = parse_vector_layer(kUnclosed, LoadOptions{false});
  REQUIRE(lenient.features.size() == 1);
  CHECK(lenient.features[0].polygon().exterior.size() == 4);
  REQUIRE(lenient.warnings.size() == 1);
  CHECK(lenient.warnings[0].find("feature 0") != std::string::npos);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(parse_vector_layer("{not json"), ParseError);
  CHECK_THROWS_AS(parse_vector_layer(R"({"type":"Feature"})"), ParseError);
  CHECK_THROWS_AS(
      parse_vector_layer(
          R"({"type":"FeatureCollection","crs":{"type":"name","properties":{"name":"urn:ogc:def:crs:OGC:1.3:CRS84"}},"features":[]})"),
      CrsError);
  const char* bowtie = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,1],[1,0],[0,1],[0,0]]]}}]})";
  CHECK_THROWS_AS(parse_vector_layer(bowtie, LoadOptions{true}), ParseError);
  const VectorLayer skipped = parse_vector_layer(bowtie);
  CHECK(skipped.features.empty());
  CHECK(skipped.warnings.size() == 1);
}

TEST_CASE("multi geometries and lines") {
  const char* text = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"highway":"primary"},"geometry":{"type":"MultiLineString",
      "coordinates":[[[0,0],[10,0],[10,0],[20,5]],[[0,1],[0,9]]]}},
    {"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[1,2]}},
    {"type":"Feature","properties":{},"geometry":null}]})";
  const VectorLayer layer = parse_vector_layer(text);
  REQUIRE(layer.features.size() == 2);
  CHECK(layer.features[0].polyline().vertices.size() == 3);
  CHECK(layer.features[0].source_index == 0);
  CHECK(layer.features[1].polyline().vertices.size() == 2);
  CHECK(layer.warnings.size() == 3);
}

TEST_CASE("reclassify with default mapping") {
  const ClassMapping m = ClassMapping::defaults();
  CHECK(m.classify("landuse", {{"landuse", "forest"}}) == SurfaceClass::Green);
  CHECK(m.classify("landuse", {{"landuse", "industrial"}}) == SurfaceClass::Industrial);
  CHECK(m.classify("landuse", {{"place", "square"}}) == SurfaceClass::Industrial);
  CHECK(m.classify("landuse", {{"leisure", "park"}}) == SurfaceClass::Green);
  CHECK(m.classify("landuse", {}) == SurfaceClass::Other);
  CHECK(m.classify("buildings", {}) == SurfaceClass::Building);
  CHECK(m.classify("misc", {{"natural", "water"}}) == SurfaceClass::Water);
  CHECK(m.classify("misc", {{"highway", "residential"}}) == SurfaceClass::Road);

  ClassMapping custom;
  custom.rules.push_back({"*", "kind", "a|b", SurfaceClass::Water});
  CHECK(custom.classify("x", {{"kind", "b"}}) == SurfaceClass::Water);
  CHECK(custom.classify("x", {{"kind", "c"}}) == SurfaceClass::Other);

  std::vector<VectorLayer> layers(1);
  layers[0] = parse_vector_layer(kTwoSquares, {}, "landuse");
  const auto forward = reclassify(layers, m);
  std::reverse(layers[0].features.begin(), layers[0].features.end());
  const auto backward = reclassify(layers, m);
  REQUIRE(forward.size() == 2);
  CHECK(forward[0].cls == SurfaceClass::Building);
  CHECK(forward[1].cls == SurfaceClass::Green);
  CHECK(backward[0].cls == SurfaceClass::Green);
  CHECK(backward[1].cls == SurfaceClass::Building);

  CHECK(parse_surface_class("Road") == SurfaceClass::Road);
  CHECK_THROWS_AS(parse_surface_class("lava"), ConfigError);
}

TEST_CASE("building heights") {
  const BuildingHeightRule rule;
  CHECK(building_height({{"height", "21.5"}}, rule) == 21.5);
  CHECK(building_height({{"height", "18 m"}}, rule) == 18.0);
  CHECK(building_height({{"building:levels", "5"}}, rule) == 15.0);
  CHECK(building_height({{"height", "tall"}, {"building:levels", "2"}}, rule) == 6.0);
  CHECK(building_height({}, rule) == 12.0);
}

TEST_CASE("ASCII grid reading") {
  const HeightRaster r = grid_from(
      "ncols 2\nnrows 2\nxllcorner 100\nyllcorner 200\ncellsize 10\nNODATA_value -9999\n1 2\n3 4\n");
  CHECK(r(0, 0) == 1.0);
  CHECK(r(0, 1) == 2.0);
  CHECK(r(1, 0) == 3.0);
  CHECK(r(1, 1) == 4.0);
  CHECK(r.geometry.origin == Point2(100, 200));
  // Top row is the northern one.
  CHECK(r.geometry.center(0, 0) == Point2(105, 215));
  CHECK_FALSE(fully_void(r));

  const HeightRaster v = grid_from(
      "NCOLS 2\nNROWS 1\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 1\nnodata_value -1\n-1 -1\n");
  CHECK(fully_void(v));

  CHECK_THROWS_AS(grid_from("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n"),
                  HeaderMismatch);
  CHECK_THROWS_AS(grid_from("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 x\n"),
                  ParseError);
  CHECK_THROWS_AS(grid_from("ncols 2\nnrows 1\ncellsize 1\n1 2\n"), ParseError);
}

TEST_CASE("ASCII grid round trip is bit-identical") {
  GridGeometry g{Point2(410000.25, 6170000.5), 30.0, 7, 5};
  HeightRaster r(g, 0.0, -9999.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 400.0);
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) = u(rng);
  r(2, 3) = -9999.0;
  r(0, 0) = 1.0 / 3.0;
  std::stringstream ss;
  write_ascii_grid(r, ss);
  const HeightRaster back = parse_ascii_grid(ss);
  CHECK(back.geometry == r.geometry);
  CHECK(back.nodata == r.nodata);
  CHECK((back.values == r.values).all());
}

TEST_CASE("bilinear resampling") {
  GridGeometry g{Point2(0, 0), 10.0, 6, 4};
  HeightRaster c(g, 7.0, -9999.0);
  for (double cell : {2.5, 5.0, 10.0, 20.0, 7.0}) {
    const HeightRaster out = resample_bilinear(c, cell);
    CHECK((out.values == 7.0).all());
  }

  HeightRaster ramp(g, 0.0, -9999.0);
  for (int i = 0; i < ramp.rows(); ++i)
    for (int j = 0; j < ramp.cols(); ++j) ramp(i, j) = ramp.geometry.center(i, j).x();
  const HeightRaster fine = resample_bilinear(ramp, 2.5);
  for (int i = 0; i < fine.rows(); ++i)
    for (int j = 0; j < fine.cols(); ++j) {
      const double x = fine.geometry.center(i, j).x();
      if (x < 5.0 || x > 55.0) continue;  // clamped beyond the outer centres
      CHECK(fine(i, j) == doctest::Approx(x).epsilon(1e-12));
    }

  HeightRaster corners(GridGeometry{Point2(0, 0), 1.0, 2, 2}, 0.0);
  corners(1, 1) = 4.0;
  CHECK(*sample_bilinear(corners, Point2(1.0, 1.0)) == 1.0);

  // Identity at the source resolution.
  HeightRaster holes = ramp;
  holes(1, 1) = -9999.0;
  const HeightRaster same = resample_bilinear(holes, 10.0);
  for (int i = 0; i < same.rows(); ++i)
    for (int j = 0; j < same.cols(); ++j)
      if (!holes.is_nodata(i, j)) CHECK(same(i, j) == holes(i, j));
  CHECK(same.is_nodata(1, 1));

  // A NODATA cell poisons every sample it supports.
  const HeightRaster half = resample_bilinear(holes, 5.0);
  CHECK(half.is_nodata(3, 3));
  CHECK_FALSE(half.is_nodata(7, 11));
  CHECK_THROWS(resample_bilinear(c, 0.0));
}

TEST_CASE("nearest fill") {
  HeightRaster r(GridGeometry{Point2(0, 0), 1.0, 3, 3}, -9999.0, -9999.0);
  r(0, 0) = 5.0;
  r(2, 2) = 9.0;
  const HeightRaster f = fill_nodata_nearest(r);
  CHECK(f(0, 1) == 5.0);
  CHECK(f(2, 1) == 9.0);
  CHECK(f(1, 1) == 5.0);  // tie goes to scan order
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK_FALSE(f.is_nodata(i, j));
}
