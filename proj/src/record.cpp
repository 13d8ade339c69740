#include "ucp/record.hpp"

#include "ucp/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ucp {

bool is_ratio_field(Field f) {
  switch (f) {
    case Field::BLD_RATIO: case Field::GREEN_RATIO: case Field::INDUSTR_RATIO:
    case Field::ROAD_RATIO: case Field::WATER_RATIO: case Field::OTHER_RATIO:
    case Field::SVF_MEAN: case Field::SVF_NOBLD_MEAN:
    case Field::MDC_RATIO: case Field::MUC_RATIO:
    case Field::BLDC_RATIO: case Field::BLDUC_RATIO: case Field::BLUC_RATIO:
      return true;
    default:
      return false;
  }
}

std::string format_value(const Maybe& v, int digits) {
  if (!v) return {};
  double x = *v;
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  if (ec != std::errc()) throw IoError("cannot format value");
  return std::string(buf, ptr);
}

std::string csv_header() {
  std::string h;
  for (int i = 0; i < kFieldCount; ++i) {
    if (i) h += ',';
    h += kFieldNames[i];
  }
  return h;
}

void write_csv(std::span<const CellRecord> records, std::ostream& out, int digits) {
  out << csv_header() << '\n';
  for (const CellRecord& r : records) {
    for (int i = 0; i < kFieldCount; ++i) {
      if (i) out << ',';
      // OBJECTID is an integer; everything else uses significant digits.
      out << format_value(r.values[i], i == 0 ? 17 : digits);
    }
    out << '\n';
  }
}

void write_csv(std::span<const CellRecord> records, const std::filesystem::path& path, int digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(records, out, digits);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void write_geojson_grid(std::span<const CellRecord> records, const GridSpec& grid,
                        const std::filesystem::path& path) {
  using nlohmann::json;
  json features = json::array();
  for (const CellRecord& r : records) {
    const int id = static_cast<int>(*r[Field::OBJECTID]);
    const Box2 c = grid.cell_rect(id);
    json props = json::object();
    for (int i = 0; i < kFieldCount; ++i)
      props[std::string(kFieldNames[i])] = r.values[i] ? json(*r.values[i]) : json(nullptr);
    const json ring = json::array({json::array({c.min().x(), c.min().y()}),
                                   json::array({c.max().x(), c.min().y()}),
                                   json::array({c.max().x(), c.max().y()}),
                                   json::array({c.min().x(), c.max().y()}),
                                   json::array({c.min().x(), c.min().y()})});
    features.push_back({{"type", "Feature"},
                        {"properties", props},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << json{{"type", "FeatureCollection"}, {"features", features}}.dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<CellRecord> read_geojson_grid(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  std::vector<CellRecord> out;
  for (const json& f : doc.at("features")) {
    CellRecord r;
    const json& props = f.at("properties");
    for (int i = 0; i < kFieldCount; ++i) {
      const auto it = props.find(std::string(kFieldNames[i]));
      if (it != props.end() && it->is_number()) r.values[i] = it->get<double>();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace ucp
