#include "spacespec/body_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spacespec/errors.hpp"

namespace spacespec {

namespace {

using nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// Line of the first occurrence of "key" in the raw text, for schema errors.
std::string key_line(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string_view::npos) return "1:1";
  return line_col(text, pos);
}

Vec2 read_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(what + " must be a pair of numbers");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

ConvexBody parse_body(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(source + ":" + line_col(text, byte) + ": malformed JSON: " + e.what());
  }
  auto fail = [&](const std::string& key, const std::string& msg) -> ConfigError {
    return ConfigError(source + ":" + key_line(text, key) + ": " + msg);
  };
  if (!j.is_object()) throw ConfigError(source + ":1:1: body file must hold a JSON object");
  for (const char* key : {"delta", "chart", "base", "vertices"})
    if (!j.contains(key)) throw ConfigError(source + ":1:1: missing field \"" + key + "\"");
  if (!j["delta"].is_number_integer()) throw fail("delta", "\"delta\" must be -1, 0 or 1");
  Curvature delta;
  try {
    delta = curvature_from_int(j["delta"].get<int>());
  } catch (const DomainError& e) {
    throw fail("delta", e.what());
  }
  if (!j["chart"].is_string()) throw fail("chart", "\"chart\" must be a string");
  const auto chart = chart_from_name(j["chart"].get<std::string>());
  if (!chart || !is_straight(*chart) || curvature_of(*chart) != delta)
    throw fail("chart", "chart \"" + j["chart"].get<std::string>() + "\" is not valid for delta " +
                            std::to_string(to_int(delta)));
  Vec2 base;
  std::vector<Vec2> vertices;
  try {
    base = read_pair(j["base"], "\"base\"");
  } catch (const std::invalid_argument& e) {
    throw fail("base", e.what());
  }
  if (!j["vertices"].is_array()) throw fail("vertices", "\"vertices\" must be an array");
  try {
    for (const auto& v : j["vertices"]) vertices.push_back(read_pair(v, "each vertex"));
  } catch (const std::invalid_argument& e) {
    throw fail("vertices", e.what());
  }
  try {
    return ConvexBody(delta, *chart, std::move(vertices), base);
  } catch (const Error& e) {
    throw fail("vertices", std::string("invalid body: ") + e.what());
  }
}

ConvexBody read_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open body file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body(ss.str(), path);
}

std::string body_to_json(const ConvexBody& body) {
  json j;
  j["delta"] = to_int(body.delta());
  j["chart"] = std::string(chart_name(body.chart()));
  j["base"] = {body.base().coords.x(), body.base().coords.y()};
  j["vertices"] = json::array();
  for (const Vec2& v : body.vertices()) j["vertices"].push_back({v.x(), v.y()});
  return j.dump(2) + "\n";
}

void write_body(const ConvexBody& body, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path + ": cannot write body file");
  out << body_to_json(body);
}

}  // namespace spacespec
