#pragma once

#include <string>
#include <string_view>

#include "spacespec/convexbody.hpp"

namespace spacespec {

// Body files: {"delta": -1|0|1, "chart": "plane"|"klein-disk"|"gnomonic",
//              "base": [x, y], "vertices": [[x, y], ...]}
// Errors are ConfigError with "<source>:<line>:<column>: ..." where possible.
ConvexBody parse_body(std::string_view text, const std::string& source = "<body>");
ConvexBody read_body(const std::string& path);
std::string body_to_json(const ConvexBody& body);
void write_body(const ConvexBody& body, const std::string& path);

}  // namespace spacespec
