#pragma once

#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "convexopt/geometry.hpp"

namespace convexopt {

using BodyVariant = std::variant<ConvexPolygon, SupportBody, RadialBody>;

/// Parse the body file format:
///   {"kind":"polygon","vertices":[[x,y],...]}
///   {"kind":"support","m":M,"h":[...]}
///   {"kind":"radial","origin":[x,y],"m":M,"rho":[...]}
BodyVariant parse_body(const nlohmann::json& j);
BodyVariant read_body_file(const std::string& path);

/// Any body variant reduced to a polygon (support/radial bodies are
/// reconstructed).
ConvexPolygon body_as_polygon(const BodyVariant& body);

/// Writers emit 17 significant digits so values round-trip bit-exactly.
std::string body_to_json_text(const ConvexPolygon& K);
std::string body_to_json_text(const SupportBody& S);
std::string body_to_json_text(const RadialBody& R);

/// Format a double with 17 significant digits.
std::string fmt17(double x);

/// Write-temp-then-rename so partial output never lands at `path`.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_text_file(const std::string& path);

} // namespace convexopt
