#include "convexopt/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace convexopt {

using nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

BodyVariant parse_body(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("body JSON must be an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "polygon") {
            std::vector<Vec2> verts;
            for (const auto& v : j.at("vertices"))
                verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            return ConvexPolygon::from_vertices(std::move(verts));
        }
        if (kind == "support") {
            SupportBody S;
            S.m = j.at("m").get<int>();
            const auto& arr = j.at("h");
            if (static_cast<int>(arr.size()) != S.m)
                throw ValidationError("support body: h length does not match m");
            S.h.resize(S.m);
            for (int i = 0; i < S.m; ++i) S.h[i] = arr.at(static_cast<size_t>(i)).get<double>();
            return S;
        }
        if (kind == "radial") {
            RadialBody R;
            R.origin = Vec2(j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>());
            R.m = j.at("m").get<int>();
            const auto& arr = j.at("rho");
            if (static_cast<int>(arr.size()) != R.m)
                throw ValidationError("radial body: rho length does not match m");
            R.rho.resize(R.m);
            for (int i = 0; i < R.m; ++i) R.rho[i] = arr.at(static_cast<size_t>(i)).get<double>();
            return R;
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed body JSON: ") + e.what());
    }
    throw ValidationError("unknown body kind: " + kind);
}

BodyVariant read_body_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("cannot parse ") + path + ": " + e.what());
    }
    return parse_body(j);
}

ConvexPolygon body_as_polygon(const BodyVariant& body) {
    if (const auto* k = std::get_if<ConvexPolygon>(&body)) return *k;
    if (const auto* s = std::get_if<SupportBody>(&body)) return from_support(*s);
    return from_radial(std::get<RadialBody>(body));
}

std::string body_to_json_text(const ConvexPolygon& K) {
    std::ostringstream os;
    os << "{\"kind\":\"polygon\",\"vertices\":[";
    const auto& v = K.vertices();
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << "[" << fmt17(v[i].x()) << "," << fmt17(v[i].y()) << "]";
    }
    os << "]}";
    return os.str();
}

std::string body_to_json_text(const SupportBody& S) {
    std::ostringstream os;
    os << "{\"kind\":\"support\",\"m\":" << S.m << ",\"h\":[";
    for (int i = 0; i < S.m; ++i) {
        if (i) os << ",";
        os << fmt17(S.h[i]);
    }
    os << "]}";
    return os.str();
}

std::string body_to_json_text(const RadialBody& R) {
    std::ostringstream os;
    os << "{\"kind\":\"radial\",\"origin\":[" << fmt17(R.origin.x()) << "," << fmt17(R.origin.y())
       << "],\"m\":" << R.m << ",\"rho\":[";
    for (int i = 0; i < R.m; ++i) {
        if (i) os << ",";
        os << fmt17(R.rho[i]);
    }
    os << "]}";
    return os.str();
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
        out << contents;
        if (!out.good()) throw ValidationError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace convexopt
