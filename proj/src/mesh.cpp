#include "convexopt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "convexopt/io.hpp"

namespace convexopt {

namespace {

constexpr double kPi = std::numbers::pi;

struct Tri {
    int a, b, c;
    Vec2 cc;      // circumcenter
    double rr;    // squared circumradius
    bool alive = true;
};

void circumcircle(const Vec2& p, const Vec2& q, const Vec2& r, Vec2& cc, double& rr) {
    const Vec2 u = q - p, v = r - p;
    const double d = 2.0 * cross2(u, v);
    if (std::abs(d) < 1e-300) { // collinear: half-plane circumcircle
        cc = Vec2(0.0, 0.0);
        rr = std::numeric_limits<double>::infinity();
        return;
    }
    const double uu = u.squaredNorm(), vv = v.squaredNorm();
    cc = p + Vec2(v.y() * uu - u.y() * vv, u.x() * vv - v.x() * uu) / d;
    rr = (cc - p).squaredNorm();
}

/// Incremental Bowyer-Watson. Points are inserted in the given order; the
/// in-circle test is epsilon-inclusive so collinear boundary runs retriangulate
/// cleanly against the super-triangle fan.
std::vector<std::array<int, 3>> bowyer_watson(const std::vector<Vec2>& pts, double scale) {
    const int n = static_cast<int>(pts.size());
    std::vector<Vec2> all = pts;
    const double R = 64.0 * scale;
    Vec2 center = Vec2::Zero();
    for (const Vec2& p : pts) center += p;
    center /= static_cast<double>(n);
    all.push_back(center + Vec2(-R, -R));
    all.push_back(center + Vec2(R, -R));
    all.push_back(center + Vec2(0.0, R));

    std::vector<Tri> tris;
    auto add_tri = [&](int a, int b, int c) {
        Tri t{a, b, c, Vec2::Zero(), 0.0, true};
        if (cross2(all[static_cast<size_t>(b)] - all[static_cast<size_t>(a)],
                   all[static_cast<size_t>(c)] - all[static_cast<size_t>(a)]) < 0.0)
            std::swap(t.b, t.c);
        circumcircle(all[static_cast<size_t>(t.a)], all[static_cast<size_t>(t.b)],
                     all[static_cast<size_t>(t.c)], t.cc, t.rr);
        tris.push_back(t);
    };
    add_tri(n, n + 1, n + 2);

    const double eps = 1e-12 * scale * scale;
    std::vector<std::pair<int, int>> boundary_edges;
    for (int ip = 0; ip < n; ++ip) {
        const Vec2& p = all[static_cast<size_t>(ip)];
        boundary_edges.clear();
        // Collect cavity boundary: edges of bad triangles that appear once.
        auto toggle_edge = [&](int a, int b) {
            for (auto it = boundary_edges.begin(); it != boundary_edges.end(); ++it) {
                if (it->first == b && it->second == a) {
                    boundary_edges.erase(it);
                    return;
                }
            }
            boundary_edges.emplace_back(a, b);
        };
        bool found_bad = false;
        for (Tri& t : tris) {
            if (!t.alive) continue;
            const bool bad = std::isinf(t.rr) || (t.cc - p).squaredNorm() <= t.rr + eps;
            if (bad) {
                t.alive = false;
                found_bad = true;
                toggle_edge(t.a, t.b);
                toggle_edge(t.b, t.c);
                toggle_edge(t.c, t.a);
            }
        }
        if (!found_bad) continue; // duplicate point; nothing to do
        for (const auto& [a, b] : boundary_edges) add_tri(a, b, ip);
        // Compact occasionally to keep the scan linear in live triangles.
        if (tris.size() > 4 * pts.size() + 64) {
            std::vector<Tri> live;
            live.reserve(tris.size());
            for (const Tri& t : tris)
                if (t.alive) live.push_back(t);
            tris.swap(live);
        }
    }

    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris) {
        if (!t.alive) continue;
        if (t.a >= n || t.b >= n || t.c >= n) continue; // touches super-triangle
        const double ar = cross2(all[static_cast<size_t>(t.b)] - all[static_cast<size_t>(t.a)],
                                 all[static_cast<size_t>(t.c)] - all[static_cast<size_t>(t.a)]);
        if (ar <= eps) continue;
        out.push_back({t.a, t.b, t.c});
    }
    return out;
}

double dist_to_boundary(const ConvexPolygon& K, const Vec2& p) {
    const auto& v = K.vertices();
    const size_t n = v.size();
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % n];
        const Vec2 e = b - a;
        const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
        d = std::min(d, (p - (a + t * e)).norm());
    }
    return d;
}

} // namespace

int TriMesh::interior_count() const {
    int c = 0;
    for (uint8_t f : boundary) c += (f == 0);
    return c;
}

double TriMesh::area_sum() const {
    double s = 0.0;
    for (const auto& t : triangles)
        s += 0.5 * cross2(nodes[static_cast<size_t>(t[1])] - nodes[static_cast<size_t>(t[0])],
                          nodes[static_cast<size_t>(t[2])] - nodes[static_cast<size_t>(t[0])]);
    return s;
}

double TriMesh::min_angle_deg() const {
    double worst = 180.0;
    for (const auto& t : triangles) {
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = nodes[static_cast<size_t>(t[static_cast<size_t>(k)])];
            const Vec2 b = nodes[static_cast<size_t>(t[static_cast<size_t>((k + 1) % 3)])];
            const Vec2 c = nodes[static_cast<size_t>(t[static_cast<size_t>((k + 2) % 3)])];
            const Vec2 u = (b - a).normalized(), v = (c - a).normalized();
            worst = std::min(worst, std::acos(std::clamp(u.dot(v), -1.0, 1.0)) * 180.0 / kPi);
        }
    }
    return worst;
}

TriMesh delaunay_mesh(std::vector<Vec2> points, std::vector<uint8_t> boundary_flags,
                      double h_mesh) {
    Vec2 lo = points.front(), hi = points.front();
    for (const Vec2& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    TriMesh mesh;
    mesh.triangles = bowyer_watson(points, std::max((hi - lo).norm(), 1e-12));
    mesh.nodes = std::move(points);
    mesh.boundary = std::move(boundary_flags);
    mesh.h_mesh = h_mesh;
    return mesh;
}

TriMesh triangulate(const ConvexPolygon& K, double h_mesh, uint64_t seed) {
    if (!(h_mesh > 0.0)) throw ValidationError("h_mesh must be positive");
    const DiamInr di = diameter_inradius(K);
    if (h_mesh > di.inradius) throw MeshTooCoarse("h_mesh exceeds the inradius");

    std::vector<Vec2> pts;
    std::vector<uint8_t> flags;

    // Boundary ring at spacing <= h_mesh, nodes exactly on the edges.
    const auto& v = K.vertices();
    const size_t nv = v.size();
    for (size_t i = 0; i < nv; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % nv];
        const double len = (b - a).norm();
        const int k = std::max(1, static_cast<int>(std::ceil(len / h_mesh)));
        for (int j = 0; j < k; ++j) {
            pts.push_back(a + (static_cast<double>(j) / k) * (b - a));
            flags.push_back(1);
        }
    }

    // Offset ring at depth 0.75 h: bridges the (possibly much finer) boundary
    // spacing of high-resolution polygons to the interior grid spacing.
    {
        std::vector<Vec2> ring;
        double carry = 0.0;
        for (size_t i = 0; i < nv; ++i) {
            const Vec2 a = v[i], b = v[(i + 1) % nv];
            const double len = (b - a).norm();
            const Vec2 t = (b - a) / len;
            const Vec2 inward(-t.y(), t.x());
            double s = carry;
            while (s < len) {
                ring.push_back(a + s * t + 0.75 * h_mesh * inward);
                s += h_mesh;
            }
            carry = s - len;
        }
        for (const Vec2& p : ring) {
            if (!contains(K, p, 0.0)) continue;
            if (dist_to_boundary(K, p) < 0.5 * h_mesh) continue;
            bool clear = true;
            for (size_t j = pts.size(); j-- > 0;) {
                if (flags[j]) break; // only check against earlier ring points
                if ((pts[j] - p).norm() < 0.55 * h_mesh) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                pts.push_back(p);
                flags.push_back(0);
            }
        }
    }

    // Jittered interior grid, staggered rows, kept clear of ring and boundary.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> jit(-0.12, 0.12);
    Vec2 lo = v.front(), hi = v.front();
    for (const Vec2& p : v) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double row_h = h_mesh * 0.8660254037844386; // sqrt(3)/2
    int row = 0;
    for (double y = lo.y() + 0.5 * row_h; y < hi.y(); y += row_h, ++row) {
        const double x0 = lo.x() + ((row % 2) ? 0.75 : 0.25) * h_mesh;
        for (double x = x0; x < hi.x(); x += h_mesh) {
            const Vec2 p(x + jit(rng) * h_mesh, y + jit(rng) * h_mesh);
            if (!contains(K, p, 0.0)) continue;
            if (dist_to_boundary(K, p) < 1.35 * h_mesh) continue;
            pts.push_back(p);
            flags.push_back(0);
        }
    }

    TriMesh mesh = delaunay_mesh(std::move(pts), std::move(flags), h_mesh);
    if (mesh.interior_count() < 50)
        throw MeshTooCoarse("mesh has fewer than 50 interior nodes");

    // Two Laplacian smoothing passes over interior nodes. Moves are applied
    // only when every incident triangle stays positively oriented.
    std::vector<std::vector<int>> nbr(mesh.nodes.size());
    std::vector<std::vector<int>> star(mesh.nodes.size());
    for (int ti = 0; ti < static_cast<int>(mesh.triangles.size()); ++ti) {
        const auto& t = mesh.triangles[static_cast<size_t>(ti)];
        for (int k = 0; k < 3; ++k) {
            star[static_cast<size_t>(t[static_cast<size_t>(k)])].push_back(ti);
            nbr[static_cast<size_t>(t[static_cast<size_t>(k)])].push_back(t[static_cast<size_t>((k + 1) % 3)]);
            nbr[static_cast<size_t>(t[static_cast<size_t>(k)])].push_back(t[static_cast<size_t>((k + 2) % 3)]);
        }
    }
    auto tri_area = [&](int ti, int moved, const Vec2& pos) {
        const auto& t = mesh.triangles[static_cast<size_t>(ti)];
        Vec2 p[3];
        for (int k = 0; k < 3; ++k)
            p[k] = (t[static_cast<size_t>(k)] == moved) ? pos
                                                        : mesh.nodes[static_cast<size_t>(t[static_cast<size_t>(k)])];
        return 0.5 * cross2(p[1] - p[0], p[2] - p[0]);
    };
    for (int pass = 0; pass < 3; ++pass) {
        for (int i = 0; i < mesh.node_count(); ++i) {
            if (mesh.boundary[static_cast<size_t>(i)]) continue;
            Vec2 avg = Vec2::Zero();
            for (int j : nbr[static_cast<size_t>(i)]) avg += mesh.nodes[static_cast<size_t>(j)];
            avg /= static_cast<double>(nbr[static_cast<size_t>(i)].size());
            bool ok = true;
            for (int ti : star[static_cast<size_t>(i)])
                if (tri_area(ti, i, avg) <= 1e-14 * h_mesh * h_mesh) ok = false;
            if (ok) mesh.nodes[static_cast<size_t>(i)] = avg;
        }
    }
    return mesh;
}

std::string mesh_to_json_text(const TriMesh& mesh) {
    std::ostringstream os;
    os << "{\"nodes\":[";
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (i) os << ",";
        os << "[" << fmt17(mesh.nodes[i].x()) << "," << fmt17(mesh.nodes[i].y()) << "]";
    }
    os << "],\"triangles\":[";
    for (size_t i = 0; i < mesh.triangles.size(); ++i) {
        if (i) os << ",";
        os << "[" << mesh.triangles[i][0] << "," << mesh.triangles[i][1] << ","
           << mesh.triangles[i][2] << "]";
    }
    os << "]}";
    return os.str();
}

} // namespace convexopt
