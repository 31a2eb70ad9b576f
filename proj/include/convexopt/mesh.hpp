#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "convexopt/geometry.hpp"

namespace convexopt {

/// P1 triangulation of the interior of a convex polygon.
struct TriMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles; // CCW index triples
    std::vector<uint8_t> boundary; // 1 if the node lies on the polygon boundary
    double h_mesh = 0.0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int interior_count() const;
    double area_sum() const;
    double min_angle_deg() const;
};

/// Boundary subdivision at spacing h_mesh, jittered interior grid, Delaunay
/// triangulation, two Laplacian smoothing passes. Deterministic given seed.
/// Throws MeshTooCoarse when h_mesh exceeds the inradius or the mesh ends up
/// with fewer than 50 interior nodes.
TriMesh triangulate(const ConvexPolygon& K, double h_mesh, uint64_t seed = 1);

/// Delaunay triangulation of an explicit point set whose convex hull is the
/// meshed domain. Used by the mapped-mesh evaluators; no coarseness checks.
TriMesh delaunay_mesh(std::vector<Vec2> points, std::vector<uint8_t> boundary_flags,
                      double h_mesh);

/// {"nodes":[[x,y],...],"triangles":[[i,j,k],...]} dump for debugging.
std::string mesh_to_json_text(const TriMesh& mesh);

} // namespace convexopt
