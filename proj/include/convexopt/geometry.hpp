#pragma once

#include <Eigen/Core>

#include <optional>
#include <random>
#include <vector>

#include "convexopt/errors.hpp"

namespace convexopt {

using Vec2 = Eigen::Vector2d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Relative geometric tolerance: all orientation/degeneracy tests use
/// tol_geom(scale) with scale ~ a characteristic length of the body.
inline double tol_geom(double scale) { return 1e-9 * scale; }

/// Closed halfplane {x : <x,normal> <= offset} with |normal| = 1.
struct HalfPlane {
    Vec2 normal;
    double offset = 0.0;

    HalfPlane() = default;
    HalfPlane(const Vec2& n, double c);
};

/// Planar convex body as a CCW vertex list in canonical rotation
/// (lexicographically smallest vertex first). Immutable value type.
class ConvexPolygon {
public:
    /// Validates, removes collinear/duplicate vertices, canonicalizes.
    /// Throws InvalidBody for degenerate input (area ~ 0, reflex turns).
    static ConvexPolygon from_vertices(std::vector<Vec2> verts);

    /// Convex hull (monotone chain) of an arbitrary point set.
    static ConvexPolygon hull_of(std::vector<Vec2> points);

    const std::vector<Vec2>& vertices() const { return verts_; }
    int size() const { return static_cast<int>(verts_.size()); }
    const Vec2& vertex(int i) const { return verts_[static_cast<size_t>(i)]; }

    /// Characteristic length (bounding-box diagonal), used for tolerances.
    double scale() const { return scale_; }

    bool operator==(const ConvexPolygon& o) const;

private:
    ConvexPolygon() = default;
    std::vector<Vec2> verts_;
    double scale_ = 0.0;
};

/// Support-function samples h_i = h(2*pi*i/m) on a uniform angular grid.
struct SupportBody {
    int m = 0;
    Eigen::VectorXd h;

    bool valid(double tol) const; // discrete convexity on the cyclic grid
};

/// Radial samples rho_i = rho(2*pi*i/m) around an interior origin.
struct RadialBody {
    Vec2 origin = Vec2::Zero();
    int m = 0;
    Eigen::VectorXd rho;
};

// --- basic measures ---------------------------------------------------------

double area(const ConvexPolygon& K);
double perimeter(const ConvexPolygon& K);
Vec2 centroid(const ConvexPolygon& K);

/// Support value h_K(dir) = max_{v in K} <v, dir>; dir need not be unit.
double support_value(const ConvexPolygon& K, const Vec2& dir);

bool contains(const ConvexPolygon& K, const Vec2& p, double tol = -1.0);

struct DiamInr {
    double diameter = 0.0;
    double inradius = 0.0;
    Vec2 incenter = Vec2::Zero();
};
DiamInr diameter_inradius(const ConvexPolygon& K);

// --- Minkowski calculus -----------------------------------------------------

ConvexPolygon minkowski_sum(const ConvexPolygon& A, const ConvexPolygon& B);

/// Mixed area V(A,B) = (|A+B| - |A| - |B|) / 2.
double mixed_area(const ConvexPolygon& A, const ConvexPolygon& B);

ConvexPolygon translate(const ConvexPolygon& K, const Vec2& v);
ConvexPolygon scale_about(const ConvexPolygon& K, double s, const Vec2& center = Vec2::Zero());

// --- cutting and set operations ---------------------------------------------

/// K cut by a halfplane. Returns nullopt when the intersection has
/// area below tol_geom (the cut exhausted the body).
std::optional<ConvexPolygon> halfplane_cut(const ConvexPolygon& K, const HalfPlane& H);

/// Intersection of two convex polygons (nullopt when area-degenerate).
std::optional<ConvexPolygon> intersect(const ConvexPolygon& A, const ConvexPolygon& B);

double symdiff_area(const ConvexPolygon& A, const ConvexPolygon& B);

/// Hausdorff distance via the support-function identity
/// d_H(A,B) = sup_theta |h_A - h_B|, sampled on a fine angle grid.
double hausdorff_distance(const ConvexPolygon& A, const ConvexPolygon& B, int grid = 8192);

/// Area of K intersected with the disk B(center, r), by exact
/// triangle/circular-segment decomposition.
double disk_intersection_area(const ConvexPolygon& K, const Vec2& center, double r);

// --- representation conversions ---------------------------------------------

SupportBody to_support(const ConvexPolygon& K, int m);
ConvexPolygon from_support(const SupportBody& S);

/// Throws OriginOutside when origin is not strictly interior.
RadialBody to_radial(const ConvexPolygon& K, const Vec2& origin, int m);
ConvexPolygon from_radial(const RadialBody& R);

/// Radial distance from origin to the boundary along direction angle theta.
/// Origin must be strictly interior.
double radial_value(const ConvexPolygon& K, const Vec2& origin, double theta);

// --- constructions ----------------------------------------------------------

ConvexPolygon regular_polygon(int m, double radius = 1.0, const Vec2& center = Vec2::Zero(),
                              double phase = 0.0);
inline ConvexPolygon disk_polygon(int m, double radius = 1.0, const Vec2& center = Vec2::Zero()) {
    return regular_polygon(m, radius, center);
}
ConvexPolygon rect_polygon(const Vec2& lo, const Vec2& hi);

/// Convex hull of the two disks B((-s,0),radius) and B((+s,0),radius),
/// each arc sampled with arc_points vertices.
ConvexPolygon stadium_polygon(double s, double radius = 1.0, int arc_points = 256);

/// Hull of k points drawn uniformly from the box [lo,hi].
ConvexPolygon random_convex_polygon(std::mt19937_64& rng, int k, const Vec2& lo, const Vec2& hi);

} // namespace convexopt
