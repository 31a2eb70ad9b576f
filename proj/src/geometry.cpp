#include "convexopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace convexopt {

namespace {

constexpr double kPi = std::numbers::pi;

double bbox_diagonal(const std::vector<Vec2>& pts) {
    Vec2 lo = pts.front(), hi = pts.front();
    for (const Vec2& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

bool lex_less(const Vec2& a, const Vec2& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
}

/// Monotone chain on a sorted point set. eps_area is the signed-area
/// tolerance below which a turn counts as collinear and the middle
/// vertex is dropped.
std::vector<Vec2> monotone_chain(std::vector<Vec2> pts, double eps_area) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a == b; }),
              pts.end());
    const int n = static_cast<int>(pts.size());
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * static_cast<size_t>(n));
    int k = 0;
    for (int i = 0; i < n; ++i) { // lower
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= eps_area) --k;
        hull[k++] = pts[i];
    }
    for (int i = n - 2, t = k + 1; i >= 0; --i) { // upper
        while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= eps_area) --k;
        hull[k++] = pts[i];
    }
    hull.resize(static_cast<size_t>(k - 1));
    return hull;
}

double shoelace(const std::vector<Vec2>& v) {
    double s = 0.0;
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) s += cross2(v[i], v[(i + 1) % n]);
    return 0.5 * s;
}

void canonical_rotate(std::vector<Vec2>& v) {
    auto it = std::min_element(v.begin(), v.end(), lex_less);
    std::rotate(v.begin(), it, v.end());
}

/// Clip a vertex loop against {<x,n> <= c}. Plain Sutherland-Hodgman step.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c,
                                 double tol) {
    std::vector<Vec2> out;
    const size_t sz = poly.size();
    if (sz == 0) return out;
    out.reserve(sz + 2);
    for (size_t i = 0; i < sz; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % sz];
        const double da = n.dot(a) - c;
        const double db = n.dot(b) - c;
        if (da <= tol) out.push_back(a);
        if ((da < -tol && db > tol) || (da > tol && db < -tol)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

/// Support scan over a CCW vertex loop for an increasing angle grid;
/// the argmax vertex advances monotonically, so the whole scan is O(n + m).
struct SupportScanner {
    const std::vector<Vec2>& v;
    int idx;

    explicit SupportScanner(const ConvexPolygon& K, double theta0) : v(K.vertices()), idx(0) {
        const Vec2 u(std::cos(theta0), std::sin(theta0));
        double best = v[0].dot(u);
        for (int i = 1; i < static_cast<int>(v.size()); ++i) {
            const double s = v[static_cast<size_t>(i)].dot(u);
            if (s > best) {
                best = s;
                idx = i;
            }
        }
    }

    double operator()(double theta) {
        const Vec2 u(std::cos(theta), std::sin(theta));
        const int n = static_cast<int>(v.size());
        for (int step = 0; step < 2 * n; ++step) {
            const int nxt = (idx + 1) % n;
            if (v[static_cast<size_t>(nxt)].dot(u) > v[static_cast<size_t>(idx)].dot(u))
                idx = nxt;
            else
                break;
        }
        return v[static_cast<size_t>(idx)].dot(u);
    }
};

} // namespace

HalfPlane::HalfPlane(const Vec2& n, double c) {
    const double len = n.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw InvalidBody("halfplane normal is degenerate");
    normal = n / len;
    offset = c / len;
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Vec2> verts) {
    if (verts.size() < 3) throw InvalidBody("polygon needs at least 3 vertices");
    for (const Vec2& p : verts)
        if (!p.allFinite()) throw InvalidBody("polygon vertex is not finite");
    const double s = bbox_diagonal(verts);
    if (!(s > 0.0)) throw InvalidBody("polygon has zero extent");
    const double eps_area = tol_geom(s) * s;

    // Orientation repair first, so the area comparison below is meaningful.
    double a_in = shoelace(verts);
    if (a_in < 0.0) {
        std::reverse(verts.begin(), verts.end());
        a_in = -a_in;
    }
    std::vector<Vec2> hull = monotone_chain(verts, eps_area);
    if (hull.size() < 3) throw InvalidBody("polygon is degenerate (collinear vertices)");
    const double a_hull = shoelace(hull);
    if (a_hull <= eps_area) throw InvalidBody("polygon area is not strictly positive");
    // A convex input loop and its hull enclose the same area; a mismatch
    // beyond tolerance means the input was genuinely non-convex.
    if (std::abs(a_hull - a_in) > 1e-7 * a_hull + eps_area)
        throw InvalidBody("vertex list is not convex");
    canonical_rotate(hull);

    ConvexPolygon K;
    K.verts_ = std::move(hull);
    K.scale_ = bbox_diagonal(K.verts_);
    return K;
}

ConvexPolygon ConvexPolygon::hull_of(std::vector<Vec2> points) {
    if (points.size() < 3) throw InvalidBody("hull needs at least 3 points");
    const double s = bbox_diagonal(points);
    if (!(s > 0.0)) throw InvalidBody("point set has zero extent");
    std::vector<Vec2> hull = monotone_chain(std::move(points), tol_geom(s) * s);
    if (hull.size() < 3 || shoelace(hull) <= tol_geom(s) * s)
        throw InvalidBody("hull is degenerate");
    canonical_rotate(hull);
    ConvexPolygon K;
    K.verts_ = std::move(hull);
    K.scale_ = bbox_diagonal(K.verts_);
    return K;
}

bool ConvexPolygon::operator==(const ConvexPolygon& o) const {
    return verts_ == o.verts_;
}

double area(const ConvexPolygon& K) { return shoelace(K.vertices()); }

double perimeter(const ConvexPolygon& K) {
    const auto& v = K.vertices();
    const size_t n = v.size();
    double p = 0.0;
    for (size_t i = 0; i < n; ++i) p += (v[(i + 1) % n] - v[i]).norm();
    return p;
}

Vec2 centroid(const ConvexPolygon& K) {
    const auto& v = K.vertices();
    const size_t n = v.size();
    Vec2 c = Vec2::Zero();
    double a = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double w = cross2(v[i], v[(i + 1) % n]);
        c += w * (v[i] + v[(i + 1) % n]);
        a += w;
    }
    return c / (3.0 * a);
}

double support_value(const ConvexPolygon& K, const Vec2& dir) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : K.vertices()) best = std::max(best, v.dot(dir));
    return best;
}

bool contains(const ConvexPolygon& K, const Vec2& p, double tol) {
    if (tol < 0.0) tol = tol_geom(K.scale());
    const auto& v = K.vertices();
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 e = v[(i + 1) % n] - v[i];
        if (cross2(e, p - v[i]) < -tol * e.norm()) return false;
    }
    return true;
}

DiamInr diameter_inradius(const ConvexPolygon& K) {
    DiamInr out;
    const auto& v = K.vertices();
    const int n = static_cast<int>(v.size());
    double d2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d2 = std::max(d2, (v[static_cast<size_t>(i)] - v[static_cast<size_t>(j)]).squaredNorm());
    out.diameter = std::sqrt(d2);

    // Inradius by bisection on the inward-offset polygon (a tiny LP over the
    // edge constraints <x,n_i> <= c_i - t).
    std::vector<Vec2> normals(static_cast<size_t>(n));
    std::vector<double> offsets(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vec2 e = v[static_cast<size_t>((i + 1) % n)] - v[static_cast<size_t>(i)];
        const Vec2 nrm = Vec2(e.y(), -e.x()).normalized(); // outward for CCW
        normals[static_cast<size_t>(i)] = nrm;
        offsets[static_cast<size_t>(i)] = nrm.dot(v[static_cast<size_t>(i)]);
    }
    const double tol = tol_geom(K.scale());
    auto offset_polygon = [&](double t) {
        std::vector<Vec2> poly = K.vertices();
        for (int i = 0; i < n && !poly.empty(); ++i)
            poly = clip_halfplane(poly, normals[static_cast<size_t>(i)],
                                  offsets[static_cast<size_t>(i)] - t, tol);
        return poly;
    };
    double lo = 0.0, hi = 0.5 * out.diameter;
    std::vector<Vec2> witness = K.vertices();
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        std::vector<Vec2> poly = offset_polygon(mid);
        if (poly.size() >= 1) {
            lo = mid;
            witness = std::move(poly);
        } else {
            hi = mid;
        }
    }
    out.inradius = lo;
    Vec2 c = Vec2::Zero();
    for (const Vec2& p : witness) c += p;
    out.incenter = c / static_cast<double>(witness.size());
    return out;
}

ConvexPolygon translate(const ConvexPolygon& K, const Vec2& t) {
    std::vector<Vec2> v = K.vertices();
    for (Vec2& p : v) p += t;
    return ConvexPolygon::from_vertices(std::move(v));
}

ConvexPolygon scale_about(const ConvexPolygon& K, double s, const Vec2& center) {
    if (!(s > 0.0)) throw InvalidBody("scale factor must be positive");
    std::vector<Vec2> v = K.vertices();
    for (Vec2& p : v) p = center + s * (p - center);
    return ConvexPolygon::from_vertices(std::move(v));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& A, const ConvexPolygon& B) {
    const auto& a = A.vertices();
    const auto& b = B.vertices();
    const int na = static_cast<int>(a.size());
    const int nb = static_cast<int>(b.size());

    // Bottom-most (then left-most) start vertex makes the outgoing edge
    // angles of a CCW loop increase monotonically through [0, 2*pi).
    auto bottom = [](const std::vector<Vec2>& v) {
        int k = 0;
        for (int i = 1; i < static_cast<int>(v.size()); ++i) {
            const Vec2 &p = v[static_cast<size_t>(i)], &q = v[static_cast<size_t>(k)];
            if (p.y() < q.y() || (p.y() == q.y() && p.x() < q.x())) k = i;
        }
        return k;
    };
    auto edge_angle = [](const Vec2& e) {
        double ang = std::atan2(e.y(), e.x());
        if (ang < -1e-12) ang += 2.0 * kPi;
        return ang;
    };
    const int sa = bottom(a), sb = bottom(b);
    std::vector<Vec2> sum;
    sum.reserve(static_cast<size_t>(na + nb));
    Vec2 cur = a[static_cast<size_t>(sa)] + b[static_cast<size_t>(sb)];
    int i = 0, j = 0;
    while (i < na || j < nb) {
        sum.push_back(cur);
        const Vec2 ea = a[static_cast<size_t>((sa + i + 1) % na)] - a[static_cast<size_t>((sa + i) % na)];
        const Vec2 eb = b[static_cast<size_t>((sb + j + 1) % nb)] - b[static_cast<size_t>((sb + j) % nb)];
        if (j >= nb || (i < na && edge_angle(ea) <= edge_angle(eb))) {
            cur += ea;
            ++i;
        } else {
            cur += eb;
            ++j;
        }
    }
    return ConvexPolygon::hull_of(std::move(sum));
}

double mixed_area(const ConvexPolygon& A, const ConvexPolygon& B) {
    return 0.5 * (area(minkowski_sum(A, B)) - area(A) - area(B));
}

std::optional<ConvexPolygon> halfplane_cut(const ConvexPolygon& K, const HalfPlane& H) {
    const double tol = tol_geom(K.scale());
    std::vector<Vec2> poly = clip_halfplane(K.vertices(), H.normal, H.offset, tol);
    if (poly.size() < 3 || std::abs(shoelace(poly)) < tol * K.scale()) return std::nullopt;
    return ConvexPolygon::hull_of(std::move(poly));
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& A, const ConvexPolygon& B) {
    const double tol = tol_geom(std::max(A.scale(), B.scale()));
    std::vector<Vec2> poly = A.vertices();
    const auto& b = B.vertices();
    const size_t nb = b.size();
    for (size_t i = 0; i < nb && !poly.empty(); ++i) {
        const Vec2 e = b[(i + 1) % nb] - b[i];
        const Vec2 n = Vec2(e.y(), -e.x()).normalized();
        poly = clip_halfplane(poly, n, n.dot(b[i]), tol);
    }
    if (poly.size() < 3 || std::abs(shoelace(poly)) < tol * std::max(A.scale(), B.scale()))
        return std::nullopt;
    return ConvexPolygon::hull_of(std::move(poly));
}

double symdiff_area(const ConvexPolygon& A, const ConvexPolygon& B) {
    auto inter = intersect(A, B);
    const double ai = inter ? area(*inter) : 0.0;
    return area(A) + area(B) - 2.0 * ai;
}

double hausdorff_distance(const ConvexPolygon& A, const ConvexPolygon& B, int grid) {
    SupportScanner sa(A, 0.0), sb(B, 0.0);
    double d = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double theta = 2.0 * kPi * i / grid;
        d = std::max(d, std::abs(sa(theta) - sb(theta)));
    }
    return d;
}

double disk_intersection_area(const ConvexPolygon& K, const Vec2& center, double r) {
    if (!(r > 0.0)) return 0.0;
    const auto& v = K.vertices();
    const size_t n = v.size();
    const double r2 = r * r;
    double total = 0.0;

    // Per-edge decomposition about the disk center: segments inside the disk
    // contribute triangle areas, parts outside contribute circular sectors.
    auto sector = [&](const Vec2& p, const Vec2& q) {
        double dphi = std::atan2(cross2(p, q), p.dot(q));
        return 0.5 * r2 * dphi;
    };
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = v[i] - center;
        Vec2 b = v[(i + 1) % n] - center;
        const bool ina = a.squaredNorm() <= r2;
        const bool inb = b.squaredNorm() <= r2;
        const Vec2 d = b - a;
        // |a + t d|^2 = r^2
        const double qa = d.squaredNorm();
        const double qb = 2.0 * a.dot(d);
        const double qc = a.squaredNorm() - r2;
        double t0 = 2.0, t1 = -1.0;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc > 0.0 && qa > 0.0) {
            const double sq = std::sqrt(disc);
            t0 = (-qb - sq) / (2.0 * qa);
            t1 = (-qb + sq) / (2.0 * qa);
        }
        if (ina && inb) {
            total += 0.5 * cross2(a, b);
        } else if (ina && !inb) {
            const Vec2 m = a + std::clamp(t1, 0.0, 1.0) * d;
            total += 0.5 * cross2(a, m) + sector(m, b);
        } else if (!ina && inb) {
            const Vec2 m = a + std::clamp(t0, 0.0, 1.0) * d;
            total += sector(a, m) + 0.5 * cross2(m, b);
        } else {
            if (t0 > 0.0 && t1 < 1.0 && t0 < t1) { // chord passes through the disk
                const Vec2 m0 = a + t0 * d;
                const Vec2 m1 = a + t1 * d;
                total += sector(a, m0) + 0.5 * cross2(m0, m1) + sector(m1, b);
            } else {
                total += sector(a, b);
            }
        }
    }
    return std::max(total, 0.0);
}

SupportBody to_support(const ConvexPolygon& K, int m) {
    if (m < 16) throw InvalidBody("support grid needs m >= 16");
    SupportBody S;
    S.m = m;
    S.h.resize(m);
    SupportScanner scan(K, 0.0);
    for (int i = 0; i < m; ++i) S.h[i] = scan(2.0 * kPi * i / m);
    return S;
}

bool SupportBody::valid(double tol) const {
    if (m < 16 || h.size() != m) return false;
    const double c = std::cos(2.0 * kPi / m);
    for (int i = 0; i < m; ++i) {
        const double hm = h[(i + m - 1) % m], hp = h[(i + 1) % m];
        if (hm + hp < 2.0 * c * h[i] - tol) return false;
    }
    return true;
}

ConvexPolygon from_support(const SupportBody& S) {
    if (S.m < 16 || S.h.size() != S.m) throw InvalidBody("support body has invalid grid");
    const double hmax = S.h.maxCoeff();
    if (!(hmax > 0.0)) throw InvalidBody("support body is empty");
    std::vector<Vec2> poly = {Vec2(-2 * hmax, -2 * hmax), Vec2(2 * hmax, -2 * hmax),
                              Vec2(2 * hmax, 2 * hmax), Vec2(-2 * hmax, 2 * hmax)};
    const double tol = tol_geom(2.0 * hmax);
    for (int i = 0; i < S.m && !poly.empty(); ++i) {
        const double theta = 2.0 * kPi * i / S.m;
        poly = clip_halfplane(poly, Vec2(std::cos(theta), std::sin(theta)), S.h[i], tol);
    }
    if (poly.size() < 3) throw InvalidBody("support body describes an empty set");
    return ConvexPolygon::hull_of(std::move(poly));
}

double radial_value(const ConvexPolygon& K, const Vec2& origin, double theta) {
    const auto& v = K.vertices();
    const size_t n = v.size();
    const Vec2 u(std::cos(theta), std::sin(theta));
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 e = v[(i + 1) % n] - v[i];
        const Vec2 nrm(e.y(), -e.x()); // outward (unnormalized)
        const double denom = nrm.dot(u);
        if (denom > 0.0) {
            const double t = nrm.dot(v[i] - origin) / denom;
            best = std::min(best, t);
        }
    }
    return best;
}

RadialBody to_radial(const ConvexPolygon& K, const Vec2& origin, int m) {
    if (m < 16) throw InvalidBody("radial grid needs m >= 16");
    const double tol = tol_geom(K.scale());
    const auto& v = K.vertices();
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 e = v[(i + 1) % n] - v[i];
        if (cross2(e, origin - v[i]) < tol * e.norm())
            throw OriginOutside("radial origin is not strictly interior");
    }
    RadialBody R;
    R.origin = origin;
    R.m = m;
    R.rho.resize(m);
    for (int i = 0; i < m; ++i) R.rho[i] = radial_value(K, origin, 2.0 * kPi * i / m);
    return R;
}

ConvexPolygon from_radial(const RadialBody& R) {
    if (R.m < 16 || R.rho.size() != R.m) throw InvalidBody("radial body has invalid grid");
    std::vector<Vec2> pts(static_cast<size_t>(R.m));
    for (int i = 0; i < R.m; ++i) {
        if (!(R.rho[i] > 0.0)) throw InvalidBody("radial values must be positive");
        const double theta = 2.0 * kPi * i / R.m;
        pts[static_cast<size_t>(i)] = R.origin + R.rho[i] * Vec2(std::cos(theta), std::sin(theta));
    }
    return ConvexPolygon::hull_of(std::move(pts));
}

ConvexPolygon regular_polygon(int m, double radius, const Vec2& center, double phase) {
    if (m < 3) throw InvalidBody("regular polygon needs m >= 3");
    std::vector<Vec2> pts(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double t = phase + 2.0 * kPi * i / m;
        pts[static_cast<size_t>(i)] = center + radius * Vec2(std::cos(t), std::sin(t));
    }
    return ConvexPolygon::from_vertices(std::move(pts));
}

ConvexPolygon rect_polygon(const Vec2& lo, const Vec2& hi) {
    return ConvexPolygon::from_vertices(
        {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
}

ConvexPolygon stadium_polygon(double s, double radius, int arc_points) {
    if (!(s >= 0.0) || !(radius > 0.0)) throw InvalidBody("stadium parameters must be nonnegative");
    std::vector<Vec2> pts;
    pts.reserve(2 * static_cast<size_t>(arc_points));
    // Right semicircle from -pi/2 to +pi/2, then left one from +pi/2 to 3pi/2.
    for (int i = 0; i < arc_points; ++i) {
        const double t = -0.5 * kPi + kPi * i / (arc_points - 1);
        pts.push_back(Vec2(s, 0.0) + radius * Vec2(std::cos(t), std::sin(t)));
    }
    for (int i = 0; i < arc_points; ++i) {
        const double t = 0.5 * kPi + kPi * i / (arc_points - 1);
        pts.push_back(Vec2(-s, 0.0) + radius * Vec2(std::cos(t), std::sin(t)));
    }
    return ConvexPolygon::hull_of(std::move(pts));
}

ConvexPolygon random_convex_polygon(std::mt19937_64& rng, int k, const Vec2& lo, const Vec2& hi) {
    std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Vec2> pts(static_cast<size_t>(std::max(k, 3)));
        for (Vec2& p : pts) p = Vec2(ux(rng), uy(rng));
        try {
            return ConvexPolygon::hull_of(std::move(pts));
        } catch (const InvalidBody&) {
            continue; // degenerate draw, retry
        }
    }
    throw SamplerStalled("could not draw a nondegenerate random polygon");
}

} // namespace convexopt
