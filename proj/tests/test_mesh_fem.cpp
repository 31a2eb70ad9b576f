#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "convexopt/fem.hpp"
#include "convexopt/mesh.hpp"
#include "oracle_helpers.hpp"

using namespace convexopt;
using oracles::kPi;

namespace {

ConvexPolygon unit_square() { return rect_polygon({0, 0}, {1, 1}); }

ConvexPolygon random_body(std::mt19937_64& rng) {
    // random convex body squeezed into the annulus class disk(0.3) in disk(2)
    const ConvexPolygon Dp = disk_polygon(64, 0.3);
    std::vector<Vec2> pts = Dp.vertices();
    std::uniform_real_distribution<double> ur(0.35, 2.0), ua(0.0, 2 * kPi);
    const int extra = 4 + static_cast<int>(rng() % 8);
    for (int i = 0; i < extra; ++i) {
        const double r = ur(rng), a = ua(rng);
        pts.push_back(r * Vec2(std::cos(a), std::sin(a)));
    }
    return ConvexPolygon::hull_of(std::move(pts));
}

} // namespace

TEST_CASE("triangulate quality and coverage") {
    const TriMesh sq = triangulate(unit_square(), 0.05);
    CHECK(sq.node_count() >= 350);
    CHECK(sq.node_count() <= 600);
    CHECK(sq.area_sum() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sq.min_angle_deg() >= 20.0);

    const ConvexPolygon disk = disk_polygon(256);
    const TriMesh dm = triangulate(disk, 0.05);
    CHECK(dm.area_sum() == doctest::Approx(area(disk)).epsilon(1e-8));
    CHECK(dm.area_sum() == doctest::Approx(kPi * (1.0 - 1.0e-4)).epsilon(1e-4));
    CHECK(dm.min_angle_deg() >= 20.0);

    CHECK_THROWS_AS(triangulate(unit_square(), 0.6), MeshTooCoarse);

    // boundary nodes lie on the polygon boundary
    for (int i = 0; i < sq.node_count(); ++i) {
        if (!sq.boundary[static_cast<size_t>(i)]) continue;
        const Vec2 p = sq.nodes[static_cast<size_t>(i)];
        const double d = std::min({p.x(), p.y(), 1 - p.x(), 1 - p.y()});
        CHECK(std::abs(d) < 1e-12);
    }
}

TEST_CASE("torsion ground truths") {
    // unit disk: u = (1-r^2)/4, tau = pi/8
    const TorsionResult disk = torsion(disk_polygon(256), 0.03);
    CHECK(disk.tau == doctest::Approx(kPi / 8.0).epsilon(0.01));

    // unit square: series oracle
    const double series = oracles::torsion_unit_square_series();
    CHECK(series == doctest::Approx(0.0351).epsilon(2e-3)); // sanity on the oracle itself
    const TorsionResult sq = torsion(unit_square(), 0.03);
    CHECK(sq.tau == doctest::Approx(series).epsilon(0.01));

    // u >= 0 and tau > 0
    CHECK(sq.u.minCoeff() >= 0.0);
    CHECK(sq.tau > 0.0);

    // scaling law tau(tK) = t^4 tau(K)
    const TorsionResult scaled = torsion(scale_about(unit_square(), 1.5), 0.045);
    CHECK(scaled.tau == doctest::Approx(std::pow(1.5, 4) * sq.tau).epsilon(0.01));
}

TEST_CASE("dirichlet eigenvalues") {
    const TriMesh sq = triangulate(unit_square(), 0.03);
    const EigResult es = dirichlet_eigs_on_mesh(sq, 3);
    CHECK(es.values[0] == doctest::Approx(2 * kPi * kPi).epsilon(0.01));
    CHECK(es.values[1] == doctest::Approx(5 * kPi * kPi).epsilon(0.015));

    const EigResult ed = dirichlet_eigs(disk_polygon(256), 1, 0.03);
    CHECK(ed.values[0] == doctest::Approx(oracles::kBesselJ01 * oracles::kBesselJ01).epsilon(0.01));

    // eigenvalues ascending
    for (int i = 1; i < es.count(); ++i) CHECK(es.values[i] >= es.values[i - 1]);
}

TEST_CASE("eig result invariants: rayleigh quotient and mass orthogonality") {
    const TriMesh mesh = triangulate(disk_polygon(128), 0.06);
    Eigen::SparseMatrix<double> K, M;
    assemble_p1(mesh, K, M);
    const EigResult e = neumann_eigs_on_mesh(mesh, 4);
    for (int j = 0; j < e.count(); ++j) {
        const Eigen::VectorXd v = e.vectors.col(j);
        const double rq = v.dot(K * v) / v.dot(M * v);
        if (e.values[j] > 1e-8) CHECK(rq == doctest::Approx(e.values[j]).epsilon(1e-10));
        for (int i = 0; i < j; ++i) {
            const double m_ij = e.vectors.col(i).dot(M * v);
            CHECK(std::abs(m_ij) < 1e-8);
        }
        CHECK(v.dot(M * v) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("neumann eigenvalues") {
    const EigResult sq = neumann_eigs(unit_square(), 4, 0.03);
    CHECK(std::abs(sq.values[0]) <= 1e-6 * sq.values[1]); // constants
    CHECK(sq.values[1] == doctest::Approx(kPi * kPi).epsilon(0.01));
    CHECK(sq.values[2] == doctest::Approx(kPi * kPi).epsilon(0.01)); // double eigenvalue

    // mu_n <= lambda_n on a handful of random bodies
    std::mt19937_64 rng(3);
    for (int i = 0; i < 8; ++i) {
        const ConvexPolygon K = random_body(rng);
        const double h = diameter_inradius(K).inradius / 15.0;
        const EigResult mu = neumann_eigs(K, 3, h);
        const EigResult la = dirichlet_eigs(K, 3, h);
        for (int n = 0; n < 3; ++n) CHECK(mu.values[n] <= la.values[n] * 1.01);
    }
}

TEST_CASE("mesh refinement convergence is second order") {
    const double exact = 2 * kPi * kPi;
    const double e1 = std::abs(dirichlet_eigs(unit_square(), 1, 0.08).values[0] - exact);
    const double e2 = std::abs(dirichlet_eigs(unit_square(), 1, 0.04).values[0] - exact);
    CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("domain monotonicity") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 6; ++i) {
        const ConvexPolygon K = random_body(rng);
        std::uniform_real_distribution<double> ua(0.0, 2 * kPi);
        const double a = ua(rng);
        const Vec2 nu(std::cos(a), std::sin(a));
        const double smax = support_value(K, nu);
        auto cut = halfplane_cut(K, HalfPlane(nu, 0.7 * smax));
        if (!cut) continue;
        const double h = diameter_inradius(K).inradius / 15.0;
        const double h2 = diameter_inradius(*cut).inradius / 15.0;
        const double lam_K = dirichlet_eigs(K, 1, h).values[0];
        const double lam_c = dirichlet_eigs(*cut, 1, std::min(h, h2)).values[0];
        CHECK(lam_c >= lam_K * (1 - 0.02));
        const double tau_K = torsion(K, h).tau;
        const double tau_c = torsion(*cut, std::min(h, h2)).tau;
        CHECK(tau_c <= tau_K * (1 + 0.02));
    }
}

TEST_CASE("faber-krahn on random convex bodies") {
    // lambda_1(K) |K| >= lambda_1(B) |B| = j01^2 pi, with 2% slack
    const double rhs = oracles::kBesselJ01 * oracles::kBesselJ01 * kPi;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const ConvexPolygon K = random_body(rng);
        const double h = diameter_inradius(K).inradius / 12.0;
        const double lam = dirichlet_eigs(K, 1, h).values[0];
        CHECK(lam * area(K) >= rhs * (1 - 0.02));
    }
}

TEST_CASE("torsion W1inf bounds on random bodies") {
    // max u <= diam^2/4 (with 2% slack), max |grad u| <= diam/2 (with 5%)
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
        const ConvexPolygon K = random_body(rng);
        const double diam = diameter_inradius(K).diameter;
        const double h = diameter_inradius(K).inradius / 15.0;
        const TriMesh mesh = triangulate(K, h);
        const TorsionResult t = torsion_on_mesh(mesh);
        CHECK(max_nodal(mesh, t.u) <= diam * diam / 4.0 * 1.02);
        CHECK(max_gradient(mesh, t.u) <= diam / 2.0 * 1.05);
    }
}
