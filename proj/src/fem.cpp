#include "convexopt/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <atomic>
#include <cmath>
#include <random>
#include <vector>

namespace convexopt {

namespace {

std::atomic<long> g_solve_count{0};

struct ElementGeom {
    double area;
    Vec2 grad[3]; // gradients of the three hat functions (constant per element)
};

ElementGeom element_geom(const TriMesh& mesh, const std::array<int, 3>& t) {
    const Vec2 a = mesh.nodes[static_cast<size_t>(t[0])];
    const Vec2 b = mesh.nodes[static_cast<size_t>(t[1])];
    const Vec2 c = mesh.nodes[static_cast<size_t>(t[2])];
    ElementGeom g;
    const double det = cross2(b - a, c - a);
    g.area = 0.5 * det;
    g.grad[0] = Vec2(b.y() - c.y(), c.x() - b.x()) / det;
    g.grad[1] = Vec2(c.y() - a.y(), a.x() - c.x()) / det;
    g.grad[2] = Vec2(a.y() - b.y(), b.x() - a.x()) / det;
    return g;
}

/// Smallest k eigenpairs of K x = lambda M x by shift-invert block subspace
/// iteration: factor (K + sigma M) once foreach problem, iterate a block of
/// k + extra vectors with Rayleigh-Ritz extraction in the small subspace.
void shift_invert_eigs(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                       int k, double sigma, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const int n = static_cast<int>(K.rows());
    const int block = std::min(n, k + 6);

    Eigen::SparseMatrix<double> A = K + sigma * M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) throw SolveFailed("LDLT factorization failed");

    std::mt19937_64 rng(0x5eedf00dULL + static_cast<uint64_t>(n) * 31 + static_cast<uint64_t>(k));
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd S(n, block);
    for (int j = 0; j < block; ++j)
        for (int i = 0; i < n; ++i) S(i, j) = gauss(rng);

    Eigen::VectorXd prev = Eigen::VectorXd::Constant(k, -1.0);
    Eigen::MatrixXd ritz_vec;
    Eigen::VectorXd ritz_val;
    for (int iter = 0; iter < 400; ++iter) {
        S = ldlt.solve(M * S);
        // Rayleigh-Ritz in span(S) for the (K, M) pencil.
        Eigen::MatrixXd Km = S.transpose() * (K * S).eval();
        Eigen::MatrixXd Mm = S.transpose() * (M * S).eval();
        Km = 0.5 * (Km + Km.transpose()).eval();
        Mm = 0.5 * (Mm + Mm.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(Km, Mm);
        if (small.info() != Eigen::Success) throw SolveFailed("Rayleigh-Ritz solve failed");
        ritz_val = small.eigenvalues();
        ritz_vec = S * small.eigenvectors(); // M-orthonormal by construction
        S = ritz_vec;
        const Eigen::VectorXd head = ritz_val.head(k);
        const double change = (head - prev).cwiseAbs().maxCoeff() /
                              std::max(1e-300, head.cwiseAbs().maxCoeff());
        prev = head;
        if (iter > 2 && change < 1e-12) break;
    }
    values = ritz_val.head(k);
    vectors = ritz_vec.leftCols(k);
}

void dense_eigs(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M, int k,
                Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const Eigen::MatrixXd Kd(K), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
    if (es.info() != Eigen::Success) throw SolveFailed("dense generalized eigensolve failed");
    values = es.eigenvalues().head(k);
    vectors = es.eigenvectors().leftCols(k);
}

// Dense is competitive only for small systems; above this the shift-invert
// path is orders of magnitude faster at the accuracy we need.
constexpr int kDenseLimit = 360;

void solve_pencil(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                  int k, double sigma, EigResult& out) {
    g_solve_count.fetch_add(1, std::memory_order_relaxed);
    if (K.rows() <= kDenseLimit)
        dense_eigs(K, M, k, out.values, out.vectors);
    else
        shift_invert_eigs(K, M, k, sigma, out.values, out.vectors);
}

} // namespace

long fem_solve_count() { return g_solve_count.load(std::memory_order_relaxed); }

void assemble_p1(const TriMesh& mesh, Eigen::SparseMatrix<double>& stiffness,
                 Eigen::SparseMatrix<double>& mass) {
    const int n = mesh.node_count();
    std::vector<Eigen::Triplet<double>> ks, ms;
    ks.reserve(mesh.triangles.size() * 9);
    ms.reserve(mesh.triangles.size() * 9);
    for (const auto& t : mesh.triangles) {
        const ElementGeom g = element_geom(mesh, t);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                ks.emplace_back(t[static_cast<size_t>(i)], t[static_cast<size_t>(j)],
                                g.area * g.grad[i].dot(g.grad[j]));
                ms.emplace_back(t[static_cast<size_t>(i)], t[static_cast<size_t>(j)],
                                g.area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    stiffness.resize(n, n);
    mass.resize(n, n);
    stiffness.setFromTriplets(ks.begin(), ks.end());
    mass.setFromTriplets(ms.begin(), ms.end());
}

TorsionResult torsion_on_mesh(const TriMesh& mesh) {
    const int n = mesh.node_count();
    std::vector<int> interior;
    std::vector<int> index(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (!mesh.boundary[static_cast<size_t>(i)]) {
            index[static_cast<size_t>(i)] = static_cast<int>(interior.size());
            interior.push_back(i);
        }
    }
    const int ni = static_cast<int>(interior.size());
    if (ni == 0) throw SolveFailed("no interior nodes");

    std::vector<Eigen::Triplet<double>> ks;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd load_full = Eigen::VectorXd::Zero(n);
    for (const auto& t : mesh.triangles) {
        const ElementGeom g = element_geom(mesh, t);
        for (int i = 0; i < 3; ++i) {
            load_full[t[static_cast<size_t>(i)]] += g.area / 3.0;
            const int gi = index[static_cast<size_t>(t[static_cast<size_t>(i)])];
            if (gi < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int gj = index[static_cast<size_t>(t[static_cast<size_t>(j)])];
                if (gj < 0) continue;
                ks.emplace_back(gi, gj, g.area * g.grad[i].dot(g.grad[j]));
            }
        }
    }
    for (int i = 0; i < ni; ++i) f[i] = load_full[interior[static_cast<size_t>(i)]];

    Eigen::SparseMatrix<double> K(ni, ni);
    K.setFromTriplets(ks.begin(), ks.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw SolveFailed("torsion system is singular");
    const Eigen::VectorXd ui = ldlt.solve(f);
    g_solve_count.fetch_add(1, std::memory_order_relaxed);

    TorsionResult out;
    out.u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < ni; ++i) out.u[interior[static_cast<size_t>(i)]] = ui[i];
    out.tau = f.dot(ui);
    return out;
}

EigResult dirichlet_eigs_on_mesh(const TriMesh& mesh, int n) {
    if (n < 1 || n > 20) throw ValidationError("dirichlet_eigs: n must be in [1,20]");
    const int nn = mesh.node_count();
    std::vector<int> interior;
    std::vector<int> index(static_cast<size_t>(nn), -1);
    for (int i = 0; i < nn; ++i) {
        if (!mesh.boundary[static_cast<size_t>(i)]) {
            index[static_cast<size_t>(i)] = static_cast<int>(interior.size());
            interior.push_back(i);
        }
    }
    const int ni = static_cast<int>(interior.size());
    if (ni < n + 2) throw SolveFailed("mesh too coarse for requested eigenvalue count");

    std::vector<Eigen::Triplet<double>> ks, ms;
    for (const auto& t : mesh.triangles) {
        const ElementGeom g = element_geom(mesh, t);
        for (int i = 0; i < 3; ++i) {
            const int gi = index[static_cast<size_t>(t[static_cast<size_t>(i)])];
            if (gi < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int gj = index[static_cast<size_t>(t[static_cast<size_t>(j)])];
                if (gj < 0) continue;
                ks.emplace_back(gi, gj, g.area * g.grad[i].dot(g.grad[j]));
                ms.emplace_back(gi, gj, g.area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    Eigen::SparseMatrix<double> K(ni, ni), M(ni, ni);
    K.setFromTriplets(ks.begin(), ks.end());
    M.setFromTriplets(ms.begin(), ms.end());

    EigResult reduced;
    solve_pencil(K, M, n, 0.0, reduced);

    EigResult out;
    out.values = reduced.values;
    out.vectors = Eigen::MatrixXd::Zero(nn, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < ni; ++i)
            out.vectors(interior[static_cast<size_t>(i)], j) = reduced.vectors(i, j);
    return out;
}

EigResult neumann_eigs_on_mesh(const TriMesh& mesh, int n) {
    if (n < 1 || n > 20) throw ValidationError("neumann_eigs: n must be in [1,20]");
    Eigen::SparseMatrix<double> K, M;
    assemble_p1(mesh, K, M);
    if (K.rows() < n + 2) throw SolveFailed("mesh too coarse for requested eigenvalue count");
    // K is singular (constants); a positive mass shift keeps the factor SPD.
    Vec2 lo = mesh.nodes.front(), hi = mesh.nodes.front();
    for (const Vec2& p : mesh.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double sigma = 1.0 / (hi - lo).squaredNorm();
    EigResult out;
    solve_pencil(K, M, n, sigma, out);
    return out;
}

TorsionResult torsion(const ConvexPolygon& K, double h_mesh, uint64_t seed) {
    return torsion_on_mesh(triangulate(K, h_mesh, seed));
}

EigResult dirichlet_eigs(const ConvexPolygon& K, int n, double h_mesh, uint64_t seed) {
    return dirichlet_eigs_on_mesh(triangulate(K, h_mesh, seed), n);
}

EigResult neumann_eigs(const ConvexPolygon& K, int n, double h_mesh, uint64_t seed) {
    return neumann_eigs_on_mesh(triangulate(K, h_mesh, seed), n);
}

double max_nodal(const TriMesh&, const Eigen::VectorXd& u) { return u.maxCoeff(); }

double max_gradient(const TriMesh& mesh, const Eigen::VectorXd& u) {
    double g = 0.0;
    for (const auto& t : mesh.triangles) {
        const ElementGeom e = element_geom(mesh, t);
        Vec2 grad = Vec2::Zero();
        for (int i = 0; i < 3; ++i) grad += u[t[static_cast<size_t>(i)]] * e.grad[i];
        g = std::max(g, grad.norm());
    }
    return g;
}

} // namespace convexopt
