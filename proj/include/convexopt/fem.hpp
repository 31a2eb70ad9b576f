#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "convexopt/mesh.hpp"

namespace convexopt {

/// Generalized eigenpairs of the P1 stiffness/mass pencil, ascending,
/// eigenvectors mass-normalized (L2 norm 1 in the discrete mass inner
/// product). For Dirichlet problems the vectors carry zeros on the boundary.
struct EigResult {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors; // one column per eigenpair, nodal coefficients

    int count() const { return static_cast<int>(values.size()); }
};

struct TorsionResult {
    double tau = 0.0;
    Eigen::VectorXd u; // nodal field, zero on the boundary
};

/// P1 stiffness and consistent mass over all mesh nodes.
void assemble_p1(const TriMesh& mesh, Eigen::SparseMatrix<double>& stiffness,
                 Eigen::SparseMatrix<double>& mass);

/// Solve -Laplace u = 1, u = 0 on the boundary; tau = integral of u.
TorsionResult torsion_on_mesh(const TriMesh& mesh);

/// n smallest Dirichlet (zero boundary values) eigenpairs.
EigResult dirichlet_eigs_on_mesh(const TriMesh& mesh, int n);

/// n smallest Neumann (natural boundary) eigenpairs; the first is ~0.
EigResult neumann_eigs_on_mesh(const TriMesh& mesh, int n);

/// Convenience wrappers that mesh the body first (h_mesh <= inradius).
TorsionResult torsion(const ConvexPolygon& K, double h_mesh, uint64_t seed = 1);
EigResult dirichlet_eigs(const ConvexPolygon& K, int n, double h_mesh, uint64_t seed = 1);
EigResult neumann_eigs(const ConvexPolygon& K, int n, double h_mesh, uint64_t seed = 1);

/// Max nodal value and max per-triangle |grad| of a nodal field.
double max_nodal(const TriMesh& mesh, const Eigen::VectorXd& u);
double max_gradient(const TriMesh& mesh, const Eigen::VectorXd& u);

/// Running count of linear/eigen solves, used for optimizer budget accounting.
long fem_solve_count();

} // namespace convexopt
