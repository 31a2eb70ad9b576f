#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convexopt/geometry.hpp"

namespace convexopt {

enum class FunctionalKind {
    Volume,
    Perimeter,
    Torsion,
    DirichletEig,
    NeumannEig,
    Riesz,
    PotentialIntegral,
    FraenkelAsymmetry,
    IsoDeficit,
    Composite,
};

using ScalarField = std::function<double(const Vec2&)>;
using CompositeFn = std::function<double(const std::vector<double>&)>;

/// Declarative description of a perturbative term R. Deterministic: the
/// evaluation is a pure function of (spec, body, seed).
struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::Volume;
    int n = 1;                  // eigenvalue index for DirichletEig/NeumannEig
    double alpha = 1.0;         // Riesz exponent, must lie in (0,2)
    long budget = 2'000'000;    // Riesz quadrature budget (kernel evaluations)
    ScalarField g;              // potential integrand
    std::string g_name;         // named field for serialization
    double h_mesh = 0.0;        // 0 = auto (inradius / 20)
    uint64_t seed = 1;

    // Composite: F applied to the sub-evaluations of `terms`.
    std::string form;           // "sum", "weighted_sum", "custom:<name>"
    std::vector<double> weights;
    std::vector<FunctionalSpec> terms;

    // Average nearly-degenerate eigenvalue clusters (subgradient surrogate
    // used by the optimizer; off for plain evaluation).
    bool cluster_average = false;

    static FunctionalSpec volume() { return {}; }
    static FunctionalSpec perimeter();
    static FunctionalSpec torsion(double h_mesh = 0.0);
    static FunctionalSpec dirichlet_eig(int n, double h_mesh = 0.0);
    static FunctionalSpec neumann_eig(int n, double h_mesh = 0.0);
    static FunctionalSpec riesz(double alpha, long budget = 2'000'000);
    static FunctionalSpec potential(ScalarField g, std::string name = "custom");
    static FunctionalSpec fraenkel_asymmetry();
    static FunctionalSpec iso_deficit();
    static FunctionalSpec weighted_sum(std::vector<FunctionalSpec> terms,
                                       std::vector<double> weights);
};

void validate(const FunctionalSpec& spec);

/// Evaluate R(K). Mesh-based terms use spec.h_mesh (auto when 0) and
/// spec.seed, so repeated calls are bit-identical.
double evaluate(const FunctionalSpec& spec, const ConvexPolygon& K);

struct RieszResult {
    double value = 0.0;
    double est_rel_error = 0.0;
};

/// V_alpha(K) = iint_{K x K} |x-y|^(alpha-2) dx dy for alpha in (0,2).
/// The inner integral is reduced per boundary edge with the radial part
/// integrated analytically; the outer integral uses triangle quadrature.
RieszResult riesz_potential(const ConvexPolygon& K, double alpha, long budget = 2'000'000);

/// Triangle-midpoint quadrature of g over K (edge-midpoint rule, degree 2).
double potential_integral(const ConvexPolygon& K, const ScalarField& g, double h_mesh = 0.0);

/// Fraenkel asymmetry: inf over equal-area disk placements of |K delta B|/|K|.
/// Centroid-seeded Nelder-Mead with a 3x3 multistart grid.
double fraenkel_asymmetry(const ConvexPolygon& K);

/// Normalized isoperimetric deficit (P - P_ball)/P_ball at equal area.
double iso_deficit(const ConvexPolygon& K);

/// Named scalar fields usable from configuration files:
/// "one", "coord_x", "coord_y", "abs2", "gaussian_well".
ScalarField named_field(const std::string& name);

/// Registry for composite forms referenced as "custom:<name>".
void register_composite_form(const std::string& name, CompositeFn fn);

FunctionalSpec parse_functional(const nlohmann::json& j);
nlohmann::json functional_to_json(const FunctionalSpec& spec);

} // namespace convexopt
