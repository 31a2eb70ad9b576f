#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "convexopt/functionals.hpp"
#include "convexopt/geometry.hpp"

namespace convexopt {

/// A pair K' (inner) subset K (outer) inside the class {D' subset K subset D}.
struct NestedPair {
    ConvexPolygon inner;
    ConvexPolygon outer;
    ConvexPolygon dprime;
    ConvexPolygon dbox;
};

/// Sample `count` nested pairs: the outer body interpolates (in the Minkowski
/// sense) between a random hull containing D' and the box D, the inner body
/// cuts it with 1-5 halfplanes that keep D' inside. Volume drops are drawn
/// log-uniformly so |K \ K'| spans several decades.
std::vector<NestedPair> generate_nested_pairs(const ConvexPolygon& dprime,
                                              const ConvexPolygon& dbox, int count,
                                              uint64_t seed);

struct PairRecord {
    double r_outer = 0.0;
    double r_inner = 0.0;
    double volume_diff = 0.0; // |K \ K'| = |K| - |K'| for nested pairs
    double ratio = 0.0;       // |R(K) - R(K')| / |K \ K'|
};

struct LipschitzReport {
    std::string functional_desc;
    int sample_count = 0;
    std::vector<PairRecord> records;
    std::vector<int> skipped;       // indices of pairs whose evaluation failed
    double max_ratio = 0.0;
    double smallest_decade_max = 0.0; // max ratio among the smallest-decade pairs
    bool ratio_bounded = false;       // smallest_decade_max <= 2 * max_ratio
    double theoretical_bound = -1.0;  // < 0 when no closed-form class bound applies
    int sign_violations = 0;          // torsion only: tau(K) - tau(K') < -slack
};

/// Evaluate R over both bodies of each pair and record difference ratios.
/// Per-pair failures are skipped (recorded), not fatal.
LipschitzReport lipschitz_experiment(const FunctionalSpec& spec,
                                     const std::vector<NestedPair>& pairs, uint64_t seed = 1);

struct EigTorsionRecord {
    double lhs = 0.0;   // |lambda_n(K) - lambda_n(K')|
    double rhs = 0.0;   // C(n) lambda_n(K)^2 lambda_n(K') |tau(K) - tau(K')|
    double slack = 0.0; // rhs / lhs (inf when both sides vanish)
};

struct EigTorsionReport {
    int n_max = 0;
    std::vector<std::vector<EigTorsionRecord>> per_pair; // [pair][n-1]
    std::vector<int> skipped;
    int violations = 0; // slack < 1 - 5%
};

/// Check |lambda_n(K)-lambda_n(K')| <= 2 n^2 e^(1/(4 pi)) lambda_n(K)^2
/// lambda_n(K') |tau(K)-tau(K')| on every pair for n = 1..n_max.
EigTorsionReport eig_torsion_bound_check(const std::vector<NestedPair>& pairs, int n_max,
                                         double h_mesh, uint64_t seed = 1);

/// Exponent alpha = (N (gamma - 1) + 1) / (2 - gamma) of the Hoelder scale,
/// valid for gamma in (1 - 1/N, 1].
double holder_exponent(int N, double gamma);

nlohmann::json lipschitz_report_to_json(const LipschitzReport& report);
nlohmann::json eig_torsion_report_to_json(const EigTorsionReport& report);

} // namespace convexopt
