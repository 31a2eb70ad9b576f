#include "convexopt/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "convexopt/fem.hpp"
#include "convexopt/parallel.hpp"

namespace convexopt {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 sample_in_polygon(const ConvexPolygon& K, std::mt19937_64& rng) {
    Vec2 lo = K.vertices().front(), hi = lo;
    for (const Vec2& p : K.vertices()) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
    for (int i = 0; i < 4096; ++i) {
        const Vec2 p(ux(rng), uy(rng));
        if (contains(K, p)) return p;
    }
    throw SamplerStalled("rejection sampling inside polygon stalled");
}

bool poly_inside(const ConvexPolygon& inner, const ConvexPolygon& outer, double tol) {
    for (const Vec2& v : inner.vertices())
        if (!contains(outer, v, tol)) return false;
    return true;
}

} // namespace

std::vector<NestedPair> generate_nested_pairs(const ConvexPolygon& dprime,
                                              const ConvexPolygon& dbox, int count,
                                              uint64_t seed) {
    const double tol = 1e-7 * dbox.scale();
    if (!poly_inside(dprime, dbox, -tol))
        throw ValidationError("generate_nested_pairs: D' must lie strictly inside D");
    std::vector<NestedPair> pairs;
    pairs.reserve(static_cast<size_t>(count));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int rejections = 0;
    while (static_cast<int>(pairs.size()) < count) {
        if (rejections > 10000) throw SamplerStalled("nested-pair sampler stalled");
        try {
            // Outer body: Minkowski interpolation between hull(D' + points) and D.
            std::vector<Vec2> pts = dprime.vertices();
            const int extra = 3 + static_cast<int>(rng() % 8);
            for (int i = 0; i < extra; ++i) pts.push_back(sample_in_polygon(dbox, rng));
            const ConvexPolygon hull = ConvexPolygon::hull_of(std::move(pts));
            const double t = u01(rng);
            ConvexPolygon outer =
                (t < 1e-3) ? hull
                           : ((t > 1 - 1e-3) ? dbox
                                             : minkowski_sum(scale_about(hull, 1.0 - t),
                                                             scale_about(dbox, t)));

            // Inner body: 1-5 cuts that keep D' inside, log-uniform depths.
            ConvexPolygon inner = outer;
            const int ncuts = 1 + static_cast<int>(rng() % 5);
            for (int c = 0; c < ncuts; ++c) {
                const double a = 2 * kPi * u01(rng);
                const Vec2 nu(std::cos(a), std::sin(a));
                const double cmin = support_value(dprime, nu);
                const double cmax = support_value(inner, nu);
                if (cmax - cmin < tol) continue;
                const double depth = (cmax - cmin) * std::pow(10.0, -3.0 * u01(rng));
                auto cut = halfplane_cut(inner, HalfPlane(nu, cmax - depth));
                if (cut) inner = *cut;
            }
            if (!poly_inside(dprime, inner, tol) || !poly_inside(inner, outer, tol) ||
                !poly_inside(outer, dbox, tol)) {
                ++rejections;
                continue;
            }
            if (area(outer) - area(inner) <= tol) {
                ++rejections;
                continue;
            }
            pairs.push_back({inner, outer, dprime, dbox});
        } catch (const Error&) {
            ++rejections;
        }
    }
    return pairs;
}

LipschitzReport lipschitz_experiment(const FunctionalSpec& spec,
                                     const std::vector<NestedPair>& pairs, uint64_t seed) {
    if (pairs.empty()) throw ValidationError("lipschitz_experiment: no pairs");
    LipschitzReport report;
    report.functional_desc = functional_to_json(spec).dump();
    report.sample_count = static_cast<int>(pairs.size());

    const int n = static_cast<int>(pairs.size());
    std::vector<PairRecord> recs(static_cast<size_t>(n));
    std::vector<uint8_t> ok(static_cast<size_t>(n), 0);
    const bool is_torsion = spec.kind == FunctionalKind::Torsion;

    parallel_for(n, [&](int i) {
        const NestedPair& pr = pairs[static_cast<size_t>(i)];
        FunctionalSpec s = spec;
        s.seed = seed * 1000003ull + static_cast<uint64_t>(i);
        try {
            PairRecord rec;
            rec.r_outer = evaluate(s, pr.outer);
            rec.r_inner = evaluate(s, pr.inner);
            rec.volume_diff = area(pr.outer) - area(pr.inner);
            rec.ratio = std::abs(rec.r_outer - rec.r_inner) / rec.volume_diff;
            recs[static_cast<size_t>(i)] = rec;
            ok[static_cast<size_t>(i)] = 1;
        } catch (const Error&) {
            ok[static_cast<size_t>(i)] = 0;
        }
    });

    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (!ok[static_cast<size_t>(i)]) {
            report.skipped.push_back(i);
            continue;
        }
        const PairRecord& rec = recs[static_cast<size_t>(i)];
        report.records.push_back(rec);
        report.max_ratio = std::max(report.max_ratio, rec.ratio);
        vmin = std::min(vmin, rec.volume_diff);
        if (is_torsion && rec.r_outer - rec.r_inner < -1e-6 * rec.r_outer)
            ++report.sign_violations;
    }
    for (const PairRecord& rec : report.records)
        if (rec.volume_diff <= 10.0 * vmin)
            report.smallest_decade_max = std::max(report.smallest_decade_max, rec.ratio);
    report.ratio_bounded = report.smallest_decade_max <= 2.0 * report.max_ratio;

    // Closed-form class bounds where the estimates exist.
    if (!pairs.empty()) {
        const ConvexPolygon& D = pairs.front().dbox;
        if (spec.kind == FunctionalKind::Volume) {
            report.theoretical_bound = 1.0;
        } else if (spec.kind == FunctionalKind::Torsion) {
            const double diam = diameter_inradius(D).diameter;
            report.theoretical_bound =
                2.0 * std::max(diam * diam / 4.0, (diam / 2.0) * (diam / 2.0));
        } else if (spec.kind == FunctionalKind::Riesz) {
            report.theoretical_bound =
                2.0 * (2.0 * kPi / spec.alpha) * std::pow(area(D) / kPi, spec.alpha / 2.0);
        }
    }
    return report;
}

EigTorsionReport eig_torsion_bound_check(const std::vector<NestedPair>& pairs, int n_max,
                                         double h_mesh, uint64_t seed) {
    if (n_max < 1 || n_max > 5) throw ValidationError("eig_torsion_bound_check: n_max in [1,5]");
    EigTorsionReport report;
    report.n_max = n_max;
    const int n = static_cast<int>(pairs.size());
    report.per_pair.assign(static_cast<size_t>(n), {});
    std::vector<uint8_t> ok(static_cast<size_t>(n), 0);

    parallel_for(n, [&](int i) {
        const NestedPair& pr = pairs[static_cast<size_t>(i)];
        const uint64_t s = seed * 7919ull + static_cast<uint64_t>(i);
        try {
            const double h_out =
                (h_mesh > 0.0) ? h_mesh : diameter_inradius(pr.outer).inradius / 20.0;
            const double h_in =
                (h_mesh > 0.0) ? h_mesh : diameter_inradius(pr.inner).inradius / 20.0;
            const uint64_t s_in = (pr.inner == pr.outer) ? s : s + 1;
            const EigResult eo = dirichlet_eigs(pr.outer, n_max, h_out, s);
            const EigResult ei = dirichlet_eigs(pr.inner, n_max, h_in, s_in);
            const double to = torsion(pr.outer, h_out, s).tau;
            const double ti = torsion(pr.inner, h_in, s_in).tau;
            std::vector<EigTorsionRecord> recs(static_cast<size_t>(n_max));
            for (int k = 1; k <= n_max; ++k) {
                EigTorsionRecord r;
                r.lhs = std::abs(eo.values[k - 1] - ei.values[k - 1]);
                const double cn = 2.0 * k * k * std::exp(1.0 / (4.0 * kPi));
                r.rhs = cn * eo.values[k - 1] * eo.values[k - 1] * ei.values[k - 1] *
                        std::abs(to - ti);
                r.slack = (r.lhs > 0.0) ? r.rhs / r.lhs
                                        : std::numeric_limits<double>::infinity();
                recs[static_cast<size_t>(k - 1)] = r;
            }
            report.per_pair[static_cast<size_t>(i)] = std::move(recs);
            ok[static_cast<size_t>(i)] = 1;
        } catch (const Error&) {
            ok[static_cast<size_t>(i)] = 0;
        }
    });

    for (int i = 0; i < n; ++i) {
        if (!ok[static_cast<size_t>(i)]) {
            report.skipped.push_back(i);
            report.per_pair[static_cast<size_t>(i)].clear();
            continue;
        }
        for (const EigTorsionRecord& r : report.per_pair[static_cast<size_t>(i)])
            if (r.slack < 1.0 - 0.05) ++report.violations;
    }
    return report;
}

double holder_exponent(int N, double gamma) {
    if (N < 2) throw ValidationError("holder_exponent: N >= 2");
    if (!(gamma > 1.0 - 1.0 / N && gamma <= 1.0))
        throw ValidationError("holder_exponent: gamma must lie in (1 - 1/N, 1]");
    return (N * (gamma - 1.0) + 1.0) / (2.0 - gamma);
}

nlohmann::json lipschitz_report_to_json(const LipschitzReport& report) {
    nlohmann::json j;
    j["functional"] = nlohmann::json::parse(report.functional_desc);
    j["sample_count"] = report.sample_count;
    j["max_ratio"] = report.max_ratio;
    j["smallest_decade_max"] = report.smallest_decade_max;
    j["ratio_bounded"] = report.ratio_bounded;
    j["sign_violations"] = report.sign_violations;
    if (report.theoretical_bound >= 0.0) j["theoretical_bound"] = report.theoretical_bound;
    j["skipped"] = report.skipped;
    nlohmann::json recs = nlohmann::json::array();
    for (const PairRecord& r : report.records)
        recs.push_back({{"r_outer", r.r_outer},
                        {"r_inner", r.r_inner},
                        {"volume_diff", r.volume_diff},
                        {"ratio", r.ratio}});
    j["pairs"] = recs;
    return j;
}

nlohmann::json eig_torsion_report_to_json(const EigTorsionReport& report) {
    nlohmann::json j;
    j["n_max"] = report.n_max;
    j["violations"] = report.violations;
    j["skipped"] = report.skipped;
    nlohmann::json pp = nlohmann::json::array();
    for (const auto& recs : report.per_pair) {
        nlohmann::json row = nlohmann::json::array();
        for (const EigTorsionRecord& r : recs)
            row.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}});
        pp.push_back(row);
    }
    j["per_pair"] = pp;
    return j;
}

} // namespace convexopt
