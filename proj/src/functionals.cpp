#include "convexopt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

#include "convexopt/fem.hpp"
#include "convexopt/mesh.hpp"

namespace convexopt {

namespace {

constexpr double kPi = std::numbers::pi;

std::map<std::string, CompositeFn>& composite_registry() {
    static std::map<std::string, CompositeFn> reg;
    return reg;
}

double auto_h_mesh(const ConvexPolygon& K, double requested) {
    if (requested > 0.0) return requested;
    return diameter_inradius(K).inradius / 20.0;
}

// 6-point degree-4 triangle quadrature (weights sum to 1).
struct TriRule {
    double w;
    double l1, l2;
};
constexpr TriRule kTri6[6] = {
    {0.109951743655322, 0.816847572980459, 0.091576213509771},
    {0.109951743655322, 0.091576213509771, 0.816847572980459},
    {0.109951743655322, 0.091576213509771, 0.091576213509771},
    {0.223381589678011, 0.108103018168070, 0.445948490915965},
    {0.223381589678011, 0.445948490915965, 0.108103018168070},
    {0.223381589678011, 0.445948490915965, 0.445948490915965},
};

// 8-point Gauss-Legendre on [-1,1].
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

/// Inner Riesz integral v(x) = (1/alpha) * int_{S^1} rho_x(theta)^alpha dtheta
/// for x strictly inside K. Per edge the radial part is analytic
/// (rho^alpha / alpha = int_0^rho r^(alpha-1) dr); the remaining angular
/// integral of (d * sec(psi))^alpha uses Gauss rules on panels chosen so that
/// sec(psi) at most doubles across each panel.
double riesz_inner(const std::vector<Vec2>& verts, const Vec2& x, double alpha, long& evals) {
    const size_t n = verts.size();
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = verts[i] - x;
        const Vec2 b = verts[(i + 1) % n] - x;
        const Vec2 e = (b - a).normalized();
        const Vec2 nrm(e.y(), -e.x()); // outward edge normal for CCW order
        const double d = nrm.dot(a);   // distance from x to the edge line
        if (d <= 0.0) continue;        // x on the edge line: zero angular sweep
        // Angle from the foot direction: tan(psi) = <p,e> / d along the edge.
        double p0 = std::atan(a.dot(e) / d);
        double p1 = std::atan(b.dot(e) / d);
        if (p1 < p0) std::swap(p0, p1);

        double cuts[128];
        int nc = 0;
        cuts[nc++] = p0;
        for (int k = 1; k < 60 && nc < 120; ++k) {
            const double psi_k = std::acos(std::ldexp(1.0, -k)); // cos(psi_k) = 2^-k
            if (-psi_k > p0 && -psi_k < p1) cuts[nc++] = -psi_k;
            if (psi_k > p0 && psi_k < p1) cuts[nc++] = psi_k;
            if (psi_k > std::max(std::abs(p0), std::abs(p1))) break;
        }
        cuts[nc++] = p1;
        std::sort(cuts, cuts + nc);
        for (int c = 0; c + 1 < nc; ++c) {
            const double lo = cuts[c], hi = cuts[c + 1];
            if (hi - lo < 1e-15) continue;
            const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
            double panel = 0.0;
            for (int q = 0; q < 8; ++q) {
                const double psi = mid + half * kGx[q];
                panel += kGw[q] * std::pow(d / std::cos(psi), alpha);
            }
            acc += panel * half;
            evals += 8;
        }
    }
    return acc / alpha;
}

struct NelderMeadResult {
    Vec2 x;
    double f;
};

NelderMeadResult nelder_mead_2d(const std::function<double(const Vec2&)>& f, const Vec2& start,
                                double step, double tol, int max_iter) {
    std::array<Vec2, 3> xs = {start, start + Vec2(step, 0), start + Vec2(0, step)};
    std::array<double, 3> fs = {f(xs[0]), f(xs[1]), f(xs[2])};
    auto order = [&] {
        if (fs[0] > fs[1]) { std::swap(fs[0], fs[1]); std::swap(xs[0], xs[1]); }
        if (fs[1] > fs[2]) { std::swap(fs[1], fs[2]); std::swap(xs[1], xs[2]); }
        if (fs[0] > fs[1]) { std::swap(fs[0], fs[1]); std::swap(xs[0], xs[1]); }
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        if ((xs[2] - xs[0]).norm() + (xs[1] - xs[0]).norm() < tol) break;
        const Vec2 c = 0.5 * (xs[0] + xs[1]);
        const Vec2 xr = c + (c - xs[2]);
        const double fr = f(xr);
        if (fr < fs[0]) {
            const Vec2 xe = c + 2.0 * (c - xs[2]);
            const double fe = f(xe);
            if (fe < fr) { xs[2] = xe; fs[2] = fe; } else { xs[2] = xr; fs[2] = fr; }
        } else if (fr < fs[1]) {
            xs[2] = xr;
            fs[2] = fr;
        } else {
            const Vec2 xc = c + 0.5 * (xs[2] - c);
            const double fc = f(xc);
            if (fc < fs[2]) {
                xs[2] = xc;
                fs[2] = fc;
            } else { // shrink
                xs[1] = xs[0] + 0.5 * (xs[1] - xs[0]);
                xs[2] = xs[0] + 0.5 * (xs[2] - xs[0]);
                fs[1] = f(xs[1]);
                fs[2] = f(xs[2]);
            }
        }
        order();
    }
    return {xs[0], fs[0]};
}

} // namespace

FunctionalSpec FunctionalSpec::perimeter() {
    FunctionalSpec s;
    s.kind = FunctionalKind::Perimeter;
    return s;
}
FunctionalSpec FunctionalSpec::torsion(double h) {
    FunctionalSpec s;
    s.kind = FunctionalKind::Torsion;
    s.h_mesh = h;
    return s;
}
FunctionalSpec FunctionalSpec::dirichlet_eig(int n, double h) {
    FunctionalSpec s;
    s.kind = FunctionalKind::DirichletEig;
    s.n = n;
    s.h_mesh = h;
    return s;
}
FunctionalSpec FunctionalSpec::neumann_eig(int n, double h) {
    FunctionalSpec s;
    s.kind = FunctionalKind::NeumannEig;
    s.n = n;
    s.h_mesh = h;
    return s;
}
FunctionalSpec FunctionalSpec::riesz(double alpha, long budget) {
    FunctionalSpec s;
    s.kind = FunctionalKind::Riesz;
    s.alpha = alpha;
    s.budget = budget;
    return s;
}
FunctionalSpec FunctionalSpec::potential(ScalarField g, std::string name) {
    FunctionalSpec s;
    s.kind = FunctionalKind::PotentialIntegral;
    s.g = std::move(g);
    s.g_name = std::move(name);
    return s;
}
FunctionalSpec FunctionalSpec::fraenkel_asymmetry() {
    FunctionalSpec s;
    s.kind = FunctionalKind::FraenkelAsymmetry;
    return s;
}
FunctionalSpec FunctionalSpec::iso_deficit() {
    FunctionalSpec s;
    s.kind = FunctionalKind::IsoDeficit;
    return s;
}
FunctionalSpec FunctionalSpec::weighted_sum(std::vector<FunctionalSpec> terms,
                                            std::vector<double> weights) {
    FunctionalSpec s;
    s.kind = FunctionalKind::Composite;
    s.form = "weighted_sum";
    s.terms = std::move(terms);
    s.weights = std::move(weights);
    return s;
}

void validate(const FunctionalSpec& spec) {
    switch (spec.kind) {
        case FunctionalKind::Riesz:
            if (!(spec.alpha > 0.0 && spec.alpha < 2.0))
                throw ValidationError("Riesz exponent must lie in (0,2)");
            break;
        case FunctionalKind::DirichletEig:
        case FunctionalKind::NeumannEig:
            if (spec.n < 1) throw ValidationError("eigenvalue index must be >= 1");
            break;
        case FunctionalKind::PotentialIntegral:
            if (!spec.g) throw ValidationError("potential integrand is missing");
            break;
        case FunctionalKind::Composite: {
            if (spec.form != "sum" && spec.form != "weighted_sum" &&
                spec.form.rfind("custom:", 0) != 0)
                throw ValidationError("unknown composite form: " + spec.form);
            if (spec.form == "weighted_sum" && spec.weights.size() != spec.terms.size())
                throw ValidationError("weighted_sum needs one weight per term");
            for (const auto& t : spec.terms) validate(t);
            break;
        }
        default:
            break;
    }
}

double evaluate(const FunctionalSpec& spec, const ConvexPolygon& K) {
    validate(spec);
    switch (spec.kind) {
        case FunctionalKind::Volume:
            return area(K);
        case FunctionalKind::Perimeter:
            return perimeter(K);
        case FunctionalKind::Torsion:
            return torsion(K, auto_h_mesh(K, spec.h_mesh), spec.seed).tau;
        case FunctionalKind::DirichletEig: {
            const int extra = spec.cluster_average ? 1 : 0;
            EigResult e = dirichlet_eigs(K, spec.n + extra, auto_h_mesh(K, spec.h_mesh), spec.seed);
            if (!spec.cluster_average) return e.values[spec.n - 1];
            // Average the surrounding near-degenerate cluster.
            const double v = e.values[spec.n - 1];
            double sum = 0.0;
            int cnt = 0;
            for (int i = 0; i < e.count(); ++i) {
                if (std::abs(e.values[i] - v) < 1e-3 * std::abs(v)) {
                    sum += e.values[i];
                    ++cnt;
                }
            }
            return sum / cnt;
        }
        case FunctionalKind::NeumannEig: {
            const int extra = spec.cluster_average ? 1 : 0;
            EigResult e = neumann_eigs(K, spec.n + extra, auto_h_mesh(K, spec.h_mesh), spec.seed);
            if (!spec.cluster_average) return e.values[spec.n - 1];
            const double v = e.values[spec.n - 1];
            double sum = 0.0;
            int cnt = 0;
            for (int i = 0; i < e.count(); ++i) {
                if (std::abs(e.values[i] - v) < 1e-3 * std::abs(v)) {
                    sum += e.values[i];
                    ++cnt;
                }
            }
            return sum / cnt;
        }
        case FunctionalKind::Riesz:
            return riesz_potential(K, spec.alpha, spec.budget).value;
        case FunctionalKind::PotentialIntegral:
            return potential_integral(K, spec.g, spec.h_mesh);
        case FunctionalKind::FraenkelAsymmetry:
            return fraenkel_asymmetry(K);
        case FunctionalKind::IsoDeficit:
            return iso_deficit(K);
        case FunctionalKind::Composite: {
            std::vector<double> vals;
            vals.reserve(spec.terms.size());
            for (const auto& t : spec.terms) {
                FunctionalSpec sub = t;
                sub.seed = spec.seed;
                sub.cluster_average = sub.cluster_average || spec.cluster_average;
                vals.push_back(evaluate(sub, K));
            }
            if (spec.form == "sum") {
                double s = 0.0;
                for (double v : vals) s += v;
                return s;
            }
            if (spec.form == "weighted_sum") {
                double s = 0.0;
                for (size_t i = 0; i < vals.size(); ++i) s += spec.weights[i] * vals[i];
                return s;
            }
            const std::string name = spec.form.substr(7);
            auto it = composite_registry().find(name);
            if (it == composite_registry().end())
                throw ValidationError("composite form not registered: " + name);
            return it->second(vals);
        }
    }
    throw ValidationError("unhandled functional kind");
}

RieszResult riesz_potential(const ConvexPolygon& K, double alpha, long budget) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("Riesz exponent must lie in (0,2)");
    const double A = area(K);
    const int edges = K.size();

    // Derive the outer resolution from the budget: the inner integral costs
    // about edges * 20 kernel calls per outer point, 6 outer points per
    // triangle, plus ~45% for the coarse pass behind the error estimate.
    const long per_point = static_cast<long>(edges) * 20;
    long tri_target = std::min<long>(budget / (9 * per_point), 4000);
    if (tri_target < 160) {
        const long optimistic = 160L * 6 * edges * 8 * 14 / 10;
        if (optimistic > budget)
            throw RieszQuadratureBudgetExceeded("Riesz budget too small for this polygon");
        tri_target = 160;
    }
    const double h = std::sqrt(2.31 * A / static_cast<double>(tri_target));

    long evals = 0;
    auto integrate = [&](double hh) {
        hh = std::min(hh, 0.9 * diameter_inradius(K).inradius);
        for (int attempt = 0;; ++attempt) {
            TriMesh mesh;
            try {
                mesh = triangulate(K, hh, 7);
            } catch (const MeshTooCoarse&) {
                if (attempt >= 8) throw;
                hh *= 0.7;
                continue;
            }
            double total = 0.0;
            for (const auto& t : mesh.triangles) {
                const Vec2 a = mesh.nodes[static_cast<size_t>(t[0])];
                const Vec2 b = mesh.nodes[static_cast<size_t>(t[1])];
                const Vec2 c = mesh.nodes[static_cast<size_t>(t[2])];
                const double ta = 0.5 * cross2(b - a, c - a);
                for (const TriRule& q : kTri6) {
                    const Vec2 x = q.l1 * a + q.l2 * b + (1.0 - q.l1 - q.l2) * c;
                    total += ta * q.w * riesz_inner(K.vertices(), x, alpha, evals);
                }
            }
            return total;
        }
    };

    RieszResult out;
    const double fine = integrate(h);
    const double coarse = integrate(1.6 * h);
    out.value = fine;
    out.est_rel_error = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
    if (evals > budget)
        throw RieszQuadratureBudgetExceeded("Riesz quadrature exceeded its budget");
    return out;
}

double potential_integral(const ConvexPolygon& K, const ScalarField& g, double h_mesh) {
    if (!g) throw ValidationError("potential integrand is missing");
    const double h = (h_mesh > 0.0) ? h_mesh : diameter_inradius(K).inradius / 25.0;
    const TriMesh mesh = triangulate(K, h, 11);
    double total = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec2 a = mesh.nodes[static_cast<size_t>(t[0])];
        const Vec2 b = mesh.nodes[static_cast<size_t>(t[1])];
        const Vec2 c = mesh.nodes[static_cast<size_t>(t[2])];
        const double ta = 0.5 * cross2(b - a, c - a);
        // Edge-midpoint rule: exact through quadratics.
        total += ta / 3.0 * (g(0.5 * (a + b)) + g(0.5 * (b + c)) + g(0.5 * (c + a)));
    }
    return total;
}

double fraenkel_asymmetry(const ConvexPolygon& K) {
    const double A = area(K);
    const double r0 = std::sqrt(A / kPi);
    const Vec2 c0 = centroid(K);
    const double diam = diameter_inradius(K).diameter;

    auto objective = [&](const Vec2& c) {
        return 2.0 * (1.0 - disk_intersection_area(K, c, r0) / A);
    };

    NelderMeadResult best{c0, objective(c0)};
    const double span = 0.15 * diam;
    for (int ix = -1; ix <= 1; ++ix) {
        for (int iy = -1; iy <= 1; ++iy) {
            const Vec2 start = c0 + span * Vec2(ix, iy);
            NelderMeadResult r = nelder_mead_2d(objective, start, 0.05 * diam, 1e-10, 300);
            if (r.f < best.f) best = r;
        }
    }
    return std::max(best.f, 0.0);
}

double iso_deficit(const ConvexPolygon& K) {
    const double pb = 2.0 * std::sqrt(kPi * area(K));
    return (perimeter(K) - pb) / pb;
}

ScalarField named_field(const std::string& name) {
    if (name == "one") return [](const Vec2&) { return 1.0; };
    if (name == "coord_x") return [](const Vec2& p) { return p.x(); };
    if (name == "coord_y") return [](const Vec2& p) { return p.y(); };
    if (name == "abs2") return [](const Vec2& p) { return p.squaredNorm(); };
    if (name == "gaussian_well")
        return [](const Vec2& p) { return -std::exp(-0.5 * p.squaredNorm()); };
    throw ValidationError("unknown named field: " + name);
}

void register_composite_form(const std::string& name, CompositeFn fn) {
    composite_registry()[name] = std::move(fn);
}

FunctionalSpec parse_functional(const nlohmann::json& j) {
    using nlohmann::json;
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("functional JSON must be an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    FunctionalSpec s;
    try {
        if (kind == "volume") {
            s.kind = FunctionalKind::Volume;
        } else if (kind == "perimeter") {
            s.kind = FunctionalKind::Perimeter;
        } else if (kind == "torsion") {
            s.kind = FunctionalKind::Torsion;
        } else if (kind == "dirichlet_eig") {
            s.kind = FunctionalKind::DirichletEig;
            s.n = j.at("n").get<int>();
        } else if (kind == "neumann_eig") {
            s.kind = FunctionalKind::NeumannEig;
            s.n = j.at("n").get<int>();
        } else if (kind == "riesz") {
            s.kind = FunctionalKind::Riesz;
            s.alpha = j.at("alpha").get<double>();
            if (j.contains("budget")) s.budget = j.at("budget").get<long>();
        } else if (kind == "potential") {
            s.kind = FunctionalKind::PotentialIntegral;
            s.g_name = j.at("g").get<std::string>();
            s.g = named_field(s.g_name);
        } else if (kind == "fraenkel_asymmetry") {
            s.kind = FunctionalKind::FraenkelAsymmetry;
        } else if (kind == "iso_deficit") {
            s.kind = FunctionalKind::IsoDeficit;
        } else if (kind == "composite") {
            s.kind = FunctionalKind::Composite;
            s.form = j.at("form").get<std::string>();
            for (const auto& t : j.at("terms")) s.terms.push_back(parse_functional(t));
            if (j.contains("weights")) s.weights = j.at("weights").get<std::vector<double>>();
        } else {
            throw ValidationError("unknown functional kind: " + kind);
        }
        if (j.contains("h_mesh")) s.h_mesh = j.at("h_mesh").get<double>();
        if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
        if (j.contains("n_index")) s.n = j.at("n_index").get<int>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed functional JSON: ") + e.what());
    }
    validate(s);
    return s;
}

nlohmann::json functional_to_json(const FunctionalSpec& s) {
    nlohmann::json j;
    switch (s.kind) {
        case FunctionalKind::Volume: j["kind"] = "volume"; break;
        case FunctionalKind::Perimeter: j["kind"] = "perimeter"; break;
        case FunctionalKind::Torsion: j["kind"] = "torsion"; break;
        case FunctionalKind::DirichletEig: j["kind"] = "dirichlet_eig"; j["n"] = s.n; break;
        case FunctionalKind::NeumannEig: j["kind"] = "neumann_eig"; j["n"] = s.n; break;
        case FunctionalKind::Riesz: j["kind"] = "riesz"; j["alpha"] = s.alpha; j["budget"] = s.budget; break;
        case FunctionalKind::PotentialIntegral: j["kind"] = "potential"; j["g"] = s.g_name; break;
        case FunctionalKind::FraenkelAsymmetry: j["kind"] = "fraenkel_asymmetry"; break;
        case FunctionalKind::IsoDeficit: j["kind"] = "iso_deficit"; break;
        case FunctionalKind::Composite: {
            j["kind"] = "composite";
            j["form"] = s.form;
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& t : s.terms) terms.push_back(functional_to_json(t));
            j["terms"] = terms;
            if (!s.weights.empty()) j["weights"] = s.weights;
            break;
        }
    }
    if (s.h_mesh > 0.0) j["h_mesh"] = s.h_mesh;
    if (s.seed != 1) j["seed"] = s.seed;
    return j;
}

} // namespace convexopt
