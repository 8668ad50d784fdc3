#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"

namespace irt {

/// Outcome of one property suite: counts plus named worst-case margins.
struct SuiteResult
{
    std::string name;
    bool passed = true;
    long samples = 0;
    long failures = 0;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> messages;

    void metric(const std::string& key, double value) { metrics.emplace_back(key, value); }

    void check(bool ok, const std::string& what)
    {
        ++samples;
        if (!ok) {
            ++failures;
            passed = false;
            if (messages.size() < 20) messages.push_back(what);
        }
    }
};

/// Slope of the least-squares line through (x_k, y_k).
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Signed angle rotating u onto v.
inline double signed_angle(const Vec2& u, const Vec2& v) { return std::atan2(cross(u, v), u.dot(v)); }

/// A random cut of a random triangle with all angles at most pi/2.  The
/// chord runs from D on local edge 0 (A2A3) to E on local edge 1 (A3A1);
/// with `tip_plus` the small triangle E D A3 is the plus part.
struct RandomCut
{
    Triangle triangle;
    CutTopology cut;
    bool tip_plus = true;
};

inline Triangle random_nonobtuse_triangle(std::mt19937_64& rng, double min_angle = 5.0 * std::numbers::pi / 180.0)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const Vec2 apex(unit(rng), 0.05 + 1.5 * unit(rng));
        Triangle t{{Vec2(0.0, 0.0), Vec2(1.0, 0.0), apex}};
        bool ok = true;
        for (int i = 0; i < 3; ++i) ok = ok && t.angle(i) <= std::numbers::pi / 2 && t.angle(i) >= min_angle;
        if (!ok) continue;
        // Random similarity: rotation, scale, shift, then a random relabeling.
        const double a = 2.0 * std::numbers::pi * unit(rng);
        const double s = std::pow(10.0, -2.0 + 2.0 * unit(rng));
        const Vec2 shift(unit(rng) - 0.5, unit(rng) - 0.5);
        const Eigen::Matrix2d rot = Eigen::Rotation2Dd(a).toRotationMatrix();
        for (auto& v : t.vertex) v = Vec2(s * (rot * v) + shift);
        const int k = static_cast<int>(rng() % 3);
        return Triangle{{t.vertex[k], t.vertex[(k + 1) % 3], t.vertex[(k + 2) % 3]}};
    }
}

inline RandomCut random_cut(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        RandomCut rc;
        rc.triangle = random_nonobtuse_triangle(rng);
        const Triangle& t = rc.triangle;
        const Vec2 d = t.edge_point(0, 0.02 + 0.96 * unit(rng));
        const Vec2 e = t.edge_point(1, 0.02 + 0.96 * unit(rng));
        rc.tip_plus = unit(rng) < 0.5;
        Vec2 n = rotate_cw(e - d).normalized();
        if ((n.dot(t.vertex[2] - d) > 0.0) != rc.tip_plus) n = -n;
        auto cut = cut_element(t, line_level_set(d, n));
        if (!cut || cut->cut_edges[0] < 0 || cut->cut_edges[1] < 0) continue;
        rc.cut = *cut;
        return rc;
    }
}

/// (Pi omega).t_h from the angle identity for the configuration of
/// RandomCut with the plus part E D A3: |DA3| sin(theta) cos(gamma) /
/// (|e1| sin A2), theta from A3A2 to t_h and gamma from A1A2 to t_h.
inline double closed_form_theta(const Triangle& t, const Vec2& d, const Vec2& tangent)
{
    const Vec2 &a1 = t.vertex[0], &a2 = t.vertex[1], &a3 = t.vertex[2];
    const double th = signed_angle(a2 - a3, tangent);
    const double ga = signed_angle(a2 - a1, tangent);
    return (a3 - d).norm() * std::sin(th) * std::cos(ga) / ((a3 - a2).norm() * std::sin(t.angle(1)));
}

/// Largest violation of the interface conditions and the Kronecker property.
inline double ife_condition_defect(const CutTopology& cut, const LocalBasis& basis)
{
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& f = basis.functions[i];
        const double scale = 1.0 + piece_sup_norm(f, cut.triangle);
        worst = std::max(worst, std::abs(normal_jump(f, cut)) / scale);
        // The normal jump must vanish along the whole chord, not only at x_T.
        worst = std::max(worst, std::abs((f.plus(cut.d()) - f.minus(cut.d())).dot(cut.normal)) / scale);
        worst = std::max(worst, std::abs(scaled_tangential_jump(f, cut)) /
                                    (scale * std::max(cut.beta_plus, cut.beta_minus)));
        worst = std::max(worst, std::abs(divergence_jump(f)) * cut.triangle.diameter() / scale);
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::abs(dof_functional(f, cut, j) - (i == j ? 1.0 : 0.0)));
    }
    return worst;
}

/// Random admissible cuts with contrasts in [1e-3, 1e3]: denominator bound,
/// theta range, closed-form theta, plus/minus swap symmetry and the
/// defining conditions of the basis.
inline SuiteResult verify_unisolvence(std::uint64_t seed = 42, int samples = 10000)
{
    SuiteResult r;
    r.name = "unisolvence";
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double min_margin = std::numeric_limits<double>::infinity();
    double theta_lo = 1.0, theta_hi = 0.0, closed_err = 0.0, swap_err = 0.0, cond = 0.0;
    for (int k = 0; k < samples; ++k) {
        RandomCut rc = random_cut(rng);
        CutTopology& cut = rc.cut;
        cut.beta_plus = std::pow(10.0, -1.5 + 3.0 * unit(rng));
        cut.beta_minus = cut.beta_plus * std::pow(10.0, -3.0 + 6.0 * unit(rng));
        const double ratio = cut.beta_minus / cut.beta_plus;

        LocalBasis basis;
        try {
            basis = ife_basis(cut);
        }
        catch (const Error& e) {
            r.check(false, std::string("sample ") + std::to_string(k) + ": " + e.what());
            continue;
        }
        const double th = basis.theta_omega;
        const double margin = basis.denominator - std::min(1.0, ratio);
        min_margin = std::min(min_margin, margin);
        theta_lo = std::min(theta_lo, th);
        theta_hi = std::max(theta_hi, th);
        r.check(margin >= -1e-12, "denominator below min(1, r) at sample " + std::to_string(k));
        r.check(th >= -1e-12 && th <= 1.0 + 1e-12, "theta outside [0, 1] at sample " + std::to_string(k));

        // The closed form is stated for the tip-plus labeling; the other
        // labeling flips t_h and maps theta to 1 - theta.
        const Vec2 t1 = rc.tip_plus ? cut.tangent : Vec2(-cut.tangent);
        const double closed = closed_form_theta(rc.triangle, cut.d(), t1);
        const double expected = rc.tip_plus ? closed : 1.0 - closed;
        closed_err = std::max(closed_err, std::abs(th - expected));
        r.check(std::abs(th - expected) <= 1e-10, "closed-form theta mismatch at sample " + std::to_string(k));

        CutTopology swapped = cut;
        std::swap(swapped.plus_polygon, swapped.minus_polygon);
        std::swap(swapped.plus_triangles, swapped.minus_triangles);
        for (auto& ep : swapped.edge_portions) {
            ep.first = opposite(ep.first);
            ep.second = opposite(ep.second);
        }
        swapped.normal = -cut.normal;
        swapped.tangent = -cut.tangent;
        const double th_swapped = build_omega(swapped).theta;
        swap_err = std::max(swap_err, std::abs(th + th_swapped - 1.0));
        r.check(std::abs(th + th_swapped - 1.0) <= 1e-10, "swap symmetry broken at sample " + std::to_string(k));

        const double c = ife_condition_defect(cut, basis);
        cond = std::max(cond, c);
        r.check(c <= 1e-9, "interface conditions violated at sample " + std::to_string(k));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.check(seconds <= 30.0, "suite exceeded 30 s");
    r.metric("cuts", samples);
    r.metric("min_denominator_margin", min_margin);
    r.metric("theta_min", theta_lo);
    r.metric("theta_max", theta_hi);
    r.metric("max_closed_form_error", closed_err);
    r.metric("max_swap_error", swap_err);
    r.metric("max_condition_defect", cond);
    r.metric("seconds", seconds);
    return r;
}

/// Random polynomial vector field of total degree <= 3 with its divergence.
struct PolynomialField
{
    // coefficient of x^i y^j, i + j <= 3, for each component
    std::array<std::array<double, 4>, 4> px{};
    std::array<std::array<double, 4>, 4> py{};

    static PolynomialField random(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        PolynomialField f;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j) {
                f.px[i][j] = coef(rng);
                f.py[i][j] = coef(rng);
            }
        return f;
    }

    Vec2 operator()(const Vec2& x) const
    {
        Vec2 v = Vec2::Zero();
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j) {
                const double m = std::pow(x.x(), i) * std::pow(x.y(), j);
                v += Vec2(px[i][j] * m, py[i][j] * m);
            }
        return v;
    }

    double divergence(const Vec2& x) const
    {
        double d = 0.0;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j) {
                if (i > 0) d += i * px[i][j] * std::pow(x.x(), i - 1) * std::pow(x.y(), j);
                if (j > 0) d += j * py[i][j] * std::pow(x.x(), i) * std::pow(x.y(), j - 1);
            }
        return d;
    }
};

/// div(Pi^IFE q) = P0 div q on every element of the N x N mesh cut by the
/// circle of radius r0.
inline SuiteResult verify_commuting(std::uint64_t seed = 42, int n = 16, int fields = 20, double r0 = 0.5)
{
    SuiteResult r;
    r.name = "commuting";
    const Mesh mesh = build_uniform_mesh(n);
    const ProblemSpec problem = example1(r0);
    const Discretization disc = discretize(mesh, problem, Method::immersed);
    std::mt19937_64 rng(seed);

    double worst = 0.0;
    auto run = [&](const VectorField& q, const ScalarField& div, const std::string& label) {
        const double d = commuting_defect(disc, q, div);
        worst = std::max(worst, d);
        r.check(d <= 1e-11, label + ": defect " + format_exact(d));
    };
    run([](const Vec2& x) { return x; }, [](const Vec2&) { return 2.0; }, "q = x");
    run([](const Vec2& x) { return Vec2(std::sin(x.y()), std::cos(x.x())); }, [](const Vec2&) { return 0.0; },
        "q = (sin x2, cos x1)");
    for (int k = 0; k < fields; ++k) {
        const PolynomialField f = PolynomialField::random(rng);
        run(f, [f](const Vec2& x) { return f.divergence(x); }, "random cubic " + std::to_string(k));
    }
    r.metric("N", n);
    r.metric("interface_elements", static_cast<double>(disc.classification.cuts.size()));
    r.metric("max_defect", worst);
    return r;
}

/// ||p - Pi^IFE p|| rate for both examples.
inline SuiteResult verify_interpolation(const std::vector<int>& n_list = {8, 16, 32, 64, 128})
{
    SuiteResult r;
    r.name = "interpolation";
    for (const auto& problem : {example1(), example2()}) {
        const ErrorReport rep = interpolation_study(problem, n_list);
        const double rate = rep.rates_p().back();
        r.metric(problem.name + "_final_error", rep.rows.back().err_p);
        r.metric(problem.name + "_final_rate", rate);
        r.check(rate >= 0.85 && rate <= 1.15, problem.name + " final interpolation rate " + format_rate(rate));
    }
    // The zero field interpolates to zero.
    const Mesh mesh = build_uniform_mesh(n_list.front());
    const double zero = interpolation_error(discretize(mesh, zero_problem(), Method::immersed), zero_problem());
    r.check(zero == 0.0, "zero field has nonzero interpolation error");
    return r;
}

/// Norms of Psi, Upsilon, Theta on one cut shape scaled by h = 2^-2 .. 2^-6.
inline SuiteResult verify_auxiliary()
{
    SuiteResult r;
    r.name = "auxiliary";
    const std::array<std::pair<double, double>, 2> contrasts{{{100.0, 1.0}, {1.0, 100.0}}};
    for (const auto& [bp, bm] : contrasts) {
        std::vector<double> lh, lpsi, lups, lthe;
        double cond = 0.0;
        for (int k = 2; k <= 6; ++k) {
            const double h = std::ldexp(1.0, -k);
            const Triangle t{{Vec2(0.3, 0.2), Vec2(0.3 + h, 0.2), Vec2(0.3, 0.2 + h)}};
            const Vec2 d = t.edge_point(0, 0.35), e = t.edge_point(1, 0.6);
            auto cut = cut_element(t, line_level_set(d, rotate_cw(e - d)));
            if (!cut) {
                r.check(false, "reference cut missing");
                return r;
            }
            cut->beta_plus = bp;
            cut->beta_minus = bm;
            const LocalBasis basis = ife_basis(*cut);
            const AuxiliaryFunctions aux = auxiliary_functions(*cut, basis);
            lh.push_back(std::log(h));
            lpsi.push_back(std::log(l2_norm(aux.psi, *cut)));
            lups.push_back(std::log(l2_norm(aux.upsilon, *cut)));
            lthe.push_back(std::log(l2_norm(aux.theta, *cut)));

            auto conditions = [&](const PiecewiseRTFunction& f, double jn, double jt, double jd) {
                double w = std::abs(normal_jump(f, *cut) - jn);
                w = std::max(w, std::abs(scaled_tangential_jump(f, *cut) - jt));
                w = std::max(w, std::abs(divergence_jump(f) - jd));
                for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(dof_functional(f, *cut, i)));
                return w;
            };
            cond = std::max({cond, conditions(aux.psi, 1, 0, 0), conditions(aux.upsilon, 0, 1, 0),
                             conditions(aux.theta, 0, 0, 1)});
        }
        const std::string tag = bp > bm ? "beta_plus_larger" : "beta_minus_larger";
        const double sp = fitted_slope(lh, lpsi), su = fitted_slope(lh, lups), st = fitted_slope(lh, lthe);
        r.metric(tag + "_slope_psi", sp);
        r.metric(tag + "_slope_upsilon", su);
        r.metric(tag + "_slope_theta", st);
        r.metric(tag + "_max_condition_defect", cond);
        r.check(std::abs(sp - 1.0) <= 0.1, tag + ": Psi slope " + format_rate(sp));
        r.check(std::abs(su - 1.0) <= 0.1, tag + ": Upsilon slope " + format_rate(su));
        r.check(std::abs(st - 2.0) <= 0.1, tag + ": Theta slope " + format_rate(st));
        r.check(cond <= 1e-9, tag + ": defining conditions violated");
    }
    return r;
}

/// Max distance from the chord polyline to the circle |x| = r0.
inline double polyline_distance(const InterfacePolyline& poly, double r0)
{
    double worst = 0.0;
    for (const auto& loop : poly.loops)
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const Vec2& a = loop[k];
            const Vec2& b = loop[(k + 1) % loop.size()];
            for (int s = 0; s <= 32; ++s) worst = std::max(worst, std::abs((a + (b - a) * (s / 32.0)).norm() - r0));
        }
    return worst;
}

/// Mesh counts, cut geometry invariants, polyline closure and its O(h^2)
/// distance to the circle, and rejection of a circle leaving the domain.
inline SuiteResult verify_geometry(int n = 8, double r0 = 0.5)
{
    SuiteResult r;
    r.name = "geometry";
    const auto ls = circle_level_set(r0);
    std::vector<double> lh, ld;
    for (int m = n; m <= 8 * n; m *= 2) {
        const Mesh mesh = build_uniform_mesh(m);
        r.check(mesh.num_elements() == 2 * m * m && mesh.num_edges() == 3 * m * m + 2 * m &&
                    mesh.num_vertices() == (m + 1) * (m + 1),
                "mesh counts at N=" + std::to_string(m));
        const Classification cls = classify_mesh(mesh, ls);
        double area_err = 0.0, orient = 0.0;
        for (const auto& c : cls.cuts) {
            const double a = c.triangle.area();
            area_err = std::max(area_err, std::abs(polygon_area(c.plus_polygon) + polygon_area(c.minus_polygon) - a) / a);
            orient = std::max(orient, std::abs(c.normal.dot(c.e() - c.d())));
            r.check(c.normal.dot(polygon_centroid(c.plus_polygon) - c.x_t) > 0.0, "normal does not point to plus");
            r.check(ls.value(polygon_centroid(c.plus_polygon)) > 0.0, "plus centroid inside the circle");
            r.check(ls.value(polygon_centroid(c.minus_polygon)) < 0.0, "minus centroid outside the circle");
        }
        r.check(area_err <= 1e-12, "sub-polygon areas do not add up at N=" + std::to_string(m));
        r.check(orient <= 1e-12, "normal not orthogonal to the chord at N=" + std::to_string(m));
        const InterfacePolyline poly = polyline_interface(cls);
        r.check(poly.loops.size() == 1 && poly.segment_count == cls.cuts.size(), "polyline is not one closed loop");
        lh.push_back(std::log(mesh.h));
        ld.push_back(std::log(polyline_distance(poly, r0)));
        if (m == n) {
            r.metric("interface_elements", static_cast<double>(cls.cuts.size()));
            r.metric("max_area_error", area_err);
        }
    }
    const double slope = fitted_slope(lh, ld);
    r.metric("distance_rate", slope);
    r.check(std::abs(slope - 2.0) <= 0.3, "polyline distance rate " + format_rate(slope));

    bool rejected = false;
    try {
        classify_mesh(build_uniform_mesh(n), circle_level_set(1.2));
    }
    catch (const AssumptionViolation& e) {
        rejected = true;
        r.messages.push_back(std::string("r0 = 1.2 rejected as expected: ") + e.what());
    }
    r.check(rejected, "circle leaving the domain was not rejected");
    return r;
}

inline std::vector<std::string> suite_ids() { return {"unisolvence", "commuting", "interpolation", "auxiliary", "geometry"}; }

inline SuiteResult run_suite(const std::string& id, std::uint64_t seed = 42)
{
    if (id == "unisolvence") return verify_unisolvence(seed);
    if (id == "commuting") return verify_commuting(seed);
    if (id == "interpolation") return verify_interpolation();
    if (id == "auxiliary") return verify_auxiliary();
    if (id == "geometry") return verify_geometry();
    throw ConfigError("unknown suite '" + id + "'");
}

} // namespace irt
