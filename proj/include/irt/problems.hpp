#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace irt {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Elliptic interface problem -div(k grad u) = f with the diffusion k
/// jumping across the zero set of `level_set`, together with its exact
/// solution.  Every closed form is valid on the whole domain so it can be
/// evaluated on either side of the discrete interface.  The flux is
/// p = k grad u and beta = 1/k.
struct ProblemSpec
{
    std::string name;
    LevelSet level_set;
    ScalarField diffusion_plus;
    ScalarField diffusion_minus;
    ScalarField u_plus;
    ScalarField u_minus;
    VectorField p_plus;
    VectorField p_minus;
    ScalarField f_plus;
    ScalarField f_minus;
    ScalarField boundary_g;

    Side true_side(const Vec2& x) const { return level_set.value(x) > 0.0 ? Side::plus : Side::minus; }

    double u(const Vec2& x) const { return true_side(x) == Side::plus ? u_plus(x) : u_minus(x); }
    Vec2 p(const Vec2& x) const { return true_side(x) == Side::plus ? p_plus(x) : p_minus(x); }
    double f(const Vec2& x) const { return true_side(x) == Side::plus ? f_plus(x) : f_minus(x); }

    const VectorField& p_on(Side s) const { return s == Side::plus ? p_plus : p_minus; }
    const ScalarField& f_on(Side s) const { return s == Side::plus ? f_plus : f_minus; }
    const ScalarField& u_on(Side s) const { return s == Side::plus ? u_plus : u_minus; }

    PiecewiseCoefficient beta() const
    {
        return PiecewiseCoefficient{[k = diffusion_plus](const Vec2& x) { return 1.0 / k(x); },
                                    [k = diffusion_minus](const Vec2& x) { return 1.0 / k(x); }};
    }
};

/// Circular interface of radius r0 with u = r^3 / k^- inside and
/// u = r^3 / k^+ + (1/k^- - 1/k^+) r0^3 outside.  The flux 3 r x and the load
/// -9 r are the same on both sides.
inline ProblemSpec example1(double r0 = 0.5, double k_plus = 1e-2, double k_minus = 1.0)
{
    ProblemSpec p;
    p.name = "example1";
    p.level_set = circle_level_set(r0);
    p.diffusion_plus = [k_plus](const Vec2&) { return k_plus; };
    p.diffusion_minus = [k_minus](const Vec2&) { return k_minus; };
    const double shift = (1.0 / k_minus - 1.0 / k_plus) * r0 * r0 * r0;
    p.u_minus = [k_minus](const Vec2& x) { return std::pow(x.norm(), 3) / k_minus; };
    p.u_plus = [k_plus, shift](const Vec2& x) { return std::pow(x.norm(), 3) / k_plus + shift; };
    p.p_plus = p.p_minus = [](const Vec2& x) { return Vec2(3.0 * x.norm() * x); };
    p.f_plus = p.f_minus = [](const Vec2& x) { return -9.0 * x.norm(); };
    p.boundary_g = [u = p](const Vec2& x) { return u.u(x); };
    return p;
}

namespace detail {

/// u = j(r) v(r) sin(theta) = g(r) x2 with g = j v / r, where j is a smooth
/// bump of half width w around r0 and v = 1 + (r^2 - r0^2) / k.
struct BumpSolution
{
    double r0;
    double w;
    double k;

    /// g, g', g'' at radius r.
    std::array<double, 3> radial(double r) const
    {
        const double s = (r - r0) / w;
        if (std::abs(s) >= 1.0 || r <= 0.0) return {0.0, 0.0, 0.0};
        const double q = 1.0 - s * s;
        const double j = std::exp(-1.0 / q);
        const double phi1 = -2.0 * s / (q * q);
        const double phi2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
        const double j1 = j * phi1 / w;
        const double j2 = j * (phi1 * phi1 + phi2) / (w * w);

        const double v = 1.0 + (r * r - r0 * r0) / k;
        const double v1 = 2.0 * r / k;
        const double v2 = 2.0 / k;

        const double h = j * v;
        const double h1 = j1 * v + j * v1;
        const double h2 = j2 * v + 2.0 * j1 * v1 + j * v2;

        return {h / r, h1 / r - h / (r * r), h2 / r - 2.0 * h1 / (r * r) + 2.0 * h / (r * r * r)};
    }

    double u(const Vec2& x) const { return radial(x.norm())[0] * x.y(); }

    Vec2 p(const Vec2& x) const
    {
        const double r = x.norm();
        const auto g = radial(r);
        if (r == 0.0) return Vec2::Zero();
        return k * (g[1] * x.y() / r * x + g[0] * Vec2(0.0, 1.0));
    }

    double f(const Vec2& x) const
    {
        const double r = x.norm();
        if (r == 0.0) return 0.0;
        const auto g = radial(r);
        return -k * x.y() * (g[2] + 3.0 * g[1] / r);
    }
};

} // namespace detail

/// Circular interface with a solution whose tangential derivative does not
/// vanish on the interface: u = j(r) v(r) sin(theta).
inline ProblemSpec example2(double r0 = 0.5, double k_plus = 1e-2, double k_minus = 1.0, double bump_width = 0.45)
{
    ProblemSpec p;
    p.name = "example2";
    p.level_set = circle_level_set(r0);
    p.diffusion_plus = [k_plus](const Vec2&) { return k_plus; };
    p.diffusion_minus = [k_minus](const Vec2&) { return k_minus; };
    const detail::BumpSolution plus{r0, bump_width, k_plus}, minus{r0, bump_width, k_minus};
    p.u_plus = [plus](const Vec2& x) { return plus.u(x); };
    p.u_minus = [minus](const Vec2& x) { return minus.u(x); };
    p.p_plus = [plus](const Vec2& x) { return plus.p(x); };
    p.p_minus = [minus](const Vec2& x) { return minus.p(x); };
    p.f_plus = [plus](const Vec2& x) { return plus.f(x); };
    p.f_minus = [minus](const Vec2& x) { return minus.f(x); };
    p.boundary_g = [u = p](const Vec2& x) { return u.u(x); };
    return p;
}

/// u = x1 with unit diffusion and no interface.  The flux (1, 0) lies in
/// the discrete space, so every method reproduces it.
inline ProblemSpec patch_problem()
{
    ProblemSpec p;
    p.name = "patch";
    p.level_set = empty_level_set();
    p.diffusion_plus = p.diffusion_minus = [](const Vec2&) { return 1.0; };
    p.u_plus = p.u_minus = [](const Vec2& x) { return x.x(); };
    p.p_plus = p.p_minus = [](const Vec2&) { return Vec2(1.0, 0.0); };
    p.f_plus = p.f_minus = [](const Vec2&) { return 0.0; };
    p.boundary_g = [](const Vec2& x) { return x.x(); };
    return p;
}

/// Everything zero: the discrete solution must vanish.
inline ProblemSpec zero_problem(double r0 = 0.5)
{
    ProblemSpec p;
    p.name = "zero";
    p.level_set = circle_level_set(r0);
    p.diffusion_plus = p.diffusion_minus = [](const Vec2&) { return 1.0; };
    p.u_plus = p.u_minus = [](const Vec2&) { return 0.0; };
    p.p_plus = p.p_minus = [](const Vec2&) { return Vec2(Vec2::Zero()); };
    p.f_plus = p.f_minus = [](const Vec2&) { return 0.0; };
    p.boundary_g = [](const Vec2&) { return 0.0; };
    return p;
}

inline std::vector<std::string> problem_ids() { return {"example1", "example2", "patch", "zero"}; }

/// Registry lookup; k_plus/k_minus are the diffusion values on each side.
inline ProblemSpec make_problem(const std::string& id, double r0 = 0.5, double k_plus = 1e-2, double k_minus = 1.0)
{
    if (id == "example1") return example1(r0, k_plus, k_minus);
    if (id == "example2") return example2(r0, k_plus, k_minus);
    if (id == "patch") return patch_problem();
    if (id == "zero") return zero_problem(r0);
    throw ConfigError("unknown problem '" + id + "'");
}

} // namespace irt
