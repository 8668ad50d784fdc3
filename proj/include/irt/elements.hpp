#pragma once

#include <array>
#include <cmath>
#include <string>

#include "geometry.hpp"
#include "quadrature.hpp"

namespace irt {

/// Lowest-order Raviart-Thomas field (a + b x1, c + b x2).
struct AffineVectorField
{
    double a = 0.0;
    double c = 0.0;
    double b = 0.0;

    static AffineVectorField constant(const Vec2& v) { return {v.x(), v.y(), 0.0}; }

    Vec2 operator()(const Vec2& x) const { return {a + b * x.x(), c + b * x.y()}; }
    double divergence() const { return 2.0 * b; }

    AffineVectorField& operator+=(const AffineVectorField& o)
    {
        a += o.a;
        c += o.c;
        b += o.b;
        return *this;
    }
    AffineVectorField& operator-=(const AffineVectorField& o)
    {
        a -= o.a;
        c -= o.c;
        b -= o.b;
        return *this;
    }
    AffineVectorField& operator*=(double s)
    {
        a *= s;
        c *= s;
        b *= s;
        return *this;
    }
    friend AffineVectorField operator+(AffineVectorField l, const AffineVectorField& r) { return l += r; }
    friend AffineVectorField operator-(AffineVectorField l, const AffineVectorField& r) { return l -= r; }
    friend AffineVectorField operator*(double s, AffineVectorField f) { return f *= s; }
    friend AffineVectorField operator*(AffineVectorField f, double s) { return f *= s; }
};

/// Two RT0 pieces glued along the discrete interface line of an element.
/// On non-interface elements both pieces coincide.
struct PiecewiseRTFunction
{
    AffineVectorField plus;
    AffineVectorField minus;
    Vec2 anchor = Vec2::Zero();
    Vec2 normal = Vec2(1.0, 0.0);

    static PiecewiseRTFunction uniform(const AffineVectorField& f) { return {f, f}; }

    static PiecewiseRTFunction on_cut(const CutTopology& cut, const AffineVectorField& p, const AffineVectorField& m)
    {
        return {p, m, cut.d(), cut.normal};
    }

    Side side_of(const Vec2& x) const { return (x - anchor).dot(normal) >= 0.0 ? Side::plus : Side::minus; }
    const AffineVectorField& piece(Side s) const { return s == Side::plus ? plus : minus; }
    Vec2 operator()(const Vec2& x) const { return piece(side_of(x))(x); }

    PiecewiseRTFunction& operator+=(const PiecewiseRTFunction& o)
    {
        plus += o.plus;
        minus += o.minus;
        return *this;
    }
    PiecewiseRTFunction& operator*=(double s)
    {
        plus *= s;
        minus *= s;
        return *this;
    }
    friend PiecewiseRTFunction operator+(PiecewiseRTFunction l, const PiecewiseRTFunction& r) { return l += r; }
    friend PiecewiseRTFunction operator*(double s, PiecewiseRTFunction f) { return f *= s; }
    friend PiecewiseRTFunction operator-(PiecewiseRTFunction l, const PiecewiseRTFunction& r)
    {
        l.plus -= r.plus;
        l.minus -= r.minus;
        return l;
    }
};

/// lambda_i(x) = |e_i| / (2 |T|) (x - A_i), so the mean outward normal
/// trace of lambda_i on e_j is delta_ij.
inline std::array<AffineVectorField, 3> rt_basis(const Triangle& tri)
{
    const double area = tri.signed_area();
    if (!(area > 0.0)) throw DegenerateTriangle("rt_basis needs a counterclockwise nondegenerate triangle");
    std::array<AffineVectorField, 3> out;
    for (int i = 0; i < 3; ++i) {
        const double k = tri.edge_length(i) / (2.0 * area);
        out[i] = {-k * tri.vertex[i].x(), -k * tri.vertex[i].y(), k};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degrees of freedom: mean outward normal trace over each edge.

inline double dof_functional(const AffineVectorField& q, const Triangle& tri, int i)
{
    return q(0.5 * (tri.edge_start(i) + tri.edge_end(i))).dot(tri.outward_normal(i));
}

/// Exact for piecewise RT0 fields: the trace is constant on each portion.
inline double dof_functional(const PiecewiseRTFunction& q, const CutTopology& cut, int i)
{
    const Triangle& tri = cut.triangle;
    const EdgePortions& ep = cut.edge_portions[i];
    const Vec2 n = tri.outward_normal(i);
    if (!ep.split) return dof_functional(q.piece(ep.first), tri, i);
    const Vec2 m1 = tri.edge_point(i, 0.5 * ep.t);
    const Vec2 m2 = tri.edge_point(i, 0.5 * (1.0 + ep.t));
    return ep.t * q.piece(ep.first)(m1).dot(n) + (1.0 - ep.t) * q.piece(ep.second)(m2).dot(n);
}

/// Sub-segments per edge portion when integrating closed-form traces.  On
/// an N = 8 mesh a single degree-6 Gauss rule is off by 4e-6 for the bump
/// flux of example 2; 16 pieces bring that below 1e-12.
inline constexpr int trace_pieces = 16;

/// Mean normal trace of an arbitrary field by composite degree-6 Gauss
/// quadrature.
template <class F>
double dof_functional(const F& q, const Triangle& tri, int i, int degree = 6)
{
    const Vec2 n = tri.outward_normal(i);
    auto trace = [&](const Vec2& x) { return Vec2(q(x)).dot(n); };
    return integrate_segment_composite(tri.edge_start(i), tri.edge_end(i), trace, degree, trace_pieces) /
           tri.edge_length(i);
}

/// Mean normal trace of a field given by one closed form per side, split
/// where the interface crosses the edge.
template <class FP, class FM>
double dof_functional(const FP& q_plus, const FM& q_minus, const CutTopology& cut, int i, int degree = 6)
{
    const Triangle& tri = cut.triangle;
    const EdgePortions& ep = cut.edge_portions[i];
    const Vec2 n = tri.outward_normal(i);
    auto trace = [&](Side s) {
        return [&, s](const Vec2& x) { return Vec2(s == Side::plus ? q_plus(x) : q_minus(x)).dot(n); };
    };
    const std::optional<double> split = ep.split ? std::optional<double>(ep.t) : std::nullopt;
    return integrate_edge_piecewise(tri.edge_start(i), tri.edge_end(i), split, trace(ep.first), trace(ep.second),
                                    degree, trace_pieces) /
           tri.edge_length(i);
}

template <class F>
AffineVectorField rt_interpolate(const F& q, const Triangle& tri)
{
    const auto lambda = rt_basis(tri);
    AffineVectorField out;
    for (int i = 0; i < 3; ++i) out += dof_functional(q, tri, i) * lambda[i];
    return out;
}

// ---------------------------------------------------------------------------
// Immersed basis.

/// omega = t_h on the plus part and 0 on the minus part, with its RT0
/// interpolant and theta = (Pi omega)(x_T) . t_h.
struct Omega
{
    PiecewiseRTFunction omega;
    AffineVectorField projection;
    double theta = 0.0;
};

inline Omega build_omega(const CutTopology& cut)
{
    Omega out;
    out.omega = PiecewiseRTFunction::on_cut(cut, AffineVectorField::constant(cut.tangent), AffineVectorField{});
    const auto lambda = rt_basis(cut.triangle);
    for (int i = 0; i < 3; ++i) out.projection += dof_functional(out.omega, cut, i) * lambda[i];
    out.theta = out.projection(cut.x_t).dot(cut.tangent);
    return out;
}

/// Three local shape functions with N_j(phi_i) = delta_ij.  On interface
/// elements `mu` holds the tangential jump of each function at x_T and
/// `denominator` the factor 1 + (beta^-/beta^+ - 1) theta.
struct LocalBasis
{
    std::array<PiecewiseRTFunction, 3> functions;
    double theta_omega = 0.0;
    std::array<double, 3> mu{};
    double denominator = 1.0;
};

inline LocalBasis rt_local_basis(const Triangle& tri)
{
    const auto lambda = rt_basis(tri);
    LocalBasis out;
    for (int i = 0; i < 3; ++i) out.functions[i] = PiecewiseRTFunction::uniform(lambda[i]);
    return out;
}

/// Immersed basis from the closed-form correction of the standard one:
///   phi_i = lambda_i + mu_i (omega - Pi omega),
///   mu_i  = (r - 1) lambda_i(x_T).t_h / (1 + (r - 1) theta),  r = beta^-/beta^+.
/// theta outside [-band, 1 + band] means the element breaks the maximum
/// angle condition.
inline LocalBasis ife_basis(const CutTopology& cut, double band = 1e-12)
{
    if (!(cut.beta_plus > 0.0) || !(cut.beta_minus > 0.0))
        throw NonPositiveCoefficient("ife_basis: coefficients must be positive");

    const Omega om = build_omega(cut);
    if (om.theta < -band || om.theta > 1.0 + band)
        throw AssumptionViolation("theta_omega = " + std::to_string(om.theta) +
                                  " outside [0, 1]: maximum angle condition violated");

    const auto lambda = rt_basis(cut.triangle);
    const double r = cut.beta_minus / cut.beta_plus;
    LocalBasis out;
    out.theta_omega = om.theta;
    out.denominator = 1.0 + (r - 1.0) * om.theta;
    const AffineVectorField t = AffineVectorField::constant(cut.tangent);
    for (int i = 0; i < 3; ++i) {
        const double mu = (r - 1.0) * lambda[i](cut.x_t).dot(cut.tangent) / out.denominator;
        out.mu[i] = mu;
        out.functions[i] =
            PiecewiseRTFunction::on_cut(cut, lambda[i] + mu * (t - om.projection), lambda[i] - mu * om.projection);
    }
    return out;
}

/// Standard basis off the interface, immersed basis on it.
inline LocalBasis local_basis(const Triangle& tri, const CutTopology* cut)
{
    return cut ? ife_basis(*cut) : rt_local_basis(tri);
}

inline PiecewiseRTFunction expand(const LocalBasis& basis, const std::array<double, 3>& coeff)
{
    PiecewiseRTFunction out = 0.0 * basis.functions[0];
    for (int i = 0; i < 3; ++i) out += coeff[i] * basis.functions[i];
    return out;
}

/// Immersed interpolant of a field with one closed form per side.
template <class FP, class FM>
PiecewiseRTFunction ife_interpolate(const FP& q_plus, const FM& q_minus, const CutTopology& cut,
                                    const LocalBasis& basis)
{
    std::array<double, 3> n{};
    for (int i = 0; i < 3; ++i) n[i] = dof_functional(q_plus, q_minus, cut, i);
    return expand(basis, n);
}

template <class FP, class FM>
PiecewiseRTFunction ife_interpolate(const FP& q_plus, const FM& q_minus, const CutTopology& cut)
{
    return ife_interpolate(q_plus, q_minus, cut, ife_basis(cut));
}

/// Immersed interpolant of a piecewise RT0 field (exact DOFs).
inline PiecewiseRTFunction ife_interpolate(const PiecewiseRTFunction& z, const CutTopology& cut,
                                           const LocalBasis& basis)
{
    std::array<double, 3> n{};
    for (int i = 0; i < 3; ++i) n[i] = dof_functional(z, cut, i);
    return expand(basis, n);
}

// ---------------------------------------------------------------------------
// Auxiliary functions: zero DOFs and a unit jump in exactly one of the three
// interface quantities (normal trace, scaled tangential trace, divergence).

struct AuxiliaryFunctions
{
    PiecewiseRTFunction psi;
    PiecewiseRTFunction upsilon;
    PiecewiseRTFunction theta;
};

inline AuxiliaryFunctions auxiliary_functions(const CutTopology& cut, const LocalBasis& basis)
{
    auto gap = [&](const AffineVectorField& zp, const AffineVectorField& zm) {
        const auto z = PiecewiseRTFunction::on_cut(cut, zp, zm);
        return z - ife_interpolate(z, cut, basis);
    };
    AuxiliaryFunctions out;
    out.psi = gap(AffineVectorField::constant(cut.normal), {});

    if (cut.beta_plus > cut.beta_minus)
        out.upsilon = gap(AffineVectorField::constant(cut.tangent / cut.beta_plus), {});
    else
        out.upsilon = gap({}, AffineVectorField::constant(-cut.tangent / cut.beta_minus));

    // z+ = (x - incenter) / 2 also jumps in the normal and scaled tangential
    // components at x_T; Psi and Upsilon remove those jumps.
    const Vec2 center = cut.triangle.incenter();
    const PiecewiseRTFunction z = gap(AffineVectorField{-0.5 * center.x(), -0.5 * center.y(), 0.5}, {});
    const double jn = (z.plus(cut.x_t) - z.minus(cut.x_t)).dot(cut.normal);
    const double jt = (cut.beta_plus * z.plus(cut.x_t) - cut.beta_minus * z.minus(cut.x_t)).dot(cut.tangent);
    out.theta = z - jn * out.psi - jt * out.upsilon;
    return out;
}

inline AuxiliaryFunctions auxiliary_functions(const CutTopology& cut)
{
    return auxiliary_functions(cut, ife_basis(cut));
}

// ---------------------------------------------------------------------------
// Interface jumps and norms of piecewise fields on one element.

/// (plus - minus) . n_h at x_T.
inline double normal_jump(const PiecewiseRTFunction& f, const CutTopology& cut)
{
    return (f.plus(cut.x_t) - f.minus(cut.x_t)).dot(cut.normal);
}

/// (beta^+ plus - beta^- minus) . t_h at x_T.
inline double scaled_tangential_jump(const PiecewiseRTFunction& f, const CutTopology& cut)
{
    return (cut.beta_plus * f.plus(cut.x_t) - cut.beta_minus * f.minus(cut.x_t)).dot(cut.tangent);
}

inline double divergence_jump(const PiecewiseRTFunction& f) { return f.plus.divergence() - f.minus.divergence(); }

/// L2 norm over the element, each piece on its own side of the chord.
inline double l2_norm(const PiecewiseRTFunction& f, const CutTopology& cut)
{
    double s = 0.0;
    for (Side side : {Side::plus, Side::minus}) {
        const auto& piece = f.piece(side);
        for (const Triangle& t : cut.sub_triangles(side))
            s += integrate_triangle(t, [&](const Vec2& x) { return piece(x).squaredNorm(); }, 2);
    }
    return std::sqrt(s);
}

/// L2 norm over the whole element of a single piece.
inline double l2_norm(const AffineVectorField& f, const Triangle& tri)
{
    return std::sqrt(integrate_triangle(tri, [&](const Vec2& x) { return f(x).squaredNorm(); }, 2));
}

/// max over both pieces of the sup norm on the whole triangle (attained at
/// a vertex since |affine| is convex).
inline double piece_sup_norm(const PiecewiseRTFunction& f, const Triangle& tri)
{
    double m = 0.0;
    for (const Vec2& v : tri.vertex) m = std::max({m, f.plus(v).norm(), f.minus(v).norm()});
    return m;
}

} // namespace irt
