#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "geometry.hpp"

namespace irt {

/// Rule on the reference triangle (barycentric points, weights summing to
/// 1/2) or on the unit segment (points in [0, 1], weights summing to 1).
struct QuadratureRule
{
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;
};

namespace detail {

inline void add_orbit(QuadratureRule& r, double a, double w) // (1/3, 1/3, 1/3)
{
    r.points.push_back({a, a, a});
    r.weights.push_back(w);
}

inline void add_orbit(QuadratureRule& r, double a, double b, double w) // (a, a, b)
{
    r.points.push_back({a, a, b});
    r.points.push_back({a, b, a});
    r.points.push_back({b, a, a});
    r.weights.insert(r.weights.end(), 3, w);
}

inline void add_orbit(QuadratureRule& r, double a, double b, double c, double w) // all permutations
{
    for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                          std::array{c, a, b}, std::array{c, b, a}})
        r.points.push_back(p);
    r.weights.insert(r.weights.end(), 6, w);
}

inline QuadratureRule make_triangle_rule(int degree)
{
    QuadratureRule r;
    switch (degree) {
    case 1:
        add_orbit(r, 1.0 / 3.0, 1.0);
        r.degree = 1;
        break;
    case 2:
        add_orbit(r, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0);
        r.degree = 2;
        break;
    case 3:
    case 4:
        // Dunavant, 6 points.
        add_orbit(r, 0.445948490915965, 1.0 - 2.0 * 0.445948490915965, 0.223381589678011);
        add_orbit(r, 0.091576213509771, 1.0 - 2.0 * 0.091576213509771, 0.109951743655322);
        r.degree = 4;
        break;
    case 5:
    case 6:
        // Dunavant, 12 points.
        add_orbit(r, 0.249286745170910, 1.0 - 2.0 * 0.249286745170910, 0.116786275726379);
        add_orbit(r, 0.063089014491502, 1.0 - 2.0 * 0.063089014491502, 0.050844906370207);
        add_orbit(r, 0.053145049844817, 0.310352451033784, 1.0 - 0.053145049844817 - 0.310352451033784,
                  0.082851075618374);
        r.degree = 6;
        break;
    default:
        throw UnsupportedDegree("no triangle rule of degree " + std::to_string(degree));
    }
    for (auto& w : r.weights) w *= 0.5;
    return r;
}

inline QuadratureRule make_segment_rule(int degree)
{
    // Gauss-Legendre with n points is exact to degree 2n - 1.
    QuadratureRule r;
    auto add = [&r](double x, double w) {
        r.points.push_back({0.5 * (1.0 + x), 0.0, 0.0});
        r.weights.push_back(0.5 * w);
    };
    if (degree < 0 || degree > 7) throw UnsupportedDegree("no segment rule of degree " + std::to_string(degree));
    const int n = degree / 2 + 1;
    switch (n) {
    case 1:
        add(0.0, 2.0);
        break;
    case 2:
        add(-1.0 / std::sqrt(3.0), 1.0);
        add(1.0 / std::sqrt(3.0), 1.0);
        break;
    case 3:
        add(-std::sqrt(0.6), 5.0 / 9.0);
        add(0.0, 8.0 / 9.0);
        add(std::sqrt(0.6), 5.0 / 9.0);
        break;
    default: {
        const double s = std::sqrt(6.0 / 5.0);
        const double xa = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * s), xb = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * s);
        const double wa = (18.0 + std::sqrt(30.0)) / 36.0, wb = (18.0 - std::sqrt(30.0)) / 36.0;
        add(-xb, wb);
        add(-xa, wa);
        add(xa, wa);
        add(xb, wb);
        break;
    }
    }
    r.degree = 2 * n - 1;
    return r;
}

} // namespace detail

/// Smallest built-in triangle rule exact to `degree` (1 to 6).
inline const QuadratureRule& triangle_rule(int degree)
{
    static const std::array<QuadratureRule, 6> rules = {
        detail::make_triangle_rule(1), detail::make_triangle_rule(2), detail::make_triangle_rule(3),
        detail::make_triangle_rule(4), detail::make_triangle_rule(5), detail::make_triangle_rule(6)};
    if (degree < 1 || degree > 6) throw UnsupportedDegree("no triangle rule of degree " + std::to_string(degree));
    return rules[degree - 1];
}

/// Gauss-Legendre rule on [0, 1] exact to `degree` (0 to 7).
inline const QuadratureRule& segment_rule(int degree)
{
    static const std::array<QuadratureRule, 8> rules = {
        detail::make_segment_rule(0), detail::make_segment_rule(1), detail::make_segment_rule(2),
        detail::make_segment_rule(3), detail::make_segment_rule(4), detail::make_segment_rule(5),
        detail::make_segment_rule(6), detail::make_segment_rule(7)};
    if (degree < 0 || degree > 7) throw UnsupportedDegree("no segment rule of degree " + std::to_string(degree));
    return rules[degree];
}

template <class F>
using field_value_t = std::decay_t<std::invoke_result_t<const F&, const Vec2&>>;

namespace detail {

template <class R>
R zero_like()
{
    if constexpr (std::is_arithmetic_v<R>)
        return R(0);
    else
        return R::Zero();
}

} // namespace detail

/// Affine-mapped rule on an arbitrary triangle; works for scalar and
/// Eigen-vector valued integrands.
template <class F>
field_value_t<F> integrate_triangle(const Triangle& tri, const F& f, int degree)
{
    using R = field_value_t<F>;
    const QuadratureRule& rule = triangle_rule(degree);
    const double jac = 2.0 * tri.area();
    R sum = detail::zero_like<R>();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.points[q];
        const Vec2 x = l[0] * tri.vertex[0] + l[1] * tri.vertex[1] + l[2] * tri.vertex[2];
        sum += (rule.weights[q] * jac) * R(f(x));
    }
    return sum;
}

/// The triangle rule on the 4^levels triangles of a uniform refinement.
template <class F>
field_value_t<F> integrate_triangle_refined(const Triangle& tri, const F& f, int degree, int levels)
{
    if (levels <= 0) return integrate_triangle(tri, f, degree);
    const auto& v = tri.vertex;
    const Vec2 m0 = 0.5 * (v[1] + v[2]), m1 = 0.5 * (v[2] + v[0]), m2 = 0.5 * (v[0] + v[1]);
    const std::array<Triangle, 4> kids{{{{v[0], m2, m1}}, {{m2, v[1], m0}}, {{m1, m0, v[2]}}, {{m0, m1, m2}}}};
    auto sum = detail::zero_like<field_value_t<F>>();
    for (const Triangle& k : kids) sum += integrate_triangle_refined(k, f, degree, levels - 1);
    return sum;
}

template <class F>
field_value_t<F> integrate_segment(const Vec2& a, const Vec2& b, const F& f, int degree)
{
    using R = field_value_t<F>;
    const QuadratureRule& rule = segment_rule(degree);
    const double len = (b - a).norm();
    R sum = detail::zero_like<R>();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Vec2 x = a + rule.points[q][0] * (b - a);
        sum += (rule.weights[q] * len) * R(f(x));
    }
    return sum;
}

/// The segment rule applied on `pieces` equal sub-segments.
template <class F>
field_value_t<F> integrate_segment_composite(const Vec2& a, const Vec2& b, const F& f, int degree, int pieces)
{
    if (pieces < 1) throw std::invalid_argument("integrate_segment_composite: pieces must be positive");
    auto sum = detail::zero_like<field_value_t<F>>();
    for (int k = 0; k < pieces; ++k)
        sum += integrate_segment(Vec2(a + (b - a) * (double(k) / pieces)), Vec2(a + (b - a) * (double(k + 1) / pieces)), f,
                                 degree);
    return sum;
}

/// Integral over an interface element: f_plus on the plus sub-triangles and
/// f_minus on the minus ones.
template <class FP, class FM>
field_value_t<FP> integrate_cut_element(const CutTopology& cut, const FP& f_plus, const FM& f_minus, int degree)
{
    auto sum = detail::zero_like<field_value_t<FP>>();
    for (const Triangle& t : cut.plus_triangles) sum += integrate_triangle(t, f_plus, degree);
    for (const Triangle& t : cut.minus_triangles) sum += integrate_triangle(t, f_minus, degree);
    return sum;
}

/// Integral over the segment [a, b] split at parameter `split` in (0, 1):
/// f_first on [a, split], f_second on the rest.  Without a split, f_first
/// covers the whole segment.  Each portion is divided into `pieces` equal
/// parts.
template <class F1, class F2>
field_value_t<F1> integrate_edge_piecewise(const Vec2& a, const Vec2& b, std::optional<double> split,
                                           const F1& f_first, const F2& f_second, int degree, int pieces = 1)
{
    if (!split) return integrate_segment_composite(a, b, f_first, degree, pieces);
    if (!(*split > 0.0 && *split < 1.0))
        throw std::invalid_argument("integrate_edge_piecewise: split must lie strictly inside the edge");
    const Vec2 m = a + *split * (b - a);
    return integrate_segment_composite(a, m, f_first, degree, pieces) +
           integrate_segment_composite(m, b, f_second, degree, pieces);
}

} // namespace irt
