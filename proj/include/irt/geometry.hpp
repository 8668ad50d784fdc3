#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace irt {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// 90 degree clockwise rotation, the map taking a normal to its tangent.
inline Vec2 rotate_cw(const Vec2& v) { return {v.y(), -v.x()}; }

enum class Side : int { minus = -1, on = 0, plus = 1 };

inline Side opposite(Side s) { return static_cast<Side>(-static_cast<int>(s)); }

inline const char* to_string(Side s)
{
    switch (s) {
    case Side::minus: return "minus";
    case Side::plus: return "plus";
    default: return "on";
    }
}

/// A triangle with vertices in counterclockwise order.  Local edge i is the
/// edge opposite vertex i and runs from vertex (i+1)%3 to vertex (i+2)%3.
struct Triangle
{
    std::array<Vec2, 3> vertex;

    double signed_area() const { return 0.5 * cross(vertex[1] - vertex[0], vertex[2] - vertex[0]); }
    double area() const { return std::abs(signed_area()); }

    const Vec2& edge_start(int i) const { return vertex[(i + 1) % 3]; }
    const Vec2& edge_end(int i) const { return vertex[(i + 2) % 3]; }
    double edge_length(int i) const { return (edge_end(i) - edge_start(i)).norm(); }
    Vec2 edge_point(int i, double t) const { return edge_start(i) + t * (edge_end(i) - edge_start(i)); }

    Vec2 outward_normal(int i) const { return rotate_cw(edge_end(i) - edge_start(i)).normalized(); }

    Vec2 centroid() const { return (vertex[0] + vertex[1] + vertex[2]) / 3.0; }

    double diameter() const { return std::max({edge_length(0), edge_length(1), edge_length(2)}); }

    /// Center of the inscribed circle.
    Vec2 incenter() const
    {
        const double l0 = edge_length(0), l1 = edge_length(1), l2 = edge_length(2);
        return (l0 * vertex[0] + l1 * vertex[1] + l2 * vertex[2]) / (l0 + l1 + l2);
    }

    double angle(int i) const
    {
        const Vec2 a = vertex[(i + 1) % 3] - vertex[i];
        const Vec2 b = vertex[(i + 2) % 3] - vertex[i];
        return std::atan2(std::abs(cross(a, b)), a.dot(b));
    }

    double max_angle() const { return std::max({angle(0), angle(1), angle(2)}); }
};

struct Rectangle
{
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
};

/// Conforming triangulation with edge connectivity.
///
/// Every edge carries a canonical unit normal that points out of its first
/// incident element, which for boundary edges is the outward normal of the
/// domain.  The orientation sign of a (element, local edge) pair is +1 when
/// the element is that first neighbor and -1 otherwise.
struct Mesh
{
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> edges;
    std::vector<Vec2> edge_normals;
    std::vector<std::array<int, 2>> edge_elements;
    std::vector<std::array<int, 3>> element_edges;
    std::vector<bool> boundary;
    double h = 0.0;
    int subdivisions = 0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_elements() const { return static_cast<int>(triangles.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    Triangle triangle(int t) const
    {
        const auto& v = triangles[t];
        return Triangle{{vertices[v[0]], vertices[v[1]], vertices[v[2]]}};
    }

    double edge_length(int e) const { return (vertices[edges[e][1]] - vertices[edges[e][0]]).norm(); }

    double orientation_sign(int t, int local_edge) const
    {
        return edge_elements[element_edges[t][local_edge]][0] == t ? 1.0 : -1.0;
    }

    /// Local index of global edge e in element t, or -1.
    int local_edge(int t, int e) const
    {
        for (int i = 0; i < 3; ++i)
            if (element_edges[t][i] == e) return i;
        return -1;
    }
};

/// Builds edge connectivity for an arbitrary list of triangles.  Clockwise
/// triangles are reoriented; degenerate ones are rejected.
inline Mesh make_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
{
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);

    std::map<std::pair<int, int>, int> edge_index;
    mesh.element_edges.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        auto& tri = mesh.triangles[t];
        Triangle geo = mesh.triangle(static_cast<int>(t));
        const double a = geo.signed_area();
        if (!(std::abs(a) > 0.0)) throw DegenerateTriangle("triangle " + std::to_string(t) + " has zero area");
        if (a < 0.0) std::swap(tri[1], tri[2]);
        geo = mesh.triangle(static_cast<int>(t));
        mesh.h = std::max(mesh.h, geo.diameter());

        for (int i = 0; i < 3; ++i) {
            const int a0 = tri[(i + 1) % 3];
            const int a1 = tri[(i + 2) % 3];
            const auto key = std::minmax(a0, a1);
            auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, mesh.num_edges());
            if (inserted) {
                mesh.edges.push_back({a0, a1});
                mesh.edge_normals.push_back(geo.outward_normal(i));
                mesh.edge_elements.push_back({static_cast<int>(t), -1});
            }
            else {
                auto& owners = mesh.edge_elements[it->second];
                if (owners[1] != -1) throw DegenerateTriangle("edge shared by more than two triangles");
                owners[1] = static_cast<int>(t);
            }
            mesh.element_edges[t][i] = it->second;
        }
    }
    mesh.boundary.resize(mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) mesh.boundary[e] = mesh.edge_elements[e][1] == -1;
    return mesh;
}

/// N x N congruent cells on the rectangle, each split along the diagonal
/// running from its upper-left to its lower-right corner.
inline Mesh build_uniform_mesh(int n, const Rectangle& domain = {})
{
    if (n < 1) throw std::invalid_argument("build_uniform_mesh: N must be positive");
    std::vector<Vec2> vertices;
    vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    const double dx = (domain.x_max - domain.x_min) / n;
    const double dy = (domain.y_max - domain.y_min) / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            vertices.emplace_back(i == n ? domain.x_max : domain.x_min + i * dx,
                                  j == n ? domain.y_max : domain.y_min + j * dy);

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            triangles.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
            triangles.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    Mesh mesh = make_mesh(std::move(vertices), std::move(triangles));
    mesh.subdivisions = n;
    return mesh;
}

/// Interface given implicitly as the zero set of a level set function,
/// negative inside the minus subdomain.
struct LevelSet
{
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;

    Vec2 normal(const Vec2& x) const { return gradient(x).normalized(); }
    Vec2 tangent(const Vec2& x) const { return rotate_cw(normal(x)); }
};

inline LevelSet circle_level_set(double radius, Vec2 center = Vec2::Zero())
{
    return LevelSet{[=](const Vec2& x) { return (x - center).norm() - radius; },
                    [=](const Vec2& x) {
                        const Vec2 d = x - center;
                        const double r = d.norm();
                        return r > 0.0 ? Vec2(d / r) : Vec2(Vec2::Zero());
                    }};
}

/// Straight line through `point` with unit normal `normal` (pointing to plus).
inline LevelSet line_level_set(Vec2 point, Vec2 normal)
{
    normal.normalize();
    return LevelSet{[=](const Vec2& x) { return normal.dot(x - point); }, [=](const Vec2&) { return normal; }};
}

/// No interface: the whole plane is the minus side.
inline LevelSet empty_level_set()
{
    return LevelSet{[](const Vec2&) { return -1.0; }, [](const Vec2&) { return Vec2(Vec2::Zero()); }};
}

/// Reciprocal diffusion coefficient, one closed form per side.
struct PiecewiseCoefficient
{
    std::function<double(const Vec2&)> plus = [](const Vec2&) { return 1.0; };
    std::function<double(const Vec2&)> minus = [](const Vec2&) { return 1.0; };

    double operator()(Side s, const Vec2& x) const { return s == Side::plus ? plus(x) : minus(x); }
};

/// Root of f on the segment [a, b], given a strict sign change, returned as
/// the parameter t in (0, 1).
template <class F>
double bisect_segment(const F& f, const Vec2& a, const Vec2& b, double abs_tol = 1e-13)
{
    double lo = 0.0, hi = 1.0;
    const double f_lo = f(a);
    const double length = (b - a).norm();
    for (int it = 0; it < 200 && (hi - lo) * length > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(Vec2(a + mid * (b - a)));
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Where the interface crosses an element boundary.  `vertex` or `edge`
/// (mesh ids, -1 when unknown) identifies the point for chaining.
struct CutPoint
{
    Vec2 point = Vec2::Zero();
    int vertex = -1;
    int edge = -1;
};

/// Split of one local edge of an interface element into at most two pieces,
/// [start, start + t (end - start)] on side `first` and the rest on `second`.
struct EdgePortions
{
    bool split = false;
    double t = 1.0;
    Side first = Side::minus;
    Side second = Side::minus;
};

/// Geometry of one interface element.  The chord DE splits the triangle into
/// a triangle and a convex quadrilateral; normal points into the plus part
/// and tangent is the normal rotated clockwise.
struct CutTopology
{
    int element = -1;
    Triangle triangle;
    std::array<CutPoint, 2> points;
    std::array<int, 2> cut_edges{-1, -1}; // local edges with an interior cut, -1 for a cut through a vertex
    std::array<EdgePortions, 3> edge_portions;
    Vec2 normal = Vec2::Zero();
    Vec2 tangent = Vec2::Zero();
    Vec2 x_t = Vec2::Zero();
    double beta_plus = 1.0;
    double beta_minus = 1.0;
    std::vector<Vec2> plus_polygon;
    std::vector<Vec2> minus_polygon;
    std::vector<Triangle> plus_triangles;
    std::vector<Triangle> minus_triangles;

    const Vec2& d() const { return points[0].point; }
    const Vec2& e() const { return points[1].point; }

    /// Side of the discrete interface line through D.
    Side side_of(const Vec2& x) const { return (x - d()).dot(normal) >= 0.0 ? Side::plus : Side::minus; }

    double beta(Side s) const { return s == Side::plus ? beta_plus : beta_minus; }

    const std::vector<Triangle>& sub_triangles(Side s) const { return s == Side::plus ? plus_triangles : minus_triangles; }
};

inline double polygon_area(const std::vector<Vec2>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * std::abs(a);
}

inline Vec2 polygon_centroid(const std::vector<Vec2>& poly)
{
    double a = 0.0;
    Vec2 c = Vec2::Zero();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        const double w = cross(p, q);
        a += w;
        c += w * (p + q);
    }
    return c / (3.0 * a);
}

namespace detail {

inline std::vector<Triangle> fan(const std::vector<Vec2>& poly)
{
    std::vector<Triangle> out;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.push_back(Triangle{{poly[0], poly[i], poly[i + 1]}});
    return out;
}

/// Assembles the cut from vertex sides and the interior crossing point of
/// each local edge whose endpoints have strictly opposite signs.
inline CutTopology build_cut(const Triangle& tri, const std::array<Side, 3>& side,
                             const std::array<std::optional<double>, 3>& edge_param,
                             const std::array<int, 3>& vertex_ids, const std::array<int, 3>& edge_ids)
{
    CutTopology cut;
    cut.triangle = tri;
    std::vector<CutPoint> points;
    int n_cut_edges = 0;

    // Walk the boundary counterclockwise: vertex k, then the edge from k to k+1,
    // which is local edge (k+2)%3.
    for (int k = 0; k < 3; ++k) {
        const Vec2& v = tri.vertex[k];
        if (side[k] != Side::minus) cut.plus_polygon.push_back(v);
        if (side[k] != Side::plus) cut.minus_polygon.push_back(v);
        if (side[k] == Side::on) points.push_back(CutPoint{v, vertex_ids[k], -1});

        const int edge = (k + 2) % 3;
        if (edge_param[edge]) {
            const Vec2 p = tri.edge_point(edge, *edge_param[edge]);
            cut.plus_polygon.push_back(p);
            cut.minus_polygon.push_back(p);
            points.push_back(CutPoint{p, -1, edge_ids[edge]});
            if (n_cut_edges < 2) cut.cut_edges[n_cut_edges] = edge;
            ++n_cut_edges;
        }
    }
    if (points.size() != 2)
        throw AssumptionViolation("element boundary meets the interface at " + std::to_string(points.size()) +
                                  " points");

    cut.points = {points[0], points[1]};
    const Vec2 chord = cut.e() - cut.d();
    if (!(chord.norm() > 0.0)) throw AssumptionViolation("interface chord has zero length");
    Vec2 n = rotate_cw(chord).normalized();
    for (int k = 0; k < 3; ++k) {
        if (side[k] == Side::plus) {
            if (n.dot(tri.vertex[k] - cut.d()) < 0.0) n = -n;
            break;
        }
    }
    cut.normal = n;
    cut.tangent = rotate_cw(n);
    cut.x_t = 0.5 * (cut.d() + cut.e());

    for (int i = 0; i < 3; ++i) {
        const Side s0 = side[(i + 1) % 3];
        const Side s1 = side[(i + 2) % 3];
        EdgePortions& ep = cut.edge_portions[i];
        if (edge_param[i]) {
            ep.split = true;
            ep.t = *edge_param[i];
            ep.first = s0;
            ep.second = s1;
        }
        else {
            const Side s = s0 != Side::on ? s0 : s1;
            ep.first = ep.second = s;
        }
    }
    cut.plus_triangles = fan(cut.plus_polygon);
    cut.minus_triangles = fan(cut.minus_polygon);
    return cut;
}

template <class F>
std::array<Side, 3> vertex_sides(const Triangle& tri, const F& f, double tol)
{
    std::array<Side, 3> s{};
    for (int k = 0; k < 3; ++k) {
        const double v = f(tri.vertex[k]);
        s[k] = std::abs(v) <= tol ? Side::on : (v > 0.0 ? Side::plus : Side::minus);
    }
    return s;
}

inline bool strictly_opposite(Side a, Side b)
{
    return (a == Side::plus && b == Side::minus) || (a == Side::minus && b == Side::plus);
}

inline bool has_both_sides(const std::array<Side, 3>& s)
{
    const bool plus = std::find(s.begin(), s.end(), Side::plus) != s.end();
    const bool minus = std::find(s.begin(), s.end(), Side::minus) != s.end();
    return plus && minus;
}

} // namespace detail

/// Cuts a single triangle by a level set.  Returns nothing when the triangle
/// has no vertices strictly on both sides.
inline std::optional<CutTopology> cut_element(const Triangle& tri, const LevelSet& ls, double tol = 0.0)
{
    const auto side = detail::vertex_sides(tri, ls.value, tol);
    if (!detail::has_both_sides(side)) return std::nullopt;
    std::array<std::optional<double>, 3> param;
    for (int i = 0; i < 3; ++i)
        if (detail::strictly_opposite(side[(i + 1) % 3], side[(i + 2) % 3]))
            param[i] = bisect_segment(ls.value, tri.edge_start(i), tri.edge_end(i));
    return detail::build_cut(tri, side, param, {-1, -1, -1}, {-1, -1, -1});
}

/// Interface crossing of a global mesh edge, parametrized from edges[e][0].
struct EdgeCut
{
    bool cut = false;
    double t = 0.0;
    Vec2 point = Vec2::Zero();
};

struct Classification
{
    std::vector<Side> vertex_side;
    /// Side of every non-interface element; Side::on marks interface elements.
    std::vector<Side> element_side;
    std::vector<int> element_cut;
    std::vector<EdgeCut> edge_cut;
    std::vector<CutTopology> cuts;
    std::vector<int> interface_edges;
    double tolerance = 0.0;

    bool is_interface(int t) const { return element_cut[t] >= 0; }
    const CutTopology* cut_of(int t) const { return element_cut[t] >= 0 ? &cuts[element_cut[t]] : nullptr; }
};

/// Labels elements and edges against the interface and builds the cut
/// geometry of every interface element.
///
/// Vertices within `tol` of the interface (default 1e-12 h) are treated as
/// lying on it: an element touching the interface only at such vertices is
/// not an interface element, and an interface element may have its chord
/// end at one of its vertices.  Coefficients are sampled at the chord
/// midpoint.
inline Classification classify_mesh(const Mesh& mesh, const LevelSet& ls, double tol = -1.0,
                                     const PiecewiseCoefficient& beta = {})
{
    Classification out;
    out.tolerance = tol < 0.0 ? 1e-12 * mesh.h : tol;
    const auto& f = ls.value;

    out.vertex_side.resize(mesh.vertices.size());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const double val = f(mesh.vertices[v]);
        out.vertex_side[v] = std::abs(val) <= out.tolerance ? Side::on : (val > 0.0 ? Side::plus : Side::minus);
    }

    constexpr int edge_samples = 16;
    out.edge_cut.resize(mesh.edges.size());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Vec2& a = mesh.vertices[mesh.edges[e][0]];
        const Vec2& b = mesh.vertices[mesh.edges[e][1]];
        const Side sa = out.vertex_side[mesh.edges[e][0]];
        const Side sb = out.vertex_side[mesh.edges[e][1]];

        int changes = 0;
        Side last = sa;
        for (int k = 1; k <= edge_samples; ++k) {
            const Side s = k == edge_samples ? sb : (f(Vec2(a + (b - a) * (double(k) / edge_samples))) > 0.0 ? Side::plus : Side::minus);
            if (s == Side::on) continue;
            if (last != Side::on && s != last) ++changes;
            last = s;
        }
        if (changes > 1)
            throw AssumptionViolation("edge " + std::to_string(e) + " is cut by the interface more than once");

        if (detail::strictly_opposite(sa, sb)) {
            if (mesh.boundary[e])
                throw AssumptionViolation("interface crosses the domain boundary on edge " + std::to_string(e));
            EdgeCut& c = out.edge_cut[e];
            c.cut = true;
            c.t = bisect_segment(f, a, b);
            c.point = a + c.t * (b - a);
            out.interface_edges.push_back(e);
        }
        else if (mesh.boundary[e] && (sa == Side::on || sb == Side::on)) {
            throw AssumptionViolation("interface touches the domain boundary on edge " + std::to_string(e));
        }
    }

    out.element_side.assign(mesh.triangles.size(), Side::on);
    out.element_cut.assign(mesh.triangles.size(), -1);
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& vid = mesh.triangles[t];
        const std::array<Side, 3> side{out.vertex_side[vid[0]], out.vertex_side[vid[1]], out.vertex_side[vid[2]]};
        const Triangle tri = mesh.triangle(t);

        if (!detail::has_both_sides(side)) {
            Side s = Side::plus;
            for (Side v : side)
                if (v != Side::on) s = v;
            out.element_side[t] = s;
            // The interface may not sit inside an element without crossing its edges.
            for (int i = 1; i <= 3; ++i) {
                for (int j = 1; i + j <= 4; ++j) {
                    const double l1 = i / 5.0, l2 = j / 5.0;
                    const Vec2 x = (1.0 - l1 - l2) * tri.vertex[0] + l1 * tri.vertex[1] + l2 * tri.vertex[2];
                    const double val = f(x);
                    if ((s == Side::plus && val < -out.tolerance) || (s == Side::minus && val > out.tolerance))
                        throw AssumptionViolation("interface enters element " + std::to_string(t) +
                                                  " without crossing its edges");
                }
            }
            continue;
        }

        if (tri.max_angle() > std::numbers::pi / 2 + 1e-12)
            throw AssumptionViolation("interface element " + std::to_string(t) + " has an angle above pi/2");

        std::array<std::optional<double>, 3> param;
        std::array<int, 3> eids{};
        for (int i = 0; i < 3; ++i) {
            const int e = mesh.element_edges[t][i];
            eids[i] = e;
            if (out.edge_cut[e].cut) {
                // Local edge i runs from vertex (i+1)%3; flip the global parameter if needed.
                const bool same = mesh.edges[e][0] == vid[(i + 1) % 3];
                param[i] = same ? out.edge_cut[e].t : 1.0 - out.edge_cut[e].t;
            }
        }
        CutTopology cut = detail::build_cut(tri, side, param, vid, eids);
        // Reuse the exact global crossing points so neighbors share them bit for bit.
        for (auto& p : cut.points)
            if (p.edge >= 0) p.point = out.edge_cut[p.edge].point;
        cut.x_t = 0.5 * (cut.d() + cut.e());
        cut.element = t;
        cut.beta_plus = beta.plus(cut.x_t);
        cut.beta_minus = beta.minus(cut.x_t);
        out.element_cut[t] = static_cast<int>(out.cuts.size());
        out.cuts.push_back(std::move(cut));
    }
    return out;
}

/// The discrete interface: chords of all interface elements chained into
/// closed loops.
struct InterfacePolyline
{
    std::vector<std::vector<Vec2>> loops;
    std::size_t segment_count = 0;

    std::size_t vertex_count() const
    {
        std::size_t n = 0;
        for (const auto& l : loops) n += l.size();
        return n;
    }
};

inline InterfacePolyline polyline_interface(const Classification& cls)
{
    if (cls.cuts.empty()) throw TopologyError("no interface elements: the interface misses the mesh");

    using Key = std::pair<int, int>; // (0, vertex id) or (1, edge id)
    auto key_of = [](const CutPoint& p) -> Key {
        if (p.vertex >= 0) return {0, p.vertex};
        if (p.edge >= 0) return {1, p.edge};
        throw TopologyError("cut point without a mesh identifier");
    };

    std::map<Key, std::vector<int>> incident;
    std::map<Key, Vec2> location;
    for (std::size_t s = 0; s < cls.cuts.size(); ++s) {
        for (const auto& p : cls.cuts[s].points) {
            const Key k = key_of(p);
            incident[k].push_back(static_cast<int>(s));
            location[k] = p.point;
        }
    }
    for (const auto& [k, segs] : incident)
        if (segs.size() != 2)
            throw TopologyError("interface point shared by " + std::to_string(segs.size()) + " segments");

    InterfacePolyline out;
    out.segment_count = cls.cuts.size();
    std::vector<bool> used(cls.cuts.size(), false);
    for (std::size_t start = 0; start < cls.cuts.size(); ++start) {
        if (used[start]) continue;
        std::vector<Vec2> loop;
        int seg = static_cast<int>(start);
        Key at = key_of(cls.cuts[seg].points[0]);
        while (!used[seg]) {
            used[seg] = true;
            loop.push_back(location[at]);
            const auto& pts = cls.cuts[seg].points;
            const Key next = key_of(pts[0]) == at ? key_of(pts[1]) : key_of(pts[0]);
            const auto& inc = incident[next];
            seg = inc[0] == seg ? inc[1] : inc[0];
            at = next;
        }
        if (at != key_of(cls.cuts[start].points[0])) throw TopologyError("interface segments do not close");
        out.loops.push_back(std::move(loop));
    }
    return out;
}

} // namespace irt
