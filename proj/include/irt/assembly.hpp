#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "elements.hpp"
#include "geometry.hpp"
#include "problems.hpp"
#include "quadrature.hpp"

namespace irt {

enum class Method { traditional, immersed };

inline const char* to_string(Method m) { return m == Method::immersed ? "immersed" : "traditional"; }

inline Method parse_method(const std::string& s)
{
    if (s == "immersed") return Method::immersed;
    if (s == "traditional") return Method::traditional;
    throw ConfigError("unknown method '" + s + "'");
}

/// One flux unknown per edge and one scalar unknown per element.  The
/// global flux basis function of edge e restricted to element T is
/// sign(T, e) times the local shape function of that edge.
struct DofMap
{
    int flux_dofs = 0;
    int scalar_dofs = 0;
    std::vector<std::array<int, 3>> element_dofs;
    std::vector<std::array<double, 3>> sign;
};

inline DofMap build_dof_map(const Mesh& mesh)
{
    DofMap d;
    d.flux_dofs = mesh.num_edges();
    d.scalar_dofs = mesh.num_elements();
    d.element_dofs = mesh.element_edges;
    d.sign.resize(mesh.triangles.size());
    for (int t = 0; t < mesh.num_elements(); ++t)
        for (int i = 0; i < 3; ++i) d.sign[t][i] = mesh.orientation_sign(t, i);
    return d;
}

/// Mesh, interface classification and local bases for one method.
struct Discretization
{
    const Mesh* mesh = nullptr;
    Classification classification;
    DofMap dofs;
    Method method = Method::immersed;
    std::vector<LocalBasis> bases;

    const LocalBasis& basis(int t) const { return bases[t]; }

    /// Calls fn(sub_triangle, side) for the parts of element t on which the
    /// discrete fields are single RT0 pieces.
    template <class Fn>
    void for_each_region(int t, Fn&& fn) const
    {
        if (const CutTopology* cut = classification.cut_of(t)) {
            for (const Triangle& s : cut->plus_triangles) fn(s, Side::plus);
            for (const Triangle& s : cut->minus_triangles) fn(s, Side::minus);
        }
        else {
            fn(mesh->triangle(t), classification.element_side[t]);
        }
    }

    /// Discrete flux on element t from the global flux coefficients.
    PiecewiseRTFunction element_field(int t, const Eigen::VectorXd& flux) const
    {
        std::array<double, 3> c{};
        for (int i = 0; i < 3; ++i) c[i] = dofs.sign[t][i] * flux[dofs.element_dofs[t][i]];
        return expand(bases[t], c);
    }
};

/// Classifies the mesh against the interface (coefficients sampled from
/// beta) and builds the standard or immersed local bases.
inline Discretization discretize(const Mesh& mesh, const LevelSet& ls, const PiecewiseCoefficient& beta,
                                 Method method)
{
    Discretization d;
    d.mesh = &mesh;
    d.classification = classify_mesh(mesh, ls, -1.0, beta);
    d.dofs = build_dof_map(mesh);
    d.method = method;
    d.bases.reserve(mesh.triangles.size());
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const CutTopology* cut = method == Method::immersed ? d.classification.cut_of(t) : nullptr;
        d.bases.push_back(local_basis(mesh.triangle(t), cut));
    }
    return d;
}

inline Discretization discretize(const Mesh& mesh, const ProblemSpec& problem, Method method)
{
    return discretize(mesh, problem.level_set, problem.beta(), method);
}

/// Saddle-point system [[A, B^T], [B, 0]] [p; u] = [G; F].
struct MixedSystem
{
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> B;
    Eigen::VectorXd G;
    Eigen::VectorXd F;
    double eta = 0.0;

    int flux_size() const { return static_cast<int>(A.rows()); }
    int scalar_size() const { return static_cast<int>(B.rows()); }
    int size() const { return flux_size() + scalar_size(); }

    Eigen::SparseMatrix<double> matrix() const
    {
        const int n = flux_size(), m = scalar_size();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(A.nonZeros() + 2 * B.nonZeros()));
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
                trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        for (int k = 0; k < B.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it) {
                trip.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
                trip.emplace_back(static_cast<int>(it.col()), n + static_cast<int>(it.row()), it.value());
            }
        Eigen::SparseMatrix<double> K(n + m, n + m);
        K.setFromTriplets(trip.begin(), trip.end());
        return K;
    }

    Eigen::VectorXd rhs() const
    {
        Eigen::VectorXd r(size());
        r << G, F;
        return r;
    }
};

using Triplets = std::vector<Eigen::Triplet<double>>;

/// Local weighted mass matrix int beta_h phi_i . phi_j, with beta taken from
/// the side of the discrete interface each sub-triangle lies on.
inline Eigen::Matrix3d local_mass_matrix(const Discretization& disc, int t, const PiecewiseCoefficient& beta,
                                         int degree = 2)
{
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    const LocalBasis& basis = disc.basis(t);
    disc.for_each_region(t, [&](const Triangle& sub, Side side) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const auto& fi = basis.functions[i].piece(side);
                const auto& fj = basis.functions[j].piece(side);
                m(i, j) += integrate_triangle(sub, [&](const Vec2& x) { return beta(side, x) * fi(x).dot(fj(x)); },
                                              degree);
            }
        }
    });
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
    return m;
}

inline void assemble_a(const Discretization& disc, const PiecewiseCoefficient& beta, Triplets& out)
{
    const auto& d = disc.dofs;
    for (int t = 0; t < disc.mesh->num_elements(); ++t) {
        const Eigen::Matrix3d m = local_mass_matrix(disc, t, beta);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.emplace_back(d.element_dofs[t][i], d.element_dofs[t][j], d.sign[t][i] * d.sign[t][j] * m(i, j));
    }
}

/// Normal-trace jumps of the global basis functions across an interface
/// edge, split at the crossing point.  Entry (dof, portion) is the jump
/// along the canonical edge normal on that portion.
struct EdgeJump
{
    std::array<double, 2> length{};
    std::map<int, std::array<double, 2>> jump;
};

inline EdgeJump edge_jump(const Discretization& disc, int e)
{
    const Mesh& mesh = *disc.mesh;
    const Classification& cls = disc.classification;
    const Vec2& a = mesh.vertices[mesh.edges[e][0]];
    const Vec2& b = mesh.vertices[mesh.edges[e][1]];
    const Vec2& n = mesh.edge_normals[e];
    const EdgeCut& ec = cls.edge_cut[e];

    EdgeJump out;
    std::array<Vec2, 2> mid;
    std::array<Side, 2> side{Side::minus, Side::minus};
    if (ec.cut) {
        out.length = {ec.t * (b - a).norm(), (1.0 - ec.t) * (b - a).norm()};
        mid = {0.5 * (a + ec.point), 0.5 * (ec.point + b)};
        side = {cls.vertex_side[mesh.edges[e][0]], cls.vertex_side[mesh.edges[e][1]]};
    }
    else {
        out.length = {(b - a).norm(), 0.0};
        mid = {0.5 * (a + b), 0.5 * (a + b)};
    }
    for (int owner = 0; owner < 2; ++owner) {
        const int t = mesh.edge_elements[e][owner];
        if (t < 0) continue;
        const double weight = owner == 0 ? 1.0 : -1.0;
        const LocalBasis& basis = disc.basis(t);
        if (!ec.cut) {
            // Uncut edges lie in one piece; pick it from the chord side.
            const Side s = cls.is_interface(t) ? cls.cut_of(t)->side_of(mid[0]) : cls.element_side[t];
            side = {s, s};
        }
        for (int k = 0; k < 3; ++k) {
            auto& j = out.jump[disc.dofs.element_dofs[t][k]];
            for (int p = 0; p < 2; ++p)
                j[p] += weight * disc.dofs.sign[t][k] * basis.functions[k].piece(side[p])(mid[p]).dot(n);
        }
    }
    return out;
}

/// eta times the sum over interface edges of int_e [p.n_e][q.n_e], with no
/// edge-length scaling.
inline void assemble_penalty(const Discretization& disc, double eta, Triplets& out)
{
    if (eta == 0.0) return;
    for (int e : disc.classification.interface_edges) {
        const EdgeJump ej = edge_jump(disc, e);
        for (const auto& [gi, ji] : ej.jump)
            for (const auto& [gj, jj] : ej.jump) {
                const double v = eta * (ej.length[0] * ji[0] * jj[0] + ej.length[1] * ji[1] * jj[1]);
                if (v != 0.0) out.emplace_back(gi, gj, v);
            }
    }
}

/// B(T, edge) = int_T div(global basis function of edge).
inline Eigen::SparseMatrix<double> assemble_b(const Discretization& disc)
{
    const Mesh& mesh = *disc.mesh;
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(3 * mesh.num_elements()));
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const double area = mesh.triangle(t).area();
        for (int k = 0; k < 3; ++k)
            trip.emplace_back(t, disc.dofs.element_dofs[t][k],
                              disc.dofs.sign[t][k] * disc.basis(t).functions[k].plus.divergence() * area);
    }
    Eigen::SparseMatrix<double> B(mesh.num_elements(), disc.dofs.flux_dofs);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

/// Integral of f over element t, split along the chord on interface
/// elements.  Degree 6 on two levels of refinement keeps the error of loads
/// such as 9|x| below 1e-10 on coarse meshes.
inline double load_integral(const Discretization& disc, int t, const ScalarField& f_plus, const ScalarField& f_minus)
{
    double s = 0.0;
    disc.for_each_region(t, [&](const Triangle& sub, Side side) {
        s += integrate_triangle_refined(sub, side == Side::plus ? f_plus : f_minus, 6, 2);
    });
    return s;
}

/// G_e = int_{boundary} g q_e . n (natural Dirichlet term), F_T = -int_T f.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> assemble_rhs(const Discretization& disc,
                                                                const ProblemSpec& problem)
{
    const Mesh& mesh = *disc.mesh;
    const Classification& cls = disc.classification;
    Eigen::VectorXd G = Eigen::VectorXd::Zero(disc.dofs.flux_dofs);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.num_elements());

    for (int t = 0; t < mesh.num_elements(); ++t) F[t] = -load_integral(disc, t, problem.f_plus, problem.f_minus);

    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.boundary[e]) continue;
        const int t = mesh.edge_elements[e][0];
        const int i = mesh.local_edge(t, e);
        const Triangle tri = mesh.triangle(t);
        const Vec2 n = tri.outward_normal(i);
        const CutTopology* cut = cls.cut_of(t);
        const Side side = cut ? cut->edge_portions[i].first : cls.element_side[t];
        const double g_mean = integrate_segment(tri.edge_start(i), tri.edge_end(i), problem.boundary_g, 4);
        for (int k = 0; k < 3; ++k) {
            // RT0 normal traces are constant along a straight edge.
            const double trace = disc.basis(t).functions[k].piece(side)(tri.edge_start(i)).dot(n);
            G[disc.dofs.element_dofs[t][k]] += disc.dofs.sign[t][k] * trace * g_mean;
        }
    }
    return {G, F};
}

inline MixedSystem assemble_system(const Discretization& disc, const ProblemSpec& problem, double eta)
{
    if (eta < 0.0) throw std::invalid_argument("assemble_system: eta must be nonnegative");
    const PiecewiseCoefficient beta = problem.beta();
    MixedSystem sys;
    sys.eta = eta;

    Triplets trip;
    trip.reserve(static_cast<std::size_t>(9 * disc.mesh->num_elements()));
    assemble_a(disc, beta, trip);
    if (disc.method == Method::immersed) assemble_penalty(disc, eta, trip);
    sys.A.resize(disc.dofs.flux_dofs, disc.dofs.flux_dofs);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.B = assemble_b(disc);
    std::tie(sys.G, sys.F) = assemble_rhs(disc, problem);

    if (sys.B.cols() != sys.A.rows() || sys.G.size() != sys.A.rows() || sys.F.size() != sys.B.rows())
        throw std::logic_error("assemble_system: block dimension mismatch");
    return sys;
}

} // namespace irt
