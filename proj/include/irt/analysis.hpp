#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "solver.hpp"

namespace irt {

struct ErrorMeasures
{
    double err_p = 0.0;
    double err_u = 0.0;
    double jump_seminorm = 0.0;
    double mesh_norm = 0.0;
};

/// sqrt(sum over interface edges of int_e [q.n_e]^2) for the global flux
/// coefficients `flux`.
inline double jump_seminorm(const Discretization& disc, const Eigen::VectorXd& flux)
{
    double s = 0.0;
    for (int e : disc.classification.interface_edges) {
        const EdgeJump ej = edge_jump(disc, e);
        std::array<double, 2> jump{};
        for (const auto& [g, j] : ej.jump) {
            jump[0] += flux[g] * j[0];
            jump[1] += flux[g] * j[1];
        }
        s += ej.length[0] * jump[0] * jump[0] + ej.length[1] * jump[1] * jump[1];
    }
    return std::sqrt(s);
}

/// Discrete L2 errors against the exact solution.  The exact fields follow
/// the true interface, the discrete ones the chord of each element.
inline ErrorMeasures l2_errors(const Discretization& disc, const ProblemSpec& problem, const MixedSolution& sol,
                               double eta = 0.0)
{
    ErrorMeasures out;
    double sp = 0.0, su = 0.0;
    for (int t = 0; t < disc.mesh->num_elements(); ++t) {
        const PiecewiseRTFunction ph = disc.element_field(t, sol.flux);
        const double uh = sol.scalar[t];
        disc.for_each_region(t, [&](const Triangle& sub, Side side) {
            const AffineVectorField& piece = ph.piece(side);
            sp += integrate_triangle(sub, [&](const Vec2& x) { return (problem.p(x) - piece(x)).squaredNorm(); }, 6);
            su += integrate_triangle(sub, [&](const Vec2& x) { return std::pow(problem.u(x) - uh, 2); }, 6);
        });
    }
    out.err_p = std::sqrt(sp);
    out.err_u = std::sqrt(su);
    out.jump_seminorm = jump_seminorm(disc, sol.flux);
    out.mesh_norm = std::sqrt(sp + eta * out.jump_seminorm * out.jump_seminorm);
    return out;
}

/// Mean of f over element t, split along the chord on interface elements.
inline double element_mean(const Discretization& disc, int t, const ScalarField& f_plus, const ScalarField& f_minus)
{
    return load_integral(disc, t, f_plus, f_minus) / disc.mesh->triangle(t).area();
}

/// max_T |div p_h + mean_T f|: the second discrete equation tested with the
/// indicator of each element.
inline double divergence_defect(const Discretization& disc, const ProblemSpec& problem, const MixedSolution& sol)
{
    double worst = 0.0;
    for (int t = 0; t < disc.mesh->num_elements(); ++t) {
        const double div = disc.element_field(t, sol.flux).plus.divergence();
        worst = std::max(worst, std::abs(div + element_mean(disc, t, problem.f_plus, problem.f_minus)));
    }
    return worst;
}

/// Local interpolant of a field with one closed form per side: the immersed
/// one on interface elements of an immersed discretization, RT0 elsewhere.
inline PiecewiseRTFunction local_interpolant(const Discretization& disc, int t, const VectorField& q_plus,
                                            const VectorField& q_minus)
{
    const Classification& cls = disc.classification;
    if (const CutTopology* cut = cls.cut_of(t)) {
        if (disc.method == Method::immersed) return ife_interpolate(q_plus, q_minus, *cut, disc.basis(t));
        // Traditional RT0 interpolates the discontinuous field with split edge integrals.
        std::array<double, 3> n{};
        for (int i = 0; i < 3; ++i) n[i] = dof_functional(q_plus, q_minus, *cut, i);
        return expand(disc.basis(t), n);
    }
    const VectorField& q = cls.element_side[t] == Side::plus ? q_plus : q_minus;
    return PiecewiseRTFunction::uniform(rt_interpolate(q, disc.mesh->triangle(t)));
}

/// max_T |div(Pi q)|_T - mean_T div q|.
inline double commuting_defect(const Discretization& disc, const VectorField& q, const ScalarField& div_q)
{
    double worst = 0.0;
    for (int t = 0; t < disc.mesh->num_elements(); ++t) {
        const double lhs = local_interpolant(disc, t, q, q).plus.divergence();
        const Triangle tri = disc.mesh->triangle(t);
        const double mean = integrate_triangle(tri, div_q, 6) / tri.area();
        worst = std::max(worst, std::abs(lhs - mean));
    }
    return worst;
}

/// ||p - Pi p|| over the domain.
inline double interpolation_error(const Discretization& disc, const ProblemSpec& problem)
{
    double s = 0.0;
    for (int t = 0; t < disc.mesh->num_elements(); ++t) {
        const PiecewiseRTFunction ip = local_interpolant(disc, t, problem.p_plus, problem.p_minus);
        disc.for_each_region(t, [&](const Triangle& sub, Side side) {
            const AffineVectorField& piece = ip.piece(side);
            s += integrate_triangle(sub, [&](const Vec2& x) { return (problem.p(x) - piece(x)).squaredNorm(); }, 6);
        });
    }
    return std::sqrt(s);
}

inline double observed_rate(double coarse, double fine) { return std::log2(coarse / fine); }

struct ErrorRow
{
    int N = 0;
    double err_p = 0.0;
    double err_u = 0.0;
    double jump_seminorm = 0.0;
    double mesh_norm = 0.0;
    double divergence_defect = 0.0;
    double residual = 0.0;
    double rate_p = std::numeric_limits<double>::quiet_NaN();
    double rate_u = std::numeric_limits<double>::quiet_NaN();
};

struct ErrorReport
{
    std::string problem;
    std::string method;
    double eta = 0.0;
    std::vector<ErrorRow> rows;

    /// Rates only between consecutive doublings of N.
    void compute_rates()
    {
        for (std::size_t k = 1; k < rows.size(); ++k) {
            if (rows[k].N != 2 * rows[k - 1].N) continue;
            rows[k].rate_p = observed_rate(rows[k - 1].err_p, rows[k].err_p);
            rows[k].rate_u = observed_rate(rows[k - 1].err_u, rows[k].err_u);
        }
    }

    std::vector<double> rates_p() const
    {
        std::vector<double> r;
        for (const auto& row : rows)
            if (!std::isnan(row.rate_p)) r.push_back(row.rate_p);
        return r;
    }

    const ErrorRow* row(int N) const
    {
        for (const auto& r : rows)
            if (r.N == N) return &r;
        return nullptr;
    }
};

inline void check_n_list(const std::vector<int>& n_list)
{
    if (n_list.empty()) throw ConfigError("N list is empty");
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        if (n_list[k] < 1) throw ConfigError("N must be positive");
        if (k > 0 && n_list[k] != 2 * n_list[k - 1])
            throw ConfigError("N list must double from one entry to the next");
    }
}

inline ErrorRow solve_and_measure(const ProblemSpec& problem, Method method, double eta, int n,
                                  const SolverOptions& opt = {})
{
    const Mesh mesh = build_uniform_mesh(n);
    const Discretization disc = discretize(mesh, problem, method);
    const MixedSystem sys = assemble_system(disc, problem, eta);
    const MixedSolution sol = solve(sys, opt);
    const ErrorMeasures m = l2_errors(disc, problem, sol, method == Method::immersed ? eta : 0.0);
    ErrorRow row;
    row.N = n;
    row.err_p = m.err_p;
    row.err_u = m.err_u;
    row.jump_seminorm = m.jump_seminorm;
    row.mesh_norm = m.mesh_norm;
    row.divergence_defect = divergence_defect(disc, problem, sol);
    row.residual = sol.residual;
    return row;
}

inline ErrorReport convergence_table(const ProblemSpec& problem, Method method, double eta,
                                     const std::vector<int>& n_list, const SolverOptions& opt = {})
{
    check_n_list(n_list);
    ErrorReport rep{problem.name, to_string(method), eta, {}};
    for (int n : n_list) rep.rows.push_back(solve_and_measure(problem, method, eta, n, opt));
    rep.compute_rates();
    return rep;
}

/// ||p - Pi^IFE p|| on a sequence of meshes; err_u and the jump stay zero.
inline ErrorReport interpolation_study(const ProblemSpec& problem, const std::vector<int>& n_list,
                                       Method method = Method::immersed)
{
    check_n_list(n_list);
    ErrorReport rep{problem.name, std::string("interpolation-") + to_string(method), 0.0, {}};
    for (int n : n_list) {
        const Mesh mesh = build_uniform_mesh(n);
        const Discretization disc = discretize(mesh, problem, method);
        ErrorRow row;
        row.N = n;
        row.err_p = interpolation_error(disc, problem);
        rep.rows.push_back(row);
    }
    rep.compute_rates();
    return rep;
}

// ---------------------------------------------------------------------------
// Output.

/// Four significant digits with an upper-case exponent, e.g. 3.033E-01.
inline std::string format_error(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3E", v);
    return buf;
}

inline std::string format_rate(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Round-trip precision so rates can be recomputed from the file.
inline std::string format_exact(double v)
{
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(const ErrorReport& rep, std::ostream& os)
{
    os << "N,err_p,rate_p,err_u,rate_u,jump_seminorm\n";
    for (const auto& r : rep.rows)
        os << r.N << ',' << format_exact(r.err_p) << ',' << format_exact(r.rate_p) << ',' << format_exact(r.err_u)
           << ',' << format_exact(r.rate_u) << ',' << format_exact(r.jump_seminorm) << '\n';
}

inline void write_table(const ErrorReport& rep, std::ostream& os)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s, %s, eta = %g\n", rep.problem.c_str(), rep.method.c_str(), rep.eta);
    os << buf;
    std::snprintf(buf, sizeof buf, "%6s  %-11s %6s  %-11s %6s  %-11s\n", "N", "||p-p_h||", "rate", "||u-u_h||",
                  "rate", "jump");
    os << buf;
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%6d  %-11s %6s  %-11s %6s  %-11s\n", r.N, format_error(r.err_p).c_str(),
                      format_rate(r.rate_p).c_str(), format_error(r.err_u).c_str(), format_rate(r.rate_u).c_str(),
                      format_error(r.jump_seminorm).c_str());
        os << buf;
    }
}

} // namespace irt
