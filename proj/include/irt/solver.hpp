#pragma once

#include <cstdio>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "assembly.hpp"

namespace irt {

enum class Backend { sparse_lu, schur_cg };

inline const char* to_string(Backend b) { return b == Backend::sparse_lu ? "sparse_lu" : "schur_cg"; }

inline Backend parse_backend(const std::string& s)
{
    if (s == "sparse_lu" || s == "direct") return Backend::sparse_lu;
    if (s == "schur_cg" || s == "iterative") return Backend::schur_cg;
    throw ConfigError("unknown solver backend '" + s + "'");
}

struct SolverOptions
{
    Backend backend = Backend::sparse_lu;
    double tolerance = 1e-10;
    int max_iterations = 5000;
    int refinement_steps = 3;
};

struct MixedSolution
{
    Eigen::VectorXd flux;
    Eigen::VectorXd scalar;
    double residual = 0.0;
    int iterations = 0;
};

/// ||K x - b|| / ||b||, or ||K x|| when b vanishes.
inline double relative_residual(const MixedSystem& sys, const Eigen::VectorXd& p, const Eigen::VectorXd& u)
{
    const Eigen::VectorXd r1 = sys.A * p + sys.B.transpose() * u - sys.G;
    const Eigen::VectorXd r2 = sys.B * p - sys.F;
    const double num = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    const double den = std::sqrt(sys.G.squaredNorm() + sys.F.squaredNorm());
    return den > 0.0 ? num / den : num;
}

namespace detail {

inline MixedSolution solve_direct(const MixedSystem& sys, const SolverOptions& opt)
{
    Eigen::SparseMatrix<double> K = sys.matrix();
    K.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU factorization failed: " + lu.lastErrorMessage());

    const Eigen::VectorXd b = sys.rhs();
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw SingularSystem("sparse LU solve failed");

    MixedSolution out;
    auto split = [&] {
        out.flux = x.head(sys.flux_size());
        out.scalar = x.tail(sys.scalar_size());
        out.residual = relative_residual(sys, out.flux, out.scalar);
    };
    split();
    for (int k = 0; k < opt.refinement_steps && out.residual > opt.tolerance; ++k) {
        x += lu.solve(Eigen::VectorXd(b - K * x));
        split();
        ++out.iterations;
    }
    if (!(out.residual <= opt.tolerance)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "relative residual %.3e above tolerance %.3e", out.residual, opt.tolerance);
        throw SingularSystem(msg);
    }
    return out;
}

/// Eliminates the flux with a Cholesky factor of A and runs conjugate
/// gradients on the Schur complement B A^{-1} B^T.
inline MixedSolution solve_schur(const MixedSystem& sys, const SolverOptions& opt)
{
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.A);
    if (llt.info() != Eigen::Success) throw SingularSystem("flux mass matrix is not positive definite");

    const Eigen::SparseMatrix<double> Bt = sys.B.transpose();
    auto schur = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return sys.B * llt.solve(Eigen::VectorXd(Bt * v));
    };

    // B A^{-1} B^T u = B A^{-1} G - F
    const Eigen::VectorXd rhs = sys.B * llt.solve(sys.G) - sys.F;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.scalar_size());
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd d = r;
    double rr = r.squaredNorm();
    const double stop = opt.tolerance * 1e-2 * std::max(rhs.norm(), 1e-300);

    MixedSolution out;
    for (; out.iterations < opt.max_iterations && std::sqrt(rr) > stop; ++out.iterations) {
        const Eigen::VectorXd sd = schur(d);
        const double curv = d.dot(sd);
        if (!(curv > 0.0)) throw SingularSystem("Schur complement is not positive definite");
        const double alpha = rr / curv;
        u += alpha * d;
        r -= alpha * sd;
        const double rr_new = r.squaredNorm();
        d = r + (rr_new / rr) * d;
        rr = rr_new;
    }
    out.scalar = u;
    out.flux = llt.solve(Eigen::VectorXd(sys.G - Bt * u));
    out.residual = relative_residual(sys, out.flux, out.scalar);
    if (!(out.residual <= opt.tolerance)) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "Schur CG stopped after %d iterations with relative residual %.3e",
                      out.iterations, out.residual);
        throw NonConvergence(msg);
    }
    return out;
}

} // namespace detail

inline MixedSolution solve(const MixedSystem& sys, const SolverOptions& opt = {})
{
    return opt.backend == Backend::sparse_lu ? detail::solve_direct(sys, opt) : detail::solve_schur(sys, opt);
}

} // namespace irt
