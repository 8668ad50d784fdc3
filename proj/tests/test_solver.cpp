#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "irt/solver.hpp"

using namespace irt;

namespace {

struct Solved
{
    Mesh mesh;
    Discretization disc;
    MixedSystem sys;
};

std::unique_ptr<Solved> setup(const ProblemSpec& p, Method m, int n, double eta = 1.0)
{
    auto s = std::make_unique<Solved>();
    s->mesh = build_uniform_mesh(n);
    s->disc = discretize(s->mesh, p, m);
    s->sys = assemble_system(s->disc, p, eta);
    return s;
}

} // namespace

TEST(Solve, PatchReproducesLinearSolution)
{
    for (Backend b : {Backend::sparse_lu, Backend::schur_cg}) {
        const auto s = setup(patch_problem(), Method::immersed, 8);
        const MixedSolution sol = solve(s->sys, {b});
        EXPECT_LE(sol.residual, 1e-10);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < s->mesh.num_elements(); ++t) {
            const Triangle tri = s->mesh.triangle(t);
            double a = u(rng), c = u(rng);
            if (a + c > 1) {
                a = 1 - a;
                c = 1 - c;
            }
            const Vec2 x = tri.vertex[0] + a * (tri.vertex[1] - tri.vertex[0]) + c * (tri.vertex[2] - tri.vertex[0]);
            EXPECT_NEAR((s->disc.element_field(t, sol.flux)(x) - Vec2(1.0, 0.0)).norm(), 0.0, 1e-10);
            // The scalar unknown is the element mean of u = x1.
            EXPECT_NEAR(sol.scalar[t], tri.centroid().x(), 1e-10);
        }
    }
}

TEST(Solve, ZeroProblemGivesZero)
{
    const auto s = setup(zero_problem(), Method::immersed, 8);
    for (Backend b : {Backend::sparse_lu, Backend::schur_cg}) {
        const MixedSolution sol = solve(s->sys, {b});
        EXPECT_EQ(sol.flux.cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(sol.scalar.cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Solve, BackendsAgree)
{
    for (int n : {8, 16, 32}) {
        for (Method m : {Method::traditional, Method::immersed}) {
            const auto s = setup(example1(), m, n);
            const MixedSolution a = solve(s->sys, {Backend::sparse_lu});
            const MixedSolution b = solve(s->sys, {Backend::schur_cg});
            EXPECT_LE(a.residual, 1e-10);
            EXPECT_LE(b.residual, 1e-10);
            EXPECT_LE((a.flux - b.flux).cwiseAbs().maxCoeff(), 1e-8 * (1 + a.flux.cwiseAbs().maxCoeff()));
            EXPECT_LE((a.scalar - b.scalar).cwiseAbs().maxCoeff(), 1e-8 * (1 + a.scalar.cwiseAbs().maxCoeff()));
        }
    }
}

TEST(Solve, LinearInTheData)
{
    const auto s = setup(example2(), Method::immersed, 16);
    const MixedSolution a = solve(s->sys);
    MixedSystem scaled = s->sys;
    scaled.G *= 1e3;
    scaled.F *= 1e3;
    const MixedSolution b = solve(scaled);
    EXPECT_LE((b.flux - 1e3 * a.flux).cwiseAbs().maxCoeff(), 1e-8 * 1e3 * (1 + a.flux.cwiseAbs().maxCoeff()));
    EXPECT_LE((b.scalar - 1e3 * a.scalar).cwiseAbs().maxCoeff(), 1e-8 * 1e3 * (1 + a.scalar.cwiseAbs().maxCoeff()));
}

TEST(Solve, ResidualIsReportedHonestly)
{
    const auto s = setup(example1(), Method::immersed, 16);
    const MixedSolution sol = solve(s->sys);
    const Eigen::VectorXd x = (Eigen::VectorXd(sol.flux.size() + sol.scalar.size()) << sol.flux, sol.scalar).finished();
    const double r = (s->sys.matrix() * x - s->sys.rhs()).norm() / s->sys.rhs().norm();
    EXPECT_NEAR(sol.residual, r, 1e-14);
    EXPECT_LE(r, 1e-10);
}

TEST(Solve, SingularSystemIsReported)
{
    auto s = setup(example1(), Method::immersed, 8);
    // An element whose divergence row vanishes leaves its scalar unknown
    // free while its load stays nonzero.
    const int dead = 5;
    ASSERT_NE(s->sys.F[dead], 0.0);
    s->sys.B.prune([dead](Eigen::Index row, Eigen::Index, double) { return row != dead; });
    EXPECT_THROW(solve(s->sys, {Backend::sparse_lu}), SingularSystem);
    EXPECT_THROW(solve(s->sys, {Backend::schur_cg}), Error);
}

TEST(Solve, IterationCapIsReported)
{
    const auto s = setup(example1(), Method::immersed, 16);
    SolverOptions opt;
    opt.backend = Backend::schur_cg;
    opt.max_iterations = 1;
    EXPECT_THROW(solve(s->sys, opt), NonConvergence);
    opt.backend = Backend::sparse_lu;
    opt.tolerance = 1e-30;
    EXPECT_THROW(solve(s->sys, opt), SingularSystem);
}

TEST(Solve, BackendNames)
{
    EXPECT_EQ(parse_backend("sparse_lu"), Backend::sparse_lu);
    EXPECT_EQ(parse_backend("iterative"), Backend::schur_cg);
    EXPECT_THROW(parse_backend("cholesky"), ConfigError);
}
