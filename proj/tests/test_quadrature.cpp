#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "irt/quadrature.hpp"

using namespace irt;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

/// int over T of l1^a l2^b l3^c = 2|T| a! b! c! / (a + b + c + 2)!
double barycentric_monomial_integral(const Triangle& t, int a, int b, int c)
{
    return 2.0 * t.area() * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

std::array<double, 3> barycentric(const Triangle& t, const Vec2& x)
{
    const double a = t.signed_area();
    const double l0 = 0.5 * cross(t.vertex[1] - x, t.vertex[2] - x) / a;
    const double l1 = 0.5 * cross(t.vertex[2] - x, t.vertex[0] - x) / a;
    return {l0, l1, 1.0 - l0 - l1};
}

Triangle random_triangle(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        Triangle t{{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))}};
        if (t.signed_area() < 0) std::swap(t.vertex[1], t.vertex[2]);
        if (t.area() > 0.05) return t;
    }
}

} // namespace

TEST(Rules, WeightsArePositiveAndSumToReferenceMeasure)
{
    for (int d = 1; d <= 6; ++d) {
        const auto& r = triangle_rule(d);
        double s = 0;
        for (double w : r.weights) {
            EXPECT_GT(w, 0.0);
            s += w;
        }
        EXPECT_NEAR(s, 0.5, 1e-14);
        EXPECT_GE(r.degree, d);
    }
    for (int d = 0; d <= 7; ++d) {
        const auto& r = segment_rule(d);
        double s = 0;
        for (double w : r.weights) {
            EXPECT_GT(w, 0.0);
            s += w;
        }
        EXPECT_NEAR(s, 1.0, 1e-14);
        EXPECT_GE(r.degree, d);
    }
}

TEST(Rules, ReferenceMonomialsExactToTheirDegree)
{
    const Triangle ref{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}};
    for (int d = 1; d <= 6; ++d)
        for (int i = 0; i <= d; ++i)
            for (int j = 0; i + j <= d; ++j) {
                const double exact = factorial(i) * factorial(j) / factorial(i + j + 2);
                const double q = integrate_triangle(ref, [&](const Vec2& x) { return std::pow(x.x(), i) * std::pow(x.y(), j); }, d);
                EXPECT_NEAR(q, exact, 1e-13 * std::max(1.0, exact)) << "degree " << d << " monomial " << i << "," << j;
            }
    for (int d = 0; d <= 7; ++d)
        for (int k = 0; k <= d; ++k) {
            const double q = integrate_segment(Vec2(0, 0), Vec2(1, 0), [&](const Vec2& x) { return std::pow(x.x(), k); }, d);
            EXPECT_NEAR(q, 1.0 / (k + 1), 1e-14);
        }
}

TEST(Rules, UnsupportedDegreesThrow)
{
    EXPECT_THROW(triangle_rule(0), UnsupportedDegree);
    EXPECT_THROW(triangle_rule(7), UnsupportedDegree);
    EXPECT_THROW(segment_rule(-1), UnsupportedDegree);
    EXPECT_THROW(segment_rule(8), UnsupportedDegree);
}

TEST(IntegrateTriangle, SpecExamples)
{
    const Triangle ref{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}};
    EXPECT_NEAR(integrate_triangle(ref, [](const Vec2& x) { return x.x() * x.x() * x.y(); }, 4), 1.0 / 60.0, 1e-15);
    const Triangle t{{Vec2(0.3, -0.2), Vec2(1.7, 0.4), Vec2(-0.1, 0.9)}};
    EXPECT_NEAR(integrate_triangle(t, [](const Vec2&) { return 1.0; }, 2), t.area(), 1e-15);
    const Vec2 v = integrate_triangle(t, [](const Vec2&) { return Vec2(3.0, -1.0); }, 4);
    EXPECT_NEAR((v - t.area() * Vec2(3.0, -1.0)).norm(), 0.0, 1e-14);
}

TEST(IntegrateTriangle, RandomPolynomialsOnRandomTriangles)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Triangle t = random_triangle(rng);
        for (int d : {2, 4, 6}) {
            // Random polynomial written in barycentric monomials of total degree <= d.
            std::vector<std::tuple<int, int, int, double>> terms;
            for (int a = 0; a <= d; ++a)
                for (int b = 0; a + b <= d; ++b)
                    for (int k = 0; a + b + k <= d; ++k) terms.emplace_back(a, b, k, c(rng));
            double exact = 0.0, scale = 0.0;
            for (const auto& [a, b, k, w] : terms) {
                exact += w * barycentric_monomial_integral(t, a, b, k);
                scale += std::abs(w) * barycentric_monomial_integral(t, a, b, k);
            }
            const double q = integrate_triangle(t, [&](const Vec2& x) {
                const auto l = barycentric(t, x);
                double s = 0.0;
                for (const auto& [a, b, k, w] : terms) s += w * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], k);
                return s;
            }, d);
            EXPECT_NEAR(q, exact, 1e-12 * scale);
        }
    }
}

class CutQuadrature : public ::testing::Test
{
protected:
    Triangle tri{{Vec2(0.25, 0.25), Vec2(0.75, 0.25), Vec2(0.25, 0.75)}};
    CutTopology cut = *cut_element(tri, circle_level_set(0.5));
};

TEST_F(CutQuadrature, PartitionsTheElement)
{
    auto one = [](const Vec2&) { return 1.0; };
    auto zero = [](const Vec2&) { return 0.0; };
    EXPECT_NEAR(integrate_cut_element(cut, one, one, 2), tri.area(), 1e-15);
    EXPECT_NEAR(integrate_cut_element(cut, one, zero, 2), polygon_area(cut.plus_polygon), 1e-15);
    auto f = [](const Vec2& x) { return std::exp(x.x()) * std::sin(3 * x.y()); };
    EXPECT_NEAR(integrate_cut_element(cut, f, f, 4), integrate_triangle(tri, f, 4),
                1e-3 * std::abs(integrate_triangle(tri, f, 4)));
    auto p = [](const Vec2& x) { return x.x() * x.x() * x.y() - x.y() * x.y(); };
    EXPECT_NEAR(integrate_cut_element(cut, p, p, 4), integrate_triangle(tri, p, 4),
                1e-12 * std::abs(integrate_triangle(tri, p, 4)));
}

TEST_F(CutQuadrature, PiecewiseConstantsMatchMonteCarlo)
{
    const double cp = 3.0, cm = -1.5;
    const double q = integrate_cut_element(cut, [&](const Vec2&) { return cp; }, [&](const Vec2&) { return cm; }, 2);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int samples = 1000000;
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) {
        double a = u(rng), b = u(rng);
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        const Vec2 x = tri.vertex[0] + a * (tri.vertex[1] - tri.vertex[0]) + b * (tri.vertex[2] - tri.vertex[0]);
        acc += (x - cut.d()).dot(cut.normal) >= 0.0 ? cp : cm;
    }
    const double mc = acc / samples * tri.area();
    EXPECT_NEAR(q, mc, 5e-4 * std::abs(cp) * tri.area());
}

TEST(IntegrateEdge, PiecewiseAndExactCases)
{
    const Vec2 a(0.1, 0.2), b(1.3, -0.7);
    const double len = (b - a).norm();
    const double t = 0.3;
    const double j1 = 2.0, j2 = -0.5;
    const double v = integrate_edge_piecewise(a, b, t, [&](const Vec2&) { return j1 * j1; },
                                              [&](const Vec2&) { return j2 * j2; }, 0);
    EXPECT_NEAR(v, j1 * j1 * t * len + j2 * j2 * (1 - t) * len, 1e-14);

    // f = 2 + 3 s along the edge, s the arclength: int = 2 L + 1.5 L^2.
    const Vec2 dir = (b - a) / len;
    auto lin = [&](const Vec2& x) { return 2.0 + 3.0 * (x - a).dot(dir); };
    EXPECT_NEAR(integrate_edge_piecewise(a, b, std::nullopt, lin, lin, 2), 2 * len + 1.5 * len * len, 1e-13);

    auto sq = [](const Vec2&) { return 1.0; };
    EXPECT_NEAR(integrate_edge_piecewise(a, b, 0.5, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return -1.0; }, 1),
                0.0, 1e-15);
    EXPECT_NEAR(integrate_edge_piecewise(a, b, 0.5, sq, sq, 1), len, 1e-15);

    EXPECT_THROW(integrate_edge_piecewise(a, b, 1.0, sq, sq, 1), std::invalid_argument);
    EXPECT_THROW(integrate_edge_piecewise(a, b, -0.2, sq, sq, 1), std::invalid_argument);
}
