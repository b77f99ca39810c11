#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "namma/matching.hpp"
#include "namma/potential.hpp"

using namespace namma;
using namespace namma::potential;

namespace {

const ode::RadialSolution& matched3() {
    static const ode::RadialSolution sol =
        matching::matched_solution(3, 0.01, 1e-10);
    return sol;
}

}  // namespace

TEST_CASE("ModelParams validation") {
    CHECK_THROWS_AS(ModelParams(2, 1, 1), std::domain_error);
    CHECK_THROWS_AS(ModelParams(3, 0, 1), std::domain_error);
}

TEST_CASE("homogeneity u(lambda x) = lambda^{(n+2)/n} u(x)") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const auto s1 = sample_potential(p, sol, 100.0, 50.0);
    const auto s2 = sample_potential(p, sol, 200.0, 100.0);
    const double scale = std::pow(2.0, 5.0 / 3.0);
    CHECK(s2.u == doctest::Approx(scale * s1.u).epsilon(1e-10));
}

TEST_CASE("Hessian against central finite differences of u") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const double x1 = 100.0, x2 = 50.0;
    const double h = 1e-4 * x1;
    auto u = [&](double a, double b) {
        return sample_potential(p, sol, a, b).u;
    };
    const auto s = sample_potential(p, sol, x1, x2);
    const double u11 =
        (u(x1 + h, x2) - 2.0 * u(x1, x2) + u(x1 - h, x2)) / (h * h);
    const double u22 =
        (u(x1, x2 + h) - 2.0 * u(x1, x2) + u(x1, x2 - h)) / (h * h);
    const double u12 = (u(x1 + h, x2 + h) - u(x1 + h, x2 - h) -
                        u(x1 - h, x2 + h) + u(x1 - h, x2 - h)) /
                       (4.0 * h * h);
    CHECK(s.hess[0][0] == doctest::Approx(u11).epsilon(1e-5));
    CHECK(s.hess[1][1] == doctest::Approx(u22).epsilon(1e-5));
    CHECK(s.hess[0][1] == doctest::Approx(u12).epsilon(1e-5));
}

TEST_CASE("Hessian finite differences across the admissible cone") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const double x1 = 80.0;
    for (double t = 0.1; t < 10.0; t *= 1.2) {
        const double x2 = t * x1;
        const double h = 1e-4 * x1;
        auto u = [&](double a, double b) {
            return sample_potential(p, sol, a, b).u;
        };
        const auto s = sample_potential(p, sol, x1, x2);
        const double u12 = (u(x1 + h, x2 + h) - u(x1 + h, x2 - h) -
                            u(x1 - h, x2 + h) + u(x1 - h, x2 - h)) /
                           (4.0 * h * h);
        CHECK(s.hess[0][1] == doctest::Approx(u12).epsilon(1e-5));
    }
}

TEST_CASE("gradient magnitude scales as |x|^{2/n}") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    double prev = 0.0;
    double slope_acc = 0.0;
    int count = 0;
    for (double lam : {1.0, 10.0, 100.0}) {
        const auto s = sample_potential(p, sol, 50.0 * lam, 40.0 * lam);
        const double mag = std::hypot(s.du[0], s.du[1]);
        if (prev > 0.0) {
            slope_acc += std::log10(mag / prev);
            ++count;
        }
        prev = mag;
    }
    CHECK(slope_acc / count == doctest::Approx(2.0 / 3.0).epsilon(0.01));
}

TEST_CASE("Monge-Ampere residual vanishes on the matched solution") {
    struct Cfg {
        int n, d1, d2;
    };
    for (const auto& cfg : {Cfg{3, 1, 1}, Cfg{3, 1, 2}, Cfg{4, 2, 1},
                            Cfg{5, 1, 1}}) {
        const ModelParams p(cfg.n, cfg.d1, cfg.d2);
        const auto sol = matching::matched_solution(cfg.n, 0.01, 1e-10);
        const double c = nama_constant(p);
        for (double t = 0.05; t <= 20.0; t *= 1.35) {
            const double x1 = 100.0;
            const double x2 = t * cfg.d2 * x1 / cfg.d1;
            const auto s = sample_potential(p, sol, x1, x2);
            CHECK(std::abs(nama_residual(s, p)) / c <= 1e-6);
            const auto [hp, cp] = kahler_flags(s, p);
            CHECK(hp);
            CHECK(cp);
        }
    }
}

TEST_CASE("rank-deficient hand-built sample") {
    // u = (x1+x2)^2 has a singular Hessian.
    const ModelParams p(3, 1, 1);
    PotentialSample s{};
    s.x1 = 2.0;
    s.x2 = 1.0;
    s.u = 9.0;
    s.du = {6.0, 6.0};
    s.hess = {{{2.0, 2.0}, {2.0, 2.0}}};
    CHECK(nama_residual(s, p) ==
          doctest::Approx(-nama_constant(p)).epsilon(1e-13));
}

TEST_CASE("negative v'' breaks hess positivity") {
    const ModelParams p(3, 1, 1);
    PotentialSample s{};
    s.x1 = 1.0;
    s.x2 = 1.0;
    s.du = {1.0, 1.0};
    s.hess = {{{1.0, 0.0}, {0.0, -0.5}}};  // v'' < 0 makes u_{22} < 0
    const auto [hp, cp] = kahler_flags(s, p);
    CHECK_FALSE(hp);
    CHECK(cp);
}

TEST_CASE("swap symmetry (x1,d1) <-> (x2,d2) with the reflected solution") {
    const ModelParams p(3, 1, 2);
    const ModelParams p_swapped(3, 2, 1);
    const auto sol = matching::matched_solution(3, 0.01, 1e-10);
    const auto ref = ode::symmetry_reflect(sol);
    const double x1 = 100.0, x2 = 30.0;
    const auto s = sample_potential(p, sol, x1, x2);
    const auto s_swapped = sample_potential(p_swapped, ref, x2, x1);
    CHECK(std::abs(nama_residual(s, p) - nama_residual(s_swapped, p_swapped)) <=
          1e-9);
    const auto f1 = kahler_flags(s, p);
    const auto f2 = kahler_flags(s_swapped, p_swapped);
    CHECK(f1 == f2);
}

TEST_CASE("v0_a identity v0 a^{n-1} = (n/(n+2))^3") {
    for (double w0 : {0.5, 1.0, 2.0}) {
        const auto [v0, a] = v0_a(3, w0);
        CHECK(v0 * a * a == doctest::Approx(0.216).epsilon(1e-12));
    }
    const auto [v0u, au] = v0_a(3, 5.0 / 3.0);
    CHECK(v0u == doctest::Approx(1.0).epsilon(1e-13));
    // matched n = 3 values, frozen from a 30-digit evaluation
    const auto [v0m, am] = v0_a(3, matching::closed_form_w0(3));
    CHECK(v0m == doctest::Approx(0.449689008517896683292).epsilon(1e-12));
    CHECK(am == doctest::Approx(0.693059848539904206106).epsilon(1e-12));
}

TEST_CASE("boundary expansion against the exact potential") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const auto ser = ode::series_near_one(3, sol.w0, 8);
    const double x1 = 100.0;
    const double t = 0.01;
    const double x2 = t * x1;
    const double exact = sample_potential(p, sol, x1, x2).u;
    const double approx = boundary_expansion_u(p, ser, x1, x2, 2);
    CHECK(std::abs(approx - exact) / std::abs(exact) <= 1e-5);
    // convergence in the order at fixed small t
    double prev_err = 1e300;
    for (int order = 1; order <= 4; ++order) {
        const double err =
            std::abs(boundary_expansion_u(p, ser, x1, x2, order) - exact);
        CHECK(err < prev_err + 1e-14);
        prev_err = err;
    }
}

TEST_CASE("leading term of the expansion") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const auto ser = ode::series_near_one(3, sol.w0, 4);
    const auto [v0, a] = v0_a(3, sol.w0);
    const double x1 = 100.0, x2 = 1e-7;
    const double lead = v0 * std::pow(x1 - x2, 5.0 / 3.0);
    CHECK(boundary_expansion_u(p, ser, x1, x2, 1) ==
          doctest::Approx(lead).epsilon(1e-8));
}

TEST_CASE("order-1 truncation error scales as t^{2n/(n-1)} x1^{(n+2)/n}") {
    const ModelParams p(3, 1, 1);
    const auto sol = matching::matched_solution(3, 5e-4, 1e-10);
    const auto ser = ode::series_near_one(3, sol.w0, 8);
    const double x1 = 100.0;
    double e2 = 0.0, e3 = 0.0;
    for (double t : {1e-2, 1e-3}) {
        const double x2 = t * x1;
        const double err =
            std::abs(boundary_expansion_u(p, ser, x1, x2, 1) -
                     sample_potential(p, sol, x1, x2).u);
        (t == 1e-2 ? e2 : e3) = err;
    }
    const double slope = std::log10(e2 / e3);
    CHECK(slope == doctest::Approx(3.0).epsilon(0.02));  // 2n/(n-1) = 3
}

TEST_CASE("length scales") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const auto s = sample_potential(p, sol, 1e4, 1e4);
    const auto ls = length_scales(p, s);
    CHECK(ls.vol_exponent == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(ls.torus_diam < ls.fiber_diam);
    CHECK(ls.fiber_diam < ls.dist);
    // torus_diam(lambda x)/torus_diam(x) ~ lambda^{(2-n)/(2n)}
    const auto s2 = sample_potential(p, sol, 1e6, 1e6);
    const double ratio = length_scales(p, s2).torus_diam / ls.torus_diam;
    CHECK(ratio == doctest::Approx(std::pow(100.0, -1.0 / 6.0)).epsilon(0.05));
}

TEST_CASE("degenerate single-variable profile solves its equation") {
    for (int n : {3, 4, 5}) {
        double first = calabi_ansatz_m1_residual(n, 0.1);
        for (double x : {0.1, 1.0, 10.0}) {
            CHECK(std::abs(calabi_ansatz_m1_residual(n, x)) < 1e-12);
            CHECK(std::abs(calabi_ansatz_m1_residual(n, x) - first) < 1e-12);
        }
    }
    // n = 3, x = 1: u' = 4/3, u'' = 4/9, so u'' u'^2 = 4^3/3^4
    const double expected = 64.0 / 81.0;
    const double alpha = 4.0 / 3.0;
    CHECK(alpha / 3.0 * alpha * alpha ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(calabi_ansatz_m1_residual(3, -1.0), std::domain_error);
}

TEST_CASE("hessian metric: symmetry, determinant relation, homogeneity") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    const auto s = sample_potential(p, sol, 120.0, 60.0);
    const auto g = hessian_metric(s);
    CHECK(g[0][1] == g[1][0]);
    const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    const double cls = p.d1 * s.du[0] + p.d2 * s.du[1];
    CHECK(det * std::pow(cls, p.n - 2) ==
          doctest::Approx(nama_constant(p)).epsilon(1e-6));
    // g(lambda x) = lambda^{(2-n)/n} g(x)
    const auto s10 = sample_potential(p, sol, 1200.0, 600.0);
    const double scale = std::pow(10.0, -1.0 / 3.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(s10.hess[i][j] ==
                  doctest::Approx(scale * s.hess[i][j]).epsilon(1e-8));
}

TEST_CASE("out-of-range t is rejected") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    CHECK_THROWS_AS(sample_potential(p, sol, 1.0, 1000.0), std::range_error);
}

TEST_CASE("class coefficient stays positive toward the t -> 0 boundary") {
    const ModelParams p(3, 1, 1);
    const auto& sol = matched3();
    for (double t : {0.011, 0.02, 0.05}) {
        const auto s = sample_potential(p, sol, 100.0, 100.0 * t);
        CHECK(kahler_flags(s, p).second);
    }
}
