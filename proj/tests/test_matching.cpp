#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "namma/matching.hpp"

using namespace namma;
using namespace namma::matching;

// closed_form_w0 values frozen from a 50-digit evaluation
namespace golden {
constexpr double w0_n3 = 1.0318014007198792026793909117703;
constexpr double w0_n4 = 0.82853912596827315448954926461245;
constexpr double w0_n5 = 0.74305752903102844584892051315973;
}  // namespace golden

TEST_CASE("p_star") {
    CHECK(p_star(3, std::sqrt(3.0 / 4.0)) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(p_star(3, 1.0) ==
          doctest::Approx(std::pow(0.75, 1.0 / 3.0)).epsilon(1e-13));
    // cross-check against the slope limit of the implicit solution
    const auto q = ode::frak_implicit(1e6, 3, 1.0);
    CHECK(p_star(3, 1.0) == doctest::Approx(q.frak_wp).epsilon(1e-5));
    // n -> infinity limit at w0 = 1/2
    CHECK(p_star(512, 0.5) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK_THROWS_AS(p_star(3, 0.0), std::domain_error);
}

TEST_CASE("legendre_g endpoints") {
    for (int n : {3, 4, 6}) {
        const double w0 = 0.9;
        CHECK(legendre_g(0.0, n, w0) == doctest::Approx(-1.0).epsilon(1e-13));
        const double expected =
            p_star(n, w0) / w0 -
            specfun::gamma_fn(1.0 - 1.0 / n) * std::sqrt(M_PI) /
                specfun::gamma_fn(0.5 - 1.0 / n);
        CHECK(legendre_g(1.0, n, w0) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("legendre_g satisfies the recast ODE (y g' - g)^2 (1-y^n) = 1") {
    const double h = 1e-5;
    for (int n : {3, 4, 5}) {
        for (double w0 : {0.8, 1.0}) {
            for (double y : {0.2, 0.5, 0.8}) {
                const double gp = (legendre_g(y + h, n, w0) -
                                   legendre_g(y - h, n, w0)) /
                                  (2.0 * h);
                const double g = legendre_g(y, n, w0);
                const double lhs = (y * gp - g) * (y * gp - g) *
                                   (1.0 - std::pow(y, n));
                CHECK(lhs == doctest::Approx(1.0).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("closed_form_w0 golden values and limit trend") {
    CHECK(closed_form_w0(3) == doctest::Approx(golden::w0_n3).epsilon(1e-12));
    CHECK(closed_form_w0(4) == doctest::Approx(golden::w0_n4).epsilon(1e-12));
    CHECK(closed_form_w0(5) == doctest::Approx(golden::w0_n5).epsilon(1e-12));
    CHECK(std::abs(closed_form_w0(64) - 0.5) <
          std::abs(closed_form_w0(8) - 0.5));
    CHECK_THROWS_AS(closed_form_w0(2), std::domain_error);
}

TEST_CASE("|w0(n) - 1/2| strictly decreasing") {
    double prev = std::abs(closed_form_w0(8) - 0.5);
    for (int n : {16, 32, 64}) {
        const double cur = std::abs(closed_form_w0(n) - 0.5);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("shooting agrees with the closed form") {
    const auto m = shoot_w0(3, {0.5, 2.0}, 1e-9);
    CHECK(std::abs(m.w0_shot - m.w0_closed) <= 1e-6);
    CHECK(std::abs(m.residual) <= 1e-7);
    CHECK(m.w_at_one == doctest::Approx(p_star(3, m.w0_shot)).epsilon(1e-6));
}

TEST_CASE("no root for n = 2: discrepancy positive everywhere") {
    for (double w0 : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(shooting_discrepancy(2, w0) > 0.0);
    }
    CHECK_THROWS_AS(shoot_w0(2, {0.1, 10.0}, 1e-9), no_root_error);
}

TEST_CASE("n = 2 boundary values from the Legendre transform") {
    const double w0 = 1.3;
    const auto [w1, wp1] = w_boundary_values(2, w0);
    CHECK(w1 == doctest::Approx(p_star(2, w0)).epsilon(1e-12));
    CHECK(wp1 == doctest::Approx(p_star(2, w0)).epsilon(1e-12));
}

TEST_CASE("w_boundary_values match direct integration") {
    const int n = 3;
    const double w0 = 1.0;
    const auto [w1, wp1] = w_boundary_values(n, w0);
    const auto sol = ode::integrate_w(n, w0, 1e-4, 1.0, 1e-11, {1.0});
    const auto& last = sol.grid.back();
    CHECK(last.w == doctest::Approx(w1).epsilon(1e-7));
    CHECK(last.wp == doctest::Approx(wp1).epsilon(1e-6));
}

TEST_CASE("matched boundary values obey the matching condition") {
    const auto m = shoot_w0(4);
    const auto [w1, wp1] = w_boundary_values(4, m.w0_closed);
    CHECK(wp1 / w1 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("legendre involution reconstructs the primal profile") {
    // W(s) = p dW*/dp - W* at p = dW/ds; pick sample slopes via s values.
    const int n = 3;
    const double w0 = closed_form_w0(n);
    const double ps = p_star(n, w0);
    const double h = 1e-6;
    // s is capped: for larger s the matching slope approaches 1 and the
    // central difference of g loses accuracy to the square-root cusp there.
    for (double s : {1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 8.0, 12.0, 16.0, 20.0}) {
        const auto q = ode::frak_implicit(s, n, w0);
        const double y = q.frak_wp / ps;
        // dW*/dp = (w0/p*) dg/dy = s at the matching slope
        const double gp =
            (legendre_g(y + h, n, w0) - legendre_g(y - h, n, w0)) / (2.0 * h);
        const double s_rec = w0 / ps * gp;
        const double w_rec = q.frak_wp * s_rec - w0 * legendre_g(y, n, w0);
        CHECK(w_rec == doctest::Approx(q.frak_w).epsilon(1e-7));
    }
}

TEST_CASE("matched solution is symmetric and C1 across t = 1") {
    const int n = 3;
    const double t_min = 0.05;
    auto sol = matched_solution(n, t_min, 1e-10);
    CHECK(sol.t_max() == doctest::Approx(1.0 / t_min).epsilon(1e-12));
    // w(1/t) = w(t)/t over the grid
    for (double t : {0.1, 0.3, 0.7, 0.95}) {
        const double lhs = sol.eval(1.0 / t).w;
        const double rhs = sol.eval(t).w / t;
        CHECK(std::abs(lhs - rhs) <= 1e-7);
    }
    // junction continuity
    const auto just_below = sol.eval(1.0 - 1e-9);
    const auto just_above = sol.eval(1.0 + 1e-9);
    CHECK(std::abs(just_below.w - just_above.w) < 1e-7);
    CHECK(std::abs(just_below.wp - just_above.wp) < 1e-7);
    // residual and positivity uniformly, including across t = 1
    for (const auto& s : sol.grid) {
        CHECK(std::abs(ode::ode_residual_w(s.t, s.w, s.wp, s.wpp, n)) <=
              1e-10);
        CHECK(s.w > 0.0);
        CHECK(s.wpp > 0.0);
        CHECK(s.w + (1.0 - s.t) * s.wp > 0.0);
    }
}

TEST_CASE("route independence across dimensions") {
    for (int n : {3, 4, 5, 6, 7, 8}) {
        const auto m = shoot_w0(n);
        CHECK(std::abs(m.w0_shot - m.w0_closed) <= 1e-6);
    }
}
