#pragma once

// Determination of the unique boundary parameter w0 that makes the radial
// solution symmetric under t -> 1/t, by two independent routes: the closed
// Gamma-ratio formula obtained through the Legendre transform, and direct
// numerical shooting on the matching condition w'(1) = w(1)/2. Also
// assembles the global matched solution on (t_min, 1/t_min).

#include <cmath>
#include <stdexcept>

#include "namma/ode_core.hpp"
#include "namma/roots.hpp"
#include "namma/specfun.hpp"

namespace namma::matching {

using detail::no_root_error;

/// Right endpoint p* = (n/(2(n-1)w0^2))^{1/n} of the slope range of W.
inline double p_star(int n, double w0) {
    if (!(w0 > 0.0)) throw std::domain_error("p_star: requires w0 > 0");
    return ode::slope_limit(n, w0);
}

/// Rescaled convex conjugate g(y) on [0,1],
///   g(y) = -2F1[1/2, -1/n; (n-1)/n; y^n] + (p*/w0) y,
/// satisfying (y g' - g)^2 (1 - y^n) = 1 with g(0) = -1.
inline double legendre_g(double y, int n, double w0) {
    if (y < 0.0 || y > 1.0)
        throw std::domain_error("legendre_g: y outside [0,1]");
    const double hyp =
        specfun::hyp2f1(0.5, -1.0 / n, double(n - 1) / n, std::pow(y, n));
    return -hyp + p_star(n, w0) / w0 * y;
}

struct LegendreProfile {
    int n;
    double w0;
    double pstar;
    double g(double y) const { return legendre_g(y, n, w0); }
};

inline LegendreProfile legendre_profile(int n, double w0) {
    return {n, w0, p_star(n, w0)};
}

/// The matched boundary value in closed form,
///   w0 = (1/2)^{(n+1)/(n+2)} (n/(n-1))^{1/(n+2)}
///        (Gamma(1/2-1/n) / (sqrt(pi) Gamma(1-1/n)))^{n/(n+2)}.
/// For n = 2 the matching condition has no positive solution.
inline double closed_form_w0(int n) {
    if (n < 3)
        throw std::domain_error(
            "closed_form_w0: no positive solution for n < 3");
    const double invn = 1.0 / n;
    const double gamma_ratio = specfun::gamma_fn(0.5 - invn) /
                               (std::sqrt(M_PI) * specfun::gamma_fn(1.0 - invn));
    return std::pow(0.5, double(n + 1) / (n + 2)) *
           std::pow(double(n) / (n - 1), 1.0 / (n + 2)) *
           std::pow(gamma_ratio, double(n) / (n + 2));
}

/// The t -> 1 limits (w(1), w'(1)) extracted from the Legendre transform:
/// w(1) = p*, w'(1) = w0 g(1).
inline std::pair<double, double> w_boundary_values(int n, double w0) {
    return {p_star(n, w0), w0 * legendre_g(1.0, n, w0)};
}

struct MatchResult {
    int n;
    double w0_closed;
    double w0_shot;
    double w_at_one;
    double wp_at_one;
    double residual;  // w'(1) - w(1)/2 at w0_shot
};

/// Shooting discrepancy phi(w0) = w'(1) - w(1)/2 by direct integration
/// from a series seed at t_start.
inline double shooting_discrepancy(int n, double w0, double tol = 1e-11,
                                   double t_start = 1e-4) {
    const auto sol = ode::integrate_w(n, w0, t_start, 1.0, tol, {1.0});
    const auto& last = sol.grid.back();
    return last.wp - 0.5 * last.w;
}

/// Root of phi by bracketed bisection/secant. Throws no_root_error when the
/// bracket carries no sign change (the n = 2 situation).
inline MatchResult shoot_w0(int n, std::pair<double, double> bracket,
                            double tol = 1e-9) {
    auto phi = [n](double w0) { return shooting_discrepancy(n, w0); };
    const double root =
        detail::find_root(phi, bracket.first, bracket.second, tol);
    const auto sol = ode::integrate_w(n, root, 1e-4, 1.0, 1e-11, {1.0});
    const auto& last = sol.grid.back();
    double closed = std::numeric_limits<double>::quiet_NaN();
    if (n >= 3) closed = closed_form_w0(n);
    return {n, closed, root, last.w, last.wp, last.wp - 0.5 * last.w};
}

inline MatchResult shoot_w0(int n, double tol = 1e-9) {
    return shoot_w0(n, {0.2, 5.0}, tol);
}

/// Global symmetric solution on (t_min, 1/t_min): integrate with the shot
/// w0 up to t = 1, extend by the t -> 1/t reflection.
inline ode::RadialSolution matched_solution(int n, double t_min, double tol,
                                            std::vector<double> output_times = {}) {
    if (!(t_min > 0.0 && t_min < 1.0))
        throw std::domain_error("matched_solution: need t_min in (0,1)");
    const MatchResult m = shoot_w0(n);
    std::vector<double> fwd;
    fwd.push_back(1.0);
    for (double t : output_times)
        if (t > t_min && t <= 1.0) fwd.push_back(t);
    ode::RadialSolution lower =
        ode::integrate_w(n, m.w0_shot, t_min, 1.0, tol, fwd);
    ode::RadialSolution upper = ode::symmetry_reflect(lower);
    // Splice at t = 1; the junction sample is shared.
    ode::RadialSolution full{n, m.w0_shot, std::move(lower.grid), tol};
    for (std::size_t i = 1; i < upper.grid.size(); ++i)
        full.grid.push_back(upper.grid[i]);
    return full;
}

}  // namespace namma::matching
