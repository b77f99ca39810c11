#pragma once

// Self-contained real special functions: Gamma, Gauss hypergeometric 2F1 on
// [0,1], and the convex-profile integral F(x) = \int_1^x (1-y^-2)^{-1/n} dy
// in both its closed hypergeometric form and a direct quadrature form.
//
// All functions are pure and reentrant.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace namma::specfun {

namespace detail {

inline bool is_nonpositive_integer(double x, double eps = 1e-12) {
    return x <= 0.5 && std::abs(x - std::round(x)) < eps;
}

// Lanczos approximation (g = 7, 9 terms), with reflection for x < 0.5.
// Valid for all real x away from the poles at 0, -1, -2, ...
inline double gamma_any(double x) {
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

    if (is_nonpositive_integer(x))
        return std::numeric_limits<double>::quiet_NaN();

    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return M_PI / (std::sin(M_PI * x) * gamma_any(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i) acc += coef[i] / (z + i);
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

// Direct summation of the Gauss series. Assumes |z| < 1 (or a terminating
// numerator). Stops once the tail is negligible and the terms decrease.
inline double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    constexpr int max_terms = 100000;
    for (int k = 0; k < max_terms; ++k) {
        term *= (a + k) * (b + k) / ((k + 1.0) * (c + k)) * z;
        sum += term;
        const double mag = std::abs(term);
        if (mag == 0.0) return sum;
        if (mag < 1e-16 * std::abs(sum) && mag < prev_mag) return sum;
        prev_mag = mag;
    }
    throw std::runtime_error("hyp2f1: series failed to converge");
}

// 15-point Kronrod / 7-point Gauss pair on [-1,1] (positive abscissae).
struct GK15 {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};
};

template <typename F>
inline void gk15(const F& f, double lo, double hi, double& result, double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double res_g = fc * GK15::wg[3];
    double res_k = fc * GK15::wgk[7];
    for (int i = 0; i < 7; ++i) {
        const double x = h * GK15::xgk[i];
        const double fsum = f(c - x) + f(c + x);
        res_k += GK15::wgk[i] * fsum;
        if (i % 2 == 1) res_g += GK15::wg[i / 2] * fsum;
    }
    result = res_k * h;
    err = std::abs((res_k - res_g) * h);
}

template <typename F>
inline double adaptive_quad(const F& f, double lo, double hi, double tol,
                            int depth = 0) {
    double result, err;
    gk15(f, lo, hi, result, err);
    if (err <= tol || depth > 50) return result;
    const double mid = 0.5 * (lo + hi);
    return adaptive_quad(f, lo, mid, 0.5 * tol, depth + 1) +
           adaptive_quad(f, mid, hi, 0.5 * tol, depth + 1);
}

}  // namespace detail

struct HypParams {
    double a;
    double b;
    double c;
    double z;  // in [0,1]
};

/// Gamma function for x > 0, relative error below 1e-13.
inline double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: requires x > 0, got " +
                                std::to_string(x));
    return detail::gamma_any(x);
}

/// Gauss' evaluation of 2F1 at z = 1, requires c - a - b > 0.
/// Returns 0 when Gamma(c-a) or Gamma(c-b) sits at a pole.
inline double gauss_at_one(double a, double b, double c) {
    if (detail::is_nonpositive_integer(c))
        throw std::domain_error("gauss_at_one: c is a non-positive integer");
    if (!(c - a - b > 0.0))
        throw std::domain_error("gauss_at_one: requires c - a - b > 0");
    if (detail::is_nonpositive_integer(c - a) ||
        detail::is_nonpositive_integer(c - b))
        return 0.0;
    return detail::gamma_any(c) * detail::gamma_any(c - a - b) /
           (detail::gamma_any(c - a) * detail::gamma_any(c - b));
}

/// Gauss hypergeometric 2F1(a,b;c;z) for real parameters and z in [0,1].
/// z = 1 is admitted only in the convergent case c - a - b > 0.
inline double hyp2f1(double a, double b, double c, double z) {
    if (detail::is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c is a non-positive integer");
    if (z < 0.0 || z > 1.0)
        throw std::domain_error("hyp2f1: z outside [0,1]");
    if (z == 0.0) return 1.0;
    if (z == 1.0) return gauss_at_one(a, b, c);  // throws if c-a-b <= 0

    // Terminating series: either numerator parameter a non-positive integer.
    if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b))
        return detail::hyp2f1_series(a, b, c, z);

    if (z <= 0.9) return detail::hyp2f1_series(a, b, c, z);

    // Slow-convergence region near z = 1: use the connection formula in
    // powers of 1-z when c-a-b is not an integer.
    const double cab = c - a - b;
    if (std::abs(cab - std::round(cab)) > 1e-8) {
        const double z1 = 1.0 - z;
        const double t1 = detail::gamma_any(c) * detail::gamma_any(cab) /
                          (detail::gamma_any(c - a) * detail::gamma_any(c - b)) *
                          detail::hyp2f1_series(a, b, 1.0 - cab, z1);
        const double t2 = detail::gamma_any(c) * detail::gamma_any(-cab) /
                          (detail::gamma_any(a) * detail::gamma_any(b)) *
                          std::pow(z1, cab) *
                          detail::hyp2f1_series(c - a, c - b, 1.0 + cab, z1);
        return t1 + t2;
    }
    return detail::hyp2f1_series(a, b, c, z);
}

inline double hyp2f1(const HypParams& p) { return hyp2f1(p.a, p.b, p.c, p.z); }

/// F(x) = \int_1^x (1-y^-2)^{-1/n} dy via its closed hypergeometric form
///   x 2F1[-1/2, 1/n; 1/2; x^-2] - 2F1[-1/2, 1/n; 1/2; 1].
inline double f_profile(double x, int n) {
    if (!(x >= 1.0)) throw std::domain_error("f_profile: requires x >= 1");
    if (n < 2) throw std::domain_error("f_profile: requires n >= 2");
    if (x == 1.0) return 0.0;
    const double invn = 1.0 / n;
    const double at_one = gauss_at_one(-0.5, invn, 0.5);
    return x * hyp2f1(-0.5, invn, 0.5, 1.0 / (x * x)) - at_one;
}

/// The same integral by adaptive quadrature. The endpoint singularity
/// (y-1)^{-1/n} is removed by the substitution y = 1 + tau^{n/(n-1)}, which
/// renders the integrand smooth:
///   F(x) = \int_0^{(x-1)^{(n-1)/n}} q ((2+tau^q)/(1+tau^q)^2)^{-1/n} dtau,
/// with q = n/(n-1).
inline double f_profile_quadrature(double x, int n) {
    if (!(x >= 1.0))
        throw std::domain_error("f_profile_quadrature: requires x >= 1");
    if (n < 2) throw std::domain_error("f_profile_quadrature: requires n >= 2");
    if (x == 1.0) return 0.0;
    const double q = double(n) / (n - 1);
    const double invn = 1.0 / n;
    const double upper = std::pow(x - 1.0, 1.0 / q);
    auto integrand = [q, invn](double tau) {
        const double e = std::pow(tau, q);
        return q * std::pow((2.0 + e) / ((1.0 + e) * (1.0 + e)), -invn);
    };
    return detail::adaptive_quad(integrand, 0.0, upper, 1e-12);
}

}  // namespace namma::specfun
