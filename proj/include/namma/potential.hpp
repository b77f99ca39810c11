#pragma once

// Reconstruction of the homogeneous two-variable potential
//   u(x1, x2) = x1^{(n+2)/n} v(t),  t = d1 x2 / (d2 x1),
// from a radial solution in w-form, with its gradient, Hessian,
// Monge-Ampere residual, positivity flags, model constants, boundary
// expansion, length scales and the tangent-cone Hessian metric.

#include <array>
#include <cmath>
#include <stdexcept>

#include "namma/ode_core.hpp"

namespace namma::potential {

struct ModelParams {
    int n;   // complex dimension, >= 3
    int d1;  // divisor degrees splitting the anticanonical class
    int d2;

    ModelParams(int n_, int d1_, int d2_) : n(n_), d1(d1_), d2(d2_) {
        if (n < 3 || d1 < 1 || d2 < 1)
            throw std::domain_error("ModelParams: need n >= 3, d1, d2 >= 1");
    }
};

using Mat2 = std::array<std::array<double, 2>, 2>;

struct PotentialSample {
    double x1, x2;
    double t;
    double u;
    std::array<double, 2> du;
    Mat2 hess;
};

/// Right side of the reduced Monge-Ampere equation,
///   det(D^2 u)(d1 u_1 + d2 u_2)^{n-2} = 2n/((n+2)^2(n-1)) (d1/d2)^2 d1^{n-2}.
inline double nama_constant(const ModelParams& p) {
    const double r = double(p.d1) / p.d2;
    return 2.0 * p.n / (double(p.n + 2) * (p.n + 2) * (p.n - 1)) * r * r *
           std::pow(double(p.d1), p.n - 2);
}

struct NormalizationConstants {
    double nama_const;
    double k0_reduced;  // K0 without the intersection-number factor
    double v0;
    double a;
};

/// Constants (v0, a) of the t -> 0 asymptote recovered from w0:
///   v0 = (n w0/(n+2))^{(n+2)/n},  a = (n/(n+2))^{2/n} w0^{-(n+2)/(n(n-1))}.
inline std::pair<double, double> v0_a(int n, double w0) {
    if (!(w0 > 0.0)) throw std::domain_error("v0_a: requires w0 > 0");
    const double v0 = std::pow(double(n) * w0 / (n + 2), double(n + 2) / n);
    const double a = std::pow(double(n) / (n + 2), 2.0 / n) *
                     std::pow(w0, -double(n + 2) / (n * (n - 1)));
    return {v0, a};
}

inline NormalizationConstants normalization_constants(const ModelParams& p,
                                                      double w0) {
    const auto [v0, a] = v0_a(p.n, w0);
    const double r = double(p.d1) / p.d2;
    const double k0 = 1.0 / (16.0 * M_PI * M_PI) * 2.0 * p.n * p.n /
                      (double(p.n + 2) * (p.n + 2)) * r * r *
                      std::pow(double(p.d1), p.n - 2);
    return {nama_constant(p), k0, v0, a};
}

namespace detail {

// (v, v', v'') from (w, w', w'') under w = (n+2)/n v^{n/(n+2)}.
struct VState {
    double v, vp, vpp;
};

inline VState v_state(const ode::RadialSolution::Sample& s, int n) {
    const double v = ode::v_from_w(s.w, n);
    const double vp = s.wp * std::pow(v, 2.0 / (n + 2));
    const double vpp =
        (s.wpp * std::pow(v, double(n + 4) / (n + 2)) +
         2.0 / (n + 2) * vp * vp) /
        v;
    return {v, vp, vpp};
}

}  // namespace detail

/// Evaluates u, its gradient and Hessian at (x1, x2) from the radial
/// solution; t = d1 x2/(d2 x1) must lie inside the solution's grid range.
inline PotentialSample sample_potential(const ModelParams& p,
                                        const ode::RadialSolution& sol,
                                        double x1, double x2) {
    if (!(x1 > 0.0 && x2 > 0.0))
        throw std::domain_error("sample_potential: requires x1, x2 > 0");
    const double t = double(p.d1) * x2 / (p.d2 * x1);
    const auto [v, vp, vpp] = detail::v_state(sol.eval(t), p.n);
    const int n = p.n;
    const double alpha = double(n + 2) / n;
    const double r = double(p.d1) / p.d2;
    const double xa = std::pow(x1, alpha);
    const double x2n = std::pow(x1, 2.0 / n);
    const double x2n1 = std::pow(x1, 2.0 / n - 1.0);

    PotentialSample out;
    out.x1 = x1;
    out.x2 = x2;
    out.t = t;
    out.u = xa * v;
    out.du = {(alpha * v - t * vp) * x2n, r * vp * x2n};
    out.hess[0][0] =
        x2n1 * (2.0 * (n + 2) / (double(n) * n) * v - 4.0 * t / n * vp +
                t * t * vpp);
    out.hess[0][1] = r * (2.0 / n * vp - t * vpp) * x2n1;
    out.hess[1][0] = out.hess[0][1];
    out.hess[1][1] = r * r * x2n1 * vpp;
    return out;
}

/// det(D^2 u)(d1 u_1 + d2 u_2)^{n-2} minus the model constant.
inline double nama_residual(const PotentialSample& s, const ModelParams& p) {
    const double det =
        s.hess[0][0] * s.hess[1][1] - s.hess[0][1] * s.hess[1][0];
    const double cls = p.d1 * s.du[0] + p.d2 * s.du[1];
    return det * std::pow(cls, p.n - 2) - nama_constant(p);
}

/// Positivity of D^2 u and of the effective class coefficient
/// d1 u_1 + d2 u_2.
inline std::pair<bool, bool> kahler_flags(const PotentialSample& s,
                                          const ModelParams& p) {
    const double tr = s.hess[0][0] + s.hess[1][1];
    const double det =
        s.hess[0][0] * s.hess[1][1] - s.hess[0][1] * s.hess[1][0];
    const bool hess_positive = tr > 0.0 && det > 0.0;
    const bool class_positive = p.d1 * s.du[0] + p.d2 * s.du[1] > 0.0;
    return {hess_positive, class_positive};
}

/// The tangent-cone metric tensor at (x1, x2) is the Hessian itself.
inline Mat2 hessian_metric(const PotentialSample& s) { return s.hess; }

/// Truncated fractional expansion of u for x2/x1 small:
///   u = sum_k a_k xt1^{(n+2)/n - kn/(n-1)} (d1 x2/d2)^{kn/(n-1)},
/// with xt1 = x1 - (d1/d2) x2 and a_k the coefficients of
/// (n/(n+2))^{(n+2)/n} W^{(n+2)/n} as a series in tau = (s-1)^{n/(n-1)}.
inline double boundary_expansion_u(const ModelParams& p,
                                   const ode::SeriesExpansion& series,
                                   double x1, double x2, int order) {
    if (order < 1)
        throw std::domain_error("boundary_expansion_u: order < 1");
    if (order > series.order)
        throw std::domain_error("boundary_expansion_u: order beyond series");
    const int n = p.n;
    const double alpha = double(n + 2) / n;
    const auto ak = ode::series_detail::rpow(series.coeffs, alpha, order);
    const double pref = std::pow(double(n) / (n + 2), alpha);
    const double xt1 = x1 - double(p.d1) / p.d2 * x2;
    const double y = double(p.d1) * x2 / p.d2;
    const double q = double(n) / (n - 1);
    double u = 0.0;
    for (int k = 0; k <= order; ++k)
        u += pref * ak[k] * std::pow(xt1, alpha - k * q) * std::pow(y, k * q);
    return u;
}

struct LengthScales {
    double torus_diam;
    double fiber_diam;
    double dist;
    double vol_exponent;
};

/// Order-of-magnitude diagnostics of the iterated fibration: torus scale
/// |D^2 u|^{1/2}, fiber scale |du-class|^{1/2}, geodesic distance
/// |x|^{(n+2)/(2n)}, and the constant volume growth power 4n/(n+2).
inline LengthScales length_scales(const ModelParams& p,
                                  const PotentialSample& s) {
    const double tr = s.hess[0][0] + s.hess[1][1];
    const double diff = s.hess[0][0] - s.hess[1][1];
    const double disc =
        std::sqrt(diff * diff + 4.0 * s.hess[0][1] * s.hess[0][1]);
    const double spectral = 0.5 * (tr + disc);
    const double cls = p.d1 * s.du[0] + p.d2 * s.du[1];
    const double xnorm = std::hypot(s.x1, s.x2);
    return {std::sqrt(spectral), std::sqrt(cls),
            std::pow(xnorm, double(p.n + 2) / (2.0 * p.n)),
            4.0 * p.n / (p.n + 2.0)};
}

/// Residual of u = x^{(n+1)/n} against u'' u'^{n-1} = (n+1)^n / n^{n+1},
/// the single-variable degenerate case of the same equation.
inline double calabi_ansatz_m1_residual(int n, double x) {
    if (!(x > 0.0))
        throw std::domain_error("calabi_ansatz_m1_residual: requires x > 0");
    const double alpha = double(n + 1) / n;
    const double up = alpha * std::pow(x, 1.0 / n);
    const double upp = alpha / n * std::pow(x, 1.0 / n - 1.0);
    return upp * std::pow(up, n - 1) -
           std::pow(double(n + 1), n) / std::pow(double(n), n + 1);
}

}  // namespace namma::potential
