#pragma once

// The reduced Monge-Ampere ODE in its equivalent formulations:
//
//   (v v'' - 2/(n+2) v'^2)((n+2)/n v + (1-t) v')^{n-2} = C_v        (v-form)
//   w'' w^3 (w + (1-t) w')^{n-2} = 1/(n-1)                           (w-form)
//   d/ds (dW/ds)^{n-1} = W^{-3},  s = 1/(1-t), W = w/(1-t)           (s-form)
//
// with the one-parameter boundary family at t -> 0, the conserved first
// integral, the implicit hypergeometric solution, the fractional power
// series at s = 1, adaptive integration, and the t <-> 1/t symmetry.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "namma/roots.hpp"
#include "namma/specfun.hpp"

namespace namma::ode {

struct blowup_error : std::runtime_error {
    double t_fail;
    explicit blowup_error(double t)
        : std::runtime_error("integrate_w: positivity lost at t = " +
                            std::to_string(t)),
          t_fail(t) {}
};

struct BoundaryData {
    int n;
    double w0;    // boundary value of w at t = 0
    double b1;    // subleading coefficient, b1^{n-1} w0^3 = 1
    double beta;  // subleading exponent 1/(n-1)
};

inline BoundaryData boundary_data(int n, double w0) {
    if (n < 2) throw std::domain_error("boundary_data: requires n >= 2");
    if (!(w0 > 0.0)) throw std::domain_error("boundary_data: requires w0 > 0");
    return {n, w0, std::pow(w0, -3.0 / (n - 1)), 1.0 / (n - 1)};
}

/// Residual of the normalized w-form ODE.
inline double ode_residual_w(double t, double w, double wp, double wpp, int n) {
    return wpp * w * w * w * std::pow(w + (1.0 - t) * wp, n - 2) -
           1.0 / (n - 1);
}

/// Constant on the right side of the v-form ODE consistent with the
/// normalization 1/(n-1) of the w-form under w = (n+2)/n v^{n/(n+2)}.
inline double v_form_constant(int n) {
    const double r = double(n) / (n + 2);
    return r * r * r / (n - 1);
}

/// Residual of the v-form ODE.
inline double ode_residual_v(double t, double v, double vp, double vpp, int n) {
    return (v * vpp - 2.0 / (n + 2) * vp * vp) *
               std::pow(double(n + 2) / n * v + (1.0 - t) * vp, n - 2) -
           v_form_constant(n);
}

inline double w_from_v(double v, int n) {
    if (!(v > 0.0)) throw std::domain_error("w_from_v: requires v > 0");
    return double(n + 2) / n * std::pow(v, double(n) / (n + 2));
}

inline double v_from_w(double w, int n) {
    if (!(w > 0.0)) throw std::domain_error("v_from_w: requires w > 0");
    return std::pow(double(n) * w / (n + 2), double(n + 2) / n);
}

// ---------------------------------------------------------------------------
// s-form: W(s) on [1, infinity), first integral and implicit solution
// ---------------------------------------------------------------------------

struct FrakSample {
    double s;
    double frak_w;
    double frak_wp;
};

/// (n-1)/n (W')^n + 1/(2 W^2) - 1/(2 w0^2); zero along exact solutions.
inline double first_integral_residual(const FrakSample& q, int n, double w0) {
    return double(n - 1) / n * std::pow(q.frak_wp, n) +
           0.5 / (q.frak_w * q.frak_w) - 0.5 / (w0 * w0);
}

/// Limiting slope p* = (n/(2(n-1)w0^2))^{1/n} of W as s -> infinity.
inline double slope_limit(int n, double w0) {
    return std::pow(double(n) / (2.0 * (n - 1) * w0 * w0), 1.0 / n);
}

/// Solves F(W/w0) = (2(n-1)/n w0^{n+2})^{-1/n} (s-1) for W by bracketed
/// root finding on the monotone profile F, then recovers W' from the
/// first integral.
inline FrakSample frak_implicit(double s, int n, double w0) {
    if (!(s >= 1.0)) throw std::domain_error("frak_implicit: requires s >= 1");
    if (s == 1.0) return {1.0, w0, 0.0};
    const double scale =
        std::pow(2.0 * (n - 1) / n * std::pow(w0, n + 2), -1.0 / n);
    const double target = scale * (s - 1.0);
    // F(x) >= x-1, so the root lies in [1, 1 + target].
    auto fn = [n, target](double x) {
        return specfun::f_profile(x, n) - target;
    };
    const double x = detail::find_root(fn, 1.0, 1.0 + target + 1e-12, 1e-15);
    const double fw = w0 * x;
    const double rhs = 0.5 / (w0 * w0) - 0.5 / (fw * fw);
    const double fwp = std::pow(double(n) / (n - 1) * std::max(rhs, 0.0),
                                1.0 / n);
    return {s, fw, fwp};
}

// ---------------------------------------------------------------------------
// Power series of W in tau = (s-1)^{n/(n-1)} near s = 1
// ---------------------------------------------------------------------------

struct SeriesExpansion {
    int n;
    double w0;
    std::vector<double> coeffs;  // W = sum_k coeffs[k] tau^k
    int order;

    /// Evaluates (W, dW/ds) at s >= 1 from the truncated series.
    FrakSample eval(double s) const {
        const double q = double(n) / (n - 1);
        const double tau = std::pow(s - 1.0, q);
        double w = 0.0, wt = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            w = w * tau + coeffs[k];
            if (k >= 1) wt = wt * tau + double(k) * coeffs[k];
        }
        // dW/ds = q tau^{1/n} dW/dtau
        const double wp = (s == 1.0) ? 0.0 : q * std::pow(tau, 1.0 / n) * wt;
        return {s, w, wp};
    }
};

namespace series_detail {

inline std::vector<double> mul(const std::vector<double>& a,
                               const std::vector<double>& b, int N) {
    std::vector<double> r(N + 1, 0.0);
    for (int i = 0; i <= N && i < int(a.size()); ++i)
        for (int j = 0; i + j <= N && j < int(b.size()); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline std::vector<double> ipow(const std::vector<double>& a, int k, int N) {
    std::vector<double> r(N + 1, 0.0);
    r[0] = 1.0;
    for (int i = 0; i < k; ++i) r = mul(r, a, N);
    return r;
}

inline std::vector<double> reciprocal(const std::vector<double>& a, int N) {
    std::vector<double> r(N + 1, 0.0);
    r[0] = 1.0 / a[0];
    for (int i = 1; i <= N; ++i) {
        double s = 0.0;
        for (int j = 1; j <= i && j < int(a.size()); ++j) s += a[j] * r[i - j];
        r[i] = -s / a[0];
    }
    return r;
}

// J.C.P. Miller recurrence for B^p with real exponent p, B[0] > 0.
inline std::vector<double> rpow(const std::vector<double>& b, double p, int N) {
    std::vector<double> a(N + 1, 0.0);
    a[0] = std::pow(b[0], p);
    for (int k = 1; k <= N; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k && j < int(b.size()); ++j)
            s += (j * (p + 1.0) - k) * b[j] * a[k - j];
        a[k] = s / (k * b[0]);
    }
    return a;
}

// Coefficient of tau^m in the first-integral equation written as
//   (n/(n-1))^{n-1} tau (dW/dtau)^n - (1/(2 w0^2) - 1/(2 W^2)) = 0.
inline double residual_coeff(const std::vector<double>& c, int n, double w0,
                             int m) {
    const int N = m;
    std::vector<double> wt(N + 1, 0.0);
    for (int i = 0; i <= N; ++i)
        if (i + 1 < int(c.size())) wt[i] = (i + 1.0) * c[i + 1];
    std::vector<double> lhs = ipow(wt, n, N);
    lhs.insert(lhs.begin(), 0.0);  // times tau
    lhs.resize(N + 1);
    const double pref = std::pow(double(n) / (n - 1), n - 1);

    std::vector<double> w(c.begin(), c.end());
    w.resize(N + 1, 0.0);
    std::vector<double> inv_w2 = reciprocal(mul(w, w, N), N);
    double rhs_m = -0.5 * inv_w2[m];
    if (m == 0) rhs_m += 0.5 / (w0 * w0);
    return pref * lhs[m] - rhs_m;
}

}  // namespace series_detail

/// Coefficients of W = sum c_k (s-1)^{kn/(n-1)} by matching powers in the
/// first integral; c0 = w0, c1 = (n-1)/n w0^{-3/(n-1)}, the rest solved
/// order by order (each c_m enters the order-m coefficient affinely).
inline SeriesExpansion series_near_one(int n, double w0, int order) {
    if (order < 1) throw std::domain_error("series_near_one: order < 1");
    std::vector<double> c;
    c.reserve(order + 1);
    c.push_back(w0);
    c.push_back(double(n - 1) / n * std::pow(w0, -3.0 / (n - 1)));
    for (int m = 2; m <= order; ++m) {
        c.push_back(0.0);
        const double r0 = series_detail::residual_coeff(c, n, w0, m);
        // The order-m residual is affine in c_m with exactly computable
        // slope (n m - 1) / w0^3; evaluating the slope by differencing
        // instead would cancel catastrophically once the coefficients grow.
        const double slope = (double(n) * m - 1.0) / (w0 * w0 * w0);
        c[m] = -r0 / slope;
    }
    return {n, w0, std::move(c), order};
}

// ---------------------------------------------------------------------------
// Adaptive integration of the w-form
// ---------------------------------------------------------------------------

struct RadialSolution {
    struct Sample {
        double t, w, wp, wpp;
    };
    int n;
    double w0;
    std::vector<Sample> grid;  // t strictly increasing
    double tol;

    double t_min() const { return grid.front().t; }
    double t_max() const { return grid.back().t; }

    /// Dense evaluation by quintic Hermite interpolation on (w, w', w'');
    /// w'' at the returned point is recomputed from the ODE itself.
    Sample eval(double t) const {
        if (t < t_min() || t > t_max())
            throw std::range_error("RadialSolution::eval: t = " +
                                   std::to_string(t) + " outside grid range");
        auto it = std::lower_bound(
            grid.begin(), grid.end(), t,
            [](const Sample& s, double x) { return s.t < x; });
        if (it == grid.begin()) return grid.front();
        if (it->t == t) return *it;
        const Sample& a = *(it - 1);
        const Sample& b = *it;
        const double h = b.t - a.t;
        const double x = (t - a.t) / h;
        // Quintic Hermite basis on [0,1] with values/derivs/2nd derivs.
        const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
        const double h00 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
        const double h10 = x - 6 * x3 + 8 * x4 - 3 * x5;
        const double h20 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
        const double h01 = 10 * x3 - 15 * x4 + 6 * x5;
        const double h11 = -4 * x3 + 7 * x4 - 3 * x5;
        const double h21 = 0.5 * x3 - x4 + 0.5 * x5;
        const double w = h00 * a.w + h10 * h * a.wp + h20 * h * h * a.wpp +
                         h01 * b.w + h11 * h * b.wp + h21 * h * h * b.wpp;
        // d/dx of the basis, divided by h.
        const double d00 = (-30 * x2 + 60 * x3 - 30 * x4) / h;
        const double d10 = (1 - 18 * x2 + 32 * x3 - 15 * x4) / h;
        const double d20 = (x - 4.5 * x2 + 6 * x3 - 2.5 * x4) / h;
        const double d01 = (30 * x2 - 60 * x3 + 30 * x4) / h;
        const double d11 = (-12 * x2 + 28 * x3 - 15 * x4) / h;
        const double d21 = (1.5 * x2 - 4 * x3 + 2.5 * x4) / h;
        const double wp = d00 * a.w + d10 * h * a.wp + d20 * h * h * a.wpp +
                          d01 * b.w + d11 * h * b.wp + d21 * h * h * b.wpp;
        const double wpp = 1.0 / ((n - 1) * w * w * w *
                                  std::pow(w + (1.0 - t) * wp, n - 2));
        return {t, w, wp, wpp};
    }
};

namespace rk_detail {

inline double rhs_wpp(double t, double w, double wp, int n) {
    const double cls = w + (1.0 - t) * wp;
    if (!(w > 0.0) || !(cls > 0.0)) throw blowup_error(t);
    return 1.0 / ((n - 1) * w * w * w * std::pow(cls, n - 2));
}

}  // namespace rk_detail

/// Integrates the w-form from t_start to t_end with a Dormand-Prince 5(4)
/// pair and PI step control. The initial state is seeded from the analytic
/// series at s = 1/(1-t_start). Requested output times (if any) are hit
/// exactly; natural accepted steps are recorded as well.
inline RadialSolution integrate_w(int n, double w0, double t_start,
                                  double t_end, double tol,
                                  std::vector<double> output_times = {},
                                  double max_step = 0.02) {
    if (!(t_start > 0.0 && t_start < 1.0 && t_start < t_end))
        throw std::domain_error("integrate_w: need 0 < t_start < t_end, "
                                "t_start < 1");
    const SeriesExpansion ser = series_near_one(n, w0, 10);
    const double s0 = 1.0 / (1.0 - t_start);
    const FrakSample f0 = ser.eval(s0);
    double t = t_start;
    double w = f0.frak_w / s0;
    double wp = s0 * f0.frak_wp - f0.frak_w;

    std::sort(output_times.begin(), output_times.end());
    std::size_t next_out = 0;
    while (next_out < output_times.size() &&
           output_times[next_out] <= t_start)
        ++next_out;

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    RadialSolution sol{n, w0, {}, tol};
    auto push = [&](double tt, double ww, double wwp) {
        sol.grid.push_back({tt, ww, wwp, rk_detail::rhs_wpp(tt, ww, wwp, n)});
    };
    push(t, w, wp);

    double h = std::min(max_step, 0.25 * (t_end - t_start));
    double err_prev = 1.0;
    int rejected_in_a_row = 0;
    while (t < t_end - 1e-14) {
        double h_lim = std::min({h, max_step, t_end - t});
        if (next_out < output_times.size())
            h_lim = std::min(h_lim, output_times[next_out] - t);
        const double hs = std::max(h_lim, 1e-14);

        auto f = [n](double tt, double ww, double wwp, double& dw,
                     double& dwp) {
            dw = wwp;
            dwp = rk_detail::rhs_wpp(tt, ww, wwp, n);
        };
        double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p, k5w, k5p, k6w, k6p,
            k7w, k7p;
        double w_new, wp_new, err;
        try {
        f(t, w, wp, k1w, k1p);
        f(t + c2 * hs, w + hs * a21 * k1w, wp + hs * a21 * k1p, k2w, k2p);
        f(t + c3 * hs, w + hs * (a31 * k1w + a32 * k2w),
          wp + hs * (a31 * k1p + a32 * k2p), k3w, k3p);
        f(t + c4 * hs, w + hs * (a41 * k1w + a42 * k2w + a43 * k3w),
          wp + hs * (a41 * k1p + a42 * k2p + a43 * k3p), k4w, k4p);
        f(t + c5 * hs,
          w + hs * (a51 * k1w + a52 * k2w + a53 * k3w + a54 * k4w),
          wp + hs * (a51 * k1p + a52 * k2p + a53 * k3p + a54 * k4p), k5w,
          k5p);
        f(t + hs,
          w + hs * (a61 * k1w + a62 * k2w + a63 * k3w + a64 * k4w +
                    a65 * k5w),
          wp + hs * (a61 * k1p + a62 * k2p + a63 * k3p + a64 * k4p +
                     a65 * k5p),
          k6w, k6p);
        w_new =
            w + hs * (b1 * k1w + b3 * k3w + b4 * k4w + b5 * k5w + b6 * k6w);
        wp_new =
            wp + hs * (b1 * k1p + b3 * k3p + b4 * k4p + b5 * k5p + b6 * k6p);
        f(t + hs, w_new, wp_new, k7w, k7p);
        const double ew = hs * (e1 * k1w + e3 * k3w + e4 * k4w + e5 * k5w +
                                e6 * k6w + e7 * k7w);
        const double ep = hs * (e1 * k1p + e3 * k3p + e4 * k4p + e5 * k5p +
                                e6 * k6p + e7 * k7p);
        const double sc_w = tol + tol * std::max(std::abs(w), std::abs(w_new));
        const double sc_p =
            tol + tol * std::max(std::abs(wp), std::abs(wp_new));
        err = std::sqrt(
            0.5 * ((ew / sc_w) * (ew / sc_w) + (ep / sc_p) * (ep / sc_p)));
        } catch (const blowup_error&) {
            // A trial stage left the positivity domain: reject and retry
            // with a much smaller step; only give up once the step size is
            // negligible, which signals a genuine blow-up of the solution.
            if (hs < 1e-12) throw;
            err = std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(err)) {
            h = hs * 0.1;
            if (++rejected_in_a_row > 60)
                throw blowup_error(t);
            continue;
        }

        if (err <= 1.0) {
            t += hs;
            w = w_new;
            wp = wp_new;
            push(t, w, wp);
            if (next_out < output_times.size() &&
                std::abs(t - output_times[next_out]) < 1e-13)
                ++next_out;
            // PI controller (Gustafsson).
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
            h = hs * std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
            rejected_in_a_row = 0;
        } else {
            h = hs * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
            if (++rejected_in_a_row > 60)
                throw std::runtime_error(
                    "integrate_w: step control failed at t = " +
                    std::to_string(t));
        }
    }
    return sol;
}

/// The t -> 1/t reflection: w~(t) = t w(1/t) solves the same ODE. Each
/// sample transforms exactly, so no interpolation error is introduced.
inline RadialSolution symmetry_reflect(const RadialSolution& sol) {
    RadialSolution out{sol.n, sol.w0, {}, sol.tol};
    out.grid.reserve(sol.grid.size());
    for (auto it = sol.grid.rbegin(); it != sol.grid.rend(); ++it) {
        const double t = 1.0 / it->t;
        const double w = t * it->w;
        const double wp = it->w - it->t * it->wp;  // w(1/t) - (1/t) w'(1/t)
        const double wpp = it->t * it->t * it->t * it->wpp;  // t^{-3} w''(1/t)
        out.grid.push_back({t, w, wp, wpp});
    }
    return out;
}

}  // namespace namma::ode
