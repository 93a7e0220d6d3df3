// SPDX-License-Identifier: Apache-2.0
#include "htrmt/wishart_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "htrmt/special_functions.hpp"

namespace htrmt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dims(int n, int m, double t)
{
    if (n < 1 || m < 1) throw std::invalid_argument("Wishart integral: n, m >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("Wishart integral: t must be finite and >= 0");
    }
}

// Positive root of s q^2 + B q - C = 0 with C >= 0, free of cancellation.
double positive_root(double s, double B, double C)
{
    if (C == 0.0) return 0.0;
    if (s == 0.0) return C / B;
    double const disc = std::sqrt(B * B + 4.0 * s * C);
    return B >= 0.0 ? 2.0 * C / (B + disc) : (disc - B) / (2.0 * s);
}

struct LogQuad {
    double log_value;
    double rel_err;
    long evaluations;
};

// log int_0^inf exp(ell(x)) dx. The peak value is factored out and the
// domain split at the mode, with the right half mapped on the peak width.
LogQuad log_integral_split(std::function<double(double)> const& ell, double mode,
                           double width)
{
    double const peak = ell(mode);
    auto const f = [&](double x) { return std::exp(ell(x) - peak); };
    QuadOptions opts;
    opts.abs_tol = 1e-15 * width;
    opts.rel_tol = 1e-12;
    QuadResult sum{0.0, 0.0, 0};
    if (mode > 0.0) {
        sum = integrate(f, 0.0, mode, opts);
    }
    opts.scale = width;
    QuadResult const right = integrate(f, mode, kInf, opts);
    sum.value += right.value;
    sum.err_bound += right.err_bound;
    sum.evaluations += right.evaluations;
    return {peak + std::log(sum.value), sum.err_bound / sum.value, sum.evaluations};
}

double effective_s(int n, double t, bool scaled)
{
    double const t2 = t * t;
    return scaled ? t2 / n : t2;
}

LogQuad real_log(int n, int m, double s)
{
    // ell(rho) = (n-1) ln rho - rho^2/2 - (m/2) ln(1 + s rho^2)
    double const nm1 = n - 1.0;
    double const half_m = 0.5 * m;
    auto const ell = [=](double r) {
        double const lead = nm1 == 0.0 ? 0.0 : nm1 * std::log(r);
        return lead - 0.5 * r * r - half_m * std::log1p(s * r * r);
    };
    double const q = positive_root(s, 1.0 + s * (m - n + 1.0), nm1);
    double const mode = std::sqrt(q);
    double const w2 = s * q;
    double curv = 1.0 + m * s * (1.0 - w2) / ((1.0 + w2) * (1.0 + w2));
    if (q > 0.0) curv += nm1 / q;
    double const width = 1.0 / std::sqrt(std::max(curv, 1e-300));
    return log_integral_split(ell, mode, width);
}

LogQuad complex_log(int n, int m, double s)
{
    // ell(u) = (n-1) ln u - u - m ln(1 + s u)
    double const nm1 = n - 1.0;
    auto const ell = [=](double u) {
        double const lead = nm1 == 0.0 ? 0.0 : nm1 * std::log(u);
        return lead - u - m * std::log1p(s * u);
    };
    double const mode = positive_root(s, 1.0 + s * (m - n + 1.0), nm1);
    double width;
    if (mode == 0.0) {
        // Boundary maximum: decay length from the first derivative.
        width = 1.0 / (1.0 + m * s);
    } else {
        double const d = 1.0 + s * mode;
        double const curv = nm1 / (mode * mode) - m * s * s / (d * d);
        width = curv > 0.0 ? 1.0 / std::sqrt(curv) : std::max(mode, 1.0);
    }
    return log_integral_split(ell, mode, width);
}

QuadResult to_value(QuadResult const& lg)
{
    double const v = std::exp(lg.value);
    return {v, v * lg.err_bound, lg.evaluations};
}

}  // namespace

QuadResult wishart_real_log_det_integral(int n, int m, double t, bool scaled)
{
    require_dims(n, m, t);
    if (t == 0.0) return {0.0, 0.0, 1};
    LogQuad const q = real_log(n, m, effective_s(n, t, scaled));
    double const log_c = -(0.5 * n - 1.0) * std::numbers::ln2 - log_gamma(0.5 * n);
    return {log_c + q.log_value, q.rel_err, q.evaluations};
}

QuadResult wishart_complex_log_det_integral(int n, int m, double t, bool scaled)
{
    require_dims(n, m, t);
    if (t == 0.0) return {0.0, 0.0, 1};
    LogQuad const q = complex_log(n, m, effective_s(n, t, scaled));
    return {q.log_value - log_gamma(static_cast<double>(n)), q.rel_err, q.evaluations};
}

QuadResult wishart_real_det_integral(int n, int m, double t, bool scaled)
{
    if (t == 0.0) require_dims(n, m, t);
    return t == 0.0 ? QuadResult{1.0, 0.0, 1}
                    : to_value(wishart_real_log_det_integral(n, m, t, scaled));
}

QuadResult wishart_complex_det_integral(int n, int m, double t, bool scaled)
{
    if (t == 0.0) require_dims(n, m, t);
    return t == 0.0 ? QuadResult{1.0, 0.0, 1}
                    : to_value(wishart_complex_log_det_integral(n, m, t, scaled));
}

double lemma1_residual(int m, int n, double z)
{
    if (!(z > 0.0)) throw std::invalid_argument("lemma1_residual: z > 0");
    double const real = wishart_real_det_integral(2 * n, 2 * m, std::sqrt(0.5 * z), false).value;
    double const cplx = wishart_complex_det_integral(n, m, std::sqrt(z), false).value;
    return std::abs(real - cplx);
}

SaddleData saddle(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("saddle: t must be finite and >= 0");
    }
    if (t == 0.0) return {0.0, 1.0, 1.0};
    double const z = 2.0 / (1.0 + std::sqrt(4.0 * t * t + 1.0));
    // 1/z^2 - t^4/(1 + t^2 z)^2 reduces to (2 - z)/z on the saddle.
    return {t, z, (2.0 - z) / z};
}

double steepest_descent_log_value(int n, double t)
{
    if (n < 1) throw std::invalid_argument("steepest_descent: n >= 1");
    SaddleData const sd = saddle(t);
    double const h = 0.5 * n;
    double const z = sd.z_star;
    return h * std::log(h) - log_gamma(h) - h * (z - 2.0 * std::log(z)) - std::log(z)
           + 0.5 * std::log(4.0 * std::numbers::pi / (n * sd.second_deriv));
}

double steepest_descent_value(int n, double t)
{
    return std::exp(steepest_descent_log_value(n, t));
}

MPParams MPParams::make(double gamma, double sigma2)
{
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("MPParams: gamma must be >= 1");
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("MPParams: sigma2 must be > 0");
    }
    double const r = 1.0 / std::sqrt(gamma);
    return {gamma, sigma2, sigma2 * (1.0 - r) * (1.0 - r), sigma2 * (1.0 + r) * (1.0 + r)};
}

double mp_density(MPParams const& p, double x)
{
    if (!(x > p.a && x < p.b) || x <= 0.0) return 0.0;
    return p.gamma * std::sqrt((p.b - x) * (x - p.a))
           / (2.0 * std::numbers::pi * p.sigma2 * x);
}

QuadResult mp_normalization(MPParams const& p)
{
    QuadOptions opts;
    opts.hint = Singularity::SqrtVanishBoth;
    return integrate([&](double x) { return mp_density(p, x); }, p.a, p.b, opts);
}

QuadResult mp_log_integral(double t, MPParams const& p)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("mp_log_integral: t must be finite and >= 0");
    }
    if (t == 0.0) return {0.0, 0.0, 1};
    double const t2 = t * t;
    QuadOptions opts;
    opts.hint = Singularity::SqrtVanishBoth;
    QuadResult r = integrate(
        [&](double x) { return std::log1p(t2 * x) * mp_density(p, x); }, p.a, p.b, opts);
    r.value *= -0.5;
    r.err_bound *= 0.5;
    return r;
}

double bessel_kernel(double x, double y, double alpha)
{
    if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("bessel_kernel: x, y > 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("bessel_kernel: alpha >= 0");
    if (std::abs(x - y) < 1e-6 * std::max({1.0, x, y})) {
        double const u = 2.0 * std::sqrt(0.5 * (x + y));
        double const j = bessel_j(alpha, u);
        double const jp = bessel_j_prime(alpha, u);
        return jp * jp + (1.0 - alpha * alpha / (u * u)) * j * j;
    }
    double const u = 2.0 * std::sqrt(x);
    double const v = 2.0 * std::sqrt(y);
    double const num = bessel_j(alpha, u) * std::sqrt(y) * bessel_j_prime(alpha, v)
                       - bessel_j(alpha, v) * std::sqrt(x) * bessel_j_prime(alpha, u);
    return num / (x - y);
}

}  // namespace htrmt
