// SPDX-License-Identifier: Apache-2.0
#include "htrmt/poisson_extremes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "htrmt/compensated_sum.hpp"
#include "htrmt/quadrature.hpp"
#include "htrmt/special_functions.hpp"

namespace htrmt {
namespace {

constexpr double kInvPi = std::numbers::inv_pi;

void require_cutoff(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("Poisson cutoff must be positive and finite");
    }
}

// ((1 + a)^{-1/2} - 1) / a without cancellation at small a.
Complex scaled_defect(Complex a)
{
    Complex const s = std::sqrt(1.0 + a);
    return -1.0 / (s * (1.0 + s));
}

QuadResult integrate_part(ScalarFn const& f, double a, double b)
{
    QuadOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-13;
    return integrate(f, a, b, opts);
}

// Integral of a complex integrand split into real and imaginary parts.
template<class F>
Complex integrate_complex(F const& f, double a, double b, bool real_only)
{
    double const re = integrate_part([&](double w) { return f(w).real(); }, a, b).value;
    if (real_only) return {re, 0.0};
    double const im = integrate_part([&](double w) { return f(w).imag(); }, a, b).value;
    return {re, im};
}

}  // namespace

double poisson_intensity(double x)
{
    if (!(x > 0.0)) throw std::invalid_argument("poisson_intensity: x > 0");
    return kInvPi / (x * std::sqrt(x));
}

double poisson_tail_mass(double eps)
{
    require_cutoff(eps);
    return 2.0 * kInvPi / std::sqrt(eps);
}

double poisson_point_from_uniform(double eps, double u)
{
    require_cutoff(eps);
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("poisson_point_from_uniform: u in (0, 1)");
    }
    double const w = 1.0 - u;
    return eps / (w * w);
}

std::uint64_t sample_poisson_count(double mean, RngStream& stream)
{
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("Poisson mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        double const limit = std::exp(-mean);
        double prod = stream.uniform_open();
        std::uint64_t k = 0;
        while (prod > limit) {
            prod *= stream.uniform_open();
            ++k;
        }
        return k;
    }
    // Transformed rejection with squeeze (Hormann 1993).
    double const slam = std::sqrt(mean);
    double const loglam = std::log(mean);
    double const b = 0.931 + 2.53 * slam;
    double const a = -0.059 + 0.02483 * b;
    double const inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double const vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double const u = stream.uniform_open() - 0.5;
        double const v = stream.uniform_open();
        double const us = 0.5 - std::abs(u);
        double const k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b)
            <= -mean + k * loglam - log_gamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

std::vector<double> sample_process_unsorted(double cutoff, RngStream& stream)
{
    require_cutoff(cutoff);
    auto const count = sample_poisson_count(poisson_tail_mass(cutoff), stream);
    std::vector<double> points(count);
    for (double& x : points) {
        x = poisson_point_from_uniform(cutoff, stream.uniform_open());
    }
    return points;
}

PoissonSample sample_process(double cutoff, RngStream& stream)
{
    PoissonSample s{cutoff, sample_process_unsorted(cutoff, stream)};
    std::sort(s.points.begin(), s.points.end(), std::greater<>());
    return s;
}

Complex poisson_det_expectation(Complex z)
{
    return std::exp(-2.0 * kInvPi * principal_sqrt(z));
}

Complex poisson_log_functional(Complex z, double a, double b)
{
    if (!(z.real() >= 0.0)) {
        throw DomainError("poisson_log_functional requires Re z >= 0");
    }
    if (!(a >= 0.0 && b > a)) {
        throw std::invalid_argument("poisson_log_functional requires 0 <= a < b");
    }
    if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
    bool const real_only = z.imag() == 0.0;
    double const c = 2.0 * kInvPi;
    Complex total{0.0, 0.0};
    double lo = a;
    if (a < 1.0) {
        // x = u^2: rho dx = (2/pi) du / u^2 and the integrand is smooth in u.
        double const head_end = std::min(b, 1.0);
        auto const head = [&](double u) { return c * z * scaled_defect(z * (u * u)); };
        total += integrate_complex(head, std::sqrt(a), std::sqrt(head_end), real_only);
        lo = head_end;
    }
    if (lo < b) {
        // x = w^{-2}: rho dx = (2/pi) dw, w in [1/sqrt(b), 1/sqrt(lo)].
        double const w_lo = std::isinf(b) ? 0.0 : 1.0 / std::sqrt(b);
        auto const tail = [&](double w) {
            Complex const q = z / (w * w);
            return c * q * scaled_defect(q);
        };
        total += integrate_complex(tail, w_lo, 1.0 / std::sqrt(lo), real_only);
    }
    return total;
}

Complex truncation_correction(Complex z, double eps)
{
    require_cutoff(eps);
    return std::exp(poisson_log_functional(z, 0.0, eps));
}

Complex truncated_product(std::vector<double> const& points, Complex z)
{
    if (z.imag() == 0.0) {
        CompensatedSum acc;
        for (double x : points) acc.add(std::log1p(z.real() * x));
        return {std::exp(-0.5 * acc.value()), 0.0};
    }
    CompensatedSum re, im;
    for (double x : points) {
        Complex const lg = principal_log1p(z * x);
        re.add(lg.real());
        im.add(lg.imag());
    }
    return std::exp(-0.5 * Complex(re.value(), im.value()));
}

double frechet_rightmost_cdf(double x)
{
    if (!(x > 0.0)) throw std::invalid_argument("frechet_rightmost_cdf: x > 0");
    return std::exp(-2.0 * kInvPi / std::sqrt(x));
}

double max_entry_cdf(double x)
{
    if (!(x > 0.0)) throw std::invalid_argument("max_entry_cdf: x > 0");
    return std::exp(-2.0 * kInvPi / x);
}

void write_poisson_csv(std::ostream& os, std::vector<PoissonSample> const& samples)
{
    os << "replica_id,point\n";
    for (std::size_t r = 0; r < samples.size(); ++r) {
        for (double x : samples[r].points) {
            os << r << "," << std::setprecision(17) << x << "\n";
        }
    }
}

}  // namespace htrmt
