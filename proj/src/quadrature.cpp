// SPDX-License-Identifier: Apache-2.0
#include "htrmt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace htrmt {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208984805330, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(Segment const& o) const { return error < o.error; }
};

Segment kronrod21(ScalarFn const& g, double a, double b, long& evals)
{
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);
    double fv1[10], fv2[10];
    double const fc = g(center);
    double resg = 0.0;
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    for (int j = 0; j < 5; ++j) {
        int const jtw = 2 * j + 1;
        double const dx = half * kXgk[jtw];
        double const f1 = g(center - dx);
        double const f2 = g(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        int const jtwm1 = 2 * j;
        double const dx = half * kXgk[jtwm1];
        double const f1 = g(center - dx);
        double const f2 = g(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    evals += 21;
    double const reskh = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    double const value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps)) {
        err = std::max(50 * eps * resabs, err);
    }
    if (!std::isfinite(value) || !std::isfinite(err)) {
        std::ostringstream os;
        os << "non-finite integrand on [" << a << ", " << b << "]";
        throw QuadratureError(os.str(), {value, err, evals});
    }
    return {a, b, value, err};
}

QuadResult adapt(ScalarFn const& g, double a, double b, QuadOptions const& opts)
{
    long evals = 0;
    std::priority_queue<Segment> heap;
    Segment const first = kronrod21(g, a, b, evals);
    heap.push(first);
    double total = first.value;
    double total_err = first.error;
    int intervals = 1;
    // Segments too narrow to split keep their error here.
    double frozen_err = 0.0;
    double frozen_val = 0.0;

    auto tol = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (total_err > tol() && !heap.empty()) {
        if (intervals >= opts.max_intervals) {
            std::ostringstream os;
            os << "quadrature did not converge on [" << a << ", " << b
               << "]: error " << total_err << " after " << intervals
               << " intervals";
            throw QuadratureError(os.str(), {total, total_err, evals});
        }
        Segment const worst = heap.top();
        heap.pop();
        double const mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)
            || std::abs(worst.b - worst.a)
                   < 64 * std::numeric_limits<double>::epsilon()
                         * std::max(std::abs(mid), 1e-300)) {
            frozen_err += worst.error;
            frozen_val += worst.value;
            if (heap.empty()) {
                break;
            }
            continue;
        }
        Segment const left = kronrod21(g, worst.a, mid, evals);
        Segment const right = kronrod21(g, mid, worst.b, evals);
        heap.push(left);
        heap.push(right);
        ++intervals;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        if (intervals % 64 == 0) {
            // Resum to shed accumulated cancellation in the running totals.
            total = frozen_val;
            total_err = frozen_err;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    if (total_err > tol()) {
        std::ostringstream os;
        os << "quadrature stalled on [" << a << ", " << b << "]: error "
           << total_err;
        throw QuadratureError(os.str(), {total, total_err, evals});
    }
    return {total, total_err, evals};
}

}  // namespace

QuadResult integrate(ScalarFn const& f, double a, double b,
                     QuadOptions const& opts)
{
    if (std::isnan(a) || std::isnan(b) || a > b || std::isinf(a)) {
        throw std::invalid_argument("integrate: need finite a <= b");
    }
    if (a == b) {
        return {0.0, 0.0, 1};
    }
    bool const infinite = std::isinf(b);
    double const s = opts.scale;

    switch (opts.hint) {
    case Singularity::None:
        if (!infinite) {
            return adapt(f, a, b, opts);
        }
        return adapt(
            [&](double v) {
                double const w = 1.0 - v;
                return f(a + s * v / w) * s / (w * w);
            },
            0.0, 1.0, opts);
    case Singularity::InverseSqrtLeft:
        if (!infinite) {
            return adapt([&](double w) { return f(a + w * w) * 2.0 * w; }, 0.0,
                         std::sqrt(b - a), opts);
        }
        return adapt(
            [&](double v) {
                double const om = 1.0 - v;
                double const w = s * v / om;
                return f(a + w * w) * 2.0 * w * s / (om * om);
            },
            0.0, 1.0, opts);
    case Singularity::SqrtVanishBoth: {
        if (infinite) {
            throw std::invalid_argument(
                "integrate: sqrt_vanish_both needs a finite interval");
        }
        double const len = b - a;
        return adapt(
            [&](double theta) {
                double const sh = std::sin(0.5 * theta);
                return f(a + len * sh * sh) * 0.5 * len * std::sin(theta);
            },
            0.0, std::numbers::pi, opts);
    }
    }
    throw std::invalid_argument("integrate: unknown singularity hint");
}

QuadResult integrate_piecewise(ScalarFn const& f,
                               std::span<double const> breakpoints,
                               QuadOptions const& opts)
{
    QuadResult acc{0.0, 0.0, 0};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        QuadResult const r = integrate(f, breakpoints[i], breakpoints[i + 1], opts);
        acc.value += r.value;
        acc.err_bound += r.err_bound;
        acc.evaluations += r.evaluations;
    }
    return acc;
}

double wynn_epsilon(std::span<double const> partial_sums)
{
    std::size_t const n = partial_sums.size();
    if (n == 0) {
        throw std::invalid_argument("wynn_epsilon: empty sequence");
    }
    if (n < 3) {
        return partial_sums.back();
    }
    // eps[k] holds column k of the epsilon table for the current diagonal.
    std::vector<double> prev(partial_sums.begin(), partial_sums.end());
    std::vector<double> prevprev(n + 1, 0.0);
    double best = partial_sums.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> cur(n - k);
        for (std::size_t i = 0; i + k < n; ++i) {
            double const diff = prev[i + 1] - prev[i];
            double const base = (k == 1) ? 0.0 : prevprev[i + 1];
            if (diff == 0.0) {
                return (k - 1) % 2 == 0 ? prev[i + 1] : best;
            }
            cur[i] = base + 1.0 / diff;
        }
        if (k % 2 == 0) {
            best = cur.back();
        }
        prevprev = std::move(prev);
        prev = std::move(cur);
    }
    return best;
}

}  // namespace htrmt
