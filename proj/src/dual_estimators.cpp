// SPDX-License-Identifier: Apache-2.0
#include "htrmt/dual_estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "htrmt/compensated_sum.hpp"
#include "htrmt/special_functions.hpp"

namespace htrmt {
namespace {

double abs_normal_sum(int count, RngStream& stream)
{
    CompensatedSum acc;
    for (int k = 0; k < count; ++k) {
        acc.add(std::abs(stream.normal()));
    }
    return acc.value();
}

// k-th positive zero of J0: McMahon's expansion polished by Newton steps.
double bessel_j0_zero(int k)
{
    double const beta = (k - 0.25) * std::numbers::pi;
    double const b8 = 8.0 * beta;
    double j = beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8);
    for (int it = 0; it < 3; ++it) {
        double const j1 = std::cyl_bessel_j(1.0, j);
        if (j1 == 0.0) break;
        j += std::cyl_bessel_j(0.0, j) / j1;
    }
    return j;
}

QuadResult radial_G_series(RadialDensity const& f, double y)
{
    CompensatedSum acc;
    double fact = 1.0;  // l!
    double ypow = 1.0;
    long evals = 0;
    for (int l = 0; l < 60; ++l) {
        if (l > 0) {
            fact *= l;
            ypow *= y;
        }
        double const term = (l % 2 == 0 ? 1.0 : -1.0) * f.moment(l) * ypow
                            / (fact * fact);
        ++evals;
        acc.add(term);
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(acc.value()))) {
            return {acc.value(), std::abs(term), evals};
        }
    }
    throw QuadratureError("radial_G: moment series did not converge",
                          {acc.value(), std::numeric_limits<double>::infinity(),
                           evals});
}

}  // namespace

double psi(double y)
{
    return erfcx(y / std::numbers::sqrt2);
}

double log_psi(double y)
{
    return std::log(psi(y));
}

DualSampleValue cauchy_dual_single(int m, int n, double t, RngStream& stream)
{
    if (m < 1 || n < 1) throw std::invalid_argument("cauchy_dual_single: m, n >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("cauchy_dual_single: t >= 0");
    double const s = abs_normal_sum(n, stream);
    double const y = t / (static_cast<double>(n) * m) * s;
    return {std::exp(m * log_psi(y)), DualRoute::CauchySingle};
}

RowPattern::RowPattern(Mask const& mask)
    : rows_(mask.rows()), cols_(static_cast<int>(mask.cols()))
{
    for (Eigen::Index j = 0; j < mask.rows(); ++j) {
        for (Eigen::Index k = 0; k < mask.cols(); ++k) {
            if (mask(j, k)) rows_[j].push_back(static_cast<int>(k));
        }
    }
}

DualSampleValue cauchy_dual_sparse(RowPattern const& pattern, int b, double t,
                                   RngStream& stream)
{
    if (b < 1) throw std::invalid_argument("cauchy_dual_sparse: b >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("cauchy_dual_sparse: t >= 0");
    int const n = pattern.cols();
    int const m = pattern.rows();
    std::vector<double> s(n);
    for (double& v : s) v = std::abs(stream.normal());
    double const scale = t / (static_cast<double>(m) * b);
    CompensatedSum logv;
    for (int j = 0; j < m; ++j) {
        CompensatedSum row;
        for (int k : pattern.row(j)) row.add(s[k]);
        logv.add(log_psi(scale * row.value()));
    }
    return {std::exp(logv.value()), DualRoute::CauchySparse};
}

DualSampleValue cauchy_dual_sparse(Mask const& mask, int b, double t,
                                   RngStream& stream)
{
    return cauchy_dual_sparse(RowPattern(mask), b, t, stream);
}

CharFn char_fn_from_string(std::string const& id)
{
    if (id == "cauchy") return CharFn::Cauchy;
    if (id == "gaussian") return CharFn::Gaussian;
    throw std::invalid_argument("unknown char_fn '" + id + "'");
}

std::string to_string(CharFn g)
{
    return g == CharFn::Cauchy ? "cauchy" : "gaussian";
}

double log_char_fn(CharFn g, double x)
{
    return g == CharFn::Cauchy ? -std::abs(x) : -0.5 * x * x;
}

DualSampleValue general_r_dual(int m, int n, std::vector<double> const& ts,
                               CharFn g, RngStream& stream)
{
    if (ts.empty()) throw std::invalid_argument("general_r_dual: r must be >= 1");
    if (m < 1 || n < 1) throw std::invalid_argument("general_r_dual: m, n >= 1");
    auto const r = ts.size();
    // s^(i) then p^(i) for each i, scaled by t_i.
    Eigen::MatrixXd s(r, n), p(r, m);
    for (std::size_t i = 0; i < r; ++i) {
        if (!(ts[i] >= 0.0)) throw std::invalid_argument("general_r_dual: t_i >= 0");
        for (int k = 0; k < n; ++k) s(i, k) = stream.normal();
        for (int j = 0; j < m; ++j) p(i, j) = ts[i] * stream.normal();
    }
    Eigen::MatrixXd const x = p.transpose() * s;  // m x n
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc.add(log_char_fn(g, x.data()[i]));
    }
    return {std::exp(acc.value()), DualRoute::GeneralR};
}

RadialDensity radial_density_from_string(std::string const& id)
{
    if (id == "wishart_radial") {
        return {id, [](double x) { return x < 0.0 ? 0.0 : std::exp(-x); },
                std::numeric_limits<double>::infinity(),
                [](int l) { return std::tgamma(l + 1.0); }};
    }
    if (id == "uniform_radial") {
        return {id, [](double x) { return (x < 0.0 || x > 2.0) ? 0.0 : 0.5; },
                2.0, [](int l) { return std::pow(2.0, l) / (l + 1.0); }};
    }
    throw std::invalid_argument("unknown radial density '" + id + "'");
}

QuadResult radial_G(RadialDensity const& f, double y)
{
    if (!(y >= 0.0)) throw std::invalid_argument("radial_G: y >= 0");
    if (y == 0.0) return {1.0, 0.0, 1};
    if (y < 1e-3 && f.moment) return radial_G_series(f, y);

    auto const integrand = [&](double x) {
        return f.density(x) * j0_of_2sqrt(x * y);
    };
    QuadOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-13;

    constexpr int kPlainPieces = 50;
    constexpr int kMaxPieces = 200;
    std::vector<double> partial;
    CompensatedSum sum;
    double err = 0.0;
    long evals = 0;
    double lo = 0.0;
    int quiet = 0;
    double prev_accel = std::numeric_limits<double>::quiet_NaN();
    for (int k = 1; k <= kMaxPieces; ++k) {
        double const z = bessel_j0_zero(k);
        double hi = z * z / (4.0 * y);
        bool const last = hi >= f.support_end;
        if (last) hi = f.support_end;
        QuadResult const piece = integrate(integrand, lo, hi, opts);
        sum.add(piece.value);
        err += piece.err_bound;
        evals += piece.evaluations;
        partial.push_back(sum.value());
        lo = hi;
        if (last) return {sum.value(), err, evals};

        double const tol = 1e-16 + 1e-14 * std::abs(sum.value());
        quiet = std::abs(piece.value) < tol ? quiet + 1 : 0;
        if (quiet >= 3) return {sum.value(), err, evals};

        if (k >= kPlainPieces) {
            double const accel = wynn_epsilon(partial);
            if (std::abs(accel - prev_accel) < 1e-12 * std::max(1e-3, std::abs(accel))) {
                return {accel, err + std::abs(accel - prev_accel), evals};
            }
            prev_accel = accel;
        }
    }
    throw QuadratureError("radial_G: oscillatory tail did not converge",
                          {partial.back(), std::numeric_limits<double>::infinity(),
                           evals});
}

RadialKernel RadialKernel::wishart()
{
    return RadialKernel();
}

RadialKernel RadialKernel::from_density(RadialDensity f)
{
    RadialKernel k;
    k.density_ = std::move(f);
    return k;
}

RadialKernel RadialKernel::from_string(std::string const& id)
{
    if (id == "wishart_radial") return wishart();
    return from_density(radial_density_from_string(id));
}

double RadialKernel::operator()(double y) const
{
    if (!density_) return std::exp(-y);
    return radial_G(*density_, y).value;
}

DualSampleValue complex_dual_single(int m, int n, double t,
                                    RadialKernel const& g, RngStream& stream)
{
    if (m < 1 || n < 1) throw std::invalid_argument("complex_dual_single: m, n >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("complex_dual_single: t >= 0");
    std::vector<double> u(n), v(m);
    for (double& x : u) x = stream.exponential();
    for (double& x : v) x = stream.exponential();
    double const t2 = t * t;
    if (g.is_exponential()) {
        CompensatedSum su, sv;
        for (double x : u) su.add(x);
        for (double x : v) sv.add(x);
        return {std::exp(-t2 * su.value() * sv.value()), DualRoute::ComplexSingle};
    }
    CompensatedSum logabs;
    bool negative = false;
    for (double uk : u) {
        for (double vl : v) {
            double const gv = g(t2 * uk * vl);
            if (gv == 0.0) return {0.0, DualRoute::ComplexSingle};
            negative ^= gv < 0.0;
            logabs.add(std::log(std::abs(gv)));
        }
    }
    double const mag = std::exp(logabs.value());
    return {negative ? -mag : mag, DualRoute::ComplexSingle};
}

DualSampleValue rademacher_dual(int n, double t, RngStream& stream)
{
    if (n < 1) throw std::invalid_argument("rademacher_dual: n >= 1");
    std::vector<double> u(n), v(n);
    for (double& x : u) x = stream.normal();
    for (double& x : v) x = stream.normal();
    double prod = 1.0;
    for (double uj : u) {
        for (double vk : v) prod *= std::cos(t * uj * vk);
    }
    return {prod, DualRoute::Rademacher};
}

double rademacher_bruteforce(int n, double t)
{
    if (n < 1 || n > 4) {
        throw std::invalid_argument("rademacher_bruteforce: requires 1 <= n <= 4");
    }
    int const cells = n * n;
    std::uint64_t const count = std::uint64_t{1} << cells;
    double const t2 = t * t;
    Eigen::MatrixXd r(n, n);
    CompensatedSum acc;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        for (int c = 0; c < cells; ++c) {
            r.data()[c] = ((bits >> c) & 1U) ? 1.0 : -1.0;
        }
        Eigen::MatrixXd const gram =
            Eigen::MatrixXd::Identity(n, n) + t2 * r.transpose() * r;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        // det^{-1/2} = prod 1 / L_ii.
        double logdet_half = 0.0;
        for (int i = 0; i < n; ++i) logdet_half += std::log(llt.matrixL()(i, i));
        acc.add(std::exp(-logdet_half));
    }
    return acc.value() / static_cast<double>(count);
}

}  // namespace htrmt
