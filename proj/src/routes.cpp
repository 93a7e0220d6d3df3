// SPDX-License-Identifier: Apache-2.0
#include "htrmt/routes.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "htrmt/poisson_extremes.hpp"

namespace htrmt {
namespace {

std::vector<ShiftParam> shifts_of(RouteParams const& p)
{
    std::vector<ShiftParam> out;
    if (!p.ts.empty()) {
        for (double t : p.ts) out.push_back(ShiftParam::from_t(t));
    } else {
        out.push_back(ShiftParam::from_complex(p.shift()));
    }
    return out;
}

// Draws the matrix for one replica and returns its rescaled spectrum.
class SpectrumDraw {
  public:
    SpectrumDraw(EnsembleSpec const& spec, Regime regime) : spec_(spec), regime_(regime)
    {
        spec_.validate();
        if (spec_.kind == EnsembleKind::CauchySparse) {
            mask_ = std::make_shared<Mask const>(ensemble_mask(spec_));
        }
    }

    std::vector<double> operator()(RngStream& stream) const
    {
        double const scale = regime_scale(spec_, regime_);
        std::vector<double> lambdas;
        if (spec_.kind == EnsembleKind::WishartComplex) {
            lambdas = squared_singular_values(sample_matrix(spec_, stream).complex());
        } else {
            Eigen::MatrixXd a;
            fill_real_entries(spec_, mask_.get(), stream, a);
            lambdas = squared_singular_values(a);
        }
        for (double& l : lambdas) l /= scale;
        return lambdas;
    }

  private:
    EnsembleSpec spec_;
    Regime regime_;
    std::shared_ptr<Mask const> mask_;
};

ReplicaFn direct_route(RouteParams const& p)
{
    SpectrumDraw draw(p.ensemble, p.regime);
    auto const shifts = shifts_of(p);
    Power const power = p.effective_power();
    return [draw, shifts, power](RngStream& stream) {
        auto const lambdas = draw(stream);
        Complex v{1.0, 0.0};
        for (auto const& z : shifts) v *= det_functional(lambdas, z, power);
        return v;
    };
}

ReplicaFn cauchy_dual_route(RouteParams const& p)
{
    p.ensemble.validate();
    int const m = p.ensemble.m, n = p.ensemble.n;
    double const t = p.t;
    return [=](RngStream& s) { return Complex(cauchy_dual_single(m, n, t, s).value, 0.0); };
}

ReplicaFn cauchy_dual_sparse_route(RouteParams const& p)
{
    if (p.ensemble.kind != EnsembleKind::CauchySparse) {
        throw InvalidSpec("cauchy_dual_sparse requires a cauchy_sparse ensemble");
    }
    auto const pattern = std::make_shared<RowPattern const>(ensemble_mask(p.ensemble));
    int const b = *p.ensemble.b;
    double const t = p.t;
    return [=](RngStream& s) {
        return Complex(cauchy_dual_sparse(*pattern, b, t, s).value, 0.0);
    };
}

ReplicaFn general_r_route(RouteParams const& p)
{
    p.ensemble.validate();
    int const m = p.ensemble.m, n = p.ensemble.n;
    auto const ts = p.ts.empty() ? std::vector<double>{p.t} : p.ts;
    CharFn const g = p.char_fn;
    return [=](RngStream& s) { return Complex(general_r_dual(m, n, ts, g, s).value, 0.0); };
}

ReplicaFn complex_dual_route(RouteParams const& p)
{
    p.ensemble.validate();
    int const m = p.ensemble.m, n = p.ensemble.n;
    double const t = p.t;
    auto const kernel = std::make_shared<RadialKernel const>(RadialKernel::from_string(p.radial));
    return [=](RngStream& s) {
        return Complex(complex_dual_single(m, n, t, *kernel, s).value, 0.0);
    };
}

ReplicaFn rademacher_dual_route(RouteParams const& p)
{
    p.ensemble.validate();
    if (p.ensemble.m != p.ensemble.n) {
        throw InvalidSpec("rademacher_dual requires a square ensemble");
    }
    int const n = p.ensemble.n;
    double const t = p.t;
    return [=](RngStream& s) { return Complex(rademacher_dual(n, t, s).value, 0.0); };
}

ReplicaFn derivative_route(RouteParams const& p, int order)
{
    SpectrumDraw draw(p.ensemble, p.regime);
    auto const z = ShiftParam::from_complex(p.shift());
    return [draw, z, order](RngStream& stream) {
        auto const lambdas = draw(stream);
        Complex const f = det_functional(lambdas, z, Power::Half);
        auto const sums = weighted_resolvent_sums(lambdas, z);
        if (order == 1) return f * sums.s1;
        return f * (sums.s1 * sums.s1 + 2.0 * sums.s2);
    };
}

ReplicaFn poisson_truncated_route(RouteParams const& p)
{
    Complex const z = ShiftParam::from_complex(p.shift()).z();
    double const eps = p.cutoff;
    Complex const corr = truncation_correction(z, eps);
    return [=](RngStream& s) {
        return truncated_product(sample_process_unsorted(eps, s), z) * corr;
    };
}

struct Registry {
    std::mutex mutex;
    std::map<std::string, RouteFactory> factories{
        {"direct", direct_route},
        {"cauchy_dual", cauchy_dual_route},
        {"cauchy_dual_sparse", cauchy_dual_sparse_route},
        {"general_r_dual", general_r_route},
        {"complex_dual", complex_dual_route},
        {"rademacher_dual", rademacher_dual_route},
        {"corollary1", [](RouteParams const& p) { return derivative_route(p, 1); }},
        {"corollary1_second", [](RouteParams const& p) { return derivative_route(p, 2); }},
        {"poisson_truncated", poisson_truncated_route},
    };
};

Registry& registry()
{
    static Registry r;
    return r;
}

}  // namespace

SpectrumFn make_spectrum_draw(EnsembleSpec const& spec, Regime regime)
{
    return SpectrumDraw(spec, regime);
}

Complex RouteParams::shift() const
{
    return z ? *z : Complex(t * t, 0.0);
}

Power RouteParams::effective_power() const
{
    if (power) return *power;
    return ensemble.kind == EnsembleKind::WishartComplex ? Power::One : Power::Half;
}

void to_json(nlohmann::json& j, RouteParams const& p)
{
    j = nlohmann::json{{"ensemble", p.ensemble},
                       {"t", p.t},
                       {"regime", to_string(p.regime)},
                       {"char_fn", to_string(p.char_fn)},
                       {"radial", p.radial},
                       {"cutoff", p.cutoff}};
    if (p.power) j["power"] = *p.power == Power::Half ? "half" : "one";
    if (!p.ts.empty()) j["ts"] = p.ts;
    if (p.z) j["z"] = {p.z->real(), p.z->imag()};
}

void from_json(nlohmann::json const& j, RouteParams& p)
{
    if (!j.is_object()) throw InvalidSpec("route params must be a JSON object");
    static char const* const kKeys[] = {"ensemble", "t", "ts", "z", "power", "regime",
                                        "char_fn", "radial", "cutoff"};
    for (auto const& [key, value] : j.items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            throw InvalidSpec("unknown route parameter '" + key + "'");
        }
    }
    RouteParams out;
    try {
        if (j.contains("ensemble")) out.ensemble = j.at("ensemble").get<EnsembleSpec>();
        out.t = j.value("t", out.t);
        if (j.contains("ts")) out.ts = j.at("ts").get<std::vector<double>>();
        if (j.contains("z")) {
            auto const zz = j.at("z").get<std::vector<double>>();
            if (zz.size() != 2) throw InvalidSpec("z must be [re, im]");
            out.z = Complex(zz[0], zz[1]);
        }
        if (j.contains("power")) {
            auto const s = j.at("power").get<std::string>();
            if (s == "half") out.power = Power::Half;
            else if (s == "one") out.power = Power::One;
            else throw InvalidSpec("power must be \"half\" or \"one\"");
        }
        if (j.contains("regime")) out.regime = regime_from_string(j.at("regime").get<std::string>());
        if (j.contains("char_fn")) out.char_fn = char_fn_from_string(j.at("char_fn").get<std::string>());
        out.radial = j.value("radial", out.radial);
        out.cutoff = j.value("cutoff", out.cutoff);
    } catch (nlohmann::json::exception const& e) {
        throw InvalidSpec(std::string("route params: ") + e.what());
    } catch (std::invalid_argument const& e) {
        throw InvalidSpec(e.what());
    }
    p = out;
}

void register_route(std::string const& id, RouteFactory factory)
{
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.factories[id] = std::move(factory);
}

ReplicaFn make_route(std::string const& id, RouteParams const& params)
{
    RouteFactory factory;
    {
        auto& r = registry();
        std::lock_guard lock(r.mutex);
        auto const it = r.factories.find(id);
        if (it == r.factories.end()) throw UnknownRoute("unknown route '" + id + "'");
        factory = it->second;
    }
    return factory(params);
}

std::vector<std::string> route_ids()
{
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> ids;
    for (auto const& [id, f] : r.factories) ids.push_back(id);
    return ids;
}

}  // namespace htrmt
