// SPDX-License-Identifier: Apache-2.0
#include "htrmt/cli_app.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "htrmt/acceptance.hpp"
#include "htrmt/config.hpp"
#include "htrmt/harness.hpp"
#include "htrmt/poisson_extremes.hpp"
#include "htrmt/wishart_analytics.hpp"

namespace htrmt {
namespace {

using nlohmann::json;
using Applier = std::function<void(ExperimentConfig&)>;

// Raw flag values; each is copied into the config only when given.
struct Flags {
    std::string config;
    long replicas{};
    std::uint64_t seed{};
    int threads{};
    std::string output;
    std::string format;
    double threshold{};

    std::string kind;
    int m{};
    int n{};
    int b{};
    bool relaxed{};
    std::uint64_t ensemble_seed{};

    std::string route;
    std::string route_b;
    double t{};
    std::vector<double> ts;
    double z_re{};
    double z_im{};
    std::string power;
    std::string regime;
    std::string char_fn;
    std::string radial;
    double cutoff{};
    double ref_re{};
    double ref_im{};

    std::vector<double> x_grid;
    std::string statistic;
    double delta{};

    std::string quantity;
    bool scaled{};
    double gamma{};
    double sigma2{};
    double x{};
    double y{};
    double alpha{};

    std::vector<int> m_grid;
    std::vector<int> n_grid;
    std::vector<double> z_grid;
    double tolerance{};

    long export_samples{};
    std::string export_path;
    std::vector<int> only;
};

class Builder {
  public:
    Builder(CLI::App* app, Flags& f, std::vector<Applier>& appliers)
        : app_(app), f_(f), appliers_(appliers)
    {
    }

    template<class T, class Set>
    void opt(std::string const& name, T& var, std::string const& help, Set set)
    {
        CLI::Option* o = app_->add_option(name, var, help);
        appliers_.push_back([o, set](ExperimentConfig& c) {
            if (o->count() > 0) set(c);
        });
    }

    template<class Set>
    void flag(std::string const& name, bool& var, std::string const& help, Set set)
    {
        CLI::Option* o = app_->add_flag(name, var, help);
        appliers_.push_back([o, set](ExperimentConfig& c) {
            if (o->count() > 0) set(c);
        });
    }

    void common()
    {
        app_->add_option("--config", f_.config, "JSON experiment config (flags override it)");
        opt("--replicas", f_.replicas, "Monte Carlo replicas",
            [&f = f_](auto& c) { c.replicas = f.replicas; });
        opt("--seed", f_.seed, "run seed", [&f = f_](auto& c) { c.seed = f.seed; });
        opt("--threads", f_.threads, "worker threads (0: HEAVYTAIL_RMT_THREADS or all cores)",
            [&f = f_](auto& c) { c.threads = f.threads; });
        opt("--output", f_.output, "report path (default stdout)",
            [&f = f_](auto& c) { c.output = f.output; });
        opt("--format", f_.format, "json or csv", [&f = f_](auto& c) { c.format = f.format; });
    }

    void ensemble()
    {
        opt("--kind", f_.kind, "cauchy_full|cauchy_sparse|wishart_real|wishart_complex|rademacher",
            [&f = f_](auto& c) { c.params.ensemble.kind = ensemble_kind_from_string(f.kind); });
        opt("--m", f_.m, "rows", [&f = f_](auto& c) { c.params.ensemble.m = f.m; });
        opt("--n", f_.n, "columns", [&f = f_](auto& c) { c.params.ensemble.n = f.n; });
        opt("--b", f_.b, "nonzeros per column (cauchy_sparse)",
            [&f = f_](auto& c) { c.params.ensemble.b = f.b; });
        flag("--relaxed", f_.relaxed, "Bernoulli(b/n) mask",
             [&f = f_](auto& c) { c.params.ensemble.bernoulli_relaxed = f.relaxed; });
        opt("--ensemble-seed", f_.ensemble_seed, "seed of the fixed sparse mask",
            [&f = f_](auto& c) { c.params.ensemble.seed = f.ensemble_seed; });
    }

    void route()
    {
        opt("--route", f_.route, "route id", [&f = f_](auto& c) { c.route = f.route; });
        opt("--t", f_.t, "real shift t (z = t^2)", [&f = f_](auto& c) { c.params.t = f.t; });
        opt("--ts", f_.ts, "several shifts for product functionals",
            [&f = f_](auto& c) { c.params.ts = f.ts; });
        opt("--z-re", f_.z_re, "real part of z", [&f = f_](auto& c) {
            c.params.z = Complex(f.z_re, c.params.z ? c.params.z->imag() : 0.0);
        });
        opt("--z-im", f_.z_im, "imaginary part of z", [&f = f_](auto& c) {
            c.params.z = Complex(c.params.z ? c.params.z->real() : c.params.t * c.params.t, f.z_im);
        });
        opt("--power", f_.power, "half or one", [&f = f_](auto& c) {
            if (f.power != "half" && f.power != "one") throw ConfigError("--power: half or one");
            c.params.power = f.power == "half" ? Power::Half : Power::One;
        });
        opt("--regime", f_.regime, "extreme|wishart_global|unscaled",
            [&f = f_](auto& c) { c.params.regime = regime_from_string(f.regime); });
        opt("--char-fn", f_.char_fn, "cauchy or gaussian",
            [&f = f_](auto& c) { c.params.char_fn = char_fn_from_string(f.char_fn); });
        opt("--radial", f_.radial, "wishart_radial or uniform_radial",
            [&f = f_](auto& c) { c.params.radial = f.radial; });
        opt("--cutoff", f_.cutoff, "Poisson simulation cutoff",
            [&f = f_](auto& c) { c.params.cutoff = f.cutoff; });
    }

    void compare()
    {
        opt("--route-b", f_.route_b, "second route (same params, independent seed)",
            [&f = f_](auto& c) { c.route_b = f.route_b; });
        opt("--reference-re", f_.ref_re, "exact reference, real part", [&f = f_](auto& c) {
            c.reference = Complex(f.ref_re, c.reference ? c.reference->imag() : 0.0);
        });
        opt("--reference-im", f_.ref_im, "exact reference, imaginary part", [&f = f_](auto& c) {
            c.reference = Complex(c.reference ? c.reference->real() : 0.0, f.ref_im);
        });
        opt("--threshold", f_.threshold, "z-score threshold",
            [&f = f_](auto& c) { c.threshold = f.threshold; });
    }

    void tail()
    {
        opt("--x-grid", f_.x_grid, "ascending x values",
            [&f = f_](auto& c) { c.tail.x_grid = f.x_grid; });
        opt("--statistic", f_.statistic, "lambda1|max_entry|poisson_max",
            [&f = f_](auto& c) { c.tail.statistic = f.statistic; });
        opt("--delta", f_.delta, "eigenvalue count threshold",
            [&f = f_](auto& c) { c.tail.delta = f.delta; });
        opt("--cutoff", f_.cutoff, "Poisson cutoff (0: half the smallest x)",
            [&f = f_](auto& c) { c.tail.cutoff = f.cutoff; });
    }

    void wishart()
    {
        opt("--quantity", f_.quantity, "real|complex|saddle|steepest|mp|mp_norm|bessel",
            [&f = f_](auto& c) { c.wishart.quantity = f.quantity; });
        opt("--n", f_.n, "n", [&f = f_](auto& c) { c.wishart.n = f.n; });
        opt("--m", f_.m, "m", [&f = f_](auto& c) { c.wishart.m = f.m; });
        opt("--t", f_.t, "t", [&f = f_](auto& c) { c.wishart.t = f.t; });
        flag("--scaled", f_.scaled, "substitute t^2 -> t^2 / n",
             [&f = f_](auto& c) { c.wishart.scaled = f.scaled; });
        opt("--gamma", f_.gamma, "aspect ratio m/n", [&f = f_](auto& c) { c.wishart.gamma = f.gamma; });
        opt("--sigma2", f_.sigma2, "entry variance",
            [&f = f_](auto& c) { c.wishart.sigma2 = f.sigma2; });
        opt("--x", f_.x, "kernel argument x", [&f = f_](auto& c) { c.wishart.x = f.x; });
        opt("--y", f_.y, "kernel argument y", [&f = f_](auto& c) { c.wishart.y = f.y; });
        opt("--alpha", f_.alpha, "Bessel order", [&f = f_](auto& c) { c.wishart.alpha = f.alpha; });
    }

    void lemma1()
    {
        opt("--m", f_.m_grid, "m values", [&f = f_](auto& c) { c.lemma1.m = f.m_grid; });
        opt("--n", f_.n_grid, "n values", [&f = f_](auto& c) { c.lemma1.n = f.n_grid; });
        opt("--z", f_.z_grid, "z values", [&f = f_](auto& c) { c.lemma1.z = f.z_grid; });
        opt("--tolerance", f_.tolerance, "maximum residual",
            [&f = f_](auto& c) { c.lemma1.tolerance = f.tolerance; });
    }

    void poisson()
    {
        opt("--export-samples", f_.export_samples, "replicas exported as CSV",
            [&f = f_](auto& c) { c.poisson.export_samples = f.export_samples; });
        opt("--export-path", f_.export_path, "CSV path for exported points",
            [&f = f_](auto& c) { c.poisson.export_path = f.export_path; });
        opt("--threshold", f_.threshold, "z-score threshold",
            [&f = f_](auto& c) { c.threshold = f.threshold; });
    }

    void verify()
    {
        opt("--only", f_.only, "criterion ids", [&f = f_](auto& c) { c.only = f.only; });
    }

  private:
    CLI::App* app_;
    Flags& f_;
    std::vector<Applier>& appliers_;
};

json report_base(ExperimentConfig const& c)
{
    return {{"version", version_string()}, {"seed", c.seed}, {"command", c.command},
            {"config", c}};
}

json estimate_record(Estimate const& e, RouteParams const& p)
{
    json j = to_json(e);
    j["params"] = p;
    return j;
}

int cmd_estimate(ExperimentConfig const& c)
{
    auto const e = run_estimator(c.route, c.params, c.replicas, c.seed, c.threads);
    json rep = report_base(c);
    rep["estimate"] = estimate_record(e, c.params);
    emit_report(rep, c.output, c.format);
    return kExitOk;
}

int cmd_compare(ExperimentConfig const& c, std::ostream& err)
{
    auto const a = run_estimator(c.route, c.params, c.replicas, c.seed, c.threads);
    ComparisonReport rep;
    json out = report_base(c);
    if (c.route_b) {
        RouteParams const pb = c.params_b.value_or(c.params);
        auto const b = run_estimator(*c.route_b, pb, c.replicas, splitmix64(c.seed), c.threads);
        rep = compare(a, b, c.threshold);
        out["estimates"] = {estimate_record(a, c.params), estimate_record(b, pb)};
    } else {
        rep = compare_to_reference(a, *c.reference, c.threshold);
        out["estimates"] = {estimate_record(a, c.params)};
        out["reference"] = {c.reference->real(), c.reference->imag()};
    }
    out["z_score"] = rep.z_score;
    out["threshold"] = rep.threshold;
    out["pass"] = rep.pass;
    emit_report(out, c.output, c.format);
    err << (rep.pass ? "PASS" : "FAIL") << ": |z| = " << rep.z_score << "\n";
    return rep.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_poisson(ExperimentConfig const& c, std::ostream& err)
{
    Complex const z = ShiftParam::from_complex(c.params.shift()).z();
    auto const e = run_estimator("poisson_truncated", c.params, c.replicas, c.seed, c.threads);
    auto const rep = compare_to_reference(e, poisson_det_expectation(z), c.threshold);
    if (c.poisson.export_samples > 0) {
        if (c.poisson.export_path.empty()) throw ConfigError("poisson.export_path is required");
        std::vector<PoissonSample> samples;
        for (long i = 0; i < c.poisson.export_samples; ++i) {
            RngStream s(c.seed, static_cast<std::uint64_t>(i));
            samples.push_back(sample_process(c.params.cutoff, s));
        }
        std::ofstream out(c.poisson.export_path);
        if (!out) throw ConfigError("cannot write '" + c.poisson.export_path + "'");
        write_poisson_csv(out, samples);
    }
    json out = report_base(c);
    out["estimate"] = estimate_record(e, c.params);
    out["reference"] = {poisson_det_expectation(z).real(), poisson_det_expectation(z).imag()};
    out["truncation_correction"] = {truncation_correction(z, c.params.cutoff).real(),
                                    truncation_correction(z, c.params.cutoff).imag()};
    out["z_score"] = rep.z_score;
    out["pass"] = rep.pass;
    emit_report(out, c.output, c.format);
    err << (rep.pass ? "PASS" : "FAIL") << ": |z| = " << rep.z_score << "\n";
    return rep.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_tail(ExperimentConfig const& c)
{
    TailStudyConfig cfg;
    cfg.x_grid = c.tail.x_grid;
    cfg.replicas = c.replicas;
    cfg.statistic = tail_statistic_from_string(c.tail.statistic);
    cfg.delta = c.tail.delta;
    cfg.cutoff = c.tail.cutoff;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    auto const res = tail_study(cfg, c.params.ensemble);
    json out = report_base(c);
    out["columns"] = {"x", "empirical_tail", "stderr", "reference", "empirical_C"};
    json table = json::array();
    for (auto const& r : res.rows) {
        table.push_back({r.x, r.empirical_tail, r.std_error, r.reference, r.empirical_C});
    }
    out["table"] = table;
    out["sup_C"] = res.sup_C;
    if (res.mean_count_above_delta) {
        out["mean_count_above_delta"] = *res.mean_count_above_delta;
        out["count_stderr"] = *res.count_std_error;
    }
    emit_report(out, c.output, c.format);
    return kExitOk;
}

int cmd_wishart(ExperimentConfig const& c)
{
    auto const& w = c.wishart;
    json out = report_base(c);
    json params = {{"quantity", w.quantity}};
    QuadResult q{0.0, 0.0, 0};
    if (w.quantity == "real" || w.quantity == "complex") {
        q = w.quantity == "real" ? wishart_real_det_integral(w.n, w.m, w.t, w.scaled)
                                 : wishart_complex_det_integral(w.n, w.m, w.t, w.scaled);
        params.update({{"n", w.n}, {"m", w.m}, {"t", w.t}, {"scaled", w.scaled}});
    } else if (w.quantity == "saddle") {
        auto const s = saddle(w.t);
        q.value = s.z_star;
        out["second_deriv"] = s.second_deriv;
        params["t"] = w.t;
    } else if (w.quantity == "steepest") {
        q.value = steepest_descent_value(w.n, w.t);
        params.update({{"n", w.n}, {"t", w.t}});
    } else if (w.quantity == "mp" || w.quantity == "mp_norm") {
        auto const mp = MPParams::make(w.gamma, w.sigma2);
        q = w.quantity == "mp" ? mp_log_integral(w.t, mp) : mp_normalization(mp);
        params.update({{"gamma", w.gamma}, {"sigma2", w.sigma2}, {"t", w.t}});
    } else if (w.quantity == "bessel") {
        q.value = bessel_kernel(w.x, w.y, w.alpha);
        params.update({{"x", w.x}, {"y", w.y}, {"alpha", w.alpha}});
    } else {
        throw ConfigError("unknown wishart quantity '" + w.quantity + "'");
    }
    out["value"] = q.value;
    out["err_bound"] = q.err_bound;
    out["params"] = params;
    emit_report(out, c.output, c.format);
    return kExitOk;
}

int cmd_lemma1(ExperimentConfig const& c, std::ostream& err)
{
    json out = report_base(c);
    out["columns"] = {"m", "n", "z", "residual"};
    json table = json::array();
    double worst = 0.0;
    for (int m : c.lemma1.m) {
        for (int n : c.lemma1.n) {
            for (double z : c.lemma1.z) {
                double const r = lemma1_residual(m, n, z);
                worst = std::max(worst, r);
                table.push_back({m, n, z, r});
            }
        }
    }
    bool const pass = worst < c.lemma1.tolerance;
    out["table"] = table;
    out["max_residual"] = worst;
    out["pass"] = pass;
    emit_report(out, c.output, c.format);
    err << (pass ? "PASS" : "FAIL") << ": max residual " << worst << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_verify_all(ExperimentConfig const& c, std::ostream& err)
{
    AcceptanceOptions opts;
    opts.threads = c.threads;
    opts.only = c.only;
    opts.on_result = [&err](CriterionResult const& r) { err << format_result(r) << std::endl; };
    auto const results = run_acceptance(opts);
    bool all = true;
    json list = json::array();
    for (auto const& r : results) {
        all = all && r.pass;
        list.push_back(to_json(r));
    }
    if (!c.output.empty()) {
        json out = report_base(c);
        out["criteria"] = list;
        out["pass"] = all;
        emit_report(out, c.output, "json");
    }
    err << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return all ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, char const* const* argv, std::ostream& err)
{
    CLI::App app{"Spectral statistics of heavy-tailed random matrices: estimators, "
                 "analytic references and verification"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    Flags f;
    std::vector<Applier> appliers;

    struct Sub {
        char const* name;
        char const* help;
    };
    std::map<std::string, CLI::App*> subs;
    for (auto const& s : {Sub{"estimate", "run one Monte Carlo route"},
                          Sub{"compare", "cross-validate two routes or a route and a value"},
                          Sub{"poisson", "simulate the limiting Poisson process"},
                          Sub{"tail", "tail and extreme-value study"},
                          Sub{"wishart", "Wishart closed forms and references"},
                          Sub{"lemma1", "real/complex Wishart identity grid"},
                          Sub{"verify-all", "run the full acceptance suite"}}) {
        subs[s.name] = app.add_subcommand(s.name, s.help);
    }
    for (auto const& [name, sub] : subs) {
        Builder b(sub, f, appliers);
        b.common();
        if (name == "estimate" || name == "compare" || name == "poisson") {
            b.ensemble();
            b.route();
        }
        if (name == "compare") b.compare();
        if (name == "poisson") b.poisson();
        if (name == "tail") {
            b.ensemble();
            b.tail();
        }
        if (name == "wishart") b.wishart();
        if (name == "lemma1") b.lemma1();
        if (name == "verify-all") b.verify();
    }

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e, std::cout, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    std::string command;
    for (auto const& [name, sub] : subs) {
        if (sub->parsed()) command = name;
    }

    try {
        ExperimentConfig cfg;
        if (!f.config.empty()) cfg = load_config(f.config);
        cfg.command = command;
        if (command == "poisson") cfg.route = "poisson_truncated";
        for (auto const& apply : appliers) apply(cfg);
        cfg.validate();

        if (command == "estimate") return cmd_estimate(cfg);
        if (command == "compare") return cmd_compare(cfg, err);
        if (command == "poisson") return cmd_poisson(cfg, err);
        if (command == "tail") return cmd_tail(cfg);
        if (command == "wishart") return cmd_wishart(cfg);
        if (command == "lemma1") return cmd_lemma1(cfg, err);
        return cmd_verify_all(cfg, err);
    } catch (ConfigError const& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (std::logic_error const& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kExitConfigError;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
    }
}

}  // namespace htrmt
