// SPDX-License-Identifier: Apache-2.0
#include "htrmt/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#ifndef HTRMT_VERSION
#define HTRMT_VERSION "unknown"
#endif

namespace htrmt {
namespace {

using nlohmann::json;

void check_keys(json const& j, std::string const& where, std::set<std::string> const& allowed)
{
    if (!j.is_object()) throw ConfigError("config error at " + where + ": expected an object");
    for (auto const& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("config error at " + where + ": unknown key '" + key + "'");
        }
    }
}

template<class T>
void read(json const& j, char const* key, T& out, std::string const& where)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (json::exception const& e) {
        throw ConfigError("config error at " + where + "." + key + ": " + e.what());
    }
}

RouteParams read_params(json const& j, std::string const& where)
{
    try {
        return j.get<RouteParams>();
    } catch (std::exception const& e) {
        throw ConfigError("config error at " + where + ": " + e.what());
    }
}

std::string csv_cell(json const& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
        std::ostringstream os;
        os << std::setprecision(17) << v.get<double>();
        return os.str();
    }
    return v.dump();
}

void write_csv(std::ostream& os, json const& report)
{
    for (char const* key : {"version", "seed", "command"}) {
        if (report.contains(key)) os << "# " << key << "=" << csv_cell(report.at(key)) << "\n";
    }
    if (report.contains("config")) os << "# config=" << report.at("config").dump() << "\n";
    if (report.contains("columns") && report.contains("table")) {
        auto const& cols = report.at("columns");
        for (std::size_t i = 0; i < cols.size(); ++i) {
            os << (i ? "," : "") << cols[i].get<std::string>();
        }
        os << "\n";
        for (auto const& row : report.at("table")) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return;
    }
    std::vector<json> records;
    if (report.contains("estimate")) records.push_back(report.at("estimate"));
    if (report.contains("estimates")) {
        for (auto const& e : report.at("estimates")) records.push_back(e);
    }
    static char const* const kCols[] = {"route", "mean_re", "mean_im", "stderr", "replicas",
                                        "seed"};
    os << "route,mean_re,mean_im,stderr,replicas,seed\n";
    for (auto const& rec : records) {
        for (std::size_t i = 0; i < std::size(kCols); ++i) {
            os << (i ? "," : "") << csv_cell(rec.value(kCols[i], json()));
        }
        os << "\n";
    }
}

}  // namespace

void ExperimentConfig::validate() const
{
    static std::set<std::string> const kCommands{"estimate", "compare", "poisson", "tail",
                                                 "wishart",  "lemma1",  "verify-all"};
    if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
    if (format != "json" && format != "csv") {
        throw ConfigError("format must be \"json\" or \"csv\" (got \"" + format + "\")");
    }
    if (replicas < 2) throw ConfigError("replicas must be >= 2");
    if (threshold <= 0.0) throw ConfigError("threshold must be positive");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    try {
        params.ensemble.validate();
        if (params_b) params_b->ensemble.validate();
    } catch (InvalidSpec const& e) {
        throw ConfigError(std::string("config error at params.ensemble: ") + e.what());
    }
    if (command == "compare" && !route_b && !reference) {
        throw ConfigError("compare needs route_b or reference");
    }
    if (command == "tail") {
        for (std::size_t i = 0; i < tail.x_grid.size(); ++i) {
            if (!(tail.x_grid[i] > 0.0) || (i > 0 && !(tail.x_grid[i] > tail.x_grid[i - 1]))) {
                throw ConfigError("tail.x_grid must be positive and strictly ascending");
            }
        }
        if (tail.x_grid.empty()) throw ConfigError("tail.x_grid is empty");
    }
    for (int id : only) {
        if (id < 1 || id > 15) throw ConfigError("only: criterion ids are 1..15");
    }
}

void to_json(json& j, ExperimentConfig const& c)
{
    j = json{{"command", c.command},
             {"route", c.route},
             {"params", c.params},
             {"replicas", c.replicas},
             {"seed", c.seed},
             {"threshold", c.threshold},
             {"threads", c.threads},
             {"tail",
              {{"x_grid", c.tail.x_grid},
               {"statistic", c.tail.statistic},
               {"delta", c.tail.delta},
               {"cutoff", c.tail.cutoff}}},
             {"wishart",
              {{"quantity", c.wishart.quantity},
               {"n", c.wishart.n},
               {"m", c.wishart.m},
               {"t", c.wishart.t},
               {"scaled", c.wishart.scaled},
               {"gamma", c.wishart.gamma},
               {"sigma2", c.wishart.sigma2},
               {"x", c.wishart.x},
               {"y", c.wishart.y},
               {"alpha", c.wishart.alpha}}},
             {"lemma1",
              {{"m", c.lemma1.m},
               {"n", c.lemma1.n},
               {"z", c.lemma1.z},
               {"tolerance", c.lemma1.tolerance}}},
             {"poisson",
              {{"export_samples", c.poisson.export_samples},
               {"export_path", c.poisson.export_path}}},
             {"only", c.only},
             {"output", c.output},
             {"format", c.format}};
    if (c.route_b) j["route_b"] = *c.route_b;
    if (c.params_b) j["params_b"] = *c.params_b;
    if (c.reference) j["reference"] = {c.reference->real(), c.reference->imag()};
}

void from_json(json const& j, ExperimentConfig& c)
{
    check_keys(j, "<root>",
               {"command", "route", "params", "route_b", "params_b", "reference", "replicas",
                "seed", "threshold", "threads", "tail", "wishart", "lemma1", "poisson", "only",
                "output", "format"});
    ExperimentConfig out;
    std::string const root = "<root>";
    read(j, "command", out.command, root);
    read(j, "route", out.route, root);
    if (j.contains("params")) {
        out.params = read_params(j.at("params"), "params");
    }
    if (j.contains("route_b")) {
        std::string rb;
        read(j, "route_b", rb, root);
        out.route_b = rb;
    }
    if (j.contains("params_b")) out.params_b = read_params(j.at("params_b"), "params_b");
    if (j.contains("reference")) {
        std::vector<double> ref;
        read(j, "reference", ref, root);
        if (ref.size() != 2) throw ConfigError("config error at reference: expected [re, im]");
        out.reference = Complex(ref[0], ref[1]);
    }
    read(j, "replicas", out.replicas, root);
    read(j, "seed", out.seed, root);
    read(j, "threshold", out.threshold, root);
    read(j, "threads", out.threads, root);
    if (j.contains("tail")) {
        auto const& t = j.at("tail");
        check_keys(t, "tail", {"x_grid", "statistic", "delta", "cutoff"});
        read(t, "x_grid", out.tail.x_grid, "tail");
        read(t, "statistic", out.tail.statistic, "tail");
        read(t, "delta", out.tail.delta, "tail");
        read(t, "cutoff", out.tail.cutoff, "tail");
    }
    if (j.contains("wishart")) {
        auto const& w = j.at("wishart");
        check_keys(w, "wishart",
                   {"quantity", "n", "m", "t", "scaled", "gamma", "sigma2", "x", "y", "alpha"});
        read(w, "quantity", out.wishart.quantity, "wishart");
        read(w, "n", out.wishart.n, "wishart");
        read(w, "m", out.wishart.m, "wishart");
        read(w, "t", out.wishart.t, "wishart");
        read(w, "scaled", out.wishart.scaled, "wishart");
        read(w, "gamma", out.wishart.gamma, "wishart");
        read(w, "sigma2", out.wishart.sigma2, "wishart");
        read(w, "x", out.wishart.x, "wishart");
        read(w, "y", out.wishart.y, "wishart");
        read(w, "alpha", out.wishart.alpha, "wishart");
    }
    if (j.contains("lemma1")) {
        auto const& l = j.at("lemma1");
        check_keys(l, "lemma1", {"m", "n", "z", "tolerance"});
        read(l, "m", out.lemma1.m, "lemma1");
        read(l, "n", out.lemma1.n, "lemma1");
        read(l, "z", out.lemma1.z, "lemma1");
        read(l, "tolerance", out.lemma1.tolerance, "lemma1");
    }
    if (j.contains("poisson")) {
        auto const& p = j.at("poisson");
        check_keys(p, "poisson", {"export_samples", "export_path"});
        read(p, "export_samples", out.poisson.export_samples, "poisson");
        read(p, "export_path", out.poisson.export_path, "poisson");
    }
    read(j, "only", out.only, root);
    read(j, "output", out.output, root);
    read(j, "format", out.format, root);
    out.validate();
    c = out;
}

ExperimentConfig parse_config(std::string const& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (json::parse_error const& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return j.get<ExperimentConfig>();
}

ExperimentConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (ConfigError const& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_config(ExperimentConfig const& c, std::string const& path)
{
    emit_report(json(c), path, "json");
}

std::string version_string()
{
    return HTRMT_VERSION;
}

void emit_report(json const& report, std::string const& path, std::string const& format)
{
    if (format != "json" && format != "csv") {
        throw ConfigError("format must be \"json\" or \"csv\"");
    }
    auto const write = [&](std::ostream& os) {
        if (format == "json") {
            os << report.dump(2) << "\n";
        } else {
            write_csv(os, report);
        }
    };
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    fs::path const target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ConfigError("cannot write report to '" + path + "'");
        write(out);
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ConfigError("failed writing report to '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError("cannot move report into '" + path + "'");
    }
}

}  // namespace htrmt
