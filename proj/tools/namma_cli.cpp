// Command-line front end: solve/match/verify/expand/scales plus direct
// special-function evaluation, with deterministic CSV/JSON output.
//
// Exit codes: 0 success, 1 numeric failure, 2 no matching solution (n = 2),
// 64 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "namma/namma.hpp"

using json = nlohmann::ordered_json;
using namespace namma;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct RunConfig {
    int n = 3;
    int d1 = 1;
    int d2 = 1;
    double tol = 1e-9;
    double t_min = 1e-3;
    int grid_size = 200;
    std::string out_path;
    std::string format = "csv";
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(cfg.out_path);
        if (!os) throw std::runtime_error("cannot open " + cfg.out_path);
        os << text;
    }
}

json config_json(const RunConfig& cfg, const std::string& command) {
    return json{{"command", command}, {"n", cfg.n},
                {"d1", cfg.d1},       {"d2", cfg.d2},
                {"tol", cfg.tol},     {"t_min", cfg.t_min},
                {"grid_size", cfg.grid_size}, {"format", cfg.format}};
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << fmt17(row[i]);
        os << "\n";
    }
    return os.str();
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    g.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double f = double(i) / (count - 1);
        g.push_back(lo * std::pow(hi / lo, f));
    }
    return g;
}

int cmd_match(const RunConfig& cfg) {
    const auto m = matching::shoot_w0(cfg.n, cfg.tol);
    const json results{{"w0_closed", m.w0_closed},
                       {"w0_shot", m.w0_shot},
                       {"difference", std::abs(m.w0_closed - m.w0_shot)},
                       {"w_at_one", m.w_at_one},
                       {"wp_at_one", m.wp_at_one},
                       {"residual", m.residual}};
    if (cfg.format == "json") {
        const json checks{
            {"routes_agree", std::abs(m.w0_closed - m.w0_shot) <= 1e-6},
            {"matching_condition",
             std::abs(m.wp_at_one - 0.5 * m.w_at_one) <= 1e-6}};
        emit(cfg, json{{"config", config_json(cfg, "match")},
                       {"results", results},
                       {"checks", checks}}
                      .dump(2) +
                      "\n");
    } else {
        emit(cfg, csv_table({"w0_closed", "w0_shot", "difference",
                             "w_at_one", "wp_at_one", "residual"},
                            {{m.w0_closed, m.w0_shot,
                              std::abs(m.w0_closed - m.w0_shot), m.w_at_one,
                              m.wp_at_one, m.residual}}));
    }
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    const auto ts = log_grid(cfg.t_min, 1.0, cfg.grid_size / 2 + 1);
    const auto sol = matching::matched_solution(
        cfg.n, cfg.t_min, cfg.tol, {ts.begin(), ts.end()});
    std::vector<std::vector<double>> rows;
    std::vector<double> full = ts;
    for (auto it = ts.rbegin() + 1; it != ts.rend(); ++it)
        full.push_back(1.0 / *it);
    for (double t : full) {
        const auto s = sol.eval(t);
        rows.push_back({s.t, s.w, s.wp, s.wpp,
                        ode::ode_residual_w(s.t, s.w, s.wp, s.wpp, cfg.n)});
    }
    if (cfg.format == "json") {
        json jrows = json::array();
        for (const auto& r : rows)
            jrows.push_back({{"t", r[0]},
                             {"w", r[1]},
                             {"wp", r[2]},
                             {"wpp", r[3]},
                             {"ode_residual", r[4]}});
        emit(cfg, json{{"config", config_json(cfg, "solve")},
                       {"results", {{"w0", sol.w0}, {"grid", jrows}}},
                       {"checks", json::object()}}
                      .dump(2) +
                      "\n");
    } else {
        emit(cfg, csv_table({"t", "w", "wp", "wpp", "ode_residual"}, rows));
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const potential::ModelParams params(cfg.n, cfg.d1, cfg.d2);
    const auto m = matching::shoot_w0(cfg.n, cfg.tol);
    const auto sol = matching::matched_solution(cfg.n, 0.01, 1e-10);

    double max_sym = 0.0;
    for (double t : log_grid(0.02, 0.99, 40)) {
        max_sym = std::max(max_sym,
                           std::abs(sol.eval(1.0 / t).w - sol.eval(t).w / t));
    }

    double max_nama_rel = 0.0;
    bool flags_ok = true;
    const double c = potential::nama_constant(params);
    for (double t : log_grid(0.05, 20.0, 25)) {
        const double x1 = 100.0;
        const double x2 = t * cfg.d2 * x1 / cfg.d1;
        const auto s = potential::sample_potential(params, sol, x1, x2);
        max_nama_rel = std::max(
            max_nama_rel, std::abs(potential::nama_residual(s, params)) / c);
        const auto [hp, cp] = potential::kahler_flags(s, params);
        flags_ok = flags_ok && hp && cp;
    }

    double max_first_integral = 0.0;
    for (double s : log_grid(1.001, 100.0, 40)) {
        const auto q = ode::frak_implicit(s, cfg.n, m.w0_shot);
        max_first_integral =
            std::max(max_first_integral,
                     std::abs(ode::first_integral_residual(q, cfg.n,
                                                           m.w0_shot)));
    }

    struct Check {
        std::string name;
        double value;
        double limit;
    };
    const std::vector<Check> checks{
        {"w0_route_difference", std::abs(m.w0_closed - m.w0_shot), 1e-6},
        {"matching_residual", std::abs(m.residual), 1e-6},
        {"symmetry_sup", max_sym, 1e-7},
        {"max_nama_relative_residual", max_nama_rel, 1e-6},
        {"first_integral_max_residual", max_first_integral, 1e-9},
        {"kahler_flags_all_true", flags_ok ? 0.0 : 1.0, 0.5}};

    if (cfg.format == "json") {
        json jchecks = json::array();
        bool all = true;
        for (const auto& ck : checks) {
            const bool pass = ck.value <= ck.limit;
            all = all && pass;
            jchecks.push_back({{"name", ck.name},
                               {"value", ck.value},
                               {"limit", ck.limit},
                               {"pass", pass}});
        }
        emit(cfg, json{{"config", config_json(cfg, "verify")},
                       {"results",
                        {{"w0_closed", m.w0_closed}, {"w0_shot", m.w0_shot}}},
                       {"checks", {{"all_pass", all}, {"items", jchecks}}}}
                      .dump(2) +
                      "\n");
        return all ? 0 : 1;
    }
    std::ostringstream os;
    os << "check,value,limit,pass\n";
    bool all = true;
    for (const auto& ck : checks) {
        const bool pass = ck.value <= ck.limit;
        all = all && pass;
        os << ck.name << "," << fmt17(ck.value) << "," << fmt17(ck.limit)
           << "," << (pass ? 1 : 0) << "\n";
    }
    emit(cfg, os.str());
    return all ? 0 : 1;
}

int cmd_expand(const RunConfig& cfg) {
    const potential::ModelParams params(cfg.n, cfg.d1, cfg.d2);
    const auto sol = matching::matched_solution(cfg.n, 1e-3, 1e-10);
    const auto ser = ode::series_near_one(cfg.n, sol.w0, 8);
    std::vector<std::vector<double>> rows;
    const double x1 = 100.0;
    for (double t : log_grid(0.0011, 0.1, cfg.grid_size)) {
        const double x2 = t * cfg.d2 * x1 / cfg.d1;
        const double exact = potential::sample_potential(params, sol, x1, x2).u;
        const double approx =
            potential::boundary_expansion_u(params, ser, x1, x2, 3);
        rows.push_back(
            {t, exact, approx, std::abs(approx - exact) / std::abs(exact)});
    }
    if (cfg.format == "json") {
        json jrows = json::array();
        for (const auto& r : rows)
            jrows.push_back({{"t", r[0]},
                             {"u_exact", r[1]},
                             {"u_expansion", r[2]},
                             {"rel_error", r[3]}});
        emit(cfg, json{{"config", config_json(cfg, "expand")},
                       {"results", {{"rows", jrows}}},
                       {"checks", json::object()}}
                      .dump(2) +
                      "\n");
    } else {
        emit(cfg,
             csv_table({"t", "u_exact", "u_expansion", "rel_error"}, rows));
    }
    return 0;
}

int cmd_scales(const RunConfig& cfg) {
    const potential::ModelParams params(cfg.n, cfg.d1, cfg.d2);
    const auto sol = matching::matched_solution(cfg.n, 0.05, 1e-10);
    std::vector<std::vector<double>> rows;
    for (double x1 : log_grid(10.0, 1e6, cfg.grid_size)) {
        const double x2 = cfg.d2 * x1 / cfg.d1;  // ray t = 1
        const auto s = potential::sample_potential(params, sol, x1, x2);
        const auto ls = potential::length_scales(params, s);
        rows.push_back({x1, x2, ls.torus_diam, ls.fiber_diam, ls.dist,
                        ls.vol_exponent});
    }
    if (cfg.format == "json") {
        json jrows = json::array();
        for (const auto& r : rows)
            jrows.push_back({{"x1", r[0]},
                             {"x2", r[1]},
                             {"torus_diam", r[2]},
                             {"fiber_diam", r[3]},
                             {"dist", r[4]},
                             {"vol_exponent", r[5]}});
        emit(cfg, json{{"config", config_json(cfg, "scales")},
                       {"results", {{"rows", jrows}}},
                       {"checks", json::object()}}
                      .dump(2) +
                      "\n");
    } else {
        emit(cfg, csv_table({"x1", "x2", "torus_diam", "fiber_diam", "dist",
                             "vol_exponent"},
                            rows));
    }
    return 0;
}

int cmd_specfun(const std::string& fn, const std::vector<double>& args,
                int n) {
    double value;
    if (fn == "gamma") {
        if (args.size() != 1) throw std::domain_error("gamma needs 1 arg");
        value = specfun::gamma_fn(args[0]);
    } else if (fn == "hyp2f1") {
        if (args.size() != 4) throw std::domain_error("hyp2f1 needs 4 args");
        value = specfun::hyp2f1(args[0], args[1], args[2], args[3]);
    } else if (fn == "gauss") {
        if (args.size() != 3) throw std::domain_error("gauss needs 3 args");
        value = specfun::gauss_at_one(args[0], args[1], args[2]);
    } else if (fn == "fprofile") {
        if (args.size() != 1) throw std::domain_error("fprofile needs x");
        value = specfun::f_profile(args[0], n);
    } else if (fn == "fquad") {
        if (args.size() != 1) throw std::domain_error("fquad needs x");
        value = specfun::f_profile_quadrature(args[0], n);
    } else {
        throw std::domain_error("unknown function: " + fn);
    }
    std::cout << fmt17(value) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ODE reduction of the non-archimedean Monge-Ampere "
                 "equation: matching constant, radial solutions, potential "
                 "diagnostics"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string fn_name;
    std::vector<double> fn_args;

    auto add_common = [&cfg](CLI::App* sub, bool with_model) {
        sub->add_option("--n", cfg.n, "ambient dimension");
        if (with_model) {
            sub->add_option("--d1", cfg.d1, "degree of the first divisor");
            sub->add_option("--d2", cfg.d2, "degree of the second divisor");
        }
        sub->add_option("--tol", cfg.tol, "numeric tolerance");
        sub->add_option("--t-min", cfg.t_min, "lower end of the t-grid");
        sub->add_option("--grid-size", cfg.grid_size, "output grid size");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* match = app.add_subcommand("match", "solve the matching problem");
    add_common(match, false);
    auto* solve = app.add_subcommand("solve", "matched radial solution grid");
    add_common(solve, false);
    auto* verify = app.add_subcommand("verify", "run invariant checks");
    add_common(verify, true);
    auto* expand =
        app.add_subcommand("expand", "boundary expansion vs exact potential");
    add_common(expand, true);
    auto* scales = app.add_subcommand("scales", "length scales along a ray");
    add_common(scales, true);
    auto* sf = app.add_subcommand("specfun", "evaluate a special function");
    sf->add_option("--n", cfg.n, "dimension parameter for the profiles");
    sf->add_option("fn", fn_name,
                   "gamma | hyp2f1 | gauss | fprofile | fquad")
        ->required();
    sf->add_option("args", fn_args, "numeric arguments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        if (match->parsed()) return cmd_match(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (expand->parsed()) return cmd_expand(cfg);
        if (scales->parsed()) return cmd_scales(cfg);
        if (sf->parsed()) return cmd_specfun(fn_name, fn_args, cfg.n);
    } catch (const matching::no_root_error&) {
        std::cerr << "no positive solution: the matching condition w'(1) = "
                     "w(1)/2 has no root for n = "
                  << cfg.n << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
