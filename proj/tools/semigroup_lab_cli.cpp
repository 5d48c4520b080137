// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semigroup_lab.h"

using nlohmann::json;

namespace {

struct Session {
    sgl_session* s = nullptr;
    Session() : s(sgl_session_new()) {}
    ~Session() { sgl_session_free(s); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string take(char* p) {
    std::string out = p ? p : "";
    sgl_string_free(p);
    return out;
}

int finish(sgl_status st, const Session& ses) {
    if (st == SGL_OK) return 0;
    if (st == SGL_ERR_BREACH) return 2;
    std::cerr << "error: " << sgl_session_last_error(ses.s) << "\n";
    return 1;
}

void print_num(double v, int digits = 12) { std::printf("%.*g", digits, v); }

double num_or_inf(const json& j) {
    if (j.is_string()) return std::numeric_limits<double>::infinity();
    if (j.is_null()) return std::nan("");
    return j.get<double>();
}

void render_interval(const json& rep) {
    const json& ir = rep.at("interval_report");
    const json& iv = ir.at("interval");
    if (iv.at("empty").get<bool>()) {
        std::printf("I = (empty)\n");
    } else {
        double lo = num_or_inf(iv.at("p_lo"));
        double hi = num_or_inf(iv.at("p_hi"));
        if (iv.at("unbounded").get<bool>())
            std::printf("I = [%.6f, inf)\n", lo);
        else
            std::printf("I = [%.6f, %.6f]\n", lo, hi);
    }
    if (!ir.value("closed_form_mode_ok", true))
        std::printf("note: beta' = 0 with alpha_s B' > 0 -- quasi-contractivity may fail at the "
                    "interval boundary (coercivity mode still available)\n");
    if (ir.contains("extended") && !ir.at("extended").is_null())
        std::printf("extended: p_min = %.12g, p_max = %.12g\n",
                    num_or_inf(ir.at("extended").at("p_min")),
                    num_or_inf(ir.at("extended").at("p_max")));
    std::printf("%12s %14s %14s %14s %6s\n", "p", "eps_p", "omega_hat_p", "B_hat_p", "in-I");
    for (const auto& row : ir.at("rows")) {
        std::printf("%12.6g %14.6g %14.6g %14.6g %6s\n", num_or_inf(row.at("p")),
                    row.at("eps").get<double>(), row.at("omega_hat").get<double>(),
                    row.at("B_hat").get<double>(), row.at("in_interval").get<bool>() ? "yes" : "no");
    }
}

void render_hardy(const json& rep) {
    const json& h = rep.at("hardy");
    std::printf("p_minus = ");
    print_num(num_or_inf(h.at("p_minus")));
    std::printf("\np_plus  = ");
    print_num(num_or_inf(h.at("p_plus")));
    std::printf("\np_max   = ");
    print_num(num_or_inf(h.at("p_max")));
    std::printf("\np_min   = ");
    print_num(num_or_inf(h.at("p_min")));
    std::printf("\n");
}

void render_generic(const json& rep) {
    if (rep.contains("trajectory")) {
        std::printf("%8s %10s %14s %14s %14s %-8s %s\n", "p", "t", "measured", "bound", "margin",
                    "method", "status");
        for (const auto& pt : rep.at("trajectory").at("points"))
            std::printf("%8.4g %10.4g %14.8g %14.8g %14.6g %-8s %s\n", pt.at("p").get<double>(),
                        pt.at("t").get<double>(), pt.at("measured").get<double>(),
                        pt.at("bound").get<double>(), pt.at("margin").get<double>(),
                        pt.at("method").get<std::string>().c_str(),
                        pt.at("status").get<std::string>().c_str());
        return;
    }
    if (rep.contains("neumann")) {
        const json& nn = rep.at("neumann");
        std::printf("p = %.12g, n = %zu, limit = %.12g\n", nn.at("p").get<double>(),
                    nn.at("n").get<std::size_t>(), nn.at("limit_value").get<double>());
        std::printf("%10s %16s %16s %16s %14s\n", "lambda", "closed_form", "quadrature",
                    "discrete", "norm_p");
        for (const auto& row : nn.at("rows"))
            std::printf("%10.4g %16.10g %16.10g %16.10g %14.8g\n", row.at("lambda").get<double>(),
                        row.at("closed_form").get<double>(), row.at("quadrature").get<double>(),
                        row.at("discrete").get<double>(), row.at("norm_p").get<double>());
        if (rep.contains("interval"))
            std::printf("interval endpoints: [%.10f, %.10f]\n",
                        rep.at("interval").at("p_lo").get<double>(),
                        rep.at("interval").at("p_hi").get<double>());
        return;
    }
    if (rep.contains("checks")) {
        for (const auto& chk : rep.at("checks"))
            std::printf("%-24s %s\n", chk.at("name").get<std::string>().c_str(),
                        chk.at("pass").get<bool>() ? "PASS" : "FAIL");
        std::printf("overall: %s\n", rep.at("pass").get<bool>() ? "PASS" : "FAIL");
        return;
    }
    std::printf("%s\n", rep.dump(2).c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semigroup-lab: L^p growth bounds and audits for divergence-form operators "
                 "with complex coefficients"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 42;
    int threads = 1;
    bool as_json = false, as_csv = false;
    if (const char* env = std::getenv("SEMIGROUP_LAB_THREADS")) threads = std::atoi(env);
    app.add_option("--seed", seed, "seed for all randomized routines")->capture_default_str();
    app.add_option("--threads", threads, "worker thread cap");
    app.add_flag("--json", as_json, "emit the JSON report");
    app.add_flag("--csv", as_csv, "emit plot-ready CSV when available");

    // analyze
    auto* cmd_an = app.add_subcommand("analyze", "measure constants and report the interval");
    cmd_an->add_option("--config", config_path, "problem configuration (JSON)")->required();
    int an_N = 0;
    cmd_an->add_option("--N", an_N, "dimension for the endpoint extension (N >= 3)");

    // interval
    auto* cmd_iv = app.add_subcommand("interval", "closed-form interval from declared constants");
    json decl = json::object();
    double val;
    for (const char* name : {"alpha-s", "alpha-a", "M", "beta-prime", "B-prime", "beta1", "B1",
                             "beta2", "B2", "gamma", "Gamma", "beta-hat", "B-hat", "c-hat"}) {
        std::string key = name;
        for (auto& ch : key)
            if (ch == '-') ch = '_';
        cmd_iv->add_option_function<double>(
            std::string("--") + name, [&decl, key](const double& v) { decl[key] = v; },
            "declared " + key);
    }
    (void)val;
    std::string iv_constants_file;
    cmd_iv->add_option("--constants", iv_constants_file, "declared constants (JSON file)");
    std::vector<double> iv_p;
    cmd_iv->add_option("--p", iv_p, "p grid for the report table");
    int iv_N = 0;
    cmd_iv->add_option("--N", iv_N, "dimension for the endpoint extension (N >= 3)");

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "semigroup audits on the configured problem");
    cmd_sim->add_option("--config", config_path, "problem configuration (JSON)")->required();
    std::string sim_audit = "qc";
    cmd_sim->add_option("--audit", sim_audit, "qc | weighted | smoothing | truncation")
        ->capture_default_str();
    std::vector<double> sim_p, sim_t, sim_xi, sim_m;
    cmd_sim->add_option("--p", sim_p, "exponent list");
    cmd_sim->add_option("--t", sim_t, "time list");
    cmd_sim->add_option("--xi", sim_xi, "twist rates (weighted audit)");
    cmd_sim->add_option("--m", sim_m, "truncation levels");
    double sim_T = 0.05, sim_tol = 1e-3, sim_dt = 0.0;
    cmd_sim->add_option("--T", sim_T, "horizon for the truncation audit");
    cmd_sim->add_option("--tol", sim_tol, "bound allowance");
    cmd_sim->add_option("--dt", sim_dt, "time step for the stepping propagator");
    std::string sim_U;
    cmd_sim->add_option("--U", sim_U, "absorption potential (DSL expression)");
    std::string sim_r;
    cmd_sim->add_option("--r", sim_r, "target exponent for smoothing (number or 'inf')");

    // verify
    auto* cmd_ver = app.add_subcommand("verify", "identity and inequality suites");
    cmd_ver->add_option("--config", config_path, "problem configuration (JSON)")->required();
    int ver_probes = 50;
    cmd_ver->add_option("--probes", ver_probes, "probe count")->capture_default_str();

    // example
    auto* cmd_ex = app.add_subcommand("example", "worked examples and counterexamples");
    std::string ex_name;
    cmd_ex->add_option("name", ex_name, "hardy | neumann | divfree | drift-synthesis")->required();
    double ex_beta = 0.75, ex_p = 0.0, ex_alpha_a = 0.0, ex_beta_hat = 0.0, ex_B_hat = 0.0;
    int ex_N = 5;
    std::size_t ex_n = 2049;
    std::vector<double> ex_lambda, ex_c;
    bool ex_neumann_bc = false;
    cmd_ex->add_option("--beta", ex_beta, "Hardy coupling in (0,1)");
    cmd_ex->add_option("--N", ex_N, "space dimension");
    cmd_ex->add_option("--lambda", ex_lambda, "witness scaling list");
    cmd_ex->add_option("--p", ex_p, "exponent override");
    cmd_ex->add_option("--n", ex_n, "grid nodes");
    cmd_ex->add_option("--c", ex_c, "anti-symmetric magnitudes (divfree)");
    cmd_ex->add_flag("--neumann", ex_neumann_bc, "divfree: use the Neumann variant");
    cmd_ex->add_option("--alpha-a", ex_alpha_a, "drift synthesis alpha_a");
    cmd_ex->add_option("--beta-hat", ex_beta_hat, "drift synthesis beta_hat");
    cmd_ex->add_option("--B-hat", ex_B_hat, "drift synthesis B_hat");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    Session ses;
    sgl_session_set_seed(ses.s, seed);
    if (threads > 0) sgl_session_set_threads(ses.s, threads);

    try {
        char* out = nullptr;
        sgl_status st = SGL_OK;
        json rep;

        if (cmd_an->parsed()) {
            st = sgl_session_load_config(ses.s, slurp(config_path).c_str());
            if (st != SGL_OK) return finish(st, ses);
            json opts = json::object();
            if (an_N >= 3) opts["N"] = an_N;
            st = sgl_run_analyze(ses.s, opts.dump().c_str(), &out);
        } else if (cmd_iv->parsed()) {
            if (!iv_constants_file.empty()) {
                json fromfile = json::parse(slurp(iv_constants_file));
                fromfile.update(decl);
                decl = fromfile;
            }
            json opts = json::object();
            if (!iv_p.empty()) opts["p_grid"] = iv_p;
            if (iv_N >= 3) opts["N"] = iv_N;
            st = sgl_run_interval(ses.s, decl.dump().c_str(), opts.dump().c_str(), &out);
        } else if (cmd_sim->parsed()) {
            st = sgl_session_load_config(ses.s, slurp(config_path).c_str());
            if (st != SGL_OK) return finish(st, ses);
            json opts{{"audit", sim_audit}, {"tol", sim_tol}};
            if (!sim_p.empty()) opts["p"] = sim_p.size() == 1 ? json(sim_p[0]) : json(sim_p);
            if (!sim_t.empty()) opts["t"] = sim_t;
            if (!sim_xi.empty()) opts["xi"] = sim_xi;
            if (!sim_m.empty()) opts["m"] = sim_m;
            if (sim_dt > 0.0) opts["dt"] = sim_dt;
            if (!sim_U.empty()) opts["U"] = sim_U;
            if (!sim_r.empty()) opts["r"] = sim_r == "inf" ? json("inf") : json(std::stod(sim_r));
            opts["T"] = sim_T;
            st = sgl_run_simulate(ses.s, opts.dump().c_str(), &out);
        } else if (cmd_ver->parsed()) {
            st = sgl_session_load_config(ses.s, slurp(config_path).c_str());
            if (st != SGL_OK) return finish(st, ses);
            json opts{{"probes", ver_probes}};
            st = sgl_run_verify(ses.s, opts.dump().c_str(), &out);
        } else if (cmd_ex->parsed()) {
            json params;
            if (ex_name == "hardy") params = {{"beta", ex_beta}, {"N", ex_N}};
            if (ex_name == "neumann") {
                if (!ex_lambda.empty()) params["lambda"] = ex_lambda;
                if (ex_p > 0.0) params["p"] = ex_p;
                params["n"] = ex_n;
            }
            if (ex_name == "divfree") {
                if (!ex_c.empty()) params["c"] = ex_c;
                params["n"] = ex_n == 2049 ? 33 : ex_n;
                params["neumann"] = ex_neumann_bc;
            }
            if (ex_name == "drift-synthesis")
                params = {{"alpha_a", ex_alpha_a}, {"beta_hat", ex_beta_hat}, {"B_hat", ex_B_hat}};
            st = sgl_run_example(ses.s, ex_name.c_str(), params.dump().c_str(), &out);
        }

        if (!out) return finish(st, ses);
        rep = json::parse(take(out));
        if (as_json) {
            std::printf("%s\n", rep.dump(2).c_str());
        } else if (as_csv && rep.contains("csv")) {
            std::fputs(rep.at("csv").get<std::string>().c_str(), stdout);
        } else if (rep.contains("interval_report")) {
            render_interval(rep);
        } else if (rep.contains("hardy")) {
            render_hardy(rep);
        } else {
            render_generic(rep);
        }
        return st == SGL_OK ? 0 : (st == SGL_ERR_BREACH ? 2 : finish(st, ses));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
