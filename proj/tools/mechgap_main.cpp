// mechgap: revenue computations for single-item selling mechanisms over
// parametric value distributions, plus the worst-case instance generators
// and the verification suite.
//
// Exit codes: 0 success, 1 input/parse error, 2 numeric failure,
// 3 unsupported combination, 4 verification failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mechgap/instances.hpp"
#include "mechgap/json_io.hpp"
#include "mechgap/mechanisms.hpp"
#include "mechgap/special_functions.hpp"
#include "mechgap/transforms.hpp"
#include "mechgap/verify.hpp"

namespace {

using nlohmann::json;
using namespace mechgap;

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
    double series_tol = ToleranceConfig{}.series_tol;
    double quad_tol = ToleranceConfig{}.quad_tol;
    double root_tol = ToleranceConfig{}.root_tol;
    int max_iter = ToleranceConfig{}.max_iter;
    int grid_resolution = ToleranceConfig{}.grid_resolution;

    ToleranceConfig config() const {
        ToleranceConfig cfg{series_tol, quad_tol, root_tol, max_iter, grid_resolution};
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--series-tol", flags.series_tol, "series tail tolerance");
    cmd->add_option("--quad-tol", flags.quad_tol, "quadrature tolerance");
    cmd->add_option("--root-tol", flags.root_tol, "root-finding tolerance");
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap");
    cmd->add_option("--grid-resolution", flags.grid_resolution,
                    "price-grid points per unit");
}

json g_outputs = json::array();  // collected for the optional run record

void emit(const json& j, const std::string& out_path) {
    g_outputs.push_back(j);
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        out << j.dump(2) << '\n';
    }
}

void write_run_record(const std::string& path, const std::string& command,
                      const CommonFlags& flags, std::uint64_t seed,
                      double wall_seconds) {
    json record = {{"command", command},
                   {"config",
                    {{"series_tol", flags.series_tol},
                     {"quad_tol", flags.quad_tol},
                     {"root_tol", flags.root_tol},
                     {"max_iter", flags.max_iter},
                     {"grid_resolution", flags.grid_resolution},
                     {"seed", seed}}},
                   {"outputs", g_outputs},
                   {"wall_time_seconds", wall_seconds},
                   {"version", kVersion}};
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open record file: " + path);
    out << record.dump(2) << '\n';
}

// ---- constant ----

int cmd_constant(const std::string& name, const CommonFlags& flags) {
    auto cfg = flags.config();
    double value = 0.0, err = cfg.quad_tol;
    if (name == "cstar") {
        value = c_star(cfg);
    } else if (name == "pi2over6") {
        value = ar_upper_constant(cfg);
    } else {
        std::cerr << "unknown constant: " << name << '\n';
        return 1;
    }
    g_outputs.push_back({{"constant", name}, {"value", value}, {"error", err}});
    std::cout.precision(17);
    std::cout << name << " = " << value << " +- " << err << '\n';
    return 0;
}

// ---- revenue ----

int cmd_revenue(const std::string& path, const std::string& mechanism,
                std::optional<double> price, std::optional<double> reserve,
                const std::string& policy_path, std::optional<std::uint64_t> samples,
                std::uint64_t seed, const CommonFlags& flags,
                const std::string& out_path) {
    auto cfg = flags.config();
    Instance inst = load_instance(path);

    std::optional<SpmPolicy> policy;
    if (!policy_path.empty()) {
        std::ifstream in(policy_path);
        if (!in) throw std::invalid_argument("cannot open policy file: " + policy_path);
        policy = policy_from_json(json::parse(in));
    }

    RevenueReport rep;
    if (mechanism == "ap") {
        if (samples && price) {
            rep = mechanism_mc(inst, ApAt{*price}, {*samples, seed});
        } else if (price) {
            rep = {"AP", ap_revenue(inst, *price), *price, std::nullopt, 0.0,
                   "closed_form"};
        } else {
            rep = ap_optimal(inst, cfg);
        }
    } else if (mechanism == "ar") {
        double r = reserve ? *reserve : (price ? *price : -1.0);
        if (samples && r >= 0.0) {
            rep = mechanism_mc(inst, ArAt{r}, {*samples, seed});
        } else if (r >= 0.0) {
            rep = {"AR", ar_revenue(inst, r, cfg), r, std::nullopt, cfg.quad_tol,
                   "quadrature"};
        } else {
            rep = ar_optimal(inst, cfg);
        }
    } else if (mechanism == "spm") {
        SpmPolicy p = policy ? *policy : *spm_opt_triangular(inst).policy;
        if (samples) {
            rep = mechanism_mc(inst, SpmWith{p}, {*samples, seed});
        } else {
            rep = {"SPM", spm_revenue(inst, p), std::nullopt, p, 0.0, "closed_form"};
        }
    } else if (mechanism == "opt") {
        if (samples) {
            rep = myerson_mc(inst, {*samples, seed});
        } else {
            rep = spm_opt_triangular(inst);
        }
    } else {
        std::cerr << "unknown mechanism: " << mechanism
                  << " (expected ap|spm|ar|opt)\n";
        return 1;
    }
    emit(to_json(rep), out_path);
    return 0;
}

// ---- gen ----

int cmd_gen(const std::string& which, const GenParams& params,
            std::optional<double> v1, const CommonFlags& flags,
            const std::string& out_path) {
    auto cfg = flags.config();
    Instance inst;
    json diagnostics;
    if (which == "spm-ap") {
        PartitionInfo info;
        inst = gen_spm_ap_worst(params, cfg, &info);
        diagnostics = {{"a", info.a}, {"b", info.b}, {"delta", info.delta}};
    } else if (which == "ar-ap-iid") {
        inst = gen_ar_ap_iid(params.n);
    } else if (which == "ar-ap-regular") {
        PartitionInfo info;
        inst = gen_ar_ap_regular(params, &info);
        diagnostics = {{"a", info.a}, {"b", info.b}, {"delta", info.delta}};
    } else if (which == "opt-ar-2") {
        inst = gen_opt_ar_two(params.t);
    } else if (which == "opt-ar-3") {
        ThreeBuyerDiagnostics diag;
        inst = gen_opt_ar_three(v1, cfg, &diag);
        diagnostics = {{"v1", diag.v1},
                       {"v2", diag.v2},
                       {"opt", diag.opt},
                       {"ar_closed_v2", diag.ar_closed_v2}};
    } else if (which == "opt-ar-4") {
        inst = gen_opt_ar_four();
    } else {
        std::cerr << "unknown generator: " << which << '\n';
        return 1;
    }
    json j = to_json(inst);
    if (!diagnostics.is_null()) j["diagnostics"] = diagnostics;
    emit(j, out_path);
    return 0;
}

// ---- verify ----

int cmd_verify(const std::string& suite, std::uint64_t seed, bool quick,
               const CommonFlags& flags) {
    VerifyOptions opts;
    opts.seed = seed;
    opts.cfg = flags.config();
    opts.quick = quick;
    auto t0 = std::chrono::steady_clock::now();
    auto results = run_verification(suite, opts);
    bool ok = print_verification(std::cout, results);
    auto t1 = std::chrono::steady_clock::now();
    std::cerr << "verify wall time: "
              << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    return ok ? 0 : 4;
}

// ---- curve ----

int cmd_curve(const std::string& kind, const std::string& path,
              const std::string& range, const std::string& fn,
              std::optional<double> reserve, const CommonFlags& flags,
              const std::string& out_path) {
    auto cfg = flags.config();
    double lo = 0.0, hi = 0.0, step = 0.0;
    {
        char c1 = 0, c2 = 0;
        std::istringstream ss(range);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
            step <= 0.0 || hi < lo)
            throw std::invalid_argument("range must be lo:hi:step with step > 0");
    }

    std::optional<Instance> inst;
    if (!path.empty()) inst = load_instance(path);

    std::function<double(double)> f;
    if (kind == "special") {
        if (fn == "R") f = [&](double x) { return fn_R(x); };
        else if (fn == "Q") f = [&](double x) { return fn_Q(x, cfg); };
        else if (fn == "V") f = [&](double x) { return fn_V(x); };
        else if (fn == "psi1") f = [](double x) { return psi1(x); };
        else if (fn == "psi2") f = [](double x) { return psi2(x); };
        else if (fn == "exp_neg_Q") f = [&](double x) { return exp_neg_Q(x, cfg); };
        else throw std::invalid_argument("unknown --fn (R|Q|V|psi1|psi2|exp_neg_Q)");
    } else {
        if (!inst) throw std::invalid_argument("curve " + kind + " needs an instance");
        if (kind == "ap") f = [&](double x) { return ap_revenue(*inst, x); };
        else if (kind == "ar") f = [&](double x) { return ar_revenue(*inst, x, cfg); };
        else if (kind == "d1") f = [&](double x) { return d1(*inst, x); };
        else if (kind == "d2") f = [&](double x) { return d2(*inst, x); };
        else if (kind == "rq") {
            if (inst->size() != 1)
                throw UnsupportedError("curve rq expects a single-buyer instance");
            // clamp q = 0 to the limit so ranges may start at the origin
            f = [&](double x) {
                return revenue_quantile(inst->buyers[0], std::max(x, 1e-12));
            };
        } else {
            throw std::invalid_argument("unknown curve kind");
        }
    }
    (void)reserve;

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw std::invalid_argument("cannot open output file: " + out_path);
        os = &file;
    }
    os->precision(17);
    *os << "x,value\n";
    auto rows = static_cast<long>((hi - lo) / step * (1.0 + 1e-12));
    for (long i = 0; i <= rows; ++i) {
        double x = lo + step * static_cast<double>(i);
        *os << x << ',' << f(x) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"revenue gaps of single-item selling mechanisms"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i) command_line += ' ';
        command_line += argv[i];
    }
    std::string record_path;
    app.add_option("--record", record_path,
                   "write a run record (command, config, outputs, timing) to this file");

    // constant
    auto* constant = app.add_subcommand("constant", "print a gap constant");
    std::string const_name;
    constant->add_option("name", const_name, "cstar | pi2over6")->required();
    CommonFlags const_flags;
    add_common(constant, const_flags);

    // revenue
    auto* revenue = app.add_subcommand("revenue", "compute mechanism revenue");
    std::string rev_path, rev_mech, rev_policy, rev_out;
    std::optional<double> rev_price, rev_reserve;
    std::optional<std::uint64_t> rev_samples;
    std::uint64_t rev_seed = 0;
    revenue->add_option("instance", rev_path, "instance JSON path, or -")->required();
    revenue->add_option("mechanism", rev_mech, "ap | spm | ar | opt")->required();
    revenue->add_option("--price", rev_price, "posted price (ap)");
    revenue->add_option("--reserve", rev_reserve, "reserve price (ar)");
    revenue->add_option("--policy", rev_policy, "policy JSON path (spm)");
    revenue->add_option("--mc-samples", rev_samples, "Monte Carlo sample count");
    revenue->add_option("--seed", rev_seed, "Monte Carlo seed");
    revenue->add_option("--out", rev_out, "output path (default stdout)");
    CommonFlags rev_flags;
    add_common(revenue, rev_flags);

    // gen
    auto* gen = app.add_subcommand("gen", "emit a lower-bound instance");
    std::string gen_which, gen_out;
    GenParams gen_params;
    std::optional<double> gen_v1;
    gen->add_option("which", gen_which,
                    "spm-ap | ar-ap-iid | ar-ap-regular | opt-ar-2 | opt-ar-3 | opt-ar-4")
        ->required();
    gen->add_option("--epsilon", gen_params.epsilon, "accuracy parameter");
    gen->add_option("--n", gen_params.n, "partition size / buyer count");
    gen->add_option("--t", gen_params.t, "equal-revenue truncation");
    gen->add_option("--v1", gen_v1, "fix v1 instead of optimizing (opt-ar-3)");
    gen->add_option("--out", gen_out, "output path (default stdout)");
    CommonFlags gen_flags;
    add_common(gen, gen_flags);

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    std::string verify_suite = "all";
    std::uint64_t verify_seed = 0;
    bool verify_quick = false;
    verify->add_option("suite", verify_suite, "all | spm-ap | ar-ap | opt-ar | properties");
    verify->add_option("--seed", verify_seed, "property-suite seed");
    verify->add_flag("--quick", verify_quick, "reduced scales");
    CommonFlags verify_flags;
    add_common(verify, verify_flags);

    // curve
    auto* curve = app.add_subcommand("curve", "emit a curve as CSV");
    std::string curve_kind, curve_path, curve_range, curve_fn, curve_out;
    std::optional<double> curve_reserve;
    curve->add_option("kind", curve_kind, "ap | ar | d1 | d2 | rq | special")->required();
    curve->add_option("instance", curve_path, "instance JSON path (omit for special)");
    curve->add_option("--range", curve_range, "lo:hi:step")->required();
    curve->add_option("--fn", curve_fn, "special function name");
    curve->add_option("--reserve", curve_reserve, "reserve (unused placeholder)");
    curve->add_option("--out", curve_out, "output CSV path (default stdout)");
    CommonFlags curve_flags;
    add_common(curve, curve_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        auto t0 = std::chrono::steady_clock::now();
        int code = 0;
        CommonFlags flags;
        std::uint64_t seed = 0;
        if (*constant) {
            code = cmd_constant(const_name, const_flags);
            flags = const_flags;
        } else if (*revenue) {
            code = cmd_revenue(rev_path, rev_mech, rev_price, rev_reserve, rev_policy,
                               rev_samples, rev_seed, rev_flags, rev_out);
            flags = rev_flags;
            seed = rev_seed;
        } else if (*gen) {
            code = cmd_gen(gen_which, gen_params, gen_v1, gen_flags, gen_out);
            flags = gen_flags;
        } else if (*verify) {
            code = cmd_verify(verify_suite, verify_seed, verify_quick, verify_flags);
            flags = verify_flags;
            seed = verify_seed;
        } else if (*curve) {
            code = cmd_curve(curve_kind, curve_path, curve_range, curve_fn,
                             curve_reserve, curve_flags, curve_out);
            flags = curve_flags;
        }
        if (!record_path.empty()) {
            auto t1 = std::chrono::steady_clock::now();
            write_run_record(record_path, command_line, flags, seed,
                             std::chrono::duration<double>(t1 - t0).count());
        }
        return code;
    } catch (const UnsupportedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
