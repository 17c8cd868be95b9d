// gravent: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include "gravent/gravent.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace gravent;
using ojson = nlohmann::ordered_json;

constexpr int exit_usage = 1;
constexpr int exit_numeric = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ojson config_json(const ExperimentConfig& cfg) {
    return {{"mass_kg", cfg.M},
            {"time_s", cfg.t},
            {"radius_m", cfg.R},
            {"dx_m", cfg.branch_separation(1)},
            {"d_LL_m", cfg.distance(LL)},
            {"d_LR_m", cfg.distance(LR)},
            {"d_RL_m", cfg.distance(RL)},
            {"d_RR_m", cfg.distance(RR)},
            {"material", cfg.material.name}};
}

struct ComputeArgs {
    std::string model;
    std::string config;
    std::string pair;
    bool exponentiate = false;
    bool numeric = false;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 20250101;
};

int run_compute(const ComputeArgs& a) {
    const auto rc = load_config(a.config);
    const auto& cfg = rc.cfg;
    const GravityModel model = [&] {
        try {
            return parse_model(a.model);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    std::optional<BranchPair> pair;
    if (!a.pair.empty()) {
        try {
            pair = parse_pair(a.pair);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const auto validity = validate_config(cfg);
    if (validity.fatal()) {
        ojson err = {{"error", "invalid configuration"}, {"validity", to_json(validity)}};
        std::cout << err.dump(2) << '\n';
        return exit_usage;
    }

    ojson out;
    out["model"] = to_string(model);
    out["config"] = config_json(cfg);

    if (model == GravityModel::DPStochastic) {
        const auto rho = dp_density_matrix(cfg, cfg.t);
        const auto cond = dp_entanglement_condition(cfg, cfg.t);
        out["density_matrix"] = to_json(rho.matrix());
        out["negativity"] = negativity(rho);
        out["sigma_G"] = cond.sigma_g;
        out["kappa4_RL_abs"] = cond.kappa4_mag;
        out["validity"] = to_json(validity);
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    AmplitudeOptions opt;
    opt.exponentiate_qg = a.exponentiate;
    opt.numeric_fourth_order = a.numeric;
    opt.mc.n_samples = a.samples;
    opt.mc.seed = a.seed;
    const auto amps = compute_amplitudes(cfg, model, opt);
    const auto rep = classify(amps);
    const double phi = phase_nonrel(cfg, RL);
    const double theta = vartheta(cfg);

    out["amplitudes"] = to_json(amps);
    out["negativity"] = rep.negativity;
    out["separable"] = rep.separable;
    out["dominant_pair"] = rep.dominant_pair ? ojson(rep.dominant_pair->name()) : ojson(nullptr);
    if (pair) {
        out["pair"] = {{"name", pair->name()},
                       {"alpha", complex_json(amps[*pair])},
                       {"d_m", cfg.distance(*pair)},
                       {"phi", phase_nonrel(cfg, *pair)},
                       {"beta4", complex_json(beta4_closed(cfg, *pair))},
                       {"kappa4", complex_json(kappa4_closed(cfg, *pair))}};
    }
    out["validity"] = to_json(validate_config(cfg, phi, theta));
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_dp_evolve(const std::string& config, double t) {
    const auto rc = load_config(config);
    if (t < 0.0) throw UsageError("--t must be >= 0");
    const auto validity = validate_config(rc.cfg);
    if (validity.fatal()) {
        ojson err = {{"error", "invalid configuration"}, {"validity", to_json(validity)}};
        std::cout << err.dump(2) << '\n';
        return exit_usage;
    }
    const auto params = dp_parameters(rc.cfg);
    const auto rho = dp_density_matrix(params, t);
    const auto cond = dp_entanglement_condition(rc.cfg, t);
    ojson out;
    out["t_s"] = t;
    out["config"] = config_json(rc.cfg);
    out["E_G1_J"] = params.E_G1;
    out["E_G2_J"] = params.E_G2;
    out["sigma_G"] = cond.sigma_g;
    out["kappa4_RL_abs"] = cond.kappa4_mag;
    out["virtual_matter_exceeds_decoherence"] = cond.entangling;
    out["density_matrix"] = to_json(rho.matrix());
    const auto ev = rho.eigenvalues();
    out["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
    out["negativity"] = negativity(rho);
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct ScanArgs {
    double mass_min = 0.0, mass_max = 0.0, time_min = 0.0, time_max = 0.0;
    std::size_t n_mass = 0, n_time = 0;
    double dsep_over_r = 10.0;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
};

int run_scan(const ScanArgs& a) {
    ScanTemplate tpl;
    tpl.dsep_over_r = a.dsep_over_r;
    tpl.threads = a.threads;
    OutputFormat fmt;
    std::vector<ScanRow> rows;
    try {
        fmt = parse_format(a.format);
        rows = scan_grid({a.mass_min, a.mass_max}, {a.time_min, a.time_max}, a.n_mass, a.n_time, tpl);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(rows, fmt, a.out);
    std::cerr << "wrote " << rows.size() << " rows to " << a.out << '\n';
    return 0;
}

struct ContourArgs {
    double level = 0.1;
    double mass_min = 0.0, mass_max = 0.0;
    std::size_t n_mass = 0;
    double dsep_over_r = 10.0;
    double solver_tol = 1e-9;
    std::string out;
    std::string format = "csv";
};

int run_contour(const ContourArgs& a) {
    ScanTemplate tpl;
    tpl.dsep_over_r = a.dsep_over_r;
    ContourOptions opt;
    opt.solver_tol = a.solver_tol;
    OutputFormat fmt;
    ContourResult res;
    try {
        fmt = parse_format(a.format);
        res = contour(a.level, {a.mass_min, a.mass_max}, a.n_mass, tpl, opt);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    for (const auto& d : res.diagnostics) std::cerr << "warning: " << d << '\n';
    emit(res.points, fmt, a.out);
    std::cerr << "wrote " << res.points.size() << " points to " << a.out << '\n';
    return 0;
}

int run_validate(std::size_t samples) {
    MonteCarloOptions mc;
    mc.n_samples = samples;
    const auto results = run_oracles(mc);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        all = all && r.pass;
    }
    return all ? 0 : exit_numeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement amplitudes of two superposed masses under classical and quantum gravity"};
    app.require_subcommand(1);

    ComputeArgs compute;
    auto* c = app.add_subcommand("compute", "Branch amplitudes and negativity for one configuration");
    c->add_option("--model", compute.model, "qg | qg-rel | qg-rel-sphere | cg | qg-virtual | dp")->required();
    c->add_option("--config", compute.config, "JSON experiment file")->required()->check(CLI::ExistingFile);
    c->add_option("--pair", compute.pair, "Also report one branch pair (LL, LR, RL, RR)");
    c->add_flag("--exponentiate", compute.exponentiate, "Resum the QG phase into exp(i phi)");
    c->add_flag("--numeric", compute.numeric, "Monte Carlo fourth-order amplitudes");
    c->add_option("--samples", compute.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    c->add_option("--seed", compute.seed, "Monte Carlo seed");

    ScanArgs scan;
    auto* s = app.add_subcommand("scan", "Grid of phi and vartheta over mass and time");
    s->add_option("--mass-min", scan.mass_min)->required();
    s->add_option("--mass-max", scan.mass_max)->required();
    s->add_option("--time-min", scan.time_min)->required();
    s->add_option("--time-max", scan.time_max)->required();
    s->add_option("--n-mass", scan.n_mass)->required();
    s->add_option("--n-time", scan.n_time)->required();
    s->add_option("--dsep-over-r", scan.dsep_over_r, "d_RL / R")->capture_default_str();
    s->add_option("--out", scan.out)->required();
    s->add_option("--format", scan.format, "csv | json")->capture_default_str();
    s->add_option("--threads", scan.threads, "0: all cores")->capture_default_str();

    ContourArgs cont;
    auto* k = app.add_subcommand("contour", "Time at which vartheta reaches a level, per mass");
    k->add_option("--level", cont.level)->capture_default_str();
    k->add_option("--mass-min", cont.mass_min)->required();
    k->add_option("--mass-max", cont.mass_max)->required();
    k->add_option("--n-mass", cont.n_mass)->required();
    k->add_option("--dsep-over-r", cont.dsep_over_r, "d_RL / R")->capture_default_str();
    k->add_option("--solver-tol", cont.solver_tol)->capture_default_str();
    k->add_option("--out", cont.out)->required();
    k->add_option("--format", cont.format, "csv | json")->capture_default_str();

    std::string dp_config;
    double dp_t = 0.0;
    auto* d = app.add_subcommand("dp-evolve", "Density matrix of the stochastic classical-gravity model");
    d->add_option("--config", dp_config, "JSON experiment file")->required()->check(CLI::ExistingFile);
    d->add_option("--t", dp_t, "Evolution time, s")->required();

    std::size_t val_samples = 1'000'000;
    auto* v = app.add_subcommand("validate", "Closed forms against quadrature oracles");
    v->add_option("--samples", val_samples, "Monte Carlo samples per oracle")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*c) return run_compute(compute);
        if (*s) return run_scan(scan);
        if (*k) return run_contour(cont);
        if (*d) return run_dp_evolve(dp_config, dp_t);
        if (*v) return run_validate(val_samples);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const OutputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_usage;
}
