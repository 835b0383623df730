// qme_cli.cpp — Command-line front end: scenario sweeps as CSV plus the oracle validation suite
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qme/experiments.hpp"
#include "qme/validation.hpp"

namespace {

struct Overrides {
    std::string config, out, preset, radii, tau_b_grid, kinds, tau_sb_grid;
    std::optional<int> L, N, threads;
    std::optional<double> tau_sb, beta_l, beta_r, J, omega0;
    bool include_eta{false}, odd_radii{false};
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "key = value scenario file");
    cmd->add_option("--preset", o.preset, "start from a named preset instead of the subcommand default");
    cmd->add_option("--out", o.out, "output CSV path (default: stdout)");
    cmd->add_option("--L", o.L, "number of sites");
    cmd->add_option("--N", o.N, "bath-coupled sites per edge");
    cmd->add_option("--tau-sb", o.tau_sb, "target system-bath timescale");
    cmd->add_option("--beta-l", o.beta_l, "inverse temperature of the left baths");
    cmd->add_option("--beta-r", o.beta_r, "inverse temperature of the right baths");
    cmd->add_option("--J", o.J, "hopping amplitude");
    cmd->add_option("--omega0", o.omega0, "on-site energy");
    cmd->add_option("--radii", o.radii, "comma-separated subsystem radii");
    cmd->add_option("--tau-b-grid", o.tau_b_grid, "comma-separated tau_B values or logspace(lo, hi, n)");
    cmd->add_option("--kinds", o.kinds, "comma-separated kinds: redfield, davies, nre, local-davies, local-nre");
    cmd->add_flag("--include-eta", o.include_eta, "include the principal-value terms in the Redfield coefficients");
    cmd->add_flag("--odd-radii", o.odd_radii, "also sweep R-1 and R+1 next to every radius");
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

qme::Scenario resolve(const std::string& default_preset, const Overrides& o) {
    qme::Scenario s = qme::preset(o.preset.empty() ? default_preset : o.preset);
    if (!o.config.empty()) s = qme::load_config(o.config, s);
    if (o.L) s.chain.L = *o.L;
    if (o.N) s.chain.N = *o.N;
    if (o.threads) s.threads = *o.threads;
    if (o.tau_sb) s.tau_sb = *o.tau_sb;
    if (o.beta_l) s.chain.beta_left = *o.beta_l;
    if (o.beta_r) s.chain.beta_right = *o.beta_r;
    if (o.J) s.chain.J = *o.J;
    if (o.omega0) s.chain.omega0 = *o.omega0;
    if (!o.radii.empty()) s.radii = qme::parse_int_list("radii", o.radii);
    if (!o.tau_b_grid.empty()) s.tau_b_grid = qme::parse_double_list("tau_b_grid", o.tau_b_grid);
    if (!o.kinds.empty()) s.kinds = qme::parse_kind_list(o.kinds);
    if (o.include_eta) s.include_eta = true;
    if (o.odd_radii) s.odd_radii = true;
    if (!o.out.empty()) s.out = o.out;
    return s;
}

template <class Writer>
void emit(const qme::Scenario& s, Writer&& write) {
    if (s.out.empty() || s.out == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(s.out);
    if (!f) throw qme::ConfigError("cannot open output file '" + s.out + "'");
    write(f);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local GKSL master equations for a boundary-driven fermion chain"};
    app.require_subcommand(1);

    struct Sweep {
        const char* name;
        const char* preset;
        const char* help;
    };
    const std::vector<Sweep> sweeps{
        {"distance", "distance", "generator distance vs tau_B for local kinds"},
        {"steady", "steady-neq", "steady-state deviation vs tau_B"},
        {"tradeoff", "tradeoff", "distance and deviation vs R at fixed tau_B"},
        {"odd-even", "odd-even", "odd vs even radii"},
    };
    std::vector<Overrides> sweep_opts(sweeps.size());
    std::vector<CLI::App*> sweep_cmds;
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        sweep_cmds.push_back(app.add_subcommand(sweeps[i].name, sweeps[i].help));
        add_common_flags(sweep_cmds.back(), sweep_opts[i]);
    }

    Overrides pop_opts, cal_opts;
    auto* pop_cmd = app.add_subcommand("populations", "steady-state mode populations with the Gibbs reference");
    add_common_flags(pop_cmd, pop_opts);
    auto* cal_cmd = app.add_subcommand("calibration", "calibrated J_int vs tau_B and vs tau_SB");
    add_common_flags(cal_cmd, cal_opts);
    cal_cmd->add_option("--tau-sb-grid", cal_opts.tau_sb_grid, "tau_SB values swept at the first tau_B");

    auto* val_cmd = app.add_subcommand("validate", "dense-oracle equivalence and invariant checks");
    auto* list_cmd = app.add_subcommand("presets", "list scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < sweeps.size(); ++i) {
            if (!sweep_cmds[i]->parsed()) continue;
            const qme::Scenario s = resolve(sweeps[i].preset, sweep_opts[i]);
            const auto rows = qme::run_scenario(s);
            emit(s, [&](std::ostream& os) { qme::write_scenario_csv(os, rows); });
            return 0;
        }
        if (pop_cmd->parsed()) {
            const qme::Scenario s = resolve("populations", pop_opts);
            const auto rows = qme::run_populations(s);
            emit(s, [&](std::ostream& os) { qme::write_population_csv(os, rows); });
            return 0;
        }
        if (cal_cmd->parsed()) {
            qme::Scenario s = resolve("calibration", cal_opts);
            s.radii = {s.chain.L}; // calibration only uses the global reference
            const std::vector<double> tsb = cal_opts.tau_sb_grid.empty()
                                                ? qme::logspace(10.0, 1000.0, 9)
                                                : qme::parse_double_list("tau_sb_grid", cal_opts.tau_sb_grid);
            const auto rows = qme::run_calibration(s, tsb);
            emit(s, [&](std::ostream& os) { qme::write_calibration_csv(os, rows); });
            return 0;
        }
        if (val_cmd->parsed()) {
            const auto checks = qme::run_validation();
            qme::print_report(std::cout, checks);
            return qme::all_passed(checks) ? 0 : 1;
        }
        if (list_cmd->parsed()) {
            for (const auto& n : qme::preset_names()) std::cout << n << '\n';
            return 0;
        }
    } catch (const qme::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const qme::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
