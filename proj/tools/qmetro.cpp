// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmetro: transmissivity-estimation QFI for Gaussian probes.
//
// All variances are in shot-noise 1/2 units ([q,p] = i, vacuum variance 1/2);
// environment variances are omega = n_env + 1/2. Exit codes: 0 success,
// 2 invalid parameters, 3 numerical failure, 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmetro/channels.hpp"
#include "qmetro/gaussian.hpp"
#include "qmetro/metrology.hpp"
#include "qmetro/scenarios.hpp"

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// omega / n-env flag pair resolving to one variance; the two forms are
// mutually exclusive (omega = n_env + 1/2).
struct EnvFlags {
    std::optional<double> omega, omega1, omega2;
    std::optional<double> n_env, n_env1, n_env2;
    double g = 0.0;
    double gprime = 0.0;

    void add_to(CLI::App* cmd, bool require_all) {
        auto opt = [&](CLI::Option* o) {
            if (require_all) o->required();
            return o;
        };
        cmd->add_option("--omega", omega,
                        "environment variance omega for both ancillas "
                        "(omega = n_env + 1/2 >= 1/2)");
        cmd->add_option("--omega1", omega1,
                        "environment variance omega_1 (signal-side ancilla)");
        cmd->add_option("--omega2", omega2,
                        "environment variance omega_2 (idler-side ancilla)");
        cmd->add_option("--n-env", n_env,
                        "environment thermal photons n_env for both ancillas "
                        "(converted as omega = n_env + 1/2)");
        cmd->add_option("--n-env1", n_env1, "thermal photons of ancilla 1");
        cmd->add_option("--n-env2", n_env2, "thermal photons of ancilla 2");
        opt(cmd->add_option(
            "--g", g, "qq cross-covariance g between the two ancillas"));
        opt(cmd->add_option("--gprime", gprime,
                            "pp cross-covariance g' between the two ancillas"));
    }

    // Resolves (omega1, omega2), rejecting mixed or conflicting flag forms.
    std::pair<double, double> resolve(bool required) const {
        const bool any_omega = omega || omega1 || omega2;
        const bool any_nenv = n_env || n_env1 || n_env2;
        if (any_omega && any_nenv) {
            throw qmetro::ValidationError(
                "specify the environment via --omega* or --n-env*, not both");
        }
        if ((omega && (omega1 || omega2)) || (n_env && (n_env1 || n_env2))) {
            throw qmetro::ValidationError(
                "use the shared flag (--omega/--n-env) or the per-ancilla "
                "flags, not both");
        }
        if (required && !any_omega && !any_nenv) {
            throw qmetro::ValidationError(
                "the environment variances are required (--omega, "
                "--omega1/--omega2, or the --n-env forms)");
        }
        double w1 = 0.5;
        double w2 = 0.5;
        if (omega) w1 = w2 = *omega;
        if (n_env) w1 = w2 = *n_env + 0.5;
        if (omega1) w1 = *omega1;
        if (omega2) w2 = *omega2;
        if (n_env1) w1 = *n_env1 + 0.5;
        if (n_env2) w2 = *n_env2 + 0.5;
        if (required && ((any_omega && !(omega || (omega1 && omega2))) ||
                         (any_nenv && !(n_env || (n_env1 && n_env2))))) {
            throw qmetro::ValidationError(
                "both environment variances are required");
        }
        return {w1, w2};
    }
};

struct QfiArgs {
    std::string probe = "source";
    double eta = 0.5;
    double n_signal = 0.0;
    double n_low = 0.0;
    double tau = 0.0;
    double t0 = 1.0;
    double phase = 0.0;
    std::optional<double> dtau;
    EnvFlags env;
};

struct SweepArgs {
    std::optional<std::string> scenario;
    std::optional<double> n_signal, n_low, t0;
    std::vector<double> etas;
    double tau_min = 0.01;
    double tau_max = 0.99;
    int steps = 99;
    int threads = 1;
    std::string out;
    EnvFlags env;
};

int run_qfi(const QfiArgs& a) {
    auto [w1, w2] = a.env.resolve(false);
    const auto env =
        qmetro::EnvironmentSpec::make(a.t0, w1, w2, a.env.g, a.env.gprime);
    // Validates tau against the channel domain first so out-of-range values
    // are reported as such before the finite-difference preconditions.
    qmetro::ChannelParams::make(a.tau, env);
    qmetro::QfiOptions opts;
    if (a.dtau) opts.dtau = *a.dtau;

    qmetro::QfiResult res;
    if (a.probe == "coherent") {
        res = qmetro::qfi_numeric(qmetro::CoherentProbe{a.n_signal, a.phase},
                                  env, a.tau, opts);
    } else if (a.probe == "source" || a.probe == "single-thermal") {
        const double eta = a.probe == "single-thermal" ? 1.0 : a.eta;
        const auto src = qmetro::make_source(
            qmetro::source_for_signal(a.n_signal, eta, a.n_low));
        res = qmetro::qfi_numeric(src, env, a.tau, opts);
    } else {
        throw qmetro::ValidationError(
            "--probe must be one of coherent, source, single-thermal");
    }
    std::cout << "tau=" << fmt_g(res.tau) << " H=" << fmt_g(res.h)
              << " dtau=" << fmt_g(res.dtau)
              << " converged=" << (res.converged ? "true" : "false")
              << " rel_step_change=" << fmt_g(res.relative_step_change)
              << "\n";
    return 0;
}

std::string csv_row(const qmetro::SweepRow& r) {
    std::ostringstream line;
    line << r.scenario << ',' << r.curve << ',' << fmt_g(r.eta) << ','
         << fmt_g(r.tau) << ',' << fmt_g(r.qfi) << ','
         << fmt_g(r.qfi_benchmark) << ','
         << (r.beats_benchmark ? "true" : "false") << ',' << fmt_g(r.n_signal)
         << ',' << fmt_g(r.n_low) << ',' << fmt_g(r.t0) << ','
         << fmt_g(r.omega1) << ',' << fmt_g(r.omega2) << ',' << fmt_g(r.g)
         << ',' << fmt_g(r.gprime);
    return line.str();
}

int run_sweep(const SweepArgs& a) {
    qmetro::ScenarioPreset p;
    if (a.scenario) {
        p = qmetro::preset(*a.scenario);
    } else {
        if (!a.n_signal) {
            throw qmetro::ValidationError(
                "sweep: provide --scenario or a full parameter set "
                "(--n-signal at minimum)");
        }
        p.name = "custom";
        p.n_signal = 0.0;
        p.n_low = 0.0;
        p.t0 = 1.0;
        p.omega1 = p.omega2 = 0.5;
        p.g = p.gprime = 0.0;
        p.eta_list = {0.5, 0.1, 0.01};
    }
    if (a.n_signal) p.n_signal = *a.n_signal;
    if (a.n_low) p.n_low = *a.n_low;
    if (a.t0) p.t0 = *a.t0;
    const bool env_given = a.env.omega || a.env.omega1 || a.env.omega2 ||
                           a.env.n_env || a.env.n_env1 || a.env.n_env2;
    if (env_given) {
        auto [w1, w2] = a.env.resolve(false);
        p.omega1 = w1;
        p.omega2 = w2;
    }
    if (a.env.g != 0.0 || !a.scenario) p.g = a.env.g;
    if (a.env.gprime != 0.0 || !a.scenario) p.gprime = a.env.gprime;
    if (!a.etas.empty()) p.eta_list = a.etas;

    const auto grid = qmetro::tau_grid(a.tau_min, a.tau_max, a.steps);
    const auto rows = qmetro::sweep(p, grid, a.threads);
    const auto report = qmetro::ordering_report(rows);

    // All computation precedes the first write so failures leave no file.
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open output file: " + a.out);
    }
    out << "scenario,curve,eta,tau,qfi,qfi_benchmark,beats_benchmark,"
           "n_signal,n_low,t0,omega1,omega2,g,gprime\n";
    for (const auto& r : rows) {
        out << csv_row(r) << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("write failed: " + a.out);
    }
    std::cout << "wrote " << a.out << " (" << rows.size() << " rows)\n"
              << qmetro::format_report(report);
    return 0;
}

int run_check(const EnvFlags& env) {
    auto [w1, w2] = env.resolve(true);
    // Deliberately unvalidated: check reports on arbitrary parameters.
    const qmetro::TwoModeCov v{w1, w2, env.g, env.gprime};
    const auto rep = qmetro::check_physical(v);
    std::cout << "nu^2 = " << fmt_g(rep.nu_min_sq) << "\n"
              << "nu~^2 = " << fmt_g(qmetro::nu_tilde_squared(v)) << "\n"
              << "|c1| < sqrt(ab): " << (rep.qq_ok ? "PASS" : "FAIL") << "\n"
              << "|c2| < sqrt(ab): " << (rep.pp_ok ? "PASS" : "FAIL") << "\n"
              << "nu >= 1/2: " << (rep.nu_ok ? "PASS" : "FAIL") << "\n"
              << "physical: " << (rep.physical() ? "PASS" : "FAIL") << "\n";
    if (rep.physical()) {
        std::cout << "separable: "
                  << (qmetro::check_separable(v) ? "PASS" : "FAIL") << "\n";
        return 0;
    }
    std::cout << "separable: SKIPPED (not physical)\n";
    return 2;
}

int run_presets() {
    for (const auto& name : qmetro::preset_names()) {
        const auto p = qmetro::preset(name);
        std::cout << p.name << " n_signal=" << fmt_g(p.n_signal)
                  << " n_low=" << fmt_g(p.n_low) << " t0=" << fmt_g(p.t0);
        if (p.omega1 == p.omega2) {
            std::cout << " omega=" << fmt_g(p.omega1);
        } else {
            std::cout << " omega1=" << fmt_g(p.omega1)
                      << " omega2=" << fmt_g(p.omega2);
        }
        std::cout << " g=" << fmt_g(p.g) << " gprime=" << fmt_g(p.gprime)
                  << " eta_list=";
        for (size_t i = 0; i < p.eta_list.size(); ++i) {
            std::cout << (i ? "," : "") << fmt_g(p.eta_list[i]);
        }
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Quantum Fisher information of transmissivity estimation for "
        "Gaussian probes in decohering environments.\n"
        "Units: shot-noise 1/2 (vacuum variance 1/2, omega = n_env + 1/2)."};
    app.require_subcommand(1);

    QfiArgs qa;
    auto* qfi = app.add_subcommand(
        "qfi", "QFI H(tau) of one probe at one channel point");
    qfi->add_option("--probe", qa.probe,
                    "probe kind: coherent | source | single-thermal")
        ->check(CLI::IsMember({"coherent", "source", "single-thermal"}));
    qfi->add_option("--eta", qa.eta,
                    "source beam-splitter transmissivity eta in (0,1]");
    qfi->add_option("--n-signal", qa.n_signal,
                    "mean signal photons n on mode A")
        ->required();
    qfi->add_option("--n-low", qa.n_low,
                    "faint thermal input n_L of the source pair");
    qfi->add_option("--tau", qa.tau,
                    "channel transmissivity tau under estimation")
        ->required();
    qfi->add_option("--t0", qa.t0, "decoherence transmissivity T0 in (0,1]");
    qfi->add_option("--phase", qa.phase, "coherent-probe phase (radians)");
    qfi->add_option("--dtau", qa.dtau,
                    "starting finite-difference step (halved to convergence)");
    qa.env.add_to(qfi, false);

    SweepArgs sa;
    auto* sweep = app.add_subcommand(
        "sweep", "QFI curves over a tau grid, written as CSV");
    sweep->add_option("--scenario", sa.scenario,
                      "named preset (see `presets`); flags override its "
                      "fields");
    sweep->add_option("--n-signal", sa.n_signal, "mean signal photons n");
    sweep->add_option("--n-low", sa.n_low, "faint thermal input n_L");
    sweep->add_option("--t0", sa.t0, "decoherence transmissivity T0");
    sweep->add_option("--eta", sa.etas,
                      "source asymmetry eta (repeatable, default "
                      "0.5 0.1 0.01)");
    sweep->add_option("--tau-min", sa.tau_min, "grid start (default 0.01)");
    sweep->add_option("--tau-max", sa.tau_max, "grid end (default 0.99)");
    sweep->add_option("--steps", sa.steps, "grid size (default 99)");
    sweep->add_option("--threads", sa.threads,
                      "worker threads (output is identical for any value)");
    sweep->add_option("--out", sa.out, "output CSV path")->required();
    sa.env.add_to(sweep, false);

    EnvFlags ca;
    auto* check = app.add_subcommand(
        "check", "physicality/separability of an environment state");
    ca.add_to(check, true);

    app.add_subcommand("presets", "list the named scenario presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (qfi->parsed()) return run_qfi(qa);
        if (sweep->parsed()) return run_sweep(sa);
        if (check->parsed()) return run_check(ca);
        return run_presets();
    } catch (const qmetro::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qmetro::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
