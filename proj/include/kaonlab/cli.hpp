// cli.hpp
// Command-line front end: config resolution, dataset ingestion and
// subcommand dispatch. All numeric output comes from library calls; this
// layer only formats. Exit codes: 0 success, 2 usage, 3 CSV/parse error,
// 4 physics-domain error.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kaonlab/bell.hpp"
#include "kaonlab/config.hpp"
#include "kaonlab/csv.hpp"
#include "kaonlab/decoherence.hpp"
#include "kaonlab/entanglement.hpp"
#include "kaonlab/meson.hpp"
#include "kaonlab/pair.hpp"

namespace kaonlab::cli {

inline constexpr const char* tool_version = "0.1.0";

namespace detail {

using nlohmann::json;

struct ParamsFlags {
    std::string config_path;
    std::optional<double> delta_m;
    std::optional<double> tau_ratio;
    std::optional<double> eps_abs;
    std::optional<double> eps_phase_deg;
    std::optional<std::string> label;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key=value); overrides KAONLAB_CONFIG");
        cmd->add_option("--delta-m", delta_m, "delta_m * tau_S (dimensionless)");
        cmd->add_option("--tau-ratio", tau_ratio, "tau_L / tau_S");
        cmd->add_option("--eps-abs", eps_abs, "|eps|");
        cmd->add_option("--eps-phase-deg", eps_phase_deg, "arg(eps) in degrees");
        cmd->add_option("--system-label", label, "kaon|B|D|Bs|custom");
    }

    // defaults -> config file -> flags
    ParamsConfig resolve_config(ParamsConfig base = {}) const {
        std::string path = config_path;
        if (path.empty()) {
            if (const char* env = std::getenv("KAONLAB_CONFIG")) path = env;
        }
        if (path.empty() && std::filesystem::exists("kaonlab.conf")) path = "kaonlab.conf";
        if (!path.empty()) base = load_config_file(path, base);
        if (delta_m) base.delta_m_tau_s = *delta_m;
        if (tau_ratio) base.tau_l_over_tau_s = *tau_ratio;
        if (eps_abs) base.eps_abs = *eps_abs;
        if (eps_phase_deg) base.eps_phase_deg = *eps_phase_deg;
        if (label) base.system_label = *label;
        return base;
    }
};

inline json params_json(const ParamsConfig& cfg, const MesonParams& P) {
    return json{{"delta_m_tau_s", cfg.delta_m_tau_s},
                {"tau_l_over_tau_s", cfg.tau_l_over_tau_s},
                {"eps_abs", cfg.eps_abs},
                {"eps_phase_deg", cfg.eps_phase_deg},
                {"system_label", cfg.system_label},
                {"derived",
                 {{"gamma_L", P.gamma_L},
                  {"gamma_bar", P.gamma_bar},
                  {"x", P.x},
                  {"kl_ks_overlap", kl_ks_overlap(P)}}}};
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    f << text;
}

inline MesonParams decoherence_params(const ParamsFlags& flags) {
    // This family of commands assumes CP conservation; a resolved eps != 0
    // is refused instead of silently dropped.
    ParamsConfig base;
    base.eps_abs = 0.0;
    const ParamsConfig cfg = flags.resolve_config(base);
    if (cfg.eps_abs != 0.0)
        throw std::domain_error(
            "decoherence commands assume CP conservation; pass --eps-abs 0 "
            "(resolved |eps| = " + std::to_string(cfg.eps_abs) + ")");
    return cfg.to_params();
}

}  // namespace detail

// Parses and runs one invocation. `args` excludes the program name.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail::json;

    CLI::App app{"kaonlab: entangled neutral-meson quantum mechanics toolkit"};
    app.require_subcommand(0, 1);

    // ---- probabilities ----
    auto* prob_cmd = app.add_subcommand(
        "probabilities", "Joint strangeness Yes/No probability grid (CSV)");
    detail::ParamsFlags prob_flags;
    prob_flags.attach(prob_cmd);
    double prob_t_from = 0.0, prob_t_to = 5.0;
    int prob_steps = 21;
    std::string prob_out;
    prob_cmd->add_option("--t-from", prob_t_from, "grid start (tau_S)");
    prob_cmd->add_option("--t-to", prob_t_to, "grid end (tau_S)");
    prob_cmd->add_option("--steps", prob_steps, "grid points per axis")->check(CLI::Range(2, 2000));
    prob_cmd->add_option("--out", prob_out, "output path (default stdout)");

    // ---- chsh-scan ----
    auto* chsh_cmd = app.add_subcommand("chsh-scan", "max CHSH value vs x = dm/Gamma (CSV)");
    std::string chsh_model = "approx";
    double x_from = 0.5, x_to = 3.0;
    int chsh_steps = 26;
    OptimizerConfig chsh_cfg;
    std::string chsh_out;
    chsh_cmd->add_option("--model", chsh_model, "approx|unitary|bmeson")
        ->check(CLI::IsMember({"approx", "unitary", "bmeson"}));
    chsh_cmd->add_option("--x-from", x_from, "first x");
    chsh_cmd->add_option("--x-to", x_to, "last x");
    chsh_cmd->add_option("--steps", chsh_steps, "number of x samples")->check(CLI::Range(1, 10000));
    chsh_cmd->add_option("--grid-n", chsh_cfg.grid_n, "seed grid points per axis");
    chsh_cmd->add_option("--t-max", chsh_cfg.t_max, "time box upper edge (tau_S)");
    chsh_cmd->add_option("--refine-top", chsh_cfg.refine_top, "simplex starts");
    chsh_cmd->add_option("--out", chsh_out, "output path (default stdout)");

    // ---- cp-bounds ----
    auto* cp_cmd = app.add_subcommand("cp-bounds", "LRT bounds on CP violation (JSON)");
    detail::ParamsFlags cp_flags;
    cp_flags.attach(cp_cmd);
    std::string cp_out;
    cp_cmd->add_option("--out", cp_out, "output path (default stdout)");

    // ---- asym-curve ----
    auto* asym_cmd = app.add_subcommand("asym-curve", "strangeness asymmetry vs dt (CSV)");
    detail::ParamsFlags asym_flags;
    asym_flags.attach(asym_cmd);
    double asym_lambda = 0.0, asym_t_first = 0.55, asym_dt_from = 0.0, asym_dt_to = 5.0;
    int asym_steps = 51;
    std::string asym_out;
    asym_cmd->add_option("--lambda", asym_lambda, "decoherence rate (Gamma_S units)")->required();
    asym_cmd->add_option("--t-first", asym_t_first, "first-measured time (tau_S)");
    asym_cmd->add_option("--dt-from", asym_dt_from, "dt start");
    asym_cmd->add_option("--dt-to", asym_dt_to, "dt end");
    asym_cmd->add_option("--steps", asym_steps, "samples")->check(CLI::Range(2, 100000));
    asym_cmd->add_option("--out", asym_out, "output path (default stdout)");

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "fit decoherence parameter to asymmetry data (JSON)");
    detail::ParamsFlags fit_flags;
    fit_flags.attach(fit_cmd);
    std::string fit_input, fit_model = "lambda", fit_out;
    fit_cmd->add_option("--input", fit_input, "CSV file: t_l,t_r,asym,sigma")->required();
    fit_cmd->add_option("--model", fit_model, "lambda|zeta")
        ->check(CLI::IsMember({"lambda", "zeta"}));
    fit_cmd->add_option("--out", fit_out, "output path (default stdout)");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "synthesize an asymmetry dataset (CSV)");
    detail::ParamsFlags synth_flags;
    synth_flags.attach(synth_cmd);
    double synth_lambda = 0.25, synth_noise = 0.02;
    std::uint64_t synth_seed = 1;
    int synth_n = 20;
    double synth_t_from = 0.25, synth_t_to = 4.0;
    std::string synth_out;
    synth_cmd->add_option("--lambda", synth_lambda, "true decoherence rate")->required();
    synth_cmd->add_option("--seed", synth_seed, "RNG seed");
    synth_cmd->add_option("--noise", synth_noise, "Gaussian sigma on A");
    synth_cmd->add_option("--n", synth_n, "number of rows")->check(CLI::Range(1, 100000));
    synth_cmd->add_option("--t-from", synth_t_from, "first-measured time, first row");
    synth_cmd->add_option("--t-to", synth_t_to, "first-measured time, last row");
    synth_cmd->add_option("--out", synth_out, "output path (default stdout)");

    // ---- measures ----
    auto* meas_cmd = app.add_subcommand("measures", "entanglement measures vs time (CSV)");
    detail::ParamsFlags meas_flags;
    meas_flags.attach(meas_cmd);
    double meas_lambda = 0.25, meas_t_from = 0.0, meas_t_to = 2.0;
    int meas_steps = 41;
    std::string meas_out;
    meas_cmd->add_option("--lambda", meas_lambda, "decoherence rate (Gamma_S units)");
    meas_cmd->add_option("--t-from", meas_t_from, "grid start (tau_S)");
    meas_cmd->add_option("--t-to", meas_t_to, "grid end (tau_S)");
    meas_cmd->add_option("--steps", meas_steps, "samples")->check(CLI::Range(2, 100000));
    meas_cmd->add_option("--out", meas_out, "output path (default stdout)");

    if (args.empty()) {
        err << app.help();
        return 2;
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (app.get_subcommands().empty()) {
        err << app.help();
        return 2;
    }

    try {
        if (prob_cmd->parsed()) {
            const ParamsConfig cfg = prob_flags.resolve_config();
            const MesonParams P = cfg.to_params();
            std::ostringstream s;
            s << "t_l,t_r,P_YY,P_NN,P_YN,P_NY,E\n";
            const QuasiSpinState k0 = k0_state();
            for (int i = 0; i < prob_steps; ++i) {
                const double t_l =
                    prob_t_from + (prob_t_to - prob_t_from) * i / (prob_steps - 1);
                for (int j = 0; j < prob_steps; ++j) {
                    const double t_r =
                        prob_t_from + (prob_t_to - prob_t_from) * j / (prob_steps - 1);
                    const auto prob = [&](Outcome a, Outcome b) {
                        return joint_probability(measure(Side::left, k0, t_l, a),
                                                 measure(Side::right, k0, t_r, b), P);
                    };
                    const double yy = prob(Outcome::yes, Outcome::yes);
                    const double nn = prob(Outcome::no, Outcome::no);
                    const double yn = prob(Outcome::yes, Outcome::no);
                    const double ny = prob(Outcome::no, Outcome::yes);
                    s << format_number(t_l) << ',' << format_number(t_r) << ','
                      << format_number(yy) << ',' << format_number(nn) << ','
                      << format_number(yn) << ',' << format_number(ny) << ','
                      << format_number(yy + nn - yn - ny) << '\n';
                }
            }
            detail::emit(s.str(), prob_out, out);
        } else if (chsh_cmd->parsed()) {
            const EModel model = chsh_model == "approx"    ? EModel::approx
                                 : chsh_model == "unitary" ? EModel::unitary
                                                           : EModel::bmeson;
            std::ostringstream s;
            s << "x,s_max,t_a,t_b,t_a_prime,t_b_prime\n";
            for (int i = 0; i < chsh_steps; ++i) {
                const double x = chsh_steps == 1
                                     ? x_from
                                     : x_from + (x_to - x_from) * i / (chsh_steps - 1);
                const ScanResult r = maximize_chsh(x, model, chsh_cfg);
                s << format_number(x) << ',' << format_number(r.s_max) << ','
                  << format_number(r.argmax.t_a) << ',' << format_number(r.argmax.t_b) << ','
                  << format_number(r.argmax.t_ap) << ',' << format_number(r.argmax.t_bp)
                  << '\n';
            }
            detail::emit(s.str(), chsh_out, out);
        } else if (cp_cmd->parsed()) {
            const ParamsConfig cfg = cp_flags.resolve_config();
            const MesonParams P = cfg.to_params();
            const CpBoundsReport r = cp_bounds(P);
            const WignerKaonResult w = wigner_kaon(P);
            json j{{"command", "cp-bounds"},
                   {"version", tool_version},
                   {"params", detail::params_json(cfg, P)},
                   {"p", {{"re", P.p.real()}, {"im", P.p.imag()}, {"abs", r.abs_p}}},
                   {"q", {{"re", P.q.real()}, {"im", P.q.imag()}, {"abs", r.abs_q}}},
                   {"delta", r.delta},
                   {"delta_reference", r.delta_reference},
                   {"lrt_constraints",
                    {{"p_le_q_holds", r.p_le_q_holds},
                     {"p_ge_q_holds", r.p_ge_q_holds},
                     {"equality_holds", r.equality_holds}}},
                   {"wigner",
                    {{"lhs", w.lhs},
                     {"rhs", w.rhs},
                     {"violated", w.violated},
                     {"p_ks_k0bar", w.p_ks_k0bar},
                     {"p_ks_k1", w.p_ks_k1},
                     {"p_k1_k0bar", w.p_k1_k0bar}}}};
            detail::emit(j.dump(2) + "\n", cp_out, out);
        } else if (asym_cmd->parsed()) {
            const MesonParams P = detail::decoherence_params(asym_flags);
            std::ostringstream s;
            s << "dt,asym_qm,asym_lambda\n";
            for (int i = 0; i < asym_steps; ++i) {
                const double dt =
                    asym_dt_from + (asym_dt_to - asym_dt_from) * i / (asym_steps - 1);
                const double t_l = asym_t_first + dt;
                s << format_number(dt) << ',' << format_number(asymmetry_qm(t_l, asym_t_first, P))
                  << ',' << format_number(asymmetry_lambda(t_l, asym_t_first, asym_lambda, P))
                  << '\n';
            }
            detail::emit(s.str(), asym_out, out);
        } else if (fit_cmd->parsed()) {
            const MesonParams P = detail::decoherence_params(fit_flags);
            const AsymmetryDataset data = ingest_csv_file(fit_input);
            const FitModel model =
                fit_model == "lambda" ? FitModel::lambda : FitModel::zeta_const;
            const FitResult r = fit_decoherence(data, model, P);
            const ParamsConfig cfg_echo = [&] {
                ParamsConfig base;
                base.eps_abs = 0.0;
                return fit_flags.resolve_config(base);
            }();
            json j{{"command", "fit"},
                   {"version", tool_version},
                   {"params", detail::params_json(cfg_echo, P)},
                   {"input", fit_input},
                   {"rows", data.rows.size()},
                   {"model", fit_model},
                   {"best_fit", r.lambda_hat},
                   {"ci_lo", r.ci_lo},
                   {"ci_hi", r.ci_hi},
                   {"chi2", r.chi2},
                   {"ndf", r.ndf},
                   {"at_boundary", r.at_boundary}};
            if (model == FitModel::lambda)
                j["lambda_hat_mev"] = rate_to_mev(r.lambda_hat);
            detail::emit(j.dump(2) + "\n", fit_out, out);
        } else if (synth_cmd->parsed()) {
            const MesonParams P = detail::decoherence_params(synth_flags);
            std::vector<std::pair<double, double>> pairs;
            pairs.reserve(synth_n);
            // first-measured times on a uniform grid; dt cycles through a
            // fixed pattern so the oscillatory factor is exercised too
            const double dt_cycle[4] = {0.0, 0.5, 1.0, 1.5};
            for (int i = 0; i < synth_n; ++i) {
                const double t_first =
                    synth_n == 1 ? synth_t_from
                                 : synth_t_from + (synth_t_to - synth_t_from) * i / (synth_n - 1);
                pairs.emplace_back(t_first + dt_cycle[i % 4], t_first);
            }
            const AsymmetryDataset data =
                synth_dataset(synth_lambda, pairs, synth_noise, synth_seed, P);
            std::ostringstream s;
            write_dataset_csv(s, data);
            detail::emit(s.str(), synth_out, out);
        } else if (meas_cmd->parsed()) {
            const MesonParams P = detail::decoherence_params(meas_flags);
            std::ostringstream s;
            s << "t,entropy,one_minus_E,C,f,zeta\n";
            for (int i = 0; i < meas_steps; ++i) {
                const double t =
                    meas_t_from + (meas_t_to - meas_t_from) * i / (meas_steps - 1);
                const MeasureReport m = measures_at(t, meas_lambda, P);
                s << format_number(t) << ',' << format_number(m.entropy_S) << ','
                  << format_number(1.0 - m.eof_E) << ',' << format_number(m.concurrence_C)
                  << ',' << format_number(m.fef_f) << ',' << format_number(m.zeta) << '\n';
            }
            detail::emit(s.str(), meas_out, out);
        }
    } catch (const CsvError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

}  // namespace kaonlab::cli
