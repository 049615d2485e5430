#include "wavefront/cli_commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "wavefront/io.hpp"
#include "wavefront/parallel.hpp"

namespace wavefront {

namespace {

namespace fs = std::filesystem;

std::string speed_tag(double c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", c);
    return buf;
}

std::string verdict_or_unavailable(const WaveModel& model, double c) {
    try {
        return to_string(classify_speed(model, c));
    } catch (const std::exception&) {
        return "Unavailable";
    }
}

void ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir);
}

double guarded_residual(const WaveModel& model, double c, const Profile& prof) {
    try {
        return residual(model, c, prof);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

WaveModel analysis_model(const RunConfig& cfg) {
    switch (cfg.type) {
        case ModelType::Scalar:
            return cfg.scalar_model();
        case ModelType::Epidemic:
            return epidemic_scalar_model(cfg.epidemic_model());
        default: {
            const PopulationModel pm = cfg.population_model();
            return make_wave_model(pm.f, pm.g, pm.kernel);
        }
    }
}

int run_speeds(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.command.speeds.empty())
        throw ConfigError("$.command.speeds", "speeds grid is required for the speeds command");
    ensure_dir(out_dir);
    const WaveModel model = analysis_model(cfg);
    const CharReport rep = build_char_report(model, cfg.command.speeds);
    write_text_file(out_dir + "/report.csv", char_report_csv(rep));
    write_text_file(out_dir + "/report.json", char_report_json(rep).dump(2) + "\n");
    return kExitOk;
}

int run_solve(const RunConfig& cfg, const std::string& out_dir) {
    if (!cfg.command.c)
        throw ConfigError("$.command.c", "a wave speed is required for the solve command");
    ensure_dir(out_dir);
    const double c = *cfg.command.c;
    const WaveModel model = analysis_model(cfg);
    const SolverConfig sc = cfg.solver_config();

    SolveResult result = fixed_point_solve(model, c, InitPreset::Ramp, sc);
    const std::string tag = speed_tag(c);
    const double res = result.status == SolveStatus::Converged
                           ? guarded_residual(model, c, result.profile)
                           : std::numeric_limits<double>::quiet_NaN();
    const std::string verdict = verdict_or_unavailable(model, c);
    write_profile_csv(out_dir + "/profile_c" + tag + ".csv", result.profile);
    write_text_file(out_dir + "/profile_c" + tag + ".meta.json",
                    profile_sidecar(result, res, verdict).dump(2) + "\n");

    if (cfg.type == ModelType::Epidemic) {
        const EpidemicModel em = cfg.epidemic_model();
        const Profile psi = epidemic_reconstruct(em, result.profile, c);
        write_profile_csv(out_dir + "/profile_c" + tag + "_psi.csv", psi);
        nlohmann::json joint;
        joint["first_equation_residual"] = res;
        joint["second_equation_residual"] =
            epidemic_second_residual(em, result.profile, psi, c);
        write_text_file(out_dir + "/report.json", joint.dump(2) + "\n");
    } else if (cfg.type == ModelType::Population) {
        const PopulationModel pm = cfg.population_model();
        std::vector<std::string> warnings;
        const Profile psi = population_reconstruct(pm, result.profile, c, &warnings);
        write_profile_csv(out_dir + "/profile_c" + tag + "_psi.csv", psi);
        nlohmann::json joint;
        joint["mature_equation_residual"] = res;
        joint["immature_equation_residual"] = population_residual(pm, result.profile, psi, c);
        joint["warnings"] = warnings;
        write_text_file(out_dir + "/report.json", joint.dump(2) + "\n");
    }
    return result.status == SolveStatus::NotConverged ? kExitNotConverged : kExitOk;
}

int run_verify(const RunConfig& cfg, const std::string& out_dir) {
    if (!cfg.command.c)
        throw ConfigError("$.command.c", "a wave speed is required for the verify command");
    ensure_dir(out_dir);
    const double c = *cfg.command.c;
    const WaveModel model = analysis_model(cfg);
    const SolverConfig sc = cfg.solver_config();

    nlohmann::json report;

    // two-seed uniqueness experiment
    SolveResult seeds[2];
    const InitPreset presets[2] = {InitPreset::Ramp, InitPreset::Tanh};
    std::exception_ptr solver_error;
    parallel_for(2, [&](int i) {
        try {
            seeds[i] = fixed_point_solve(model, c, presets[i], sc);
        } catch (...) {
            solver_error = std::current_exception();
        }
    });
    if (solver_error) std::rethrow_exception(solver_error);

    const bool both_converged = seeds[0].status == SolveStatus::Converged &&
                                seeds[1].status == SolveStatus::Converged;
    nlohmann::json uniq;
    uniq["c"] = c;
    uniq["status"] = {to_string(seeds[0].status), to_string(seeds[1].status)};
    uniq["iterations"] = {seeds[0].iterations, seeds[1].iterations};
    if (both_converged) {
        const Alignment al = align_translate(seeds[0].profile, seeds[1].profile);
        uniq["shift"] = al.shift;
        uniq["distance"] = al.distance;
        uniq["relative_distance"] = al.distance / seeds[0].profile.sup;
        write_profile_csv(out_dir + "/profile_seed0.csv", seeds[0].profile);
        write_profile_csv(out_dir + "/profile_seed1.csv", seeds[1].profile);
        write_text_file(out_dir + "/profile_seed0.meta.json",
                        profile_sidecar(seeds[0], guarded_residual(model, c, seeds[0].profile),
                                        verdict_or_unavailable(model, c))
                                .dump(2) +
                            "\n");
        write_text_file(out_dir + "/profile_seed1.meta.json",
                        profile_sidecar(seeds[1], guarded_residual(model, c, seeds[1].profile),
                                        verdict_or_unavailable(model, c))
                                .dump(2) +
                            "\n");
    }
    report["uniqueness"] = uniq;

    // hypothesis checks at the experiment's amplitude scale
    double sup = 1e-3;
    for (const SolveResult& s : seeds)
        if (std::isfinite(s.profile.sup)) sup = std::max(sup, std::min(s.profile.sup, 1e6));
    const HypothesisReport hyp = verify_hypotheses(model, 1.5 * sup, c, cfg.seed);
    nlohmann::json hj;
    hj["lipschitz_ok"] = hyp.lipschitz_ok;
    hj["lipschitz_violations"] = hyp.lipschitz_violations;
    hj["worst_ratio"] = hyp.worst_ratio;
    hj["g_linear_bound_ok"] = hyp.g_linear_bound_ok;
    hj["fbeta_bound_ok"] = hyp.fbeta_bound_ok;
    hj["beta"] = hyp.beta;
    hj["chiL_minimizer"] = hyp.chiL_minimizer;
    hj["chiL_min_value"] = hyp.chiL_min_value;
    hj["chiL_nonpositive"] = hyp.chiL_nonpositive;
    hj["chi0_at_zero"] = hyp.chi0_at_zero;
    hj["chi0_negative"] = hyp.chi0_negative;
    report["hypotheses"] = hj;

    const bool experimental = !hyp.lipschitz_ok || seeds[0].experimental || seeds[1].experimental;
    report["verdict"] = experimental ? "Experimental" : "Consistent";

    // non-existence sweep below c*
    std::vector<double> low_speeds;
    std::optional<SpeedThresholds> th;
    try {
        th = compute_thresholds(model);
    } catch (const std::exception&) {
    }
    for (double s : cfg.command.speeds)
        if (!th || s < th->c_star) low_speeds.push_back(s);
    if (low_speeds.empty() && th) low_speeds = {th->c_star - 1.0, th->c_star - 0.5};
    nlohmann::json nonex = nlohmann::json::array();
    std::vector<nlohmann::json> rows(low_speeds.size());
    parallel_for(static_cast<int>(low_speeds.size()), [&](int i) {
        SolverConfig small = sc;
        small.init_amplitude = 1e-2;
        nlohmann::json row;
        row["c"] = low_speeds[i];
        try {
            const SolveResult r = fixed_point_solve(model, low_speeds[i], InitPreset::Ramp, small);
            row["status"] = to_string(r.status);
            row["sup"] = r.profile.values.size() ? r.profile.values.maxCoeff() : 0.0;
            row["final_drift"] = r.final_drift;
            row["iterations"] = r.iterations;
        } catch (const std::exception& e) {
            row["status"] = "Error";
            row["error"] = e.what();
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) nonex.push_back(std::move(r));
    report["nonexistence"] = nonex;

    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    const bool ran_out = seeds[0].status == SolveStatus::NotConverged ||
                         seeds[1].status == SolveStatus::NotConverged;
    return ran_out ? kExitNotConverged : kExitOk;
}

int run_sweep(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.command.speeds.empty())
        throw ConfigError("$.command.speeds", "speeds grid is required for the sweep command");
    ensure_dir(out_dir);
    const WaveModel model = analysis_model(cfg);
    const SolverConfig sc = cfg.solver_config();
    const int n = static_cast<int>(cfg.command.speeds.size());

    struct Row {
        double c;
        std::string status;
        int iterations = 0;
        double sup = 0.0;
        double residual = std::numeric_limits<double>::quiet_NaN();
        double rate = std::numeric_limits<double>::quiet_NaN();
        double r2 = std::numeric_limits<double>::quiet_NaN();
        std::string verdict;
        std::string error;
    };
    std::vector<Row> rows(n);

    SpeedThresholds th{};
    bool have_thresholds = true;
    try {
        th = compute_thresholds(model);
    } catch (const std::exception&) {
        have_thresholds = false;
    }

    parallel_for(n, [&](int i) {
        Row& row = rows[i];
        row.c = cfg.command.speeds[i];
        row.verdict = have_thresholds ? to_string(classify_speed(th, row.c)) : "Unavailable";
        try {
            const SolveResult r = fixed_point_solve(model, row.c, InitPreset::Ramp, sc);
            row.status = to_string(r.status);
            row.iterations = r.iterations;
            row.sup = r.profile.sup;
            if (r.status == SolveStatus::Converged) {
                row.residual = guarded_residual(model, row.c, r.profile);
                if (r.profile.decay) {
                    row.rate = r.profile.decay->rate;
                    row.r2 = r.profile.decay->r2;
                }
                write_profile_csv(out_dir + "/profile_c" + speed_tag(row.c) + ".csv", r.profile);
            }
        } catch (const std::exception& e) {
            row.status = "Error";
            row.error = e.what();
        }
    });

    std::string csv = "c,status,iterations,sup,residual,decay_rate,decay_r2,verdict\n";
    nlohmann::json jrows = nlohmann::json::array();
    for (const Row& row : rows) {
        csv += format_double(row.c) + "," + row.status + "," + std::to_string(row.iterations) +
               "," + format_double(row.sup) + "," + format_double(row.residual) + "," +
               format_double(row.rate) + "," + format_double(row.r2) + "," + row.verdict + "\n";
        nlohmann::json jr;
        jr["c"] = row.c;
        jr["status"] = row.status;
        jr["iterations"] = row.iterations;
        jr["sup"] = row.sup;
        jr["residual"] = format_double(row.residual);
        jr["decay_rate"] = format_double(row.rate);
        jr["verdict"] = row.verdict;
        if (!row.error.empty()) jr["error"] = row.error;
        jrows.push_back(jr);
    }
    nlohmann::json report;
    if (have_thresholds) {
        report["c_star"] = th.c_star;
        report["c_starstar"] = th.c_starstar;
    }
    report["rows"] = jrows;
    write_text_file(out_dir + "/report.csv", csv);
    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    return kExitOk;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, std::optional<std::uint64_t> seed_override) {
    try {
        RunConfig cfg = parse_config_file(config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (command == "speeds") return run_speeds(cfg, out_dir);
        if (command == "solve") return run_solve(cfg, out_dir);
        if (command == "verify") return run_verify(cfg, out_dir);
        if (command == "sweep") return run_sweep(cfg, out_dir);
        std::cerr << "unknown command: " << command << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace wavefront
