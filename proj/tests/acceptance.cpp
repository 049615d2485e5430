// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run directly or through ctest; --only N restricts to a single criterion.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kernel_catalogue.hpp"
#include "wavefront/systems.hpp"

using namespace wavefront;
using wavefront::testing::random_mixture;

namespace {

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

WaveModel kpp_instance(SpatioTemporalKernel K) {
    return make_wave_model(reaction_linear(1.0), birth_saturating(2.0), std::move(K));
}

std::vector<std::pair<std::string, SpatioTemporalKernel>> experiment_kernels() {
    return {{"point", make_point_mass(0.0, 0.0)},
            {"gaussian", make_delta_time(1.0, GaussianSpatial{1.0, 0.0})},
            {"asymmetric", make_delta_time(1.0, PointMassSpatial{-1.0})}};
}

struct WaveRun {
    std::string kernel;
    double c = 0.0;
    double lambda1 = 0.0;
    SolveResult ramp;
    SolveResult tanh;
    WaveModel model;
};

// converged profiles shared by criteria 7, 9 and 10
std::vector<WaveRun> g_runs;

bool ensure_runs(std::string& detail) {
    if (!g_runs.empty()) return true;
    for (auto& [name, K] : experiment_kernels()) {
        WaveRun run{name, 0.0, 0.0, {}, {}, kpp_instance(K)};
        const SpeedThresholds th = compute_thresholds(run.model);
        run.c = th.c_starstar + 0.5;
        const auto roots = find_positive_roots(chi0_params(run.model), run.c);
        if (!roots) {
            detail = name + ": no characteristic root above c**";
            return false;
        }
        run.lambda1 = roots->lambda1;
        SolverConfig cfg;
        cfg.window_T = 60.0;
        cfg.step_h = 0.05;
        run.ramp = fixed_point_solve(run.model, run.c, InitPreset::Ramp, cfg);
        run.tanh = fixed_point_solve(run.model, run.c, InitPreset::Tanh, cfg);
        g_runs.push_back(std::move(run));
    }
    return true;
}

bool c01_kpp_closed_form(std::string& detail) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uq(0.05, 9.0), ur(0.05, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double q = uq(rng);
        const double p = q + ur(rng) * (10.0 - q);
        const double c = minimal_speed(CharParams(p, q, make_point_mass(0.0, 0.0))).c;
        worst = std::max(worst, std::fabs(c - 2.0 * std::sqrt(p - q)));
    }
    detail = fmt("max |c# - 2 sqrt(p-q)| = %.2e over 20 random pairs (tol 1e-6)", worst);
    return worst < 1e-6;
}

bool c02_root_values(std::string& detail) {
    const CharParams params(2.0, 1.0, make_point_mass(0.0, 0.0));
    const auto r = find_positive_roots(params, 2.5);
    if (!r || !r->lambda2) {
        detail = "roots at c = 2.5 missing";
        return false;
    }
    const double e1 = std::fabs(r->lambda1 - 0.5);
    const double e2 = std::fabs(*r->lambda2 - 2.0);
    const auto d = find_positive_roots(params, 2.0);
    const bool dbl = d && d->multiplicity_two && std::fabs(d->lambda1 - 1.0) < 1e-5;
    detail = fmt("|l1-0.5| = %.1e, |l2-2| = %.1e (tol 1e-8); double root at c=2: %s", e1, e2,
                 dbl ? "yes" : "no");
    return e1 < 1e-8 && e2 < 1e-8 && dbl;
}

bool c03_convexity_structure(std::string& detail) {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> uq(0.3, 1.5), up(1.3, 3.0), uz(0.05, 0.9);
    for (int trial = 0; trial < 10; ++trial) {
        const SpatioTemporalKernel K = random_mixture(rng);
        const double q = uq(rng);
        const double p = q * up(rng);
        const CharParams params(p, q, K);
        const double chash = minimal_speed(params).c;
        double prev_l1 = kInf, prev_gk = 0.0;
        const double beta = 30.0;
        for (int i = 1; i <= 10; ++i) {
            const double c = chash + 0.25 * i;
            if (std::fabs(eval_R(params, 0.0, c) - (p - q)) > 1e-12) {
                detail = fmt("trial %d: R(0,c) != p - q", trial);
                return false;
            }
            const double gamma = convergence_abscissa(K, c);
            const double z = uz(rng) * (std::isfinite(gamma) ? std::min(0.8 * gamma, 1.0) : 1.0);
            const double d = 1e-4;
            const double second = (eval_R(params, z + d, c) - 2.0 * eval_R(params, z, c) +
                                   eval_R(params, z - d, c)) /
                                  (d * d);
            if (second < 2.0 - 1e-3) {
                detail = fmt("trial %d: second difference %.6f < 2 - 1e-3", trial, second);
                return false;
            }
            const auto roots = find_positive_roots(params, c);
            if (!roots) {
                detail = fmt("trial %d: no roots above c#", trial);
                return false;
            }
            if (roots->lambda2 &&
                !(roots->lambda1 <= *roots->lambda2 && *roots->lambda2 < roots->mu_q)) {
                detail = fmt("trial %d: root ordering violated", trial);
                return false;
            }
            if (!(roots->lambda1 < prev_l1)) {
                detail = fmt("trial %d: lambda_1 not strictly decreasing", trial);
                return false;
            }
            prev_l1 = roots->lambda1;
            const double gk = gamma_K(c, beta, K);
            if (!(gk > prev_gk)) {
                detail = fmt("trial %d: gamma_K not strictly increasing", trial);
                return false;
            }
            prev_gk = gk;
        }
    }
    detail = "10 random mixtures x 10 speeds: convexity, R(0,c), ordering, monotonicity";
    return true;
}

bool c04_beta_invariance(std::string& detail) {
    const WaveModel model = kpp_instance(make_point_mass(0.0, 0.0));
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> uz(0.0, 1.0), uc(0.5, 3.0), ub(1.5, 15.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double c = uc(rng);
        const double beta = ub(rng);
        const double z = uz(rng) * 0.9 * gamma_K(c, beta, model.kernel);
        worst = std::max(worst, char_identity_residual(model, beta, c, z));
    }
    if (worst >= 1e-10) {
        detail = fmt("identity residual %.2e >= 1e-10", worst);
        return false;
    }

    // root sets of chi on (0, mu(c)) across beta
    const double c = 2.5, beta0 = 2.0;
    auto chi_roots = [&](double beta) {
        const K1Kernel k1 = build_k1(c, beta);
        auto chi = [&](double z) {
            return 1.0 - (model.g.gprime0 * laplace_moment(model.kernel, z, c) + beta -
                          model.f.fprime0) *
                             k1.transform(z);
        };
        std::vector<double> roots;
        const double z_hi = 0.999 * build_k1(c, beta0).mu;
        double prev = chi(1e-9);
        for (int i = 1; i <= 4000; ++i) {
            const double z = 1e-9 + (z_hi - 1e-9) * i / 4000.0;
            const double v = chi(z);
            if ((prev < 0.0) != (v < 0.0)) {
                double lo = z - z_hi / 4000.0, hi = z;
                for (int j = 0; j < 80; ++j) {
                    const double mid = 0.5 * (lo + hi);
                    ((chi(mid) < 0.0) == (prev < 0.0) ? lo : hi) = mid;
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev = v;
        }
        return roots;
    };
    const auto base = chi_roots(beta0);
    double worst_root = 0.0;
    for (double mult : {2.0, 5.0}) {
        const auto other = chi_roots(mult * beta0);
        if (other.size() != base.size()) {
            detail = "root count changed with beta";
            return false;
        }
        for (std::size_t i = 0; i < base.size(); ++i)
            worst_root = std::max(worst_root, std::fabs(other[i] - base[i]));
    }
    detail = fmt("identity residual %.1e; root drift across beta %.1e (tols 1e-10, 1e-8)", worst,
                 worst_root);
    return worst_root < 1e-8;
}

bool c05_speed_bound(std::string& detail) {
    std::vector<SpatioTemporalKernel> kernels{
        make_point_mass(1.0, 0.0),
        make_point_mass(0.5, -1.0),
        make_point_mass(0.0, -2.0),
        make_delta_time(1.0, GaussianSpatial{1.0, 0.0}),
        make_delta_time(1.0, GaussianSpatial{0.5, -0.5}),
        make_delta_time(0.5, TwoSidedExponentialSpatial{3.0}),
        make_delta_time(0.0, OneSidedExponentialSpatial{2.0, Side::Left}),
        make_product(ExponentialTemporal{2.0, 0.0}, GaussianSpatial{1.0, -0.25}),
        make_mixture({{0.5, make_point_mass(1.0, -1.0)}, {0.5, make_point_mass(0.5, 0.0)}}),
        make_mixture({{0.6, make_delta_time(1.0, GaussianSpatial{1.0, 0.0})},
                      {0.4, make_point_mass(2.0, -0.5)}}),
    };
    const double p = 2.0, q = 1.0;
    double slack = kInf;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const MomentReport m = first_moments(kernels[i]);
        if (m.mean_space > 0.0) {
            detail = fmt("kernel %zu has positive mean_space", i);
            return false;
        }
        const double bound = speed_lower_bound(p, kernels[i]);
        const double cstar = minimal_speed(CharParams(p, q, kernels[i])).c;
        if (!(cstar > bound)) {
            detail = fmt("kernel %zu: c* = %.6f <= bound %.6f", i, cstar, bound);
            return false;
        }
        slack = std::min(slack, cstar - bound);
    }
    detail = fmt("10 kernels with mean_space <= 0: min (c* - bound) = %.4f > 0", slack);
    return true;
}

bool c06_mass_identities(std::string& detail) {
    double worst = 0.0;
    for (double c : {-1.0, 0.0, 2.0}) {
        for (double beta : {1.0, 4.0}) {
            const K1Kernel k1 = build_k1(c, beta);
            auto dens = [&k1](double s) { return k1.density(s); };
            const double mass = integrate_right_tail(dens, 0.0).value +
                                integrate_left_tail(dens, 0.0).value;
            worst = std::max(worst, std::fabs(mass - 1.0 / beta) * beta);
        }
    }
    for (const auto& [name, K] : wavefront::testing::kernel_catalogue())
        for (double c : {-0.5, 1.5})
            worst = std::max(worst, std::fabs(build_k2_taps(K, c, 0.05).mass() - 1.0));
    std::vector<DelayMeasure> measures{point_delay(0.0), point_delay(1.5), exponential_delay(2.0)};
    DelayMeasure mix;
    mix.atoms = {{0.5, 0.25}};
    mix.exps = {{0.5, 1.0}};
    measures.push_back(mix);
    for (const auto& P : measures)
        for (double alpha : {0.7, 1.3})
            worst = std::max(worst,
                             std::fabs(alpha * epidemic_K2(P, alpha).mass_quadrature() - 1.0));
    detail = fmt("max deviation across int k1 = 1/beta, int k2 = 1, alpha int K2 = 1: %.2e "
                 "(tol 1e-8)",
                 worst);
    return worst < 1e-8;
}

bool c07_uniqueness(std::string& detail) {
    if (!ensure_runs(detail)) return false;
    std::string parts;
    for (const WaveRun& run : g_runs) {
        if (run.ramp.status != SolveStatus::Converged ||
            run.tanh.status != SolveStatus::Converged) {
            detail = run.kernel + ": seed did not converge (" +
                     std::string(to_string(run.ramp.status)) + "/" +
                     std::string(to_string(run.tanh.status)) + ")";
            return false;
        }
        const Alignment al = align_translate(run.ramp.profile, run.tanh.profile);
        const double rel = al.distance / run.ramp.profile.sup;
        parts += fmt("%s %.1e  ", run.kernel.c_str(), rel);
        if (!(rel < 1e-3)) {
            detail = run.kernel + fmt(": aligned distance %.2e >= 1e-3 sup", rel);
            return false;
        }
    }
    detail = "aligned two-seed distance / sup: " + parts + "(tol 1e-3)";
    return true;
}

bool c08_nonexistence(std::string& detail) {
    if (!ensure_runs(detail)) return false;
    std::string parts;
    bool ok = true;
    for (const WaveRun& run : g_runs) {
        const double cstar = compute_thresholds(run.model).c_star;
        for (double dc : {0.5, 1.0}) {
            SolverConfig cfg;
            cfg.window_T = 60.0;
            cfg.step_h = 0.05;
            cfg.init_amplitude = 1e-2;
            const SolveResult r =
                fixed_point_solve(run.model, cstar - dc, InitPreset::Ramp, cfg);
            parts += fmt("%s@c*-%.1f:%s(sup %.1e, drift %.2f) ", run.kernel.c_str(), dc,
                         to_string(r.status), r.profile.values.maxCoeff(), r.final_drift);
            if (r.status != SolveStatus::Collapsed) ok = false;
        }
    }
    detail = parts + "-- criterion requires Collapsed";
    return ok;
}

bool c09_decay_law(std::string& detail) {
    if (!ensure_runs(detail)) return false;
    std::string parts;
    for (const WaveRun& run : g_runs) {
        if (!run.ramp.profile.decay) {
            detail = run.kernel + ": no decay fit";
            return false;
        }
        const DecayFit fit = *run.ramp.profile.decay;
        const double rel = std::fabs(fit.rate - run.lambda1) / run.lambda1;
        parts += fmt("%s %.3f%% r2=%.5f  ", run.kernel.c_str(), 100.0 * rel, fit.r2);
        if (!(rel <= 0.02) || !(fit.r2 >= 0.999)) {
            detail = run.kernel + fmt(": rate error %.2f%%, r2 %.5f", 100.0 * rel, fit.r2);
            return false;
        }
    }
    detail = "tail rate vs lambda_1: " + parts + "(tol 2%, r2 >= 0.999)";
    return true;
}

bool c10_residual(std::string& detail) {
    if (!ensure_runs(detail)) return false;
    std::string parts;
    for (const WaveRun& run : g_runs) {
        const double res_h = residual(run.model, run.c, run.ramp.profile);
        if (!(res_h < 1e-3)) {
            detail = run.kernel + fmt(": residual %.2e >= 1e-3 at h = 0.05", res_h);
            return false;
        }
        SolverConfig fine;
        fine.window_T = 60.0;
        fine.step_h = 0.025;
        const SolveResult refined = fixed_point_solve(run.model, run.c, InitPreset::Ramp, fine);
        if (refined.status != SolveStatus::Converged) {
            detail = run.kernel + ": refined solve did not converge";
            return false;
        }
        const double res_h2 = residual(run.model, run.c, refined.profile);
        const double ratio = res_h / res_h2;
        parts += fmt("%s %.1e->%.1e (x%.1f)  ", run.kernel.c_str(), res_h, res_h2, ratio);
        if (!(ratio >= 3.0)) {
            detail = run.kernel + fmt(": halving h reduced residual only x%.2f", ratio);
            return false;
        }
    }
    detail = "sup residual h=0.05 -> h=0.025: " + parts + "(tol 1e-3, factor >= 3)";
    return true;
}

bool c11_epidemic(std::string& detail) {
    const EpidemicModel em{1.0, point_delay(0.0), GaussianSpatial{0.5, 0.0},
                           reaction_linear(1.0), birth_saturating(4.0)};
    const SpatioTemporalKernel induced = epidemic_induced_kernel(em);
    const CharParams params(em.g.gprime0 / em.alpha, em.f.fprime0, induced);
    std::mt19937_64 rng(1111);
    std::uniform_real_distribution<double> uz(0.0, 2.0), uc(0.1, 2.5);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double z = uz(rng), c = uc(rng);
        worst = std::max(worst, std::fabs(epidemic_charfun(em, z, c, CharVariant::Chi0) -
                                          eval_R(params, z, c)));
    }
    if (worst >= 1e-8) {
        detail = fmt("charfun vs eval_R deviation %.2e >= 1e-8", worst);
        return false;
    }

    const WaveModel scalar = epidemic_scalar_model(em);
    const double c = compute_thresholds(scalar).c_starstar + 0.5;
    SolverConfig cfg;
    cfg.window_T = 60.0;
    cfg.step_h = 0.05;
    const EpidemicSolve pair = epidemic_solve(em, c, InitPreset::Ramp, cfg);
    if (pair.scalar.status != SolveStatus::Converged) {
        detail = "epidemic scalar solve did not converge";
        return false;
    }
    const double res = epidemic_second_residual(em, pair.scalar.profile, pair.psi, c);
    if (!(res < 1e-3)) {
        detail = fmt("second-equation residual %.2e >= 1e-3", res);
        return false;
    }

    // c = 0 algebraic case: alpha psi = g(phi) to round-off
    Profile phi = pair.scalar.profile;
    phi.c = 0.0;
    const Profile psi0 = epidemic_reconstruct(em, phi, 0.0);
    double alg = 0.0;
    for (int i = 0; i < phi.size(); ++i)
        alg = std::max(alg, std::fabs(em.alpha * psi0.values[i] - em.g.value(phi.values[i])));
    detail = fmt("charfun dev %.1e; (sy5)_2 residual %.1e; c=0 identity dev %.1e", worst, res,
                 alg);
    return alg < 1e-14;
}

bool c12_population(std::string& detail) {
    const PopulationModel pm{1.0, 1.0, make_delta_time(1.0, GaussianSpatial{1.0, 0.0}),
                             reaction_linear(1.0), birth_saturating(2.0)};
    const WaveModel mature = make_wave_model(pm.f, pm.g, pm.kernel);
    const double c = compute_thresholds(mature).c_starstar + 0.5;
    SolverConfig cfg;
    cfg.window_T = 60.0;
    cfg.step_h = 0.05;
    const SolveResult r = fixed_point_solve(mature, c, InitPreset::Ramp, cfg);
    if (r.status != SolveStatus::Converged) {
        detail = "mature solve did not converge";
        return false;
    }
    const Profile psi = population_reconstruct(pm, r.profile, c);
    const double res = population_residual(pm, r.profile, psi, c);
    if (!(res < 1e-3)) {
        detail = fmt("immature residual %.2e >= 1e-3", res);
        return false;
    }

    const PopulationModel trivial{1.0, 1.0, make_point_mass(0.0, 0.0), reaction_linear(1.0),
                                  birth_saturating(2.0)};
    const Profile psi0 = population_reconstruct(trivial, r.profile, c);
    const double zero = psi0.values.abs().maxCoeff();
    detail = fmt("immature residual %.1e (tol 1e-3); psi for point-mass kernel: sup %.1e", res,
                 zero);
    return zero == 0.0;
}

bool c13_equilibrium(std::string& detail) {
    double worst = 0.0;
    for (const auto& [name, K] : wavefront::testing::kernel_catalogue()) {
        const WaveModel model = kpp_instance(K);
        const double kappa = positive_equilibrium(model).value();
        const SweepContext ctx = make_sweep_context(model, 1.3, 0.05, select_beta(model.f, 2.0));
        const Eigen::ArrayXd flat = Eigen::ArrayXd::Constant(800, kappa);
        const Eigen::ArrayXd next = ctx.apply(flat, kappa, kappa);
        worst = std::max(worst, (next - kappa).abs().maxCoeff());
    }
    detail = fmt("max |sweep(kappa) - kappa| = %.2e across the catalogue (tol 1e-10)", worst);
    return worst < 1e-10;
}

bool c14_verdict_partition(std::string& detail) {
    Nonlinearity g = birth_saturating(2.0);
    g.lipschitz = 3.0;  // L > g'(0): genuine indeterminate band
    const WaveModel model =
        make_wave_model(reaction_linear(1.0), std::move(g), make_point_mass(0.0, 0.0));
    const SpeedThresholds th = compute_thresholds(model);
    if (!(th.c_starstar > th.c_star)) {
        detail = "expected c** > c*";
        return false;
    }
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        const double c = (th.c_star - 1.0) + (th.c_starstar + 1.0 - (th.c_star - 1.0)) * i / 49.0;
        if (std::fabs(c - th.c_star) < 1e-6 || std::fabs(c - th.c_starstar) < 1e-6) continue;
        const SpeedVerdict v = classify_speed(th, c);
        SpeedVerdict expect;
        if (c < th.c_star)
            expect = SpeedVerdict::NonExistent;
        else if (c < th.c_starstar)
            expect = SpeedVerdict::Indeterminate;
        else
            expect = SpeedVerdict::UniqueIfExists;
        if (v != expect) {
            detail = fmt("c = %.6f: got %s, expected %s", c, to_string(v), to_string(expect));
            return false;
        }
        ++checked;
    }
    detail = fmt("%d grid points partition correctly (c* = %.6f, c** = %.6f)", checked, th.c_star,
                 th.c_starstar);
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc - 0; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    const std::vector<Criterion> criteria{
        {1, "kpp-closed-form", c01_kpp_closed_form},
        {2, "root-values", c02_root_values},
        {3, "convexity-structure", c03_convexity_structure},
        {4, "beta-invariance", c04_beta_invariance},
        {5, "speed-lower-bound", c05_speed_bound},
        {6, "mass-identities", c06_mass_identities},
        {7, "uniqueness-two-seeds", c07_uniqueness},
        {8, "nonexistence-collapse", c08_nonexistence},
        {9, "decay-rate-law", c09_decay_law},
        {10, "profile-residual-order", c10_residual},
        {11, "epidemic-consistency", c11_epidemic},
        {12, "population-reconstruction", c12_population},
        {13, "equilibrium-preservation", c13_equilibrium},
        {14, "verdict-partition", c14_verdict_partition},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %02d %-26s %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
