#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "wavefront/charspec.hpp"
#include "wavefront/kernels.hpp"
#include "wavefront/nonlinearity.hpp"

namespace wavefront {

/// Two-sided exponential Green kernel of d^2/dt^2 - c d/dt - beta.
struct K1Kernel {
    double c;
    double beta;
    double nu;      // negative root of z^2 - c z - beta = 0
    double mu;      // positive root
    double sigma;   // sqrt(c^2 + 4 beta) = mu - nu

    /// bilateral transform 1/(beta + c z - z^2) for z in (nu, mu),
    /// evaluated through the factored form
    double transform(double z) const { return 1.0 / ((z - nu) * (mu - z)); }
    double density(double s) const {
        return std::exp((s >= 0.0 ? nu : mu) * s) / sigma;
    }
};

K1Kernel build_k1(double c, double beta);

/// beta = max{f'(0), sup_{[0,M]} f'} + 1, with the sup sampled on 1e4 grid
/// points plus endpoint refinement.  Guarantees f_beta = beta s - f(s) >= 0
/// and Lipschitz constant beta - inf f' on [0, M].
double select_beta(const ReactionTerm& f, double M);

/// Discretization of k2(r) = int_0^inf K(s, r - c s) ds against the P1 hat
/// basis on a uniform grid: (k2 * G)(t_i) ~= sum_k weights[k] G[i - offsets0 - k].
struct K2Taps {
    int offset0 = 0;           // grid offset of weights[0]
    Eigen::ArrayXd weights;    // integrates to the k2 mass (1 for unit kernels)
    double mass() const { return weights.sum(); }
};

K2Taps build_k2_taps(const SpatioTemporalKernel& K, double c, double h);

/// Discrete convolution of the taps with grid values G, using constant
/// extensions g_left / g_right outside the window.
Eigen::ArrayXd tap_convolve(const K2Taps& taps, const Eigen::ArrayXd& G, double g_left,
                            double g_right);

/// Exact convolution of piecewise-linear grid data F with the two-sided
/// exponential kernel prefactor * {e^{nu s} (s>=0), e^{mu s} (s<0)}, with
/// constant extensions F_left / F_right.
Eigen::ArrayXd exp_green_convolve(const Eigen::ArrayXd& F, double h, double nu, double mu,
                                  double prefactor, double F_left, double F_right);

struct DecayFit {
    double rate = 0.0;
    double r2 = 0.0;
    int points = 0;
};

struct Profile {
    double t0 = 0.0;
    double h = 0.0;
    Eigen::ArrayXd values;
    double c = 0.0;
    double sup = 0.0;
    double anchor_theta = 0.5;
    std::optional<DecayFit> decay;

    int size() const { return static_cast<int>(values.size()); }
    double t(int i) const { return t0 + i * h; }
    double t_end() const { return t0 + (size() - 1) * h; }
    /// linear interpolation with the solver's boundary extensions
    double interpolate(double t, double left, double right) const;
};

enum class SolveStatus { Converged, Collapsed, NotConverged };

const char* to_string(SolveStatus s);

enum class InitPreset { Ramp, Tanh };

struct SolverConfig {
    double tol = 1e-8;
    int max_iter = 5000;
    double collapse_threshold = 1e-6;
    double theta = 0.5;            // translation gauge phi(0) = theta sup
    double pin_fraction = 1e-6;    // left-tail pinning threshold (as a sup fraction)
    std::optional<double> window_T;
    std::optional<double> step_h;
    std::optional<double> init_amplitude;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NotConverged;
    Profile profile;
    int iterations = 0;
    double beta = 0.0;
    double final_drift = 0.0;      // per-sweep anchor shift at termination
    double final_change = 0.0;     // anchored sup-change at termination
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    bool experimental = false;     // non-monotone g or violated hypotheses
    std::vector<std::string> warnings;
};

/// One application of the fixed-point map phi -> k1 * (k2 * g(phi) + f_beta(phi))
/// on grid data, with explicit boundary extension values.
struct SweepContext {
    const WaveModel* model;
    K1Kernel k1;
    K2Taps taps;
    double h;

    Eigen::ArrayXd apply(const Eigen::ArrayXd& phi, double left_phi, double right_phi) const;
};

SweepContext make_sweep_context(const WaveModel& model, double c, double h, double beta);

/// Fixed-point iteration for the wave profile at speed c.
SolveResult fixed_point_solve(const WaveModel& model, double c, InitPreset preset,
                              const SolverConfig& cfg = {});
SolveResult fixed_point_solve(const WaveModel& model, double c, const Profile& init,
                              const SolverConfig& cfg = {});

/// Sup-norm residual of the profile ODE
///   y'' - c y' - f(y) + int int K g(y(t - cs - w)) = 0
/// by central differences and kernel quadrature, interior points only.
double residual(const WaveModel& model, double c, const Profile& prof);

/// Least-squares exponential rate of the left tail (values between 1e-12 and
/// 1e-3 of sup).  Throws TailTooShort below 20 usable points.
DecayFit decay_rate(const Profile& prof);

struct Alignment {
    double shift = 0.0;
    double distance = 0.0;
};

/// Minimize sup |p1(t) - p2(t + shift)| over shifts by coarse scan plus
/// golden-section refinement.
Alignment align_translate(const Profile& p1, const Profile& p2);

struct HypothesisReport {
    bool lipschitz_ok = true;
    int lipschitz_violations = 0;
    double worst_ratio = 0.0;        // max |g(s1)-g(s2)| / (L |s1-s2|)
    bool g_linear_bound_ok = true;   // g(s) <= L s on [0, M]
    bool fbeta_bound_ok = true;      // f_beta(s) <= (beta - inf f') s on [0, M]
    double beta = 0.0;
    double chiL_minimizer = 0.0;     // argmin of chi_L on (0, gamma_K)
    double chiL_min_value = 0.0;
    bool chiL_nonpositive = false;   // exists m with chi_L(m, c) <= 0
    double chi0_at_zero = 0.0;       // (f'(0) - g'(0)) / beta, must be < 0
    bool chi0_negative = false;
};

HypothesisReport verify_hypotheses(const WaveModel& model, double M, double c,
                                   std::uint64_t seed = 0);

/// Build an initial profile on [-T, T] with step h.
Profile make_preset(InitPreset preset, double T, double h, double c, double amplitude,
                    double tail_rate);

}  // namespace wavefront
