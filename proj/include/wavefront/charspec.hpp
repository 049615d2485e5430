#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wavefront/kernels.hpp"
#include "wavefront/nonlinearity.hpp"

namespace wavefront {

/// Parameters of the generalized characteristic function
///   R(z, c) = z^2 - c z - q + p * int int K e^{-z(cs+w)}.
/// chi_0 uses (p, q) = (g'(0), f'(0)); chi_L uses (L, inf f').
struct CharParams {
    CharParams(double p_, double q_, SpatioTemporalKernel kernel_);
    double p;
    double q;
    SpatioTemporalKernel kernel;
};

struct RootPair {
    double lambda1 = 0.0;
    std::optional<double> lambda2;
    double mu_q = 0.0;  // positive root of z^2 - c z - q = 0
    bool multiplicity_two = false;
};

enum class SpeedVerdict { NonExistent, UniqueIfExists, Indeterminate };

const char* to_string(SpeedVerdict v);

/// One-sided limit of R(z, c) as z -> gamma#(c) from below, by Richardson
/// extrapolation on 4 nodes, with blow-up detection.
struct BoundaryLimit {
    double value = kInf;
    double error = 0.0;
    bool diverged = true;
};

/// R(z, c); +inf beyond the abscissa, AbscissaBoundary inside its band.
double eval_R(const CharParams& params, double z, double c);

/// dR/dz (closed form via the weighted Laplace moment).
double eval_R_dz(const CharParams& params, double z, double c);

/// d2R/dz2 >= 2 (strict convexity).
double eval_R_dz2(const CharParams& params, double z, double c);

/// Positive roots of R(., c) on (0, min{gamma#(c), mu_q(c)}); nullopt when
/// the convex minimum stays positive.
std::optional<RootPair> find_positive_roots(const CharParams& params, double c);

struct MinimalSpeed {
    double c;
    RootPair critical;  // the (near-)double root at the threshold speed
};

/// c# = inf{c : R(., c) has a positive root}, bisection to 1e-9 in c.
MinimalSpeed minimal_speed(const CharParams& params);

/// Admissible-speed lower bound -g'(0) * mean_space / (1 + g'(0) * mean_time).
double speed_lower_bound(double g_prime0, const SpatioTemporalKernel& K);

/// gamma_K(c) = min{ mu(c), gamma#(c) } with mu(c) = (c + sqrt(c^2+4 beta))/2.
double gamma_K(double c, double beta, const SpatioTemporalKernel& K);

BoundaryLimit boundary_limit(const CharParams& params, double c);

/// |chi(z)| computed through the kernel-decomposition route minus the direct
/// -chi_0 / (beta + c z - z^2) route.
double char_identity_residual(const WaveModel& model, double beta, double c, double z);

CharParams chi0_params(const WaveModel& model);
CharParams chiL_params(const WaveModel& model);

struct SpeedThresholds {
    double c_star;             // minimal speed of chi_0
    double c_starstar;         // minimal speed of chi_L
    BoundaryLimit boundary;    // chi_L(gamma#(c**)-, c**)
    RootPair critical0;        // double root of chi_0 at c_star
};

SpeedThresholds compute_thresholds(const WaveModel& model);

SpeedVerdict classify_speed(const SpeedThresholds& th, double c);
SpeedVerdict classify_speed(const WaveModel& model, double c);

struct CharRow {
    double c;
    double gamma_sharp;
    double gamma_K;
    std::optional<RootPair> roots0;
    std::optional<RootPair> rootsL;
    SpeedVerdict verdict;
};

struct CharReport {
    double c_star;
    double c_starstar;
    BoundaryLimit boundary;
    double lower_bound;  // admissible-speed bound from the first moments
    double beta;         // shift used for the gamma_K column
    std::vector<CharRow> rows;
};

CharReport build_char_report(const WaveModel& model, std::span<const double> speeds);

}  // namespace wavefront
