#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wavefront/kernels.hpp"

namespace wavefront {

/// Death term f: continuous, f(0) = 0, increasing on [0, inf).
struct ReactionTerm {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    double fprime0 = 0.0;    // f'(0)
    double inf_deriv = 0.0;  // inf_{s >= 0} f'(s)
    std::string name;
};

/// Birth term g: g(0) = 0, g > 0 on (0, inf), differentiable at 0.
struct Nonlinearity {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    double gprime0 = 0.0;
    double lipschitz = 0.0;  // L >= g'(0)
    bool monotone = false;
    std::string name;
};

struct WaveModel {
    ReactionTerm f;
    Nonlinearity g;
    SpatioTemporalKernel kernel;

    // hypothesis flags recorded at construction; violations do not prevent
    // running the solver, they downgrade results to experimental
    bool h1_ok = true;  // g'(0) > 0
    bool h2_ok = true;  // f'(0) < g'(0)
};

WaveModel make_wave_model(ReactionTerm f, Nonlinearity g, SpatioTemporalKernel kernel);

// catalogue ------------------------------------------------------------------

ReactionTerm reaction_linear(double a);
/// f(s) = a s + b s^2 with a >= 0, b >= 0
ReactionTerm reaction_quadratic(double a, double b);

Nonlinearity birth_linear(double a);
/// g(u) = a u / (1 + u)
Nonlinearity birth_saturating(double a);
/// g(u) = a u / (1 + u^k); monotone iff k <= 1
Nonlinearity birth_mackey_glass(double a, double k, std::optional<double> lipschitz = {});
/// g(u) = a u e^{-u}
Nonlinearity birth_ricker(double a);
/// g(u) = a u + b u^2; Lipschitz bound must be supplied (slope is unbounded)
Nonlinearity birth_quadratic(double a, double b, double lipschitz);

/// Smallest positive equilibrium of g(u) = f(u), if one exists below `cap`.
std::optional<double> positive_equilibrium(const WaveModel& model, double cap = 1e6);

/// sup of |d| over [0, M] estimated from `samples` grid points with local
/// ternary refinement around the best cell.
double sampled_sup(const std::function<double(double)>& d, double M, int samples = 10000);

}  // namespace wavefront
