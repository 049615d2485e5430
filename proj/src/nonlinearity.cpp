#include "wavefront/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace wavefront {

WaveModel make_wave_model(ReactionTerm f, Nonlinearity g, SpatioTemporalKernel kernel) {
    WaveModel m{std::move(f), std::move(g), std::move(kernel)};
    m.h1_ok = m.g.gprime0 > 0.0;
    m.h2_ok = m.f.fprime0 < m.g.gprime0;
    if (m.g.lipschitz < m.g.gprime0)
        throw std::invalid_argument("Lipschitz constant must dominate g'(0)");
    return m;
}

ReactionTerm reaction_linear(double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("linear reaction needs a >= 0");
    ReactionTerm f;
    f.value = [a](double s) { return a * s; };
    f.deriv = [a](double) { return a; };
    f.fprime0 = a;
    f.inf_deriv = a;
    f.name = "linear";
    return f;
}

ReactionTerm reaction_quadratic(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("quadratic reaction needs a, b >= 0");
    ReactionTerm f;
    f.value = [a, b](double s) { return a * s + b * s * s; };
    f.deriv = [a, b](double s) { return a + 2.0 * b * s; };
    f.fprime0 = a;
    f.inf_deriv = a;  // derivative increasing on [0, inf)
    f.name = "quadratic";
    return f;
}

Nonlinearity birth_linear(double a) {
    Nonlinearity g;
    g.value = [a](double u) { return a * u; };
    g.deriv = [a](double) { return a; };
    g.gprime0 = a;
    g.lipschitz = a;
    g.monotone = true;
    g.name = "linear";
    return g;
}

Nonlinearity birth_saturating(double a) {
    Nonlinearity g;
    g.value = [a](double u) { return a * u / (1.0 + u); };
    g.deriv = [a](double u) { return a / ((1.0 + u) * (1.0 + u)); };
    g.gprime0 = a;
    g.lipschitz = a;
    g.monotone = true;
    g.name = "saturating";
    return g;
}

Nonlinearity birth_mackey_glass(double a, double k, std::optional<double> lipschitz) {
    if (!(k > 0.0)) throw std::invalid_argument("mackey_glass exponent must be > 0");
    Nonlinearity g;
    g.value = [a, k](double u) { return a * u / (1.0 + std::pow(u, k)); };
    g.deriv = [a, k](double u) {
        const double p = std::pow(u, k);
        const double d = 1.0 + p;
        return a * (1.0 + (1.0 - k) * p) / (d * d);
    };
    g.gprime0 = a;
    g.monotone = k <= 1.0;
    if (lipschitz) {
        g.lipschitz = *lipschitz;
    } else {
        auto dv = g.deriv;
        g.lipschitz = std::max(a, sampled_sup([dv](double u) { return dv(u); }, 100.0));
    }
    g.name = "mackey_glass";
    return g;
}

Nonlinearity birth_ricker(double a) {
    Nonlinearity g;
    g.value = [a](double u) { return a * u * std::exp(-u); };
    g.deriv = [a](double u) { return a * (1.0 - u) * std::exp(-u); };
    g.gprime0 = a;
    g.lipschitz = a;  // |g'| peaks at u = 0
    g.monotone = false;
    g.name = "ricker";
    return g;
}

Nonlinearity birth_quadratic(double a, double b, double lipschitz) {
    Nonlinearity g;
    g.value = [a, b](double u) { return a * u + b * u * u; };
    g.deriv = [a, b](double u) { return a + 2.0 * b * u; };
    g.gprime0 = a;
    g.lipschitz = lipschitz;
    g.monotone = a >= 0.0 && b >= 0.0;
    g.name = "quadratic";
    return g;
}

std::optional<double> positive_equilibrium(const WaveModel& model, double cap) {
    auto diff = [&model](double u) { return model.g.value(u) - model.f.value(u); };
    // find a sign change of g - f on a multiplicative grid above tiny u
    double lo = 1e-8;
    if (diff(lo) <= 0.0) {
        // g below f already near zero: scan for a positive stretch first
        bool found = false;
        for (double u = 1e-6; u <= cap; u *= 1.5) {
            if (diff(u) > 0.0) {
                lo = u;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    double hi = lo;
    bool bracketed = false;
    for (double u = lo * 1.5; u <= cap; u *= 1.5) {
        if (diff(u) <= 0.0) {
            hi = u;
            bracketed = true;
            break;
        }
        lo = u;
    }
    if (!bracketed) return std::nullopt;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double sampled_sup(const std::function<double(double)>& d, double M, int samples) {
    if (!(M > 0.0)) throw std::invalid_argument("sampled_sup needs M > 0");
    const double h = M / samples;
    double best = -kInf;
    double best_x = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = i == samples ? M : i * h;
        const double v = std::fabs(d(x));
        if (!std::isfinite(v)) throw NonFiniteDerivative("sampled derivative is not finite");
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    // ternary refinement inside the bracketing cells
    double lo = std::max(0.0, best_x - h), hi = std::min(M, best_x + h);
    for (int i = 0; i < 60; ++i) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (std::fabs(d(m1)) < std::fabs(d(m2)))
            lo = m1;
        else
            hi = m2;
    }
    best = std::max(best, std::fabs(d(0.5 * (lo + hi))));
    return best;
}

}  // namespace wavefront
