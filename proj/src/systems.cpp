#include "wavefront/systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

double DelayMeasure::mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    for (const auto& e : exps) m += e.weight;
    return m;
}

double DelayMeasure::transform(double u) const {
    double v = 0.0;
    for (const auto& a : atoms) v += a.weight * std::exp(-u * a.tau);
    for (const auto& e : exps) {
        if (e.rate + u <= 0.0) return kInf;
        v += e.weight * e.rate / (e.rate + u);
    }
    return v;
}

void DelayMeasure::validate() const {
    for (const auto& a : atoms) {
        if (a.weight < 0.0) throw IllFormedKernel("delay measure atom weight is negative");
        if (a.tau < 0.0) throw IllFormedKernel("delay measure atom must sit at tau >= 0");
    }
    for (const auto& e : exps) {
        if (e.weight < 0.0) throw IllFormedKernel("delay measure weight is negative");
        if (!(e.rate > 0.0)) throw IllFormedKernel("delay measure rate must be > 0");
    }
    if (std::fabs(mass() - 1.0) > 1e-12)
        throw IllFormedKernel("delay measure must have total mass 1");
}

DelayMeasure point_delay(double tau) { return DelayMeasure{{{1.0, tau}}, {}}; }

DelayMeasure exponential_delay(double rate) { return DelayMeasure{{}, {{1.0, rate}}}; }

EpidemicK2 epidemic_K2(const DelayMeasure& P, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("epidemic_K2 requires alpha > 0");
    P.validate();
    EpidemicK2 k;
    k.alpha = alpha;
    // K2 = (Exp(alpha) density) * P, so alpha K2 is the mass-1 mixture of
    // shifted/serial exponentials
    for (const auto& a : P.atoms) {
        k.weights.push_back(a.weight);
        k.components.push_back(ExponentialTemporal{alpha, a.tau});
    }
    for (const auto& e : P.exps) {
        k.weights.push_back(e.weight);
        k.components.push_back(SerialExponentialTemporal{alpha, e.rate});
    }
    return k;
}

double EpidemicK2::density(double w) const {
    double v = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        v += weights[i] * temporal_density(components[i], w);
    return v / alpha;
}

std::vector<double> EpidemicK2::breaks() const {
    std::vector<double> out;
    for (const auto& comp : components)
        if (const auto* e = std::get_if<ExponentialTemporal>(&comp); e && e->delay > 0.0)
            out.push_back(e->delay);
    return out;
}

double EpidemicK2::mass_quadrature() const {
    const Interval sup = support();
    auto f = [this](double w) { return density(w); };
    return integrate_broken(f, 0.0, sup.hi, breaks()).value;
}

Interval EpidemicK2::support() const {
    Interval hull{0.0, 0.0};
    for (const auto& comp : components) hull.hi = std::max(hull.hi, temporal_support(comp).hi);
    return hull;
}

double epidemic_charfun(const EpidemicModel& model, double z, double c, CharVariant variant) {
    if (z < 0.0) throw std::invalid_argument("decay rate z must be >= 0");
    const double denom = c * z + model.alpha;
    if (denom <= 0.0) throw DenominatorNonPositive("c z + alpha must be positive");
    const double p = variant == CharVariant::Chi0 ? model.g.gprime0 : model.g.lipschitz;
    const double q = variant == CharVariant::Chi0 ? model.f.fprime0 : model.f.inf_deriv;
    const TransformMoments s = spatial_transform(model.spatial, z);
    const double pt = model.P.transform(z * c);
    if (!std::isfinite(s.m0) || !std::isfinite(pt)) return kInf;
    return z * z - c * z - q + p * pt * s.m0 / denom;
}

SpatioTemporalKernel epidemic_induced_kernel(const EpidemicModel& model) {
    const EpidemicK2 k2 = epidemic_K2(model.P, model.alpha);
    if (k2.components.size() == 1)
        return make_product(k2.components[0], model.spatial);
    std::vector<std::pair<double, SpatioTemporalKernel>> parts;
    for (std::size_t i = 0; i < k2.components.size(); ++i)
        parts.emplace_back(k2.weights[i], make_product(k2.components[i], model.spatial));
    return make_mixture(std::move(parts));
}

WaveModel epidemic_scalar_model(const EpidemicModel& model) {
    Nonlinearity g_eff = model.g;
    const double alpha = model.alpha;
    auto gv = model.g.value;
    auto gd = model.g.deriv;
    g_eff.value = [gv, alpha](double u) { return gv(u) / alpha; };
    if (gd) g_eff.deriv = [gd, alpha](double u) { return gd(u) / alpha; };
    g_eff.gprime0 = model.g.gprime0 / alpha;
    g_eff.lipschitz = model.g.lipschitz / alpha;
    return make_wave_model(model.f, std::move(g_eff), epidemic_induced_kernel(model));
}

EpidemicSolve epidemic_solve(const EpidemicModel& model, double c, InitPreset preset,
                             const SolverConfig& cfg) {
    if (!(c >= 0.0)) throw std::invalid_argument("epidemic waves use c >= 0");
    const WaveModel scalar = epidemic_scalar_model(model);
    EpidemicSolve out{fixed_point_solve(scalar, c, preset, cfg), {}};
    out.psi = epidemic_reconstruct(model, out.scalar.profile, c);
    return out;
}

Profile epidemic_reconstruct(const EpidemicModel& model, const Profile& phi, double c) {
    Profile psi = phi;
    const double alpha = model.alpha;
    if (c == 0.0) {
        psi.values = phi.values.unaryExpr([&](double u) { return model.g.value(u) / alpha; });
        psi.sup = psi.values.maxCoeff();
        psi.decay = std::nullopt;
        return psi;
    }
    const EpidemicK2 k2 = epidemic_K2(model.P, alpha);
    const Interval sup = k2.support();
    const double right = phi.values[phi.size() - 1];
    auto gphi = [&](double t) { return model.g.value(phi.interpolate(t, 0.0, right)); };
    const QuadratureOptions opt{1e-7, 1e-10, 40};
    const std::vector<double> brk = k2.breaks();
    for (int i = 0; i < psi.size(); ++i) {
        const double t = phi.t(i);
        auto integrand = [&](double w) { return gphi(t - c * w) * k2.density(w); };
        psi.values[i] = integrate_broken(integrand, 0.0, sup.hi, brk, opt).value;
    }
    psi.sup = psi.values.maxCoeff();
    psi.decay = std::nullopt;
    return psi;
}

double epidemic_second_residual(const EpidemicModel& model, const Profile& phi,
                                const Profile& psi, double c) {
    const double h = phi.h;
    const int n = phi.size();
    const double right = phi.values[n - 1];
    auto gphi = [&](double t) { return model.g.value(phi.interpolate(t, 0.0, right)); };
    const QuadratureOptions opt{1e-9, 1e-12, 40};

    const int skip = std::max(5, static_cast<int>(std::ceil(1.0 / h / 4.0)));
    double worst = 0.0;
    for (int i = skip; i < n - skip; ++i) {
        const double t = phi.t(i);
        const double dpsi = (psi.values[i + 1] - psi.values[i - 1]) / (2.0 * h);
        double intP = 0.0;
        for (const auto& a : model.P.atoms) intP += a.weight * gphi(t - c * a.tau);
        for (const auto& e : model.P.exps) {
            auto integrand = [&](double s) { return e.rate * std::exp(-e.rate * s) * gphi(t - c * s); };
            intP += e.weight * integrate_right_tail(integrand, 0.0, opt).value;
        }
        const double r = c * dpsi + model.alpha * psi.values[i] - intP;
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

Eigen::ArrayXd population_H(const PopulationModel& model, const Profile& phi, double c) {
    const K2Taps taps = build_k2_taps(model.kernel, c, phi.h);
    const auto& g = model.g.value;
    Eigen::ArrayXd G = phi.values.unaryExpr(g);
    const double g_right = g(phi.values[phi.size() - 1]);
    return G - tap_convolve(taps, G, g(0.0), g_right);
}

Profile population_reconstruct(const PopulationModel& model, const Profile& phi, double c,
                               std::vector<std::string>* warnings) {
    if (!(model.D > 0.0) || !(model.gamma > 0.0))
        throw std::invalid_argument("population model needs D > 0 and gamma > 0");
    const Eigen::ArrayXd H = population_H(model, phi, c);
    const double sigma = std::sqrt(c * c + 4.0 * model.D * model.gamma);
    const double nu = (c - sigma) / (2.0 * model.D);
    const double mu = (c + sigma) / (2.0 * model.D);
    Profile psi = phi;
    // H annihilates constants, so both tails of H vanish
    psi.values = exp_green_convolve(H, phi.h, nu, mu, 1.0 / sigma, 0.0, 0.0);
    int clamped = 0;
    double worst_negative = 0.0;
    for (int i = 0; i < psi.size(); ++i) {
        if (psi.values[i] < 0.0) {
            if (psi.values[i] > -1e-9) {
                psi.values[i] = 0.0;
                ++clamped;
            } else {
                worst_negative = std::min(worst_negative, psi.values[i]);
            }
        }
    }
    if (warnings && worst_negative < 0.0)
        warnings->push_back("population psi has negative values down to " +
                            std::to_string(worst_negative));
    psi.sup = psi.values.abs().maxCoeff();
    psi.decay = std::nullopt;
    return psi;
}

double population_residual(const PopulationModel& model, const Profile& phi, const Profile& psi,
                           double c) {
    const Eigen::ArrayXd H = population_H(model, phi, c);
    const double h = phi.h;
    const int n = phi.size();
    const int skip = std::max(5, static_cast<int>(std::ceil(1.0 / h / 4.0)));
    double worst = 0.0;
    for (int i = skip; i < n - skip; ++i) {
        const double d2 = (psi.values[i + 1] - 2.0 * psi.values[i] + psi.values[i - 1]) / (h * h);
        const double d1 = (psi.values[i + 1] - psi.values[i - 1]) / (2.0 * h);
        const double r = model.D * d2 - c * d1 - model.gamma * psi.values[i] + H[i];
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

}  // namespace wavefront
