#include "wavefront/wavesolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wavefront {

namespace {

// per-tap hat integration tolerance; taps are later summed into unit mass.
// hat halves are a single grid step wide and jumps are split out, so one
// initial panel suffices
const QuadratureOptions kTapQuad{1e-9, 1e-13, 40, 20000, 1};
// inner temporal integral of nested product densities; the taps of such
// parts are renormalized afterwards, so shape accuracy is what matters
const QuadratureOptions kInnerQuad{1e-8, 1e-12, 40, 20000, 4};

struct K2Atom {
    double weight;
    double location;
};

struct K2DensityPart {
    double weight;
    std::function<double(double)> density;
    Interval support;
    std::vector<double> breaks;   // interior kinks/jumps of the density
    bool normalize = false;       // nested-quadrature densities: rescale the
                                  // taps to the exact part mass
};

struct K2Pieces {
    std::vector<K2Atom> atoms;
    std::vector<K2DensityPart> parts;
};

void collect_k2_pieces(const SpatioTemporalKernel& K, double c, double weight, K2Pieces& out) {
    std::visit(
        [c, weight, &out](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                out.atoms.push_back({weight, c * f.h + f.a});
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                const double shift = c * f.h;
                if (has_atom(f.spatial)) {
                    out.atoms.push_back({weight, shift + atom_location(f.spatial)});
                } else {
                    const SpatialKernel spatial = f.spatial;
                    Interval sup = spatial_support(spatial);
                    std::vector<double> breaks;
                    if (std::holds_alternative<TwoSidedExponentialSpatial>(spatial) ||
                        std::holds_alternative<OneSidedExponentialSpatial>(spatial))
                        breaks.push_back(shift);
                    out.parts.push_back(
                        {weight,
                         [spatial, shift](double r) { return spatial_density(spatial, r - shift); },
                         {sup.lo + shift, sup.hi + shift},
                         std::move(breaks)});
                }
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                if (has_atom(f.temporal)) {
                    SpatioTemporalKernel flat{SeparableDeltaTime{atom_location(f.temporal), f.spatial}};
                    collect_k2_pieces(flat, c, weight, out);
                    return;
                }
                const TemporalKernel temporal = f.temporal;
                const Interval tsup = temporal_support(temporal);
                if (has_atom(f.spatial)) {
                    const double a = atom_location(f.spatial);
                    if (c == 0.0) {
                        out.atoms.push_back({weight, a});
                        return;
                    }
                    // k2(r) = T((r - a)/c) / |c|
                    const double ac = std::fabs(c);
                    double lo = a + c * tsup.lo, hi = a + c * tsup.hi;
                    if (lo > hi) std::swap(lo, hi);
                    std::vector<double> breaks{a + c * tsup.lo};
                    out.parts.push_back({weight,
                                         [temporal, a, c, ac](double r) {
                                             return temporal_density(temporal, (r - a) / c) / ac;
                                         },
                                         {lo, hi},
                                         std::move(breaks)});
                    return;
                }
                const SpatialKernel spatial = f.spatial;
                const Interval ssup = spatial_support(spatial);
                double lo = c * tsup.lo, hi = c * tsup.hi;
                if (lo > hi) std::swap(lo, hi);
                out.parts.push_back(
                    {weight,
                     [temporal, spatial, tsup, c](double r) {
                         auto integrand = [&](double s) {
                             return temporal_density(temporal, s) *
                                    spatial_density(spatial, r - c * s);
                         };
                         return integrate(integrand, tsup.lo, tsup.hi, kInnerQuad).value;
                     },
                     {lo + ssup.lo, hi + ssup.hi},
                     {},
                     true});
            } else {
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    collect_k2_pieces(f.components[i], c, weight * f.weights[i], out);
            }
        },
        K.family);
}

}  // namespace

K1Kernel build_k1(double c, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("k1 requires beta > 0");
    K1Kernel k;
    k.c = c;
    k.beta = beta;
    k.sigma = std::sqrt(c * c + 4.0 * beta);
    k.nu = 0.5 * (c - k.sigma);
    k.mu = 0.5 * (c + k.sigma);
    return k;
}

double select_beta(const ReactionTerm& f, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("select_beta requires M > 0");
    const double sup = sampled_sup(f.deriv, M);
    return std::max(f.fprime0, sup) + 1.0;
}

K2Taps build_k2_taps(const SpatioTemporalKernel& K, double c, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid step must be > 0");
    K2Pieces pieces;
    collect_k2_pieces(K, c, 1.0, pieces);

    long lo_idx = std::numeric_limits<long>::max();
    long hi_idx = std::numeric_limits<long>::min();
    for (const auto& a : pieces.atoms) {
        const long j = static_cast<long>(std::floor(a.location / h));
        lo_idx = std::min(lo_idx, j);
        hi_idx = std::max(hi_idx, j + 1);
    }
    for (const auto& p : pieces.parts) {
        lo_idx = std::min(lo_idx, static_cast<long>(std::floor(p.support.lo / h)) - 1);
        hi_idx = std::max(hi_idx, static_cast<long>(std::ceil(p.support.hi / h)) + 1);
    }

    K2Taps taps;
    taps.offset0 = static_cast<int>(lo_idx);
    taps.weights = Eigen::ArrayXd::Zero(hi_idx - lo_idx + 1);

    for (const auto& a : pieces.atoms) {
        const long j = static_cast<long>(std::floor(a.location / h));
        const double frac = a.location / h - static_cast<double>(j);
        taps.weights[j - lo_idx] += a.weight * (1.0 - frac);
        taps.weights[j + 1 - lo_idx] += a.weight * frac;
    }
    for (const auto& p : pieces.parts) {
        const long m_lo = static_cast<long>(std::floor(p.support.lo / h)) - 1;
        const long m_hi = static_cast<long>(std::ceil(p.support.hi / h)) + 1;
        const QuadratureOptions opt =
            p.normalize ? QuadratureOptions{1e-6, 1e-10, 40, 20000, 1} : kTapQuad;
        Eigen::ArrayXd local = Eigen::ArrayXd::Zero(m_hi - m_lo + 1);
        for (long m = m_lo; m <= m_hi; ++m) {
            const double xm = m * h;
            auto weighted = [&p, xm, h](double v) {
                return p.density(v) * (1.0 - std::fabs(v - xm) / h);
            };
            local[m - m_lo] = integrate_broken(weighted, xm - h, xm, p.breaks, opt).value +
                              integrate_broken(weighted, xm, xm + h, p.breaks, opt).value;
        }
        double scale = p.weight;
        if (p.normalize && local.sum() > 0.0) scale = p.weight / local.sum();
        for (long m = m_lo; m <= m_hi; ++m)
            taps.weights[m - lo_idx] += scale * local[m - m_lo];
    }
    return taps;
}

Eigen::ArrayXd tap_convolve(const K2Taps& taps, const Eigen::ArrayXd& G, double g_left,
                            double g_right) {
    const int n = static_cast<int>(G.size());
    const int nw = static_cast<int>(taps.weights.size());
    const int m_min = taps.offset0;
    const int m_max = taps.offset0 + nw - 1;
    const int pad_left = std::max(0, m_max);
    const int pad_right = std::max(0, -m_min);

    Eigen::ArrayXd padded(pad_left + n + pad_right);
    padded.head(pad_left).setConstant(g_left);
    padded.segment(pad_left, n) = G;
    padded.tail(pad_right).setConstant(g_right);

    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    for (int k = 0; k < nw; ++k) {
        const double w = taps.weights[k];
        if (w == 0.0) continue;
        out += w * padded.segment(pad_left - (taps.offset0 + k), n);
    }
    return out;
}

Eigen::ArrayXd exp_green_convolve(const Eigen::ArrayXd& F, double h, double nu, double mu,
                                  double prefactor, double F_left, double F_right) {
    const int n = static_cast<int>(F.size());
    Eigen::ArrayXd IL(n), IR(n);

    // left branch: IL[i] = int_{-inf}^{t_i} e^{nu (t_i - s)} F(s) ds, exact on
    // the piecewise-linear interpolant of F
    const double x = nu * h;
    const double enh = std::exp(x);
    const double A = std::expm1(x) / nu;
    const double B = (x * enh - std::expm1(x)) / (nu * nu);
    const double a0 = A - B / h, a1 = B / h;
    IL[0] = F_left * (-1.0 / nu);
    for (int i = 1; i < n; ++i) IL[i] = enh * IL[i - 1] + a0 * F[i] + a1 * F[i - 1];

    // right branch: IR[i] = int_{t_i}^{inf} e^{mu (t_i - s)} F(s) ds
    const double y = mu * h;
    const double emh = std::exp(-y);
    const double A2 = -std::expm1(-y) / mu;
    const double B2 = (-std::expm1(-y) - y * emh) / (mu * mu);
    const double b0 = A2 - B2 / h, b1 = B2 / h;
    IR[n - 1] = F_right / mu;
    for (int i = n - 2; i >= 0; --i) IR[i] = emh * IR[i + 1] + b0 * F[i] + b1 * F[i + 1];

    return prefactor * (IL + IR);
}

double Profile::interpolate(double tt, double left, double right) const {
    if (tt <= t0) return left;
    const double te = t_end();
    if (tt >= te) return right;
    const double x = (tt - t0) / h;
    const int i = static_cast<int>(x);
    const double frac = x - i;
    if (i + 1 >= size()) return values[size() - 1];
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::Collapsed: return "Collapsed";
        default: return "NotConverged";
    }
}

Eigen::ArrayXd SweepContext::apply(const Eigen::ArrayXd& phi, double left_phi,
                                   double right_phi) const {
    const auto& g = model->g.value;
    const auto& fv = model->f.value;
    const double beta = k1.beta;

    Eigen::ArrayXd G = phi.unaryExpr(g);
    Eigen::ArrayXd Gc = tap_convolve(taps, G, g(left_phi), g(right_phi));
    Eigen::ArrayXd F = Gc + beta * phi - phi.unaryExpr(fv);
    const double F_left = g(left_phi) + beta * left_phi - fv(left_phi);
    const double F_right = Gc[Gc.size() - 1] + beta * right_phi - fv(right_phi);
    return exp_green_convolve(F, h, k1.nu, k1.mu, 1.0 / k1.sigma, F_left, F_right);
}

SweepContext make_sweep_context(const WaveModel& model, double c, double h, double beta) {
    return SweepContext{&model, build_k1(c, beta), build_k2_taps(model.kernel, c, h), h};
}

Profile make_preset(InitPreset preset, double T, double h, double c, double amplitude,
                    double tail_rate) {
    Profile p;
    p.t0 = -T;
    p.h = h;
    p.c = c;
    const int n = static_cast<int>(std::llround(2.0 * T / h)) + 1;
    p.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = p.t(i);
        if (preset == InitPreset::Ramp)
            p.values[i] = std::min(amplitude, amplitude * std::exp(tail_rate * t));
        else
            p.values[i] = amplitude * 0.5 * (1.0 + std::tanh(0.5 * tail_rate * t));
    }
    p.sup = p.values.maxCoeff();
    return p;
}

namespace {

struct AnchorResult {
    double shift = 0.0;
};

/// Catmull-Rom resample; linear interpolation would smear the profile a
/// little on every anchoring step, and that smoothing bias shows up as a
/// persistent drift of the converged state
double resample_cubic(const Profile& p, double tt, double right) {
    const int n = p.size();
    if (tt <= p.t0) return 0.0;
    if (tt >= p.t_end()) return right;
    const double x = (tt - p.t0) / p.h;
    int i = static_cast<int>(x);
    if (i >= n - 1) return right;
    const double u = x - i;
    const double y0 = i > 0 ? p.values[i - 1] : 0.0;
    const double y1 = p.values[i];
    const double y2 = p.values[i + 1];
    const double y3 = i + 2 < n ? p.values[i + 2] : right;
    const double a = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
    const double b = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
    const double c = 0.5 * (y2 - y0);
    return ((a * u + b) * u + c) * u + y1;
}

/// shift so that the leftmost crossing of theta * sup sits at t = 0
AnchorResult anchor(Profile& p, double theta) {
    const double s = p.values.maxCoeff();
    if (!(s > 0.0)) return {};
    const double level = theta * s;
    const int n = p.size();
    int idx = -1;
    for (int i = 0; i < n; ++i) {
        if (p.values[i] >= level) {
            idx = i;
            break;
        }
    }
    if (idx < 0) return {};
    double tstar;
    if (idx == 0) {
        tstar = p.t0;
    } else {
        const double p0 = p.values[idx - 1], p1 = p.values[idx];
        tstar = p.t(idx - 1) + (level - p0) / (p1 - p0) * p.h;
    }
    if (tstar != 0.0) {
        const double right = p.values[n - 1];
        Eigen::ArrayXd shifted(n);
        for (int i = 0; i < n; ++i) shifted[i] = resample_cubic(p, p.t(i) + tstar, right);
        p.values = std::move(shifted);
    }
    return {tstar};
}

/// Overwrite the deep left tail (below fraction * sup) with the two-term
/// asymptotic C e^{lambda_1 t} + D e^{lambda' t}, lambda' = min(lambda_2,
/// 2 lambda_1), amplitudes fitted on the three decades above the seam.
/// A single-point or single-term match leaves a relative amplitude error
/// that the iteration converts into a persistent anchor drift.
void pin_tail(Profile& p, double lambda1, std::optional<double> lambda2, double fraction) {
    const double s = p.values.maxCoeff();
    const double thr = fraction * s;
    const int n = p.size();
    int idx = -1;
    for (int i = 0; i < n; ++i) {
        if (p.values[i] >= thr) {
            idx = i;
            break;
        }
    }
    if (idx < 2) return;
    const double lam2 = std::min(lambda2.value_or(2.0 * lambda1), 2.0 * lambda1);
    const double t_ref = p.t(idx);
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    int count = 0;
    for (int i = idx; i < n && p.values[i] < 1e3 * thr; ++i) {
        const double e1 = std::exp(lambda1 * (p.t(i) - t_ref));
        const double e2 = std::exp(lam2 * (p.t(i) - t_ref));
        s11 += e1 * e1;
        s12 += e1 * e2;
        s22 += e2 * e2;
        b1 += e1 * p.values[i];
        b2 += e2 * p.values[i];
        ++count;
    }
    const double det = s11 * s22 - s12 * s12;
    double amp1, amp2;
    if (count < 8 || std::fabs(det) < 1e-12 * s11 * s22) {
        // degenerate window: fall back to matching the seam value
        amp1 = p.values[idx];
        amp2 = 0.0;
    } else {
        amp1 = (s22 * b1 - s12 * b2) / det;
        amp2 = (s11 * b2 - s12 * b1) / det;
    }
    for (int i = 0; i < idx; ++i) {
        const double dt = p.t(i) - t_ref;
        p.values[i] =
            std::max(0.0, amp1 * std::exp(lambda1 * dt) + amp2 * std::exp(lam2 * dt));
    }
}

SolveResult run_solver(const WaveModel& model, double c, Profile phi, const SolverConfig& cfg,
                       std::optional<double> lambda1, std::optional<double> lambda2) {
    SolveResult res;
    res.lambda1 = lambda1;
    res.lambda2 = lambda2;
    res.experimental = !model.g.monotone || !model.h1_ok || !model.h2_ok;
    if (!model.g.monotone)
        res.warnings.push_back("non-monotone birth function: convergence is experimental");

    const double h = phi.h;
    if (lambda1 && 1.0 / *lambda1 < 4.0 * h)
        throw GridTooCoarse("decay scale 1/lambda_1 is below 4 grid steps");

    double M = 1.5 * std::max(phi.values.maxCoeff(), 1e-3);
    double beta = select_beta(model.f, M);
    const double gamma = convergence_abscissa(model.kernel, c);
    if (std::isfinite(gamma)) {
        const double t = 1.25 * gamma;
        beta = std::max(beta, t * (t - c));
    }
    SweepContext ctx = make_sweep_context(model, c, h, beta);

    anchor(phi, cfg.theta);
    if (lambda1) pin_tail(phi, *lambda1, lambda2, cfg.pin_fraction);

    for (int it = 1; it <= cfg.max_iter; ++it) {
        Profile next = phi;
        next.values = ctx.apply(phi.values, 0.0, phi.values[phi.size() - 1]);
        const double sup = next.values.maxCoeff();
        if (!std::isfinite(sup)) {
            res.status = SolveStatus::NotConverged;
            res.iterations = it;
            res.warnings.push_back("iterate overflowed; no bounded fixed point reached");
            break;
        }
        if (sup < cfg.collapse_threshold) {
            next.sup = sup;
            res.status = SolveStatus::Collapsed;
            res.profile = std::move(next);
            res.iterations = it;
            res.beta = beta;
            return res;
        }
        res.final_drift = anchor(next, cfg.theta).shift;
        if (lambda1) pin_tail(next, *lambda1, lambda2, cfg.pin_fraction);

        res.final_change = (next.values - phi.values).abs().maxCoeff();
        phi = std::move(next);

        if (sup > M) {  // iterate outgrew the amplitude bound: re-select beta
            M = 1.5 * sup;
            const double nb = std::max(select_beta(model.f, M), beta);
            if (nb != beta) {
                beta = nb;
                ctx = make_sweep_context(model, c, h, beta);
            }
        }

        if (res.final_change < cfg.tol) {
            res.status = SolveStatus::Converged;
            res.iterations = it;
            break;
        }
        res.iterations = it;
    }

    phi.sup = phi.values.maxCoeff();
    if (res.status == SolveStatus::Converged && phi.values[0] > 1e-4 * phi.sup)
        throw WindowTooSmall("phi(-T) above 1e-4 sup at convergence");
    try {
        phi.decay = decay_rate(phi);
    } catch (const TailTooShort&) {
        phi.decay = std::nullopt;
    }
    res.profile = std::move(phi);
    res.beta = beta;
    return res;
}

std::pair<std::optional<double>, std::optional<double>> chi0_roots(const WaveModel& model,
                                                                   double c) {
    try {
        const auto roots = find_positive_roots(chi0_params(model), c);
        if (!roots) return {std::nullopt, std::nullopt};
        return {roots->lambda1, roots->lambda2};
    } catch (const std::invalid_argument&) {
        return {std::nullopt, std::nullopt};  // degenerate p <= q model
    } catch (const AbscissaBoundary&) {
        return {std::nullopt, std::nullopt};
    }
}

}  // namespace

SolveResult fixed_point_solve(const WaveModel& model, double c, InitPreset preset,
                              const SolverConfig& cfg) {
    const auto [l1, l2] = chi0_roots(model, c);
    const double rate_for_grid = l2 ? *l2 : (l1 ? *l1 : 1.0);
    const double T = cfg.window_T ? *cfg.window_T : std::max(60.0, l1 ? 20.0 / *l1 : 60.0);
    const double h = cfg.step_h ? *cfg.step_h : std::min(0.05, 1.0 / (20.0 * rate_for_grid));
    double amp;
    if (cfg.init_amplitude) {
        amp = *cfg.init_amplitude;
    } else {
        const auto kappa = positive_equilibrium(model);
        amp = kappa.value_or(1.0);
    }
    Profile init = make_preset(preset, T, h, c, amp, l1.value_or(1.0));
    return run_solver(model, c, std::move(init), cfg, l1, l2);
}

SolveResult fixed_point_solve(const WaveModel& model, double c, const Profile& init,
                              const SolverConfig& cfg) {
    const auto [l1, l2] = chi0_roots(model, c);
    return run_solver(model, c, init, cfg, l1, l2);
}

double residual(const WaveModel& model, double c, const Profile& prof) {
    const double h = prof.h;
    if (!(h <= 0.1)) throw std::invalid_argument("residual needs h <= 0.1");
    const int n = prof.size();
    const double right = prof.values[n - 1];
    const auto& g = model.g.value;
    auto gy = [&](double t) { return g(prof.interpolate(t, 0.0, right)); };

    const auto [l1, l2] = chi0_roots(model, c);
    const double margin = std::max(5.0 * h, l1 ? 1.0 / *l1 : 1.0);
    const int skip = static_cast<int>(std::ceil(margin / h));

    const QuadratureOptions opt{1e-8, 1e-11, 40};
    double worst = 0.0;
    for (int i = std::max(1, skip); i < n - std::max(1, skip); ++i) {
        const double y2 = (prof.values[i + 1] - 2.0 * prof.values[i] + prof.values[i - 1]) / (h * h);
        const double y1 = (prof.values[i + 1] - prof.values[i - 1]) / (2.0 * h);
        const double nonlocal = nonlocal_apply(model.kernel, c, gy, prof.t(i), opt);
        const double r = y2 - c * y1 - model.f.value(prof.values[i]) + nonlocal;
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

DecayFit decay_rate(const Profile& prof) {
    const double sup = prof.values.maxCoeff();
    const double lo = 1e-12 * sup, hi = 1e-3 * sup;
    const int n = prof.size();
    int j_hi = n;
    for (int i = 0; i < n; ++i) {
        if (prof.values[i] >= hi) {
            j_hi = i;
            break;
        }
    }
    std::vector<int> idx;
    for (int i = 0; i < j_hi; ++i)
        if (prof.values[i] > lo) idx.push_back(i);
    if (static_cast<int>(idx.size()) < 20)
        throw TailTooShort("fewer than 20 usable left-tail points");

    Eigen::MatrixXd A(idx.size(), 2);
    Eigen::VectorXd b(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        A(k, 0) = prof.t(idx[k]);
        A(k, 1) = 1.0;
        b(k) = std::log(prof.values[idx[k]]);
    }
    const Eigen::Vector2d coef = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    const double ss_res = (A * coef - b).squaredNorm();
    const double ss_tot = (b.array() - b.mean()).matrix().squaredNorm();
    DecayFit fit;
    fit.rate = coef(0);
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = static_cast<int>(idx.size());
    return fit;
}

Alignment align_translate(const Profile& p1, const Profile& p2) {
    if (std::fabs(p1.h - p2.h) > 1e-12 || p1.c != p2.c)
        throw std::invalid_argument("profiles must share grid step and speed");
    const double T = 0.5 * (p1.t_end() - p1.t0);

    auto dist = [&](double shift) {
        double worst = 0.0;
        int used = 0;
        const int n = p1.size();
        for (int i = 0; i < n; ++i) {
            const double t2 = p1.t(i) + shift;
            if (t2 < p2.t0 || t2 > p2.t_end()) continue;
            const double d = std::fabs(p1.values[i] - p2.interpolate(t2, 0.0, p2.values[p2.size() - 1]));
            worst = std::max(worst, d);
            ++used;
        }
        return used >= n / 2 ? worst : kInf;
    };

    const int coarse = 256;
    double best_shift = 0.0, best = kInf;
    for (int k = 0; k <= coarse; ++k) {
        const double s = -T + 2.0 * T * k / coarse;
        const double d = dist(s);
        if (d < best) {
            best = d;
            best_shift = s;
        }
    }
    // golden-section refinement around the coarse winner
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_shift - 2.0 * T / coarse;
    double b = best_shift + 2.0 * T / coarse;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = dist(x1), f2 = dist(x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = dist(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = dist(x2);
        }
    }
    const double s = 0.5 * (a + b);
    return {s, dist(s)};
}

HypothesisReport verify_hypotheses(const WaveModel& model, double M, double c,
                                   std::uint64_t seed) {
    HypothesisReport rep;
    rep.beta = select_beta(model.f, M);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, M);
    const double L = model.g.lipschitz;
    for (int k = 0; k < 10000; ++k) {
        const double s1 = uni(rng), s2 = uni(rng);
        if (s1 == s2) continue;
        const double ratio =
            std::fabs(model.g.value(s1) - model.g.value(s2)) / (L * std::fabs(s1 - s2));
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (ratio > 1.0 + 1e-12) ++rep.lipschitz_violations;
    }
    rep.lipschitz_ok = rep.lipschitz_violations == 0;

    const double lip_fbeta = rep.beta - model.f.inf_deriv;
    for (int k = 0; k <= 10000; ++k) {
        const double s = M * k / 10000.0;
        if (model.g.value(s) > L * s + 1e-12 * std::max(1.0, L * s)) rep.g_linear_bound_ok = false;
        const double fb = rep.beta * s - model.f.value(s);
        if (fb > lip_fbeta * s + 1e-12 * std::max(1.0, lip_fbeta * s)) rep.fbeta_bound_ok = false;
    }

    rep.chi0_at_zero = (model.f.fprime0 - model.g.gprime0) / rep.beta;
    rep.chi0_negative = rep.chi0_at_zero < 0.0;

    // chi_L at its convex minimizer on (0, gamma_K)
    try {
        const CharParams pl = chiL_params(model);
        const double gk = gamma_K(c, rep.beta, model.kernel);
        const double z_hi = std::isfinite(gk) ? gk - std::max(1e-8 * gk, 1e-8) : 1e3;
        double lo = 0.0, hi = std::min(z_hi, 0.5 * (c + std::sqrt(c * c + 4.0 * pl.q)));
        if (eval_R_dz(pl, lo, c) < 0.0) {
            if (eval_R_dz(pl, hi, c) > 0.0) {
                while (hi - lo > 1e-12) {
                    const double mid = 0.5 * (lo + hi);
                    (eval_R_dz(pl, mid, c) < 0.0 ? lo : hi) = mid;
                }
            } else {
                lo = hi;
            }
        }
        rep.chiL_minimizer = 0.5 * (lo + hi);
        rep.chiL_min_value = eval_R(pl, rep.chiL_minimizer, c);
        rep.chiL_nonpositive = rep.chiL_min_value <= 0.0;
    } catch (const std::exception&) {
        rep.chiL_nonpositive = false;
    }
    return rep;
}

}  // namespace wavefront
