#include "wavefront/charspec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

namespace {

constexpr double kRootValueTol = 1e-10;
constexpr double kRootZTol = 1e-12;
constexpr double kSpeedTol = 1e-9;
constexpr double kBracketCap = 1e6;

double mu_q_of(double c, double q) { return 0.5 * (c + std::sqrt(c * c + 4.0 * q)); }

/// largest usable z strictly inside the abscissa band
double z_ceiling(const CharParams& params, double c, double gamma) {
    const double mu = mu_q_of(c, params.q);
    if (!std::isfinite(gamma) || mu < gamma) return mu;
    const double pad = 16.0 * 1e-9 * std::max(1.0, gamma);
    return gamma - pad;
}

}  // namespace

CharParams::CharParams(double p_, double q_, SpatioTemporalKernel kernel_)
    : p(p_), q(q_), kernel(std::move(kernel_)) {
    if (!(p > q) || !(q > 0.0))
        throw std::invalid_argument("characteristic parameters require p > q > 0");
}

const char* to_string(SpeedVerdict v) {
    switch (v) {
        case SpeedVerdict::NonExistent: return "NonExistent";
        case SpeedVerdict::UniqueIfExists: return "UniqueIfExists";
        default: return "Indeterminate";
    }
}

double eval_R(const CharParams& params, double z, double c) {
    const double m = laplace_moment(params.kernel, z, c);
    if (!std::isfinite(m)) return kInf;
    return z * z - c * z - params.q + params.p * m;
}

double eval_R_dz(const CharParams& params, double z, double c) {
    const double m1 = weighted_laplace_moment(params.kernel, z, c, 1);
    if (!std::isfinite(m1)) return -kInf;  // divergence is driven by cs+w -> -inf
    return 2.0 * z - c - params.p * m1;
}

double eval_R_dz2(const CharParams& params, double z, double c) {
    const double m2 = weighted_laplace_moment(params.kernel, z, c, 2);
    return 2.0 + params.p * m2;
}

std::optional<RootPair> find_positive_roots(const CharParams& params, double c) {
    const double gamma = convergence_abscissa(params.kernel, c);
    const double mu = mu_q_of(c, params.q);
    const double z_hi = z_ceiling(params, c, gamma);
    if (!(z_hi > 0.0)) return std::nullopt;

    // derivative bisection for the convex minimizer
    const double d_lo = eval_R_dz(params, 0.0, c);
    double z_min;
    if (d_lo >= 0.0) {
        // R increasing from R(0) = p - q > 0
        return std::nullopt;
    }
    const double d_hi = eval_R_dz(params, z_hi, c);
    if (d_hi <= 0.0) {
        // minimum sits at the right end of the search interval
        if (std::isfinite(gamma) && gamma <= mu) {
            const BoundaryLimit lim = boundary_limit(params, c);
            const double edge = eval_R(params, z_hi, c);
            if (edge > kRootValueTol && !(lim.diverged && lim.value < 0))
                throw AbscissaBoundary(
                    "convex minimizer collides with the finite convergence abscissa",
                    gamma, lim.diverged ? kInf : lim.value);
            z_min = z_hi;
        } else {
            // z_hi = mu_q: R(mu_q) = p * moment > 0 and R decreasing there,
            // so R > 0 on the whole interval and no root can exist at all
            // (any root must satisfy z^2 - cz - q < 0, i.e. z < mu_q).
            return std::nullopt;
        }
    } else {
        double lo = 0.0, hi = z_hi;
        while (hi - lo > kRootZTol) {
            const double mid = 0.5 * (lo + hi);
            (eval_R_dz(params, mid, c) < 0.0 ? lo : hi) = mid;
        }
        z_min = 0.5 * (lo + hi);
    }

    const double r_min = eval_R(params, z_min, c);
    RootPair out;
    out.mu_q = mu;
    if (r_min > kRootValueTol) return std::nullopt;
    if (std::fabs(r_min) <= kRootValueTol) {
        out.lambda1 = z_min;
        out.lambda2 = z_min;
        out.multiplicity_two = true;
        return out;
    }

    auto bisect = [&params, c](double lo, double hi, bool descending) {
        // descending: R(lo) > 0 > R(hi); otherwise R(lo) < 0 < R(hi)
        while (hi - lo > kRootZTol) {
            const double mid = 0.5 * (lo + hi);
            const double v = eval_R(params, mid, c);
            if ((v > 0.0) == descending)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    out.lambda1 = bisect(0.0, z_min, true);
    // second crossing: R(z_min) < 0 and R rises toward z_hi (or blows up at a
    // finite abscissa inside the band)
    double hi2 = z_hi;
    double r_hi = eval_R(params, hi2, c);
    if (r_hi > 0.0) {
        out.lambda2 = bisect(z_min, hi2, false);
    } else if (std::isfinite(gamma) && gamma <= mu) {
        // still negative at the usable ceiling: the second root hides inside
        // the abscissa band; report the ceiling and flag via boundary limit
        const BoundaryLimit lim = boundary_limit(params, c);
        if (lim.diverged || lim.value > 0.0) out.lambda2 = hi2;
    }
    return out;
}

MinimalSpeed minimal_speed(const CharParams& params) {
    auto has_root = [&params](double c) {
        try {
            return find_positive_roots(params, c).has_value();
        } catch (const AbscissaBoundary& b) {
            // minimizer collided with a finite abscissa: decide from the
            // extrapolated one-sided limit
            return b.one_sided_limit() < 0.0;
        }
    };

    double lo, hi;
    if (has_root(0.0)) {
        hi = 0.0;
        lo = -1.0;
        while (has_root(lo)) {
            hi = lo;
            lo *= 2.0;
            if (-lo > kBracketCap)
                throw BracketFailure("no speed without characteristic roots above -1e6");
        }
    } else {
        lo = 0.0;
        hi = 1.0;
        while (!has_root(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > kBracketCap)
                throw BracketFailure("no characteristic root found below speed 1e6");
        }
    }
    while (hi - lo > kSpeedTol * std::max(1.0, std::fabs(hi))) {
        const double mid = 0.5 * (lo + hi);
        (has_root(mid) ? hi : lo) = mid;
    }
    MinimalSpeed ms;
    ms.c = 0.5 * (lo + hi);
    try {
        auto roots = find_positive_roots(params, hi);
        if (!roots) roots = find_positive_roots(params, hi + 4.0 * kSpeedTol);
        ms.critical = roots.value_or(RootPair{});
    } catch (const AbscissaBoundary&) {
        ms.critical = RootPair{};
    }
    return ms;
}

double speed_lower_bound(double g_prime0, const SpatioTemporalKernel& K) {
    const MomentReport m = first_moments(K);
    return -g_prime0 * m.mean_space / (1.0 + g_prime0 * m.mean_time);
}

double gamma_K(double c, double beta, const SpatioTemporalKernel& K) {
    if (!(beta > 0.0)) throw std::invalid_argument("gamma_K requires beta > 0");
    const double mu = 0.5 * (c + std::sqrt(c * c + 4.0 * beta));
    return std::min(mu, convergence_abscissa(K, c));
}

BoundaryLimit boundary_limit(const CharParams& params, double c) {
    const double gamma = convergence_abscissa(params.kernel, c);
    BoundaryLimit lim;
    if (!std::isfinite(gamma)) {
        // z^2 dominates or the moment blows up; either way the limit is +inf
        lim.value = kInf;
        lim.diverged = true;
        return lim;
    }
    const double d0 = gamma / 8.0;
    double nodes[4], values[4];
    bool blowup = false;
    for (int j = 0; j < 4; ++j) {
        nodes[j] = d0 / double(1 << j);
        values[j] = eval_R(params, gamma - nodes[j], c);
        if (!std::isfinite(values[j])) blowup = true;
    }
    if (!blowup) {
        // a pole at the abscissa doubles |R| per node halving; a finite limit
        // flattens the ratios toward 1
        const bool monotone = std::fabs(values[1]) > std::fabs(values[0]) &&
                              std::fabs(values[2]) > std::fabs(values[1]) &&
                              std::fabs(values[3]) > std::fabs(values[2]);
        if (monotone && std::fabs(values[3]) > 1.5 * std::fabs(values[2])) blowup = true;
    }
    if (blowup) {
        lim.value = values[3] > 0 ? kInf : -kInf;
        lim.diverged = true;
        return lim;
    }
    // Neville extrapolation of R(gamma - d) to d -> 0
    double tbl[4];
    std::copy(values, values + 4, tbl);
    double prev = tbl[3];
    for (int m = 1; m < 4; ++m) {
        for (int j = 3; j >= m; --j) {
            const double xj = nodes[j], xjm = nodes[j - m];
            tbl[j] = (xjm * tbl[j] - xj * tbl[j - 1]) / (xjm - xj);
        }
    }
    lim.value = tbl[3];
    lim.error = std::fabs(tbl[3] - prev);
    lim.diverged = false;
    return lim;
}

CharParams chi0_params(const WaveModel& model) {
    return CharParams(model.g.gprime0, model.f.fprime0, model.kernel);
}

CharParams chiL_params(const WaveModel& model) {
    return CharParams(model.g.lipschitz, model.f.inf_deriv, model.kernel);
}

double char_identity_residual(const WaveModel& model, double beta, double c, double z) {
    if (!(beta > model.f.fprime0))
        throw std::invalid_argument("char identity requires beta > f'(0)");
    const double denom = beta + c * z - z * z;
    if (std::fabs(denom) < 1e-12)
        throw DenominatorNearZero("beta + c z - z^2 is numerically zero");

    // decomposition route: 1 - (L N)(z) with the two-atom kernel transform
    // evaluated through the factored k1 transform 1/((z - nu)(mu - z))
    const double sigma = std::sqrt(c * c + 4.0 * beta);
    const double nu = 0.5 * (c - sigma);
    const double mu = 0.5 * (c + sigma);
    const double k1hat = 1.0 / ((z - nu) * (mu - z));
    const double m = laplace_moment(model.kernel, z, c);
    const double chi_decomp =
        1.0 - (model.g.gprime0 * m + (beta - model.f.fprime0)) * k1hat;

    // direct route through chi_0
    const double chi0 = eval_R(chi0_params(model), z, c);
    const double chi_direct = -chi0 / denom;

    return std::fabs(chi_decomp - chi_direct);
}

SpeedThresholds compute_thresholds(const WaveModel& model) {
    SpeedThresholds th{};
    const MinimalSpeed m0 = minimal_speed(chi0_params(model));
    th.c_star = m0.c;
    th.critical0 = m0.critical;
    const CharParams pl = chiL_params(model);
    th.c_starstar = minimal_speed(pl).c;
    th.boundary = boundary_limit(pl, th.c_starstar);
    return th;
}

SpeedVerdict classify_speed(const SpeedThresholds& th, double c) {
    const double eps = 4.0 * kSpeedTol * std::max(1.0, std::fabs(th.c_starstar));
    if (c < th.c_star - eps) return SpeedVerdict::NonExistent;
    if (c > th.c_starstar + eps) return SpeedVerdict::UniqueIfExists;
    if (std::fabs(c - th.c_starstar) <= eps) {
        // critical speed: Theorem 1 needs chi_L(gamma#(c**)-, c**) != 0
        const bool nonzero =
            th.boundary.diverged || std::fabs(th.boundary.value) > th.boundary.error;
        return nonzero ? SpeedVerdict::UniqueIfExists : SpeedVerdict::Indeterminate;
    }
    return SpeedVerdict::Indeterminate;  // c in [c*, c**)
}

SpeedVerdict classify_speed(const WaveModel& model, double c) {
    return classify_speed(compute_thresholds(model), c);
}

CharReport build_char_report(const WaveModel& model, std::span<const double> speeds) {
    CharReport rep{};
    const SpeedThresholds th = compute_thresholds(model);
    rep.c_star = th.c_star;
    rep.c_starstar = th.c_starstar;
    rep.boundary = th.boundary;
    rep.lower_bound = speed_lower_bound(model.g.gprime0, model.kernel);

    // one beta for the whole sweep so the gamma_K column stays monotone;
    // raised until mu(c) >= 1.25 gamma#(c) wherever the abscissa is finite
    double beta = std::max(1.0, std::max(model.f.fprime0, model.f.inf_deriv)) + 1.0;
    for (double c : speeds) {
        const double gamma = convergence_abscissa(model.kernel, c);
        if (std::isfinite(gamma)) {
            // mu(c) >= t  <=>  beta >= t (t - c)
            const double t = 1.25 * gamma;
            beta = std::max(beta, t * (t - c));
        }
    }
    rep.beta = beta;

    const CharParams p0 = chi0_params(model);
    const CharParams pL = chiL_params(model);
    for (double c : speeds) {
        CharRow row;
        row.c = c;
        row.gamma_sharp = convergence_abscissa(model.kernel, c);
        row.gamma_K = gamma_K(c, beta, model.kernel);
        try {
            row.roots0 = find_positive_roots(p0, c);
        } catch (const AbscissaBoundary&) {
            row.roots0 = std::nullopt;
        }
        try {
            row.rootsL = find_positive_roots(pL, c);
        } catch (const AbscissaBoundary&) {
            row.rootsL = std::nullopt;
        }
        row.verdict = classify_speed(th, c);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace wavefront
