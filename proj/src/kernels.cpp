#include "wavefront/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

namespace {

constexpr double kPi = 3.14159265358979323846;
// e^{-kTailDecades} bounds the discarded tail mass of exponential families
constexpr double kTailDecades = 40.0;
constexpr double kGaussianSigmas = 9.0;

void validate_spatial(const SpatialKernel& k) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                if (!(s.variance > 0.0)) throw IllFormedKernel("gaussian variance must be > 0");
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                if (!(s.rate > 0.0)) throw IllFormedKernel("two-sided exponential rate must be > 0");
            } else if constexpr (std::is_same_v<T, OneSidedExponentialSpatial>) {
                if (!(s.rate > 0.0)) throw IllFormedKernel("one-sided exponential rate must be > 0");
            } else {
                (void)s;
            }
        },
        k);
}

void validate_temporal(const TemporalKernel& k) {
    std::visit(
        [](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, PointMassTemporal>) {
                if (!(t.h >= 0.0)) throw IllFormedKernel("temporal point mass must sit at h >= 0");
            } else if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                if (!(t.rate > 0.0)) throw IllFormedKernel("temporal exponential rate must be > 0");
                if (!(t.delay >= 0.0)) throw IllFormedKernel("temporal exponential delay must be >= 0");
            } else if constexpr (std::is_same_v<T, SerialExponentialTemporal>) {
                if (!(t.rate1 > 0.0 && t.rate2 > 0.0))
                    throw IllFormedKernel("serial exponential rates must be > 0");
            }
        },
        k);
}

// integration window for rho(w) e^{-z w}; the exponential tilt moves the
// effective bulk (exactly for Gaussians, via the slowed tail decay otherwise)
Interval tilted_spatial_window(const SpatialKernel& k, double z) {
    return std::visit(
        [z](const auto& s) -> Interval {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                const double center = s.mean - z * s.variance;
                const double r = 12.0 * std::sqrt(s.variance);
                return {center - r, center + r};
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                const double left_rate = std::max(s.rate - z, 0.05 * s.rate);
                return {-kTailDecades / left_rate, kTailDecades / (s.rate + z)};
            } else if constexpr (std::is_same_v<T, PointMassSpatial>) {
                return {s.a, s.a};
            } else {
                if (s.side == Side::Right) return {0.0, kTailDecades / (s.rate + z)};
                const double left_rate = std::max(s.rate - z, 0.05 * s.rate);
                return {-kTailDecades / left_rate, 0.0};
            }
        },
        k);
}

// interior kink/jump locations of the spatial density
std::vector<double> spatial_breaks(const SpatialKernel& k) {
    if (std::holds_alternative<TwoSidedExponentialSpatial>(k) ||
        std::holds_alternative<OneSidedExponentialSpatial>(k))
        return {0.0};
    return {};
}

std::vector<double> temporal_breaks(const TemporalKernel& k) {
    if (const auto* e = std::get_if<ExponentialTemporal>(&k); e && e->delay > 0.0)
        return {e->delay};
    return {};
}

// window for T(s) e^{-u s} on [0, inf); u = z c may be negative
Interval tilted_temporal_window(const TemporalKernel& k, double u) {
    return std::visit(
        [u](const auto& t) -> Interval {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, PointMassTemporal>) {
                return {t.h, t.h};
            } else if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                const double rate = std::max(t.rate + u, 0.05 * t.rate);
                return {t.delay, t.delay + kTailDecades / rate};
            } else {
                const double slow = std::min(t.rate1, t.rate2);
                const double rate = std::max(slow + u, 0.05 * slow);
                return {0.0, kTailDecades / rate + 5.0 / std::max(t.rate1, t.rate2)};
            }
        },
        k);
}

}  // namespace

// ---------------------------------------------------------------------------
// spatial kernels
// ---------------------------------------------------------------------------

bool has_atom(const SpatialKernel& k) { return std::holds_alternative<PointMassSpatial>(k); }

double atom_location(const SpatialKernel& k) { return std::get<PointMassSpatial>(k).a; }

double spatial_density(const SpatialKernel& k, double w) {
    return std::visit(
        [w](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                const double d = w - s.mean;
                return std::exp(-0.5 * d * d / s.variance) / std::sqrt(2.0 * kPi * s.variance);
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                return 0.5 * s.rate * std::exp(-s.rate * std::fabs(w));
            } else if constexpr (std::is_same_v<T, OneSidedExponentialSpatial>) {
                if (s.side == Side::Right)
                    return w >= 0.0 ? s.rate * std::exp(-s.rate * w) : 0.0;
                return w <= 0.0 ? s.rate * std::exp(s.rate * w) : 0.0;
            } else {
                throw std::logic_error("point mass has no density");
            }
        },
        k);
}

double spatial_tilted_density(const SpatialKernel& k, double w, double u) {
    return std::visit(
        [w, u](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                const double d = w - s.mean;
                return std::exp(-0.5 * d * d / s.variance - u * w) /
                       std::sqrt(2.0 * kPi * s.variance);
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                return 0.5 * s.rate * std::exp(-s.rate * std::fabs(w) - u * w);
            } else if constexpr (std::is_same_v<T, OneSidedExponentialSpatial>) {
                if (s.side == Side::Right)
                    return w >= 0.0 ? s.rate * std::exp(-(s.rate + u) * w) : 0.0;
                return w <= 0.0 ? s.rate * std::exp((s.rate - u) * w) : 0.0;
            } else {
                throw std::logic_error("point mass has no density");
            }
        },
        k);
}

double spatial_upper_abscissa(const SpatialKernel& k) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                return s.rate;
            } else if constexpr (std::is_same_v<T, OneSidedExponentialSpatial>) {
                return s.side == Side::Left ? s.rate : kInf;
            } else {
                return kInf;
            }
        },
        k);
}

double spatial_lower_abscissa(const SpatialKernel& k) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                return -s.rate;
            } else if constexpr (std::is_same_v<T, OneSidedExponentialSpatial>) {
                return s.side == Side::Right ? -s.rate : -kInf;
            } else {
                return -kInf;
            }
        },
        k);
}

TransformMoments spatial_transform(const SpatialKernel& k, double u) {
    return std::visit(
        [u](const auto& s) -> TransformMoments {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                const double m0 = std::exp(-u * s.mean + 0.5 * u * u * s.variance);
                const double drift = s.mean - u * s.variance;
                return {m0, drift * m0, (drift * drift + s.variance) * m0};
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                const double l2 = s.rate * s.rate;
                const double d = l2 - u * u;
                if (d <= 0.0) return {kInf, kInf, kInf};
                const double m0 = l2 / d;
                return {m0, -2.0 * u * l2 / (d * d), 2.0 * l2 * (l2 + 3.0 * u * u) / (d * d * d)};
            } else if constexpr (std::is_same_v<T, PointMassSpatial>) {
                const double m0 = std::exp(-u * s.a);
                return {m0, s.a * m0, s.a * s.a * m0};
            } else {
                if (s.side == Side::Right) {
                    const double d = s.rate + u;
                    if (d <= 0.0) return {kInf, kInf, kInf};
                    const double m0 = s.rate / d;
                    return {m0, s.rate / (d * d), 2.0 * s.rate / (d * d * d)};
                }
                const double d = s.rate - u;
                if (d <= 0.0) return {kInf, kInf, kInf};
                const double m0 = s.rate / d;
                return {m0, -s.rate / (d * d), 2.0 * s.rate / (d * d * d)};
            }
        },
        k);
}

double spatial_mean(const SpatialKernel& k) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                return s.mean;
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, PointMassSpatial>) {
                return s.a;
            } else {
                return s.side == Side::Right ? 1.0 / s.rate : -1.0 / s.rate;
            }
        },
        k);
}

Interval spatial_support(const SpatialKernel& k) {
    return std::visit(
        [](const auto& s) -> Interval {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpatial>) {
                const double r = kGaussianSigmas * std::sqrt(s.variance);
                return {s.mean - r, s.mean + r};
            } else if constexpr (std::is_same_v<T, TwoSidedExponentialSpatial>) {
                const double r = kTailDecades / s.rate;
                return {-r, r};
            } else if constexpr (std::is_same_v<T, PointMassSpatial>) {
                return {s.a, s.a};
            } else {
                const double r = kTailDecades / s.rate;
                return s.side == Side::Right ? Interval{0.0, r} : Interval{-r, 0.0};
            }
        },
        k);
}

// ---------------------------------------------------------------------------
// temporal kernels
// ---------------------------------------------------------------------------

bool has_atom(const TemporalKernel& k) { return std::holds_alternative<PointMassTemporal>(k); }

double atom_location(const TemporalKernel& k) { return std::get<PointMassTemporal>(k).h; }

double temporal_density(const TemporalKernel& k, double s) {
    return std::visit(
        [s](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                return s >= t.delay ? t.rate * std::exp(-t.rate * (s - t.delay)) : 0.0;
            } else if constexpr (std::is_same_v<T, SerialExponentialTemporal>) {
                if (s < 0.0) return 0.0;
                const double r1 = t.rate1, r2 = t.rate2;
                if (std::fabs(r1 - r2) <= 1e-9 * std::max(r1, r2)) {
                    const double r = 0.5 * (r1 + r2);
                    return r * r * s * std::exp(-r * s);
                }
                // r1 r2 (e^{-r1 s} - e^{-r2 s}) / (r2 - r1), written to avoid cancellation
                return r1 * r2 * std::exp(-r1 * s) * (-std::expm1(-(r2 - r1) * s)) / (r2 - r1);
            } else {
                throw std::logic_error("point mass has no density");
            }
        },
        k);
}

double temporal_tilted_density(const TemporalKernel& k, double s, double u) {
    return std::visit(
        [s, u](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                return s >= t.delay ? t.rate * std::exp(-t.rate * (s - t.delay) - u * s) : 0.0;
            } else if constexpr (std::is_same_v<T, SerialExponentialTemporal>) {
                if (s < 0.0) return 0.0;
                const double r1 = t.rate1, r2 = t.rate2;
                if (std::fabs(r1 - r2) <= 1e-9 * std::max(r1, r2)) {
                    const double r = 0.5 * (r1 + r2);
                    return r * r * s * std::exp(-(r + u) * s);
                }
                return r1 * r2 * std::exp(-(r1 + u) * s) * (-std::expm1(-(r2 - r1) * s)) /
                       (r2 - r1);
            } else {
                throw std::logic_error("point mass has no density");
            }
        },
        k);
}

double temporal_lower_abscissa(const TemporalKernel& k) {
    return std::visit(
        [](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                return -t.rate;
            } else if constexpr (std::is_same_v<T, SerialExponentialTemporal>) {
                return -std::min(t.rate1, t.rate2);
            } else {
                return -kInf;
            }
        },
        k);
}

TransformMoments temporal_transform(const TemporalKernel& k, double u) {
    return std::visit(
        [u](const auto& t) -> TransformMoments {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, PointMassTemporal>) {
                const double m0 = std::exp(-u * t.h);
                return {m0, t.h * m0, t.h * t.h * m0};
            } else if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                const double d = t.rate + u;
                if (d <= 0.0) return {kInf, kInf, kInf};
                const double m0 = std::exp(-u * t.delay) * t.rate / d;
                const double s1 = t.delay + 1.0 / d;
                return {m0, s1 * m0, (s1 * s1 + 1.0 / (d * d)) * m0};
            } else {
                const double d1 = t.rate1 + u, d2 = t.rate2 + u;
                if (d1 <= 0.0 || d2 <= 0.0) return {kInf, kInf, kInf};
                const double m0 = t.rate1 * t.rate2 / (d1 * d2);
                const double s1 = 1.0 / d1 + 1.0 / d2;
                const double q = 1.0 / (d1 * d1) + 1.0 / (d2 * d2);
                return {m0, s1 * m0, (s1 * s1 + q) * m0};
            }
        },
        k);
}

double temporal_mean(const TemporalKernel& k) {
    return std::visit(
        [](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, PointMassTemporal>) {
                return t.h;
            } else if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                return t.delay + 1.0 / t.rate;
            } else {
                return 1.0 / t.rate1 + 1.0 / t.rate2;
            }
        },
        k);
}

Interval temporal_support(const TemporalKernel& k) {
    return std::visit(
        [](const auto& t) -> Interval {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, PointMassTemporal>) {
                return {t.h, t.h};
            } else if constexpr (std::is_same_v<T, ExponentialTemporal>) {
                return {t.delay, t.delay + kTailDecades / t.rate};
            } else {
                return {0.0, kTailDecades / std::min(t.rate1, t.rate2) +
                                 5.0 / std::max(t.rate1, t.rate2)};
            }
        },
        k);
}

// ---------------------------------------------------------------------------
// spatio-temporal kernels
// ---------------------------------------------------------------------------

SpatioTemporalKernel make_point_mass(double h, double a) {
    if (!(h >= 0.0)) throw IllFormedKernel("point mass time must be >= 0");
    return {PointMassKernel{h, a}};
}

SpatioTemporalKernel make_delta_time(double h, SpatialKernel spatial) {
    if (!(h >= 0.0)) throw IllFormedKernel("delta-time h must be >= 0");
    validate_spatial(spatial);
    return {SeparableDeltaTime{h, std::move(spatial)}};
}

SpatioTemporalKernel make_product(TemporalKernel temporal, SpatialKernel spatial) {
    validate_temporal(temporal);
    validate_spatial(spatial);
    return {SeparableProduct{std::move(temporal), std::move(spatial)}};
}

SpatioTemporalKernel make_mixture(std::vector<std::pair<double, SpatioTemporalKernel>> parts) {
    if (parts.empty()) throw IllFormedKernel("mixture needs at least one component");
    MixtureKernel mix;
    double total = 0.0;
    for (auto& [w, k] : parts) {
        if (w < 0.0) throw IllFormedKernel("mixture weight is negative");
        total += w;
        mix.weights.push_back(w);
        mix.components.push_back(std::move(k));
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw IllFormedKernel("mixture weights must sum to 1");
    return {std::move(mix)};
}

double kernel_mass(const SpatioTemporalKernel& K) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, MixtureKernel>) {
                double m = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    if (f.weights[i] < 0.0) throw IllFormedKernel("mixture weight is negative");
                    m += f.weights[i] * kernel_mass(f.components[i]);
                }
                return m;
            } else {
                return 1.0;  // every leaf family is normalized by construction
            }
        },
        K.family);
}

MomentReport first_moments(const SpatioTemporalKernel& K) {
    return std::visit(
        [](const auto& f) -> MomentReport {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                return {1.0, f.h, f.a};
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                return {1.0, f.h, spatial_mean(f.spatial)};
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                return {1.0, temporal_mean(f.temporal), spatial_mean(f.spatial)};
            } else {
                MomentReport r{0.0, 0.0, 0.0};
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    const MomentReport ri = first_moments(f.components[i]);
                    r.mass += f.weights[i] * ri.mass;
                    r.mean_time += f.weights[i] * ri.mean_time;
                    r.mean_space += f.weights[i] * ri.mean_space;
                }
                return r;
            }
        },
        K.family);
}

double convergence_abscissa(const SpatioTemporalKernel& K, double c) {
    return std::visit(
        [c](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                return kInf;
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                return spatial_upper_abscissa(f.spatial);
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                double g = spatial_upper_abscissa(f.spatial);
                // the temporal transform is evaluated at u = z c; for c < 0
                // an exponential temporal tail caps z at lower_abscissa / c
                if (c < 0.0) {
                    const double lo = temporal_lower_abscissa(f.temporal);
                    if (std::isfinite(lo)) g = std::min(g, lo / c);
                }
                return g;
            } else {
                double g = kInf;
                for (const auto& comp : f.components) g = std::min(g, convergence_abscissa(comp, c));
                return g;
            }
        },
        K.family);
}

namespace {

double weighted_moment_unchecked(const SpatioTemporalKernel& K, double z, double c, int k) {
    return std::visit(
        [z, c, k](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                const double x = c * f.h + f.a;
                return std::pow(x, k) * std::exp(-z * x);
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                const TransformMoments s = spatial_transform(f.spatial, z);
                const double e = std::exp(-z * c * f.h);
                const double ch = c * f.h;
                switch (k) {
                    case 0: return e * s.m0;
                    case 1: return e * (ch * s.m0 + s.m1);
                    default: return e * (ch * ch * s.m0 + 2.0 * ch * s.m1 + s.m2);
                }
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                const TransformMoments t = temporal_transform(f.temporal, z * c);
                const TransformMoments s = spatial_transform(f.spatial, z);
                if (!std::isfinite(t.m0) || !std::isfinite(s.m0)) return kInf;
                switch (k) {
                    case 0: return t.m0 * s.m0;
                    case 1: return c * t.m1 * s.m0 + t.m0 * s.m1;
                    default:
                        return c * c * t.m2 * s.m0 + 2.0 * c * t.m1 * s.m1 + t.m0 * s.m2;
                }
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    acc += f.weights[i] * weighted_moment_unchecked(f.components[i], z, c, k);
                return acc;
            }
        },
        K.family);
}

}  // namespace

double weighted_laplace_moment(const SpatioTemporalKernel& K, double z, double c, int k) {
    if (z < 0.0) throw std::invalid_argument("decay rate z must be >= 0");
    if (k < 0 || k > 2) throw std::invalid_argument("weighted moment order must be 0, 1 or 2");
    const double gamma = convergence_abscissa(K, c);
    if (std::isfinite(gamma)) {
        const double band = 1e-9 * std::max(1.0, gamma);
        if (std::fabs(z - gamma) <= band) {
            const double probe = std::max(gamma - 16.0 * band, 0.5 * gamma);
            throw AbscissaBoundary("laplace moment requested at the convergence abscissa",
                                   gamma, weighted_moment_unchecked(K, probe, c, k));
        }
        if (z > gamma) return kInf;
    }
    return weighted_moment_unchecked(K, z, c, k);
}

double laplace_moment(const SpatioTemporalKernel& K, double z, double c) {
    return weighted_laplace_moment(K, z, c, 0);
}

QuadratureResult laplace_moment_quadrature(const SpatioTemporalKernel& K, double z, double c,
                                           QuadratureOptions opt) {
    if (z < 0.0) throw std::invalid_argument("decay rate z must be >= 0");
    return std::visit(
        [z, c, &opt](const auto& f) -> QuadratureResult {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                return {std::exp(-z * (c * f.h + f.a)), 0.0, true, false};
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                const double e = std::exp(-z * c * f.h);
                if (has_atom(f.spatial))
                    return {e * std::exp(-z * atom_location(f.spatial)), 0.0, true, false};
                const auto& spatial = f.spatial;
                auto integrand = [&spatial, z](double w) {
                    return spatial_tilted_density(spatial, w, z);
                };
                const Interval win = tilted_spatial_window(spatial, z);
                QuadratureResult mid =
                    integrate_broken(integrand, win.lo, win.hi, spatial_breaks(spatial), opt);
                QuadratureResult lt = integrate_left_tail(integrand, win.lo, opt);
                QuadratureResult rt = integrate_right_tail(integrand, win.hi, opt);
                return {e * (mid.value + lt.value + rt.value), mid.error + lt.error + rt.error,
                        mid.converged && lt.converged && rt.converged,
                        lt.diverged || rt.diverged};
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                // separable: product of two 1-D transforms
                QuadratureResult sres;
                if (has_atom(f.spatial)) {
                    sres = {std::exp(-z * atom_location(f.spatial)), 0.0, true, false};
                } else {
                    const auto& spatial = f.spatial;
                    auto si = [&spatial, z](double w) {
                        return spatial_tilted_density(spatial, w, z);
                    };
                    const Interval win = tilted_spatial_window(spatial, z);
                    QuadratureResult mid =
                        integrate_broken(si, win.lo, win.hi, spatial_breaks(spatial), opt);
                    QuadratureResult lt = integrate_left_tail(si, win.lo, opt);
                    QuadratureResult rt = integrate_right_tail(si, win.hi, opt);
                    sres = {mid.value + lt.value + rt.value, mid.error + lt.error + rt.error,
                            mid.converged && lt.converged && rt.converged,
                            lt.diverged || rt.diverged};
                }
                QuadratureResult tres;
                if (has_atom(f.temporal)) {
                    tres = {std::exp(-z * c * atom_location(f.temporal)), 0.0, true, false};
                } else {
                    const auto& temporal = f.temporal;
                    const double u = z * c;
                    auto ti = [&temporal, u](double s) {
                        return temporal_tilted_density(temporal, s, u);
                    };
                    const Interval win = tilted_temporal_window(temporal, u);
                    QuadratureResult mid =
                        integrate_broken(ti, win.lo, win.hi, temporal_breaks(temporal), opt);
                    QuadratureResult rt = integrate_right_tail(ti, win.hi, opt);
                    tres = {mid.value + rt.value, mid.error + rt.error,
                            mid.converged && rt.converged, rt.diverged};
                }
                return {sres.value * tres.value,
                        sres.error * std::fabs(tres.value) + tres.error * std::fabs(sres.value),
                        sres.converged && tres.converged, sres.diverged || tres.diverged};
            } else {
                QuadratureResult acc{0.0, 0.0, true, false};
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    QuadratureResult ri =
                        laplace_moment_quadrature(f.components[i], z, c, opt);
                    acc.value += f.weights[i] * ri.value;
                    acc.error += f.weights[i] * ri.error;
                    acc.converged = acc.converged && ri.converged;
                    acc.diverged = acc.diverged || ri.diverged;
                }
                return acc;
            }
        },
        K.family);
}

double abscissa_by_probing(const SpatioTemporalKernel& K, double c, double z_cap) {
    // probes by quadrature blow-up only up to z_cap; kernels whose exponential
    // moments stay finite but grow fast (Gaussian tails) overflow far beyond
    // any abscissa of interest, so a finite cap is part of the contract
    auto finite_at = [&K, c](double z) {
        // only the blow-up flag decides: slow tail convergence near the
        // boundary is still a finite moment
        QuadratureResult r = laplace_moment_quadrature(K, z, c, {1e-7, 1e-12, 40});
        return !r.diverged && std::isfinite(r.value);
    };
    double z = 1.0 / 16.0;
    if (!finite_at(z)) {
        // bracket downward
        double hi = z, lo = 0.0;
        for (int i = 0; i < 50 && hi - lo > 1e-6; ++i) {
            const double mid = 0.5 * (lo + hi);
            (finite_at(mid) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    double lo = z;
    while (z < z_cap) {
        z *= 2.0;
        if (!finite_at(z)) {
            double hi = z;
            for (int i = 0; i < 50 && hi - lo > 1e-5 * std::max(1.0, lo); ++i) {
                const double mid = 0.5 * (lo + hi);
                (finite_at(mid) ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        lo = z;
    }
    return kInf;
}

double nonlocal_apply(const SpatioTemporalKernel& K, double c,
                      const std::function<double(double)>& y, double t,
                      QuadratureOptions opt) {
    return std::visit(
        [c, &y, t, &opt](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                return y(t - c * f.h - f.a);
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                const double base = t - c * f.h;
                if (has_atom(f.spatial)) return y(base - atom_location(f.spatial));
                const auto& spatial = f.spatial;
                auto integrand = [&spatial, &y, base](double w) {
                    return spatial_density(spatial, w) * y(base - w);
                };
                const Interval sup = spatial_support(spatial);
                return integrate_broken(integrand, sup.lo, sup.hi, spatial_breaks(spatial), opt)
                    .value;
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                const auto& spatial = f.spatial;
                const Interval ssup = spatial_support(spatial);
                auto inner = [&spatial, &y, &opt, &ssup, t, c](double s) -> double {
                    const double base = t - c * s;
                    if (has_atom(spatial)) return y(base - atom_location(spatial));
                    auto integrand = [&spatial, &y, base](double w) {
                        return spatial_density(spatial, w) * y(base - w);
                    };
                    return integrate_broken(integrand, ssup.lo, ssup.hi,
                                            spatial_breaks(spatial), opt)
                        .value;
                };
                if (has_atom(f.temporal)) return inner(atom_location(f.temporal));
                const auto& temporal = f.temporal;
                auto integrand = [&temporal, &inner](double s) {
                    return temporal_density(temporal, s) * inner(s);
                };
                const Interval tsup = temporal_support(f.temporal);
                return integrate_broken(integrand, tsup.lo, tsup.hi,
                                        temporal_breaks(temporal), opt)
                    .value;
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    acc += f.weights[i] * nonlocal_apply(f.components[i], c, y, t, opt);
                return acc;
            }
        },
        K.family);
}

Interval ray_support(const SpatioTemporalKernel& K, double c) {
    return std::visit(
        [c](const auto& f) -> Interval {
            using T = std::decay_t<decltype(f)>;
            auto compose = [c](Interval ts, Interval ss) -> Interval {
                double a = c * ts.lo, b = c * ts.hi;
                if (a > b) std::swap(a, b);
                return {a + ss.lo, b + ss.hi};
            };
            if constexpr (std::is_same_v<T, PointMassKernel>) {
                const double r = c * f.h + f.a;
                return {r, r};
            } else if constexpr (std::is_same_v<T, SeparableDeltaTime>) {
                return compose({f.h, f.h}, spatial_support(f.spatial));
            } else if constexpr (std::is_same_v<T, SeparableProduct>) {
                return compose(temporal_support(f.temporal), spatial_support(f.spatial));
            } else {
                Interval hull{kInf, -kInf};
                for (const auto& comp : f.components) {
                    const Interval s = ray_support(comp, c);
                    hull.lo = std::min(hull.lo, s.lo);
                    hull.hi = std::max(hull.hi, s.hi);
                }
                return hull;
            }
        },
        K.family);
}

}  // namespace wavefront
