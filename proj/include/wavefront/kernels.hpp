#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wavefront/errors.hpp"
#include "wavefront/quadrature.hpp"

namespace wavefront {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// One-dimensional kernel families.
//
// Spatial kernels are probability densities / point masses on R, temporal
// kernels on [0, inf).  Each family knows its density, exponential moments
//   m_k(u) = int x^k rho(x) e^{-u x} dx,   k = 0, 1, 2,
// the open interval of u on which these are finite, its mean, and a
// numerical support interval that carries all but ~1e-15 of its mass.
// ---------------------------------------------------------------------------

enum class Side { Left, Right };

struct GaussianSpatial {
    double variance;  // sigma^2 > 0
    double mean;
};

struct TwoSidedExponentialSpatial {
    double rate;  // lambda > 0; density lambda/2 e^{-lambda |w|}
};

struct PointMassSpatial {
    double a;
};

struct OneSidedExponentialSpatial {
    double rate;  // lambda > 0
    Side side;    // Right: support [0, inf); Left: support (-inf, 0]
};

using SpatialKernel = std::variant<GaussianSpatial, TwoSidedExponentialSpatial,
                                   PointMassSpatial, OneSidedExponentialSpatial>;

struct PointMassTemporal {
    double h;  // >= 0
};

struct ExponentialTemporal {
    double rate;         // > 0
    double delay = 0.0;  // >= 0; density rate * e^{-rate (s - delay)} on [delay, inf)
};

// Convolution of two exponentials on [0, inf) (hypoexponential; Erlang-2 when
// the rates coincide).  Used for the epidemic K2 under exponential P.
struct SerialExponentialTemporal {
    double rate1;
    double rate2;
};

using TemporalKernel =
    std::variant<PointMassTemporal, ExponentialTemporal, SerialExponentialTemporal>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// exponential moments m_0, m_1, m_2 of a 1-D kernel at argument u
struct TransformMoments {
    double m0;
    double m1;
    double m2;
};

bool has_atom(const SpatialKernel& k);
double atom_location(const SpatialKernel& k);
double spatial_density(const SpatialKernel& k, double w);
/// density(w) e^{-u w} evaluated through a single exponential, so an
/// underflowing density never meets an overflowing tilt
double spatial_tilted_density(const SpatialKernel& k, double w, double u);
/// sup of u for which int rho(w) e^{-u w} dw is finite (u >= 0 side)
double spatial_upper_abscissa(const SpatialKernel& k);
/// inf of u for which the transform is finite (u <= 0 side)
double spatial_lower_abscissa(const SpatialKernel& k);
TransformMoments spatial_transform(const SpatialKernel& k, double u);
double spatial_mean(const SpatialKernel& k);
Interval spatial_support(const SpatialKernel& k);

bool has_atom(const TemporalKernel& k);
double atom_location(const TemporalKernel& k);
double temporal_density(const TemporalKernel& k, double s);
double temporal_tilted_density(const TemporalKernel& k, double s, double u);
double temporal_lower_abscissa(const TemporalKernel& k);
TransformMoments temporal_transform(const TemporalKernel& k, double u);
double temporal_mean(const TemporalKernel& k);
Interval temporal_support(const TemporalKernel& k);

// ---------------------------------------------------------------------------
// Spatio-temporal kernel K(s, w), normalized to unit mass.
// ---------------------------------------------------------------------------

struct SpatioTemporalKernel;

struct PointMassKernel {
    double h;  // time >= 0
    double a;  // space shift
};

struct SeparableDeltaTime {
    double h;  // time >= 0
    SpatialKernel spatial;
};

struct SeparableProduct {
    TemporalKernel temporal;
    SpatialKernel spatial;
};

struct MixtureKernel {
    std::vector<double> weights;
    std::vector<SpatioTemporalKernel> components;
};

struct SpatioTemporalKernel {
    std::variant<PointMassKernel, SeparableDeltaTime, SeparableProduct, MixtureKernel> family;
};

/// Validating constructors.  Throw IllFormedKernel on contract violations.
SpatioTemporalKernel make_point_mass(double h, double a);
SpatioTemporalKernel make_delta_time(double h, SpatialKernel spatial);
SpatioTemporalKernel make_product(TemporalKernel temporal, SpatialKernel spatial);
SpatioTemporalKernel make_mixture(std::vector<std::pair<double, SpatioTemporalKernel>> parts);

struct MomentReport {
    double mass;
    double mean_time;
    double mean_space;
};

/// Total mass int int K; 1 for every well-formed kernel.
double kernel_mass(const SpatioTemporalKernel& K);

/// Exact first moments (mass, int int K s, int int K w), combined linearly
/// over mixtures.
MomentReport first_moments(const SpatioTemporalKernel& K);

/// Supremum of z >= 0 for which int int K e^{-z(cs+w)} is finite.
/// Closed form per family; +inf when nothing constrains the decay rate.
double convergence_abscissa(const SpatioTemporalKernel& K, double c);

/// int int K(s,w) e^{-z(cs+w)} dw ds for z >= 0.  Returns +inf beyond the
/// abscissa; throws AbscissaBoundary within 1e-9 (relative) of a finite one.
double laplace_moment(const SpatioTemporalKernel& K, double z, double c);

/// int int K(s,w) (cs+w)^k e^{-z(cs+w)} dw ds for k = 0, 1, 2.
/// k = 1 is -d/dz of the Laplace moment, k = 2 the second derivative.
double weighted_laplace_moment(const SpatioTemporalKernel& K, double z, double c, int k);

/// Independent evaluation of the Laplace moment by adaptive quadrature over
/// the kernel's continuous dimensions (atoms sift exactly).  Test oracle for
/// the closed forms and the fallback for families without one.
QuadratureResult laplace_moment_quadrature(const SpatioTemporalKernel& K, double z, double c,
                                           QuadratureOptions opt = {});

/// Abscissa bracketing by doubling-and-bisection on quadrature blow-up.
/// Oracle for the closed-form convergence_abscissa.
double abscissa_by_probing(const SpatioTemporalKernel& K, double c, double z_cap = 1e4);

/// Nonlocal term int int K(s,w) y(t - cs - w) dw ds for a bounded callable y.
/// Atoms sift; continuous dimensions are integrated adaptively over the
/// kernel's numerical support.
double nonlocal_apply(const SpatioTemporalKernel& K, double c,
                      const std::function<double(double)>& y, double t,
                      QuadratureOptions opt = {});

/// Numerical support of the ray variable r = cs + w.
Interval ray_support(const SpatioTemporalKernel& K, double c);

}  // namespace wavefront
