#pragma once

#include <vector>

#include "wavefront/charspec.hpp"
#include "wavefront/wavesolve.hpp"

namespace wavefront {

/// Probability measure P on [0, inf): point atoms plus exponential parts.
struct DelayMeasure {
    struct Atom {
        double weight;
        double tau;
    };
    struct ExpPart {
        double weight;
        double rate;
    };
    std::vector<Atom> atoms;
    std::vector<ExpPart> exps;

    double mass() const;
    /// bilateral transform int e^{-u r} P(dr); +inf when any exponential part
    /// has rate <= -u
    double transform(double u) const;
    void validate() const;  // throws IllFormedKernel
};

DelayMeasure point_delay(double tau);
DelayMeasure exponential_delay(double rate);

struct EpidemicModel {
    double alpha;           // removal rate > 0
    DelayMeasure P;
    SpatialKernel spatial;  // mass-1 kernel of the first equation
    ReactionTerm f;
    Nonlinearity g;
};

struct PopulationModel {
    double D;      // immature diffusivity > 0
    double gamma;  // immature death rate > 0
    SpatioTemporalKernel kernel;
    ReactionTerm f;
    Nonlinearity g;
};

/// K2(w) = int_0^w e^{-alpha (w - r)} P(dr); total mass 1/alpha.
struct EpidemicK2 {
    double alpha;
    // alpha * K2 is a mass-1 temporal kernel (mixture)
    std::vector<double> weights;
    std::vector<TemporalKernel> components;

    double density(double w) const;  // K2 itself (mass 1/alpha)
    double mass_quadrature() const;  // integrates the density
    Interval support() const;
    std::vector<double> breaks() const;  // jump locations (shifted atoms)
};

EpidemicK2 epidemic_K2(const DelayMeasure& P, double alpha);

enum class CharVariant { Chi0, ChiL };

/// z^2 - c z - q + p P(zc) S(z) / (c z + alpha) with (p, q) = (g'(0), f'(0))
/// or (L, inf f').  Throws DenominatorNonPositive when c z + alpha <= 0.
double epidemic_charfun(const EpidemicModel& model, double z, double c, CharVariant variant);

/// The mass-1 spatio-temporal kernel alpha K2(s) K(w) induced by the system;
/// epidemic_charfun(z, c, Chi0) == eval_R with (p, q) = (g'(0)/alpha, f'(0)).
SpatioTemporalKernel epidemic_induced_kernel(const EpidemicModel& model);

/// Scalar wave model whose fixed-point equation matches the system: birth
/// g/alpha against the induced kernel.
WaveModel epidemic_scalar_model(const EpidemicModel& model);

struct EpidemicSolve {
    SolveResult scalar;  // profile phi of the infectious agent
    Profile psi;         // infective population, reconstructed
};

EpidemicSolve epidemic_solve(const EpidemicModel& model, double c, InitPreset preset,
                             const SolverConfig& cfg = {});

/// psi(t) = int_0^inf g(phi(t - c w)) K2(w) dw (c != 0), or g(phi)/alpha at c = 0.
Profile epidemic_reconstruct(const EpidemicModel& model, const Profile& phi, double c);

/// sup-norm residual of c psi' + alpha psi - int g(phi(t - c s)) P(ds).
double epidemic_second_residual(const EpidemicModel& model, const Profile& phi,
                                const Profile& psi, double c);

/// (H phi)(t) = g(phi(t)) - int int K g(phi(t - c s - w)); evaluated with the
/// solver's k2 taps on phi's grid.
Eigen::ArrayXd population_H(const PopulationModel& model, const Profile& phi, double c);

/// psi = k1 * (H phi) with the roots of D z^2 - c z - gamma; values in
/// (-1e-9, 0) are clamped to zero, larger negatives reported in `warnings`.
Profile population_reconstruct(const PopulationModel& model, const Profile& phi, double c,
                               std::vector<std::string>* warnings = nullptr);

/// sup-norm residual of D psi'' - c psi' - gamma psi + H phi (interior).
double population_residual(const PopulationModel& model, const Profile& phi, const Profile& psi,
                           double c);

}  // namespace wavefront
