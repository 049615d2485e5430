#pragma once

#include <random>
#include <string>
#include <vector>

#include "wavefront/kernels.hpp"

namespace wavefront::testing {

struct NamedKernel {
    std::string name;
    SpatioTemporalKernel kernel;
};

/// one representative per family, covering every spatial/temporal leaf
inline std::vector<NamedKernel> kernel_catalogue() {
    std::vector<NamedKernel> out;
    out.push_back({"point_mass", make_point_mass(1.0, -0.5)});
    out.push_back({"delta_time_gaussian", make_delta_time(1.0, GaussianSpatial{1.0, 0.0})});
    out.push_back({"delta_time_two_sided", make_delta_time(0.5, TwoSidedExponentialSpatial{3.0})});
    out.push_back({"delta_time_one_sided_left",
                   make_delta_time(0.0, OneSidedExponentialSpatial{2.0, Side::Left})});
    out.push_back({"delta_time_point", make_delta_time(2.0, PointMassSpatial{-1.0})});
    out.push_back({"product_exp_gaussian",
                   make_product(ExponentialTemporal{1.5, 0.0}, GaussianSpatial{0.5, -0.25})});
    out.push_back({"product_exp_point", make_product(ExponentialTemporal{2.0, 0.5},
                                                     PointMassSpatial{0.75})});
    out.push_back({"product_serial_two_sided",
                   make_product(SerialExponentialTemporal{2.0, 3.0},
                                TwoSidedExponentialSpatial{2.5})});
    out.push_back(
        {"mixture", make_mixture({{0.3, make_point_mass(1.0, 0.0)},
                                  {0.45, make_delta_time(1.0, GaussianSpatial{1.0, 0.0})},
                                  {0.25, make_delta_time(0.0, TwoSidedExponentialSpatial{4.0})}})});
    return out;
}

/// random normalized mixture with an infinite convergence abscissa (point
/// masses, Gaussians, right-sided exponentials), so gamma_K runs on its
/// strictly increasing mu branch
inline SpatioTemporalKernel random_mixture(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int n = 2 + static_cast<int>(uni(rng) * 2.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = 0.1 + uni(rng);
        total += x;
    }
    std::vector<std::pair<double, SpatioTemporalKernel>> parts;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double weight = (i + 1 == n) ? 1.0 - acc : w[i] / total;
        acc += weight;
        switch (i % 3) {
            case 0:
                parts.emplace_back(weight, make_point_mass(uni(rng), 2.0 * uni(rng) - 1.0));
                break;
            case 1:
                parts.emplace_back(weight, make_delta_time(uni(rng),
                                                           GaussianSpatial{0.25 + uni(rng), 0.0}));
                break;
            default:
                parts.emplace_back(
                    weight, make_delta_time(uni(rng), OneSidedExponentialSpatial{
                                                          2.0 + 3.0 * uni(rng), Side::Right}));
                break;
        }
    }
    return make_mixture(std::move(parts));
}

}  // namespace wavefront::testing
