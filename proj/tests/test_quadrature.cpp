#include <doctest.h>

#include <cmath>

#include "wavefront/quadrature.hpp"

using namespace wavefront;

TEST_CASE("polynomial and trigonometric integrals") {
    auto sq = [](double x) { return x * x; };
    CHECK(integrate(sq, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    auto s = [](double x) { return std::sin(x); };
    CHECK(integrate(s, 0.0, M_PI).value == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(integrate(sq, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate(sq, 2.0, 2.0).value == 0.0);
}

TEST_CASE("kinked integrand converges") {
    auto f = [](double x) { return std::fabs(x - 0.3); };
    // int_0^1 |x - 0.3| = 0.09/2 + 0.49/2
    const QuadratureResult r = integrate(f, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.29).epsilon(1e-12));
}

TEST_CASE("narrow bump found by subdivision") {
    auto f = [](double x) { return std::exp(-5000.0 * (x - 0.71) * (x - 0.71)); };
    const double exact = std::sqrt(M_PI / 5000.0);
    CHECK(integrate(f, 0.0, 2.0).value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("semi-infinite tails") {
    auto e = [](double x) { return std::exp(-x); };
    const QuadratureResult r = integrate_right_tail(e, 0.0);
    CHECK(r.converged);
    CHECK_FALSE(r.diverged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

    auto g = [](double x) { return std::exp(x); };
    CHECK(integrate_left_tail(g, 0.0).value == doctest::Approx(1.0).epsilon(1e-10));

    // mass beyond the initial window needs a window hint; doubling then
    // terminates once the tail goes quiet
    auto far = [](double x) { return std::exp(-0.5 * (x - 40.0) * (x - 40.0)); };
    CHECK(integrate_right_tail(far, 0.0, {}, 64.0).value ==
          doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-8));
    auto near = [](double x) { return std::exp(-0.5 * (x - 3.0) * (x - 3.0)); };
    CHECK(integrate_right_tail(near, 0.0).value ==
          doctest::Approx(std::sqrt(2.0 * M_PI) * 0.9986501019683699).epsilon(1e-7));
}

TEST_CASE("divergence detection") {
    auto grow = [](double x) { return std::exp(0.5 * x); };
    const QuadratureResult r = integrate_right_tail(grow, 0.0);
    CHECK(r.diverged);
}
