#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace wavefront {

inline constexpr double kQuadInf = std::numeric_limits<double>::infinity();

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 50;
    int max_panels = 20000;
    // initial uniform partition; keep > 1 whenever narrow features could
    // hide between the Kronrod nodes of a single panel
    int initial_panels = 8;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    bool diverged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]: abscissae (positive half) and weights.
inline constexpr double kGK15Nodes[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589696,
};
inline constexpr double kG7Weights[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820,
};

struct GKEstimate {
    double k15;
    double error;
};

template <class F>
GKEstimate gk15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double f0 = f(mid);
    double k15 = kK15Weights[0] * f0;
    double g7 = kG7Weights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hl * kGK15Nodes[i];
        const double fs = f(mid + dx) + f(mid - dx);
        k15 += kK15Weights[i] * fs;
        if (i % 2 == 0) g7 += kG7Weights[i / 2] * fs;
    }
    k15 *= hl;
    g7 *= hl;
    return {k15, std::fabs(k15 - g7)};
}

// Acceptance always consults the two child estimates as well: a lone
// Kronrod/Gauss comparison can be fooled when a kink sits at the panel
// center, where both rules agree by symmetry yet both are wrong.
template <class F>
void adapt(F& f, double a, double b, GKEstimate e, double tol, int depth,
           const QuadratureOptions& opt, double& sum, double& err_sum, bool& ok, int& panels) {
    if (!std::isfinite(e.k15)) {
        sum += e.k15;
        ok = false;
        return;
    }
    const double scale = std::max(opt.abs_tol, tol);
    if (depth >= opt.max_depth || --panels <= 0) {
        if (e.error > scale) ok = false;
        sum += e.k15;
        err_sum += e.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    const GKEstimate left = gk15(f, a, mid);
    const GKEstimate right = gk15(f, mid, b);
    const double refined = left.k15 + right.k15;
    const double disc = std::fabs(e.k15 - refined);
    if (e.error <= scale && disc <= scale && std::isfinite(refined)) {
        sum += refined;
        err_sum += std::max(e.error, disc);
        return;
    }
    adapt(f, a, mid, left, 0.5 * tol, depth + 1, opt, sum, err_sum, ok, panels);
    adapt(f, mid, b, right, 0.5 * tol, depth + 1, opt, sum, err_sum, ok, panels);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (a == b) return {0.0, 0.0, true, false};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    // first pass to scale the relative tolerance
    // initial partition so narrow features inside [a, b] are seen
    auto& fr = f;
    const int parts_n = std::max(1, opt.initial_panels);
    std::vector<detail::GKEstimate> parts(parts_n);
    double coarse = 0.0;
    for (int i = 0; i < parts_n; ++i) {
        const double lo = a + (b - a) * i / parts_n;
        const double hi = a + (b - a) * (i + 1) / parts_n;
        parts[i] = detail::gk15(fr, lo, hi);
        coarse += parts[i].k15;
    }
    if (!std::isfinite(coarse)) return {coarse, kQuadInf, false, true};
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(coarse));
    double sum = 0.0, err = 0.0;
    bool ok = true;
    int panels = opt.max_panels;
    for (int i = 0; i < parts_n; ++i) {
        const double lo = a + (b - a) * i / parts_n;
        const double hi = a + (b - a) * (i + 1) / parts_n;
        detail::adapt(fr, lo, hi, parts[i], tol / parts_n, 0, opt, sum, err, ok, panels);
    }
    if (!std::isfinite(sum)) return {sum, kQuadInf, false, true};
    return {sign * sum, err, ok, false};
}

/// Integral over [a, b] split at interior breakpoints.  Kinks and jumps must
/// be panel boundaries: a feature hiding between a panel edge and the
/// outermost Kronrod node is invisible to the error estimate.
template <class F>
QuadratureResult integrate_broken(F&& f, double a, double b, std::vector<double> breaks,
                                  QuadratureOptions opt = {}) {
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double x) { return !(x > a && x < b); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(b);
    QuadratureResult total{0.0, 0.0, true, false};
    double lo = a;
    for (double hi : breaks) {
        const QuadratureResult piece = integrate(f, lo, hi, opt);
        total.value += piece.value;
        total.error += piece.error;
        total.converged = total.converged && piece.converged;
        total.diverged = total.diverged || piece.diverged;
        lo = hi;
    }
    return total;
}

/// Integral of f over [a, +inf) by window doubling.  Divergence is declared
/// when successive doublings grow the running integral by more than 10x
/// twice in a row.
template <class F>
QuadratureResult integrate_right_tail(F&& f, double a, QuadratureOptions opt = {},
                                      double initial_window = 1.0) {
    double w = initial_window;
    QuadratureResult head = integrate(f, a, a + w, opt);
    if (!std::isfinite(head.value)) return {head.value, kQuadInf, false, true};
    double total = head.value;
    double err = head.error;
    bool ok = head.converged;
    int quiet = 0;
    int blowups = 0;
    double prev_total = total;
    for (int step = 0; step < 48; ++step) {
        QuadratureResult chunk = integrate(f, a + w, a + 2.0 * w, opt);
        total += chunk.value;
        err += chunk.error;
        ok = ok && chunk.converged;
        w *= 2.0;
        if (std::fabs(total) > 10.0 * std::max(std::fabs(prev_total), opt.abs_tol)) {
            if (++blowups >= 2) return {total, err, false, true};
        } else {
            blowups = 0;
        }
        if (std::fabs(chunk.value) <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
            if (++quiet >= 2) return {total, err, ok, false};
        } else {
            quiet = 0;
        }
        prev_total = total;
        if (!std::isfinite(total)) return {total, err, false, true};
    }
    return {total, err, false, false};
}

/// Integral of f over (-inf, b], mirrored window doubling.
template <class F>
QuadratureResult integrate_left_tail(F&& f, double b, QuadratureOptions opt = {},
                                     double initial_window = 1.0) {
    auto g = [&f, b](double u) { return f(b - u); };
    return integrate_right_tail(g, 0.0, opt, initial_window);
}

}  // namespace wavefront
