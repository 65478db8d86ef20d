#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nriwg {

struct QuadResult {
    double value = 0;
    double error = 0;
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double gauss_w[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double kronrod_w[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& error)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g = gauss_w[0] * f0;
    double k = kronrod_w[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk_nodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        g += gauss_w[i] * fi;
        k += kronrod_w[i] * fi;
    }
    value = k * half;
    const double diff = std::abs(k - g) * half;
    error = diff * std::min(1.0, std::pow(200.0 * diff, 0.5));
}

struct Panel {
    double a, b, value, error;
    int depth;
};

} // namespace detail

struct QuadOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    int max_depth = 60;
    std::size_t max_panels = 200000;
};

// Globally adaptive quadrature over a fixed breakpoint partition. Panels are
// refined worst-first; the final sum runs in position order so results are
// deterministic.
template <class F>
QuadResult integrate_adaptive(const F& f, std::vector<double> breakpoints,
                              const QuadOptions& opt = {})
{
    QuadResult res;
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [](double x, double y) {
                                      return std::abs(x - y) <=
                                             1e-15 * std::max(std::abs(x), std::abs(y));
                                  }),
                      breakpoints.end());
    if (breakpoints.size() < 2)
        return res;

    std::vector<detail::Panel> panels;
    panels.reserve(256);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        detail::Panel p{breakpoints[i], breakpoints[i + 1], 0, 0, 0};
        detail::gk15(f, p.a, p.b, p.value, p.error);
        res.evaluations += 15;
        panels.push_back(p);
    }

    auto total = [&panels]() {
        double v = 0, e = 0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair<double, double>(v, e);
    };

    while (true) {
        auto [v, e] = total();
        if (e <= std::max(opt.abs_tol, opt.rel_tol * std::abs(v)))
            break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].error > panels[worst].error ||
                (panels[i].error == panels[worst].error && panels[i].a < panels[worst].a))
                worst = i;
        }
        if (panels[worst].depth >= opt.max_depth || panels.size() >= opt.max_panels) {
            res.converged = false;
            break;
        }
        detail::Panel left = panels[worst], right;
        const double mid = 0.5 * (left.a + left.b);
        if (!(mid > left.a && mid < left.b)) { // interval at rounding floor
            res.converged = false;
            break;
        }
        right = left;
        left.b = mid;
        right.a = mid;
        ++left.depth;
        ++right.depth;
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        res.evaluations += 30;
        panels[worst] = left;
        panels.push_back(right);
    }

    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    res.value = 0;
    res.error = 0;
    for (const auto& p : panels) {
        res.value += p.value;
        res.error += p.error;
    }
    return res;
}

} // namespace nriwg
