#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace polaron {

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the panel with the largest error
/// estimate is bisected until the summed error is below rel_tol·|I| (or abs_tol), or the
/// panel budget is spent. The returned error is the summed panel estimate.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double rel_tol, unsigned max_panels = 200,
                        double abs_tol = 0.0) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    QuadResult r;
    if (a == b) return r;
    auto apply = [&](double lo, double hi) {
        double err = 0.0;
        const double v = rule::integrate(f, lo, hi, 0, 0.0, &err);
        return Panel{lo, hi, v, err};
    };
    std::priority_queue<Panel> heap;
    Panel p0 = apply(a, b);
    heap.push(p0);
    double total = p0.value;
    double err = p0.error;
    unsigned panels = 1;
    while (panels < max_panels && !(err <= std::max(abs_tol, rel_tol * std::abs(total)))) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Panel left = apply(worst.a, mid);
        Panel right = apply(mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // resum to drop the drift of the running totals
    CompensatedSum vs;
    double es = 0.0;
    while (!heap.empty()) {
        vs += heap.top().value;
        es += heap.top().error;
        heap.pop();
    }
    r.value = vs.value();
    r.error = es;
    return r;
}

/// Integral over [a, inf) through x = a + scale * u / (1 - u).
template <class F>
QuadResult integrate_gk_tail(F&& f, double a, double scale, double rel_tol, unsigned max_panels = 200,
                             double abs_tol = 0.0) {
    auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return f(a + scale * u / w) * scale / (w * w);
    };
    return integrate_gk(g, 0.0, 1.0, rel_tol, max_panels, abs_tol);
}

/// Trapezoid rule for a smooth function of φ on [0, π] that is even and 2π-periodic,
/// i.e. the full-circle integral divided by two. Doubles the point count until two
/// successive estimates agree to rel_tol. Error is the last difference.
template <class F>
QuadResult half_circle_trapezoid(F&& f, double rel_tol, int start = 8, int max_panels = 1024) {
    constexpr double pi = std::numbers::pi;
    int n = start;
    double h = pi / n;
    double ends = 0.5 * (f(0.0) + f(pi));
    double interior = 0.0;
    for (int i = 1; i < n; ++i) interior += f(i * h);
    double prev = h * (ends + interior);
    QuadResult r{prev, std::numeric_limits<double>::infinity()};
    while (n < max_panels) {
        double mid = 0.0;
        for (int i = 0; i < n; ++i) mid += f((i + 0.5) * h);
        interior += mid;
        n *= 2;
        h *= 0.5;
        const double cur = h * (ends + interior);
        r.value = cur;
        r.error = std::abs(cur - prev);
        if (r.error <= rel_tol * std::abs(cur) || cur == 0.0) break;
        prev = cur;
    }
    return r;
}

}  // namespace polaron
