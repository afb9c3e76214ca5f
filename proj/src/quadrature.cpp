#include "gstwdp/quadrature.hpp"

#include "gstwdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace gstwdp::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_k = fc * kWgk[7];
    double result_g = fc * kWg[3];
    double result_abs = std::abs(result_k);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += kWgk[j] * (f1 + f2);
        result_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * result_k;
    double result_asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) result_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    result_k *= half;
    result_abs *= std::abs(half);
    result_asc *= std::abs(half);
    double err = std::abs((result_k - result_g * half));
    if (result_asc != 0.0 && err != 0.0) err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * result_abs);
    return {a, b, result_k, err};
}

}  // namespace

void QuadPolicy::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadPolicy: tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("QuadPolicy: max_subdivisions must be >= 1");
}

QuadResult gauss_kronrod(const Integrand& f, std::span<const double> breakpoints, const QuadPolicy& policy) {
    policy.validate();
    if (breakpoints.size() < 2) throw DomainError("gauss_kronrod: need at least two breakpoints");

    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Segment s = kronrod15(f, breakpoints[i], breakpoints[i + 1]);
        evals += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    int subdivisions = 0;
    while (total_err > std::max(policy.abs_tol, policy.rel_tol * std::abs(total))) {
        if (subdivisions >= policy.max_subdivisions) {
            throw ConvergenceError("gauss_kronrod: tolerance not met after " + std::to_string(subdivisions) +
                                   " subdivisions (error estimate " + std::to_string(total_err) + ")");
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval cannot be split any further in double precision
            break;
        }
        heap.pop();
        Segment left = kronrod15(f, worst.a, mid);
        Segment right = kronrod15(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (subdivisions % 64 == 0) {
            // re-sum to shed accumulated cancellation in the running totals
            auto copy = heap;
            total = 0.0;
            total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }

    auto copy = heap;
    total = 0.0;
    total_err = 0.0;
    while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
    }
    return {total, total_err, evals};
}

QuadResult gauss_kronrod(const Integrand& f, double a, double b, const QuadPolicy& policy, int initial_panels) {
    if (!(b > a)) {
        if (a == b) return {};
        throw DomainError("gauss_kronrod: require a < b");
    }
    const int n = std::max(1, initial_panels);
    std::vector<double> pts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    pts.back() = b;
    return gauss_kronrod(f, pts, policy);
}

GaussLegendreRule gauss_legendre_rule(int n) {
    if (n < 1) throw DomainError("gauss_legendre_rule: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L;
            long double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        // recompute derivative at the converged node
        long double p0 = 1.0L;
        long double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0L : n * (x * p1 - p0) / (x * x - 1.0L);
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -static_cast<double>(x);
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(x);
        rule.weights[static_cast<std::size_t>(i)] = static_cast<double>(w);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(w);
    }
    return rule;
}

QuadResult gauss_legendre_panels(const Integrand& f, double a, double b, const QuadPolicy& policy,
                                 int initial_panels) {
    policy.validate();
    if (a == b) return {};
    static const GaussLegendreRule rule = gauss_legendre_rule(20);
    long evals = 0;
    auto composite = [&](int panels) {
        const double h = (b - a) / panels;
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            const double c = lo + 0.5 * h;
            double s = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(c + 0.5 * h * rule.nodes[k]);
            sum += 0.5 * h * s;
        }
        evals += static_cast<long>(panels) * static_cast<long>(rule.nodes.size());
        return sum;
    };
    int panels = std::max(1, initial_panels);
    double prev = composite(panels);
    for (int level = 0; level < 24; ++level) {
        panels *= 2;
        const double cur = composite(panels);
        const double diff = std::abs(cur - prev);
        if (diff <= std::max(policy.abs_tol, policy.rel_tol * std::abs(cur))) return {cur, diff, evals};
        if (panels > policy.max_subdivisions * 64) break;
        prev = cur;
    }
    throw ConvergenceError("gauss_legendre_panels: tolerance not met");
}

QuadResult periodic_trapezoid(const Integrand& f, double period, const QuadPolicy& policy, int initial_nodes,
                              int max_nodes) {
    policy.validate();
    int n = std::max(2, initial_nodes);
    double h = period / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(i * h);
    long evals = n;
    double prev = sum * h;
    while (n < max_nodes) {
        // add the midpoints of the current grid
        double mids = 0.0;
        for (int i = 0; i < n; ++i) mids += f((i + 0.5) * h);
        evals += n;
        sum += mids;
        n *= 2;
        h *= 0.5;
        const double cur = sum * h;
        const double diff = std::abs(cur - prev);
        if (diff <= std::max(policy.abs_tol, policy.rel_tol * std::abs(cur))) return {cur, diff, evals};
        prev = cur;
    }
    throw ConvergenceError("periodic_trapezoid: tolerance not met with " + std::to_string(n) + " nodes");
}

}  // namespace gstwdp::quad
