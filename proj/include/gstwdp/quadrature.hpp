#pragma once

// Numerical integration on finite intervals.  Semi-infinite integrals are the
// caller's business (substitute, then bound the range); every routine here
// takes finite limits.

#include <functional>
#include <span>
#include <vector>

namespace gstwdp::quad {

using Integrand = std::function<double(double)>;

struct QuadPolicy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod.  The interval [a, b] is first
/// cut into `initial_panels` equal pieces so narrow peaks are not missed.
/// Throws ConvergenceError when max_subdivisions is exhausted.
QuadResult gauss_kronrod(const Integrand& f, double a, double b, const QuadPolicy& policy,
                         int initial_panels = 1);

/// Same, with explicit panel breakpoints (sorted, at least two).
QuadResult gauss_kronrod(const Integrand& f, std::span<const double> breakpoints,
                         const QuadPolicy& policy);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre_rule(int n);

/// Composite 20-point Gauss-Legendre on equal panels; the panel count is
/// doubled until two successive sums agree to the policy tolerance.
QuadResult gauss_legendre_panels(const Integrand& f, double a, double b, const QuadPolicy& policy,
                                 int initial_panels = 8);

/// Trapezoid rule over one period of a smooth periodic function, doubling the
/// node count until successive estimates agree.  Converges geometrically for
/// analytic integrands.
QuadResult periodic_trapezoid(const Integrand& f, double period, const QuadPolicy& policy,
                              int initial_nodes = 16, int max_nodes = 1 << 16);

}  // namespace gstwdp::quad
