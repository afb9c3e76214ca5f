#include "gstwdp/specfun.hpp"

#include "gstwdp/error.hpp"
#include "gstwdp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gstwdp::specfun {

namespace {

bool is_nonpositive_integer(long double b) { return b <= 0.0L && b == std::nearbyint(b); }

}  // namespace

void EvalPolicy::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("EvalPolicy: rel_tol must be positive");
    if (max_terms < 1) throw DomainError("EvalPolicy: max_terms must be >= 1");
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive, got " + std::to_string(x));
    return std::lgamma(x);
}

long double gamma_signed(long double x) {
    if (is_nonpositive_integer(x)) throw PoleError("gamma: pole at " + std::to_string(static_cast<double>(x)));
    return std::tgamma(x);
}

long double hyp1f2_ld(long double a, long double b1, long double b2, long double z, const EvalPolicy& policy) {
    policy.validate();
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2)) {
        throw PoleError("hyp1f2: denominator parameter is a non-positive integer");
    }
    // The Pochhammer symbols in the denominator change sign until k passes
    // -b; stopping is not allowed before that point.
    const long double last_sign_change = std::max({0.0L, -b1, -b2});
    const long double tol = policy.rel_tol;
    long double term = 1.0L;
    long double sum = 1.0L;
    int small_run = 0;
    for (int k = 0; k < policy.max_terms; ++k) {
        term *= (a + k) / ((b1 + k) * (b2 + k)) * z / (k + 1.0L);
        sum += term;
        if (term == 0.0L) return sum;
        if (std::abs(term) <= tol * std::abs(sum) && k + 1 > last_sign_change) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("hyp1f2: no convergence within " + std::to_string(policy.max_terms) + " terms");
}

double hyp1f2(double a, double b1, double b2, double z, const EvalPolicy& policy) {
    return static_cast<double>(hyp1f2_ld(a, b1, b2, z, policy));
}

namespace {

// log of the integrand of z^a U(a,b,z) after tau = e^u, without the 1/Gamma(a).
struct TricomiIntegrand {
    double a;
    double c;  // b - a - 1
    double z;
    double phi(double u) const { return -std::exp(u) + a * u + c * std::log1p(std::exp(u) / z); }
    double dphi(double u) const {
        const double t = std::exp(u);
        return -t + a + c * t / (z + t);
    }
};

double log_tricomi_u_scaled(double a, double b, double z) {
    if (!(a > 0.0)) throw DomainError("tricomi_u: requires a > 0");
    if (!(z > 0.0)) throw DomainError("tricomi_u: requires z > 0");
    if (b == a + 1.0) return 0.0;

    const TricomiIntegrand g{a, b - a - 1.0, z};
    // dphi is positive for u -> -inf and negative for u -> +inf, with a single root.
    double lo = std::log(a) - 1.0;
    while (g.dphi(lo) <= 0.0) lo -= 2.0;
    double hi = std::log(a) + 1.0;
    while (g.dphi(hi) >= 0.0) hi += 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g.dphi(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mode = 0.5 * (lo + hi);
    const double peak = g.phi(mode);
    constexpr double kDrop = 50.0;

    // Curvature sets the step used to walk out to the cut-off points.
    const double t = std::exp(mode);
    const double curvature = t - g.c * t * z / ((z + t) * (z + t));
    const double width = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
    const double step = std::clamp(width, 1e-3, 1.0);
    double left = mode - step;
    while (g.phi(left) > peak - kDrop) left -= step * 2.0;
    double right = mode + step;
    while (g.phi(right) > peak - kDrop) right += step;

    const int panels = static_cast<int>(std::clamp((right - left) / width, 4.0, 64.0));
    quad::QuadPolicy policy;
    policy.abs_tol = 1e-300;
    policy.rel_tol = 1e-13;
    policy.max_subdivisions = 4000;
    auto f = [&](double u) { return std::exp(g.phi(u) - peak); };
    quad::QuadResult r;
    try {
        r = quad::gauss_kronrod(f, left, right, policy, panels);
    } catch (const ConvergenceError&) {
        policy.rel_tol = 1e-11;
        r = quad::gauss_kronrod(f, left, right, policy, panels);
    }
    return peak + std::log(r.value) - std::lgamma(a);
}

}  // namespace

double tricomi_u_scaled(double a, double b, double z) { return std::exp(log_tricomi_u_scaled(a, b, z)); }

double tricomi_u(double a, double b, double z) { return std::exp(log_tricomi_u_scaled(a, b, z) - a * std::log(z)); }

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace gstwdp::specfun
