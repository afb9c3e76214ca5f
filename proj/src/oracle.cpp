#include "gstwdp/oracle.hpp"

#include "gstwdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace gstwdp::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
// Integrands are cut where they fall this many e-folds below their peak.
constexpr double kDrop = 46.0;
constexpr double kWalkStep = 0.25;

using LogFn = std::function<double(double)>;

double integrate(const quad::Integrand& f, double a, double b, const quad::QuadPolicy& q, Rule rule, int panels) {
    if (rule == Rule::Kronrod) return quad::gauss_kronrod(f, a, b, q, panels).value;
    return quad::gauss_legendre_panels(f, a, b, q, panels).value;
}

// log(e^{-t} I_0(t)) for t >= 0: libstdc++ below the overflow region and
// the Hankel asymptotic series above it.
double log_i0_scaled(double t) {
    if (t == 0.0) return 0.0;
    if (t < 700.0) return std::log(std::cyl_bessel_i(0.0, t)) - t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 12; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (k * 8.0 * t);
        sum += term;
    }
    return -0.5 * std::log(2.0 * kPi * t) + std::log(sum);
}

double log_rice(double x, double s, double sigma2) {
    const double d = x - s;
    return std::log(x / sigma2) - d * d / (2.0 * sigma2) + log_i0_scaled(x * s / sigma2);
}

// log of the mean of exp(g(alpha)) over a period when g is even about 0:
// trapezoid on [0, pi] in log-sum-exp form, doubling until stable.
double log_phase_mean(const LogFn& g) {
    constexpr int kFirst = 8;
    // the first grid's end points sit at indices 0 and kFirst; midpoints of
    // later levels are appended behind them
    std::vector<double> vals;
    for (int i = 0; i <= kFirst; ++i) vals.push_back(g(kPi * i / kFirst));
    auto estimate = [&](int intervals) {
        const double peak = *std::max_element(vals.begin(), vals.end());
        if (peak == kNegInf) return kNegInf;
        long double s = 0.0L;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const long double e = std::exp(static_cast<long double>(vals[i] - peak));
            s += (i == 0 || i == kFirst) ? 0.5L * e : e;
        }
        return peak + static_cast<double>(std::log(s / intervals));
    };
    int n = kFirst;
    double prev = estimate(n);
    for (int level = 0; level < 14; ++level) {
        for (int i = 0; i < n; ++i) vals.push_back(g(kPi * (2 * i + 1) / (2 * n)));
        n *= 2;
        const double cur = estimate(n);
        if (cur == kNegInf || std::abs(cur - prev) < 1e-14 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw ConvergenceError("oracle: phase average did not converge");
}

double log_conditional(double x, double K, double gamma_ratio, double omega, Conditional c) {
    switch (c) {
        case Conditional::Rayleigh: return std::log(2.0 * x / omega) - x * x / omega;
        case Conditional::Rician: {
            const double sigma2 = omega / (2.0 * (K + 1.0));
            return log_rice(x, std::sqrt(omega * K / (K + 1.0)), sigma2);
        }
        case Conditional::Twdp: {
            const double sigma2 = omega / (2.0 * (K + 1.0));
            const double v1 = std::sqrt(omega * K / ((K + 1.0) * (1.0 + gamma_ratio * gamma_ratio)));
            const double v2 = gamma_ratio * v1;
            if (v2 == 0.0) return log_rice(x, v1, sigma2);
            return log_phase_mean([&](double a) {
                const double s2 = v1 * v1 + v2 * v2 + 2.0 * v1 * v2 * std::cos(a);
                return log_rice(x, std::sqrt(std::max(s2, 0.0)), sigma2);
            });
        }
    }
    return kNegInf;
}

struct Window {
    double lo = 0.0;
    double hi = 0.0;
    double peak = kNegInf;
};

// Scan [a, b] for the peak of logf, then walk outwards until it has dropped
// by kDrop.  The right end is pinned at b when clip_right is set.
Window locate(const LogFn& logf, double a, double b, bool clip_right = false) {
    Window w;
    constexpr int kGrid = 160;
    double best_u = a;
    for (int i = 0; i <= kGrid; ++i) {
        const double u = a + (b - a) * i / kGrid;
        const double v = logf(u);
        if (v > w.peak) {
            w.peak = v;
            best_u = u;
        }
    }
    if (w.peak == kNegInf) return w;
    double lo = best_u;
    for (int i = 0; i < 4000; ++i) {
        lo -= kWalkStep;
        const double v = logf(lo);
        w.peak = std::max(w.peak, v);
        if (v < w.peak - kDrop) break;
    }
    double hi = best_u;
    if (clip_right) {
        hi = b;
    } else {
        for (int i = 0; i < 4000; ++i) {
            hi += kWalkStep;
            const double v = logf(hi);
            w.peak = std::max(w.peak, v);
            if (v < w.peak - kDrop) break;
        }
    }
    w.lo = lo;
    w.hi = hi;
    return w;
}

double integrate_log(const LogFn& logf, const Window& w, const quad::QuadPolicy& q, Rule rule) {
    if (w.peak == kNegInf || !(w.hi > w.lo)) return 0.0;
    const int panels = std::clamp(static_cast<int>(std::ceil((w.hi - w.lo) / kWalkStep)), 8, 400);
    const double peak = w.peak;
    const double v = integrate([&](double u) { return std::exp(logf(u) - peak); }, w.lo, w.hi, q, rule, panels);
    return v * std::exp(peak);
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

}  // namespace

double tj_integral(int j, double K, double gamma_ratio, const quad::QuadPolicy& q, Rule rule) {
    if (j < 0) throw DomainError("tj_integral: j must be >= 0");
    if (!(K >= 0.0) || !std::isfinite(K)) throw DomainError("tj_integral: K must be >= 0");
    if (!(gamma_ratio >= 0.0 && gamma_ratio <= 1.0)) throw DomainError("tj_integral: gamma ratio in [0, 1]");
    const double D = 2.0 * gamma_ratio / (1.0 + gamma_ratio * gamma_ratio);
    const double A = K * D;
    auto phi = [&](double c) {
        const double base = 1.0 + D * c;
        double v = -A * c;
        if (j > 0) v += base > 0.0 ? j * std::log(base) : kNegInf;
        return v;
    };
    // phi is concave in c = cos(alpha); its maximum on [-1, 1]:
    double c_star = -1.0;
    if (j > 0 && D > 0.0) c_star = A > 0.0 ? std::clamp(j / A - 1.0 / D, -1.0, 1.0) : 1.0;
    const double peak = phi(c_star);
    const double v =
        integrate([&](double a) { return std::exp(phi(std::cos(a)) - peak); }, 0.0, 2.0 * kPi, q, rule, 16);
    return std::exp(peak) * v / (2.0 * kPi);
}

double conditional_pdf(double x, double K, double gamma_ratio, double omega, Conditional c) {
    if (!(x >= 0.0)) throw DomainError("conditional_pdf: x must be >= 0");
    if (!(omega > 0.0)) throw DomainError("conditional_pdf: omega must be > 0");
    if (x == 0.0) return 0.0;
    return std::exp(log_conditional(x, K, gamma_ratio, omega, c));
}

double mixture_pdf(double x, const model::ChannelParams& p, Conditional c, const quad::QuadPolicy& q, Rule rule) {
    p.validate();
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("mixture_pdf: x must be finite and >= 0");
    if (x == 0.0) return 0.0;
    const double m = p.m;
    const double rate = m / p.omega_s;
    const double head = m * std::log(rate) - std::lgamma(m);
    // integrand in u = ln(omega): conditional(x | e^u) * gamma density * e^u
    LogFn logf = [&](double u) {
        const double w = std::exp(u);
        if (w == 0.0 || !std::isfinite(w)) return kNegInf;
        return log_conditional(x, p.K, p.gamma_ratio, w, c) + head + m * u - rate * w;
    };
    const double centre = std::log(p.omega_s);
    const double a = std::min(centre - 60.0 / m, 2.0 * std::log(x)) - 10.0;
    const double b = std::max(centre + 10.0, 2.0 * std::log(x) + 10.0);
    return integrate_log(logf, locate(logf, a, b), q, rule);
}

double k_distribution_pdf(double x, double omega_s) {
    if (!(x >= 0.0)) throw DomainError("k_distribution_pdf: x must be >= 0");
    if (!(omega_s > 0.0)) throw DomainError("k_distribution_pdf: omega_s must be > 0");
    if (x == 0.0) return 0.0;
    return 4.0 * x / omega_s * std::cyl_bessel_k(0.0, 2.0 * x / std::sqrt(omega_s));
}

double cdf_by_integration(double v, const model::ChannelParams& p, Domain d, const quad::QuadPolicy& q, Rule rule) {
    if (!(v >= 0.0) || std::isnan(v)) throw DomainError("cdf_by_integration: argument must be >= 0");
    if (v == 0.0) return 0.0;
    const model::GsTwdp ch(p);
    const double m = p.m;
    LogFn logf;
    double scale;
    double decay;  // growth rate of the integrand in u near the origin
    if (d == Domain::Envelope) {
        logf = [&](double u) { return safe_log(ch.envelope_pdf(std::exp(u))) + u; };
        scale = 0.5 * std::log(p.omega_s);
        decay = std::min(2.0 * m, 2.0);
    } else {
        logf = [&](double u) { return safe_log(ch.snr_pdf(std::exp(u))) + u; };
        scale = std::log(p.gamma0());
        decay = std::min(m, 1.0);
    }
    const double top = std::log(v);
    const double a = std::min(top, scale) - kDrop / decay - 5.0;
    return integrate_log(logf, locate(logf, a, top, true), q, rule);
}

double mgf_by_laplace(double s, const model::ChannelParams& p, const quad::QuadPolicy& q, Rule rule) {
    if (!(s > 0.0)) throw DomainError("mgf_by_laplace: s must be > 0");
    const model::GsTwdp ch(p);
    LogFn logf = [&](double u) {
        const double g = std::exp(u);
        return safe_log(ch.snr_pdf(g)) + u - s * g;
    };
    const double centre = std::log(p.gamma0());
    const double a = centre - kDrop / std::min(p.m, 1.0) - 5.0;
    return integrate_log(logf, locate(logf, a, centre + 5.0), q, rule);
}

double asep_by_quadrature(const perf::RqamSpec& spec, const model::ChannelParams& p, perf::QVariant v,
                          const quad::QuadPolicy& q, Rule rule) {
    const model::GsTwdp ch(p);
    LogFn logf = [&](double u) {
        const double g = std::exp(u);
        return safe_log(perf::conditional_sep(g, spec, v)) + safe_log(ch.snr_pdf(g)) + u;
    };
    const double centre = std::log(p.gamma0());
    const double a = centre - kDrop / std::min(p.m, 1.0) - 5.0;
    return integrate_log(logf, locate(logf, a, centre + 5.0), q, rule);
}

double rayleigh_qpsk_asep(double gamma0) {
    if (!(gamma0 >= 0.0)) throw DomainError("rayleigh_qpsk_asep: gamma0 must be >= 0");
    const double mu = std::sqrt(gamma0 / (gamma0 + 2.0));
    if (mu == 0.0) return 0.75;
    return 0.75 - mu + mu / kPi * std::atan(1.0 / mu);
}

}  // namespace gstwdp::oracle
