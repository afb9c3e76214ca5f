#include "gstwdp/error.hpp"
#include "gstwdp/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace gstwdp::specfun {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr long double kLdEps = 1e-20L;
constexpr int kMaxIterations = 100000;

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2,
// with |mu| <= 1/2.  Near mu = 0 gam1 comes from the Taylor coefficients of 1/Gamma.
struct TemmeGammas {
    long double gam1;
    long double gam2;
    long double gampl;  // 1/Gamma(1+mu)
    long double gammi;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(long double mu) {
    TemmeGammas g{};
    g.gampl = 1.0L / std::tgamma(1.0L + mu);
    g.gammi = 1.0L / std::tgamma(1.0L - mu);
    g.gam2 = 0.5L * (g.gammi + g.gampl);
    if (std::abs(mu) >= 1e-3L) {
        g.gam1 = (g.gammi - g.gampl) / (2.0L * mu);
    } else {
        const long double mu2 = mu * mu;
        g.gam1 = -(kEulerGamma + mu2 * (-0.0420026350340952355290039348754298L +
                                        mu2 * -0.0421977345555443367482083012891874L));
    }
    return g;
}

// log K_mu(x) and log K_{mu+1}(x) for |mu| <= 1/2.
std::pair<double, double> log_k_pair(long double mu, long double x) {
    const long double mu2 = mu * mu;
    if (x < 2.0L) {
        const long double x2 = 0.5L * x;
        const long double pimu = kPi * mu;
        const long double fact = std::abs(pimu) < kLdEps ? 1.0L : pimu / std::sin(pimu);
        long double d = -std::log(x2);
        long double e = mu * d;
        const long double fact2 = std::abs(e) < kLdEps ? 1.0L : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(mu);
        long double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
        long double sum = ff;
        e = std::exp(e);
        long double p = 0.5L * e / g.gampl;
        long double q = 0.5L / (e * g.gammi);
        long double c = 1.0L;
        d = x2 * x2;
        long double sum1 = p;
        for (int i = 1; i <= kMaxIterations; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<long double>(i) - mu2);
            c *= d / i;
            p /= (i - mu);
            q /= (i + mu);
            const long double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::abs(del) < std::abs(sum) * kLdEps) break;
        }
        return {static_cast<double>(std::log(sum)), static_cast<double>(std::log(sum1 * 2.0L / x))};
    }

    // Steed's method for the continued fraction CF2 (Temme's normalization).
    long double b = 2.0L * (1.0L + x);
    long double d = 1.0L / b;
    long double h = d;
    long double delh = d;
    long double q1 = 0.0L;
    long double q2 = 1.0L;
    const long double a1 = 0.25L - mu2;
    long double q = a1;
    long double c = a1;
    long double a = -a1;
    long double s = 1.0L + q * delh;
    int i = 2;
    for (; i <= kMaxIterations; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const long double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0L;
        d = 1.0L / (b + a * d);
        delh = (b * d - 1.0L) * delh;
        h += delh;
        const long double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kLdEps) break;
    }
    if (i > kMaxIterations) throw ConvergenceError("bessel_k: continued fraction did not converge");
    h = a1 * h;
    const long double log_kmu = 0.5L * std::log(kPi / (2.0L * x)) - x - std::log(s);
    const long double log_k1 = log_kmu + std::log((mu + x + 0.5L - h) / x);
    return {static_cast<double>(log_kmu), static_cast<double>(log_k1)};
}

}  // namespace

BesselKLadder::BesselKLadder(double nu0, double x) : nu0_(nu0), x_(x) {
    if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive, got " + std::to_string(x));
    if (!(nu0 >= 0.0) || !std::isfinite(nu0)) throw DomainError("BesselKLadder: starting order must be >= 0");
    const double n0 = std::floor(nu0 + 0.5);
    const long double mu = static_cast<long double>(nu0) - n0;
    auto [lk, lk1] = log_k_pair(mu, x);
    long double ratio = std::exp(static_cast<long double>(lk1) - lk);
    long double log_k = lk;
    for (long k = 0; k < static_cast<long>(n0); ++k) {
        log_k += std::log(ratio);
        ratio = 1.0L / ratio + 2.0L * (mu + k + 1) / x;
    }
    log_k_.push_back(static_cast<double>(log_k));
    ratio_ = static_cast<double>(ratio);
}

void BesselKLadder::extend_to(std::size_t i) {
    long double ratio = ratio_;
    long double log_k = log_k_.back();
    while (log_k_.size() <= i) {
        const long double order = static_cast<long double>(nu0_) + (log_k_.size() - 1);
        log_k += std::log(ratio);
        log_k_.push_back(static_cast<double>(log_k));
        ratio = 1.0L / ratio + 2.0L * (order + 1.0L) / x_;
    }
    ratio_ = static_cast<double>(ratio);
}

double BesselKLadder::log_value(std::size_t i) {
    if (i >= log_k_.size()) extend_to(i);
    return log_k_[i];
}

AbsOrderBesselKLadder::AbsOrderBesselKLadder(double nu0, double x) : nu0_(nu0) {
    if (nu0 >= 0.0) {
        high_.emplace(nu0, x);
        return;
    }
    const double a = -nu0;
    const double whole = std::floor(a);
    const double frac = a - whole;
    split_ = static_cast<long>(whole);
    low_.emplace(frac, x);
    high_.emplace(1.0 - frac, x);
}

double AbsOrderBesselKLadder::log_value(std::size_t i) {
    const long idx = static_cast<long>(i);
    if (split_ < 0) return high_->log_value(i);
    if (idx <= split_) return low_->log_value(static_cast<std::size_t>(split_ - idx));
    return high_->log_value(static_cast<std::size_t>(idx - split_ - 1));
}

double log_bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive, got " + std::to_string(x));
    BesselKLadder ladder(std::abs(nu), x);
    return ladder.log_value(0);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

long double bessel_i_int_ld(int n, long double x) {
    const int order = std::abs(n);
    if (x == 0.0L) return order == 0 ? 1.0L : 0.0L;
    const long double ax = std::abs(x);
    const long double half = 0.5L * ax;
    long double term = std::exp(order * std::log(half) - std::lgamma(static_cast<long double>(order) + 1.0L));
    long double sum = term;
    const long double q = half * half;
    for (int k = 0; k < kMaxIterations; ++k) {
        term *= q / ((k + 1.0L) * (order + k + 1.0L));
        sum += term;
        if (term <= sum * kLdEps) break;
    }
    return (x < 0.0L && (order % 2 == 1)) ? -sum : sum;
}

double bessel_i_int(int n, double x) { return static_cast<double>(bessel_i_int_ld(n, x)); }

}  // namespace gstwdp::specfun
