#include "gstwdp/model.hpp"

#include "gstwdp/error.hpp"
#include "gstwdp/specfun.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

namespace gstwdp::model {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest tolerated ratio between the sum of absolute terms and the value of
// the double sum for t_j; beyond it the phase integral takes over.
constexpr long double kCancellationLimit = 1e5L;

// The double sum needs I_n(A) unscaled; past this argument it is not attempted.
constexpr double kMaxBesselArgument = 5000.0;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// log t_j for j = first..last from the phase integral
//     t_j = (1/pi) \int_0^pi exp(-A cos a) (1 + D cos a)^j da
// by the trapezoid rule, which is exact for trigonometric polynomials below
// twice the node count and converges geometrically otherwise.  The integrand
// is positive, so there is no cancellation.  Nodes are refined until every
// requested j is stable.
std::vector<double> log_tj_trapezoid(int first, int last, double A, double D) {
    auto run = [&](int n) {
        std::vector<long double> sums(static_cast<std::size_t>(last - first + 1), 0.0L);
        for (int i = 0; i <= n; ++i) {
            const double c = std::cos(std::numbers::pi * i / n);
            const long double base = 1.0L + static_cast<long double>(D) * c;
            long double v = std::exp(-static_cast<long double>(A) * c) * ((i == 0 || i == n) ? 0.5L : 1.0L);
            v *= std::pow(base, static_cast<long double>(first));
            for (auto& s : sums) {
                s += v;
                v *= base;
            }
        }
        for (auto& s : sums) s = std::log(s / n);
        return sums;
    };
    int n = 64 + last + static_cast<int>(std::ceil(A));
    std::vector<long double> prev = run(n);
    for (int level = 0; level < 10; ++level) {
        n *= 2;
        std::vector<long double> cur = run(n);
        long double worst = 0.0L;
        for (std::size_t k = 0; k < cur.size(); ++k) worst = std::max(worst, std::abs(cur[k] - prev[k]));
        // log differences are relative errors of t_j
        if (worst < 1e-14L) return std::vector<double>(cur.begin(), cur.end());
        prev = std::move(cur);
    }
    throw ConvergenceError("tj_coefficient: phase integral did not converge");
}

}  // namespace

void ChannelParams::validate() const {
    if (!finite_nonneg(K)) throw DomainError("K must be finite and >= 0");
    if (!(gamma_ratio >= 0.0 && gamma_ratio <= 1.0)) throw DomainError("gamma ratio must lie in [0, 1]");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be finite and > 0");
    if (!(omega_s > 0.0) || !std::isfinite(omega_s)) throw DomainError("omega_s / gamma0 must be finite and > 0");
}

void SeriesPolicy::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("SeriesPolicy: rel_tol must be positive");
    if (max_j < 1) throw DomainError("SeriesPolicy: max_j must be >= 1");
}

SeriesPolicy SeriesPolicy::from_environment() {
    SeriesPolicy p;
    if (const char* env = std::getenv("GSTWDP_MAX_TERMS"); env != nullptr && *env != '\0') {
        const std::string_view sv(env);
        int v = 0;
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc() || ptr != sv.data() + sv.size() || v < 1) {
            throw DomainError("GSTWDP_MAX_TERMS must be a positive integer, got '" + std::string(sv) + "'");
        }
        p.max_j = v;
    }
    return p;
}

double delta_from_gamma(double g) { return 2.0 * g / (1.0 + g * g); }

MultipathWeights::MultipathWeights(double K, double gamma_ratio, int max_j)
    : K_(K), gamma_ratio_(gamma_ratio), delta_(delta_from_gamma(gamma_ratio)), crossover_(max_j + 1) {
    if (!finite_nonneg(K)) throw DomainError("K must be finite and >= 0");
    if (!(gamma_ratio >= 0.0 && gamma_ratio <= 1.0)) throw DomainError("gamma ratio must lie in [0, 1]");
    if (max_j < 0) throw DomainError("MultipathWeights: max_j must be >= 0");
    const auto size = static_cast<std::size_t>(max_j) + 1;
    log_t_.assign(size, 0.0);
    log_w_.assign(size, kNegInf);

    const double A = K * delta_;
    if (delta_ > 0.0) {
        int j = 0;
        if (A <= kMaxBesselArgument) {
            // I_n(A) for n = 0..max_j; I_n(-A) = (-1)^n I_n(A).
            std::vector<long double> bessel(size);
            for (std::size_t n = 0; n < size; ++n) bessel[n] = specfun::bessel_i_int_ld(static_cast<int>(n), A);
            // s_k = sum_l C(k,l) I_{2l-k}(-A), all terms of sign (-1)^k.
            std::vector<long double> s(size);
            std::vector<long double> binom(size + 1, 0.0L);
            binom[0] = 1.0L;
            for (std::size_t k = 0; k < size; ++k) {
                if (k > 0) {
                    for (std::size_t l = k; l > 0; --l) binom[l] += binom[l - 1];
                }
                long double acc = 0.0L;
                for (std::size_t l = 0; l <= k; ++l) {
                    const long d = 2 * static_cast<long>(l) - static_cast<long>(k);
                    acc += binom[l] * bessel[static_cast<std::size_t>(std::labs(d))];
                }
                s[k] = (k % 2 == 0) ? acc : -acc;
            }
            const long double half_delta = 0.5L * delta_;
            std::vector<long double> scaled(size);  // (Delta/2)^k s_k
            long double pw = 1.0L;
            for (std::size_t k = 0; k < size; ++k) {
                scaled[k] = pw * s[k];
                pw *= half_delta;
            }
            std::fill(binom.begin(), binom.end(), 0.0L);
            binom[0] = 1.0L;
            for (; j <= max_j; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (j > 0) {
                    for (std::size_t k = ju; k > 0; --k) binom[k] += binom[k - 1];
                }
                long double value = 0.0L;
                long double bound = 0.0L;
                for (std::size_t k = 0; k <= ju; ++k) {
                    const long double term = binom[k] * scaled[k];
                    value += term;
                    bound += std::abs(term);
                }
                if (!(value > 0.0L) || bound > kCancellationLimit * value || !std::isfinite(bound)) break;
                log_t_[ju] = static_cast<double>(std::log(value));
            }
        }
        crossover_ = j;
        if (j <= max_j) {
            const std::vector<double> tail = log_tj_trapezoid(j, max_j, A, delta_);
            std::copy(tail.begin(), tail.end(), log_t_.begin() + j);
        }
    }

    if (K == 0.0) {
        log_w_[0] = 0.0;
    } else {
        const double log_k = std::log(K);
        for (std::size_t j = 0; j < size; ++j) {
            const double jd = static_cast<double>(j);
            log_w_[j] = -K + jd * log_k + log_t_[j] - std::lgamma(jd + 1.0);
        }
    }
}

double MultipathWeights::t(int j) const { return std::exp(log_t(j)); }
double MultipathWeights::w(int j) const { return std::exp(log_w(j)); }

double tj_coefficient(int j, double K, double gamma_ratio) {
    if (j < 0) throw DomainError("tj_coefficient: j must be >= 0");
    return MultipathWeights(K, gamma_ratio, j).t(j);
}

GsTwdp::GsTwdp(const ChannelParams& params, const SeriesPolicy& policy)
    : params_((params.validate(), params)),
      policy_((policy.validate(), policy)),
      weights_(params.K, params.gamma_ratio, policy.max_j) {}

double GsTwdp::envelope_pdf(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("envelope_pdf: x must be finite and >= 0");
    if (x == 0.0) return 0.0;
    const double m = params_.m;
    const double c = (params_.K + 1.0) * m / params_.omega_s;
    const double log_c = std::log(c);
    const double log_x = std::log(x);
    const double head = std::log(4.0) - std::lgamma(m);
    specfun::AbsOrderBesselKLadder bessel(1.0 - m, 2.0 * x * std::sqrt(c));
    auto term = [&](int j) {
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        return std::exp(head + lw - std::lgamma(j + 1.0) + 0.5 * (m + j + 1.0) * log_c +
                        bessel.log_value(static_cast<std::size_t>(j)) + (m + j) * log_x);
    };
    return sum_series(term, weights_.max_rate(), policy_, "envelope_pdf").value;
}

double GsTwdp::snr_pdf(double g) const {
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("snr_pdf: g must be finite and >= 0");
    if (g == 0.0) return 0.0;
    const double m = params_.m;
    const double c = (params_.K + 1.0) * m / params_.gamma0();
    const double log_c = std::log(c);
    const double log_g = std::log(g);
    const double head = std::log(2.0) - std::lgamma(m);
    specfun::AbsOrderBesselKLadder bessel(1.0 - m, 2.0 * std::sqrt(g * c));
    auto term = [&](int j) {
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        return std::exp(head + lw - std::lgamma(j + 1.0) + 0.5 * (m + j + 1.0) * log_c +
                        bessel.log_value(static_cast<std::size_t>(j)) + 0.5 * (m + j - 1.0) * log_g);
    };
    return sum_series(term, weights_.max_rate(), policy_, "snr_pdf").value;
}

double GsTwdp::envelope_cdf(double x) const {
    if (!(x >= 0.0) || std::isnan(x)) throw DomainError("envelope_cdf: x must be >= 0");
    if (std::isinf(x)) return 1.0;
    return cdf_normalized((params_.K + 1.0) * params_.m * x * x / params_.omega_s);
}

double GsTwdp::snr_cdf(double g) const {
    if (!(g >= 0.0) || std::isnan(g)) throw DomainError("snr_cdf: g must be >= 0");
    if (std::isinf(g)) return 1.0;
    return cdf_normalized((params_.K + 1.0) * params_.m * g / params_.gamma0());
}

double GsTwdp::mgf(double s) const {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("mgf: s must be finite and > 0");
    const double m = params_.m;
    const double z = (params_.K + 1.0) * m / (s * params_.gamma0());
    auto term = [&](int j) {
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        return std::exp(lw) * specfun::tricomi_u_scaled(m, m - j, z);
    };
    return sum_series(term, weights_.max_rate(), policy_, "mgf").value;
}

double GsTwdp::moment(int n) const {
    if (n < 1) throw DomainError("moment: order must be >= 1");
    const double m = params_.m;
    const double half = 0.5 * n;
    const double c = (params_.K + 1.0) * m / params_.omega_s;
    const double head = std::lgamma(m + half) - std::lgamma(m) - half * std::log(c);
    auto term = [&](int j) {
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        return std::exp(lw + head + std::lgamma(1.0 + j + half) - std::lgamma(1.0 + j));
    };
    return sum_series(term, weights_.max_rate(), policy_, "moment").value;
}

double twdp_conditional_pdf(double x, double K, double gamma_ratio, double omega, const SeriesPolicy& policy) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("twdp_conditional_pdf: x must be finite and >= 0");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("twdp_conditional_pdf: omega must be > 0");
    policy.validate();
    if (x == 0.0) return 0.0;
    const MultipathWeights w(K, gamma_ratio, policy.max_j);
    const double b = (K + 1.0) / omega;
    const double log_b = std::log(b);
    const double log_x = std::log(x);
    auto term = [&](int j) {
        const double lw = w.log_w(j);
        if (lw == kNegInf) return 0.0;
        return std::exp(std::log(2.0) + lw - std::lgamma(j + 1.0) + (j + 1.0) * log_b + (2.0 * j + 1.0) * log_x -
                        x * x * b);
    };
    return sum_series(term, w.max_rate(), policy, "twdp_conditional_pdf").value;
}

double envelope_pdf(double x, const ChannelParams& p, const SeriesPolicy& policy) {
    return GsTwdp(p, policy).envelope_pdf(x);
}
double envelope_cdf(double x, const ChannelParams& p, const SeriesPolicy& policy) {
    return GsTwdp(p, policy).envelope_cdf(x);
}
double snr_pdf(double g, const ChannelParams& p, const SeriesPolicy& policy) { return GsTwdp(p, policy).snr_pdf(g); }
double snr_cdf(double g, const ChannelParams& p, const SeriesPolicy& policy) { return GsTwdp(p, policy).snr_cdf(g); }
double mgf(double s, const ChannelParams& p, const SeriesPolicy& policy) { return GsTwdp(p, policy).mgf(s); }
double moment(int n, const ChannelParams& p, const SeriesPolicy& policy) { return GsTwdp(p, policy).moment(n); }

GammaShadow match_lognormal(const LognormalShadow& l) {
    if (!(l.sigma_s > 0.0) || !std::isfinite(l.sigma_s)) throw DomainError("match_lognormal: sigma_s must be > 0");
    if (!(l.p_r > 0.0) || !std::isfinite(l.p_r)) throw DomainError("match_lognormal: P_r must be > 0");
    const double m = 1.0 / std::expm1(l.sigma_s * l.sigma_s);
    return {m, l.p_r * std::sqrt((m + 1.0) / m)};
}

double delta_gamma_convert(double value, Conversion direction) {
    if (!(value >= 0.0 && value <= 1.0)) throw DomainError("delta_gamma_convert: value must lie in [0, 1]");
    if (direction == Conversion::GammaToDelta) return delta_from_gamma(value);
    // (1 - sqrt(1 - D^2)) / D without the cancellation for small D
    return value / (1.0 + std::sqrt((1.0 - value) * (1.0 + value)));
}

SpecularDecomposition decompose(const ChannelParams& p, double omega) {
    p.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("decompose: omega must be > 0");
    SpecularDecomposition d;
    d.sigma2 = omega / (2.0 * (p.K + 1.0));
    d.v1 = std::sqrt(omega * p.K / ((p.K + 1.0) * (1.0 + p.gamma_ratio * p.gamma_ratio)));
    d.v2 = p.gamma_ratio * d.v1;
    d.omega = omega;
    return d;
}

}  // namespace gstwdp::model
