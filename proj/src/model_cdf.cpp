// CDF of the normalized SNR y = (K+1) m gamma / gamma_0.
//
// Given the specular index j the normalized SNR is a product G W of
// independent Gamma(m, 1) and Gamma(j+1, 1) variables, so the CDF is the
// weighted sum of c_j(y) = P(G W <= y).  Two exact representations of c_j are
// used:
//   * the 1F2 closed form, accurate in relative terms for small y but subject
//     to e^{2 sqrt y} cancellation between its two halves;
//   * 1 - c_j = (2/Gamma(m)) sum_{i<=j} y^{(m+i)/2} K_{m-i}(2 sqrt y) / i!,
//     a sum of positive terms that is accurate in absolute terms everywhere.
// The complementary form is tried first; when the CDF is small the 1F2 form
// is used unless its own rounding estimate is worse.

#include "gstwdp/model.hpp"

#include "gstwdp/error.hpp"
#include "gstwdp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gstwdp::model {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Absolute rounding level of the complementary form (its terms come from
// sums of logarithms of size up to a few hundred).
constexpr double kComplementError = 1e-14;

specfun::EvalPolicy hyp_policy() {
    specfun::EvalPolicy p;
    p.rel_tol = 1e-19;
    p.max_terms = 5000;
    return p;
}

}  // namespace

double GsTwdp::cdf_normalized(double y) const {
    if (!(y >= 0.0) || std::isnan(y)) throw DomainError("cdf: argument must be >= 0");
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return 1.0;
    const double fc = cdf_complement(y);
    if (fc >= kComplementFloor) return std::clamp(fc, 0.0, 1.0);
    const HypResult h = cdf_hypergeometric_with_error(y);
    const double f = h.error < kComplementError ? h.value : fc;
    return std::clamp(f, 0.0, 1.0);
}

double GsTwdp::cdf_hypergeometric(double y) const { return cdf_hypergeometric_with_error(y).value; }

GsTwdp::HypResult GsTwdp::cdf_hypergeometric_with_error(double y) const {
    const double m = params_.m;
    const double nearest = std::round(m);
    if (std::abs(m - nearest) >= kIntegerShapeBand) return cdf_hypergeometric_at(m, y);
    // Gamma(m-j-1) and Gamma(1+j-m) have poles at integer m; the sum is
    // smooth in m, so average symmetric offsets and cancel the h^2 error.
    const double h = kIntegerShapeBand;
    auto at = [&](double mm) { return cdf_hypergeometric_at(mm, y * mm / m); };
    const HypResult a = at(m - h);
    const HypResult b = at(m + h);
    const HypResult c = at(m - 2.0 * h);
    const HypResult d = at(m + 2.0 * h);
    const double near = 0.5 * (a.value + b.value);
    const double far = 0.5 * (c.value + d.value);
    const double err = (2.0 * (a.error + b.error) + 0.5 * (c.error + d.error)) / 3.0;
    return {(4.0 * near - far) / 3.0, err};
}

GsTwdp::HypResult GsTwdp::cdf_hypergeometric_at(double m, double y) const {
    if (y == 0.0) return {};
    const specfun::EvalPolicy hp = hyp_policy();
    const long double ml = m;
    const long double yl = y;
    const long double log_y = std::log(yl);
    const long double gamma_m = std::tgamma(ml);
    const long double second_head = std::pow(yl, ml) / ml;
    long double magnitude = 0.0L;  // sum of |halves|, sets the rounding level
    auto term = [&](int j) {
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        const long double jl = j;
        const long double first = std::exp((jl + 1.0L) * log_y) / (jl + 1.0L) * specfun::gamma_signed(ml - jl - 1.0L) *
                                  specfun::hyp1f2_ld(jl + 1.0L, jl + 2.0L, jl + 2.0L - ml, yl, hp);
        const long double second =
            second_head * specfun::gamma_signed(jl + 1.0L - ml) * specfun::hyp1f2_ld(ml, ml + 1.0L, ml - jl, yl, hp);
        const long double scale = std::exp(static_cast<long double>(lw)) / (std::tgamma(jl + 1.0L) * gamma_m);
        magnitude += scale * (std::abs(first) + std::abs(second));
        return static_cast<double>(scale * (first + second));
    };
    const double value = sum_series(term, weights_.max_rate(), policy_, "cdf").value;
    constexpr long double kUlps = 64.0L * std::numeric_limits<long double>::epsilon();
    return {value, static_cast<double>(magnitude * kUlps)};
}

double GsTwdp::cdf_complement(double y) const {
    if (y == 0.0) return 0.0;
    const double m = params_.m;
    const double head = std::log(2.0) - std::lgamma(m);
    const double log_y = std::log(y);
    specfun::AbsOrderBesselKLadder bessel(-m, 2.0 * std::sqrt(y));
    long double tail = 0.0L;  // 1 - c_j
    int done = -1;
    auto term = [&](int j) {
        while (done < j) {
            ++done;
            tail += std::exp(static_cast<long double>(head + 0.5 * (m + done) * log_y +
                                                      bessel.log_value(static_cast<std::size_t>(done)) -
                                                      std::lgamma(done + 1.0)));
        }
        const double lw = weights_.log_w(j);
        if (lw == kNegInf) return 0.0;
        const double cj = std::max(0.0, static_cast<double>(1.0L - tail));
        return std::exp(lw) * cj;
    };
    return sum_series(term, weights_.max_rate(), policy_, "cdf").value;
}

}  // namespace gstwdp::model
