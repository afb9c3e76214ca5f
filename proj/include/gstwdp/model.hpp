#pragma once

// Closed-form statistics of the gamma-shadowed two-wave-with-diffuse-power
// (GS-TWDP) composite fading channel.
//
// Every statistic is a series over the specular index j whose weights
//     w_j = e^{-K} K^j t_j / j!
// form a probability mass function (a phase-averaged Poisson law with rate
// K(1 + Delta cos alpha)).  The series are summed term by term until the
// terms have passed the largest possible Poisson mode and stayed below
// rel_tol of the running sum for three consecutive indices.

#include <cstddef>
#include <utility>
#include <vector>

namespace gstwdp::model {

/// GS-TWDP parameter tuple.  `omega_s` is the area mean power Omega_s when an
/// envelope-domain quantity is evaluated and the average SNR gamma_0 when an
/// SNR-domain quantity is evaluated; the two are the same slot.
struct ChannelParams {
    double K = 0.0;
    double gamma_ratio = 0.0;  // V2 / V1
    double m = 1.0;
    double omega_s = 1.0;

    double gamma0() const { return omega_s; }
    void validate() const;
};

struct SpecularDecomposition {
    double v1 = 0.0;
    double v2 = 0.0;
    double sigma2 = 0.0;
    double omega = 0.0;
};

struct LognormalShadow {
    double sigma_s = 0.0;  // natural-log standard deviation
    double p_r = 1.0;      // area mean power
};

struct GammaShadow {
    double m = 0.0;
    double omega_s = 0.0;
};

struct SeriesPolicy {
    double rel_tol = 1e-10;
    int max_j = 200;

    void validate() const;
    /// Defaults with max_j taken from GSTWDP_MAX_TERMS when that is set.
    static SeriesPolicy from_environment();
};

enum class Conversion { DeltaToGamma, GammaToDelta };

double delta_from_gamma(double gamma_ratio);

/// t_j from the finite double sum over modified Bessel functions of the
/// first kind; switches to the periodic-trapezoid form of the phase integral
/// once the double sum would lose more than five significant digits to
/// cancellation.
double tj_coefficient(int j, double K, double gamma_ratio);

/// Table of log t_j and log w_j for j = 0..max_j.
class MultipathWeights {
public:
    MultipathWeights(double K, double gamma_ratio, int max_j);

    double K() const { return K_; }
    double gamma_ratio() const { return gamma_ratio_; }
    double delta() const { return delta_; }
    int max_j() const { return static_cast<int>(log_t_.size()) - 1; }
    /// Largest Poisson rate in the phase mixture, K (1 + Delta).
    double max_rate() const { return K_ * (1.0 + delta_); }

    double log_t(int j) const { return log_t_[static_cast<std::size_t>(j)]; }
    double t(int j) const;
    double log_w(int j) const { return log_w_[static_cast<std::size_t>(j)]; }
    double w(int j) const;
    /// Index where the double sum handed over to the integral form (max_j + 1 if never).
    int crossover() const { return crossover_; }

private:
    double K_;
    double gamma_ratio_;
    double delta_;
    int crossover_;
    std::vector<double> log_t_;
    std::vector<double> log_w_;
};

/// Sum of non-negative series terms with the stopping rule described at the
/// top of this header.  `term(j)` must return the j-th term.
struct SeriesSum {
    double value = 0.0;
    int terms = 0;
};

template <class TermFn>
SeriesSum sum_series(TermFn&& term, double max_rate, const SeriesPolicy& policy, const char* what);

/// The GS-TWDP distribution for one parameter set.  Construction validates
/// the parameters and tabulates t_j; evaluation is const and thread-safe.
class GsTwdp {
public:
    explicit GsTwdp(const ChannelParams& params, const SeriesPolicy& policy = {});

    const ChannelParams& params() const { return params_; }
    const SeriesPolicy& policy() const { return policy_; }
    const MultipathWeights& weights() const { return weights_; }

    double envelope_pdf(double x) const;
    double envelope_cdf(double x) const;
    double snr_pdf(double g) const;
    double snr_cdf(double g) const;
    double mgf(double s) const;
    double moment(int n) const;

    /// CDF as a function of the normalized argument y = (K+1) m x^2 / Omega_s.
    double cdf_normalized(double y) const;
    /// Closed form in 1F2 functions (with the integer-m treatment); relative
    /// accuracy for small y, degrading like e^{2 sqrt y}.
    double cdf_hypergeometric(double y) const;
    /// Complementary finite-sum form in Bessel K functions; absolute accuracy
    /// near 1e-14 for every y and much cheaper than the 1F2 form.
    double cdf_complement(double y) const;

    /// cdf_normalized trusts the complementary form at or above this value.
    static constexpr double kComplementFloor = 1e-3;
    /// Shape parameters closer than this to an integer use Richardson averaging.
    static constexpr double kIntegerShapeBand = 1e-4;

private:
    struct HypResult {
        double value = 0.0;
        double error = 0.0;  // rounding estimate
    };
    HypResult cdf_hypergeometric_with_error(double y) const;
    HypResult cdf_hypergeometric_at(double m, double y) const;

    ChannelParams params_;
    SeriesPolicy policy_;
    MultipathWeights weights_;
};

/// Conditional TWDP envelope density for a fixed local mean omega.
double twdp_conditional_pdf(double x, double K, double gamma_ratio, double omega, const SeriesPolicy& policy = {});

double envelope_pdf(double x, const ChannelParams& p, const SeriesPolicy& policy = {});
double envelope_cdf(double x, const ChannelParams& p, const SeriesPolicy& policy = {});
double snr_pdf(double g, const ChannelParams& p, const SeriesPolicy& policy = {});
double snr_cdf(double g, const ChannelParams& p, const SeriesPolicy& policy = {});
double mgf(double s, const ChannelParams& p, const SeriesPolicy& policy = {});
double moment(int n, const ChannelParams& p, const SeriesPolicy& policy = {});

GammaShadow match_lognormal(const LognormalShadow& l);
double delta_gamma_convert(double value, Conversion direction);
SpecularDecomposition decompose(const ChannelParams& p, double omega);

}  // namespace gstwdp::model

#include "gstwdp/detail/series.ipp"
