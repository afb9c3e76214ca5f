#pragma once

// Quadrature references for the closed forms.  Nothing here is fast; each
// routine integrates a defining formula directly so that the series in
// model.hpp can be checked against something that shares none of their
// algebra.
//
// The conditional TWDP density is evaluated as a Rician density averaged over
// the phase difference of the two specular waves, so the t_j coefficients are
// never used.  Every routine accepts a Rule so two unrelated quadrature
// schemes can be compared against each other.

#include "gstwdp/model.hpp"
#include "gstwdp/perf.hpp"
#include "gstwdp/quadrature.hpp"

namespace gstwdp::oracle {

enum class Conditional { Twdp, Rician, Rayleigh };
enum class Domain { Envelope, Snr };
enum class Rule { Kronrod, Legendre };

/// t_j as the phase integral over [0, 2 pi].
double tj_integral(int j, double K, double gamma_ratio, const quad::QuadPolicy& q = {}, Rule rule = Rule::Kronrod);

/// Phase-averaged Rician density for local mean omega.  With Rician the
/// second wave is dropped (gamma ratio ignored), with Rayleigh K is ignored.
double conditional_pdf(double x, double K, double gamma_ratio, double omega, Conditional c);

/// Envelope density by integrating conditional x gamma over the local mean.
double mixture_pdf(double x, const model::ChannelParams& p, Conditional c, const quad::QuadPolicy& q = {},
                   Rule rule = Rule::Kronrod);

/// Gamma-shadowed Rayleigh density for m = 1 in closed form (K distribution).
double k_distribution_pdf(double x, double omega_s);

/// Integral of the closed-form density from 0 to v.
double cdf_by_integration(double v, const model::ChannelParams& p, Domain d, const quad::QuadPolicy& q = {},
                          Rule rule = Rule::Kronrod);

/// Laplace transform of the closed-form SNR density.
double mgf_by_laplace(double s, const model::ChannelParams& p, const quad::QuadPolicy& q = {},
                      Rule rule = Rule::Kronrod);

/// Conditional SEP averaged against the closed-form SNR density.
double asep_by_quadrature(const perf::RqamSpec& spec, const model::ChannelParams& p,
                          perf::QVariant v = perf::QVariant::Exact, const quad::QuadPolicy& q = {},
                          Rule rule = Rule::Kronrod);

/// Textbook QPSK (2x2, beta = 1) average SEP over Rayleigh fading.
double rayleigh_qpsk_asep(double gamma0);

}  // namespace gstwdp::oracle
