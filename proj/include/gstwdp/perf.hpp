#pragma once

// Symbol error probability of M-ary rectangular QAM, conditional on the SNR
// and averaged over GS-TWDP fading through the SNR moment generating function.

#include "gstwdp/model.hpp"

namespace gstwdp::perf {

struct RqamSpec {
    int m_i = 2;
    int m_q = 2;
    double beta = 1.0;  // d_Q / d_I
    double p = 0.5;
    double q = 0.5;
    double a = 1.0;
    double b = 1.0;

    static RqamSpec make(int m_i, int m_q, double beta);
    int order() const { return m_i * m_q; }
};

enum class QVariant { Exact, Chernoff, Chiani };

const char* to_string(QVariant v);

/// Q(x) or one of its exponential approximations.
double q_function(double x, QVariant v);

/// SEP in AWGN at linear SNR g.  The Chiani variant uses the product form
/// Q(x)Q(y) ~ e^{-(x^2+y^2)/2}/24 + e^{-2(x^2+y^2)/3}/8 so that averaging it
/// over the fading yields exactly the six-MGF combination of asep_chiani.
double conditional_sep(double g, const RqamSpec& spec, QVariant v);

/// MGF-based approximations of the average SEP.
double asep_chernoff(const RqamSpec& spec, const model::GsTwdp& channel);
double asep_chiani(const RqamSpec& spec, const model::GsTwdp& channel);
double asep_chernoff(const RqamSpec& spec, const model::ChannelParams& p, const model::SeriesPolicy& policy = {});
double asep_chiani(const RqamSpec& spec, const model::ChannelParams& p, const model::SeriesPolicy& policy = {});

/// The same approximations summed as one series over j with all Tricomi
/// terms inside; a cross-check of the MGF assembly.
double asep_chernoff_direct(const RqamSpec& spec, const model::GsTwdp& channel);
double asep_chiani_direct(const RqamSpec& spec, const model::GsTwdp& channel);

}  // namespace gstwdp::perf
