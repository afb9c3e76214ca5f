#include "gstwdp/perf.hpp"

#include "gstwdp/error.hpp"
#include "gstwdp/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace gstwdp::perf {

namespace {

// One exponential component c * M(s) of an approximate ASEP.
struct MgfTerm {
    double weight;
    double s;
};

std::array<MgfTerm, 3> chernoff_terms(const RqamSpec& r) {
    const double a2 = r.a * r.a;
    const double b2 = r.b * r.b;
    return {{{r.p, 0.5 * a2}, {r.q, 0.5 * b2}, {-r.p * r.q, 0.5 * (a2 + b2)}}};
}

std::array<MgfTerm, 6> chiani_terms(const RqamSpec& r) {
    const double a2 = r.a * r.a;
    const double b2 = r.b * r.b;
    const double pq = r.p * r.q;
    return {{{r.p / 6.0, 0.5 * a2},
             {r.q / 6.0, 0.5 * b2},
             {-pq / 6.0, 0.5 * (a2 + b2)},
             {r.p / 2.0, 2.0 * a2 / 3.0},
             {r.q / 2.0, 2.0 * b2 / 3.0},
             {-pq / 2.0, 2.0 * (a2 + b2) / 3.0}}};
}

template <std::size_t N>
double assemble(const std::array<MgfTerm, N>& terms, const model::GsTwdp& ch) {
    double total = 0.0;
    for (const auto& t : terms) total += t.weight * ch.mgf(t.s);
    return total;
}

template <std::size_t N>
double assemble_direct(const std::array<MgfTerm, N>& terms, const model::GsTwdp& ch) {
    const auto& prm = ch.params();
    const auto& w = ch.weights();
    const double m = prm.m;
    auto term = [&](int j) {
        const double lw = w.log_w(j);
        if (lw == -std::numeric_limits<double>::infinity()) return 0.0;
        double inner = 0.0;
        for (const auto& t : terms) {
            const double z = (prm.K + 1.0) * m / (t.s * prm.gamma0());
            inner += t.weight * specfun::tricomi_u_scaled(m, m - j, z);
        }
        return std::exp(lw) * inner;
    };
    // The bracket is positive for every j (each M-combination is a valid
    // conditional SEP average), so the non-negative series rule applies.
    return model::sum_series(term, w.max_rate(), ch.policy(), "asep").value;
}

}  // namespace

RqamSpec RqamSpec::make(int m_i, int m_q, double beta) {
    if (m_i < 2 || m_q < 2) throw DomainError("RQAM orders must be >= 2");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("RQAM beta must be finite and > 0");
    RqamSpec r;
    r.m_i = m_i;
    r.m_q = m_q;
    r.beta = beta;
    r.p = 1.0 - 1.0 / m_i;
    r.q = 1.0 - 1.0 / m_q;
    const double mi2 = static_cast<double>(m_i) * m_i;
    const double mq2 = static_cast<double>(m_q) * m_q;
    r.a = std::sqrt(6.0 / ((mi2 - 1.0) + beta * beta * (mq2 - 1.0)));
    r.b = beta * r.a;
    return r;
}

const char* to_string(QVariant v) {
    switch (v) {
        case QVariant::Exact: return "exact";
        case QVariant::Chernoff: return "chernoff";
        case QVariant::Chiani: return "chiani";
    }
    return "?";
}

double q_function(double x, QVariant v) {
    switch (v) {
        case QVariant::Exact: return specfun::gaussian_q(x);
        case QVariant::Chernoff: return 0.5 * std::exp(-0.5 * x * x);
        case QVariant::Chiani: return std::exp(-0.5 * x * x) / 12.0 + 0.25 * std::exp(-2.0 * x * x / 3.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double conditional_sep(double g, const RqamSpec& spec, QVariant v) {
    if (!(g >= 0.0) || std::isnan(g)) throw DomainError("conditional_sep: SNR must be >= 0");
    const double x = spec.a * std::sqrt(g);
    const double y = spec.b * std::sqrt(g);
    const double qx = q_function(x, v);
    const double qy = q_function(y, v);
    double cross = qx * qy;
    if (v == QVariant::Chiani) {
        const double r2 = x * x + y * y;
        cross = std::exp(-0.5 * r2) / 24.0 + std::exp(-2.0 * r2 / 3.0) / 8.0;
    }
    return 2.0 * spec.p * qx + 2.0 * spec.q * qy - 4.0 * spec.p * spec.q * cross;
}

double asep_chernoff(const RqamSpec& spec, const model::GsTwdp& channel) {
    return assemble(chernoff_terms(spec), channel);
}

double asep_chiani(const RqamSpec& spec, const model::GsTwdp& channel) { return assemble(chiani_terms(spec), channel); }

double asep_chernoff(const RqamSpec& spec, const model::ChannelParams& p, const model::SeriesPolicy& policy) {
    return asep_chernoff(spec, model::GsTwdp(p, policy));
}

double asep_chiani(const RqamSpec& spec, const model::ChannelParams& p, const model::SeriesPolicy& policy) {
    return asep_chiani(spec, model::GsTwdp(p, policy));
}

double asep_chernoff_direct(const RqamSpec& spec, const model::GsTwdp& channel) {
    return assemble_direct(chernoff_terms(spec), channel);
}

double asep_chiani_direct(const RqamSpec& spec, const model::GsTwdp& channel) {
    return assemble_direct(chiani_terms(spec), channel);
}

}  // namespace gstwdp::perf
