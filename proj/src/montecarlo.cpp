#include "gstwdp/montecarlo.hpp"

#include "gstwdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gstwdp::mc {

void SimConfig::validate() const {
    if (n_samples < 1) throw DomainError("SimConfig: n_samples must be >= 1");
    if (batch < 1) throw DomainError("SimConfig: batch must be >= 1");
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u;
    double v;
    double s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma variate: shape must be > 0");
    if (shape < 1.0) {
        // G(a) = G(a + 1) U^{1/a}; 1 - uniform() avoids U = 0
        const double g = gamma(shape + 1.0);
        return g * std::pow(1.0 - uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void sample_envelope(const model::ChannelParams& p, const SimConfig& cfg,
                     const std::function<void(std::span<const double>)>& sink) {
    p.validate();
    cfg.validate();
    Rng rng(cfg.seed);
    const double two_pi = 2.0 * std::numbers::pi;
    const double scale = p.omega_s / p.m;
    // per unit local mean; the draw below rescales by sqrt(omega)
    const model::SpecularDecomposition unit = model::decompose(p, 1.0);
    const double sigma = std::sqrt(unit.sigma2);
    std::vector<double> buf;
    buf.reserve(std::min(cfg.batch, cfg.n_samples));
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
        const double omega = rng.gamma(p.m) * scale;
        const double root = std::sqrt(omega);
        const double phi1 = two_pi * rng.uniform();
        const double phi2 = two_pi * rng.uniform();
        const double n1 = rng.normal();
        const double n2 = rng.normal();
        const double re = root * (unit.v1 * std::cos(phi1) + unit.v2 * std::cos(phi2) + sigma * n1);
        const double im = root * (unit.v1 * std::sin(phi1) + unit.v2 * std::sin(phi2) + sigma * n2);
        buf.push_back(std::hypot(re, im));
        if (buf.size() == cfg.batch) {
            sink(buf);
            buf.clear();
        }
    }
    if (!buf.empty()) sink(buf);
}

std::vector<double> sample_envelope(const model::ChannelParams& p, const SimConfig& cfg) {
    std::vector<double> out;
    out.reserve(cfg.n_samples);
    sample_envelope(p, cfg, [&](std::span<const double> b) { out.insert(out.end(), b.begin(), b.end()); });
    return out;
}

double EmpiricalCdf::operator()(double v) const {
    if (x.empty()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    return static_cast<double>(it - x.begin()) / static_cast<double>(x.size());
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) {
    if (samples.empty()) throw DomainError("empirical_cdf: no samples");
    for (double v : samples) {
        if (!std::isfinite(v)) throw DomainError("empirical_cdf: samples must be finite");
    }
    std::sort(samples.begin(), samples.end());
    EmpiricalCdf e;
    const double n = static_cast<double>(samples.size());
    e.p.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) e.p[i] = static_cast<double>(i + 1) / n;
    e.x = std::move(samples);
    return e;
}

double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf) {
    const std::size_t n = emp.size();
    double d = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t k = i;
        while (k + 1 < n && emp.x[k + 1] == emp.x[i]) ++k;
        const double f = cdf(emp.x[i]);
        const double below = static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, std::abs(emp.p[k] - f), std::abs(f - below)});
        i = k + 1;
    }
    return d;
}

void RunningStats::add(double v) {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double delta = o.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * nb / n;
    m2_ += o.m2_ + delta * delta * na * nb / n;
    n_ += o.n_;
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double RunningStats::std_error() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

McEstimate asep_montecarlo(const perf::RqamSpec& spec, const model::ChannelParams& p, const SimConfig& cfg,
                           perf::QVariant v) {
    // With the omega slot read as gamma0, E[r^2] = gamma0 and g = r^2.
    RunningStats total;
    sample_envelope(p, cfg, [&](std::span<const double> batch) {
        RunningStats part;
        for (double r : batch) part.add(perf::conditional_sep(r * r, spec, v));
        total.merge(part);
    });
    return {total.mean(), total.std_error(), total.count()};
}

}  // namespace gstwdp::mc
