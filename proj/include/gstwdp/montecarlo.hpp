#pragma once

// Seeded simulation of the physical GS-TWDP model: a gamma-distributed local
// mean, two constant-amplitude waves with independent uniform phases, and a
// complex Gaussian diffuse part.
//
// Generator: std::mt19937_64 seeded with SimConfig::seed.  Uniforms take the
// top 53 bits; normals come from the Marsaglia polar method (the spare value
// is kept); gamma variates use Marsaglia-Tsang, with the u^{1/a} boost for
// shape a < 1.  Streams are bit-reproducible within this implementation only.

#include "gstwdp/model.hpp"
#include "gstwdp/perf.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace gstwdp::mc {

struct SimConfig {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    std::size_t batch = 65536;  // samples handed to a sink at a time

    void validate() const;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal();
    /// Gamma(shape, 1).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Streams envelope samples to `sink` in batches of cfg.batch.
void sample_envelope(const model::ChannelParams& p, const SimConfig& cfg,
                     const std::function<void(std::span<const double>)>& sink);
std::vector<double> sample_envelope(const model::ChannelParams& p, const SimConfig& cfg);

/// Rank-based empirical CDF: the i-th smallest sample (1-based) gets i/n.
/// Tied samples keep their distinct ranks at the same abscissa.
struct EmpiricalCdf {
    std::vector<double> x;
    std::vector<double> p;

    std::size_t size() const { return x.size(); }
    /// Right-continuous step function F^(v) = #{x_i <= v} / n.
    double operator()(double v) const;
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

/// sup |F^ - F| over the jump points of F^ (both one-sided limits).
double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& cdf);

/// Mergeable mean / variance accumulator (Welford, Chan et al. merge).
class RunningStats {
public:
    void add(double v);
    void merge(const RunningStats& o);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;  // unbiased
    double std_error() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Average of the conditional SEP at g = gamma0 r^2 / E[r^2] over simulated
/// envelopes (conditional, i.e. Rao-Blackwellized, estimation).
McEstimate asep_montecarlo(const perf::RqamSpec& spec, const model::ChannelParams& p, const SimConfig& cfg,
                           perf::QVariant v = perf::QVariant::Exact);

}  // namespace gstwdp::mc
