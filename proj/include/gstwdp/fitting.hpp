#pragma once

// Fitting GS-TWDP parameters to an empirical envelope CDF by minimizing
//     eps = max |log10 F^(x) - log10 F(x)|
// over the empirical support, both CDFs floored before the logarithm.
// A deterministic coarse grid over (K, Gamma, m) with Omega_s at the sample
// second moment is followed by Nelder-Mead on (K, Gamma, log m, log Omega_s).

#include "gstwdp/model.hpp"
#include "gstwdp/montecarlo.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gstwdp::fit {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct FitConfig {
    Range K{0.0, 50.0};
    Range gamma_ratio{0.0, 1.0};
    Range m{0.5, 50.0};
    /// Omega_s may move within [moment / spread, moment * spread].
    double omega_spread = 4.0;
    int grid_points = 11;  // per axis of the coarse (K, Gamma, m) grid
    int refine_iterations = 300;
    int refine_starts = 3;  // best grid points used as simplex seeds
    double floor = 1e-4;
    /// Cap on support points scored during the search (0 = all).  The final
    /// epsilon is always computed on every support point.
    std::size_t max_eval_points = 1000;
    model::SeriesPolicy series{};

    void validate() const;
};

struct FitDiagnostics {
    std::size_t grid_evaluations = 0;
    std::size_t grid_failures = 0;
    std::size_t refine_evaluations = 0;
    std::size_t eval_points = 0;        // support points used during the search
    double omega_moment = 0.0;          // second moment of the data
    double grid_epsilon = 0.0;          // best grid value on the search subset
    double refined_epsilon = 0.0;       // best refined value on the search subset
    std::vector<double> refinement_trace;  // best value after each simplex iteration
    std::vector<std::string> warnings;
};

struct FitResult {
    model::ChannelParams params;
    double epsilon = 0.0;
    FitDiagnostics diagnostics;
};

double ks_error(const mc::EmpiricalCdf& emp, const model::ChannelParams& p, const FitConfig& cfg = {});

FitResult fit(const mc::EmpiricalCdf& emp, const FitConfig& cfg = {});

/// Empirical CDF from digitized (amplitude, probability) pairs.  Amplitudes
/// are sorted; probabilities must be non-decreasing in amplitude and lie in
/// (0, 1].
mc::EmpiricalCdf empirical_from_pairs(std::vector<double> x, std::vector<double> p);

}  // namespace gstwdp::fit
