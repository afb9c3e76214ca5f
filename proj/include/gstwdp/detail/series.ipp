#pragma once

#include "gstwdp/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gstwdp::model {

template <class TermFn>
SeriesSum sum_series(TermFn&& term, double max_rate, const SeriesPolicy& policy, const char* what) {
    // Before the largest Poisson mode a small term says nothing about the tail.
    const double first_stop = std::ceil(max_rate);
    SeriesSum s;
    double prev = std::numeric_limits<double>::infinity();
    int small_run = 0;
    for (int j = 0; j <= policy.max_j; ++j) {
        const double t = term(j);
        s.value += t;
        s.terms = j + 1;
        if (j >= first_stop && t <= policy.rel_tol * s.value && t <= prev) {
            if (++small_run >= 3) return s;
        } else {
            small_run = 0;
        }
        prev = t;
    }
    throw ConvergenceError(std::string(what) + ": series not converged within max_j = " +
                           std::to_string(policy.max_j) + " terms");
}

}  // namespace gstwdp::model
