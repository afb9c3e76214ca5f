#include "gstwdp/fitting.hpp"

#include "gstwdp/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace gstwdp::fit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Support {
    std::vector<double> x;
    std::vector<double> p;  // F^ at x (right limit)
};

Support unique_support(const mc::EmpiricalCdf& emp) {
    Support s;
    const std::size_t n = emp.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && emp.x[i + 1] == emp.x[i]) continue;
        s.x.push_back(emp.x[i]);
        s.p.push_back(emp.p[i]);
    }
    return s;
}

// Dense in the low ranks, where the log10 metric is most sensitive, plus an
// even spread over the rest.
Support thin(const Support& s, std::size_t cap) {
    const std::size_t n = s.x.size();
    if (cap == 0 || n <= cap) return s;
    std::set<std::size_t> keep;
    const std::size_t half = cap / 2;
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t i = 0; i < half; ++i) {
        const double r = std::exp(log_n * static_cast<double>(i) / static_cast<double>(half - 1));
        keep.insert(std::min(n - 1, static_cast<std::size_t>(r) - 1));
    }
    for (std::size_t i = 0; i < cap - half; ++i) keep.insert(i * (n - 1) / (cap - half - 1));
    Support out;
    for (std::size_t i : keep) {
        out.x.push_back(s.x[i]);
        out.p.push_back(s.p[i]);
    }
    return out;
}

double second_moment(const mc::EmpiricalCdf& emp) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < emp.size(); ++i) {
        acc += emp.x[i] * emp.x[i] * (emp.p[i] - prev);
        prev = emp.p[i];
    }
    return acc / prev;
}

// The complementary CDF form is absolutely accurate to ~1e-14, far below
// the floor, and much cheaper than the full evaluation.
double score(const Support& s, const model::ChannelParams& p, const FitConfig& cfg) {
    const model::GsTwdp ch(p, cfg.series);
    const double log_floor = std::log10(cfg.floor);
    const double c = (p.K + 1.0) * p.m / p.omega_s;
    double eps = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double fe = std::max(std::log10(s.p[i]), log_floor);
        const double f = ch.cdf_complement(c * s.x[i] * s.x[i]);
        const double fm = f > cfg.floor ? std::log10(f) : log_floor;
        eps = std::max(eps, std::abs(fe - fm));
    }
    return eps;
}

// Search coordinates: (K, Gamma, log m, log Omega), clamped into the box.
using Point = std::array<double, 4>;

struct Box {
    Point lo;
    Point hi;
    Point clamp(Point v) const {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
        return v;
    }
    static model::ChannelParams params(const Point& v) { return {v[0], v[1], std::exp(v[2]), std::exp(v[3])}; }
};

struct Objective {
    const Support& support;
    const FitConfig& cfg;
    const Box& box;
    std::size_t evaluations = 0;
    double operator()(const Point& v) {
        ++evaluations;
        try {
            return score(support, Box::params(box.clamp(v)), cfg);
        } catch (const std::exception&) {
            return kInf;
        }
    }
};

struct Vertex {
    Point x;
    double f;
};

Vertex nelder_mead(Objective& obj, const Point& start, double start_f, const Point& step, int iterations,
                   std::vector<double>& trace) {
    constexpr std::size_t kDim = 4;
    std::array<Vertex, kDim + 1> s;
    s[0] = {start, start_f};
    for (std::size_t i = 0; i < kDim; ++i) {
        Point x = start;
        x[i] += step[i];
        x = obj.box.clamp(x);
        if (x[i] == start[i]) x[i] = obj.box.clamp([&] { Point y = start; y[i] -= step[i]; return y; }())[i];
        s[i + 1] = {x, obj(x)};
    }
    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    for (int it = 0; it < iterations; ++it) {
        std::sort(s.begin(), s.end(), by_f);
        trace.push_back(s[0].f);
        if (s[kDim].f - s[0].f <= 1e-7 * (1.0 + s[0].f)) break;
        Point centroid{};
        for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t d = 0; d < kDim; ++d) centroid[d] += s[i].x[d] / kDim;
        auto along = [&](double t) {
            Point x;
            for (std::size_t d = 0; d < kDim; ++d) x[d] = centroid[d] + t * (s[kDim].x[d] - centroid[d]);
            return obj.box.clamp(x);
        };
        const Point xr = along(-1.0);
        const double fr = obj(xr);
        if (fr < s[0].f) {
            const Point xe = along(-2.0);
            const double fe = obj(xe);
            s[kDim] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[kDim - 1].f) {
            s[kDim] = {xr, fr};
        } else {
            const bool outside = fr < s[kDim].f;
            const Point xc = along(outside ? -0.5 : 0.5);
            const double fc = obj(xc);
            if (fc < (outside ? fr : s[kDim].f)) {
                s[kDim] = {xc, fc};
            } else {
                for (std::size_t i = 1; i <= kDim; ++i) {
                    for (std::size_t d = 0; d < kDim; ++d) s[i].x[d] = s[0].x[d] + 0.5 * (s[i].x[d] - s[0].x[d]);
                    s[i].x = obj.box.clamp(s[i].x);
                    s[i].f = obj(s[i].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), by_f);
    return s[0];
}

}  // namespace

void FitConfig::validate() const {
    auto check = [](const Range& r, double min_lo, double max_hi, const char* what) {
        if (!(r.lo <= r.hi) || r.lo < min_lo || r.hi > max_hi || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
            throw DomainError(std::string("FitConfig: invalid ") + what + " range");
        }
    };
    check(K, 0.0, kInf, "K");
    check(gamma_ratio, 0.0, 1.0, "gamma ratio");
    check(m, 0.0, kInf, "m");
    if (!(m.lo > 0.0)) throw DomainError("FitConfig: m range must be positive");
    if (!(omega_spread >= 1.0)) throw DomainError("FitConfig: omega_spread must be >= 1");
    if (grid_points < 2) throw DomainError("FitConfig: grid_points must be >= 2");
    if (refine_iterations < 0 || refine_starts < 0) throw DomainError("FitConfig: negative refinement budget");
    if (!(floor > 0.0 && floor < 1.0)) throw DomainError("FitConfig: floor must lie in (0, 1)");
    series.validate();
}

double ks_error(const mc::EmpiricalCdf& emp, const model::ChannelParams& p, const FitConfig& cfg) {
    if (emp.size() == 0) throw DomainError("ks_error: empty empirical CDF");
    cfg.validate();
    return score(unique_support(emp), p, cfg);
}

FitResult fit(const mc::EmpiricalCdf& emp, const FitConfig& cfg) {
    cfg.validate();
    if (emp.size() == 0) throw DomainError("fit: empty empirical CDF");
    FitResult result;
    FitDiagnostics& diag = result.diagnostics;
    if (emp.size() < 100) diag.warnings.push_back("fewer than 100 data points; the fit is poorly constrained");

    const Support all = unique_support(emp);
    const Support sub = thin(all, cfg.max_eval_points);
    diag.eval_points = sub.x.size();
    const double omega0 = second_moment(emp);
    diag.omega_moment = omega0;
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw FitError("fit: data second moment is not positive");

    const Box box{{cfg.K.lo, cfg.gamma_ratio.lo, std::log(cfg.m.lo), std::log(omega0 / cfg.omega_spread)},
                  {cfg.K.hi, cfg.gamma_ratio.hi, std::log(cfg.m.hi), std::log(omega0 * cfg.omega_spread)}};
    Objective obj{sub, cfg, box};

    const int g = cfg.grid_points;
    auto lin = [&](const Range& r, int i) { return r.lo + (r.hi - r.lo) * i / (g - 1); };
    std::vector<Vertex> grid;
    for (int ik = 0; ik < g; ++ik) {
        for (int ig = 0; ig < g; ++ig) {
            for (int im = 0; im < g; ++im) {
                const double log_m = box.lo[2] + (box.hi[2] - box.lo[2]) * im / (g - 1);
                const Point x{lin(cfg.K, ik), lin(cfg.gamma_ratio, ig), log_m, std::log(omega0)};
                const double f = obj(x);
                if (!std::isfinite(f)) ++diag.grid_failures;
                grid.push_back({x, f});
            }
        }
    }
    diag.grid_evaluations = grid.size();
    if (diag.grid_failures == grid.size()) throw FitError("fit: every grid evaluation failed");
    std::stable_sort(grid.begin(), grid.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    diag.grid_epsilon = grid.front().f;

    Vertex best = grid.front();
    const std::size_t before = obj.evaluations;
    const Point step{0.1 * (cfg.K.hi - cfg.K.lo), 0.1 * (cfg.gamma_ratio.hi - cfg.gamma_ratio.lo), 0.25, 0.05};
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.refine_starts), grid.size());
    for (std::size_t i = 0; i < starts; ++i) {
        if (!std::isfinite(grid[i].f)) break;
        Vertex v = nelder_mead(obj, grid[i].x, grid[i].f, step, cfg.refine_iterations, diag.refinement_trace);
        // a second pass from the result with a fresh simplex
        v = nelder_mead(obj, v.x, v.f, step, cfg.refine_iterations, diag.refinement_trace);
        if (v.f < best.f) best = v;
    }
    diag.refine_evaluations = obj.evaluations - before;
    diag.refined_epsilon = best.f;

    result.params = Box::params(box.clamp(best.x));
    result.epsilon = score(all, result.params, cfg);
    return result;
}

mc::EmpiricalCdf empirical_from_pairs(std::vector<double> x, std::vector<double> p) {
    if (x.size() != p.size()) throw DomainError("empirical_from_pairs: column lengths differ");
    if (x.empty()) throw DomainError("empirical_from_pairs: no rows");
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    mc::EmpiricalCdf e;
    for (std::size_t i : order) {
        if (!std::isfinite(x[i]) || !(p[i] > 0.0 && p[i] <= 1.0)) {
            throw DomainError("empirical_from_pairs: probabilities must lie in (0, 1] and amplitudes be finite");
        }
        if (!e.p.empty() && p[i] < e.p.back()) {
            throw DomainError("empirical_from_pairs: probabilities must be non-decreasing in amplitude");
        }
        e.x.push_back(x[i]);
        e.p.push_back(p[i]);
    }
    return e;
}

}  // namespace gstwdp::fit
