#include "cli.hpp"

#include "manifest.hpp"

#include "gstwdp/csv_io.hpp"
#include "gstwdp/error.hpp"
#include "gstwdp/fitting.hpp"
#include "gstwdp/model.hpp"
#include "gstwdp/montecarlo.hpp"
#include "gstwdp/oracle.hpp"
#include "gstwdp/perf.hpp"
#include "gstwdp/quadrature.hpp"
#include "gstwdp/specfun.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>

namespace gstwdp::cli {

namespace {

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// ---- channel options shared by the subcommands ----

struct ChannelOptions {
    double K = 0.0;
    double gamma_ratio = 0.0;
    double m = 1.0;
    std::optional<double> omega;
    std::optional<double> gamma0;
    std::optional<double> snr_db;
    std::optional<int> max_terms;

    void add_to(CLI::App* app, bool with_power = true) {
        app->add_option("--K", K, "Rician-type K factor (total specular / diffuse power)");
        app->add_option("--gamma-ratio", gamma_ratio, "amplitude ratio V2/V1 in [0, 1]");
        app->add_option("--m", m, "shadowing shape parameter");
        if (with_power) {
            auto* o = app->add_option("--omega", omega, "area mean power Omega_s (envelope domain)");
            auto* g = app->add_option("--gamma0", gamma0, "average SNR, linear");
            auto* d = app->add_option("--snr-db", snr_db, "average SNR in dB");
            o->excludes(g)->excludes(d);
            g->excludes(d);
        }
        app->add_option("--max-terms", max_terms, "series term cap (overrides GSTWDP_MAX_TERMS)");
    }

    // dB converted here and nowhere else
    double power() const {
        if (omega) return *omega;
        if (gamma0) return *gamma0;
        if (snr_db) return std::pow(10.0, *snr_db / 10.0);
        return 1.0;
    }

    model::ChannelParams params(double power_value) const {
        model::ChannelParams p{K, gamma_ratio, m, power_value};
        p.validate();
        return p;
    }
    model::ChannelParams params() const { return params(power()); }

    model::SeriesPolicy policy() const {
        model::SeriesPolicy p = model::SeriesPolicy::from_environment();
        if (max_terms) p.max_j = *max_terms;
        p.validate();
        return p;
    }

    nlohmann::json to_json(bool with_power = true) const {
        nlohmann::json j{{"K", K}, {"gamma_ratio", gamma_ratio}, {"m", m}, {"max_terms", policy().max_j}};
        if (with_power) j["omega_s"] = power();
        return j;
    }
};

// ---- output plumbing ----

struct Output {
    std::string path;
    std::ostream& fallback;
    std::ofstream file;

    std::ostream& stream() {
        if (path.empty()) return fallback;
        if (!file.is_open()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file " + path);
        }
        return file;
    }
};

struct Invocation {
    std::vector<std::string> args;
    std::ostream& out;
    std::ostream& err;
};

// The stored argument vector pins the series cap so a replay does not depend
// on the environment.
std::vector<std::string> resolved_args(const Invocation& inv, const ChannelOptions& ch) {
    std::vector<std::string> a = inv.args;
    if (!ch.max_terms) {
        a.push_back("--max-terms");
        a.push_back(std::to_string(ch.policy().max_j));
    }
    return a;
}

void finish(Output& o, const std::string& sub, std::vector<std::string> args, nlohmann::json params,
            std::optional<std::uint64_t> seed) {
    if (o.path.empty()) return;
    o.file.close();
    if (!o.file) throw std::runtime_error("error writing " + o.path);
    RunManifest m;
    m.subcommand = sub;
    m.args = std::move(args);
    m.parameters = std::move(params);
    m.seed = seed;
    m.version = tool_version();
    m.timestamp = utc_timestamp();
    m.output = o.path;
    m.write(manifest_path(o.path));
}

// ---- eval ----

struct EvalOptions {
    std::string kind;
    std::string domain = "envelope";
    std::string grid;
    std::string out;
    ChannelOptions ch;
};

void cmd_eval(EvalOptions& o, const Invocation& inv) {
    const std::vector<double> grid = parse_grid(o.grid);
    const model::GsTwdp channel(o.ch.params(), o.ch.policy());
    const bool snr = o.domain == "snr";
    std::string axis = snr ? "g" : "x";
    std::function<double(double)> f;
    if (o.kind == "pdf") {
        f = snr ? std::function<double(double)>([&](double g) { return channel.snr_pdf(g); })
                : std::function<double(double)>([&](double x) { return channel.envelope_pdf(x); });
    } else if (o.kind == "cdf") {
        f = snr ? std::function<double(double)>([&](double g) { return channel.snr_cdf(g); })
                : std::function<double(double)>([&](double x) { return channel.envelope_cdf(x); });
    } else if (o.kind == "mgf") {
        axis = "s";
        f = [&](double s) { return channel.mgf(s); };
    } else {
        axis = "n";
        for (double n : grid) {
            if (n != std::floor(n) || n < 1.0 || n > 1e6) throw UsageError("moment orders must be positive integers");
        }
        f = [&](double n) { return channel.moment(static_cast<int>(n)); };
    }
    Output out{o.out, inv.out, {}};
    io::CsvWriter w(out.stream(), {axis, o.kind});
    for (double v : grid) w.row({v, f(v)});
    nlohmann::json params = o.ch.to_json();
    params["kind"] = o.kind;
    params["domain"] = o.domain;
    params["grid"] = o.grid;
    finish(out, "eval", resolved_args(inv, o.ch), params, std::nullopt);
}

// ---- sample ----

struct SampleOptions {
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::string out;
    ChannelOptions ch;
};

void cmd_sample(SampleOptions& o, const Invocation& inv) {
    mc::SimConfig cfg;
    cfg.n_samples = o.n;
    cfg.seed = o.seed;
    const model::ChannelParams p = o.ch.params();
    Output out{o.out, inv.out, {}};
    io::CsvWriter w(out.stream(), {"r"});
    mc::sample_envelope(p, cfg, [&](std::span<const double> batch) {
        for (double r : batch) w.row({r});
    });
    nlohmann::json params = o.ch.to_json();
    params["n"] = o.n;
    finish(out, "sample", resolved_args(inv, o.ch), params, o.seed);
}

// ---- asep ----

struct AsepOptions {
    int mi = 4;
    int mq = 2;
    double beta = 1.0;
    std::string snr_grid = "0:3:30";
    std::vector<std::string> methods{"chernoff", "chiani"};
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::string out;
    ChannelOptions ch;
};

void cmd_asep(AsepOptions& o, const Invocation& inv) {
    const std::vector<double> snr_db = parse_grid(o.snr_grid);
    const perf::RqamSpec spec = perf::RqamSpec::make(o.mi, o.mq, o.beta);
    const model::SeriesPolicy policy = o.ch.policy();
    std::vector<std::string> header{"snr_db"};
    bool uses_mc = false;
    for (const std::string& m : o.methods) {
        header.push_back(m);
        if (m == "mc") {
            header.push_back("mc_se");
            uses_mc = true;
        }
    }
    Output out{o.out, inv.out, {}};
    io::CsvWriter w(out.stream(), header);
    mc::SimConfig cfg;
    cfg.n_samples = o.n;
    cfg.seed = o.seed;
    for (double db : snr_db) {
        const model::ChannelParams p = o.ch.params(std::pow(10.0, db / 10.0));
        std::vector<double> row{db};
        for (const std::string& m : o.methods) {
            if (m == "chernoff") {
                row.push_back(perf::asep_chernoff(spec, p, policy));
            } else if (m == "chiani") {
                row.push_back(perf::asep_chiani(spec, p, policy));
            } else if (m == "quad") {
                row.push_back(oracle::asep_by_quadrature(spec, p, perf::QVariant::Exact));
            } else {
                const mc::McEstimate e = mc::asep_montecarlo(spec, p, cfg);
                row.push_back(e.mean);
                row.push_back(e.std_error);
            }
        }
        w.row(row);
    }
    nlohmann::json params = o.ch.to_json(false);
    params["mi"] = o.mi;
    params["mq"] = o.mq;
    params["beta"] = o.beta;
    params["snr_db"] = o.snr_grid;
    params["methods"] = o.methods;
    if (uses_mc) params["n"] = o.n;
    finish(out, "asep", resolved_args(inv, o.ch), params,
           uses_mc ? std::optional<std::uint64_t>(o.seed) : std::nullopt);
}

// ---- fit ----

struct FitOptions {
    std::string input;
    std::string out;
    std::vector<double> k_range{0.0, 50.0};
    std::vector<double> gamma_range{0.0, 1.0};
    std::vector<double> m_range{0.5, 50.0};
    double omega_spread = 4.0;
    double floor = 1e-4;
    int grid_points = 11;
    int iterations = 300;
    int starts = 3;
    std::size_t max_points = 1000;
    std::optional<int> max_terms;
};

nlohmann::json fit_to_json(const fit::FitResult& r) {
    const fit::FitDiagnostics& d = r.diagnostics;
    return {{"params",
             {{"K", r.params.K}, {"gamma_ratio", r.params.gamma_ratio}, {"m", r.params.m}, {"omega_s", r.params.omega_s}}},
            {"epsilon", r.epsilon},
            {"diagnostics",
             {{"grid_evaluations", d.grid_evaluations},
              {"grid_failures", d.grid_failures},
              {"refine_evaluations", d.refine_evaluations},
              {"eval_points", d.eval_points},
              {"omega_moment", d.omega_moment},
              {"grid_epsilon", d.grid_epsilon},
              {"refined_epsilon", d.refined_epsilon},
              {"refinement_trace", d.refinement_trace},
              {"warnings", d.warnings}}}};
}

void cmd_fit(FitOptions& o, const Invocation& inv) {
    auto range = [](const std::vector<double>& v, const char* what) {
        if (v.size() != 2) throw UsageError(std::string(what) + " takes two values");
        return fit::Range{v[0], v[1]};
    };
    fit::FitConfig cfg;
    cfg.K = range(o.k_range, "--k-range");
    cfg.gamma_ratio = range(o.gamma_range, "--gamma-range");
    cfg.m = range(o.m_range, "--m-range");
    cfg.omega_spread = o.omega_spread;
    cfg.floor = o.floor;
    cfg.grid_points = o.grid_points;
    cfg.refine_iterations = o.iterations;
    cfg.refine_starts = o.starts;
    cfg.max_eval_points = o.max_points;
    cfg.series = model::SeriesPolicy::from_environment();
    if (o.max_terms) cfg.series.max_j = *o.max_terms;
    cfg.validate();

    const mc::EmpiricalCdf emp = io::load_empirical(o.input);
    const fit::FitResult r = fit::fit(emp, cfg);
    for (const std::string& w : r.diagnostics.warnings) inv.err << "warning: " << w << '\n';
    Output out{o.out, inv.out, {}};
    out.stream() << fit_to_json(r).dump(2) << '\n';

    std::vector<std::string> args = inv.args;
    if (!o.max_terms) {
        args.push_back("--max-terms");
        args.push_back(std::to_string(cfg.series.max_j));
    }
    nlohmann::json params{{"input", o.input},         {"k_range", o.k_range},   {"gamma_range", o.gamma_range},
                          {"m_range", o.m_range},     {"omega_spread", o.omega_spread}, {"floor", o.floor},
                          {"grid_points", o.grid_points}, {"iterations", o.iterations}, {"starts", o.starts},
                          {"max_points", o.max_points},   {"max_terms", cfg.series.max_j}};
    finish(out, "fit", args, params, std::nullopt);
}

// ---- verify ----

struct VerifyOptions {
    std::string suite;
    std::string k_list = "0,15";
    std::string gamma_list = "0.5,1";
    std::string m_list = "0.8,5";
    std::string x_grid = "0.2,1,2";
    std::string s_grid = "0.1,1,10";
    std::string snr_grid = "0:3:30";
    std::string nu_list = "0,0.3,2.5,10";
    int mi = 4;
    int mq = 2;
    double beta = 1.0;
    std::string out;
    ChannelOptions ch;
};

double rel_dev(double value, double reference) {
    if (value == reference) return 0.0;
    return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

void write_check(std::ostream& os, const std::string& check, const std::string& which, double dev) {
    os << check << ',' << which << ',' << io::format_double(dev) << '\n';
}

double verify_specfun(const VerifyOptions& o, std::ostream& os) {
    const std::vector<double> xs = parse_grid(o.x_grid);
    const std::vector<double> nus = parse_grid(o.nu_list);
    os << "check,case,max_rel_dev\n";
    double worst = 0.0;
    for (double nu : nus) {
        double d = 0.0;
        for (double x : xs) {
            if (x <= 0.0) continue;
            d = std::max(d, rel_dev(specfun::bessel_k(nu, x), std::cyl_bessel_k(std::abs(nu), x)));
        }
        write_check(os, "bessel_k", "nu=" + io::format_double(nu), d);
        worst = std::max(worst, d);
    }
    // 1F2(a; a, b; z) = 0F1(; b; z) = Gamma(b) z^{(1-b)/2} I_{b-1}(2 sqrt z)
    for (double b : {1.5, 2.5, 4.0}) {
        double d = 0.0;
        for (double z : xs) {
            if (z <= 0.0) continue;
            const double ref = std::tgamma(b) * std::pow(z, 0.5 * (1.0 - b)) * std::cyl_bessel_i(b - 1.0, 2.0 * std::sqrt(z));
            d = std::max(d, rel_dev(specfun::hyp1f2(1.3, 1.3, b, z), ref));
        }
        write_check(os, "hyp1f2", "b=" + io::format_double(b), d);
        worst = std::max(worst, d);
    }
    // U(a, b, z) from its Laplace integral with a Gauss-Legendre panel rule in t = e^u
    for (double a : {1.0, 2.5}) {
        for (double b : {-3.0, 0.5, 2.0}) {
            double d = 0.0;
            for (double z : xs) {
                if (z <= 0.0) continue;
                auto f = [&](double u) {
                    const double t = std::exp(u);
                    return std::exp(-z * t + a * u + (b - a - 1.0) * std::log1p(t) - std::lgamma(a));
                };
                quad::QuadPolicy q;
                q.rel_tol = 1e-13;
                q.abs_tol = 1e-300;
                const double hi = std::log((60.0 + a) / z + 1.0) + 1.0;
                const double ref = quad::gauss_legendre_panels(f, -60.0, hi, q, 64).value;
                d = std::max(d, rel_dev(specfun::tricomi_u(a, b, z), ref));
            }
            write_check(os, "tricomi_u", "a=" + io::format_double(a) + ";b=" + io::format_double(b), d);
            worst = std::max(worst, d);
        }
    }
    return worst;
}

double verify_model(const VerifyOptions& o, std::ostream& os) {
    const std::vector<double> ks = parse_grid(o.k_list);
    const std::vector<double> gs = parse_grid(o.gamma_list);
    const std::vector<double> ms = parse_grid(o.m_list);
    const std::vector<double> xs = parse_grid(o.x_grid);
    const std::vector<double> ss = parse_grid(o.s_grid);
    const model::SeriesPolicy policy = o.ch.policy();
    const double omega = o.ch.power();
    os << "check,case,max_rel_dev\n";
    double worst = 0.0;
    for (double K : ks) {
        for (double g : gs) {
            for (double m : ms) {
                const model::ChannelParams q{K, g, m, omega};
                q.validate();
                const model::GsTwdp ch(q, policy);
                double dp = 0.0;
                double dc = 0.0;
                double dm = 0.0;
                for (double x : xs) {
                    if (x <= 0.0) continue;
                    dp = std::max(dp, rel_dev(ch.envelope_pdf(x), oracle::mixture_pdf(x, q, oracle::Conditional::Twdp)));
                    dc = std::max(dc, rel_dev(ch.envelope_cdf(x), oracle::cdf_by_integration(x, q, oracle::Domain::Envelope)));
                }
                for (double s : ss) dm = std::max(dm, rel_dev(ch.mgf(s), oracle::mgf_by_laplace(s, q)));
                const std::string cell =
                    "K=" + io::format_double(K) + ";gamma_ratio=" + io::format_double(g) + ";m=" + io::format_double(m);
                write_check(os, "envelope_pdf", cell, dp);
                write_check(os, "envelope_cdf", cell, dc);
                write_check(os, "mgf", cell, dm);
                worst = std::max({worst, dp, dc, dm});
            }
        }
    }
    return worst;
}

double verify_asep(const VerifyOptions& o, std::ostream& os) {
    const std::vector<double> snr = parse_grid(o.snr_grid);
    const perf::RqamSpec spec = perf::RqamSpec::make(o.mi, o.mq, o.beta);
    const model::SeriesPolicy policy = o.ch.policy();
    io::CsvWriter w(os, {"snr_db", "chernoff", "chiani", "quad_exact", "chiani_rel_gap"});
    double worst = 0.0;
    for (double db : snr) {
        const model::ChannelParams p = o.ch.params(std::pow(10.0, db / 10.0));
        const double ref = oracle::asep_by_quadrature(spec, p, perf::QVariant::Exact);
        const double chiani = perf::asep_chiani(spec, p, policy);
        const double gap = rel_dev(chiani, ref);
        w.row({db, perf::asep_chernoff(spec, p, policy), chiani, ref, gap});
        worst = std::max(worst, gap);
    }
    return worst;
}

void cmd_verify(VerifyOptions& o, const Invocation& inv) {
    Output out{o.out, inv.out, {}};
    std::ostream& os = out.stream();
    double worst = 0.0;
    if (o.suite == "asep") {
        worst = verify_asep(o, os);
    } else {
        worst = o.suite == "specfun" ? verify_specfun(o, os) : verify_model(o, os);
    }
    inv.err << o.suite << ": max relative deviation " << io::format_double(worst) << '\n';
    nlohmann::json params = o.ch.to_json(o.suite == "model");
    params["suite"] = o.suite;
    finish(out, "verify", resolved_args(inv, o.ch), params, std::nullopt);
}

// ---- replay ----

struct ReplayOptions {
    std::string manifest;
    std::string out;
};

std::vector<std::string> replay_args(const RunManifest& m, const std::string& out) {
    std::vector<std::string> args = m.args;
    if (out.empty()) return args;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" || args[i] == "-o") {
            if (i + 1 < args.size()) args[i + 1] = out;
            return args;
        }
        if (args[i].rfind("--out=", 0) == 0) {
            args[i] = "--out=" + out;
            return args;
        }
    }
    args.push_back("--out");
    args.push_back(out);
    return args;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> v;
    const std::string_view s(spec);
    if (s.empty()) throw UsageError("empty grid");
    if (s.rfind("log:", 0) == 0) {
        const auto parts = split(s.substr(4), ':');
        if (parts.size() != 3) throw UsageError("log grid is log:a:b:n");
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const double n = parse_number(parts[2]);
        if (!(a > 0.0 && b > 0.0)) throw UsageError("log grid bounds must be positive");
        if (n != std::floor(n) || n < 1.0 || n > 1e8) throw UsageError("log grid count must be a positive integer");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            v.push_back(std::pow(10.0, std::log10(a) + t * (std::log10(b) - std::log10(a))));
        }
        if (count > 1) v.back() = b;
    } else if (s.find(':') != std::string_view::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw UsageError("range grid is a:step:b");
        const double a = parse_number(parts[0]);
        const double step = parse_number(parts[1]);
        const double b = parse_number(parts[2]);
        if (!(step > 0.0)) throw UsageError("grid step must be positive");
        const double span = (b - a) / step;
        if (span > 1e8) throw UsageError("grid too large");
        if (span >= -1e-9) {
            // multiply rather than accumulate so the points are reproducible
            const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
            for (std::size_t i = 0; i < count; ++i) v.push_back(a + static_cast<double>(i) * step);
        }
    } else {
        for (std::string_view part : split(s, ',')) {
            if (part.empty()) continue;
            v.push_back(parse_number(part));
        }
    }
    if (v.empty()) throw UsageError("grid '" + spec + "' is empty");
    return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"GS-TWDP composite fading: statistics, simulation, ASEP and fitting", "gstwdp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    EvalOptions ev;
    auto* eval = app.add_subcommand("eval", "evaluate pdf / cdf / mgf / moment on a grid");
    eval->add_option("kind", ev.kind, "pdf | cdf | mgf | moment")
        ->required()
        ->check(CLI::IsMember({"pdf", "cdf", "mgf", "moment"}));
    eval->add_option("domain", ev.domain, "envelope | snr")->check(CLI::IsMember({"envelope", "snr"}));
    eval->add_option("--x,--g,--s,--n,--grid", ev.grid, "abscissae (a:step:b, log:a:b:n or a list)")->required();
    eval->add_option("-o,--out", ev.out, "output CSV (stdout if omitted)");
    ev.ch.add_to(eval);

    SampleOptions sa;
    auto* sample = app.add_subcommand("sample", "simulate envelope samples");
    sample->add_option("-n,--samples", sa.n, "number of samples")->check(CLI::PositiveNumber);
    sample->add_option("--seed", sa.seed, "generator seed");
    sample->add_option("-o,--out", sa.out, "output CSV (stdout if omitted)");
    sa.ch.add_to(sample);

    AsepOptions as;
    auto* asep = app.add_subcommand("asep", "RQAM average symbol error probability over an SNR range");
    asep->add_option("--mi", as.mi, "in-phase order")->check(CLI::PositiveNumber);
    asep->add_option("--mq", as.mq, "quadrature order")->check(CLI::PositiveNumber);
    asep->add_option("--beta", as.beta, "quadrature / in-phase decision distance ratio");
    asep->add_option("--snr-db", as.snr_grid, "average SNR grid in dB");
    asep->add_option("--method", as.methods, "chernoff, chiani, mc, quad (repeat or comma-separate)")
        ->delimiter(',')
        ->check(CLI::IsMember({"chernoff", "chiani", "mc", "quad"}));
    asep->add_option("--samples", as.n, "Monte Carlo samples per SNR point")->check(CLI::PositiveNumber);
    asep->add_option("--seed", as.seed, "Monte Carlo seed");
    asep->add_option("-o,--out", as.out, "output CSV (stdout if omitted)");
    as.ch.add_to(asep, false);

    FitOptions fo;
    auto* fitc = app.add_subcommand("fit", "fit parameters to an empirical envelope CDF");
    fitc->add_option("-i,--input", fo.input, "CSV of amplitudes, or (amplitude, CDF) pairs")->required();
    fitc->add_option("-o,--out", fo.out, "output JSON (stdout if omitted)");
    fitc->add_option("--k-range", fo.k_range, "lo,hi")->delimiter(',')->expected(2);
    fitc->add_option("--gamma-range", fo.gamma_range, "lo,hi")->delimiter(',')->expected(2);
    fitc->add_option("--m-range", fo.m_range, "lo,hi")->delimiter(',')->expected(2);
    fitc->add_option("--omega-spread", fo.omega_spread, "Omega_s search factor around the data second moment");
    fitc->add_option("--floor", fo.floor, "CDF floor applied before log10");
    fitc->add_option("--grid-points", fo.grid_points, "coarse grid points per axis");
    fitc->add_option("--iterations", fo.iterations, "Nelder-Mead iterations per pass");
    fitc->add_option("--starts", fo.starts, "number of grid seeds refined");
    fitc->add_option("--max-points", fo.max_points, "support points scored during the search (0 = all)");
    fitc->add_option("--max-terms", fo.max_terms, "series term cap (overrides GSTWDP_MAX_TERMS)");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "compare against quadrature references");
    verify->add_option("suite", vo.suite, "specfun | model | asep")
        ->required()
        ->check(CLI::IsMember({"specfun", "model", "asep"}));
    verify->add_option("--K-list", vo.k_list, "K values (model suite)");
    verify->add_option("--gamma-list", vo.gamma_list, "gamma ratio values (model suite)");
    verify->add_option("--m-list", vo.m_list, "m values (model suite)");
    verify->add_option("--x", vo.x_grid, "envelope abscissae, or arguments for specfun");
    verify->add_option("--s", vo.s_grid, "MGF arguments (model suite)");
    verify->add_option("--nu-list", vo.nu_list, "Bessel orders (specfun suite)");
    verify->add_option("--snr-db", vo.snr_grid, "SNR grid in dB (asep suite)");
    verify->add_option("--mi", vo.mi, "in-phase order (asep suite)");
    verify->add_option("--mq", vo.mq, "quadrature order (asep suite)");
    verify->add_option("--beta", vo.beta, "distance ratio (asep suite)");
    verify->add_option("-o,--out", vo.out, "output CSV (stdout if omitted)");
    verify->add_option("--omega", vo.ch.omega, "area mean power (model suite)");
    vo.ch.add_to(verify, false);

    ReplayOptions ro;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("manifest", ro.manifest, "manifest JSON")->required();
    replay->add_option("-o,--out", ro.out, "write to this path instead of the recorded one");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    // the arguments that select this subcommand, for the manifest
    const Invocation inv{args, out, err};
    try {
        if (*eval) {
            cmd_eval(ev, inv);
        } else if (*sample) {
            cmd_sample(sa, inv);
        } else if (*asep) {
            cmd_asep(as, inv);
        } else if (*fitc) {
            cmd_fit(fo, inv);
        } else if (*verify) {
            cmd_verify(vo, inv);
        } else if (*replay) {
            const RunManifest m = RunManifest::read(ro.manifest);
            if (m.version != tool_version()) {
                err << "warning: manifest written by version " << m.version << ", running " << tool_version() << '\n';
            }
            return run(replay_args(m, ro.out), out, err);
        }
    } catch (const UsageError& e) {
        err << "gstwdp: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "gstwdp: invalid parameter: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "gstwdp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace gstwdp::cli
