#include "gstwdp/error.hpp"
#include "gstwdp/oracle.hpp"
#include "gstwdp/perf.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace gstwdp;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double db(double v) { return std::pow(10.0, v / 10.0); }

}  // namespace

TEST_CASE("RQAM constants") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 2, 1.0);
    CHECK(r.order() == 8);
    CHECK(r.p == 0.75);
    CHECK(r.q == 0.5);
    CHECK(r.a == Approx(std::sqrt(6.0 / 18.0)).epsilon(1e-15));
    const perf::RqamSpec s = perf::RqamSpec::make(4, 4, 2.0);
    CHECK(s.b == Approx(2.0 * s.a).epsilon(1e-15));
    CHECK(s.a == Approx(std::sqrt(6.0 / (15.0 + 4.0 * 15.0))).epsilon(1e-15));
    CHECK_THROWS_AS(perf::RqamSpec::make(1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(perf::RqamSpec::make(2, 2, 0.0), DomainError);
}

TEST_CASE("conditional SEP at zero SNR") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 2, 1.0);
    const double guess = r.p + r.q - r.p * r.q;
    CHECK(perf::conditional_sep(0.0, r, perf::QVariant::Exact) == Approx(guess).epsilon(1e-15));
    CHECK(perf::conditional_sep(0.0, r, perf::QVariant::Chernoff) == Approx(guess).epsilon(1e-15));
    CHECK(perf::conditional_sep(0.0, r, perf::QVariant::Chiani) == Approx(2.0 / 3.0 * guess).epsilon(1e-15));
    CHECK_THROWS_AS(perf::conditional_sep(-1.0, r, perf::QVariant::Exact), DomainError);
}

TEST_CASE("exact conditional SEP reference") {
    CHECK(rel(perf::conditional_sep(4.0, perf::RqamSpec::make(2, 2, 1.0), perf::QVariant::Exact), 0.04498269539269888) <
          1e-13);
}

TEST_CASE("Q approximations") {
    for (double x : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double q = perf::q_function(x, perf::QVariant::Exact);
        CHECK(perf::q_function(x, perf::QVariant::Chernoff) >= q);
        CHECK(perf::q_function(x, perf::QVariant::Chiani) <= perf::q_function(x, perf::QVariant::Chernoff));
        // the two-exponential form undershoots near the origin (1/3 at 0)
        if (x >= 1.0) CHECK(perf::q_function(x, perf::QVariant::Chiani) >= q);
        else CHECK(perf::q_function(x, perf::QVariant::Chiani) < q);
    }
    CHECK(std::string(perf::to_string(perf::QVariant::Chiani)) == "chiani");
}

TEST_CASE("MGF assembly equals the direct series") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 2, 1.0);
    for (const model::ChannelParams& p :
         {model::ChannelParams{10.0, 0.1, 5.0, db(15.0)}, model::ChannelParams{0.0, 0.0, 0.8, db(5.0)},
          model::ChannelParams{15.0, 0.9, 2.5, db(25.0)}}) {
        const model::GsTwdp ch(p);
        CHECK(rel(perf::asep_chernoff(r, ch), perf::asep_chernoff_direct(r, ch)) < 1e-10);
        CHECK(rel(perf::asep_chiani(r, ch), perf::asep_chiani_direct(r, ch)) < 1e-10);
    }
}

TEST_CASE("ASEP approximations against averaging the approximate conditional SEP") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 2, 1.0);
    const model::ChannelParams a{10.0, 0.1, 5.0, db(15.0)};
    CHECK(rel(perf::asep_chernoff(r, a), 0.06392693967051498) < 1e-9);
    CHECK(rel(perf::asep_chernoff(r, a), oracle::asep_by_quadrature(r, a, perf::QVariant::Chernoff)) < 1e-9);
    const model::ChannelParams b{15.0, 0.9, 5.0, db(20.0)};
    CHECK(rel(perf::asep_chiani(r, b), 0.04652197160295948) < 1e-9);
    CHECK(rel(perf::asep_chiani(r, b), oracle::asep_by_quadrature(r, b, perf::QVariant::Chiani)) < 1e-9);
}

TEST_CASE("ASEP falls with SNR and Chernoff lies above Chiani") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 4, 1.0);
    for (double K : {2.0, 10.0}) {
        for (double g : {0.1, 0.9}) {
            double prev = 1.0;
            for (double snr = 0.0; snr <= 30.0; snr += 3.0) {
                const model::GsTwdp ch({K, g, 5.0, db(snr)});
                const double ch_ = perf::asep_chernoff(r, ch);
                const double ci = perf::asep_chiani(r, ch);
                CHECK(ci < prev);
                CHECK(ch_ > ci);
                prev = ci;
            }
        }
    }
}

TEST_CASE("effect of K depends on the second wave") {
    const perf::RqamSpec r = perf::RqamSpec::make(4, 4, 1.0);
    const double g0 = db(25.0);
    // with a weak second wave more specular power helps
    CHECK(perf::asep_chiani(r, {10.0, 0.1, 5.0, g0}) < perf::asep_chiani(r, {2.0, 0.1, 5.0, g0}));
    // with nearly equal waves it deepens the cancellation fades
    CHECK(perf::asep_chiani(r, {10.0, 0.9, 5.0, g0}) > perf::asep_chiani(r, {2.0, 0.9, 5.0, g0}));
}

TEST_CASE("ASEP approaches the no-fading limit at low SNR") {
    const perf::RqamSpec r = perf::RqamSpec::make(2, 2, 1.0);
    const model::ChannelParams p{5.0, 0.5, 2.0, 1e-9};
    CHECK(perf::asep_chernoff(r, p) == Approx(0.75).epsilon(1e-6));
    CHECK(perf::asep_chiani(r, p) == Approx(0.5).epsilon(1e-6));
}
