#include "gstwdp/error.hpp"
#include "gstwdp/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gstwdp;
using doctest::Approx;

TEST_CASE("Gauss-Kronrod on smooth and peaked integrands") {
    quad::QuadPolicy p;
    CHECK(quad::gauss_kronrod([](double x) { return std::exp(x); }, 0.0, 1.0, p).value ==
          Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    // narrow Gaussian: panels keep it from being missed
    auto peak = [](double x) { return std::exp(-0.5 * (x - 3.3) * (x - 3.3) / 1e-4); };
    CHECK(quad::gauss_kronrod(peak, 0.0, 10.0, p, 50).value == Approx(std::sqrt(2 * std::numbers::pi) * 1e-2).epsilon(1e-10));
    // integrable endpoint singularity
    CHECK(quad::gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, p).value == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Gauss-Kronrod with breakpoints and errors") {
    quad::QuadPolicy p;
    const double bp[] = {0.0, 1.0, 2.0};
    CHECK(quad::gauss_kronrod([](double x) { return std::abs(x - 1.0); }, bp, p).value == Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(quad::gauss_kronrod([](double x) { return x; }, 1.0, 0.0, p), DomainError);
    quad::QuadPolicy stingy;
    stingy.max_subdivisions = 2;
    stingy.abs_tol = 1e-15;
    stingy.rel_tol = 1e-15;
    CHECK_THROWS_AS(quad::gauss_kronrod([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, stingy),
                    ConvergenceError);
    quad::QuadPolicy bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const quad::GaussLegendreRule r = quad::gauss_legendre_rule(20);
    double w = 0.0;
    double x38 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        w += r.weights[i];
        x38 += r.weights[i] * std::pow(r.nodes[i], 38);
    }
    CHECK(w == Approx(2.0).epsilon(1e-15));
    CHECK(x38 == Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("composite Gauss-Legendre panels") {
    quad::QuadPolicy p;
    const double v = quad::gauss_legendre_panels([](double x) { return std::cos(x) * std::cos(x); }, 0.0, 10.0, p).value;
    CHECK(v == Approx(5.0 + std::sin(20.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("periodic trapezoid converges geometrically") {
    quad::QuadPolicy p;
    // (1/2pi) int exp(3 cos t) dt = I_0(3)
    const quad::QuadResult r = quad::periodic_trapezoid([](double t) { return std::exp(3.0 * std::cos(t)); },
                                                        2 * std::numbers::pi, p);
    CHECK(r.value / (2 * std::numbers::pi) == Approx(std::cyl_bessel_i(0.0, 3.0)).epsilon(1e-13));
    CHECK(r.evaluations < 200);
}
