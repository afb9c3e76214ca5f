#pragma once

// Real-argument special functions used by the closed-form channel statistics.
//
// Everything here is a pure function of its arguments. Bessel K is evaluated
// with Temme's series (x < 2) or Steed's continued fraction (x >= 2) for the
// fractional part of the order, followed by upward recurrence carried in log
// space, so very large orders at small arguments never overflow internally.

#include <cstddef>
#include <optional>
#include <vector>

namespace gstwdp::specfun {

struct EvalPolicy {
    double rel_tol = 1e-12;
    int max_terms = 500;

    void validate() const;
};

double ln_gamma(double x);

/// Gamma function for any real argument that is not a pole; long double
/// precision because the CDF series multiplies it with large powers.
long double gamma_signed(long double x);

/// I_n(x) for integer order and any real x, with I_{-n} = I_n and
/// I_n(-x) = (-1)^n I_n(x).
double bessel_i_int(int n, double x);
long double bessel_i_int_ld(int n, long double x);

double bessel_k(double nu, double x);
double log_bessel_k(double nu, double x);

/// log K_{nu0 + i}(x) for i = 0, 1, 2, ... with nu0 >= 0.  The ladder is
/// extended lazily by the ratio form of the upward recurrence.
class BesselKLadder {
public:
    BesselKLadder(double nu0, double x);

    double log_value(std::size_t i);
    double order0() const { return nu0_; }
    double argument() const { return x_; }

private:
    void extend_to(std::size_t i);

    double nu0_;
    double x_;
    std::vector<double> log_k_;  // log K_{nu0+i}
    double ratio_;               // K_{nu0+n}/K_{nu0+n-1}, n = log_k_.size()
};

/// log K_{|nu0 + i|}(x) for i = 0, 1, 2, ... and arbitrary real nu0; uses
/// K_{-nu} = K_nu and two non-negative ladders when nu0 < 0.
class AbsOrderBesselKLadder {
public:
    AbsOrderBesselKLadder(double nu0, double x);

    double log_value(std::size_t i);

private:
    double nu0_;
    long split_ = -1;  // largest i with nu0 + i <= 0, or -1
    std::optional<BesselKLadder> low_;
    std::optional<BesselKLadder> high_;
};

/// 1F2(a; b1, b2; z) by direct summation in extended precision.
double hyp1f2(double a, double b1, double b2, double z, const EvalPolicy& policy = {});
long double hyp1f2_ld(long double a, long double b1, long double b2, long double z,
                      const EvalPolicy& policy = {});

/// Tricomi U(a, b, z) for a > 0, z > 0 from its Laplace-type integral.
double tricomi_u(double a, double b, double z);

/// z^a U(a, b, z), which stays in (0, 1] whenever b <= a + 1.
double tricomi_u_scaled(double a, double b, double z);

double gaussian_q(double x);

}  // namespace gstwdp::specfun
