#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmetop/quadrature.hpp"

#include <cmath>

using namespace qmetop::quad;

TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
    const auto f = [](double x) { return 5 * x * x * x * x; };  // int_0^1 = 1
    CHECK(gauss_legendre(f, 0, 1, 1, 8) == doctest::Approx(1.0).epsilon(1e-14));
    const auto& rule = gauss_legendre_rule(16);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive panels converge on a gaussian") {
    const auto f = [](double x) { return std::exp(-x * x); };
    const double got = adaptive_gauss(f, 0, 10, 1e-12);
    CHECK(got == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-12));
}

TEST_CASE("principal value of simple poles") {
    // P int_0^2 1/(w-1) dw = 0
    CHECK(std::abs(principal_value([](double) { return 1.0; }, 1.0, 2.0, 0.5)) <
          1e-12);
    // P int_0^2 w/(w-1) dw = 2
    CHECK(principal_value([](double w) { return w; }, 1.0, 2.0, 0.5) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // no pole on the contour: int_0^1 1/(w+1) dw = log 2
    CHECK(principal_value([](double) { return 1.0; }, -1.0, 1.0, 0.5) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("refining the target leaves the value stable") {
    const auto n = [](double w) { return w * std::exp(-w * w / 100.0); };
    PvSettings coarse;
    coarse.target = 1e-9;
    PvSettings fine;
    fine.target = 1e-12;
    const double a = principal_value(n, 1.0, 80.0, 1.0, coarse);
    const double b = principal_value(n, 1.0, 80.0, 1.0, fine);
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("non-convergent integrand reports its residual") {
    PvSettings s;
    s.target = 1e-13;
    s.max_doublings = 3;
    const auto spiky = [](double w) { return std::pow(std::abs(w - 0.3), -0.6); };
    CHECK_THROWS_AS(principal_value(spiky, -1.0, 1.0, 0.5, s), QuadratureError);
}

TEST_CASE("pole beyond the cutoff is rejected") {
    CHECK_THROWS_AS(principal_value([](double) { return 1.0; }, 3.0, 2.0, 0.5),
                    QuadratureError);
}
