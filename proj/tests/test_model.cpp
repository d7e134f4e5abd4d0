#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmetop/model.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace qmetop;
using namespace qmetop::model;
using qmetop::testing::max_abs;

TEST_CASE("single-qubit field hamiltonian") {
    const XxzParams p = XxzParams::uniform(1, 1.0, 0.0, 0.0, 1);
    const Matrix h = build_xxz(p);
    CHECK(std::abs(h(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(h(1, 1) + 0.5) < 1e-15);
    CHECK(std::abs(h(0, 1)) == 0.0);
}

TEST_CASE("two-qubit spectrum matches the closed form") {
    // omega0 = 1, g = 0.1, Delta = 1: energies -1.1, -0.1, 0.3, 0.9
    const XxzParams p = XxzParams::uniform(2, 1.0, 0.1, 1.0, 1);
    const Matrix h = build_xxz(p);
    CHECK(max_abs(h - h.adjoint()) == 0.0);
    const EigenSystem sys = diagonalize(h);
    const double expected[4] = {-1.1, -0.1, 0.3, 0.9};
    for (int i = 0; i < 4; ++i) {
        CHECK(sys.energies(i) == doctest::Approx(expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("xxz conserves total magnetization") {
    auto gen = testing::rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        XxzParams p = XxzParams::uniform(3, 1.0, 0.1, 1.0, 1);
        for (auto& w : p.omega0) w = u(gen);
        for (auto& w : p.g) w = u(gen);
        for (auto& w : p.delta) w = u(gen);
        const Matrix h = build_xxz(p);
        Matrix mz = Matrix::Zero(8, 8);
        for (int l = 0; l < 3; ++l) mz += site_operator(opalg::sigma_z(), l, 3);
        CHECK(max_abs(h * mz - mz * h) < 1e-12);
    }
}

TEST_CASE("gibbs state properties") {
    // infinite temperature
    auto gen = testing::rng(29);
    const Matrix h4 = testing::random_hermitian(gen, 4);
    CHECK(max_abs(gibbs(h4, 0.0) - Matrix::Identity(4, 4) / 4.0) < 1e-14);

    // closed-form single-qubit populations
    const Matrix h = build_xxz(XxzParams::uniform(1, 1.0, 0.0, 0.0, 1));
    const Matrix rho = gibbs(h, 1.0);
    const double z = std::exp(0.5) + std::exp(-0.5);
    CHECK(std::abs(rho(0, 0) - std::exp(-0.5) / z) < 1e-14);
    CHECK(std::abs(rho(1, 1) - std::exp(0.5) / z) < 1e-14);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-14);

    for (double beta : {0.0, 0.1, 1.0, 10.0}) {
        const Matrix hh = testing::random_hermitian(gen, 5);
        const Matrix r = gibbs(hh, beta);
        CHECK(std::abs(r.trace() - 1.0) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(r);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        CHECK(max_abs(r * hh - hh * r) < 1e-10);
    }
}

TEST_CASE("spectral density") {
    BathSpec spec;
    spec.omega_c = 10.0;
    CHECK(spectral_density(-1.0, spec) == 0.0);
    CHECK(spectral_density(0.0, spec) == 0.0);
    CHECK(spectral_density(1.0, spec) ==
          doctest::Approx(std::exp(-0.01)).epsilon(1e-15));
}

TEST_CASE("bose occupation identities") {
    CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double w : {0.3, 1.0, 2.5}) {
        const double n = bose_occupation(w, 1.3);
        CHECK(std::abs((n + 1.0) - std::exp(1.3 * w) * n) < 1e-12);
        CHECK(std::abs(bose_occupation(-w, 1.3) + (1.0 + n)) < 1e-12);
    }
    CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::domain_error);
}

TEST_CASE("bath coefficients against the high-resolution oracle") {
    // frozen from a 30-digit adaptive principal-value evaluation
    // (pole-symmetrized windows, cross-checked under grid refinement)
    BathSpec spec;
    spec.beta = 1.0;
    spec.mu = -0.5;
    spec.omega_c = 10.0;

    const BathCoefficients at1 = bath_coeffs(1.0, spec);
    CHECK(std::abs(at1.c - Complex(0.14217953035838382, -0.0063648405544057434)) <
          1e-9);
    CHECK(std::abs(at1.d - Complex(0.63720444723296785, -1.7053718680411004)) < 1e-9);

    const BathCoefficients atm1 = bath_coeffs(-1.0, spec);
    CHECK(std::abs(atm1.c - Complex(0.0, -0.049897434318131327)) < 1e-9);
    CHECK(std::abs(atm1.d - Complex(0.0, -1.1157939923879704)) < 1e-9);

    // negative gaps kill the real parts outright
    CHECK(bath_coeffs(-0.25, spec).c.real() == 0.0);
}

TEST_CASE("detailed balance ratio of the real parts") {
    BathSpec spec;
    spec.beta = 0.7;
    spec.mu = -0.3;
    spec.omega_c = 10.0;
    for (double e : {0.2, 0.6, 1.0, 1.7, 2.5}) {
        const BathCoefficients cd = bath_coeffs(e, spec);
        CHECK(std::abs(cd.d.real() / cd.c.real() - std::exp(spec.beta * (e - spec.mu))) <
              1e-10);
    }
}

TEST_CASE("absorption weight approaches 1/beta at zero gap") {
    BathSpec spec;
    spec.beta = 2.0;
    spec.mu = 0.0;
    spec.omega_c = 10.0;
    const BathCoefficients cd = bath_coeffs(1e-8, spec);
    CHECK(cd.c.real() == doctest::Approx(0.5 / spec.beta).epsilon(1e-6));
}

TEST_CASE("singular and invalid bath inputs are rejected") {
    BathSpec spec;
    CHECK_THROWS_AS(bath_coeffs(0.0, spec), std::domain_error);
    spec.mu = 0.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.mu = 0.0;
    spec.beta = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("diagonalize flags degeneracies and fixes phases") {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    h(2, 2) = 2.0;
    const EigenSystem sys = diagonalize(h);
    REQUIRE(sys.degenerate_pairs.size() == 1);
    CHECK(sys.degenerate_pairs[0] == std::make_pair(0, 1));

    auto gen = testing::rng(31);
    const Matrix hr = testing::random_hermitian(gen, 6);
    const EigenSystem s2 = diagonalize(hr);
    CHECK(max_abs(hr * s2.vectors - s2.vectors * s2.energies.cast<Complex>().asDiagonal()) <
          1e-10);
    for (int k = 0; k < 6; ++k) {
        Eigen::Index imax;
        s2.vectors.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(s2.vectors(imax, k).imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(s2.vectors(imax, k).real() > 0.0);
    }
}
