#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmetop/redfield.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>

using namespace qmetop;
using namespace qmetop::redfield;
using qmetop::testing::max_abs;

namespace {

model::BathSpec reference_bath() {
    model::BathSpec spec;
    spec.beta = 1.0;
    spec.mu = -0.5;
    spec.omega_c = 10.0;
    return spec;
}

struct TwoQubitSetup {
    model::EigenSystem sys;
    CouplingSet couplings;
    opalg::OperatorBasis basis;
};

TwoQubitSetup two_qubit_setup() {
    TwoQubitSetup s;
    const model::XxzParams p = model::XxzParams::uniform(2, 1.0, 0.1, 1.0, 1);
    s.sys = model::diagonalize(model::build_xxz(p));
    s.couplings = CouplingSet::sigma_minus_first_qubit(2);
    s.basis = opalg::product_basis(1, 1, opalg::BasisOrder::kMinusPlus);
    return s;
}

// 15x15 reference for the two-qubit run (3-decimal entries; only the listed
// positions are nonzero). Six positions are omitted from the reference data
// and pinned by the pair identities asserted below instead.
Matrix reference_gamma() {
    Matrix g = Matrix::Zero(15, 15);
    const auto set = [&](int i, int j, double re, double im) {
        g(i - 1, j - 1) = Complex(re, im);
        g(j - 1, i - 1) = Complex(re, -im);
    };
    set(2, 3, 1.542, 3.428);
    set(2, 6, 0.014, 0.047);
    set(3, 5, -0.18, -0.007);
    set(3, 7, 0.18, 0.007);
    return g;
}

const std::vector<std::pair<int, int>>& unlisted_positions() {
    // 1-based; values forced by the spectrum's equal gaps, absent from the
    // reference table
    static const std::vector<std::pair<int, int>> p{{2, 10}, {10, 2}, {2, 15},
                                                    {15, 2}, {3, 14}, {14, 3}};
    return p;
}

bool is_unlisted(int i, int j) {
    for (const auto& [a, b] : unlisted_positions()) {
        if (a == i + 1 && b == j + 1) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("single-qubit filtered operators have one matrix element") {
    const model::XxzParams p = model::XxzParams::uniform(1, 1.0, 0.0, 0.0, 1);
    const model::EigenSystem sys = model::diagonalize(model::build_xxz(p));
    const model::BathSpec spec = reference_bath();
    const Matrix s_op = opalg::sigma_minus();
    const FilteredOperators f = filtered_operators(sys, s_op, spec);

    const model::BathCoefficients cd = model::bath_coeffs(1.0, spec);
    // eigenbasis: E_1 = -1/2 is |down>, E_2 = +1/2 is |up>; <E_1|s_-|E_2> = 1
    const Matrix s1_eig = sys.to_eigenbasis(f.s1);
    int nonzero = 0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            if (std::abs(s1_eig(j, k)) > 1e-14) ++nonzero;
        }
    }
    CHECK(nonzero == 1);
    CHECK(std::abs(s1_eig(0, 1) - cd.d) < 1e-10);
    const Matrix s2_eig = sys.to_eigenbasis(f.s2);
    CHECK(std::abs(s2_eig(0, 1) - cd.c) < 1e-10);
}

TEST_CASE("zero coupling elements contribute nothing") {
    const TwoQubitSetup s = two_qubit_setup();
    const FilteredOperators f =
        filtered_operators(s.sys, s.couplings.items[0].op, reference_bath());
    const Matrix s_eig = s.sys.to_eigenbasis(s.couplings.items[0].op);
    const Matrix s1_eig = s.sys.to_eigenbasis(f.s1);
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            if (std::abs(s_eig(j, k)) < 1e-14) {
                CHECK(std::abs(s1_eig(j, k)) < 1e-12);
            }
        }
    }
}

TEST_CASE("generator annihilates traces and preserves hermiticity") {
    const TwoQubitSetup s = two_qubit_setup();
    const opalg::Superoperator l2 =
        generator(s.sys, s.couplings, reference_bath());
    auto gen = testing::rng(41);
    for (int t = 0; t < 20; ++t) {
        const Matrix rho = testing::random_matrix(gen, 4, 4);
        const Matrix out = l2.apply(rho);
        CHECK(std::abs(out.trace()) < 1e-10 * std::max(1.0, max_abs(out)));
        const Matrix herm = l2.apply(Matrix(rho.adjoint()));
        CHECK(max_abs(Matrix(out.adjoint()) - herm) < 1e-10);
    }
}

TEST_CASE("thermal state diagonal residuals vanish") {
    const TwoQubitSetup s = two_qubit_setup();
    const model::BathSpec spec = reference_bath();
    const opalg::Superoperator l2 = generator(s.sys, s.couplings, spec);
    const Matrix rho_th =
        model::gibbs(s.sys.from_eigenbasis(
                         Matrix(s.sys.energies.cast<Complex>().asDiagonal())),
                     spec.beta);
    const Matrix out = s.sys.to_eigenbasis(l2.apply(rho_th));
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(out(i, i)) < 1e-6);
    }
}

TEST_CASE("adjoint pairing thermalizes a KMS bath") {
    // sigma_+ commutators with mu = 0: textbook damped channels whose
    // populations balance at the Gibbs state
    const model::XxzParams p = model::XxzParams::uniform(2, 1.0, 0.1, 1.0, 1);
    const model::EigenSystem sys = model::diagonalize(model::build_xxz(p));
    model::BathSpec spec;
    spec.beta = 1.0;
    spec.mu = 0.0;
    spec.omega_c = 10.0;
    CouplingSet couplings = CouplingSet::sigma_minus_first_qubit(2);
    couplings.items[0].pairing = Pairing::kCommutatorWithAdjoint;
    const opalg::Superoperator l2 = generator(sys, couplings, spec);
    const Matrix rho_th = model::gibbs(
        sys.from_eigenbasis(Matrix(sys.energies.cast<Complex>().asDiagonal())),
        spec.beta);
    const Matrix out = sys.to_eigenbasis(l2.apply(rho_th));
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(out(i, i)) < 1e-12);
    }
    // and populations genuinely move: the excited state decays
    const Matrix top_state = sys.vectors.col(3) * sys.vectors.col(3).adjoint();
    const Matrix rate = sys.to_eigenbasis(l2.apply(top_state));
    CHECK(rate(3, 3).real() < -1e-3);
}

TEST_CASE("local conservation residuals vanish for random probes") {
    const TwoQubitSetup s = two_qubit_setup();
    const opalg::Superoperator l2 =
        generator(s.sys, s.couplings, reference_bath());
    const Matrix id2 = opalg::identity(2);
    auto gen = testing::rng(43);
    for (int t = 0; t < 50; ++t) {
        const Matrix rho = testing::random_density(gen, 4);
        const Matrix om = testing::random_hermitian(gen, 2);
        const Matrix lifted = opalg::kron(id2, om);
        CHECK(std::abs((lifted * l2.apply(rho)).trace()) < 1e-10);
    }
}

TEST_CASE("coefficient matrix reproduces the reference run") {
    const TwoQubitSetup s = two_qubit_setup();
    const RedfieldParts parts =
        build_parts(s.sys, s.couplings, reference_bath(), s.basis);

    CHECK(max_abs(parts.gamma - parts.gamma.adjoint()) < 1e-10);
    CHECK(max_abs(parts.h_ls - parts.h_ls.adjoint()) < 1e-10);

    const Matrix ref = reference_gamma();
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 15; ++j) {
            if (is_unlisted(i, j)) continue;
            CHECK(std::abs(parts.gamma(i, j) - ref(i, j)) < 2e-3);
        }
    }
    // positions omitted from the reference are the forced partners of listed
    // entries: equal energy gaps tie (2,10) to -(2,6)
    CHECK(std::abs(parts.gamma(1, 9) + parts.gamma(1, 5)) < 1e-10);
    CHECK(std::abs(parts.gamma(9, 1) + parts.gamma(5, 1)) < 1e-10);
    for (const auto& [i, j] : unlisted_positions()) {
        CHECK(std::abs(parts.gamma(i - 1, j - 1)) < 0.05);
    }

    // the nonlocal diagonal block is exactly zero
    for (int i = 3; i < 15; ++i) {
        for (int j = 3; j < 15; ++j) {
            CHECK(std::abs(parts.gamma(i, j)) < 1e-10);
        }
    }
}

TEST_CASE("lindblad template rebuilds the direct generator") {
    const TwoQubitSetup s = two_qubit_setup();
    const model::BathSpec spec = reference_bath();
    const RedfieldParts parts = build_parts(s.sys, s.couplings, spec, s.basis);
    const opalg::Superoperator direct = generator(s.sys, s.couplings, spec);
    const opalg::Superoperator rebuilt =
        lindblad_template(parts.gamma, parts.h_ls, s.basis);
    CHECK(max_abs(direct.dense() - rebuilt.dense()) < 1e-8);
}

TEST_CASE("gamma eigenvalues scale linearly in the coupling square") {
    const TwoQubitSetup s = two_qubit_setup();
    const model::BathSpec spec = reference_bath();
    const RedfieldParts base = build_parts(s.sys, s.couplings, spec, s.basis, 1.0);
    const RedfieldParts scaled = build_parts(s.sys, s.couplings, spec, s.basis, 2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> e1(base.gamma), e2(scaled.gamma);
    CHECK(std::abs(e2.eigenvalues().minCoeff() - 2.0 * e1.eigenvalues().minCoeff()) <
          1e-10);
    CHECK(std::abs(e2.eigenvalues().maxCoeff() - 2.0 * e1.eigenvalues().maxCoeff()) <
          1e-10);
    CHECK(e1.eigenvalues().minCoeff() < 0.0);   // both signs present at order eps^2
    CHECK(e1.eigenvalues().maxCoeff() > 0.0);
}

TEST_CASE("cp_check verdicts") {
    const TwoQubitSetup s = two_qubit_setup();
    const RedfieldParts parts =
        build_parts(s.sys, s.couplings, reference_bath(), s.basis);
    const CpReport report = cp_check(parts.gamma, s.basis.local_count());
    CHECK_FALSE(report.is_psd);
    CHECK(report.min_eigenvalue < 0.0);
    CHECK(report.offdiag_block_norm > 0.01);

    // brute-force eigendecomposition oracle
    Eigen::SelfAdjointEigenSolver<Matrix> es(parts.gamma);
    CHECK(report.min_eigenvalue ==
          doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-12));

    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 1;
    diag(1, 1) = 2;
    diag(2, 2) = 3;
    const CpReport ok = cp_check(diag, 2);
    CHECK(ok.is_psd);
    CHECK(ok.lemma1_violations.empty());

    Matrix bad(2, 2);
    bad << 1, 1, 1, 0;
    const CpReport lemma = cp_check(bad, 1);
    CHECK_FALSE(lemma.is_psd);
    REQUIRE(lemma.lemma1_violations.size() == 1);
    CHECK(lemma.lemma1_violations[0] == 1);
}

TEST_CASE("couplings that touch H_M are rejected") {
    CouplingSet bad;
    bad.items.push_back({opalg::kron(opalg::identity(2), opalg::sigma_minus()),
                         Pairing::kCommutatorWithCoupling});
    CHECK_THROWS_AS(bad.validate(2, 2), std::invalid_argument);
    CouplingSet good = CouplingSet::sigma_minus_first_qubit(2);
    good.validate(2, 2);
}
