// acceptance.cpp — end-to-end acceptance suite. Each criterion prints one
// PASS/FAIL line; the exit code is the number of failures.

#include "qmetop/io.hpp"
#include "qmetop/lindblad.hpp"
#include "qmetop/redfield.hpp"
#include "qmetop/sdp.hpp"
#include "qmetop/top.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace qmetop;
using qmetop::testing::max_abs;

namespace {

struct Harness {
    int failures = 0;

    // weak-duality ledger over every SDP solved anywhere in this run
    struct SolveRecord {
        double primal, dual, rel_gap;
    };
    std::vector<SolveRecord> solves;

    void record(const sdp::SdpSolution& sol) {
        solves.push_back({sol.primal_value, sol.dual_value,
                          std::abs(sol.gap) / std::max(1.0, std::abs(sol.primal_value))});
    }

    top::TopResult solve_top_recorded(const top::TopInstance& in, double tol = 1e-9) {
        const top::TopResult r = top::solve_top(in, tol);
        solves.push_back({r.tau_opt, r.tau_opt - r.gap,
                          std::abs(r.gap) / std::max(1.0, std::abs(r.tau_opt))});
        return r;
    }

    void criterion(int index, const std::string& label,
                   const std::function<bool(std::string&)>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL",
                    index, label.c_str(), secs, detail.empty() ? "" : " — ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

model::BathSpec reference_bath() {
    model::BathSpec spec;
    spec.beta = 1.0;
    spec.mu = -0.5;
    spec.omega_c = 10.0;
    return spec;
}

redfield::RedfieldParts reference_parts() {
    const model::XxzParams p = model::XxzParams::uniform(2, 1.0, 0.1, 1.0, 1);
    const model::EigenSystem sys = model::diagonalize(model::build_xxz(p));
    const opalg::OperatorBasis basis =
        opalg::product_basis(1, 1, opalg::BasisOrder::kMinusPlus);
    return redfield::build_parts(
        sys, redfield::CouplingSet::sigma_minus_first_qubit(2), reference_bath(),
        basis);
}

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

bool unlisted(int i, int j) {
    static const std::pair<int, int> skip[] = {{2, 10}, {10, 2}, {2, 15},
                                               {15, 2}, {3, 14}, {14, 3}};
    for (const auto& [a, b] : skip) {
        if (a == i + 1 && b == j + 1) return true;
    }
    return false;
}

top::TopInstance xxz_instance(int n, int n_l, double g, double beta) {
    top::TopInstance in;
    in.params = model::XxzParams::uniform(n, 1.0, g, 1.0, n_l);
    in.beta = beta;
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string data_dir = argc > 1 ? argv[1] : "tests/data";
    Harness h;

    redfield::RedfieldParts parts = reference_parts();

    h.criterion(1, "two-qubit coefficient matrix matches the reference", [&](std::string& detail) {
        const Matrix ref = reference_gamma();
        double worst = 0.0;
        for (int i = 0; i < 15; ++i) {
            for (int j = 0; j < 15; ++j) {
                if (unlisted(i, j)) continue;
                worst = std::max(worst, std::abs(parts.gamma(i, j) - ref(i, j)));
            }
        }
        // positions absent from the reference data are pinned by the pair
        // identity forced by the spectrum's equal gaps
        const double pair_defect =
            std::max(std::abs(parts.gamma(1, 9) + parts.gamma(1, 5)),
                     std::abs(parts.gamma(9, 1) + parts.gamma(5, 1)));
        double block = 0.0;
        for (int i = 3; i < 15; ++i) {
            for (int j = 3; j < 15; ++j) {
                block = std::max(block, std::abs(parts.gamma(i, j)));
            }
        }
        detail = "max entry deviation " + std::to_string(worst);
        return worst <= 2e-3 && pair_defect <= 1e-10 && block <= 1e-10;
    });

    h.criterion(2, "reference run violates complete positivity", [&](std::string& detail) {
        const redfield::CpReport report = redfield::cp_check(parts.gamma, 3);
        detail = "min eigenvalue " + std::to_string(report.min_eigenvalue) +
                 ", offdiag block norm " + std::to_string(report.offdiag_block_norm);
        return !report.is_psd && report.min_eigenvalue < 0.0 &&
               report.offdiag_block_norm > 0.01;
    });

    h.criterion(3, "conservation and thermalization audits", [&](std::string& detail) {
        const model::XxzParams p = model::XxzParams::uniform(2, 1.0, 0.1, 1.0, 1);
        const model::EigenSystem sys = model::diagonalize(model::build_xxz(p));
        const opalg::Superoperator l2 = redfield::generator(
            sys, redfield::CouplingSet::sigma_minus_first_qubit(2), reference_bath());
        auto gen = testing::rng(101);
        double worst_cons = 0.0;
        for (int t = 0; t < 50; ++t) {
            const Matrix rho = testing::random_density(gen, 4);
            const Matrix om = testing::random_hermitian(gen, 2);
            worst_cons = std::max(
                worst_cons, lindblad::conservation_residual(l2, rho, om, 2));
        }
        RealVector w(4);
        for (int i = 0; i < 4; ++i) w(i) = std::exp(-sys.energies(i));
        w /= w.sum();
        const Matrix rho_th =
            sys.vectors * w.cast<Complex>().asDiagonal() * sys.vectors.adjoint();
        const Matrix out = sys.to_eigenbasis(l2.apply(rho_th));
        double worst_th = 0.0;
        for (int i = 0; i < 4; ++i) worst_th = std::max(worst_th, std::abs(out(i, i)));
        detail = "conservation " + std::to_string(worst_cons) + ", thermal " +
                 std::to_string(worst_th);
        return worst_cons <= 1e-10 && worst_th <= 1e-6;
    });

    h.criterion(4, "trace-norm programs match the eigenvalue oracle", [&](std::string& detail) {
        auto gen = testing::rng(103);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const int n = 2 + (t % 11);   // up to 12x12
            const Matrix k = testing::random_hermitian(gen, n);
            const sdp::SdpProblem problem = sdp::trace_norm_sdp(k);
            const sdp::SdpSolution sol = sdp::solve(problem, 1e-10);
            h.record(sol);
            if (sol.status != sdp::SolveStatus::kOptimal) {
                detail = "solver failure at size " + std::to_string(n);
                return false;
            }
            Eigen::SelfAdjointEigenSolver<Matrix> es(k);
            const double oracle = es.eigenvalues().cwiseAbs().sum();
            worst = std::max(worst, std::abs(sol.primal_value - oracle));

            // the projector-split feasible pair attains the optimum
            Matrix pos = Matrix::Zero(n, n), neg = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                const Matrix proj =
                    es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
                if (es.eigenvalues()(i) >= 0)
                    pos += es.eigenvalues()(i) * proj;
                else
                    neg -= es.eigenvalues()(i) * proj;
            }
            Eigen::SelfAdjointEigenSolver<Matrix> f1(Matrix(pos - k)), f2(Matrix(neg + k)),
                f3(pos), f4(neg);
            const double feas =
                std::min(std::min(f1.eigenvalues().minCoeff(), f2.eigenvalues().minCoeff()),
                         std::min(f3.eigenvalues().minCoeff(), f4.eigenvalues().minCoeff()));
            const double attained = (pos.trace() + neg.trace()).real();
            if (feas < -1e-10 || std::abs(attained - oracle) > 1e-8) {
                detail = "feasible pair defect at size " + std::to_string(n);
                return false;
            }
        }
        detail = "max optimum deviation " + std::to_string(worst);
        return worst <= 1e-8;
    });

    h.criterion(6, "table generator and fresh solve at six qubits", [&](std::string& detail) {
        const Matrix table = io::load_table_matrix(data_dir + "/gamma_l_nl2_table.txt");
        top::TopInstance in = xxz_instance(6, 2, 0.1, 1.0);
        in.basis_order = opalg::BasisOrder::kMinusPlus;
        const double tau_table =
            top::tau_audit(table, Matrix::Zero(4, 4), in);
        top::TopInstance bumped = in;
        bumped.params.g[0] = 0.2;
        const double tau_bumped =
            top::tau_audit(table, Matrix::Zero(4, 4), bumped);
        const top::TopResult fresh = h.solve_top_recorded(in);
        detail = "table tau " + std::to_string(tau_table) + ", fresh tau_opt " +
                 std::to_string(fresh.tau_opt) + ", bumped tau " +
                 std::to_string(tau_bumped);
        return tau_table < 1e-3 && fresh.tau_opt < 1e-6 &&
               tau_bumped > 0.8 * 0.0014 && tau_bumped < 1.2 * 0.0014;
    });

    h.criterion(7, "single bath qubit: impossible across the grid", [&](std::string& detail) {
        const double gs[] = {0.05, 0.1, 0.3, 1.0};
        double tau[2][4];
        for (int m = 0; m < 2; ++m) {
            for (int k = 0; k < 4; ++k) {
                const top::TopResult r =
                    h.solve_top_recorded(xxz_instance(2 + m, 1, gs[k], 1.0));
                tau[m][k] = r.tau_opt;
                if (r.tau_opt <= 1e-6) {
                    detail = "tau_opt fell below delta at g=" + std::to_string(gs[k]);
                    return false;
                }
            }
        }
        for (int m = 0; m < 2; ++m) {
            for (int k = 1; k < 4; ++k) {
                if (tau[m][k] < tau[m][k - 1]) {
                    detail = "tau_opt not nondecreasing in g";
                    return false;
                }
            }
        }
        for (int k = 0; k < 4; ++k) {
            if (tau[1][k] > tau[0][k]) {
                detail = "tau_opt not nonincreasing in N_M";
                return false;
            }
        }
        detail = "tau_opt range [" + std::to_string(tau[1][0]) + ", " +
                 std::to_string(tau[0][3]) + "]";
        return true;
    });

    h.criterion(8, "two bath qubits: possible at weak coupling", [&](std::string& detail) {
        for (int m = 1; m <= 2; ++m) {
            const top::TopResult r = h.solve_top_recorded(xxz_instance(2 + m, 2, 0.1, 1.0));
            if (r.tau_opt >= 1e-6 || r.verdict != "possible") {
                detail = "N_M=" + std::to_string(m) + " tau_opt " +
                         std::to_string(r.tau_opt);
                return false;
            }
            detail += (detail.empty() ? "" : ", ") + std::string("N_M=") +
                      std::to_string(m) + " tau_opt " + std::to_string(r.tau_opt);
        }
        return true;
    });

    h.criterion(9, "bulk parameter changes keep the fixed generator thermal", [&](std::string& detail) {
        top::TopInstance base = xxz_instance(6, 2, 0.1, 1.0);
        const top::TopResult r = h.solve_top_recorded(base);
        const double floor = std::max(1e-8, 10.0 * r.gap);

        std::vector<model::XxzParams> variants;
        {   // Delta_3 = 0.4, Delta_4 = 1.2
            model::XxzParams v = base.params;
            v.delta[2] = 0.4;
            v.delta[3] = 1.2;
            variants.push_back(v);
        }
        {   // omega_3 = omega_4 = 1.5, g_5 = 0.3
            model::XxzParams v = base.params;
            v.omega0[2] = 1.5;
            v.omega0[3] = 1.5;
            v.g[4] = 0.3;
            variants.push_back(v);
        }
        {   // previous plus Delta_4 = 0.5
            model::XxzParams v = variants.back();
            v.delta[3] = 0.5;
            variants.push_back(v);
        }
        {   // g_3 = 0.3
            model::XxzParams v = base.params;
            v.g[2] = 0.3;
            variants.push_back(v);
        }
        double worst = 0.0;
        for (const auto& v : variants) {
            top::TopInstance in = base;
            in.params = v;
            worst = std::max(
                worst, top::tau_audit(r.gamma_l_opt, r.h_ls_opt, in));
        }
        detail = "worst bulk tau " + std::to_string(worst) + ", floor " +
                 std::to_string(floor);
        return worst < 1e-6 + floor;
    });

    h.criterion(10, "reduction objective equals the direct tau", [&](std::string& detail) {
        const top::TopInstance in = xxz_instance(3, 2, 0.1, 1.0);
        const top::Reduction red = top::build_reduction(in);
        auto gen = testing::rng(107);
        const sdp::BlockStructure u_block{sdp::BlockSpec{2 * red.n_l, false}};
        const Matrix h_s = model::build_xxz(in.params);
        double worst = 0.0;
        for (int t = 0; t < 30; ++t) {
            Matrix u = testing::random_psd(gen, red.n_l);
            u /= u.trace();
            const Matrix s = testing::random_psd(gen, in.dim_l());
            const Matrix tm = testing::random_psd(gen, in.dim_l());
            const RealVector g = red.g_map.rightCols(red.svec_u()) *
                                 sdp::svec(u_block, {sdp::complex_embed(u)});
            double objective = 0.0;
            for (Eigen::Index i = 0; i < g.size(); ++i) objective += std::abs(g(i));
            lindblad::LocalLindblad ll;
            ll.gamma_l = u;
            ll.h_ls_l = s - tm;
            ll.basis_order = in.basis_order;
            worst = std::max(worst,
                             std::abs(objective - lindblad::tau(ll, h_s, in.beta)));
        }
        detail = "max defect " + std::to_string(worst);
        return worst <= 1e-10;
    });

    h.criterion(11, "single-qubit optimum is certified zero", [&](std::string& detail) {
        top::TopInstance in;
        in.params = model::XxzParams::uniform(1, 1.0, 0.0, 0.0, 1);
        in.beta = 1.0;
        lindblad::LocalLindblad db;
        db.gamma_l = Matrix::Zero(3, 3);
        db.gamma_l(1, 1) = std::exp(-1.0);
        db.gamma_l(2, 2) = 1.0;
        db.gamma_l /= db.gamma_l.trace();
        db.h_ls_l = Matrix::Zero(2, 2);
        const double tau_db = lindblad::tau(db, model::build_xxz(in.params), in.beta);
        const top::TopResult r = h.solve_top_recorded(in, 1e-10);
        detail = "tau_opt " + std::to_string(r.tau_opt) + ", certificate tau " +
                 std::to_string(tau_db);
        return r.tau_opt <= 1e-9 && tau_db <= 1e-12;
    });

    // criterion 5 audits every solve recorded above
    h.criterion(5, "weak duality holds across the whole suite", [&](std::string& detail) {
        double worst_violation = 0.0, worst_gap = 0.0;
        for (const auto& rec : h.solves) {
            worst_violation = std::max(
                worst_violation,
                rec.dual - rec.primal - 1e-9 * std::max(1.0, std::abs(rec.primal)));
            worst_gap = std::max(worst_gap, rec.rel_gap);
        }
        detail = std::to_string(h.solves.size()) + " solves, worst relative gap " +
                 std::to_string(worst_gap);
        return worst_violation <= 0.0 && worst_gap <= 1e-9;
    });

    if (h.failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria failed\n", h.failures);
    }
    return h.failures;
}
