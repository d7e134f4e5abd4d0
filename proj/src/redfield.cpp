#include "qmetop/redfield.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace qmetop::redfield {

using opalg::OperatorBasis;
using opalg::Superoperator;

CouplingSet CouplingSet::sigma_minus_first_qubit(int n_qubits) {
    CouplingSet set;
    set.items.push_back(
        Coupling{model::site_operator(opalg::sigma_minus(), 0, n_qubits),
                 Pairing::kCommutatorWithCoupling});
    return set;
}

void CouplingSet::validate(int dim_l, int dim_m, double tol) const {
    std::mt19937_64 rng(0x5eedu);
    std::normal_distribution<double> dist;
    for (const Coupling& c : items) {
        if (c.op.rows() != Eigen::Index(dim_l) * dim_m || c.op.rows() != c.op.cols()) {
            throw std::invalid_argument("CouplingSet: operator dimension mismatch");
        }
        for (int probe = 0; probe < 4; ++probe) {
            Matrix om(dim_m, dim_m);
            for (Eigen::Index i = 0; i < om.rows(); ++i)
                for (Eigen::Index j = 0; j < om.cols(); ++j)
                    om(i, j) = Complex(dist(rng), dist(rng));
            om = Matrix(0.5 * (om + om.adjoint()));
            const Matrix lifted = opalg::kron(opalg::identity(dim_l), om);
            const double comm =
                (c.op * lifted - lifted * c.op).cwiseAbs().maxCoeff();
            if (comm > tol * std::max(1.0, om.cwiseAbs().maxCoeff())) {
                throw std::invalid_argument(
                    "CouplingSet: operator does not commute with I_L (x) O_M");
            }
        }
    }
}

FilteredOperators filtered_operators(const model::EigenSystem& sys,
                                     const Matrix& s_op, const model::BathSpec& spec,
                                     const quad::PvSettings& pv, double element_tol) {
    const int d = sys.dim();
    const Matrix s_eig = sys.to_eigenbasis(s_op);
    Matrix s1 = Matrix::Zero(d, d);
    Matrix s2 = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            const Complex m = s_eig(j, k);
            if (std::abs(m) < element_tol) continue;
            const double gap = sys.energies(k) - sys.energies(j);
            const model::BathCoefficients cd = model::bath_coeffs(gap, spec, pv);
            s1(j, k) = m * cd.d;
            s2(j, k) = m * cd.c;
        }
    }
    return FilteredOperators{sys.from_eigenbasis(s1), sys.from_eigenbasis(s2)};
}

namespace {

// -eps^2 { [W, S1 rho] - [W, rho S2] + h.c. } as explicit left/right terms
void add_coupling_terms(Superoperator& sop, const Matrix& W, const Matrix& S1,
                        const Matrix& S2, double epsilon2) {
    const int d = static_cast<int>(W.rows());
    const Matrix id = opalg::identity(d);
    const Matrix Wd = W.adjoint();
    const Complex e2(-epsilon2, 0.0);
    // [W, S1 rho] = W S1 rho - S1 rho W
    sop.add_term(e2 * (W * S1), id);
    sop.add_term(-e2 * S1, W);
    // -[W, rho S2] = -W rho S2 + rho S2 W
    sop.add_term(-e2 * W, S2);
    sop.add_term(e2 * id, S2 * W);
    // h.c. of the first commutator: rho S1^dag W^dag - W^dag rho S1^dag
    sop.add_term(e2 * id, S1.adjoint() * Wd);
    sop.add_term(-e2 * Wd, S1.adjoint());
    // h.c. of the second: W^dag S2^dag rho - S2^dag rho W^dag
    sop.add_term(e2 * (Wd * S2.adjoint()), id);
    sop.add_term(-e2 * S2.adjoint(), Wd);
}

Matrix commutator_operator(const Coupling& c) {
    return c.pairing == Pairing::kCommutatorWithCoupling ? c.op
                                                         : Matrix(c.op.adjoint());
}

}  // namespace

Superoperator generator(const model::EigenSystem& sys, const CouplingSet& couplings,
                        const model::BathSpec& spec, double epsilon2,
                        const quad::PvSettings& pv) {
    Superoperator sop(sys.dim());
    for (const Coupling& c : couplings.items) {
        const FilteredOperators f = filtered_operators(sys, c.op, spec, pv);
        add_coupling_terms(sop, commutator_operator(c), f.s1, f.s2, epsilon2);
    }
    return sop;
}

RedfieldParts build_parts(const model::EigenSystem& sys, const CouplingSet& couplings,
                          const model::BathSpec& spec, const OperatorBasis& basis,
                          double epsilon2, const quad::PvSettings& pv,
                          double recon_tol) {
    const int d = basis.dim();
    if (d != sys.dim()) {
        throw std::invalid_argument("build_parts: basis/system dimension mismatch");
    }
    const int n = d * d;
    RedfieldParts parts;
    parts.epsilon2 = epsilon2;
    parts.basis = basis;
    parts.gamma = Matrix::Zero(n - 1, n - 1);
    parts.h_ls = Matrix::Zero(d, d);

    for (const Coupling& c : couplings.items) {
        const FilteredOperators f = filtered_operators(sys, c.op, spec, pv);
        parts.s1.push_back(f.s1);
        parts.s2.push_back(f.s2);

        const Matrix W = commutator_operator(c);
        // expansions over the full basis, identity included
        const Vector a = opalg::expand(W.adjoint(), basis);   // "S" slot
        const Vector ap = opalg::expand(W, basis);            // "S^dag" slot
        const Vector b = opalg::expand(f.s1, basis);
        const Vector cp = opalg::expand(Matrix(f.s2.adjoint()), basis);

        for (int al = 0; al + 1 < n; ++al) {
            for (int be = 0; be + 1 < n; ++be) {
                parts.gamma(al, be) +=
                    epsilon2 * (std::conj(a(al)) * b(be) + std::conj(cp(al)) * ap(be) +
                                std::conj(b(al)) * a(be) + std::conj(ap(al)) * cp(be));
            }
        }

        // Lamb shift: commutator remainder of the expansion
        const Complex inv2i(0.0, -0.5);   // 1/(2i)
        const double sqrt_d = std::sqrt(double(d));
        for (int al = 0; al < n; ++al) {
            for (int be = 0; be < n; ++be) {
                const Complex w =
                    inv2i * (std::conj(a(al)) * b(be) - std::conj(cp(al)) * ap(be) -
                             std::conj(b(al)) * a(be) + std::conj(ap(al)) * cp(be));
                if (w != Complex(0, 0)) {
                    parts.h_ls +=
                        epsilon2 * w * basis.elements[al].adjoint() * basis.elements[be];
                }
            }
        }
        const int last = n - 1;
        for (int al = 0; al + 1 < n; ++al) {
            const Complex u =
                inv2i / sqrt_d *
                (std::conj(a(al)) * b(last) + std::conj(cp(al)) * ap(last) +
                 std::conj(b(al)) * a(last) + std::conj(ap(al)) * cp(last));
            parts.h_ls += epsilon2 * u * basis.elements[al].adjoint();
            const Complex v =
                inv2i / sqrt_d *
                (std::conj(a(last)) * b(al) + std::conj(cp(last)) * ap(al) +
                 std::conj(b(last)) * a(al) + std::conj(ap(last)) * cp(al));
            parts.h_ls -= epsilon2 * v * basis.elements[al];
        }
    }

    // drop numerical skew, keep the matrices exactly hermitian
    parts.gamma = 0.5 * (parts.gamma + parts.gamma.adjoint()).eval();
    parts.h_ls = 0.5 * (parts.h_ls + parts.h_ls.adjoint()).eval();

    // internal consistency: the Lindblad-form template must rebuild the
    // direct generator
    const Superoperator direct = generator(sys, couplings, spec, epsilon2, pv);
    const Superoperator rebuilt = lindblad_template(parts.gamma, parts.h_ls, basis);
    const double defect = (direct.dense() - rebuilt.dense()).cwiseAbs().maxCoeff();
    if (defect > recon_tol) {
        throw std::runtime_error(
            "build_parts: Lindblad-template reconstruction mismatch, defect " +
            std::to_string(defect));
    }
    return parts;
}

Superoperator lindblad_template(const Matrix& gamma, const Matrix& h_ls,
                                const OperatorBasis& basis) {
    const int d = basis.dim();
    const int n = d * d;
    if (gamma.rows() != n - 1 || gamma.cols() != n - 1) {
        throw std::invalid_argument("lindblad_template: gamma has wrong size");
    }
    Superoperator sop(d);
    sop.add_hamiltonian(h_ls);   // i [rho, H_LS]
    Matrix anti = Matrix::Zero(d, d);
    for (int al = 0; al + 1 < n; ++al) {
        for (int be = 0; be + 1 < n; ++be) {
            const Complex g = gamma(al, be);
            if (g == Complex(0, 0)) continue;
            sop.add_term(g * basis.elements[be],
                         Matrix(basis.elements[al].adjoint()));
            anti += g * basis.elements[al].adjoint() * basis.elements[be];
        }
    }
    sop.add_term(Matrix(-0.5 * anti), opalg::identity(d));
    sop.add_term(opalg::identity(d), Matrix(-0.5 * anti));
    return sop;
}

CpReport cp_check(const Matrix& gamma, int local_count, double tol_rel) {
    opalg::require_hermitian(gamma, "cp_check", 1e-10);
    CpReport report;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gamma);
    report.min_eigenvalue = es.eigenvalues().minCoeff();
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const double tol = tol_rel * scale;
    report.is_psd = report.min_eigenvalue >= -tol;
    const int n = static_cast<int>(gamma.rows());
    for (int j = 0; j < n; ++j) {
        if (std::abs(gamma(j, j)) <= tol) {
            double row = 0.0;
            for (int i = 0; i < n; ++i) {
                if (i != j) row = std::max(row, std::abs(gamma(j, i)));
            }
            if (row > tol) report.lemma1_violations.push_back(j);
        }
    }
    if (local_count > 0 && local_count < n) {
        report.offdiag_block_norm =
            gamma.block(0, local_count, local_count, n - local_count).norm();
    }
    return report;
}

}  // namespace qmetop::redfield
