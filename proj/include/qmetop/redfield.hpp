// redfield.hpp — Redfield generator for a chain whose first qubits couple to
// one bosonic bath; extraction of the coefficient matrix Gamma and the Lamb
// shift; complete-positivity audit.

#pragma once

#include "qmetop/model.hpp"
#include "qmetop/opalg.hpp"

#include <vector>

namespace qmetop::redfield {

// The generator is assembled as
//   L2(rho) = -eps^2 sum_l { [W_l, S1_l rho] - [W_l, rho S2_l] + h.c. }
// where S1, S2 are the bath-filtered versions of the coupling operator.
// The pairing tag picks the commutator operator W: the adjoint of the
// coupling (textbook-damped channels) or the coupling itself.
enum class Pairing {
    kCommutatorWithCoupling,   // W = S
    kCommutatorWithAdjoint,    // W = S^dag
};

struct Coupling {
    Matrix op;                                   // supported on H_L (x) I_M
    Pairing pairing = Pairing::kCommutatorWithCoupling;
};

struct CouplingSet {
    std::vector<Coupling> items;

    // sigma_- on qubit 1 of an n-qubit chain (the default coupling).
    static CouplingSet sigma_minus_first_qubit(int n_qubits);
    // each op must commute with I_L (x) O_M; checked on random O_M probes
    void validate(int dim_l, int dim_m, double tol = 1e-12) const;
};

struct FilteredOperators {
    Matrix s1;   // emission-weighted, D(j,k) <E_j|S|E_k>
    Matrix s2;   // absorption-weighted, C(j,k) <E_j|S|E_k>
};

// S1 = sum_{jk} |E_j><E_j| S |E_k><E_k| D(j,k),  S2 likewise with C(j,k),
// with the gap E_k - E_j handed to model::bath_coeffs. Matrix elements below
// `element_tol` contribute nothing (their coefficients are never evaluated).
FilteredOperators filtered_operators(const model::EigenSystem& sys,
                                     const Matrix& s_op, const model::BathSpec& spec,
                                     const quad::PvSettings& pv = {},
                                     double element_tol = 1e-13);

// The epsilon^2 part of the Redfield equation as a superoperator (the H_S
// commutator is not included).
opalg::Superoperator generator(const model::EigenSystem& sys,
                               const CouplingSet& couplings,
                               const model::BathSpec& spec, double epsilon2 = 1.0,
                               const quad::PvSettings& pv = {});

struct RedfieldParts {
    std::vector<Matrix> s1, s2;     // per coupling
    Matrix gamma;                   // (d^2-1) x (d^2-1), hermitian
    Matrix h_ls;                    // d x d, hermitian
    double epsilon2 = 1.0;
    opalg::OperatorBasis basis;     // local-first basis the coefficients refer to
};

// Expand the generator in the local-first basis: Gamma from the coefficient
// bilinears, H_LS from the commutator remainder. The reconstruction
//   i[rho, H_LS] + sum Gamma_{ab} (F_b rho F_a^dag - 1/2 {F_a^dag F_b, rho})
// is checked against the direct generator; a mismatch beyond `recon_tol`
// (max-absolute-entry norm) throws.
RedfieldParts build_parts(const model::EigenSystem& sys, const CouplingSet& couplings,
                          const model::BathSpec& spec, const opalg::OperatorBasis& basis,
                          double epsilon2 = 1.0, const quad::PvSettings& pv = {},
                          double recon_tol = 1e-8);

// Lindblad-form template for a coefficient matrix over the non-identity basis
// elements plus a Lamb-shift commutator.
opalg::Superoperator lindblad_template(const Matrix& gamma, const Matrix& h_ls,
                                       const opalg::OperatorBasis& basis);

struct CpReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    std::vector<int> lemma1_violations;   // 0-based diagonal indices
    double offdiag_block_norm = 0.0;      // Frobenius norm of the local/nonlocal block
};

// PSD audit of a hermitian coefficient matrix. `local_count` = d_L^2 - 1
// splits the basis into local and nonlocal parts for the block norm.
CpReport cp_check(const Matrix& gamma, int local_count, double tol_rel = 1e-10);

}  // namespace qmetop::redfield
