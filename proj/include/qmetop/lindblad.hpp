// lindblad.hpp — Local Lindblad generators, the thermalization residual tau,
// local-conservation audits, and the perturbative steady state.

#pragma once

#include "qmetop/model.hpp"
#include "qmetop/opalg.hpp"

#include <vector>

namespace qmetop::lindblad {

// A generator whose jump operators and Lamb shift act only on H_L:
//   L2(rho) = eps^2 ( i[rho, H_LS^L (x) I_M]
//             + sum_{a,b} Gamma^L_{ab} (Ft_b rho Ft_a^dag - 1/2 {Ft_a^dag Ft_b, rho}) )
// with Ft_a = f_a (x) I_M / sqrt(d_M), the normalized local elements of the
// product basis.
struct LocalLindblad {
    Matrix gamma_l;    // (d_L^2 - 1) square, hermitian
    Matrix h_ls_l;     // d_L square, hermitian; empty means zero
    opalg::BasisOrder basis_order = opalg::BasisOrder::kPlusMinus;
    double epsilon2 = 1.0;

    int dim_l() const;
    void validate(double psd_tol = 1e-9) const;
};

// The generator on the full space H_L (x) H_M (dim_m = d_M).
opalg::Superoperator local_l2(const LocalLindblad& ll, int dim_m);

// tau = sum_i |<E_i| L2(rho_th) |E_i>|. Throws if a diagonal element has an
// imaginary part above `imag_tol` (hermiticity of the generator is broken).
double tau(const LocalLindblad& ll, const Matrix& h_s, double beta,
           double imag_tol = 1e-10);
double tau(const opalg::Superoperator& l2, const model::EigenSystem& sys,
           double beta, double imag_tol = 1e-10);

// |Tr[(I_L (x) O_M) L2(rho)]|
double conservation_residual(const opalg::Superoperator& l2, const Matrix& rho,
                             const Matrix& o_m, int dim_l);

// sum over the nonlocal diagonal: sum_{a_M < d_M^2-1, a_L} Gt_{(aL,aM),(aL,aM)}.
// Zero is necessary for a PSD Gt to preserve local conservation laws.
double lambda_trace_test(const Matrix& gamma_tilde, const opalg::OperatorBasis& basis);

struct SteadyStatePerturbation {
    RealVector populations;                        // zeroth order, sums to 1
    Matrix rho2_offdiag;                           // second order, zero diagonal
    std::vector<std::pair<int, int>> flagged;      // near-degenerate gaps skipped
};

// Zeroth-order populations from the kernel of the population rate matrix
// A_{ik} = <E_i| L2(|E_k><E_k|) |E_i>, plus second-order off-diagonal
// elements rho2_{ij} = -i <E_i| L2(rho0) |E_j> / (E_i - E_j).
SteadyStatePerturbation perturbative_steady_state(const opalg::Superoperator& l2,
                                                  const model::EigenSystem& sys,
                                                  double kernel_tol = 1e-9);

}  // namespace qmetop::lindblad
