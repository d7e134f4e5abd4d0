// model.hpp — XXZ chain Hamiltonians, Gibbs states, bath spectral functions,
// and the principal-value bath coefficients C(j,k), D(j,k).

#pragma once

#include "qmetop/opalg.hpp"
#include "qmetop/quadrature.hpp"

#include <vector>

namespace qmetop::model {

struct XxzParams {
    int n_qubits = 1;
    std::vector<double> omega0;   // size N, magnetic fields
    std::vector<double> g;        // size N-1, couplings
    std::vector<double> delta;    // size N-1, anisotropies
    int n_bath_qubits = 1;        // N_L, the first qubits couple to the bath

    void validate() const;
    int dim() const { return 1 << n_qubits; }
    int dim_l() const { return 1 << n_bath_qubits; }
    int dim_m() const { return 1 << (n_qubits - n_bath_qubits); }

    static XxzParams uniform(int n, double omega0, double g, double delta,
                             int n_bath);
};

// H = sum_l omega0_l/2 sz_l - sum_l g_l (sx_l sx_{l+1} + sy_l sy_{l+1}
//                                        + delta_l sz_l sz_{l+1})
Matrix build_xxz(const XxzParams& params);

// Operator o acting on site `site` of an n-qubit chain.
Matrix site_operator(const Matrix& o, int site, int n_qubits);

// rho_th = exp(-beta H) / Tr exp(-beta H), spectrum-shifted for stability.
Matrix gibbs(const Matrix& H, double beta);

struct BathSpec {
    double beta = 1.0;
    double mu = 0.0;        // chemical potential, must be <= 0
    double omega_c = 10.0;  // Gaussian cutoff of the Ohmic spectral function

    void validate() const;
};

// J(w) = w exp(-(w/w_c)^2) for w > 0, else 0.
double spectral_density(double omega, const BathSpec& spec);

// n(w) = 1 / (e^{beta w} - 1); w = 0 is a domain error (only products like
// J(w) n(w) have a finite w -> 0 limit).
double bose_occupation(double omega, double beta);

struct BathCoefficients {
    Complex c;   // absorption-weight coefficient
    Complex d;   // emission-weight coefficient, Re d / Re c = e^{beta(E-mu)}
};

// C(E) = J(E) n(E-mu) / 2        - i/(2 pi) P.V. int J(w) n(w-mu)/(w-E) dw
// D(E) = J(E) (n(E-mu)+1) / 2    - i/(2 pi) P.V. int J(w) (n(w-mu)+1)/(w-E) dw
// over w in (0, inf), cut off at max(8 w_c, E + 8 w_c).
BathCoefficients bath_coeffs(double gap, const BathSpec& spec,
                             const quad::PvSettings& pv = {});

struct EigenSystem {
    RealVector energies;                             // ascending
    Matrix vectors;                                  // columns
    std::vector<std::pair<int, int>> degenerate_pairs;

    int dim() const { return static_cast<int>(energies.size()); }
    // <E_i| X |E_j> for all i, j.
    Matrix to_eigenbasis(const Matrix& X) const;
    Matrix from_eigenbasis(const Matrix& X_eig) const;
};

// Deterministic eigendecomposition: ascending energies, each eigenvector's
// largest-magnitude component made real positive. Gaps below
// rel_gap * max(1, max|E|) are recorded as degenerate pairs.
EigenSystem diagonalize(const Matrix& H, double rel_gap = 1e-9);

}  // namespace qmetop::model
