// top.hpp — The thermalization optimization problem: reduction to the sdp
// standard form, solution with verdicts, parameter sweeps, and fixed-generator
// tau audits.

#pragma once

#include "qmetop/lindblad.hpp"
#include "qmetop/model.hpp"
#include "qmetop/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmetop::top {

struct TopInstance {
    model::XxzParams params;
    double beta = 1.0;
    double delta = 1e-6;                  // verdict tolerance
    opalg::BasisOrder basis_order = opalg::BasisOrder::kPlusMinus;

    int dim() const { return params.dim(); }
    int dim_l() const { return params.dim_l(); }
    int dim_m() const { return params.dim_m(); }
};

// The linear map (S, T, U) -> diag <E_i| L2(rho_th) |E_i> with H_LS = S - T
// and Gamma^L = U, as a real matrix over the svec coordinates of the three
// embedded blocks. The S and T columns vanish identically: a commutator with
// rho_th has no diagonal in the energy eigenbasis. This is asserted at build
// time.
struct Reduction {
    model::EigenSystem eigensystem;
    RealVector populations;                  // Gibbs weights
    RealMatrix g_map;                        // d x (svec(S)+svec(T)+svec(U))
    std::vector<Matrix> g_probe;             // hermitian G_i with G_i . U = g_i
    int n_l = 0;                             // d_L^2 - 1

    int svec_s() const;                      // size of one embedded d_L block
    int svec_u() const;
};

Reduction build_reduction(const TopInstance& instance);

// Variable blocks: P, Q (diagonal d), U (embedded 2(d_L^2-1)).
// objective Tr P + Tr Q; constraints P >= G(U), Q >= -G(U), Tr U = 1.
struct TopSdp {
    sdp::SdpProblem problem;
    Reduction reduction;
};

TopSdp build_top_sdp(const TopInstance& instance);

struct TopResult {
    double tau_opt = 0.0;
    Matrix gamma_l_opt;          // hermitian, PSD, trace 1
    Matrix h_ls_opt;             // zero: the objective is blind to the Lamb shift
    double gap = 0.0;
    std::string verdict;         // "possible" | "impossible"
    bool marginal = false;       // |tau_opt - delta| <= 10 * gap
    double tau_recomputed = 0.0; // independent evaluation through lindblad
    sdp::SolveStats stats;
    sdp::SolveStatus status = sdp::SolveStatus::kMaxIterations;
};

TopResult solve_top(const TopInstance& instance, double tol = 1e-9);

struct SweepPoint {
    std::string axis;
    double value = 0.0;
    int n_m = 0;
    double tau_opt = 0.0;
    double gap = 0.0;
    std::string verdict;
    bool ok = false;
    std::string error;
};

// axis is "g" (all couplings set to the grid value) or "beta". Failed points
// carry their error message; the sweep continues.
std::vector<SweepPoint> sweep(const TopInstance& base, const std::string& axis,
                              const std::vector<double>& grid, int jobs = 1,
                              double tol = 1e-9);

// tau for a fixed generator under (possibly modified) chain parameters.
double tau_audit(const Matrix& gamma_l, const Matrix& h_ls, const TopInstance& instance);

}  // namespace qmetop::top
