// sdp.hpp — Dense standard-form semidefinite programming with weak-duality
// certificates.
//
// Problems are stated over block-diagonal symmetric variables:
//   minimize  <A, X>
//   s.t.      Phi(X) = B,   Psi(X) >= C,   X >= 0,
// with Phi, Psi symmetry-preserving linear maps between block spaces. The
// solver converts inequalities to equalities with PSD slack blocks and runs a
// primal-dual path-following iteration with Nesterov-Todd scaling. The dual
//   maximize  <B, Y> + <C, Z>
//   s.t.      Phi^T(Y) + Psi^T(Z) <= A,   Z >= 0
// is tracked simultaneously; weak duality (primal >= dual for feasible
// iterates) is reported through the gap.
//
// Complex hermitian data enters through the real symmetric embedding
// H -> [[Re H, -Im H], [Im H, Re H]].

#pragma once

#include "qmetop/opalg.hpp"

#include <string>
#include <vector>

namespace qmetop::sdp {

struct BlockSpec {
    int dim = 0;
    bool diagonal = false;

    int svec_size() const { return diagonal ? dim : dim * (dim + 1) / 2; }
    bool operator==(const BlockSpec&) const = default;
};

using BlockStructure = std::vector<BlockSpec>;
using BlockMatrix = std::vector<RealMatrix>;   // one symmetric matrix per block

int svec_size(const BlockStructure& blocks);
BlockMatrix zero_blocks(const BlockStructure& blocks);
BlockMatrix identity_blocks(const BlockStructure& blocks);

// Isometric vectorization: <S1, S2>_F = svec(S1) . svec(S2); off-diagonal
// entries are scaled by sqrt(2). Diagonal blocks store only their diagonal.
RealVector svec(const BlockStructure& blocks, const BlockMatrix& m);
BlockMatrix sunvec(const BlockStructure& blocks, const RealVector& v);

double block_inner(const BlockMatrix& a, const BlockMatrix& b);

// Linear map between block spaces, stored as its matrix over svec
// coordinates. The adjoint with respect to the trace inner product is the
// transpose.
struct LinearMap {
    BlockStructure in_blocks, out_blocks;
    RealMatrix mat;   // svec_size(out) x svec_size(in)

    BlockMatrix apply(const BlockMatrix& x) const;
    BlockMatrix apply_adjoint(const BlockMatrix& y) const;
    static LinearMap zero(const BlockStructure& in, const BlockStructure& out);
};

LinearMap adjoint(const LinearMap& map);

struct SdpProblem {
    BlockStructure blocks;     // variable block structure
    BlockMatrix objective;     // A
    LinearMap eq;              // Phi ; may have empty out space
    BlockMatrix eq_rhs;        // B
    LinearMap ineq;            // Psi ; may have empty out space
    BlockMatrix ineq_rhs;      // C

    void validate() const;
    static SdpProblem minimize(BlockStructure blocks, BlockMatrix objective);
};

enum class SolveStatus {
    kOptimal,
    kMaxIterations,
    kInfeasibleSuspected,
    kStepFailure,
};
const char* status_name(SolveStatus s);

struct SolveStats {
    int iterations = 0;
    std::vector<double> gap_history;        // |primal - dual| per iteration
    std::vector<double> primal_residuals;
    std::vector<double> dual_residuals;
};

struct SdpSolution {
    BlockMatrix x;              // optimizer blocks
    BlockMatrix y;              // equality duals (out space of Phi)
    BlockMatrix z;              // inequality duals (out space of Psi), PSD
    double primal_value = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;           // primal - dual (>= 0 up to tolerance)
    SolveStatus status = SolveStatus::kMaxIterations;
    SolveStats stats;
};

struct SolveOptions {
    double tol = 1e-9;          // relative gap and residual target
    int max_iterations = 200;
    double step_fraction = 0.98;
    double init_scale = 0.0;    // 0 = automatic
};

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options = {});
inline SdpSolution solve(const SdpProblem& problem, double tol) {
    SolveOptions opt;
    opt.tol = tol;
    return solve(problem, opt);
}

// --------------------------- complex embedding -------------------------------

// [[Re H, -Im H], [Im H, Re H]]; PSD iff H is, eigenvalues doubled.
RealMatrix complex_embed(const Matrix& h);
Matrix complex_unembed(const RealMatrix& s);

// Probe with <embed_functional(A), embed(X)>_F = Re <A, X>_HS.
RealMatrix embed_functional(const Matrix& a);

// --------------------------- trace-norm gadget ------------------------------

// minimize Tr P + Tr Q  s.t.  P >= K, Q >= -K, P, Q >= 0; the optimum is
// ||K||_1. Blocks are the embeddings of P and Q.
SdpProblem trace_norm_sdp(const Matrix& k);

// Hermitian P, Q recovered from a trace-norm solution.
struct TraceNormPoint {
    Matrix p, q;
};
TraceNormPoint trace_norm_point(const SdpProblem& problem, const SdpSolution& sol);

}  // namespace qmetop::sdp
