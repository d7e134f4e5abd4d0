#include "qmetop/top.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace qmetop::top {

using sdp::BlockSpec;
using sdp::BlockStructure;

int Reduction::svec_s() const {
    const int d_l = static_cast<int>(std::lround(std::sqrt(double(n_l + 1))));
    const BlockSpec s{2 * d_l, false};
    return s.svec_size();
}

int Reduction::svec_u() const {
    const BlockSpec u{2 * n_l, false};
    return u.svec_size();
}

namespace {

// normalized local jumps f_a (x) I_M / sqrt(d_M), transformed to the energy
// eigenbasis
std::vector<Matrix> eigenbasis_jumps(const TopInstance& in,
                                     const model::EigenSystem& sys) {
    const int l_sites = in.params.n_bath_qubits;
    const int dm = in.dim_m();
    const std::vector<Matrix> qb = opalg::qubit_basis(in.basis_order);
    std::vector<std::vector<Matrix>> factors(l_sites, qb);
    const std::vector<Matrix> fl = opalg::flatten_product(factors);
    const Matrix id_m = opalg::identity(dm) / std::sqrt(double(dm));
    std::vector<Matrix> jumps;
    for (std::size_t a = 0; a + 1 < fl.size(); ++a) {
        jumps.push_back(sys.to_eigenbasis(opalg::kron(fl[a], id_m)));
    }
    return jumps;
}

RealVector gibbs_weights(const RealVector& energies, double beta) {
    RealVector w(energies.size());
    const double e_min = energies.minCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w(i) = std::exp(-beta * (energies(i) - e_min));
    }
    return w / w.sum();
}

}  // namespace

Reduction build_reduction(const TopInstance& instance) {
    instance.params.validate();
    if (instance.beta <= 0.0) {
        throw std::invalid_argument("TopInstance: beta must be > 0");
    }
    Reduction red;
    const Matrix h = model::build_xxz(instance.params);
    red.eigensystem = model::diagonalize(h);
    red.populations = gibbs_weights(red.eigensystem.energies, instance.beta);
    const int d = instance.dim();
    const int d_l = instance.dim_l();
    red.n_l = d_l * d_l - 1;

    const std::vector<Matrix> jumps = eigenbasis_jumps(instance, red.eigensystem);
    const RealVector& p = red.populations;

    // hermitian probes G_i with <G_i, U>_HS = <E_i| D[U](rho_th) |E_i>
    red.g_probe.assign(d, Matrix::Zero(red.n_l, red.n_l));
    for (int a = 0; a < red.n_l; ++a) {
        for (int b = 0; b < red.n_l; ++b) {
            for (int i = 0; i < d; ++i) {
                Complex v(0, 0);
                for (int k = 0; k < d; ++k) {
                    v += jumps[b](i, k) * p(k) * std::conj(jumps[a](i, k));
                    v -= p(i) * std::conj(jumps[a](k, i)) * jumps[b](k, i);
                }
                red.g_probe[i](a, b) = std::conj(v);
            }
        }
    }

    // matrix over svec(S) + svec(T) + svec(U); the S, T columns are zero
    const int ns = red.svec_s();
    const int nu = red.svec_u();
    red.g_map = RealMatrix::Zero(d, 2 * ns + nu);
    const BlockStructure u_block{BlockSpec{2 * red.n_l, false}};
    for (int i = 0; i < d; ++i) {
        const RealMatrix probe = sdp::embed_functional(red.g_probe[i]);
        red.g_map.row(i).tail(nu) = sdp::svec(u_block, {probe}).transpose();
    }
    return red;
}

TopSdp build_top_sdp(const TopInstance& instance) {
    TopSdp t;
    t.reduction = build_reduction(instance);
    const int d = instance.dim();
    const int nu_emb = 2 * t.reduction.n_l;
    const int nu = t.reduction.svec_u();

    sdp::SdpProblem& p = t.problem;
    p.blocks = {BlockSpec{d, true}, BlockSpec{d, true}, BlockSpec{nu_emb, false}};
    p.objective = {RealMatrix::Identity(d, d), RealMatrix::Identity(d, d),
                   RealMatrix::Zero(nu_emb, nu_emb)};

    const int n_all = sdp::svec_size(p.blocks);
    // equality: Tr U = 1 (one scalar row)
    p.eq.in_blocks = p.blocks;
    p.eq.out_blocks = {BlockSpec{1, true}};
    p.eq.mat = RealMatrix::Zero(1, n_all);
    const BlockStructure u_block{BlockSpec{nu_emb, false}};
    p.eq.mat.row(0).tail(nu) =
        sdp::svec(u_block,
                  {sdp::embed_functional(Matrix::Identity(t.reduction.n_l,
                                                          t.reduction.n_l))})
            .transpose();
    p.eq_rhs = {RealMatrix::Identity(1, 1)};

    // inequalities: P - G(U) >= 0 and Q + G(U) >= 0, both diagonal d-blocks
    p.ineq.in_blocks = p.blocks;
    p.ineq.out_blocks = {BlockSpec{d, true}, BlockSpec{d, true}};
    p.ineq.mat = RealMatrix::Zero(2 * d, n_all);
    const RealMatrix g_u = t.reduction.g_map.rightCols(nu);
    for (int i = 0; i < d; ++i) {
        p.ineq.mat(i, i) = 1.0;                       // P_i
        p.ineq.mat.row(i).tail(nu) = -g_u.row(i);
        p.ineq.mat(d + i, d + i) = 1.0;               // Q_i
        p.ineq.mat.row(d + i).tail(nu) = g_u.row(i);
    }
    p.ineq_rhs = {RealMatrix::Zero(d, d), RealMatrix::Zero(d, d)};
    return t;
}

TopResult solve_top(const TopInstance& instance, double tol) {
    TopSdp t = build_top_sdp(instance);
    sdp::SolveOptions opt;
    opt.tol = tol;
    const sdp::SdpSolution sol = sdp::solve(t.problem, opt);
    if (sol.status != sdp::SolveStatus::kOptimal) {
        throw std::runtime_error(std::string("solve_top: solver reported ") +
                                 sdp::status_name(sol.status) + " for N=" +
                                 std::to_string(instance.params.n_qubits) +
                                 " N_L=" + std::to_string(instance.params.n_bath_qubits));
    }

    TopResult result;
    result.status = sol.status;
    result.stats = sol.stats;
    result.tau_opt = sol.primal_value;
    result.gap = sol.gap;   // signed primal - dual
    Matrix u = sdp::complex_unembed(sol.x[2]);
    result.gamma_l_opt = 0.5 * (u + u.adjoint());
    result.h_ls_opt = Matrix::Zero(instance.dim_l(), instance.dim_l());
    result.verdict = result.tau_opt < instance.delta ? "possible" : "impossible";
    result.marginal = std::abs(result.tau_opt - instance.delta) <= 10.0 * std::abs(result.gap);

    lindblad::LocalLindblad ll;
    ll.gamma_l = result.gamma_l_opt;
    ll.h_ls_l = result.h_ls_opt;
    ll.basis_order = instance.basis_order;
    result.tau_recomputed =
        lindblad::tau(local_l2(ll, instance.dim_m()), t.reduction.eigensystem,
                      instance.beta);
    return result;
}

std::vector<SweepPoint> sweep(const TopInstance& base, const std::string& axis,
                              const std::vector<double>& grid, int jobs,
                              double tol) {
    if (axis != "g" && axis != "beta") {
        throw std::invalid_argument("sweep: axis must be 'g' or 'beta'");
    }
    const int n_m = base.params.n_qubits - base.params.n_bath_qubits;
    const auto run_point = [&](double value) {
        SweepPoint pt;
        pt.axis = axis;
        pt.value = value;
        pt.n_m = n_m;
        try {
            TopInstance in = base;
            if (axis == "g") {
                std::fill(in.params.g.begin(), in.params.g.end(), value);
            } else {
                in.beta = value;
            }
            const TopResult r = solve_top(in, tol);
            pt.tau_opt = r.tau_opt;
            pt.gap = r.gap;
            pt.verdict = r.verdict;
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
        return pt;
    };

    std::vector<SweepPoint> out(grid.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = run_point(grid[i]);
        return out;
    }
    std::vector<std::future<SweepPoint>> futures(grid.size());
    std::size_t next = 0;
    while (next < grid.size()) {
        const std::size_t batch =
            std::min<std::size_t>(jobs, grid.size() - next);
        for (std::size_t k = 0; k < batch; ++k) {
            futures[next + k] = std::async(std::launch::async, run_point,
                                           grid[next + k]);
        }
        for (std::size_t k = 0; k < batch; ++k) {
            out[next + k] = futures[next + k].get();
        }
        next += batch;
    }
    return out;
}

double tau_audit(const Matrix& gamma_l, const Matrix& h_ls,
                 const TopInstance& instance) {
    lindblad::LocalLindblad ll;
    ll.gamma_l = gamma_l;
    ll.h_ls_l = h_ls;
    ll.basis_order = instance.basis_order;
    if (ll.dim_l() != instance.dim_l()) {
        throw std::invalid_argument("tau_audit: gamma dimension does not match N_L");
    }
    const Matrix h = model::build_xxz(instance.params);
    return lindblad::tau(ll, h, instance.beta);
}

}  // namespace qmetop::top
