#include "qmetop/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace qmetop::lindblad {

using opalg::OperatorBasis;
using opalg::Superoperator;

int LocalLindblad::dim_l() const {
    const int n = static_cast<int>(gamma_l.rows()) + 1;
    const int d = static_cast<int>(std::lround(std::sqrt(double(n))));
    if (d * d != n) {
        throw std::invalid_argument("LocalLindblad: gamma_l is not (d_L^2-1) square");
    }
    return d;
}

void LocalLindblad::validate(double psd_tol) const {
    if (gamma_l.rows() != gamma_l.cols()) {
        throw std::invalid_argument("LocalLindblad: gamma_l must be square");
    }
    opalg::require_hermitian(gamma_l, "LocalLindblad::gamma_l", 1e-10);
    const int d = dim_l();
    if (h_ls_l.size() != 0) {
        if (h_ls_l.rows() != d || h_ls_l.cols() != d) {
            throw std::invalid_argument("LocalLindblad: h_ls_l has wrong dimension");
        }
        opalg::require_hermitian(h_ls_l, "LocalLindblad::h_ls_l", 1e-10);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gamma_l);
    if (es.eigenvalues().minCoeff() < -psd_tol) {
        throw std::invalid_argument("LocalLindblad: gamma_l is not PSD");
    }
}

namespace {

// normalized local jump operators f_a (x) I_M / sqrt(d_M) for the flattened
// L basis in the given order
std::vector<Matrix> local_jumps(int dim_l, int dim_m, opalg::BasisOrder order) {
    int l_sites = 0;
    while ((1 << l_sites) < dim_l) ++l_sites;
    if ((1 << l_sites) != dim_l) {
        throw std::invalid_argument("local_jumps: d_L must be a power of two");
    }
    const std::vector<Matrix> qb = opalg::qubit_basis(order);
    std::vector<std::vector<Matrix>> factors(std::max(1, l_sites), qb);
    std::vector<Matrix> fl = opalg::flatten_product(factors);
    const Matrix id_m = opalg::identity(dim_m) / std::sqrt(double(dim_m));
    std::vector<Matrix> jumps;
    for (std::size_t a = 0; a + 1 < fl.size(); ++a) {
        jumps.push_back(opalg::kron(fl[a], id_m));
    }
    return jumps;
}

}  // namespace

Superoperator local_l2(const LocalLindblad& ll, int dim_m) {
    const int dl = ll.dim_l();
    const int d = dl * dim_m;
    const std::vector<Matrix> jumps = local_jumps(dl, dim_m, ll.basis_order);
    const int n = static_cast<int>(jumps.size());
    Superoperator sop(d);
    if (ll.h_ls_l.size() != 0) {
        const Matrix lifted =
            ll.epsilon2 * opalg::kron(ll.h_ls_l, opalg::identity(dim_m));
        sop.add_hamiltonian(lifted);
    }
    Matrix anti = Matrix::Zero(d, d);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const Complex g = ll.epsilon2 * ll.gamma_l(a, b);
            if (g == Complex(0, 0)) continue;
            sop.add_term(g * jumps[b], Matrix(jumps[a].adjoint()));
            anti += g * jumps[a].adjoint() * jumps[b];
        }
    }
    sop.add_term(Matrix(-0.5 * anti), opalg::identity(d));
    sop.add_term(opalg::identity(d), Matrix(-0.5 * anti));
    return sop;
}

double tau(const Superoperator& l2, const model::EigenSystem& sys, double beta,
           double imag_tol) {
    RealVector w(sys.dim());
    const double e_min = sys.energies.minCoeff();
    for (int i = 0; i < sys.dim(); ++i) {
        w(i) = std::exp(-beta * (sys.energies(i) - e_min));
    }
    w /= w.sum();
    const Matrix rho =
        sys.vectors * w.cast<Complex>().asDiagonal() * sys.vectors.adjoint();
    const Matrix out = sys.to_eigenbasis(l2.apply(rho));
    double total = 0.0;
    for (int i = 0; i < sys.dim(); ++i) {
        const Complex v = out(i, i);
        if (std::abs(v.imag()) > imag_tol * std::max(1.0, std::abs(v.real()))) {
            throw std::runtime_error("tau: non-real diagonal element (generator is "
                                     "not hermiticity-preserving)");
        }
        total += std::abs(v.real());
    }
    return total;
}

double tau(const LocalLindblad& ll, const Matrix& h_s, double beta, double imag_tol) {
    const int d = static_cast<int>(h_s.rows());
    const int dl = ll.dim_l();
    if (d % dl != 0) {
        throw std::invalid_argument("tau: system dimension incompatible with d_L");
    }
    const model::EigenSystem sys = model::diagonalize(h_s);
    return tau(local_l2(ll, d / dl), sys, beta, imag_tol);
}

double conservation_residual(const Superoperator& l2, const Matrix& rho,
                             const Matrix& o_m, int dim_l) {
    const int d = l2.dim();
    const int dim_m = static_cast<int>(o_m.rows());
    if (dim_l * dim_m != d) {
        throw std::invalid_argument("conservation_residual: dimension mismatch");
    }
    const Matrix lifted = opalg::kron(opalg::identity(dim_l), o_m);
    return std::abs((lifted * l2.apply(rho)).trace());
}

double lambda_trace_test(const Matrix& gamma_tilde, const OperatorBasis& basis) {
    const int n = basis.dim() * basis.dim() - 1;
    if (gamma_tilde.rows() != n || gamma_tilde.cols() != n) {
        throw std::invalid_argument("lambda_trace_test: gamma has wrong size");
    }
    const int nm = basis.dim_m * basis.dim_m;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (basis.index_map[k].second != nm - 1) {
            sum += gamma_tilde(k, k).real();
        }
    }
    return sum;
}

SteadyStatePerturbation perturbative_steady_state(const Superoperator& l2,
                                                  const model::EigenSystem& sys,
                                                  double kernel_tol) {
    const int d = sys.dim();
    // population rate matrix in the energy eigenbasis
    RealMatrix rate(d, d);
    std::vector<Matrix> l2_of_proj(d);
    for (int k = 0; k < d; ++k) {
        const Matrix proj =
            sys.vectors.col(k) * sys.vectors.col(k).adjoint();
        l2_of_proj[k] = sys.to_eigenbasis(l2.apply(proj));
        for (int i = 0; i < d; ++i) {
            rate(i, k) = l2_of_proj[k](i, i).real();
        }
    }
    Eigen::JacobiSVD<RealMatrix> svd(rate, Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();
    const double scale = std::max(1.0, sv.maxCoeff());
    int kernel_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) < kernel_tol * scale) ++kernel_dim;
    }
    if (kernel_dim != 1) {
        throw std::runtime_error(
            "perturbative_steady_state: population rate matrix kernel is " +
            std::to_string(kernel_dim) + "-dimensional, steady state not unique");
    }
    RealVector p = svd.matrixV().col(d - 1);
    p /= p.sum();
    for (int i = 0; i < d; ++i) {
        if (p(i) < -1e-10) {
            throw std::runtime_error("perturbative_steady_state: negative population");
        }
    }

    SteadyStatePerturbation out;
    out.populations = p;
    // second order off-diagonals from rho0 = sum_k p_k |E_k><E_k|
    Matrix l2_rho0 = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) l2_rho0 += p(k) * l2_of_proj[k];
    out.rho2_offdiag = Matrix::Zero(d, d);
    const double e_scale = std::max(1.0, sys.energies.cwiseAbs().maxCoeff());
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const double gap = sys.energies(i) - sys.energies(j);
            if (std::abs(gap) < 1e-9 * e_scale) {
                out.flagged.emplace_back(i, j);
                continue;
            }
            out.rho2_offdiag(i, j) = Complex(0, -1) * l2_rho0(i, j) / gap;
        }
    }
    return out;
}

}  // namespace qmetop::lindblad
