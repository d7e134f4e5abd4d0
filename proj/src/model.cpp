#include "qmetop/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qmetop::model {

using opalg::identity;
using opalg::kron;

void XxzParams::validate() const {
    if (n_qubits < 1) throw std::invalid_argument("XxzParams: need N >= 1");
    if (n_bath_qubits < 1 || n_bath_qubits > n_qubits) {
        throw std::invalid_argument("XxzParams: need 1 <= N_L <= N");
    }
    if (static_cast<int>(omega0.size()) != n_qubits) {
        throw std::invalid_argument("XxzParams: omega0 must have N entries");
    }
    if (static_cast<int>(g.size()) != n_qubits - 1 ||
        static_cast<int>(delta.size()) != n_qubits - 1) {
        throw std::invalid_argument("XxzParams: g and delta must have N-1 entries");
    }
    if (n_qubits > 8) {
        throw std::invalid_argument("XxzParams: chains beyond 8 qubits are unsupported");
    }
}

XxzParams XxzParams::uniform(int n, double omega0_, double g_, double delta_,
                             int n_bath) {
    XxzParams p;
    p.n_qubits = n;
    p.omega0.assign(n, omega0_);
    p.g.assign(std::max(0, n - 1), g_);
    p.delta.assign(std::max(0, n - 1), delta_);
    p.n_bath_qubits = n_bath;
    p.validate();
    return p;
}

Matrix site_operator(const Matrix& o, int site, int n_qubits) {
    if (site < 0 || site >= n_qubits) {
        throw std::out_of_range("site_operator: site out of range");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 0; s < n_qubits; ++s) {
        out = kron(out, s == site ? o : identity(2));
    }
    return out;
}

Matrix build_xxz(const XxzParams& params) {
    params.validate();
    const int n = params.n_qubits;
    const int d = params.dim();
    const Matrix sx = opalg::sigma_x();
    const Matrix sy = opalg::sigma_y();
    const Matrix sz = opalg::sigma_z();
    Matrix H = Matrix::Zero(d, d);
    for (int l = 0; l < n; ++l) {
        H += 0.5 * params.omega0[l] * site_operator(sz, l, n);
    }
    for (int l = 0; l + 1 < n; ++l) {
        H -= params.g[l] * (site_operator(sx, l, n) * site_operator(sx, l + 1, n) +
                            site_operator(sy, l, n) * site_operator(sy, l + 1, n) +
                            params.delta[l] * site_operator(sz, l, n) *
                                site_operator(sz, l + 1, n));
    }
    return H;
}

Matrix gibbs(const Matrix& H, double beta) {
    opalg::require_hermitian(H, "gibbs");
    if (beta < 0) throw std::invalid_argument("gibbs: beta must be >= 0");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const RealVector e = es.eigenvalues();
    const double e_min = e.minCoeff();
    RealVector w(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        w(i) = std::exp(-beta * (e(i) - e_min));
    }
    w /= w.sum();
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

void BathSpec::validate() const {
    if (beta <= 0) throw std::invalid_argument("BathSpec: beta must be > 0");
    if (omega_c <= 0) throw std::invalid_argument("BathSpec: omega_c must be > 0");
    if (mu > 0) throw std::invalid_argument("BathSpec: mu must be <= 0");
}

double spectral_density(double omega, const BathSpec& spec) {
    if (omega <= 0) return 0.0;
    const double x = omega / spec.omega_c;
    return omega * std::exp(-x * x);
}

double bose_occupation(double omega, double beta) {
    if (omega == 0.0) {
        throw std::domain_error("bose_occupation: omega = 0 (take limits in products)");
    }
    return 1.0 / std::expm1(beta * omega);
}

namespace {

// J(w) n(w - mu), extended by its limit at w = 0.
double absorption_weight(double w, const BathSpec& spec) {
    if (w < 0) return 0.0;
    if (w == 0.0) {
        return spec.mu == 0.0 ? 1.0 / spec.beta : 0.0;
    }
    return spectral_density(w, spec) * bose_occupation(w - spec.mu, spec.beta);
}

// J(w) (n(w - mu) + 1)
double emission_weight(double w, const BathSpec& spec) {
    if (w < 0) return 0.0;
    if (w == 0.0) {
        return spec.mu == 0.0 ? 1.0 / spec.beta : 0.0;
    }
    return spectral_density(w, spec) * (bose_occupation(w - spec.mu, spec.beta) + 1.0);
}

}  // namespace

BathCoefficients bath_coeffs(double gap, const BathSpec& spec,
                             const quad::PvSettings& pv) {
    spec.validate();
    if (!std::isfinite(gap)) {
        throw std::invalid_argument("bath_coeffs: gap must be finite");
    }
    if (gap == 0.0 && spec.mu == 0.0) {
        throw std::domain_error("bath_coeffs: gap = 0 with mu = 0 is singular");
    }
    const double upper = std::max(pv.cutoff_factor * spec.omega_c,
                                  gap + pv.cutoff_factor * spec.omega_c);
    const double h_max = spec.omega_c / 10.0;
    const double pv_c = quad::principal_value(
        [&](double w) { return absorption_weight(w, spec); }, gap, upper, h_max, pv);
    const double pv_d = quad::principal_value(
        [&](double w) { return emission_weight(w, spec); }, gap, upper, h_max, pv);
    const double re_c = 0.5 * absorption_weight(gap, spec);
    const double re_d = 0.5 * emission_weight(gap, spec);
    const double scale = 1.0 / (2.0 * M_PI);
    return BathCoefficients{Complex(re_c, -scale * pv_c),
                            Complex(re_d, -scale * pv_d)};
}

Matrix EigenSystem::to_eigenbasis(const Matrix& X) const {
    return vectors.adjoint() * X * vectors;
}

Matrix EigenSystem::from_eigenbasis(const Matrix& X_eig) const {
    return vectors * X_eig * vectors.adjoint();
}

EigenSystem diagonalize(const Matrix& H, double rel_gap) {
    opalg::require_hermitian(H, "diagonalize");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    EigenSystem sys;
    sys.energies = es.eigenvalues();
    sys.vectors = es.eigenvectors();
    // fixed phase: largest-|component| real positive
    for (Eigen::Index k = 0; k < sys.vectors.cols(); ++k) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < sys.vectors.rows(); ++i) {
            const double a = std::abs(sys.vectors(i, k));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        const Complex ph = sys.vectors(imax, k) / std::abs(sys.vectors(imax, k));
        sys.vectors.col(k) /= ph;
    }
    const double scale = std::max(1.0, sys.energies.cwiseAbs().maxCoeff());
    for (int i = 0; i < sys.dim(); ++i) {
        for (int j = i + 1; j < sys.dim(); ++j) {
            if (std::abs(sys.energies(i) - sys.energies(j)) < rel_gap * scale) {
                sys.degenerate_pairs.emplace_back(i, j);
            }
        }
    }
    return sys;
}

}  // namespace qmetop::model
