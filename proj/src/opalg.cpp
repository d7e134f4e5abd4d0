#include "qmetop/opalg.hpp"

#include <cmath>
#include <string>

namespace qmetop::opalg {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}

Complex hs_inner(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw std::invalid_argument("hs_inner: dimension mismatch");
    }
    return (A.adjoint() * B).trace();
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
    }
    return K;
}

double hermiticity_defect(const Matrix& M) {
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) return false;
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    return hermiticity_defect(M) <= tol * scale;
}

void require_hermitian(const Matrix& M, const char* who, double tol) {
    if (!is_hermitian(M, tol)) {
        throw std::invalid_argument(std::string(who) + ": matrix is not hermitian");
    }
}

Vector vec(const Matrix& X) {
    Vector v(X.rows() * X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            v(i * X.cols() + j) = X(i, j);
        }
    }
    return v;
}

Matrix unvec(const Vector& v, int d) {
    if (v.size() != Eigen::Index(d) * d) {
        throw std::invalid_argument("unvec: vector length is not d^2");
    }
    Matrix X(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            X(i, j) = v(i * d + j);
        }
    }
    return X;
}

Matrix kron_sandwich(const Matrix& A0, const Matrix& A1) {
    return kron(A0, A1);
}

Matrix sandwich_superop(const Matrix& A, const Matrix& B) {
    return kron(A, B.transpose());
}

const char* basis_order_name(BasisOrder order) {
    return order == BasisOrder::kPlusMinus ? "plus_minus" : "minus_plus";
}

BasisOrder basis_order_from_name(const std::string& name) {
    if (name == "plus_minus") return BasisOrder::kPlusMinus;
    if (name == "minus_plus") return BasisOrder::kMinusPlus;
    throw std::invalid_argument("unknown basis order tag: " + name);
}

std::vector<Matrix> qubit_basis(BasisOrder order) {
    const Matrix z = -sigma_z() / kSqrt2;
    const Matrix id = identity(2) / kSqrt2;
    if (order == BasisOrder::kPlusMinus) {
        return {z, sigma_plus(), sigma_minus(), id};
    }
    return {z, sigma_minus(), sigma_plus(), id};
}

std::vector<Matrix> flatten_product(const std::vector<std::vector<Matrix>>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("flatten_product: no factors");
    }
    std::vector<Matrix> out = factors.front();
    for (std::size_t s = 1; s < factors.size(); ++s) {
        std::vector<Matrix> next;
        next.reserve(out.size() * factors[s].size());
        for (const Matrix& a : out) {
            for (const Matrix& b : factors[s]) {
                next.push_back(kron(a, b));
            }
        }
        out = std::move(next);
    }
    return out;
}

void OperatorBasis::validate(double tol) const {
    const int n = size();
    const int d = dim();
    if (n != d * d) {
        throw std::invalid_argument("OperatorBasis: wrong element count");
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const Complex g = hs_inner(elements[a], elements[b]);
            const double expect = (a == b) ? 1.0 : 0.0;
            if (std::abs(g - expect) > tol) {
                throw std::invalid_argument("OperatorBasis: factors are not orthonormal");
            }
        }
    }
    const Matrix id_last = identity(d) / std::sqrt(double(d));
    if ((elements.back() - id_last).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("OperatorBasis: last element is not I/sqrt(d)");
    }
}

namespace {

void check_factor(const std::vector<Matrix>& f, double tol) {
    const int d = static_cast<int>(f.front().rows());
    if (static_cast<int>(f.size()) != d * d) {
        throw std::invalid_argument("product_basis: factor has wrong size");
    }
    for (std::size_t a = 0; a < f.size(); ++a) {
        for (std::size_t b = a; b < f.size(); ++b) {
            const Complex g = hs_inner(f[a], f[b]);
            const double expect = (a == b) ? 1.0 : 0.0;
            if (std::abs(g - expect) > tol) {
                throw std::invalid_argument("product_basis: factor is not orthonormal");
            }
        }
    }
    if ((f.back() - identity(d) / std::sqrt(double(d))).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("product_basis: factor identity must be last");
    }
}

}  // namespace

OperatorBasis product_basis(const std::vector<std::vector<Matrix>>& l_factors,
                            const std::vector<std::vector<Matrix>>& m_factors) {
    const std::vector<Matrix> fl = flatten_product(l_factors);
    check_factor(fl, 1e-10);
    std::vector<Matrix> gm;
    int dm = 1;
    if (!m_factors.empty()) {
        gm = flatten_product(m_factors);
        check_factor(gm, 1e-10);
        dm = static_cast<int>(gm.front().rows());
    } else {
        gm = {Matrix::Identity(1, 1)};
    }
    const int dl = static_cast<int>(fl.front().rows());

    OperatorBasis basis;
    basis.dim_l = dl;
    basis.dim_m = dm;
    const int nl = dl * dl;
    const int nm = dm * dm;
    const Matrix id_m = identity(dm) / std::sqrt(double(dm));
    // local elements f_i (x) I_M/sqrt(dM)
    for (int i = 0; i + 1 < nl; ++i) {
        basis.elements.push_back(kron(fl[i], id_m));
        basis.index_map.emplace_back(i, nm - 1);
    }
    // mixed elements f_i (x) g_j, non-identity g_j
    for (int i = 0; i < nl; ++i) {
        for (int j = 0; j + 1 < nm; ++j) {
            basis.elements.push_back(kron(fl[i], gm[j]));
            basis.index_map.emplace_back(i, j);
        }
    }
    basis.elements.push_back(kron(fl[nl - 1], id_m));
    basis.index_map.emplace_back(nl - 1, nm - 1);
    return basis;
}

OperatorBasis product_basis(int l_sites, int m_sites, BasisOrder order) {
    if (l_sites < 1 || m_sites < 0) {
        throw std::invalid_argument("product_basis: bad site counts");
    }
    const std::vector<Matrix> qb = qubit_basis(order);
    std::vector<std::vector<Matrix>> l_factors(l_sites, qb);
    std::vector<std::vector<Matrix>> m_factors(m_sites, qb);
    return product_basis(l_factors, m_factors);
}

Vector expand(const Matrix& X, const std::vector<Matrix>& elements) {
    Vector coeffs(elements.size());
    for (std::size_t a = 0; a < elements.size(); ++a) {
        coeffs(a) = hs_inner(elements[a], X);
    }
    return coeffs;
}

Vector expand(const Matrix& X, const OperatorBasis& basis) {
    if (X.rows() != basis.dim() || X.cols() != basis.dim()) {
        throw std::invalid_argument("expand: dimension mismatch");
    }
    return expand(X, basis.elements);
}

Matrix recombine(const Vector& coeffs, const std::vector<Matrix>& elements) {
    if (static_cast<std::size_t>(coeffs.size()) != elements.size()) {
        throw std::invalid_argument("recombine: coefficient count mismatch");
    }
    Matrix X = Matrix::Zero(elements.front().rows(), elements.front().cols());
    for (std::size_t a = 0; a < elements.size(); ++a) {
        X += coeffs(a) * elements[a];
    }
    return X;
}

void Superoperator::add_term(const Matrix& left, const Matrix& right) {
    if (left.rows() != dim_ || right.rows() != dim_) {
        throw std::invalid_argument("Superoperator: term dimension mismatch");
    }
    terms_.emplace_back(left, right);
}

void Superoperator::add_left(const Matrix& A) { add_term(A, identity(dim_)); }
void Superoperator::add_right(const Matrix& B) { add_term(identity(dim_), B); }

void Superoperator::add_dissipator(const Matrix& J, const Matrix& K, Complex gamma) {
    const Matrix Kd = K.adjoint();
    const Matrix KdJ = Kd * J;
    add_term(gamma * J, Kd);
    add_term(-0.5 * gamma * KdJ, identity(dim_));
    add_term(Matrix::Identity(dim_, dim_), -0.5 * gamma * KdJ);
}

void Superoperator::add_hamiltonian(const Matrix& H) {
    add_term(Matrix(Complex(0, -1) * H), identity(dim_));
    add_term(Matrix::Identity(dim_, dim_), Matrix(Complex(0, 1) * H));
}

Matrix Superoperator::apply(const Matrix& rho) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& [l, r] : terms_) {
        out.noalias() += l * rho * r;
    }
    return out;
}

Matrix Superoperator::dense() const {
    Matrix M = Matrix::Zero(Eigen::Index(dim_) * dim_, Eigen::Index(dim_) * dim_);
    for (const auto& [l, r] : terms_) {
        M += sandwich_superop(l, r);
    }
    return M;
}

}  // namespace qmetop::opalg
