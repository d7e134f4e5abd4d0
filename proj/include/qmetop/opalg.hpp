// opalg.hpp — Complex matrix utilities, orthonormal operator bases for
// bipartitioned Hilbert spaces, and vectorization identities.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qmetop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Tolerances used across the toolkit. All checks take them from one record so
// they can be adjusted in a single place.
struct NumericsSettings {
    double orthonormality_tol = 1e-12;
    double hermiticity_tol = 1e-12;
    double reconstruction_tol = 1e-10;
    double psd_tol = 1e-10;               // relative to max(1, ||A||)
    double degeneracy_rel_gap = 1e-9;
    double quadrature_target = 1e-9;
};

inline const NumericsSettings& default_numerics() {
    static const NumericsSettings s{};
    return s;
}

namespace opalg {

// --------------------------- small fixed operators --------------------------

Matrix identity(int d);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();   // |0><1| with |0> the sigma_z = +1 state
Matrix sigma_minus();

// --------------------------- generic helpers --------------------------------

// Hilbert-Schmidt inner product <A,B> = Tr(A^dag B).
Complex hs_inner(const Matrix& A, const Matrix& B);

Matrix kron(const Matrix& A, const Matrix& B);

// max |M - M^dag|
double hermiticity_defect(const Matrix& M);
bool is_hermitian(const Matrix& M, double tol = 1e-12);
void require_hermitian(const Matrix& M, const char* who, double tol = 1e-12);

// --------------------------- vectorization ----------------------------------

// Row-major vec: vec(X)[i*cols + j] = X(i,j), so vec(|i><j|) = e_i (x) e_j.
Vector vec(const Matrix& X);
Matrix unvec(const Vector& v, int d);   // square d x d target

// Superoperator matrix of rho -> A0 rho A1^T, i.e. A0 (x) A1 in the row-major
// vec convention.
Matrix kron_sandwich(const Matrix& A0, const Matrix& A1);

// Superoperator matrix of rho -> A rho B.
Matrix sandwich_superop(const Matrix& A, const Matrix& B);

// --------------------------- operator bases ---------------------------------

// Single-qubit operator basis orderings. Both carry -sigma_z/sqrt(2) first and
// I/sqrt(2) last; they differ in the order of the ladder operators.
enum class BasisOrder {
    kPlusMinus,    // {-sigma_z/sqrt2, sigma_+, sigma_-, I/sqrt2}
    kMinusPlus,    // {-sigma_z/sqrt2, sigma_-, sigma_+, I/sqrt2}
};

const char* basis_order_name(BasisOrder order);
BasisOrder basis_order_from_name(const std::string& name);

// Four 2x2 matrices in the requested order.
std::vector<Matrix> qubit_basis(BasisOrder order = BasisOrder::kPlusMinus);

// Flattened tensor product of per-site bases, each orthonormal with identity
// last. The flattening follows k = 4*(i-1) + j for two 4-element factors
// (k mod 4 == 0 mapping to factor index 4), generalized to any factor sizes;
// the identity ends up last automatically.
std::vector<Matrix> flatten_product(const std::vector<std::vector<Matrix>>& factors);

// Orthonormal operator basis for H_L (x) H_M in the "local first" layout:
//   elements [0, dL^2-2]    : f_i (x) I_M / sqrt(dM), non-identity f_i,
//   elements [dL^2-1, d^2-2]: f_i (x) g_j, non-identity g_j, i-major,
//   element  d^2-1          : I_d / sqrt(d).
// index_map[k] gives the (alpha_L, alpha_M) factor pair of element k (0-based
// into the flattened L and M bases).
struct OperatorBasis {
    int dim_l = 1;
    int dim_m = 1;
    std::vector<Matrix> elements;
    std::vector<std::pair<int, int>> index_map;

    int dim() const { return dim_l * dim_m; }
    int size() const { return static_cast<int>(elements.size()); }
    int local_count() const { return dim_l * dim_l - 1; }

    // Throws if orthonormality or the identity-last convention is violated.
    void validate(double tol = 1e-12) const;
};

// Build the local-first product basis from per-site qubit bases. l_sites and
// m_sites give the number of qubits in each partition; m_sites may be zero,
// in which case the basis is the flattened L basis itself.
OperatorBasis product_basis(int l_sites, int m_sites,
                            BasisOrder order = BasisOrder::kPlusMinus);

// General form taking explicit factor lists (each factor orthonormal with
// identity last; validated).
OperatorBasis product_basis(const std::vector<std::vector<Matrix>>& l_factors,
                            const std::vector<std::vector<Matrix>>& m_factors);

// Coefficients x_a = <F_a, X>; X = sum_a x_a F_a.
Vector expand(const Matrix& X, const OperatorBasis& basis);
Vector expand(const Matrix& X, const std::vector<Matrix>& elements);
Matrix recombine(const Vector& coeffs, const std::vector<Matrix>& elements);

// --------------------------- superoperators ---------------------------------

// Linear map on density matrices kept as a sum of A rho B terms. The dense
// d^2 x d^2 matrix (row-major vec convention) is materialized on demand.
class Superoperator {
  public:
    Superoperator() = default;
    explicit Superoperator(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    void add_term(const Matrix& left, const Matrix& right);
    void add_left(const Matrix& A);       // rho -> A rho
    void add_right(const Matrix& B);      // rho -> rho B
    // rho -> gamma * (J rho K^dag - 1/2 {K^dag J, rho})
    void add_dissipator(const Matrix& J, const Matrix& K, Complex gamma);
    // rho -> i [rho, H]
    void add_hamiltonian(const Matrix& H);

    Matrix apply(const Matrix& rho) const;
    Matrix dense() const;
    std::size_t term_count() const { return terms_.size(); }

  private:
    int dim_ = 0;
    std::vector<std::pair<Matrix, Matrix>> terms_;   // sum of L rho R
};

}  // namespace opalg
}  // namespace qmetop
