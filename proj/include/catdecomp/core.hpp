#ifndef CATDECOMP_CORE_HPP
#define CATDECOMP_CORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace catdecomp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Thrown when a genericity retry budget is exhausted or two computation
// routes disagree beyond tolerance. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kDefaultTol = 1e-9;
// Eigenvalues closer than this (relative to the spectral norm) share a
// spectral projector.
constexpr double kDegeneracyTol = 1e-8;

/// Ordered local dimensions of the tensor factors of an operator.
/// The leftmost factor is the most significant in row-major index
/// arithmetic; every module inherits this convention.
struct TensorShape {
  std::vector<int> dims;

  TensorShape() = default;
  TensorShape(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit TensorShape(std::vector<int> d) : dims(std::move(d)) { validate(); }

  int total() const {
    int t = 1;
    for (int d : dims) t *= d;
    return t;
  }
  int size() const { return static_cast<int>(dims.size()); }
  void validate() const {
    for (int d : dims)
      if (d <= 0) throw std::invalid_argument("TensorShape: nonpositive dim");
  }
};

/// Density matrix together with its declared tensor-factor dimensions.
struct QuantumState {
  Matrix matrix;
  TensorShape shape;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

Matrix identity(int d);
Matrix zero(int d);

/// Kronecker product, leftmost factor most significant.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Matrix tensor_product(const std::vector<Matrix>& factors);

/// Column-major vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

/// Hilbert-Schmidt inner product Tr[x^dag y].
cplx hs_inner(const Matrix& x, const Matrix& y);

double trace_norm(const Matrix& m);
double spectral_norm(const Matrix& m);

/// Trace out all factors not listed in `keep`. Kept factors stay in their
/// original order.
Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     const std::vector<int>& keep);

/// Reorder tensor factors of a square operator according to `perm`, where
/// perm[k] is the source factor placed at slot k of the output.
Matrix permute_factors(const Matrix& m, const TensorShape& shape,
                       const std::vector<int>& perm);

/// Orthonormal basis (as column vectors) of the right-singular space with
/// singular value <= tol * max(1, sigma_max).
std::vector<Vector> null_space(const Matrix& m, double tol = kDefaultTol);

/// A list of same-shape operators, pairwise orthonormal under the
/// Hilbert-Schmidt inner product.
struct OperatorBasis {
  std::vector<Matrix> elements;

  int dim() const { return static_cast<int>(elements.size()); }
  bool empty() const { return elements.empty(); }
};

/// Orthonormalize the span of `ops`, dropping directions with residual
/// norm <= tol. Modified Gram-Schmidt with one re-orthogonalization pass.
OperatorBasis orthonormalize(const std::vector<Matrix>& ops,
                             double tol = 1e-10);

/// Orthogonal projection of x onto span(basis); a contraction in HS norm.
Matrix hs_project(const Matrix& x, const OperatorBasis& basis);

/// True when span(a) == span(b) as subspaces: equal dimensions and
/// projector difference below `tol` in spectral norm (sin of the largest
/// principal angle).
bool same_span(const OperatorBasis& a, const OperatorBasis& b,
               double tol = 1e-7);

/// Largest principal-angle sine between the spans (requires equal dims to
/// be meaningful; returns 1.0 on dimension mismatch).
double span_distance(const OperatorBasis& a, const OperatorBasis& b);

/// Spectral decomposition of a Hermitian operator with eigenvalues grouped
/// into degenerate clusters (gap below kDegeneracyTol * spectral norm).
struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // one representative per cluster, descending
  std::vector<Matrix> projectors;    // corresponding spectral projectors
};
SpectralDecomposition spectral_decompose(const Matrix& hermitian,
                                         double rel_tol = kDegeneracyTol);

/// Projector onto the support (eigenvalues > tol) of a PSD operator.
Matrix support_projector(const Matrix& psd, double tol = kDefaultTol);

/// Isometry whose columns span the support of a PSD operator.
Matrix support_isometry(const Matrix& psd, double tol = kDefaultTol);

/// Square root and inverse square root on the support of a PSD operator.
Matrix matrix_sqrt(const Matrix& psd);
Matrix pseudo_inv_sqrt(const Matrix& psd, double tol = kDefaultTol);

/// Base-2 von Neumann entropy; eigenvalues below 1e-12 contribute zero.
double von_neumann_entropy(const Matrix& rho);

}  // namespace catdecomp

#endif  // CATDECOMP_CORE_HPP
