#include "catdecomp/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace catdecomp {

Matrix identity(int d) { return Matrix::Identity(d, d); }
Matrix zero(int d) { return Matrix::Zero(d, d); }

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix tensor_product(const std::vector<Matrix>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor_product: empty list");
  Matrix out = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
  return out;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

cplx hs_inner(const Matrix& x, const Matrix& y) {
  return (x.adjoint() * y).trace();
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

void check_shape(const Matrix& m, const TensorShape& shape) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("partial_trace: operator not square");
  if (m.rows() != shape.total())
    throw std::invalid_argument("partial_trace: shape does not match operator");
}

}  // namespace

Matrix partial_trace(const Matrix& m, const TensorShape& shape,
                     const std::vector<int>& keep) {
  check_shape(m, shape);
  const int n = shape.size();
  std::vector<bool> kept(n, false);
  for (int f : keep) {
    if (f < 0 || f >= n) throw std::invalid_argument("partial_trace: bad factor");
    kept[f] = true;
  }
  int dk = 1, dt = 1;
  for (int f = 0; f < n; ++f) (kept[f] ? dk : dt) *= shape.dims[f];

  // Strides of each factor in the composite row-major index.
  std::vector<long> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * shape.dims[f + 1];
  std::vector<int> keep_f, tr_f;
  for (int f = 0; f < n; ++f) (kept[f] ? keep_f : tr_f).push_back(f);

  // Row-major index of a (kept-index, traced-index) pair.
  auto compose = [&](long ik, long it) {
    long idx = 0;
    for (int f = static_cast<int>(keep_f.size()) - 1; f >= 0; --f) {
      idx += (ik % shape.dims[keep_f[f]]) * stride[keep_f[f]];
      ik /= shape.dims[keep_f[f]];
    }
    for (int f = static_cast<int>(tr_f.size()) - 1; f >= 0; --f) {
      idx += (it % shape.dims[tr_f[f]]) * stride[tr_f[f]];
      it /= shape.dims[tr_f[f]];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      cplx s = 0.0;
      for (long t = 0; t < dt; ++t) s += m(compose(r, t), compose(c, t));
      out(r, c) = s;
    }
  return out;
}

Matrix permute_factors(const Matrix& m, const TensorShape& shape,
                       const std::vector<int>& perm) {
  check_shape(m, shape);
  const int n = shape.size();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_factors: bad permutation size");
  std::vector<long> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * shape.dims[f + 1];
  std::vector<int> out_dims(n);
  for (int k = 0; k < n; ++k) out_dims[k] = shape.dims[perm[k]];
  std::vector<long> out_stride(n, 1);
  for (int f = n - 2; f >= 0; --f) out_stride[f] = out_stride[f + 1] * out_dims[f + 1];

  const long d = shape.total();
  // map[i_out] = i_in
  std::vector<long> map(d);
  for (long i = 0; i < d; ++i) {
    long rem = i, src = 0;
    for (int k = 0; k < n; ++k) {
      long digit = (rem / out_stride[k]) % out_dims[k];
      src += digit * stride[perm[k]];
      rem %= out_stride[k];
    }
    map[i] = src;
  }
  Matrix out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

std::vector<Vector> null_space(const Matrix& m, double tol) {
  if (tol <= 0) throw std::invalid_argument("null_space: tol must be positive");
  // JacobiSVD rather than BDCSVD: the latter can emit NaN singular vectors
  // for matrices with several exactly-zero singular values.
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thr = tol * std::max(1.0, smax);
  std::vector<Vector> out;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) <= thr) out.push_back(svd.matrixV().col(k));
  // Columns of V beyond rank(m) (wide matrices) are also null vectors.
  for (Eigen::Index k = sv.size(); k < svd.matrixV().cols(); ++k)
    out.push_back(svd.matrixV().col(k));
  return out;
}

OperatorBasis orthonormalize(const std::vector<Matrix>& ops, double tol) {
  OperatorBasis basis;
  for (const Matrix& op : ops) {
    Matrix r = op;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& b : basis.elements) r -= hs_inner(b, r) * b;
    double n = r.norm();
    if (n > tol) basis.elements.push_back(r / n);
  }
  return basis;
}

Matrix hs_project(const Matrix& x, const OperatorBasis& basis) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& b : basis.elements) out += hs_inner(b, x) * b;
  return out;
}

namespace {

Matrix span_projector(const OperatorBasis& b) {
  if (b.empty()) return Matrix();
  const Eigen::Index n = b.elements.front().size();
  Matrix p = Matrix::Zero(n, n);
  for (const Matrix& e : b.elements) {
    Vector v = vec(e);
    p += v * v.adjoint();
  }
  return p;
}

}  // namespace

double span_distance(const OperatorBasis& a, const OperatorBasis& b) {
  if (a.dim() != b.dim()) return 1.0;
  if (a.empty()) return 0.0;
  return spectral_norm(span_projector(a) - span_projector(b));
}

bool same_span(const OperatorBasis& a, const OperatorBasis& b, double tol) {
  return a.dim() == b.dim() && span_distance(a, b) <= tol;
}

SpectralDecomposition spectral_decompose(const Matrix& hermitian,
                                         double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  const auto& ev = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const int d = static_cast<int>(ev.size());
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(d - 1)));
  const double gap = rel_tol * std::max(1e-300, scale);

  SpectralDecomposition out;
  // Eigen returns ascending order; emit clusters in descending order.
  int hi = d - 1;
  while (hi >= 0) {
    int lo = hi;
    while (lo > 0 && ev(hi) - ev(lo - 1) < gap) --lo;
    Matrix proj = Matrix::Zero(d, d);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
      proj += vecs.col(k) * vecs.col(k).adjoint();
      sum += ev(k);
    }
    out.eigenvalues.push_back(sum / (hi - lo + 1));
    out.projectors.push_back(proj);
    hi = lo - 1;
  }
  return out;
}

Matrix support_projector(const Matrix& psd, double tol) {
  Matrix w = support_isometry(psd, tol);
  return w * w.adjoint();
}

Matrix support_isometry(const Matrix& psd, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  const auto& ev = es.eigenvalues();
  const int d = static_cast<int>(ev.size());
  const double thr = tol * std::max(1.0, std::abs(ev(d - 1)));
  int r = 0;
  for (int k = 0; k < d; ++k)
    if (ev(k) > thr) ++r;
  Matrix w(d, r);
  int c = 0;
  for (int k = 0; k < d; ++k)
    if (ev(k) > thr) w.col(c++) = es.eigenvectors().col(k);
  return w;
}

Matrix matrix_sqrt(const Matrix& psd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix pseudo_inv_sqrt(const Matrix& psd, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  const auto& ev = es.eigenvalues();
  const double thr = tol * std::max(1.0, std::abs(ev(ev.size() - 1)));
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > thr) inv(k) = 1.0 / std::sqrt(ev(k));
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double p = es.eigenvalues()(k);
    if (p > 1e-12) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace catdecomp
