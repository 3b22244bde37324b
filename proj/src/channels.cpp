#include "catdecomp/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

namespace catdecomp {

const Matrix& QuantumChannel::choi() const {
  if (!choi_cache_) choi_cache_ = to_choi(*this);
  return *choi_cache_;
}

Matrix QuantumChannel::apply(const Matrix& x) const {
  Matrix out = Matrix::Zero(dim_out, dim_out);
  for (const Matrix& k : kraus) out += k * x * k.adjoint();
  return out;
}

ProjectorSet make_projector_set(std::vector<Matrix> projectors, double tol) {
  if (projectors.empty())
    throw std::invalid_argument("projector set: empty");
  const Eigen::Index d = projectors.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& p : projectors) {
    if (p.rows() != d || p.cols() != d)
      throw std::invalid_argument("projector set: inconsistent shapes");
    if ((p * p - p).norm() > 10 * tol || (p - p.adjoint()).norm() > 10 * tol)
      throw std::invalid_argument("projector set: not a Hermitian idempotent");
    sum += p;
  }
  for (size_t i = 0; i < projectors.size(); ++i)
    for (size_t j = i + 1; j < projectors.size(); ++j)
      if ((projectors[i] * projectors[j]).norm() > 10 * tol)
        throw std::invalid_argument("projector set: not pairwise orthogonal");
  ProjectorSet ps;
  ps.projectors = std::move(projectors);
  ps.complete = (sum - identity(static_cast<int>(d))).norm() <= 10 * tol;
  return ps;
}

namespace {

void check_kraus_shapes(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel: empty Kraus list");
  for (const Matrix& k : kraus)
    if (k.rows() != kraus.front().rows() || k.cols() != kraus.front().cols())
      throw std::invalid_argument("channel: nonuniform Kraus shapes");
}

}  // namespace

QuantumChannel make_channel(std::vector<Matrix> kraus) {
  check_kraus_shapes(kraus);
  const int din = static_cast<int>(kraus.front().cols());
  const int dout = static_cast<int>(kraus.front().rows());
  Matrix sum = Matrix::Zero(din, din);
  for (const Matrix& k : kraus) sum += k.adjoint() * k;
  const double dev = (sum - identity(din)).norm();
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << "channel: not trace preserving, ||sum K^dag K - 1|| = " << dev;
    throw std::invalid_argument(msg.str());
  }
  QuantumChannel ch;
  ch.dim_in = din;
  ch.dim_out = dout;
  ch.kraus = std::move(kraus);
  ch.trace_preserving = true;
  return ch;
}

QuantumChannel make_cp_map(std::vector<Matrix> kraus) {
  check_kraus_shapes(kraus);
  QuantumChannel ch;
  ch.dim_in = static_cast<int>(kraus.front().cols());
  ch.dim_out = static_cast<int>(kraus.front().rows());
  ch.kraus = std::move(kraus);
  ch.trace_preserving = false;
  return ch;
}

Matrix to_choi(const QuantumChannel& ch) {
  const int din = ch.dim_in, dout = ch.dim_out;
  Matrix j = Matrix::Zero(dout * din, dout * din);
  for (const Matrix& k : ch.kraus) {
    // |w> with w_{(a,i)} = K_{a,i} under out (x) in composite indexing.
    Vector w(dout * din);
    for (int a = 0; a < dout; ++a)
      for (int i = 0; i < din; ++i) w(a * din + i) = k(a, i);
    j += w * w.adjoint();
  }
  return j;
}

QuantumChannel channel_from_choi(const Matrix& choi, int dim_in, int dim_out,
                                 bool require_tp) {
  if (choi.rows() != static_cast<Eigen::Index>(dim_in) * dim_out ||
      choi.rows() != choi.cols())
    throw std::invalid_argument("channel_from_choi: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi);
  std::vector<Matrix> kraus;
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m) {
    const double lam = es.eigenvalues()(m);
    if (lam <= 1e-10) continue;
    Matrix k(dim_out, dim_in);
    for (int a = 0; a < dim_out; ++a)
      for (int i = 0; i < dim_in; ++i)
        k(a, i) = std::sqrt(lam) * es.eigenvectors()(a * dim_in + i, m);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(dim_out, dim_in));
  return require_tp ? make_channel(std::move(kraus))
                    : make_cp_map(std::move(kraus));
}

Matrix superoperator(const QuantumChannel& ch) {
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(ch.dim_out) * ch.dim_out,
                          static_cast<Eigen::Index>(ch.dim_in) * ch.dim_in);
  // vec(K X K^dag) = (conj(K) (x) K) vec(X) for column-major vec.
  for (const Matrix& k : ch.kraus) s += tensor_product(k.conjugate(), k);
  return s;
}

QuantumState apply_on_factor(const QuantumChannel& ch, const QuantumState& s,
                             int factor) {
  if (factor < 0 || factor >= s.shape.size())
    throw std::invalid_argument("apply_on_factor: bad factor index");
  if (s.shape.dims[factor] != ch.dim_in)
    throw std::invalid_argument("apply_on_factor: dimension mismatch");
  int dl = 1, dr = 1;
  for (int f = 0; f < factor; ++f) dl *= s.shape.dims[f];
  for (int f = factor + 1; f < s.shape.size(); ++f) dr *= s.shape.dims[f];
  Matrix out = Matrix::Zero(
      static_cast<Eigen::Index>(dl) * ch.dim_out * dr,
      static_cast<Eigen::Index>(dl) * ch.dim_out * dr);
  for (const Matrix& k : ch.kraus) {
    Matrix kf = tensor_product(tensor_product(identity(dl), k), identity(dr));
    out += kf * s.matrix * kf.adjoint();
  }
  QuantumState res;
  res.matrix = std::move(out);
  res.shape = s.shape;
  res.shape.dims[factor] = ch.dim_out;
  return res;
}

QuantumChannel adjoint(const QuantumChannel& ch) {
  std::vector<Matrix> kraus;
  kraus.reserve(ch.kraus.size());
  for (const Matrix& k : ch.kraus) kraus.push_back(k.adjoint());
  return make_cp_map(std::move(kraus));
}

QuantumChannel compose(const QuantumChannel& after,
                       const QuantumChannel& before) {
  if (after.dim_in != before.dim_out)
    throw std::invalid_argument("compose: dimension mismatch");
  std::vector<Matrix> kraus;
  for (const Matrix& a : after.kraus)
    for (const Matrix& b : before.kraus) kraus.push_back(a * b);
  return (after.trace_preserving && before.trace_preserving)
             ? make_channel(std::move(kraus))
             : make_cp_map(std::move(kraus));
}

QuantumChannel pinching(const ProjectorSet& ps) {
  if (!ps.complete)
    throw std::invalid_argument("pinching: projector set not complete");
  return make_channel(ps.projectors);
}

QuantumChannel identity_channel(int d) {
  return make_channel({identity(d)});
}

QuantumChannel replacer_channel(const Matrix& sigma) {
  const int d = static_cast<int>(sigma.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  std::vector<Matrix> kraus;
  for (int a = 0; a < d; ++a) {
    const double lam = std::max(0.0, es.eigenvalues()(a));
    if (lam <= 1e-14) continue;
    for (int b = 0; b < d; ++b) {
      Matrix k = Matrix::Zero(d, d);
      k.col(b) = std::sqrt(lam) * es.eigenvectors().col(a);
      kraus.push_back(std::move(k));
    }
  }
  return make_channel(std::move(kraus));
}

QuantumChannel unitary_channel(const Matrix& u) {
  return make_channel({u});
}

double choi_distance(const QuantumChannel& a, const QuantumChannel& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out)
    return std::numeric_limits<double>::infinity();
  return (a.choi() - b.choi()).norm();
}

bool is_unitary_channel(const QuantumChannel& ch, double tol) {
  if (ch.dim_in != ch.dim_out) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(ch.choi());
  const auto& ev = es.eigenvalues();
  // Rank-1 Choi with full weight on the top eigenvector.
  for (Eigen::Index k = 0; k + 1 < ev.size(); ++k)
    if (std::abs(ev(k)) > tol * ch.dim_in) return false;
  return std::abs(ev(ev.size() - 1) - ch.dim_in) <= tol * ch.dim_in;
}

}  // namespace catdecomp
