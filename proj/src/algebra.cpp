#include "catdecomp/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace catdecomp {

namespace {

bool contains_identity_check(const OperatorBasis& basis, int d, double tol) {
  Matrix id = identity(d);
  return (hs_project(id, basis) - id).norm() <= 10 * tol;
}

/// Unit of the algebra: the projection of the ambient identity onto the
/// span (equals the support projector for a *-closed algebra).
Matrix algebra_unit(const OperatorAlgebra& alg) {
  return hs_project(identity(alg.ambient_dim), alg.basis);
}

}  // namespace

OperatorAlgebra generate_star_algebra(const std::vector<Matrix>& generators,
                                      double tol) {
  if (generators.empty())
    throw std::invalid_argument("generate_star_algebra: empty generator list");
  const int d = static_cast<int>(generators.front().rows());
  for (const Matrix& g : generators)
    if (g.rows() != d || g.cols() != d)
      throw std::invalid_argument("generate_star_algebra: nonuniform shapes");

  std::vector<Matrix> seed;
  for (const Matrix& g : generators) {
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  OperatorBasis basis = orthonormalize(seed, tol);

  const int max_rounds = d * d;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Matrix> candidates;
    for (const Matrix& b : basis.elements) candidates.push_back(b.adjoint());
    for (const Matrix& a : basis.elements)
      for (const Matrix& b : basis.elements) candidates.push_back(a * b);
    const int before = basis.dim();
    OperatorBasis grown = basis;
    for (const Matrix& c : candidates) {
      Matrix r = c;
      for (int pass = 0; pass < 2; ++pass)
        for (const Matrix& e : grown.elements) r -= hs_inner(e, r) * e;
      const double n = r.norm();
      if (n > tol) grown.elements.push_back(r / n);
    }
    basis = std::move(grown);
    if (basis.dim() == before) break;
  }

  OperatorAlgebra alg;
  alg.ambient_dim = d;
  alg.basis = std::move(basis);
  alg.contains_identity = contains_identity_check(alg.basis, d, tol);
  return alg;
}

OperatorAlgebra commutant(const std::vector<Matrix>& generators,
                          int ambient_dim, double tol) {
  const int d = ambient_dim;
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  Matrix stacked(dd * static_cast<Eigen::Index>(generators.size()), dd);
  Matrix id = identity(d);
  for (size_t g = 0; g < generators.size(); ++g) {
    // vec([B, X]) = (1 (x) B - B^T (x) 1) vec(X), column-major vec.
    stacked.block(g * dd, 0, dd, dd) =
        tensor_product(id, generators[g]) -
        tensor_product(generators[g].transpose(), id);
  }
  std::vector<Matrix> ops;
  for (const Vector& v : null_space(stacked, tol)) ops.push_back(unvec(v, d, d));

  OperatorAlgebra alg;
  alg.ambient_dim = d;
  alg.basis = orthonormalize(ops);
  alg.contains_identity = true;
  return alg;
}

OperatorAlgebra commutant(const OperatorAlgebra& alg, double tol) {
  return commutant(alg.basis.elements, alg.ambient_dim, tol);
}

OperatorBasis algebra_center(const OperatorAlgebra& alg, double tol) {
  const int n = alg.dim();
  const int d = alg.ambient_dim;
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  // Coefficient-space constraint: sum_j x_j [B_j, B_k] = 0 for every k.
  Matrix m(dd * n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      Matrix comm = alg.basis.elements[j] * alg.basis.elements[k] -
                    alg.basis.elements[k] * alg.basis.elements[j];
      m.block(static_cast<Eigen::Index>(k) * dd, j, dd, 1) = vec(comm);
    }
  std::vector<Matrix> ops;
  for (const Vector& x : null_space(m, tol)) {
    Matrix e = Matrix::Zero(d, d);
    for (int j = 0; j < n; ++j) e += x(j) * alg.basis.elements[j];
    ops.push_back(std::move(e));
  }
  return orthonormalize(ops);
}

Matrix random_hermitian_element(const OperatorBasis& basis,
                                std::mt19937_64& rng) {
  if (basis.empty())
    throw std::invalid_argument("random_hermitian_element: empty basis");
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index d = basis.elements.front().rows();
  Matrix z = Matrix::Zero(d, d);
  for (const Matrix& b : basis.elements) {
    double re = normal(rng), im = normal(rng);
    z += cplx(re, im) * b;
  }
  return 0.5 * (z + z.adjoint());
}

namespace {

constexpr int kGenericityRetries = 8;
constexpr double kGenericGap = 1e-6;
// Shift applied along the algebra unit so that genuine algebra eigenvalues
// separate cleanly from the kernel outside the unit's support.
constexpr double kUnitShift = 64.0;

std::vector<Matrix> central_spectral_projectors(const OperatorBasis& center,
                                                const Matrix& unit,
                                                std::mt19937_64& rng) {
  Matrix h = random_hermitian_element(center, rng) + kUnitShift * unit;
  SpectralDecomposition sd = spectral_decompose(h, kGenericGap);
  std::vector<Matrix> projs;
  for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    if (std::abs(sd.eigenvalues[c]) < kUnitShift / 2) continue;  // kernel
    projs.push_back(sd.projectors[c]);
  }
  return projs;
}

int block_center_dim(const OperatorAlgebra& alg, const Matrix& p, double tol) {
  Matrix w = support_isometry(p, tol);
  std::vector<Matrix> compressed;
  for (const Matrix& b : alg.basis.elements)
    compressed.push_back(w.adjoint() * b * w);
  OperatorAlgebra blk;
  blk.ambient_dim = static_cast<int>(w.cols());
  blk.basis = orthonormalize(compressed);
  return algebra_center(blk, tol).dim();
}

}  // namespace

std::vector<Matrix> minimal_central_projections(const OperatorAlgebra& alg,
                                                std::mt19937_64& rng,
                                                double tol) {
  OperatorBasis center = algebra_center(alg, tol);
  Matrix unit = algebra_unit(alg);
  if (center.dim() == 1) return {unit};

  for (int attempt = 0; attempt < kGenericityRetries; ++attempt) {
    std::vector<Matrix> projs =
        central_spectral_projectors(center, unit, rng);
    if (static_cast<int>(projs.size()) != center.dim()) continue;
    Matrix sum = Matrix::Zero(alg.ambient_dim, alg.ambient_dim);
    for (const Matrix& p : projs) sum += p;
    if ((sum - unit).norm() > 100 * tol) continue;
    bool all_minimal = true;
    for (const Matrix& p : projs)
      if (block_center_dim(alg, p, tol) != 1) {
        all_minimal = false;
        break;
      }
    if (all_minimal) return projs;
  }
  throw NumericalError(
      "minimal_central_projections: genericity retries exhausted");
}

namespace {

struct BlockScratch {
  Matrix w;                       // support isometry of P, d x r
  OperatorBasis basis;            // compressed block algebra basis
};

BlockScratch compress_block(const OperatorAlgebra& alg, const Matrix& p,
                            double tol) {
  BlockScratch s;
  s.w = support_isometry(p, tol);
  std::vector<Matrix> ops;
  for (const Matrix& b : alg.basis.elements)
    ops.push_back(s.w.adjoint() * b * s.w);
  s.basis = orthonormalize(ops);
  return s;
}

/// Minimal projectors of a compressed (unital) block algebra from a generic
/// Hermitian element. Returns empty on a failed genericity draw.
std::vector<Matrix> draw_minimal_projectors(const OperatorBasis& basis,
                                            std::mt19937_64& rng,
                                            double tol) {
  Matrix h = random_hermitian_element(basis, rng);
  SpectralDecomposition sd = spectral_decompose(h, kGenericGap);
  std::vector<Matrix> qs = sd.projectors;
  // Every Q must satisfy Q A Q = C Q.
  for (const Matrix& q : qs) {
    std::vector<Matrix> pinched;
    for (const Matrix& b : basis.elements) pinched.push_back(q * b * q);
    if (orthonormalize(pinched).dim() != 1) return {};
  }
  // All ranks must agree.
  const int r0 = static_cast<int>(std::lround(qs.front().trace().real()));
  for (const Matrix& q : qs)
    if (static_cast<int>(std::lround(q.trace().real())) != r0) return {};
  (void)tol;
  return qs;
}

}  // namespace

WedderburnDecomposition wedderburn_decompose(const OperatorAlgebra& alg,
                                             std::mt19937_64& rng,
                                             double tol) {
  WedderburnDecomposition dec;
  dec.ambient_dim = alg.ambient_dim;

  for (const Matrix& p : minimal_central_projections(alg, rng, tol)) {
    BlockScratch blk = compress_block(alg, p, tol);
    const int r = static_cast<int>(blk.w.cols());

    std::vector<Matrix> qs;
    for (int attempt = 0; attempt < kGenericityRetries && qs.empty(); ++attempt)
      qs = draw_minimal_projectors(blk.basis, rng, tol);
    if (qs.empty())
      throw NumericalError("wedderburn_decompose: genericity retries exhausted");

    const int h = static_cast<int>(qs.size());
    const int l = static_cast<int>(std::lround(qs.front().trace().real()));

    // Matrix units per the single-equivalence-class construction:
    // E_11 = Q_1, E_1j = normalized Q_1 X Q_j, E_ij = E_i1 E_1j.
    std::vector<Matrix> e1j(h);
    e1j[0] = qs[0];
    for (int j = 1; j < h; ++j) {
      double best = 0.0;
      Matrix cand;
      for (const Matrix& b : blk.basis.elements) {
        Matrix t = qs[0] * b * qs[j];
        const double n = t.norm();
        if (n > best) {
          best = n;
          cand = std::move(t);
        }
      }
      if (best <= 100 * tol)
        throw NumericalError(
            "wedderburn_decompose: no connecting element found; algebra "
            "closure or tolerance failure");
      e1j[j] = cand * (std::sqrt(static_cast<double>(l)) / best);
    }
    std::vector<Matrix> units(static_cast<size_t>(h) * h);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) units[i * h + j] = e1j[i].adjoint() * e1j[j];

    // Isometry columns: |i>_H (x) |m>_L  ->  E_i1 u_m with {u_m} an
    // orthonormal basis of range(Q_1).
    Matrix u1 = support_isometry(qs[0], tol);
    Matrix v(r, static_cast<Eigen::Index>(h) * l);
    for (int i = 0; i < h; ++i)
      for (int m = 0; m < l; ++m)
        v.col(static_cast<Eigen::Index>(i) * l + m) =
            units[i * h + 0] * u1.col(m);

    WedderburnBlock out;
    out.central_projector = blk.w * blk.w.adjoint();
    out.block_isometry = blk.w * v;
    out.dim_h = h;
    out.dim_l = l;
    for (const Matrix& q : qs)
      out.minimal_projectors.push_back(blk.w * q * blk.w.adjoint());
    for (const Matrix& e : units)
      out.matrix_units.push_back(blk.w * e * blk.w.adjoint());
    dec.blocks.push_back(std::move(out));
  }

  std::stable_sort(dec.blocks.begin(), dec.blocks.end(),
                   [](const WedderburnBlock& a, const WedderburnBlock& b) {
                     if (a.dim_h != b.dim_h) return a.dim_h > b.dim_h;
                     if (a.dim_l != b.dim_l) return a.dim_l > b.dim_l;
                     return a.central_projector.trace().real() >
                            b.central_projector.trace().real();
                   });
  return dec;
}

}  // namespace catdecomp
