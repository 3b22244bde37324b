#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "catdecomp/core.hpp"

using namespace catdecomp;

namespace {

std::mt19937_64 rng(12345);

Matrix random_matrix(int r, int c) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(int d) {
  Matrix m = random_matrix(d, d);
  return 0.5 * (m + m.adjoint().eval());
}

Matrix random_density(int d) {
  Matrix g = random_matrix(d, d);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix ket(int d, int i) {
  Matrix v = Matrix::Zero(d, 1);
  v(i, 0) = 1.0;
  return v;
}

const Matrix kPauliX = (Matrix(2, 2) << 0, 1, 1, 0).finished();
const Matrix kPauliZ = (Matrix(2, 2) << 1, 0, 0, -1).finished();

}  // namespace

TEST_CASE("tensor product basics") {
  CHECK((tensor_product(identity(2), identity(2)) - identity(4)).norm() ==
        doctest::Approx(0.0));

  Matrix p0 = ket(2, 0) * ket(2, 0).adjoint();
  Matrix p1 = ket(2, 1) * ket(2, 1).adjoint();
  Matrix t = tensor_product(p0, p1);
  CHECK(t.rows() == 4);
  CHECK(std::abs(t(1, 1) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(t.sum() - cplx(1, 0)) < 1e-15);

  Matrix zx = tensor_product(kPauliZ, kPauliX);
  Matrix expected = Matrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = kPauliX;
  expected.block(2, 2, 2, 2) = -kPauliX;
  CHECK((zx - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("partial trace: product, entangled, and bb84 cases") {
  Matrix a = random_density(3), b = random_density(2);
  Matrix red = partial_trace(tensor_product(a, b), TensorShape{3, 2}, {0});
  CHECK((red - a).norm() < 1e-12);

  // Maximally entangled state has maximally mixed marginal.
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  Matrix bell = phi * phi.adjoint();
  Matrix marg = partial_trace(bell, TensorShape{2, 2}, {0});
  CHECK((marg - identity(2) / 2).norm() < 1e-12);

  // Oracle first: the B-marginal of
  // 1/2 |0><0| (x) |0><0| + 1/2 |+><+| (x) |1><1| is diag(1/2, 1/2).
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  Matrix p0 = ket(2, 0) * ket(2, 0).adjoint();
  Matrix p1 = ket(2, 1) * ket(2, 1).adjoint();
  Matrix rho = 0.5 * tensor_product(p0, p0) + 0.5 * tensor_product(plus, p1);
  Matrix mb = partial_trace(rho, TensorShape{2, 2}, {1});
  CHECK((mb - identity(2) / 2).norm() < 1e-12);
}

TEST_CASE("partial trace invariants: linearity, trace, composition") {
  Matrix m = random_hermitian(12);
  TensorShape abc{2, 3, 2};
  CHECK(std::abs(partial_trace(m, abc, {0}).trace() - m.trace()) < 1e-10);

  // Tr_B then Tr_C equals Tr_BC.
  Matrix ab = partial_trace(m, abc, {0, 1});
  Matrix a1 = partial_trace(ab, TensorShape{2, 3}, {0});
  Matrix a2 = partial_trace(m, abc, {0});
  CHECK((a1 - a2).norm() < 1e-10);

  Matrix n = random_hermitian(12);
  Matrix lin = partial_trace(2.0 * m + 3.0 * n, abc, {2}) -
               2.0 * partial_trace(m, abc, {2}) -
               3.0 * partial_trace(n, abc, {2});
  CHECK(lin.norm() < 1e-10);
}

TEST_CASE("permute factors") {
  Matrix a = random_hermitian(2), b = random_hermitian(3);
  Matrix ab = tensor_product(a, b);
  Matrix ba = permute_factors(ab, TensorShape{2, 3}, {1, 0});
  CHECK((ba - tensor_product(b, a)).norm() < 1e-12);

  Matrix c = random_hermitian(2);
  Matrix abc = tensor_product(tensor_product(a, b), c);
  Matrix cab = permute_factors(abc, TensorShape{2, 3, 2}, {2, 0, 1});
  CHECK((cab - tensor_product(tensor_product(c, a), b)).norm() < 1e-12);
}

TEST_CASE("null space examples") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(2, 2) = 2.0;
  auto ns = null_space(d, 1e-9);
  REQUIRE(ns.size() == 1);
  CHECK(std::abs(std::abs(ns[0](1)) - 1.0) < 1e-12);

  CHECK(null_space(identity(3), 1e-9).empty());

  // Superoperator of the fully depolarizing qubit channel minus identity:
  // oracle is a brute-force eigendecomposition showing the only fixed
  // direction is vec(identity).
  Matrix s = Matrix::Zero(4, 4);
  // Column-major vec: Phi(X) = Tr[X]/2 * I, so vec(Phi(X)) depends only on
  // X_00 + X_11 = v0 + v3.
  s(0, 0) = s(0, 3) = 0.5;
  s(3, 0) = s(3, 3) = 0.5;
  auto fixed = null_space(s - identity(4), 1e-9);
  REQUIRE(fixed.size() == 1);
  Vector vid = Vector::Zero(4);
  vid(0) = vid(3) = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(vid.dot(fixed[0])) - 1.0) < 1e-10);
}

TEST_CASE("null space invariant: orthonormal, small image") {
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_matrix(6, 6);
    // Force a 2-dimensional null space.
    Matrix v = random_matrix(6, 2);
    Eigen::HouseholderQR<Matrix> qr(v);
    Matrix q = qr.householderQ();
    Matrix proj = identity(6) - q.leftCols(2) * q.leftCols(2).adjoint();
    m = m * proj;
    auto ns = null_space(m, 1e-9);
    REQUIRE(ns.size() == 2);
    for (size_t i = 0; i < ns.size(); ++i) {
      CHECK((m * ns[i]).norm() <= 10 * 1e-9 * spectral_norm(m));
      for (size_t j = 0; j < i; ++j)
        CHECK(std::abs(ns[i].dot(ns[j])) < 1e-10);
    }
  }
}

TEST_CASE("hs_project examples and contraction") {
  OperatorBasis idb;
  idb.elements.push_back(identity(2) / std::sqrt(2.0));
  CHECK(hs_project(kPauliZ, idb).norm() < 1e-14);

  Matrix p0 = ket(2, 0) * ket(2, 0).adjoint();
  CHECK((hs_project(p0, idb) - identity(2) / 2).norm() < 1e-14);

  Matrix x = random_matrix(2, 2);
  OperatorBasis withx = idb;
  withx.elements.push_back(kPauliX / std::sqrt(2.0));
  Matrix px = hs_project(x, withx);
  CHECK((hs_project(px, withx) - px).norm() < 1e-12);  // idempotent
  CHECK(px.norm() <= x.norm() + 1e-12);                // contraction
}

TEST_CASE("orthonormalize and span comparison") {
  std::vector<Matrix> ops = {identity(2), kPauliZ, identity(2) + kPauliZ,
                             kPauliX};
  OperatorBasis b = orthonormalize(ops);
  CHECK(b.dim() == 3);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j <= i; ++j) {
      cplx ip = hs_inner(b.elements[i], b.elements[j]);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-10);
    }

  OperatorBasis c = orthonormalize({kPauliZ, kPauliX, identity(2)});
  CHECK(same_span(b, c));
  OperatorBasis d = orthonormalize({identity(2), kPauliZ});
  CHECK(!same_span(b, d));
}

TEST_CASE("spectral decomposition reconstructs the input") {
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = random_hermitian(8);
    SpectralDecomposition sd = spectral_decompose(m);
    Matrix rec = Matrix::Zero(8, 8);
    for (size_t i = 0; i < sd.eigenvalues.size(); ++i)
      rec += sd.eigenvalues[i] * sd.projectors[i];
    CHECK(spectral_norm(rec - m) <= 1e-10 * std::max(1.0, spectral_norm(m)));
  }
  // Degenerate eigenvalues share one projector.
  Matrix dg = Matrix::Zero(3, 3);
  dg(0, 0) = dg(1, 1) = 1.0;
  dg(2, 2) = 2.0;
  SpectralDecomposition sd = spectral_decompose(dg);
  REQUIRE(sd.eigenvalues.size() == 2);
  CHECK(sd.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(sd.projectors[1].trace().real() == doctest::Approx(2.0));
}

TEST_CASE("support and matrix square roots") {
  Matrix rho = random_density(4);
  Matrix sq = matrix_sqrt(rho);
  CHECK((sq * sq - rho).norm() < 1e-10);
  Matrix is = pseudo_inv_sqrt(rho);
  CHECK((is * rho * is - support_projector(rho)).norm() < 1e-8);

  // Rank-deficient case.
  Matrix v = random_matrix(4, 2);
  Matrix low = v * v.adjoint();
  Matrix p = support_projector(low, 1e-9);
  CHECK(p.trace().real() == doctest::Approx(2.0));
  Matrix w = support_isometry(low, 1e-9);
  CHECK((w.adjoint() * w - identity(2)).norm() < 1e-10);
  CHECK((p * low - low).norm() < 1e-10);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(identity(2) / 2) == doctest::Approx(1.0));
  Matrix pure = ket(4, 1) * ket(4, 1).adjoint();
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  const double h = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
  CHECK(von_neumann_entropy(d) == doctest::Approx(h).epsilon(1e-10));
}

TEST_CASE("vec and unvec round trip") {
  Matrix m = random_matrix(3, 5);
  CHECK((unvec(vec(m), 3, 5) - m).norm() == doctest::Approx(0.0));
  // Column-major convention: vec stacks columns.
  Matrix t(2, 2);
  t << 1, 3, 2, 4;
  Vector v = vec(t);
  CHECK(std::abs(v(0) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(v(1) - cplx(2, 0)) < 1e-15);
  CHECK(std::abs(v(2) - cplx(3, 0)) < 1e-15);
}

TEST_CASE("norms") {
  Matrix m = kPauliZ;
  CHECK(trace_norm(m) == doctest::Approx(2.0));
  CHECK(spectral_norm(m) == doctest::Approx(1.0));
  Matrix r = random_matrix(5, 5);
  CHECK(trace_norm(r) >= spectral_norm(r) - 1e-12);
}
