#ifndef CATDECOMP_ALGEBRA_HPP
#define CATDECOMP_ALGEBRA_HPP

#include <random>

#include "catdecomp/core.hpp"

namespace catdecomp {

/// *-closed, multiplication-closed operator subspace given by an
/// orthonormal basis.
struct OperatorAlgebra {
  int ambient_dim = 0;
  OperatorBasis basis;
  bool contains_identity = false;

  int dim() const { return basis.dim(); }
};

/// One factor of a Wedderburn decomposition: supp(P) carries a tensor
/// product structure H_P (x) L_P on which the algebra acts as
/// B(H_P) (x) 1_{L_P}.
struct WedderburnBlock {
  Matrix central_projector;           // P
  Matrix block_isometry;              // V_P : H_P (x) L_P -> ambient space
  int dim_h = 0;                      // |H_P|
  int dim_l = 0;                      // |L_P|
  std::vector<Matrix> minimal_projectors;  // Q_i, i = 1..dim_h
  std::vector<Matrix> matrix_units;        // E_ij, row-major in (i, j)

  const Matrix& unit(int i, int j) const { return matrix_units[i * dim_h + j]; }
};

struct WedderburnDecomposition {
  std::vector<WedderburnBlock> blocks;
  int ambient_dim = 0;

  int algebra_dim() const {
    int s = 0;
    for (const auto& b : blocks) s += b.dim_h * b.dim_h;
    return s;
  }
};

/// Smallest *-closed, multiplication-closed subspace containing the
/// generators and their adjoints.
OperatorAlgebra generate_star_algebra(const std::vector<Matrix>& generators,
                                      double tol = 1e-8);

/// {X : [X, B] = 0 for every basis element B}; always a unital *-algebra.
OperatorAlgebra commutant(const OperatorAlgebra& alg, double tol = kDefaultTol);
OperatorAlgebra commutant(const std::vector<Matrix>& generators, int ambient_dim,
                          double tol = kDefaultTol);

/// Center = algebra intersected with its commutant.
OperatorBasis algebra_center(const OperatorAlgebra& alg,
                             double tol = kDefaultTol);

/// Random Hermitian element of span(basis); used for genericity sampling.
Matrix random_hermitian_element(const OperatorBasis& basis,
                                std::mt19937_64& rng);

/// Pairwise-orthogonal minimal central projectors summing to the unit.
/// Throws NumericalError after 8 failed genericity resamples.
std::vector<Matrix> minimal_central_projections(const OperatorAlgebra& alg,
                                                std::mt19937_64& rng,
                                                double tol = kDefaultTol);

/// Full constructive Wedderburn decomposition of a unital *-algebra.
WedderburnDecomposition wedderburn_decompose(const OperatorAlgebra& alg,
                                             std::mt19937_64& rng,
                                             double tol = kDefaultTol);

}  // namespace catdecomp

#endif  // CATDECOMP_ALGEBRA_HPP
