#include "catdecomp/generators.hpp"

#include <cmath>

namespace catdecomp {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  // Mix the stream index into the seed (splitmix64 step).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return std::mt19937_64(z ^ (z >> 31));
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng), im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

Matrix random_unitary(int d, std::mt19937_64& rng) {
  Matrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    cplx diag = r(k, k);
    q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

Matrix random_isometry(int d_from, int d_to, std::mt19937_64& rng) {
  if (d_to < d_from)
    throw std::invalid_argument("random_isometry: target too small");
  return random_unitary(d_to, rng).leftCols(d_from);
}

Matrix random_density_matrix(int d, std::mt19937_64& rng) {
  Matrix g = random_gaussian(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Matrix random_nondegenerate_density_matrix(int d, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix rho = random_density_matrix(d, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    bool ok = es.eigenvalues().minCoeff() > 1e-4;
    for (int k = 0; ok && k + 1 < d; ++k)
      ok = es.eigenvalues()(k + 1) - es.eigenvalues()(k) > 1e-4;
    if (ok) return rho;
  }
  throw NumericalError("random_nondegenerate_density_matrix: rejection failed");
}

QuantumChannel random_channel(int d_in, int d_out, int kraus_rank,
                              std::mt19937_64& rng) {
  if (d_in <= 0 || d_out <= 0 || kraus_rank <= 0 ||
      kraus_rank > d_in * d_out)
    throw std::invalid_argument("random_channel: bad dimensions");
  Matrix w = random_isometry(d_in, d_out * kraus_rank, rng);
  std::vector<Matrix> kraus;
  for (int k = 0; k < kraus_rank; ++k)
    kraus.push_back(w.middleRows(static_cast<Eigen::Index>(k) * d_out, d_out));
  return make_channel(std::move(kraus));
}

PlantedChannel planted_fixed_point_channel(
    const std::vector<std::pair<int, int>>& blocks, std::mt19937_64& rng) {
  int d = 0;
  for (auto [h, l] : blocks) {
    if (h <= 0 || l <= 0)
      throw std::invalid_argument("planted channel: bad block dims");
    d += h * l;
  }

  PlantedChannel out;
  out.block_dims = blocks;
  Matrix u = random_unitary(d, rng);
  out.conjugating_unitary = u;

  std::vector<Matrix> kraus;
  int offset = 0;
  for (auto [h, l] : blocks) {
    Matrix rho = random_nondegenerate_density_matrix(l, rng);
    out.block_states.push_back(rho);
    for (const Matrix& k : replacer_channel(rho).kraus) {
      Matrix full = Matrix::Zero(d, d);
      full.block(offset, offset, h * l, h * l) =
          tensor_product(identity(h), k);
      kraus.push_back(u * full * u.adjoint());
    }
    offset += h * l;
  }
  out.channel = make_channel(std::move(kraus));
  return out;
}

PlantedState planted_pcq_state(const std::vector<PlantedBlockSpec>& blocks,
                               int dim_e, std::mt19937_64& rng) {
  int dc = 0;
  for (const auto& b : blocks) dc += b.dim_l * b.dim_r;

  std::vector<double> probs(blocks.size());
  {
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    double total = 0.0;
    for (double& p : probs) total += (p = unif(rng));
    for (double& p : probs) p /= total;
  }

  Matrix state = Matrix::Zero(static_cast<Eigen::Index>(dc) * dim_e,
                              static_cast<Eigen::Index>(dc) * dim_e);
  PlantedState out;
  int offset = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    Matrix core;  // on R (x) E
    if (b.dim_r > 1) {
      if (!b.core)
        throw std::invalid_argument(
            "planted state: blocks with dim_r > 1 need a TQ-Q core");
      if (b.core->dim() != b.dim_r * dim_e)
        throw std::invalid_argument("planted state: core dimension mismatch");
      core = b.core->matrix;
    } else {
      core = random_density_matrix(dim_e, rng);
    }
    Matrix tau_l = b.dim_l > 1 ? random_nondegenerate_density_matrix(b.dim_l, rng)
                               : Matrix::Ones(1, 1);
    // Embedding of L (x) R into the C block at `offset`, tensored with E.
    Matrix j = Matrix::Zero(dc, b.dim_l * b.dim_r);
    j.block(offset, 0, b.dim_l * b.dim_r, b.dim_l * b.dim_r) =
        identity(b.dim_l * b.dim_r);
    // tau_L (x) core lives on L (x) R (x) E; embed the L (x) R part into C.
    Matrix block_state = tensor_product(tau_l, core);
    Matrix je = tensor_product(j, identity(dim_e));
    state += probs[i] * (je * block_state * je.adjoint());
    out.block_dims.emplace_back(b.dim_l, b.dim_r);
    offset += b.dim_l * b.dim_r;
  }

  Matrix u = random_unitary(dc, rng);
  Matrix ue = tensor_product(u, identity(dim_e));
  out.state = QuantumState{ue * state * ue.adjoint(), TensorShape{dc, dim_e}};
  out.local_unitary = u;
  out.probabilities = probs;
  return out;
}

QuantumState example_extq_state(const std::vector<double>& lambda) {
  const int d = static_cast<int>(lambda.size());
  if (d < 2) throw std::invalid_argument("extq: need dimension >= 2");
  double sum = 0.0;
  for (double v : lambda) {
    if (v <= 0) throw std::invalid_argument("extq: lambda must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("extq: lambda must sum to 1");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(lambda[i] - lambda[j]) < 1e-12)
        throw std::invalid_argument("extq: lambda must be nondegenerate");

  Matrix diag = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = lambda[i];
  Vector plus = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Matrix plus_proj = plus * plus.adjoint();
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  Matrix rho = 0.5 * tensor_product(diag, e0) + 0.5 * tensor_product(plus_proj, e1);
  return QuantumState{rho, TensorShape{d, 2}};
}

QuantumState example_bb84_state() {
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  Matrix rho = 0.5 * tensor_product(e0, e0) + 0.5 * tensor_product(plus, e1);
  return QuantumState{rho, TensorShape{2, 2}};
}

QuantumState example_bell_state() {
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return QuantumState{phi * phi.adjoint(), TensorShape{2, 2}};
}

}  // namespace catdecomp
