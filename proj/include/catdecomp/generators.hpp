#ifndef CATDECOMP_GENERATORS_HPP
#define CATDECOMP_GENERATORS_HPP

#include "catdecomp/fixed_points.hpp"
#include "catdecomp/koashi_imoto.hpp"

namespace catdecomp {

/// Deterministic RNG stream for a (master seed, object index) pair.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0);

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);

/// Haar-random unitary via QR of a complex Gaussian with phase-fixed R
/// diagonal.
Matrix random_unitary(int d, std::mt19937_64& rng);

/// Haar-random isometry with d_to >= d_from.
Matrix random_isometry(int d_from, int d_to, std::mt19937_64& rng);

/// Random full-rank density matrix (Wishart normalized).
Matrix random_density_matrix(int d, std::mt19937_64& rng);

/// Random full-rank density matrix with pairwise-distinct eigenvalues.
Matrix random_nondegenerate_density_matrix(int d, std::mt19937_64& rng);

/// Random CPTP channel with the given Kraus rank, from the blocks of a
/// Haar-random isometry.
QuantumChannel random_channel(int d_in, int d_out, int kraus_rank,
                              std::mt19937_64& rng);

/// Planted fixed-point structure: per block (dim_h, dim_l), the channel
/// acts as id_H (x) replacer-to-rho_L, conjugated by a recorded random
/// unitary.
struct PlantedChannel {
  QuantumChannel channel;
  Matrix conjugating_unitary;
  std::vector<std::pair<int, int>> block_dims;  // (dim_h, dim_l)
  std::vector<Matrix> block_states;             // rho_L per block
};
PlantedChannel planted_fixed_point_channel(
    const std::vector<std::pair<int, int>>& blocks, std::mt19937_64& rng);

/// Planted PC-Q (or TQ-Q) state on C (x) E. Each block contributes
/// p_i * tau_L (x) core, where the core is a state on R (x) E that is TQ-Q
/// unless dim_r == 1.
struct PlantedBlockSpec {
  int dim_l = 1;
  int dim_r = 1;
  /// Core state on R (x) E; required when dim_r > 1 (use an extq-type
  /// state). For dim_r == 1 a product core tau_E is drawn at random.
  std::optional<QuantumState> core;
};
struct PlantedState {
  QuantumState state;           // on C (x) E, dims {dim_c, dim_e}
  Matrix local_unitary;         // applied on C
  std::vector<double> probabilities;
  std::vector<std::pair<int, int>> block_dims;  // (dim_l, dim_r)
};
PlantedState planted_pcq_state(const std::vector<PlantedBlockSpec>& blocks,
                               int dim_e, std::mt19937_64& rng);

/// The separable-but-totally-quantum example family:
/// rho_AB = 1/2 (sum_i lambda_i |i><i|) (x) |0><0| + 1/2 |+><+| (x) |1><1|.
/// Requires strictly positive, pairwise-distinct lambda.
QuantumState example_extq_state(const std::vector<double>& lambda);

/// The BB84 memory state, the d = 2, lambda = (1, 0) -> |0><0| variant of
/// the extq family with the first term a basis projector.
QuantumState example_bb84_state();

/// Maximally entangled two-qubit state.
QuantumState example_bell_state();

}  // namespace catdecomp

#endif  // CATDECOMP_GENERATORS_HPP
