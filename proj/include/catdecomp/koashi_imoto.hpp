#ifndef CATDECOMP_KOASHI_IMOTO_HPP
#define CATDECOMP_KOASHI_IMOTO_HPP

#include "catdecomp/algebra.hpp"
#include "catdecomp/channels.hpp"

namespace catdecomp {

/// Conditional states on A obtained by steering a bipartite state with a
/// positive rank-1 spanning set on B.
struct SteeredFamily {
  std::vector<Matrix> states;    // unit trace, PSD
  std::vector<double> weights;   // Tr of the unnormalized steered operators
  int dim_a = 0;
};

/// One block of a Koashi-Imoto decomposition: projector onto
/// H_iL (x) H_iR, the common state on the L factor, and the k-dependent
/// conditional states on the R factor.
struct KIBlock {
  Matrix projector;              // Pi_i on the ambient space
  Matrix isometry;               // C^{L*R} (L major) -> ambient space
  int dim_l = 0;
  int dim_r = 0;
  Matrix common_state;           // omega_i^L
  std::vector<double> probabilities;   // q_{i|k} per family member
  std::vector<Matrix> conditional_states;  // rho_{i^R|k} per family member
  bool irreducible = true;
};

struct KIDecomposition {
  std::vector<KIBlock> blocks;
  int ambient_dim = 0;

  /// Exactly one block with dim_l = 1 covering the full space: the family
  /// admits no nontrivial fixing channel.
  bool trivial() const {
    return blocks.size() == 1 && blocks.front().dim_l == 1 &&
           blocks.front().dim_r == ambient_dim;
  }
};

/// Steered family of rho across the bipartition after `cut_at` factors.
SteeredFamily steered_family(const QuantumState& rho, int cut_at);

/// Koashi-Imoto decomposition of a finite family of states.
KIDecomposition ki_decompose(const std::vector<Matrix>& family,
                             std::mt19937_64& rng, double tol = kDefaultTol);

enum class StateVerdict { TQQ, PCQ };

struct StateClassification {
  StateVerdict verdict;
  KIDecomposition decomposition;
  /// Verified non-identity channel on A fixing the state; present exactly
  /// for PC-Q verdicts.
  std::optional<QuantumChannel> witness;
  double witness_residual = 0.0;
};

/// Classifies rho as TQ-Q or PC-Q on the cut after `cut_at` factors.
StateClassification classify_bipartite(const QuantumState& rho, int cut_at,
                                       std::mt19937_64& rng,
                                       double tol = kDefaultTol);

/// Non-identity channel fixing every member of the decomposed family:
/// block pinching when there are multiple blocks, replacer-on-L (x) id_R
/// inside a block with dim_l > 1. Throws on a trivial decomposition.
QuantumChannel fixing_channel_witness(const KIDecomposition& dec);

/// Nontrivial projective measurement (pinching) fixing the family; exists
/// whenever the decomposition is nontrivial.
ProjectorSet fixing_pinching_witness(const KIDecomposition& dec);

}  // namespace catdecomp

#endif  // CATDECOMP_KOASHI_IMOTO_HPP
