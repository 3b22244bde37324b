#ifndef CATDECOMP_FIXED_POINTS_HPP
#define CATDECOMP_FIXED_POINTS_HPP

#include "catdecomp/algebra.hpp"
#include "catdecomp/channels.hpp"

namespace catdecomp {

/// Structure of the fixed-point set of a CPTP map: per block of the
/// adjoint's fixed-point algebra, the channel acts as id_H (x) Phi_L with a
/// unique fixed state on L, so the fixed points are B(H) (x) rho_P.
struct FixedPointStructure {
  WedderburnDecomposition wedderburn;  // of the adjoint's fixed-point algebra
  std::vector<Matrix> block_states;    // rho_P, one density matrix per block
  OperatorBasis fixed_space_basis;     // basis of the channel's fixed points
};

/// Orthonormal basis of {X : Phi(X) = X} via the null space of
/// (superoperator - identity).
OperatorBasis fixed_point_space(const QuantumChannel& ch,
                                double tol = kDefaultTol);

/// Fixed-point algebra of the adjoint map, computed as the commutant of the
/// algebra generated by {K_i, K_i^dag}.
OperatorAlgebra adjoint_fixed_point_algebra(const QuantumChannel& ch,
                                            double tol = kDefaultTol);

FixedPointStructure structure_decompose(const QuantumChannel& ch,
                                        std::mt19937_64& rng,
                                        double tol = kDefaultTol);

enum class ChannelVerdict { TQ, PC };

struct ChannelClassification {
  ChannelVerdict verdict;
  /// Pinching witness with P o N = N; present exactly for PC verdicts.
  std::optional<ProjectorSet> witness;
  double witness_residual = 0.0;
  bool tie_warning = false;  // residual landed between tol and 2*tol
};

/// Classifies the channel output as TQ or PC. PC verdicts ship a verified
/// nontrivial pinching witness.
ChannelClassification classify_channel_output(const QuantumChannel& ch,
                                              std::mt19937_64& rng,
                                              double tol = kDefaultTol);

}  // namespace catdecomp

#endif  // CATDECOMP_FIXED_POINTS_HPP
