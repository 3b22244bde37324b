#ifndef CATDECOMP_CHANNELS_HPP
#define CATDECOMP_CHANNELS_HPP

#include <optional>

#include "catdecomp/core.hpp"

namespace catdecomp {

/// CP map in Kraus form. `trace_preserving` is relaxed for the trace
/// non-increasing CP maps appearing in channel decompositions.
struct QuantumChannel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<Matrix> kraus;
  bool trace_preserving = true;

  const Matrix& choi() const;
  Matrix apply(const Matrix& x) const;

 private:
  mutable std::optional<Matrix> choi_cache_;
};

/// Complete set of Hermitian idempotents.
struct ProjectorSet {
  std::vector<Matrix> projectors;
  bool complete = false;
};

/// Validates projector identities and completeness (sum to the identity).
ProjectorSet make_projector_set(std::vector<Matrix> projectors,
                                double tol = kDefaultTol);

/// Validated CPTP channel from a Kraus list. Throws std::invalid_argument
/// when sum K^dag K deviates from the identity by more than 1e-8.
QuantumChannel make_channel(std::vector<Matrix> kraus);

/// CP map without the trace-preservation check.
QuantumChannel make_cp_map(std::vector<Matrix> kraus);

/// Choi matrix J(N) = sum_ij N(|i><j|) (x) |i><j|, output factor first,
/// unnormalized (Tr J = dim_in for TP maps).
Matrix to_choi(const QuantumChannel& ch);

/// Kraus operators from a Choi matrix; eigenvalues <= 1e-10 discarded.
QuantumChannel channel_from_choi(const Matrix& choi, int dim_in, int dim_out,
                                 bool require_tp = true);

/// Superoperator matrix S with vec(Phi(X)) = S vec(X), column-major vec.
Matrix superoperator(const QuantumChannel& ch);

/// Apply the channel on one tensor factor of a state, identity elsewhere.
QuantumState apply_on_factor(const QuantumChannel& ch, const QuantumState& s,
                             int factor);

/// Adjoint CP map (Kraus daggered); unital when the input was TP.
QuantumChannel adjoint(const QuantumChannel& ch);

QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before);

/// Pinching channel rho -> sum Pi rho Pi for a complete projector set.
QuantumChannel pinching(const ProjectorSet& ps);

QuantumChannel identity_channel(int d);

/// X -> Tr[X] sigma.
QuantumChannel replacer_channel(const Matrix& sigma);

/// Unitary conjugation channel.
QuantumChannel unitary_channel(const Matrix& u);

/// Frobenius distance between Choi matrices (dimension mismatch -> inf).
double choi_distance(const QuantumChannel& a, const QuantumChannel& b);

/// True when the Choi matrix has rank 1 within tolerance, i.e. the channel
/// is a unitary conjugation.
bool is_unitary_channel(const QuantumChannel& ch, double tol = 1e-7);

}  // namespace catdecomp

#endif  // CATDECOMP_CHANNELS_HPP
