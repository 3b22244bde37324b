#ifndef CATDECOMP_CATALYSIS_HPP
#define CATDECOMP_CATALYSIS_HPP

#include "catdecomp/koashi_imoto.hpp"

namespace catdecomp {

/// A catalysis scenario: system state, interaction on S(x)C, and a catalyst
/// on C, possibly correlated with an external system E.
struct CatalysisInstance {
  QuantumState system;        // rho_S
  QuantumChannel interaction; // Lambda on S (x) C
  QuantumState catalyst;      // tau on C or C (x) E
  int catalyst_cut = 0;       // factors of `catalyst` belonging to C; 0 = all
  double tol = 1e-9;

  int dim_s() const { return system.dim(); }
  int dim_c() const;
  int dim_e() const { return catalyst.dim() / dim_c(); }
  bool has_environment() const { return dim_e() > 1; }
};

struct CatalysisReport {
  bool catalytic = false;
  double residual = 0.0;   // || Tr_S[(Lambda (x) id_E)(rho (x) tau)] - tau ||_1
  bool trivial = false;    // induced channel Gamma is the identity on C
  double gamma_identity_distance = 0.0;
};

struct EnsembleComponent {
  double probability = 0.0;
  Matrix local_catalyst;     // tau_{C_i^L}
  QuantumChannel effective;  // E_i on S
};

struct EnsembleReduction {
  std::vector<EnsembleComponent> components;
  QuantumChannel reconstructed;   // sum_i p_i E_i
  double reconstruction_residual = 0.0;
  double factorization_residual = 0.0;
};

/// Channel on C induced by fixing rho_S and Lambda:
/// Gamma(eta) = Tr_S[Lambda(rho_S (x) eta)].
QuantumChannel induced_catalyst_channel(const CatalysisInstance& inst);

/// The transformed system state sigma_S = Tr_C..E[Lambda (x) id_E (rho (x) tau)].
Matrix transformed_system_state(const CatalysisInstance& inst);

CatalysisReport check_catalytic(const CatalysisInstance& inst);

/// Reduction of a verified correlated catalysis to an ensemble of local
/// catalysts, given the Koashi-Imoto decomposition of tau on the C|E cut.
EnsembleReduction ensemble_reduction(const CatalysisInstance& inst,
                                     const KIDecomposition& dec);

/// I(A:B) in bits across the bipartition after `cut_at` factors.
double mutual_information(const QuantumState& rho, int cut_at);

struct MICatalysisReport {
  double delta_mi = 0.0;    // I_rho - I_sigma, nonnegative up to slack
  bool mi_preserved = false;
  bool unitary = false;
};

/// Checks the preserved-mutual-information implication on a TQ-Q state:
/// a local channel keeping I(A:B) must be a unitary conjugation.
/// `classification` must be the verdict for rho on the same cut.
MICatalysisReport mi_catalysis_test(const QuantumState& rho, int cut_at,
                                    const StateClassification& classification,
                                    const QuantumChannel& ch);

struct ContagionReport {
  bool marginal_full_rank = false;
  std::optional<StateVerdict> verdict;  // on the K|AB cut when applicable
  QuantumState extended;                // tau_KAB with dims {dK, dA, dB}
};

/// Extends a TQ-Q state by an isometry V : A -> K (x) A and classifies the
/// K|AB cut when the K marginal is full-rank.
ContagionReport contagion_extend(const QuantumState& rho, int cut_at,
                                 const Matrix& isometry, int dim_k,
                                 std::mt19937_64& rng, double tol = 1e-9);

}  // namespace catdecomp

#endif  // CATDECOMP_CATALYSIS_HPP
