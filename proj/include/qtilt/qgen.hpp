#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtilt/hmm.hpp"
#include "qtilt/matrix.hpp"
#include "qtilt/rng.hpp"

namespace qtilt {

/// Hard cap on the word-space dimension A^r of the dense representation.
inline constexpr int kMaxWordSpaceDim = 4096;

/// Pure signal states of a finite-order machine. Column i of xi holds the
/// amplitudes sqrt(P(w | state i)) over all length-r words w, listed in
/// lexicographic alphabet order; columns are unit vectors and (for a
/// usable machine) linearly independent.
struct SignalStateSet {
    int r = 0;                           // synchronization length used
    int dim = 1;                         // A^r
    std::vector<std::vector<int>> words; // row index -> word (symbol indices)
    Matrix xi;                           // dim x N amplitude matrix
};

/// Quantum generator: measurement operators, duals, and stationary state.
struct QuantumMachine {
    SignalStateSet signal;
    Matrix duals;               // N x dim, duals * xi = identity on the span
    std::vector<Matrix> kraus;  // one dim x dim operator per symbol
    Matrix rho_s;               // dim x dim stationary density matrix
    double cq = 0.0;            // von Neumann entropy of rho_s, bits
};

/// P(w | state) over all length-r words, lexicographic order.
/// Sums to 1 within 1e-12.
Distribution conditional_word_distribution(const Hmm& hmm, int state, int r);

/// Build signal states at synchronization length r.
/// Throws MarkovOrderMismatch if r fails check_markov_order,
/// LinearlyDependentStates if the Gram matrix is numerically singular
/// (smallest eigenvalue <= 1e-10), StateSpaceTooLarge past the dense cap.
SignalStateSet build_signal_states(const Hmm& hmm, int r);

/// Overlap matrix G_ij = <eta_i | eta_j>; unit diagonal, PSD.
Matrix gram_matrix(const SignalStateSet& signal);

/// Complete the construction: duals from the normal equations on the Gram
/// matrix, one Kraus operator per symbol
///     K_x = sum_ij sqrt(T^(x)_ij) |eta_j><dual_i| ,
/// stationary state rho_s = sum_i pi_i |eta_i><eta_i|, and its entropy.
/// The dual identity, channel completeness on the span, and the fixed
/// point of rho_s are verified; tolerances widen with the Gram condition
/// number, since the duals inherit its conditioning.
QuantumMachine build_quantum_machine(const Hmm& hmm, int r);

/// Kraus operators + duals only (rho_s and cq left empty).
QuantumMachine build_kraus(const Hmm& hmm, const SignalStateSet& signal);

/// rho_s = sum_i pi_i |eta_i><eta_i|, verified against the channel fixed
/// point (throws FixedPointViolation if the residual check fails).
Matrix stationary_density(const Hmm& hmm, const SignalStateSet& signal);

/// -sum lambda_k log2 lambda_k over the eigenvalue spectrum.
/// Requires symmetry within 1e-10, eigenvalues >= -1e-10 (clipped), and
/// trace 1 within 1e-10; throws NotDensityMatrix otherwise.
double von_neumann_entropy(const Matrix& rho);

/// Quantum generation memory in bits. Computed from the pi-weighted Gram
/// matrix sqrt(pi_i pi_j) G_ij, which shares the nonzero spectrum of
/// rho_s but stays well scaled; cross-checked against the full word-space
/// spectrum whenever the dimension permits (throws ConsistencyError on
/// disagreement beyond 1e-9).
double quantum_memory(const Hmm& hmm, int r);

/// One measurement step: symbol x drawn with probability
/// tr(K_x rho K_x^T), state updated to the normalized post-measurement
/// density matrix.
std::pair<int, Matrix> quantum_step(const QuantumMachine& qm, const Matrix& rho, Rng& rng);

/// Iterate quantum_step from rho_s. Deterministic given the seed.
std::vector<int> quantum_sample(const QuantumMachine& qm, int64_t n, uint64_t seed);

}  // namespace qtilt
