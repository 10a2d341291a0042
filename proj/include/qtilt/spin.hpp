#pragma once

#include <vector>

#include "qtilt/hmm.hpp"
#include "qtilt/matrix.hpp"

namespace qtilt {

/// One-dimensional spin chain with nearest (j1) and next-nearest (j2)
/// couplings and external field h, at temperature t (k_B absorbed).
struct SpinModel {
    double j1 = 1.0;
    double j2 = 0.25;
    double h = 0.0;
    double t = 1.0;
};

inline constexpr const char* kSpinDown = "↓";  // down arrow
inline constexpr const char* kSpinUp = "↑";    // up arrow

/// Per-symbol transfer-weight matrices on pair states (s_prev, s_cur).
/// Appending spin s_next contributes Boltzmann weight
///     exp((j1 s_cur s_next + j2 s_prev s_next + h s_next) / t)
/// on the edge (s_prev, s_cur) -> (s_cur, s_next); inconsistent pair
/// chainings carry weight zero. Symbol order: down, up.
std::vector<Matrix> transfer_matrix_parts(const SpinModel& model);

/// Exact 4-state generator of the equilibrium spin-configuration process,
/// obtained by stochasticizing the transfer weights. Unifilar, with
/// length-2 histories determining the state.
Hmm ising_nnn_process(const SpinModel& model);

/// Single-state generator of the noninteracting chain in field h:
/// emits up with probability (1 + tanh(h/t)) / 2.
Hmm iid_field_process(double h, double t);

/// Free energy per site, -t ln(lambda) with lambda the Perron eigenvalue
/// of the transfer matrix.
double free_energy_density(const SpinModel& model);

/// Map a physical energy density E to the probability decay rate of its
/// configuration class: U = log2(e) (E - F(T)) / t.
double decay_rate_from_energy(const SpinModel& model, double e);

/// Algebraic inverse of decay_rate_from_energy.
double energy_from_decay_rate(const SpinModel& model, double u);

}  // namespace qtilt
