#pragma once

#include "qtilt/hmm.hpp"

namespace qtilt {

/// Two alternating biased coins: state A emits "0" with probability p and
/// stays, or "1" and moves to B; state B emits "0" with probability 1-q
/// and moves to A, or "1" and stays.
Hmm make_perturbed_coins(double p, double q);

/// Two-state deterministic alternator: A -(0)-> B, B -(1)-> A.
Hmm make_period2();

/// Six-state generator over {0,1,2} with two three-state loops (one
/// emitting runs of 1s, one runs of 0s) bridged by 2-labeled edges.
/// Runs of a repeated symbol never pin down the loop phase, so no finite
/// history length synchronizes the state.
Hmm make_fig1_six_state();

/// Single-state machine emitting symbol x with probability probs[x].
Hmm make_iid(const std::vector<std::string>& symbols, const std::vector<double>& probs);

}  // namespace qtilt
