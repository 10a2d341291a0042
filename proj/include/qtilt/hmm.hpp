#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtilt/matrix.hpp"
#include "qtilt/rng.hpp"

namespace qtilt {

/// Ordered list of distinct symbol labels. The order fixes the index
/// convention for every matrix and word-space tensor downstream.
struct Alphabet {
    std::vector<std::string> symbols;

    int size() const { return static_cast<int>(symbols.size()); }
    /// Index of a label, or -1 if absent.
    int index_of(const std::string& s) const;
};

/// Finite hidden-Markov generator. t[x](i, j) is the joint probability of
/// emitting symbol x while moving from state i to state j; the symbol sum
/// T = sum_x t[x] is row stochastic for a valid machine.
struct Hmm {
    std::string name;
    std::vector<std::string> states;
    Alphabet alphabet;
    std::vector<Matrix> t;  // one N x N matrix per symbol, alphabet order

    int num_states() const { return static_cast<int>(states.size()); }
    int num_symbols() const { return alphabet.size(); }

    /// T = sum_x T^(x)
    Matrix transition_matrix() const;
};

/// Probability vector over an indexed support.
struct Distribution {
    std::vector<double> p;

    int size() const { return static_cast<int>(p.size()); }
    double operator[](int i) const { return p[i]; }
};

/// One failed invariant, with enough context to locate it.
struct Violation {
    std::string invariant;  // "shape", "entry-range", "row-stochastic", "irreducible", "labels"
    std::string detail;
    double magnitude = 0.0;
};

/// Diagnostic check of all Hmm invariants. Empty result means valid.
std::vector<Violation> validate(const Hmm& hmm);

/// Throws ValidationError listing all violations if the machine is invalid.
void require_valid(const Hmm& hmm);

/// Stationary distribution pi with pi T = pi, computed by state-folding
/// elimination (GTH). The elimination uses no subtractions, so every
/// component keeps full relative accuracy even when the chain is nearly
/// absorbing. Verified to residual |pi T - pi|_inf < 1e-12.
Distribution stationary_distribution(const Hmm& hmm);

/// -sum p log2 p in bits, with 0 log 0 = 0. The largest entry's log is
/// evaluated through log1p of the complementary mass so entropies of
/// nearly-deterministic distributions keep relative accuracy.
double shannon_entropy(const Distribution& d);

/// Memory to generate the process: entropy of the stationary state mix.
double statistical_complexity(const Hmm& hmm);

/// true iff every (state, symbol) pair has at most one successor.
bool check_unifilar(const Hmm& hmm);

/// Shannon entropy rate in bits/symbol via the per-state closed form
/// sum_i pi_i H(symbol distribution out of i). Requires unifilarity;
/// throws NotUnifilar otherwise.
double entropy_rate(const Hmm& hmm);

/// true iff every admissible word of length r synchronizes: following the
/// word from every state in parallel, all surviving branches agree on the
/// end state. r = 0 holds only for single-state machines.
bool check_markov_order(const Hmm& hmm, int r);

/// Smallest r <= r_max passing check_markov_order, if any.
std::optional<int> find_markov_order(const Hmm& hmm, int r_max);

/// log2 P(w) under the stationary word measure, computed with per-step
/// renormalization so arbitrarily long words never underflow.
/// Returns -infinity for forbidden words.
double log2_word_probability(const Hmm& hmm, const std::vector<std::string>& word);

/// P(w) = pi T^(w1) ... T^(wn) 1. Exactly 0 for forbidden words; may
/// underflow to 0 for very long admissible words (use the log form then).
double word_probability(const Hmm& hmm, const std::vector<std::string>& word);

/// -log2 P(w) / |w|, the word's probability decay rate in bits/symbol.
/// Throws ForbiddenWord when P(w) = 0.
double empirical_decay_rate(const Hmm& hmm, const std::vector<std::string>& word);

/// Length-n realization: start state drawn from pi, then joint
/// (symbol, successor) draws per step. Deterministic given the seed.
/// Returns symbol indices into hmm.alphabet.
std::vector<int> sample_path(const Hmm& hmm, int64_t n, uint64_t seed);

/// Symbol indices -> labels.
std::vector<std::string> to_labels(const Hmm& hmm, const std::vector<int>& symbol_indices);

}  // namespace qtilt
