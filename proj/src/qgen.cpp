#include "qtilt/qgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtilt/errors.hpp"

namespace qtilt {

namespace {

constexpr double kGramIndependenceTol = 1e-10;  // below this the states are dependent
constexpr double kUnitNormTol = 1e-12;
constexpr int kFullSpectrumCap = 64;  // cross-check rho_s spectrum up to this dim
const double kLog2E = 1.4426950408889634;

/// Entropy of an eigenvalue spectrum that sums to ~1, with the dominant
/// term evaluated through the complementary mass (see shannon_entropy).
double spectrum_entropy_bits(std::vector<double> ev) {
    for (double& v : ev) v = std::max(v, 0.0);
    size_t kmax = 0;
    for (size_t i = 1; i < ev.size(); ++i)
        if (ev[i] > ev[kmax]) kmax = i;
    double h = 0.0, rest = 0.0;
    for (size_t i = 0; i < ev.size(); ++i) {
        if (i == kmax) continue;
        rest += ev[i];
        if (ev[i] > 0.0) h -= ev[i] * std::log2(ev[i]);
    }
    if (ev[kmax] > 0.0) {
        if (ev[kmax] > 0.9)
            h -= ev[kmax] * std::log1p(-rest) * kLog2E;
        else
            h -= ev[kmax] * std::log2(ev[kmax]);
    }
    return h;
}

/// Gram eigenvalues, smallest first; gates numerically dependent columns.
std::vector<double> checked_gram_eigenvalues(const Matrix& gram) {
    std::vector<double> ev = jacobi_eigenvalues(gram);
    if (ev.front() <= kGramIndependenceTol)
        throw LinearlyDependentStates(
            "signal states are numerically dependent (Gram min eigenvalue " +
            std::to_string(ev.front()) + ")");
    return ev;
}

/// Residual tolerances for dual-based identities degrade with the Gram
/// conditioning; below kappa ~ 1e6 this stays at the nominal bound.
double conditioned_tol(double nominal, double kappa, int dim) {
    const double eps = std::numeric_limits<double>::epsilon();
    return std::max(nominal, 32.0 * dim * kappa * eps);
}

}  // namespace

Distribution conditional_word_distribution(const Hmm& hmm, int state, int r) {
    require_valid(hmm);
    if (state < 0 || state >= hmm.num_states())
        throw ValidationError("conditional_word_distribution: state out of range");
    if (r < 1) throw ValidationError("conditional_word_distribution: r must be >= 1");

    const int a = hmm.num_symbols();
    double dim = 1;
    for (int k = 0; k < r; ++k) dim *= a;
    if (dim > kMaxWordSpaceDim)
        throw StateSpaceTooLarge("conditional_word_distribution: A^r exceeds cap");

    Distribution out;
    out.p.reserve(static_cast<size_t>(dim));
    std::vector<double> row(hmm.num_states(), 0.0);
    row[state] = 1.0;

    // depth-first over symbols in alphabet order = lexicographic word order
    auto rec = [&](auto&& self, const std::vector<double>& v, int depth) -> void {
        if (depth == r) {
            double mass = 0.0;
            for (double e : v) mass += e;
            out.p.push_back(mass);
            return;
        }
        for (int x = 0; x < a; ++x) self(self, vec_times_matrix(v, hmm.t[x]), depth + 1);
    };
    rec(rec, row, 0);
    return out;
}

SignalStateSet build_signal_states(const Hmm& hmm, int r) {
    require_valid(hmm);
    if (r < 0) throw ValidationError("build_signal_states: r must be nonnegative");
    if (!check_unifilar(hmm))
        throw NotUnifilar("build_signal_states: machine must be unifilar");
    if (!check_markov_order(hmm, r))
        throw MarkovOrderMismatch("build_signal_states: length-" + std::to_string(r) +
                                  " words do not synchronize this machine");

    const int n = hmm.num_states();
    const int a = hmm.num_symbols();
    double dimd = 1;
    for (int k = 0; k < r; ++k) {
        dimd *= a;
        if (dimd > kMaxWordSpaceDim)
            throw StateSpaceTooLarge("build_signal_states: A^r = " + std::to_string(dimd) +
                                     " exceeds dense cap " + std::to_string(kMaxWordSpaceDim));
    }
    const int dim = static_cast<int>(dimd);

    SignalStateSet set;
    set.r = r;
    set.dim = dim;
    set.words.assign(dim, {});
    if (r > 0) {
        for (int w = 0; w < dim; ++w) {
            std::vector<int> word(r);
            int rem = w;
            for (int k = r - 1; k >= 0; --k) {
                word[k] = rem % a;
                rem /= a;
            }
            set.words[w] = std::move(word);
        }
    }

    set.xi = Matrix(dim, n);
    for (int i = 0; i < n; ++i) {
        if (r == 0) {
            set.xi(0, i) = 1.0;
            continue;
        }
        const Distribution cond = conditional_word_distribution(hmm, i, r);
        double norm2 = 0.0;
        for (int w = 0; w < dim; ++w) {
            set.xi(w, i) = std::sqrt(cond[w]);
            norm2 += cond[w];
        }
        if (std::abs(norm2 - 1.0) > kUnitNormTol)
            throw ConsistencyError("build_signal_states: column norm deviates from 1 by " +
                                   std::to_string(std::abs(norm2 - 1.0)));
    }

    checked_gram_eigenvalues(gram_matrix(set));
    return set;
}

Matrix gram_matrix(const SignalStateSet& signal) {
    const Matrix& xi = signal.xi;
    const int n = xi.cols();
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int w = 0; w < xi.rows(); ++w) s += xi(w, i) * xi(w, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return g;
}

QuantumMachine build_kraus(const Hmm& hmm, const SignalStateSet& signal) {
    const int n = hmm.num_states();
    const int dim = signal.dim;
    if (signal.xi.cols() != n)
        throw ValidationError("build_kraus: signal states do not match the machine");

    const Matrix gram = gram_matrix(signal);
    const std::vector<double> gram_ev = checked_gram_eigenvalues(gram);
    const double kappa = gram_ev.back() / gram_ev.front();

    QuantumMachine qm;
    qm.signal = signal;
    // duals from the normal equations G y = Xi^T; rows satisfy
    // <dual_i | eta_j> = delta_ij on the span
    qm.duals = cholesky_solve(gram, signal.xi.transposed());

    const double dual_tol = conditioned_tol(1e-10, kappa, dim);
    const Matrix dual_identity = multiply(qm.duals, signal.xi);
    if (max_abs_diff(dual_identity, Matrix::identity(n)) > dual_tol)
        throw ConsistencyError("build_kraus: dual identity residual above tolerance");

    qm.kraus.reserve(hmm.t.size());
    for (const Matrix& tx : hmm.t) {
        Matrix sq(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sq(j, i) = std::sqrt(tx(i, j));
        qm.kraus.push_back(multiply(signal.xi, multiply(sq, qm.duals)));
    }

    // completeness on the span: sum_x K_x^T K_x fixes every signal state
    Matrix acc(dim, dim);
    for (const Matrix& k : qm.kraus) acc = add(acc, multiply(k.transposed(), k));
    const double comp_tol = conditioned_tol(1e-9, kappa, dim);
    if (max_abs_diff(multiply(acc, signal.xi), signal.xi) > comp_tol)
        throw ConsistencyError("build_kraus: channel completeness residual above tolerance");

    return qm;
}

Matrix stationary_density(const Hmm& hmm, const SignalStateSet& signal) {
    const Distribution pi = stationary_distribution(hmm);
    const int n = hmm.num_states();
    const int dim = signal.dim;

    Matrix rho(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int w = 0; w < dim; ++w) {
            const double lhs = pi[i] * signal.xi(w, i);
            if (lhs == 0.0) continue;
            for (int v = 0; v < dim; ++v) rho(w, v) += lhs * signal.xi(v, i);
        }

    // construction doubles as a test: rho_s must be the channel fixed point
    QuantumMachine qm = build_kraus(hmm, signal);
    Matrix mapped(dim, dim);
    for (const Matrix& k : qm.kraus)
        mapped = add(mapped, multiply(k, multiply(rho, k.transposed())));
    const std::vector<double> gram_ev = jacobi_eigenvalues(gram_matrix(signal));
    const double kappa = gram_ev.back() / std::max(gram_ev.front(), 1e-300);
    const double tol = conditioned_tol(1e-10, kappa, dim);
    if (max_abs_diff(mapped, rho) > tol)
        throw FixedPointViolation("stationary_density: channel fixed-point residual " +
                                  std::to_string(max_abs_diff(mapped, rho)) +
                                  " above tolerance");
    return rho;
}

double von_neumann_entropy(const Matrix& rho) {
    if (rho.rows() != rho.cols()) throw NotDensityMatrix("von_neumann_entropy: not square");
    if (max_abs_diff(rho, rho.transposed()) > 1e-10)
        throw NotDensityMatrix("von_neumann_entropy: not symmetric within 1e-10");
    if (std::abs(trace(rho) - 1.0) > 1e-10)
        throw NotDensityMatrix("von_neumann_entropy: trace deviates from 1 beyond 1e-10");
    std::vector<double> ev = jacobi_eigenvalues(rho);
    if (ev.front() < -1e-10)
        throw NotDensityMatrix("von_neumann_entropy: eigenvalue below -1e-10");
    return spectrum_entropy_bits(std::move(ev));
}

double quantum_memory(const Hmm& hmm, int r) {
    const SignalStateSet signal = build_signal_states(hmm, r);
    const Matrix gram = gram_matrix(signal);
    const Distribution pi = stationary_distribution(hmm);
    const int n = hmm.num_states();

    // pi-weighted Gram matrix: same nonzero spectrum as rho_s, but unit-
    // scaled diagonal blocks keep tiny eigenvalues relatively accurate.
    Matrix weighted(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            weighted(i, j) = std::sqrt(pi[i] * pi[j]) * gram(i, j);
    std::vector<double> ev = jacobi_eigenvalues(weighted);

    if (signal.dim <= kFullSpectrumCap) {
        // independent route through the full word-space density matrix
        Matrix rho(signal.dim, signal.dim);
        for (int i = 0; i < n; ++i)
            for (int w = 0; w < signal.dim; ++w) {
                const double lhs = pi[i] * signal.xi(w, i);
                if (lhs == 0.0) continue;
                for (int v = 0; v < signal.dim; ++v) rho(w, v) += lhs * signal.xi(v, i);
            }
        std::vector<double> full = jacobi_eigenvalues(rho);
        std::sort(full.rbegin(), full.rend());
        std::vector<double> top(ev.rbegin(), ev.rend());
        for (int k = 0; k < n; ++k)
            if (std::abs(full[k] - top[k]) > 1e-9)
                throw ConsistencyError(
                    "quantum_memory: Gram and word-space spectra disagree beyond 1e-9");
        for (int k = n; k < signal.dim; ++k)
            if (std::abs(full[k]) > 1e-9)
                throw ConsistencyError(
                    "quantum_memory: word-space spectrum has extra mass beyond 1e-9");
    }

    return spectrum_entropy_bits(std::move(ev));
}

QuantumMachine build_quantum_machine(const Hmm& hmm, int r) {
    const SignalStateSet signal = build_signal_states(hmm, r);
    QuantumMachine qm = build_kraus(hmm, signal);
    qm.rho_s = stationary_density(hmm, signal);
    qm.cq = quantum_memory(hmm, r);
    return qm;
}

std::pair<int, Matrix> quantum_step(const QuantumMachine& qm, const Matrix& rho, Rng& rng) {
    const int a = static_cast<int>(qm.kraus.size());
    std::vector<Matrix> updated;
    updated.reserve(a);
    std::vector<double> cum(a);
    double acc = 0.0;
    for (int x = 0; x < a; ++x) {
        Matrix kxr = multiply(qm.kraus[x], multiply(rho, qm.kraus[x].transposed()));
        acc += trace(kxr);
        cum[x] = acc;
        updated.push_back(std::move(kxr));
    }
    if (std::abs(acc - 1.0) > 1e-9)
        throw ConsistencyError("quantum_step: outcome probabilities sum to " +
                               std::to_string(acc));

    const int x = rng.pick(cum);
    Matrix next = updated[x];
    const double p = trace(next);
    for (double& v : next.data()) v /= p;
    // keep the state exactly symmetric under repeated updates
    next = scale(add(next, next.transposed()), 0.5);
    return {x, std::move(next)};
}

std::vector<int> quantum_sample(const QuantumMachine& qm, int64_t n, uint64_t seed) {
    if (n < 0) throw ValidationError("quantum_sample: negative length");
    Rng rng(seed);
    Matrix rho = qm.rho_s;
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n));
    for (int64_t k = 0; k < n; ++k) {
        auto [x, next] = quantum_step(qm, rho, rng);
        out.push_back(x);
        rho = std::move(next);
    }
    return out;
}

}  // namespace qtilt
