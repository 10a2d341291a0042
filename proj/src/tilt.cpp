#include "qtilt/tilt.hpp"

#include <cmath>
#include <sstream>

#include "qtilt/errors.hpp"

namespace qtilt {

namespace {

constexpr double kResidualFactor = 1e-12;  // absolute residual target vs max entry
constexpr double kRelResidualTol = 1e-10;  // per-component |Mr - lr|_i / (l r_i)
constexpr double kShiftFactor = 1e-3;      // diagonal shift vs current eigenvalue estimate
constexpr int64_t kMaxIterations = 1000000;
constexpr double kRowCorrectionTol = 1e-9;

// Powers stay inside the normal double range (with headroom for the
// symbol sum) so relative accuracy and the zero pattern both survive.
constexpr double kMaxLog2 = 1000.0;
constexpr double kMinLog2 = -1000.0;

}  // namespace

PerronPair perron(const Matrix& m) {
    const int n = m.rows();
    if (n != m.cols()) throw ValidationError("perron: matrix not square");
    for (double v : m.data())
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("perron: entries must be finite and nonnegative");

    PerronPair out;
    if (n == 1) {
        if (m(0, 0) <= 0.0) throw ValidationError("perron: 1x1 matrix must be positive");
        out.lambda = m(0, 0);
        out.r = {1.0};
        return out;
    }

    const double scale = max_abs(m);
    if (scale == 0.0) throw ValidationError("perron: zero matrix");
    const double residual_target = kResidualFactor * scale;

    std::vector<double> x(n, 1.0 / n);
    double lambda = 0.0;
    bool converged = false;
    for (int64_t it = 0; it < kMaxIterations; ++it) {
        const std::vector<double> mx = matrix_times_vec(m, x);

        // Rayleigh quotient on the unshifted matrix
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += x[i] * mx[i];
            den += x[i] * x[i];
        }
        lambda = num / den;

        // Stop when the absolute residual meets the eigenpair contract and
        // the per-component relative residual is small enough that row
        // corrections downstream stay well below 1e-9.
        double abs_res = 0.0, rel_res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double res = std::abs(mx[i] - lambda * x[i]);
            abs_res = std::max(abs_res, res);
            const double denom = lambda * x[i];
            if (!(denom > 0.0)) {
                rel_res = std::numeric_limits<double>::infinity();
                break;
            }
            rel_res = std::max(rel_res, res / denom);
        }
        if (abs_res <= residual_target && rel_res <= kRelResidualTol) {
            converged = true;
            break;
        }

        // Next iterate of (m + shift I); the shift rides the eigenvalue
        // estimate so it separates near-periodic spectra without drowning
        // matrices whose dominant eigenvalue sits far below the largest
        // entry. Any positive shift leaves the eigenvectors unchanged.
        const double shift = kShiftFactor * (lambda > 0.0 ? lambda : scale);
        std::vector<double> y(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] = mx[i] + shift * x[i];
            total += y[i];
        }
        if (!(total > 0.0) || !std::isfinite(total))
            throw NonConvergence("perron: iterate left the representable range");
        for (int i = 0; i < n; ++i) y[i] /= total;
        x.swap(y);
    }
    if (!converged)
        throw NonConvergence("perron: residual target not reached within iteration budget");
    for (double v : x)
        if (!(v > 0.0))
            throw NonConvergence("perron: eigenvector not strictly positive");

    out.lambda = lambda;
    out.r = std::move(x);
    return out;
}

StochasticizeResult stochasticize(const std::vector<Matrix>& parts,
                                  std::vector<std::string> states, Alphabet alphabet,
                                  std::string name) {
    if (parts.empty()) throw ValidationError("stochasticize: no symbol matrices");
    const int n = parts[0].rows();
    Matrix sum(n, n);
    for (const Matrix& p : parts) {
        if (p.rows() != n || p.cols() != n)
            throw ValidationError("stochasticize: inconsistent shapes");
        sum = add(sum, p);
    }

    const PerronPair pp = perron(sum);

    Hmm hmm;
    hmm.name = std::move(name);
    hmm.states = std::move(states);
    hmm.alphabet = std::move(alphabet);
    hmm.t.assign(parts.size(), Matrix(n, n));
    for (size_t x = 0; x < parts.size(); ++x)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double v = parts[x](i, j);
                if (v != 0.0) hmm.t[x](i, j) = v * pp.r[j] / (pp.lambda * pp.r[i]);
            }

    // close the algebraic identity exactly: rows must sum to 1
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (size_t x = 0; x < parts.size(); ++x)
            for (int j = 0; j < n; ++j) s += hmm.t[x](i, j);
        if (std::abs(s - 1.0) > kRowCorrectionTol)
            throw NonConvergence("stochasticize: row correction above 1e-9 (row " +
                                 std::to_string(i) + " sums to " + std::to_string(s) + ")");
        for (size_t x = 0; x < parts.size(); ++x)
            for (int j = 0; j < n; ++j) hmm.t[x](i, j) /= s;
    }

    return {std::move(hmm), pp};
}

TiltedHmm tilt_hmm(const Hmm& hmm, double beta) {
    if (beta == 0.0) throw BetaZero("tilt_hmm: beta must be nonzero");
    if (!(std::abs(beta) <= kMaxAbsBeta))
        throw Overflow("tilt_hmm: |beta| above supported range 500");
    require_valid(hmm);

    const int n = hmm.num_states();
    std::vector<Matrix> powered(hmm.t.size(), Matrix(n, n));
    for (size_t x = 0; x < hmm.t.size(); ++x) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double v = hmm.t[x](i, j);
                if (v == 0.0) continue;  // forbidden transitions stay forbidden
                if (beta == 1.0) {
                    powered[x](i, j) = v;
                    continue;
                }
                const double l = beta * std::log2(v);
                if (l > kMaxLog2 || l < kMinLog2) {
                    std::ostringstream os;
                    os << "tilt_hmm: (t[" << hmm.alphabet.symbols[x] << "](" << i << "," << j
                       << "))^beta leaves double range at beta = " << beta;
                    throw Overflow(os.str());
                }
                powered[x](i, j) = std::exp2(l);
            }
        }
    }

    std::ostringstream name;
    name << hmm.name << "_beta" << beta;
    StochasticizeResult sr =
        stochasticize(powered, hmm.states, hmm.alphabet, name.str());

    TiltedHmm out;
    out.hmm = std::move(sr.hmm);
    out.beta = beta;
    out.lambda = sr.perron.lambda;
    out.hmu_beta = entropy_rate(out.hmm);
    out.u = (out.hmu_beta - std::log2(out.lambda)) / beta;
    return out;
}

double energy_density(const TiltedHmm& tilted) {
    return (tilted.hmu_beta - std::log2(tilted.lambda)) / tilted.beta;
}

}  // namespace qtilt
