#pragma once

#include <string>
#include <vector>

#include "qtilt/hmm.hpp"
#include "qtilt/matrix.hpp"

namespace qtilt {

/// Perron eigenpair of a nonnegative irreducible matrix: the maximal
/// eigenvalue and its strictly positive right eigenvector, normalized to
/// sum 1.
struct PerronPair {
    double lambda = 0.0;
    std::vector<double> r;
};

/// Power iteration on m + shift*I (the shift leaves eigenvectors intact
/// and separates the dominant eigenvalue of periodic matrices). Iterates
/// until |m r - lambda r|_inf <= 1e-12 * max|m|; throws NonConvergence
/// if the budget runs out.
PerronPair perron(const Matrix& m);

struct StochasticizeResult {
    Hmm hmm;
    PerronPair perron;
};

/// Normalize a family of nonnegative per-symbol matrices into an HMM via
/// the Perron pair of their sum M: S^(x)_ij = M^(x)_ij r_j / (lambda r_i),
/// followed by an explicit row renormalization (corrections < 1e-9).
StochasticizeResult stochasticize(const std::vector<Matrix>& parts,
                                  std::vector<std::string> states,
                                  Alphabet alphabet,
                                  std::string name);

/// Exponentially tilted machine targeting one probability-decay-rate class.
struct TiltedHmm {
    Hmm hmm;              // the reweighted generator, same topology as the base
    double beta = 1.0;    // class index, nonzero
    double lambda = 1.0;  // Perron eigenvalue of the entrywise-powered sum
    double u = 0.0;       // decay rate of the targeted class, bits/symbol
    double hmu_beta = 0.0;  // entropy rate of the tilted process
};

/// Largest |beta| accepted before entrywise powers are rejected outright.
inline constexpr double kMaxAbsBeta = 500.0;

/// Entrywise power T^(x) -> (T^(x))^beta (zeros stay zero, computed as
/// exp2(beta log2 t) so magnitudes are controlled), then stochasticize.
/// Throws BetaZero, Overflow (power leaves the normal double range),
/// NotUnifilar (entropy rate of the tilted machine needs unifilarity).
TiltedHmm tilt_hmm(const Hmm& hmm, double beta);

/// U = (hmu(P_beta) - log2 lambda_beta) / beta.
double energy_density(const TiltedHmm& tilted);

}  // namespace qtilt
