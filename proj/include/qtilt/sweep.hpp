#pragma once

#include <string>
#include <vector>

#include "qtilt/hmm.hpp"

namespace qtilt {

/// Memory costs of one decay-rate class. eta = cmu / cq, flagged infinite
/// when cq vanishes; a nonempty error means this grid point failed and the
/// numeric fields (other than beta) are meaningless.
struct SweepRecord {
    double beta = 0.0;
    double lambda = 0.0;
    double u = 0.0;
    double hmu = 0.0;
    double cmu = 0.0;
    double cq = 0.0;
    double eta = 0.0;
    bool eta_infinite = false;
    std::string error;
};

struct SweepOptions {
    int threads = 0;  // 0 = library default (all available)
};

/// One record per grid point: tilt to beta, then classical and quantum
/// memories of the tilted machine at synchronization length r. Per-point
/// failures (overflow, degenerate signal states) are captured in the
/// record's error field without aborting the sweep. Results are ordered
/// by ascending beta and do not depend on the thread count.
std::vector<SweepRecord> beta_sweep(const Hmm& hmm, std::vector<double> grid, int r,
                                    const SweepOptions& options = {});

/// Single-threaded reference implementation with identical output;
/// kept for determinism tests and benchmarking.
std::vector<SweepRecord> beta_sweep_serial(const Hmm& hmm, std::vector<double> grid, int r);

struct FitResult {
    double exponent = 0.0;
    double stderr_ = 0.0;
    int n = 0;
};

/// Least-squares slope of log y against log x with its standard error.
/// Requires at least 8 strictly positive (x, y) pairs.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Fit eta against |beta| over records with |beta| in [lo, hi].
FitResult fit_eta_vs_abs_beta(const std::vector<SweepRecord>& records, double lo, double hi);

/// Fit eta against |u - u0| over records with |u - u0| in [lo, hi].
FitResult fit_eta_vs_u_offset(const std::vector<SweepRecord>& records, double u0, double lo,
                              double hi);

struct U0Estimate {
    double u0 = 0.0;       // average of the two one-sided values
    double u_plus = 0.0;   // U(+epsilon)
    double u_minus = 0.0;  // U(-epsilon)
    double gap = 0.0;      // |u_plus - u_minus|
};

/// Decay rate of the beta -> 0 class, estimated from both sides at
/// +-epsilon (epsilon in (0, 0.01]).
U0Estimate estimate_u0(const Hmm& hmm, double epsilon);

/// Inclusive uniform grid of `steps` points on [lo, hi]. A point landing
/// exactly on zero is replaced by the symmetric pair +-eps with
/// eps = min(1e-3, spacing / 4).
std::vector<double> uniform_grid(double lo, double hi, int steps);

/// Geometric grid between lo and hi (same sign, both nonzero).
std::vector<double> log_grid(double lo, double hi, int steps);

}  // namespace qtilt
