#include "qtilt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qtilt/errors.hpp"
#include "qtilt/qgen.hpp"
#include "qtilt/tilt.hpp"

namespace qtilt {

namespace {

constexpr double kEtaCqFloor = 1e-12;

SweepRecord compute_record(const Hmm& hmm, double beta, int r) {
    SweepRecord rec;
    rec.beta = beta;
    try {
        const TiltedHmm tilted = tilt_hmm(hmm, beta);
        rec.lambda = tilted.lambda;
        rec.u = tilted.u;
        rec.hmu = tilted.hmu_beta;
        rec.cmu = statistical_complexity(tilted.hmm);
        rec.cq = quantum_memory(tilted.hmm, r);
        if (rec.cq > kEtaCqFloor) {
            rec.eta = rec.cmu / rec.cq;
        } else {
            rec.eta_infinite = true;
            rec.eta = std::numeric_limits<double>::infinity();
        }
    } catch (const Error& e) {
        rec.error = e.what();
        rec.lambda = rec.u = rec.hmu = rec.cmu = rec.cq = rec.eta =
            std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

void sweep_prechecks(const Hmm& hmm, std::vector<double>& grid, int r) {
    require_valid(hmm);
    if (!check_unifilar(hmm)) throw NotUnifilar("beta_sweep: machine must be unifilar");
    if (!check_markov_order(hmm, r))
        throw MarkovOrderMismatch("beta_sweep: r fails the synchronization check");
    for (double b : grid)
        if (b == 0.0) throw ValidationError("beta_sweep: grid must exclude 0");
    std::sort(grid.begin(), grid.end());
}

}  // namespace

std::vector<SweepRecord> beta_sweep(const Hmm& hmm, std::vector<double> grid, int r,
                                    const SweepOptions& options) {
    sweep_prechecks(hmm, grid, r);
    std::vector<SweepRecord> records(grid.size());
    const int64_t count = static_cast<int64_t>(grid.size());
#ifdef _OPENMP
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int64_t i = 0; i < count; ++i) records[i] = compute_record(hmm, grid[i], r);
#else
    (void)options;
    for (int64_t i = 0; i < count; ++i) records[i] = compute_record(hmm, grid[i], r);
#endif
    return records;
}

std::vector<SweepRecord> beta_sweep_serial(const Hmm& hmm, std::vector<double> grid, int r) {
    sweep_prechecks(hmm, grid, r);
    std::vector<SweepRecord> records(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) records[i] = compute_record(hmm, grid[i], r);
    return records;
}

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("fit_power_law: size mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 8) throw InsufficientData("fit_power_law: need at least 8 points, have " +
                                      std::to_string(n));
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ValidationError("fit_power_law: x and y must be strictly positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("fit_power_law: degenerate x range");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double resid = ly[i] - (slope * lx[i] + intercept);
        ss += resid * resid;
    }
    FitResult out;
    out.exponent = slope;
    out.stderr_ = std::sqrt(ss / (n - 2) / sxx);
    out.n = n;
    return out;
}

namespace {

FitResult fit_records(const std::vector<SweepRecord>& records, double lo, double hi,
                      double (*xf)(const SweepRecord&, double), double param) {
    std::vector<double> xs, ys;
    for (const auto& rec : records) {
        if (!rec.error.empty() || rec.eta_infinite) continue;
        const double x = xf(rec, param);
        if (x >= lo && x <= hi && rec.eta > 0.0 && std::isfinite(rec.eta)) {
            xs.push_back(x);
            ys.push_back(rec.eta);
        }
    }
    return fit_power_law(xs, ys);
}

}  // namespace

FitResult fit_eta_vs_abs_beta(const std::vector<SweepRecord>& records, double lo, double hi) {
    return fit_records(
        records, lo, hi, [](const SweepRecord& r, double) { return std::abs(r.beta); }, 0.0);
}

FitResult fit_eta_vs_u_offset(const std::vector<SweepRecord>& records, double u0, double lo,
                              double hi) {
    return fit_records(
        records, lo, hi, [](const SweepRecord& r, double u0v) { return std::abs(r.u - u0v); },
        u0);
}

U0Estimate estimate_u0(const Hmm& hmm, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.01))
        throw ValidationError("estimate_u0: epsilon must lie in (0, 0.01]");
    U0Estimate out;
    out.u_plus = tilt_hmm(hmm, epsilon).u;
    out.u_minus = tilt_hmm(hmm, -epsilon).u;
    out.u0 = 0.5 * (out.u_plus + out.u_minus);
    out.gap = std::abs(out.u_plus - out.u_minus);
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, int steps) {
    if (!(lo < hi)) throw ValidationError("uniform_grid: need lo < hi");
    if (steps < 2) throw ValidationError("uniform_grid: need at least 2 steps");
    const double spacing = (hi - lo) / (steps - 1);
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (int k = 0; k < steps; ++k) {
        const double b = lo + k * spacing;
        if (b == 0.0) {
            const double eps = std::min(1e-3, spacing / 4.0);
            grid.push_back(-eps);
            grid.push_back(eps);
        } else {
            grid.push_back(b);
        }
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<double> log_grid(double lo, double hi, int steps) {
    if (steps < 2) throw ValidationError("log_grid: need at least 2 steps");
    if (lo == 0.0 || hi == 0.0 || (lo < 0.0) != (hi < 0.0))
        throw ValidationError("log_grid: endpoints must be nonzero and share a sign");
    const double sign = lo < 0.0 ? -1.0 : 1.0;
    const double la = std::log(std::abs(lo));
    const double lb = std::log(std::abs(hi));
    std::vector<double> grid;
    grid.reserve(steps);
    for (int k = 0; k < steps; ++k)
        grid.push_back(sign * std::exp(la + (lb - la) * k / (steps - 1)));
    std::sort(grid.begin(), grid.end());
    return grid;
}

}  // namespace qtilt
