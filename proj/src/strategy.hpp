#pragma once

#include <vector>

namespace blockeig {

enum class StrategyKind { none, fix, slope, slopek };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::none;
    int j_e = 12;         // expansion period (fix)
    int j_s = 2;          // iterations an expansion stays before the next shrink
    double mu = 1.1;      // slope-ratio threshold for expansion
    int j_p = 10;         // averaging window (slopek)
    int j_warm = 5;       // no shrink before this iteration
    double r_warm = 1e-4; // and not before the residual falls below this
};

enum class Decision { hold, shrink, expand };

struct StrategyState {
    int j = 0;                    // iterations observed
    int n_now = 0;                // caller-maintained current block size
    std::vector<double> log10_r;  // residual history, one entry per iteration
    bool shrunk_once = false;     // warm-up completed (first shrink fired)
    int last_expand_iter = -1;
    bool have_cmax = false;
    double c_max = 0.0;
};

// Single-step convergence slope c = log10 r(j-1) - log10 r(j); positive means
// progress. Requires at least two entries.
double slope(const std::vector<double>& log10_r);

// Windowed slope c = (log10 r(j-jp) - log10 r(j)) / jp. Requires jp+1 entries.
double slope_avg(const std::vector<double>& log10_r, int j_p);

// One call per iteration, after the residual for iteration j is known. The
// caller applies the returned action within the same iteration: an expansion
// before the basis update's orthonormalization, a shrink after the
// Rayleigh-Ritz step. Expansion is only considered in the shrunken state
// (n_now == n_es) and shrinking in the expanded state (n_now == n_ex); the
// first shrink is gated by the warm-up thresholds.
Decision decide(StrategyState& st, const StrategyConfig& cfg, double r_now, int n_es, int n_ex);

void validate(const StrategyConfig& cfg);

}  // namespace blockeig
