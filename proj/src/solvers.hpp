#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "rr.hpp"
#include "strategy.hpp"

namespace blockeig {

enum class SolverKind { si, sd, lobpcg, tracemin };
enum class Precond { identity, diagonal };
enum class ExpandMode { x_drop, powered_x_drop, random };
enum class SolveStatus { converged, max_iters, stagnated };
enum class IterEvent { none, shrink, expand, lock };

struct SolverConfig {
    int n_ev = 1;
    int n_ex = 0;  // 0: default 2*n_ev (1.5*n_ev for LOBPCG), capped at n
    int n_es = 0;  // 0: default min(n_ev + 5, n_ex - 1)
    double tol = 1e-10;
    int max_iters = 2000;
    double shift = 0.0;  // zeta in the shift-and-invert factorization
    int cg_iters = 5;    // inner CG steps per column (TraceMIN)
    Precond precond = Precond::identity;
    ExpandMode expand_mode = ExpandMode::x_drop;
    std::uint64_t seed = 0;
};

// Deterministic cost counters. spmv/solve/ortho fields are cumulative within
// a run; rr_dim is the projected-problem dimension of the iteration at hand.
struct WorkUnits {
    std::int64_t spmv_cols = 0;
    std::int64_t solve_cols = 0;
    std::int64_t ortho_flops = 0;
    int rr_dim = 0;
};

struct ConvergenceRecord {
    int iteration;
    double r_overall;  // max relative residual over the first n_ev pairs
    int n_now;         // block size after this iteration's event
    IterEvent event;
    int lock_count;
    WorkUnits work;
};

struct SolveResult {
    SolveStatus status;
    Vector values;       // first n_ev Ritz values, ascending
    DenseBlock vectors;  // matching Ritz vectors
    std::vector<ConvergenceRecord> history;
    int iterations = 0;
    WorkUnits work;               // final counters
    std::int64_t rr_flops = 0;    // sum over iterations of 2*n*d^2 + d^3
};

// Fills in default n_ex/n_es and validates all fields against the matrix size
// and the active strategy. Throws std::invalid_argument on bad input.
SolverConfig resolve_config(SolverConfig cfg, SolverKind kind, const StrategyConfig& scfg, int n);

SolveResult solve_si(const SparseSym& a, const SolverConfig& cfg, const StrategyConfig& scfg,
                     const DenseBlock* x0 = nullptr);
SolveResult solve_sd(const SparseSym& a, const SolverConfig& cfg, const StrategyConfig& scfg,
                     const DenseBlock* x0 = nullptr);
SolveResult solve_lobpcg(const SparseSym& a, const SolverConfig& cfg, const StrategyConfig& scfg,
                         const DenseBlock* x0 = nullptr);
SolveResult solve_tracemin(const SparseSym& a, const SolverConfig& cfg, const StrategyConfig& scfg,
                           const DenseBlock* x0 = nullptr);
SolveResult solve(SolverKind kind, const SparseSym& a, const SolverConfig& cfg,
                  const StrategyConfig& scfg, const DenseBlock* x0 = nullptr);

// Orthonormal basis update keeping the previous X inside span([X, P]): the new
// X is S*Z(:,1:n_now); P comes from the same coefficient columns with the
// leading n_now block rows zeroed, orthonormalized against Z(:,1:n_now) and
// internally. Columns below the drop tolerance vanish, so P can be thinner
// than X. The first `lock` coefficient columns contribute no P direction.
std::pair<DenseBlock, DenseBlock> hl_trick(const DenseBlock& s, const DenseBlock& z, int n_now,
                                           int lock = 0);

// Indices of pairs kept active under soft locking: everything from the first
// unconverged pair onward (converged pairs trailing an unconverged one stay
// active so the locked set is always a contiguous prefix).
std::vector<int> soft_lock(const ResidualReport& report, double tol);

// Block appended on expansion. x_drop modes return the saved block (empty if
// nothing was saved); random draws `want` fresh normal columns.
DenseBlock expansion_vectors(ExpandMode mode, const DenseBlock& x_drop, int want,
                             std::mt19937_64& rng, int n);

// Scalar flop-style model combining all counters, used by compare reports:
// (spmv_cols + solve_cols) * 2*nnz + ortho_flops + rr_flops.
double combined_work(const SolveResult& r, const SparseSym& a);

}  // namespace blockeig
