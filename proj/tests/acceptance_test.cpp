// End-to-end acceptance gate. Each numbered criterion prints exactly one
// [PASS]/[FAIL] line; the process exit code is the number of failures.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "matio.hpp"
#include "oracles.hpp"
#include "solvers.hpp"
#include "strategy.hpp"
#include "theory.hpp"

using namespace blockeig;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Column-wise comparison allowing a global sign flip per column; entries must
// agree to four significant digits.
bool block_match(const DenseBlock& got, const double* gold) {
    for (int c = 0; c < got.cols(); ++c) {
        bool plus = true, minus = true;
        for (int r = 0; r < got.rows(); ++r) {
            const double g = gold[c * got.rows() + r];
            const double tol = 5e-4 * std::abs(g) + 1e-9;
            plus = plus && std::abs(got(r, c) - g) <= tol;
            minus = minus && std::abs(-got(r, c) - g) <= tol;
        }
        if (!plus && !minus) return false;
    }
    return true;
}

StrategyConfig strat(StrategyKind k) {
    StrategyConfig s;
    s.kind = k;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) return {};
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BLOCKEIG_CLI_PATH) + " " + args;
    const int st = std::system(cmd.c_str());
    if (st == -1 || !WIFEXITED(st)) return -1;
    return WEXITSTATUS(st);
}

Outcome crit_worked_example() {
    const auto t0 = Clock::now();
    const double kX1[6] = {9.9998e-1, -2.4159e-3, 6.5860e-3, 2.1951e-3, 9.9944e-1, 3.3329e-2};
    const double kX2[6] = {1.0000e0, 2.2386e-4, -3.9883e-4, -2.0324e-4, 9.9870e-1, 5.0959e-2};
    const Example3x3 ex = reproduce_3x3();
    Outcome o;
    o.ok = rel_err(ex.rho_x1, 3.5696e-2) <= 5e-5 && rel_err(ex.rho_power, 9.95e-2) <= 5e-4 &&
           rel_err(ex.rho_expanded, 4.9716e-2) <= 5e-5 && std::abs(ex.asymptotic - 0.1) <= 1e-12 &&
           block_match(ex.x1, kX1) && block_match(ex.x2, kX2);
    const double secs = seconds_since(t0);
    o.ok = o.ok && secs < 1.0;
    o.detail = fmt("rho %.5g / %.4g / %.5g, %.2f s", ex.rho_x1, ex.rho_power, ex.rho_expanded,
                   secs);
    return o;
}

Outcome crit_rate_bound_fuzz() {
    const auto t0 = Clock::now();
    const SuiteOutcome s = run_rate_suite(200, 2026);
    const double secs = seconds_since(t0);
    Outcome o;
    o.ok = s.trials == 200 && s.violations == 0 && s.inconclusive <= 20 && secs < 30.0;
    o.detail = fmt("200 trials, %d violations, %d inconclusive, %.2f s", s.violations,
                   s.inconclusive, secs);
    return o;
}

Outcome crit_block_bound_fuzz() {
    const auto t0 = Clock::now();
    const SuiteOutcome d = run_decomp_suite(100, 2026);
    const SuiteOutcome p = run_perturb_suite(100, 2026);
    const double secs = seconds_since(t0);
    Outcome o;
    o.ok = d.trials == 100 && p.trials == 100 && d.violations == 0 && p.violations == 0 &&
           secs < 60.0;
    o.detail = fmt("decomp %d violations, perturb %d violations, %.2f s", d.violations,
                   p.violations, secs);
    return o;
}

Outcome crit_expansion_scaling() {
    const ScalingOutcome s = run_scaling_check(2026);
    Outcome o;
    o.ok = s.zero_limit_ok && s.slope_ok;
    o.detail = fmt("excess at zero %.3g, log-log slope %.4f", s.excess_at_zero, s.slope);
    return o;
}

Outcome crit_solver_oracle() {
    const auto t0 = Clock::now();
    const int n = 400, n_ev = 10;
    oracle::Dense dense = oracle::dense_zero(n);
    for (int i = 0; i < n; ++i) {
        dense.at(i, i) = 2.0;
        if (i + 1 < n) {
            dense.at(i, i + 1) = -1.0;
            dense.at(i + 1, i) = -1.0;
        }
    }
    std::vector<double> ovals;
    std::vector<std::vector<double>> ovecs;
    oracle::jacobi_eig(dense, ovals, ovecs);
    for (int k = 0; k < n_ev; ++k)
        if (std::abs(ovals[k] - oracle::laplacian_eigenvalue(n, k + 1)) > 1e-9)
            return {false, "oracle eigensolver disagrees with the closed form"};

    const SparseSym a = gen_laplacian_1d(n);
    const SolverKind kinds[4] = {SolverKind::si, SolverKind::sd, SolverKind::lobpcg,
                                 SolverKind::tracemin};
    const StrategyKind strats[4] = {StrategyKind::none, StrategyKind::fix, StrategyKind::slope,
                                    StrategyKind::slopek};
    int converged = 0, tm_values = 0, tm_mismatches = 0;
    bool values_ok = true;
    for (SolverKind kind : kinds)
        for (StrategyKind sk : strats) {
            const bool tm = kind == SolverKind::tracemin;
            SolverConfig cfg;
            cfg.n_ev = n_ev;
            cfg.tol = tm ? 1e-6 : 1e-10;
            cfg.seed = 1;
            const SolveResult res = solve(kind, a, cfg, strat(sk));
            if (res.status != SolveStatus::converged) continue;
            ++converged;
            for (int i = 0; i < n_ev; ++i) {
                const double re = rel_err(res.values(i), ovals[i]);
                if (tm) {
                    ++tm_values;
                    tm_mismatches += re > 1e-6;
                } else if (re > 1e-8) {
                    values_ok = false;
                }
            }
        }
    const double secs = seconds_since(t0);
    Outcome o;
    const int allowed = tm_values / 100;
    o.ok = converged == 16 && values_ok && tm_mismatches <= allowed && secs < 120.0;
    o.detail = fmt("%d/16 converged, tracemin mismatches %d/%d, %.1f s", converged, tm_mismatches,
                   tm_values, secs);
    return o;
}

Outcome crit_sizing_saves_work() {
    struct Case {
        const char* spec;
        int max_iters;
    };
    const Case cases[2] = {{"diag-geom:500,1.02", 6000}, {"laplacian1d:400", 2000}};
    Outcome o;
    o.ok = true;
    for (const Case& c : cases) {
        const SparseSym a = gen_from_spec(c.spec);
        SolverConfig cfg;
        cfg.n_ev = 10;
        cfg.n_ex = 20;
        cfg.n_es = 15;
        cfg.max_iters = c.max_iters;
        cfg.seed = 1;
        SolveResult none = solve_lobpcg(a, cfg, strat(StrategyKind::none));
        SolveResult fix = solve_lobpcg(a, cfg, strat(StrategyKind::fix));
        SolveResult slk = solve_lobpcg(a, cfg, strat(StrategyKind::slopek));
        if (none.status != SolveStatus::converged || fix.status != SolveStatus::converged ||
            slk.status != SolveStatus::converged) {
            o.ok = false;
            o.detail += fmt("%s: not all runs converged; ", c.spec);
            continue;
        }
        const double ratio = static_cast<double>(fix.iterations) / none.iterations;
        const double orr_none = static_cast<double>(none.work.ortho_flops) + none.rr_flops;
        const double orr_fix = static_cast<double>(fix.work.ortho_flops) + fix.rr_flops;
        const double cw_none = combined_work(none, a);
        const double save_fix = 1.0 - combined_work(fix, a) / cw_none;
        const double save_slk = 1.0 - combined_work(slk, a) / cw_none;
        const bool ok = ratio <= 1.3 && orr_fix < orr_none && std::max(save_fix, save_slk) >= 0.10;
        o.ok = o.ok && ok;
        o.detail += fmt("%s: iter ratio %.2f, save fix %.0f%% slopek %.0f%%; ", c.spec, ratio,
                        100 * save_fix, 100 * save_slk);
    }
    return o;
}

Outcome crit_block_size_monotone() {
    const SparseSym a = gen_from_spec("diag-geom:300,1.05");
    int iters[3] = {0, 0, 0};
    const int sizes[3] = {5, 10, 20};
    for (int i = 0; i < 3; ++i) {
        SolverConfig cfg;
        cfg.n_ev = 5;
        cfg.n_ex = sizes[i];
        cfg.seed = 1;
        const SolveResult res = solve_si(a, cfg, strat(StrategyKind::none));
        if (res.status != SolveStatus::converged) return {false, fmt("n_ex=%d did not converge", sizes[i])};
        iters[i] = res.iterations;
    }
    Outcome o;
    o.ok = iters[0] >= iters[1] && iters[1] >= iters[2] && iters[2] < iters[0];
    o.detail = fmt("iterations %d / %d / %d for n_ex 5 / 10 / 20", iters[0], iters[1], iters[2]);
    return o;
}

Outcome crit_oscillation_robustness() {
    const auto fixture_r = [](int j) { return std::pow(10, -0.1 * j + 0.15 * ((j % 2) ? -1 : 1)); };
    int expansions[2] = {0, 0};
    for (int variant = 0; variant < 2; ++variant) {
        StrategyConfig cfg;
        cfg.kind = variant == 0 ? StrategyKind::slope : StrategyKind::slopek;
        cfg.mu = 1.1;
        cfg.j_p = 10;
        StrategyState st;
        st.n_now = 10;
        st.shrunk_once = true;
        for (int j = 1; j <= 40; ++j) {
            const Decision d = decide(st, cfg, fixture_r(j), 10, 20);
            if (d == Decision::expand) {
                ++expansions[variant];
                st.n_now = 20;
            }
            if (d == Decision::shrink) st.n_now = 10;
        }
    }
    Outcome o;
    o.ok = expansions[0] >= 1 && expansions[1] == 0;
    o.detail = fmt("slope expanded %d times, slopek %d times over 40 iterations", expansions[0],
                   expansions[1]);
    return o;
}

Outcome crit_deterministic_csv() {
    const std::string flags =
        "solve --gen diag-geom:200,1.03 --nev 6 --solver lobpcg --strategy slope --seed 9";
    const int c1 = run_cli(flags + " --out acc_det_a.csv > /dev/null 2>&1");
    const int c2 = run_cli(flags + " --out acc_det_b.csv > /dev/null 2>&1");
    const std::string a = slurp("acc_det_a.csv");
    const std::string b = slurp("acc_det_b.csv");
    std::remove("acc_det_a.csv");
    std::remove("acc_det_b.csv");
    Outcome o;
    o.ok = c1 == 0 && c2 == 0 && !a.empty() && a == b;
    o.detail = fmt("two runs, %zu bytes each, %s", a.size(), a == b ? "identical" : "different");
    return o;
}

Outcome crit_expansion_vector_choice() {
    const SparseSym a = gen_from_spec("diag-geom:300,1.05");
    const ExpandMode modes[3] = {ExpandMode::x_drop, ExpandMode::random,
                                 ExpandMode::powered_x_drop};
    double iters[3][5];
    for (int m = 0; m < 3; ++m)
        for (int s = 0; s < 5; ++s) {
            SolverConfig cfg;
            cfg.n_ev = 5;
            cfg.expand_mode = modes[m];
            cfg.seed = static_cast<std::uint64_t>(s + 1);
            const SolveResult res = solve_si(a, cfg, strat(StrategyKind::fix));
            if (res.status != SolveStatus::converged)
                return {false, fmt("mode %d seed %d did not converge", m, s + 1)};
            iters[m][s] = res.iterations;
        }
    double mean[3] = {0, 0, 0};
    for (int m = 0; m < 3; ++m)
        for (int s = 0; s < 5; ++s) mean[m] += iters[m][s] / 5.0;
    int powered_wins = 0;
    for (int s = 0; s < 5; ++s) powered_wins += iters[2][s] <= iters[0][s];
    Outcome o;
    o.ok = mean[0] <= mean[1] && powered_wins >= 3;
    o.detail = fmt("mean iterations saved %.1f / random %.1f / powered %.1f; powered <= saved on "
                   "%d of 5 seeds",
                   mean[0], mean[1], mean[2], powered_wins);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> fn;
    };
    const Criterion criteria[] = {
        {"worked 3x3 example reproduces its contraction factors and iterates",
         crit_worked_example},
        {"one-step tangent bound holds on 200 fuzzed instances", crit_rate_bound_fuzz},
        {"decomposition and perturbation block bounds hold on 100+100 fuzzed instances",
         crit_block_bound_fuzz},
        {"expansion-error excess vanishes at zero and scales linearly", crit_expansion_scaling},
        {"all solvers match a dense eigendecomposition oracle on laplacian1d:400",
         crit_solver_oracle},
        {"dynamic block sizing cuts work for LOBPCG on two spectra", crit_sizing_saves_work},
        {"iterations are nonincreasing in the expanded block size", crit_block_size_monotone},
        {"windowed slope ignores an oscillating residual that fools the single-step slope",
         crit_oscillation_robustness},
        {"identical flags and seed give byte-identical CSV output", crit_deterministic_csv},
        {"saved expansion vectors beat random ones; powered vectors keep up",
         crit_expansion_vector_choice},
    };

    int failures = 0;
    int idx = 0;
    for (const Criterion& c : criteria) {
        ++idx;
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.ok;
        std::printf("[%s] %02d %s (%s)\n", o.ok ? "PASS" : "FAIL", idx, c.label,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
