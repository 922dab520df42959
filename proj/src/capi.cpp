#include "blockeig.h"

#include <cstring>
#include <string>

#include "matio.hpp"
#include "solvers.hpp"
#include "theory.hpp"

struct beig_matrix {
    blockeig::SparseSym m;
};

struct beig_result {
    blockeig::SolveResult r;
    std::int64_t nnz_lower = 0;
    int rows = 0;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BEIG_OK;
    } catch (const blockeig::ParseError& e) {
        g_last_error = e.what();
        return BEIG_ERR_PARSE;
    } catch (const blockeig::IoError& e) {
        g_last_error = e.what();
        return BEIG_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return BEIG_ERR_INVALID;
    } catch (const std::runtime_error& e) {
        g_last_error = e.what();
        return BEIG_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BEIG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BEIG_ERR_INTERNAL;
    }
}

int invalid(const char* msg) {
    g_last_error = msg;
    return BEIG_ERR_INVALID;
}

void copy_json(const std::string& s, char* buf, size_t cap) {
    if (!buf || cap == 0 || s.empty()) return;
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* beig_last_error(void) { return g_last_error.c_str(); }

int beig_matrix_read(beig_matrix** out, const char* path) {
    if (!out || !path) return invalid("beig_matrix_read: null argument");
    return guarded([&] { *out = new beig_matrix{blockeig::parse_matrix_market_file(path)}; });
}

int beig_matrix_gen(beig_matrix** out, const char* spec) {
    if (!out || !spec) return invalid("beig_matrix_gen: null argument");
    return guarded([&] { *out = new beig_matrix{blockeig::gen_from_spec(spec)}; });
}

int beig_matrix_write(const beig_matrix* a, const char* path) {
    if (!a || !path) return invalid("beig_matrix_write: null argument");
    return guarded([&] { blockeig::write_matrix_market_file(a->m, path); });
}

void beig_matrix_destroy(beig_matrix* a) { delete a; }

int beig_matrix_rows(const beig_matrix* a) { return a ? a->m.rows() : 0; }

int64_t beig_matrix_nnz_lower(const beig_matrix* a) { return a ? a->m.nnz_lower() : 0; }

int beig_matrix_norm_est(const beig_matrix* a, double* out) {
    if (!a || !out) return invalid("beig_matrix_norm_est: null argument");
    return guarded([&] { *out = blockeig::estimate_norm2(a->m); });
}

int beig_matrix_lambda_min(const beig_matrix* a, double* out) {
    if (!a || !out) return invalid("beig_matrix_lambda_min: null argument");
    return guarded([&] {
        const auto eig = blockeig::sym_eig_small(blockeig::to_dense(a->m));
        *out = eig.values(0);
    });
}

int beig_matrix_spd_shift(beig_matrix** out, const beig_matrix* a, double lambda1) {
    if (!out || !a) return invalid("beig_matrix_spd_shift: null argument");
    return guarded([&] { *out = new beig_matrix{blockeig::apply_spd_shift(a->m, lambda1)}; });
}

void beig_solver_config_default(beig_solver_config* cfg) {
    if (!cfg) return;
    const blockeig::SolverConfig d;
    cfg->n_ev = d.n_ev;
    cfg->n_ex = d.n_ex;
    cfg->n_es = d.n_es;
    cfg->tol = d.tol;
    cfg->max_iters = d.max_iters;
    cfg->shift = d.shift;
    cfg->cg_iters = d.cg_iters;
    cfg->precond = BEIG_PRECOND_IDENTITY;
    cfg->expand_mode = BEIG_EXPAND_XDROP;
    cfg->seed = d.seed;
}

void beig_strategy_config_default(beig_strategy_config* cfg) {
    if (!cfg) return;
    const blockeig::StrategyConfig d;
    cfg->kind = BEIG_STRATEGY_NONE;
    cfg->j_e = d.j_e;
    cfg->j_s = d.j_s;
    cfg->mu = d.mu;
    cfg->j_p = d.j_p;
    cfg->j_warm = d.j_warm;
    cfg->r_warm = d.r_warm;
}

int beig_solve(beig_result** out, const beig_matrix* a, int solver, const beig_solver_config* cfg,
               const beig_strategy_config* strategy, const double* x0, int x0_cols) {
    if (!out || !a || !cfg || !strategy) return invalid("beig_solve: null argument");
    if (solver < BEIG_SOLVER_SI || solver > BEIG_SOLVER_TRACEMIN)
        return invalid("beig_solve: unknown solver");
    if (strategy->kind < BEIG_STRATEGY_NONE || strategy->kind > BEIG_STRATEGY_SLOPEK)
        return invalid("beig_solve: unknown strategy");
    if (cfg->precond < BEIG_PRECOND_IDENTITY || cfg->precond > BEIG_PRECOND_DIAGONAL)
        return invalid("beig_solve: unknown preconditioner");
    if (cfg->expand_mode < BEIG_EXPAND_XDROP || cfg->expand_mode > BEIG_EXPAND_RANDOM)
        return invalid("beig_solve: unknown expand mode");
    if ((x0 == nullptr) != (x0_cols == 0)) return invalid("beig_solve: inconsistent x0");

    return guarded([&] {
        blockeig::SolverConfig sc;
        sc.n_ev = cfg->n_ev;
        sc.n_ex = cfg->n_ex;
        sc.n_es = cfg->n_es;
        sc.tol = cfg->tol;
        sc.max_iters = cfg->max_iters;
        sc.shift = cfg->shift;
        sc.cg_iters = cfg->cg_iters;
        sc.precond = static_cast<blockeig::Precond>(cfg->precond);
        sc.expand_mode = static_cast<blockeig::ExpandMode>(cfg->expand_mode);
        sc.seed = cfg->seed;

        blockeig::StrategyConfig st;
        st.kind = static_cast<blockeig::StrategyKind>(strategy->kind);
        st.j_e = strategy->j_e;
        st.j_s = strategy->j_s;
        st.mu = strategy->mu;
        st.j_p = strategy->j_p;
        st.j_warm = strategy->j_warm;
        st.r_warm = strategy->r_warm;

        const blockeig::DenseBlock* px0 = nullptr;
        blockeig::DenseBlock x0b;
        if (x0) {
            x0b = Eigen::Map<const Eigen::MatrixXd>(x0, a->m.rows(), x0_cols);
            px0 = &x0b;
        }
        auto res = blockeig::solve(static_cast<blockeig::SolverKind>(solver), a->m, sc, st, px0);
        *out = new beig_result{std::move(res), a->m.nnz_lower(), a->m.rows()};
    });
}

void beig_result_destroy(beig_result* r) { delete r; }

int beig_result_status(const beig_result* r) {
    return r ? static_cast<int>(r->r.status) : BEIG_STATUS_MAX_ITERS;
}

int beig_result_iterations(const beig_result* r) { return r ? r->r.iterations : 0; }

int beig_result_nev(const beig_result* r) { return r ? static_cast<int>(r->r.values.size()) : 0; }

int beig_result_rows(const beig_result* r) { return r ? r->rows : 0; }

int beig_result_values(const beig_result* r, double* out, int cap) {
    if (!r || !out || cap < 0) return 0;
    const int n = std::min<int>(cap, static_cast<int>(r->r.values.size()));
    for (int i = 0; i < n; ++i) out[i] = r->r.values(i);
    return n;
}

int64_t beig_result_vectors(const beig_result* r, double* out, int64_t cap) {
    if (!r || !out || cap < 0) return 0;
    const int64_t total = static_cast<int64_t>(r->r.vectors.size());
    const int64_t n = std::min<int64_t>(cap, total);
    std::memcpy(out, r->r.vectors.data(), static_cast<size_t>(n) * sizeof(double));
    return n;
}

int beig_result_history_len(const beig_result* r) {
    return r ? static_cast<int>(r->r.history.size()) : 0;
}

int beig_result_history(const beig_result* r, beig_iter_record* out, int cap) {
    if (!r || !out || cap < 0) return 0;
    const int n = std::min<int>(cap, static_cast<int>(r->r.history.size()));
    for (int i = 0; i < n; ++i) {
        const auto& h = r->r.history[static_cast<size_t>(i)];
        out[i].iteration = h.iteration;
        out[i].r_overall = h.r_overall;
        out[i].n_now = h.n_now;
        out[i].event = static_cast<int>(h.event);
        out[i].lock_count = h.lock_count;
        out[i].spmv_cols = h.work.spmv_cols;
        out[i].solve_cols = h.work.solve_cols;
        out[i].ortho_flops = h.work.ortho_flops;
        out[i].rr_dim = h.work.rr_dim;
    }
    return n;
}

int beig_result_work(const beig_result* r, beig_work_summary* out) {
    if (!r || !out) return invalid("beig_result_work: null argument");
    out->spmv_cols = r->r.work.spmv_cols;
    out->solve_cols = r->r.work.solve_cols;
    out->ortho_flops = r->r.work.ortho_flops;
    out->rr_flops = r->r.rr_flops;
    out->combined = static_cast<double>(r->r.work.spmv_cols + r->r.work.solve_cols) * 2.0 *
                        static_cast<double>(r->nnz_lower) +
                    static_cast<double>(r->r.work.ortho_flops) + static_cast<double>(r->r.rr_flops);
    return BEIG_OK;
}

int beig_theory_example3x3(beig_example3x3* out) {
    if (!out) return invalid("beig_theory_example3x3: null argument");
    return guarded([&] {
        const auto ex = blockeig::reproduce_3x3();
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 3; ++i) {
                out->x1[j * 3 + i] = ex.x1(i, j);
                out->x2[j * 3 + i] = ex.x2(i, j);
            }
        out->rho_x1 = ex.rho_x1;
        out->rho_power = ex.rho_power;
        out->rho_expanded = ex.rho_expanded;
        out->asymptotic = ex.asymptotic;
    });
}

int beig_theory_rate_suite(beig_suite_outcome* out, int trials, uint64_t seed, char* failure_json,
                           size_t cap) {
    if (!out || trials < 1) return invalid("beig_theory_rate_suite: bad arguments");
    return guarded([&] {
        const auto s = blockeig::run_rate_suite(trials, seed);
        *out = {s.trials, s.violations, s.inconclusive};
        copy_json(s.first_failure, failure_json, cap);
    });
}

int beig_theory_decomp_suite(beig_suite_outcome* out, int trials, uint64_t seed, char* failure_json,
                             size_t cap) {
    if (!out || trials < 1) return invalid("beig_theory_decomp_suite: bad arguments");
    return guarded([&] {
        const auto s = blockeig::run_decomp_suite(trials, seed);
        *out = {s.trials, s.violations, s.inconclusive};
        copy_json(s.first_failure, failure_json, cap);
    });
}

int beig_theory_perturb_suite(beig_suite_outcome* out, int trials, uint64_t seed,
                              char* failure_json, size_t cap) {
    if (!out || trials < 1) return invalid("beig_theory_perturb_suite: bad arguments");
    return guarded([&] {
        const auto s = blockeig::run_perturb_suite(trials, seed);
        *out = {s.trials, s.violations, s.inconclusive};
        copy_json(s.first_failure, failure_json, cap);
    });
}

int beig_theory_scaling(beig_scaling_outcome* out, uint64_t seed) {
    if (!out) return invalid("beig_theory_scaling: null argument");
    return guarded([&] {
        const auto s = blockeig::run_scaling_check(seed);
        out->floor_rate = s.floor_rate;
        out->rate_at_zero = s.rate_at_zero;
        out->excess_at_zero = s.excess_at_zero;
        for (int i = 0; i < 3; ++i) {
            out->eps[i] = i < static_cast<int>(s.eps.size()) ? s.eps[i] : 0.0;
            out->excess[i] = i < static_cast<int>(s.excess.size()) ? s.excess[i] : 0.0;
        }
        out->slope = s.slope;
        out->k_fit = s.k_fit;
        out->zero_limit_ok = s.zero_limit_ok ? 1 : 0;
        out->slope_ok = s.slope_ok ? 1 : 0;
    });
}

}  // extern "C"
