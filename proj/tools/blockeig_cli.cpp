// Command-line front end for the block eigensolver shared library. Talks to
// the library exclusively through the C interface in blockeig.h.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "blockeig.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitViolation = 3;

struct MatrixHandle {
    beig_matrix* m = nullptr;
    ~MatrixHandle() { beig_matrix_destroy(m); }
};

struct ResultHandle {
    beig_result* r = nullptr;
    ~ResultHandle() { beig_result_destroy(r); }
};

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::map<std::string, int> kSolverNames = {{"si", BEIG_SOLVER_SI},
                                                 {"sd", BEIG_SOLVER_SD},
                                                 {"lobpcg", BEIG_SOLVER_LOBPCG},
                                                 {"tracemin", BEIG_SOLVER_TRACEMIN}};
const std::map<std::string, int> kStrategyNames = {{"none", BEIG_STRATEGY_NONE},
                                                   {"fix", BEIG_STRATEGY_FIX},
                                                   {"slope", BEIG_STRATEGY_SLOPE},
                                                   {"slopek", BEIG_STRATEGY_SLOPEK}};
const std::map<std::string, int> kExpandNames = {{"xdrop", BEIG_EXPAND_XDROP},
                                                 {"powered", BEIG_EXPAND_POWERED},
                                                 {"random", BEIG_EXPAND_RANDOM}};
const std::map<std::string, int> kPrecondNames = {{"identity", BEIG_PRECOND_IDENTITY},
                                                  {"diagonal", BEIG_PRECOND_DIAGONAL}};

struct RunOpts {
    std::string matrix_path;
    std::string gen_spec;
    std::string solver = "si";
    int n_ev = 1;
    int n_ex = 0;
    int n_es = 0;
    double tol = 1e-10;
    int max_iters = 2000;
    double shift = 0.0;
    int cg_iters = 5;
    std::uint64_t seed = 0;
    std::string strategy = "none";
    int j_e = 12;
    int j_s = 2;
    double mu = 1.1;
    int j_p = 10;
    int j_warm = 5;
    double r_warm = 1e-4;
    std::string expand_mode = "xdrop";
    std::string precond = "identity";
    bool spd_shift = false;
    std::string out_path;
    std::string format = "csv";
};

void add_matrix_flags(CLI::App* cmd, RunOpts& o) {
    cmd->add_option("--matrix", o.matrix_path, "Matrix Market file, symmetric");
    cmd->add_option("--gen", o.gen_spec,
                    "Generator spec: laplacian1d:N | diag:v1,v2,... | diag-geom:N,RATIO");
}

void add_solver_flags(CLI::App* cmd, RunOpts& o) {
    cmd->add_option("--solver", o.solver, "si | sd | lobpcg | tracemin")
        ->check(CLI::IsMember({"si", "sd", "lobpcg", "tracemin"}));
    cmd->add_option("--nev", o.n_ev, "Number of wanted eigenpairs (smallest)");
    cmd->add_option("--nex", o.n_ex, "Expanded block size (0: solver default)");
    cmd->add_option("--nes", o.n_es, "Shrunken block size (0: default nev+5, capped)");
    cmd->add_option("--tol", o.tol, "Relative residual tolerance");
    cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
    cmd->add_option("--shift", o.shift, "Shift zeta for the (A - zeta I) factorization");
    cmd->add_option("--cg-iters", o.cg_iters, "Inner CG steps per column (tracemin)");
    cmd->add_option("--seed", o.seed, "RNG seed for starting blocks");
    cmd->add_option("--strategy", o.strategy, "none | fix | slope | slopek")
        ->check(CLI::IsMember({"none", "fix", "slope", "slopek"}));
    cmd->add_option("--je", o.j_e, "Expansion period (fix)");
    cmd->add_option("--js", o.j_s, "Iterations between expansion and next shrink");
    cmd->add_option("--mu", o.mu, "Slope-ratio threshold (slope/slopek)");
    cmd->add_option("--jp", o.j_p, "Averaging window (slopek)");
    cmd->add_option("--jwarm", o.j_warm, "No shrink before this iteration");
    cmd->add_option("--rwarm", o.r_warm, "No shrink before the residual falls below this");
    cmd->add_option("--expand-mode", o.expand_mode, "xdrop | powered | random")
        ->check(CLI::IsMember({"xdrop", "powered", "random"}));
    cmd->add_option("--precond", o.precond, "identity | diagonal")
        ->check(CLI::IsMember({"identity", "diagonal"}));
    cmd->add_flag("--spd-shift", o.spd_shift,
                  "Pre-shift the matrix to positive definite (dense lambda_1 check)");
}

void add_output_flags(CLI::App* cmd, RunOpts& o) {
    cmd->add_option("--out", o.out_path, "Output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

int fail(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitInput;
}

int load_matrix(const RunOpts& o, MatrixHandle& mh) {
    if (o.matrix_path.empty() == o.gen_spec.empty())
        return fail("exactly one of --matrix and --gen is required");
    int rc = o.matrix_path.empty() ? beig_matrix_gen(&mh.m, o.gen_spec.c_str())
                                   : beig_matrix_read(&mh.m, o.matrix_path.c_str());
    if (rc != BEIG_OK) return fail(beig_last_error());
    if (o.spd_shift) {
        double lam1 = 0;
        rc = beig_matrix_lambda_min(mh.m, &lam1);
        if (rc != BEIG_OK) return fail(beig_last_error());
        beig_matrix* shifted = nullptr;
        rc = beig_matrix_spd_shift(&shifted, mh.m, lam1);
        if (rc != BEIG_OK) return fail(beig_last_error());
        beig_matrix_destroy(mh.m);
        mh.m = shifted;
    }
    return -1;  // keep going
}

void fill_configs(const RunOpts& o, beig_solver_config& cfg, beig_strategy_config& scfg) {
    beig_solver_config_default(&cfg);
    cfg.n_ev = o.n_ev;
    cfg.n_ex = o.n_ex;
    cfg.n_es = o.n_es;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.shift = o.shift;
    cfg.cg_iters = o.cg_iters;
    cfg.precond = kPrecondNames.at(o.precond);
    cfg.expand_mode = kExpandNames.at(o.expand_mode);
    cfg.seed = o.seed;
    beig_strategy_config_default(&scfg);
    scfg.kind = kStrategyNames.at(o.strategy);
    scfg.j_e = o.j_e;
    scfg.j_s = o.j_s;
    scfg.mu = o.mu;
    scfg.j_p = o.j_p;
    scfg.j_warm = o.j_warm;
    scfg.r_warm = o.r_warm;
}

std::string event_text(const beig_iter_record& h) {
    switch (h.event) {
        case BEIG_EVENT_SHRINK:
            return "shrink";
        case BEIG_EVENT_EXPAND:
            return "expand";
        case BEIG_EVENT_LOCK:
            return "lock(" + std::to_string(h.lock_count) + ")";
        default:
            return "none";
    }
}

const char* status_text(int status) {
    switch (status) {
        case BEIG_STATUS_CONVERGED:
            return "converged";
        case BEIG_STATUS_STAGNATED:
            return "stagnated";
        default:
            return "max_iters";
    }
}

std::vector<beig_iter_record> fetch_history(const beig_result* r) {
    std::vector<beig_iter_record> h(static_cast<size_t>(beig_result_history_len(r)));
    if (!h.empty()) beig_result_history(r, h.data(), static_cast<int>(h.size()));
    return h;
}

json history_json(const std::vector<beig_iter_record>& hist) {
    json rows = json::array();
    for (const auto& h : hist) {
        rows.push_back({{"iteration", h.iteration},
                        {"r_overall", h.r_overall},
                        {"n_now", h.n_now},
                        {"event", event_text(h)},
                        {"spmv_cols_cum", h.spmv_cols},
                        {"solve_cols_cum", h.solve_cols},
                        {"ortho_flops_cum", h.ortho_flops},
                        {"rr_dim", h.rr_dim}});
    }
    return rows;
}

void write_history_csv(std::ostream& os, const std::vector<beig_iter_record>& hist) {
    os << "iteration,r_overall,n_now,event,spmv_cols_cum,solve_cols_cum,ortho_flops_cum,rr_dim\n";
    for (const auto& h : hist) {
        os << h.iteration << ',' << fmt_g17(h.r_overall) << ',' << h.n_now << ',' << event_text(h)
           << ',' << h.spmv_cols << ',' << h.solve_cols << ',' << h.ortho_flops << ',' << h.rr_dim
           << '\n';
    }
}

// Streams the payload to --out when given (summary then goes to stdout),
// otherwise to stdout (summary to stderr).
int deliver(const RunOpts& o, const std::string& payload, const std::string& summary) {
    if (o.out_path.empty()) {
        std::cout << payload;
        std::cerr << summary;
        return -1;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f || !(f << payload).flush()) return fail("cannot write '" + o.out_path + "'");
    std::cout << summary;
    return -1;
}

json work_json(const beig_work_summary& w) {
    return {{"spmv_cols", w.spmv_cols},
            {"solve_cols", w.solve_cols},
            {"ortho_flops", w.ortho_flops},
            {"rr_flops", w.rr_flops},
            {"combined", w.combined}};
}

int cmd_solve(const RunOpts& o) {
    MatrixHandle mh;
    if (int rc = load_matrix(o, mh); rc >= 0) return rc;

    beig_solver_config cfg;
    beig_strategy_config scfg;
    fill_configs(o, cfg, scfg);

    ResultHandle rh;
    int rc = beig_solve(&rh.r, mh.m, kSolverNames.at(o.solver), &cfg, &scfg, nullptr, 0);
    if (rc != BEIG_OK) return fail(beig_last_error());

    const int status = beig_result_status(rh.r);
    const auto hist = fetch_history(rh.r);
    const double r_final = hist.empty() ? -1.0 : hist.back().r_overall;
    std::vector<double> values(static_cast<size_t>(beig_result_nev(rh.r)));
    beig_result_values(rh.r, values.data(), static_cast<int>(values.size()));
    beig_work_summary work{};
    beig_result_work(rh.r, &work);

    std::string payload;
    if (o.format == "csv") {
        std::ostringstream os;
        write_history_csv(os, hist);
        payload = os.str();
    } else {
        json doc = {{"command", "solve"},
                    {"solver", o.solver},
                    {"strategy", o.strategy},
                    {"status", status_text(status)},
                    {"iterations", beig_result_iterations(rh.r)},
                    {"r_final", r_final},
                    {"values", values},
                    {"work", work_json(work)},
                    {"history", history_json(hist)}};
        payload = doc.dump(2) + "\n";
    }

    std::ostringstream sum;
    sum << "solver=" << o.solver << " strategy=" << o.strategy << " status=" << status_text(status)
        << " iterations=" << beig_result_iterations(rh.r) << " r_final=" << fmt_g17(r_final)
        << " combined_work=" << fmt_g17(work.combined) << "\n";
    sum << "values:";
    for (double v : values) sum << ' ' << fmt_g17(v);
    sum << "\n";
    if (int drc = deliver(o, payload, sum.str()); drc >= 0) return drc;
    return status == BEIG_STATUS_CONVERGED ? kExitOk : kExitNotConverged;
}

int thread_cap() {
    if (const char* env = std::getenv("BLOCKEIG_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(4u, hw)) : 1;
}

struct CompareRow {
    std::string strategy;
    int rc = BEIG_OK;
    std::string err;
    int status = BEIG_STATUS_MAX_ITERS;
    int iterations = 0;
    double r_final = -1;
    beig_work_summary work{};
    std::vector<double> values;
};

int cmd_compare(const RunOpts& o) {
    MatrixHandle mh;
    if (int rc = load_matrix(o, mh); rc >= 0) return rc;
    double norm_est = 0;
    beig_matrix_norm_est(mh.m, &norm_est);  // warm the shared cache before forking

    const std::vector<std::string> strategies = {"none", "fix", "slope", "slopek"};
    std::vector<CompareRow> rows(strategies.size());

    const auto run_one = [&](size_t i) {
        CompareRow row;
        row.strategy = strategies[i];
        beig_solver_config cfg;
        beig_strategy_config scfg;
        fill_configs(o, cfg, scfg);
        scfg.kind = kStrategyNames.at(row.strategy);
        ResultHandle rh;
        row.rc = beig_solve(&rh.r, mh.m, kSolverNames.at(o.solver), &cfg, &scfg, nullptr, 0);
        if (row.rc != BEIG_OK) {
            row.err = beig_last_error();
            return row;
        }
        row.status = beig_result_status(rh.r);
        row.iterations = beig_result_iterations(rh.r);
        const auto hist = fetch_history(rh.r);
        row.r_final = hist.empty() ? -1.0 : hist.back().r_overall;
        beig_result_work(rh.r, &row.work);
        row.values.resize(static_cast<size_t>(beig_result_nev(rh.r)));
        beig_result_values(rh.r, row.values.data(), static_cast<int>(row.values.size()));
        return row;
    };

    const size_t cap = static_cast<size_t>(thread_cap());
    for (size_t base = 0; base < strategies.size(); base += cap) {
        std::vector<std::future<CompareRow>> batch;
        const size_t end = std::min(strategies.size(), base + cap);
        for (size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_one, i));
        for (size_t i = base; i < end; ++i) rows[i] = batch[i - base].get();
    }

    for (const auto& row : rows)
        if (row.rc != BEIG_OK) return fail("strategy " + row.strategy + ": " + row.err);

    const double work_none = rows[0].work.combined;
    const auto save_pct = [&](const CompareRow& row) {
        if (&row == &rows[0] || work_none <= 0) return 0.0;
        return 100.0 * (1.0 - row.work.combined / work_none);
    };

    std::string payload;
    if (o.format == "csv") {
        std::ostringstream os;
        os << "strategy,status,iterations,r_final,spmv_cols,solve_cols,ortho_flops,rr_flops,"
              "combined_work,save_pct\n";
        for (const auto& row : rows) {
            os << row.strategy << ',' << status_text(row.status) << ',' << row.iterations << ','
               << fmt_g17(row.r_final) << ',' << row.work.spmv_cols << ',' << row.work.solve_cols
               << ',' << row.work.ortho_flops << ',' << row.work.rr_flops << ','
               << fmt_g17(row.work.combined) << ',' << fmt_g17(save_pct(row)) << '\n';
        }
        payload = os.str();
    } else {
        json doc = {{"command", "compare"}, {"solver", o.solver}, {"rows", json::array()}};
        for (const auto& row : rows) {
            doc["rows"].push_back({{"strategy", row.strategy},
                                   {"status", status_text(row.status)},
                                   {"iterations", row.iterations},
                                   {"r_final", row.r_final},
                                   {"values", row.values},
                                   {"work", work_json(row.work)},
                                   {"save_pct", save_pct(row)}});
        }
        payload = doc.dump(2) + "\n";
    }

    std::ostringstream sum;
    for (const auto& row : rows) {
        sum << "strategy=" << row.strategy << " status=" << status_text(row.status)
            << " iterations=" << row.iterations << " combined_work=" << fmt_g17(row.work.combined)
            << " save_pct=" << fmt_g17(save_pct(row)) << "\n";
    }
    if (int drc = deliver(o, payload, sum.str()); drc >= 0) return drc;
    for (const auto& row : rows)
        if (row.status != BEIG_STATUS_CONVERGED) return kExitNotConverged;
    return kExitOk;
}

// Golden values for the diag(1,10,100) walkthrough, column-major 3x2 blocks.
constexpr double kGoldRhoX1 = 3.5696e-2;
constexpr double kGoldRhoPower = 9.95e-2;
constexpr double kGoldRhoExpanded = 4.9716e-2;
constexpr double kGoldAsymptotic = 1.0e-1;
constexpr double kGoldX1[6] = {9.9998e-1, -2.4159e-3, 6.5860e-3, 2.1951e-3, 9.9944e-1, 3.3329e-2};
constexpr double kGoldX2[6] = {1.0000e0, 2.2386e-4, -3.9883e-4, -2.0324e-4, 9.9870e-1, 5.0959e-2};

bool rel_match(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

bool block_match(const double* got, const double* want) {
    for (int c = 0; c < 2; ++c) {
        for (int s = 0; s < 2; ++s) {
            const double sign = s == 0 ? 1.0 : -1.0;
            bool all = true;
            for (int i = 0; i < 3; ++i) {
                const double g = want[c * 3 + i];
                if (std::abs(sign * got[c * 3 + i] - g) > 5e-4 * std::abs(g) + 1e-9) {
                    all = false;
                    break;
                }
            }
            if (all) break;
            if (s == 1) return false;
        }
    }
    return true;
}

int theory_example3x3(bool& violated) {
    beig_example3x3 ex{};
    const int rc = beig_theory_example3x3(&ex);
    if (rc != BEIG_OK) return fail(beig_last_error());
    const bool ok = rel_match(ex.rho_x1, kGoldRhoX1, 5e-5) &&
                    rel_match(ex.rho_power, kGoldRhoPower, 5e-4) &&
                    rel_match(ex.rho_expanded, kGoldRhoExpanded, 5e-5) &&
                    rel_match(ex.asymptotic, kGoldAsymptotic, 1e-12) &&
                    block_match(ex.x1, kGoldX1) && block_match(ex.x2, kGoldX2);
    std::cout << "example3x3: rho_x1=" << fmt_g17(ex.rho_x1)
              << " rho_power=" << fmt_g17(ex.rho_power)
              << " rho_expanded=" << fmt_g17(ex.rho_expanded)
              << " asymptotic=" << fmt_g17(ex.asymptotic) << (ok ? " [ok]" : " [MISMATCH]")
              << "\n";
    if (!ok) {
        json doc = {{"suite", "example3x3"},
                    {"rho_x1", ex.rho_x1},
                    {"rho_power", ex.rho_power},
                    {"rho_expanded", ex.rho_expanded},
                    {"asymptotic", ex.asymptotic},
                    {"x1", std::vector<double>(ex.x1, ex.x1 + 6)},
                    {"x2", std::vector<double>(ex.x2, ex.x2 + 6)}};
        std::cout << doc.dump() << "\n";
        violated = true;
    }
    return -1;
}

int theory_fuzz(const std::string& name, int trials, std::uint64_t seed, bool& violated) {
    if (trials == 0) {
        std::cout << name << ": 0 trials\n";
        return -1;
    }
    beig_suite_outcome out{};
    char failure[512] = {0};
    int rc = BEIG_OK;
    if (name == "rate")
        rc = beig_theory_rate_suite(&out, trials, seed, failure, sizeof failure);
    else if (name == "decomp")
        rc = beig_theory_decomp_suite(&out, trials, seed, failure, sizeof failure);
    else
        rc = beig_theory_perturb_suite(&out, trials, seed, failure, sizeof failure);
    if (rc != BEIG_OK) return fail(beig_last_error());
    std::cout << name << ": trials=" << out.trials << " violations=" << out.violations
              << " inconclusive=" << out.inconclusive << (out.violations ? " [VIOLATION]" : " [ok]")
              << "\n";
    if (out.violations) {
        std::cout << failure << "\n";
        violated = true;
    }
    return -1;
}

int theory_main(std::uint64_t seed, bool& violated) {
    beig_scaling_outcome out{};
    const int rc = beig_theory_scaling(&out, seed);
    if (rc != BEIG_OK) return fail(beig_last_error());
    const bool ok = out.zero_limit_ok && out.slope_ok;
    std::cout << "main: floor=" << fmt_g17(out.floor_rate)
              << " rate_at_zero=" << fmt_g17(out.rate_at_zero) << " slope=" << fmt_g17(out.slope)
              << " k_fit=" << fmt_g17(out.k_fit) << (ok ? " [ok]" : " [VIOLATION]") << "\n";
    if (!ok) {
        json doc = {{"suite", "main"},
                    {"floor_rate", out.floor_rate},
                    {"rate_at_zero", out.rate_at_zero},
                    {"excess_at_zero", out.excess_at_zero},
                    {"eps", std::vector<double>(out.eps, out.eps + 3)},
                    {"excess", std::vector<double>(out.excess, out.excess + 3)},
                    {"slope", out.slope},
                    {"zero_limit_ok", out.zero_limit_ok != 0},
                    {"slope_ok", out.slope_ok != 0}};
        std::cout << doc.dump() << "\n";
        violated = true;
    }
    return -1;
}

int cmd_theory(const std::string& suite, int trials, std::uint64_t seed) {
    bool violated = false;
    const bool all = suite == "all";
    if (all || suite == "example3x3")
        if (int rc = theory_example3x3(violated); rc >= 0) return rc;
    if (all || suite == "rate")
        if (int rc = theory_fuzz("rate", trials < 0 ? 200 : trials, seed, violated); rc >= 0)
            return rc;
    if (all || suite == "decomp")
        if (int rc = theory_fuzz("decomp", trials < 0 ? 100 : trials, seed, violated); rc >= 0)
            return rc;
    if (all || suite == "perturb")
        if (int rc = theory_fuzz("perturb", trials < 0 ? 100 : trials, seed, violated); rc >= 0)
            return rc;
    if (all || suite == "main")
        if (int rc = theory_main(seed, violated); rc >= 0) return rc;
    return violated ? kExitViolation : kExitOk;
}

int cmd_gen(const RunOpts& o) {
    if (o.gen_spec.empty()) return fail("--gen is required");
    if (o.out_path.empty()) return fail("--out is required");
    MatrixHandle mh;
    int rc = beig_matrix_gen(&mh.m, o.gen_spec.c_str());
    if (rc != BEIG_OK) return fail(beig_last_error());
    rc = beig_matrix_write(mh.m, o.out_path.c_str());
    if (rc != BEIG_OK) return fail(beig_last_error());
    std::cout << "wrote " << beig_matrix_rows(mh.m) << "x" << beig_matrix_rows(mh.m) << " matrix ("
              << beig_matrix_nnz_lower(mh.m) << " stored entries) to " << o.out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse symmetric block eigensolvers with dynamic block sizing"};
    app.require_subcommand(1);

    RunOpts solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "Run one solver and export its history");
    add_matrix_flags(solve_cmd, solve_opts);
    add_solver_flags(solve_cmd, solve_opts);
    add_output_flags(solve_cmd, solve_opts);

    RunOpts compare_opts;
    auto* compare_cmd =
        app.add_subcommand("compare", "Run every block-sizing strategy on one problem");
    add_matrix_flags(compare_cmd, compare_opts);
    add_solver_flags(compare_cmd, compare_opts);
    add_output_flags(compare_cmd, compare_opts);

    std::string suite = "all";
    int trials = -1;
    std::uint64_t theory_seed = 0;
    auto* theory_cmd = app.add_subcommand("theory", "Validate the convergence-rate bounds");
    theory_cmd->add_option("suite", suite, "example3x3 | rate | decomp | perturb | main | all")
        ->check(CLI::IsMember({"example3x3", "rate", "decomp", "perturb", "main", "all"}));
    theory_cmd->add_option("--trials", trials, "Fuzz trials per suite (default 200/100/100)")
        ->check(CLI::NonNegativeNumber);
    theory_cmd->add_option("--seed", theory_seed, "Fuzz RNG seed");

    RunOpts gen_opts;
    auto* gen_cmd = app.add_subcommand("gen", "Write a generated matrix as Matrix Market");
    gen_cmd->add_option("--gen", gen_opts.gen_spec, "Generator spec")->required();
    gen_cmd->add_option("--out", gen_opts.out_path, "Destination file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (solve_cmd->parsed()) return cmd_solve(solve_opts);
    if (compare_cmd->parsed()) return cmd_compare(compare_opts);
    if (theory_cmd->parsed()) return cmd_theory(suite, trials, theory_seed);
    return cmd_gen(gen_opts);
}
