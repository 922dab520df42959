// Exercises the shared-library C interface end to end; this binary links the
// shared library only, so it also proves the exported symbol set suffices.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "blockeig.h"
#include "doctest.h"

namespace {

struct MatrixGuard {
    beig_matrix* m = nullptr;
    ~MatrixGuard() { beig_matrix_destroy(m); }
};

struct ResultGuard {
    beig_result* r = nullptr;
    ~ResultGuard() { beig_result_destroy(r); }
};

double lap_eig(int n, int k) {
    return 2.0 - 2.0 * std::cos(k * 3.14159265358979323846 / (n + 1));
}

}  // namespace

TEST_CASE("matrix generation and introspection") {
    MatrixGuard g;
    REQUIRE(beig_matrix_gen(&g.m, "laplacian1d:50") == BEIG_OK);
    CHECK(beig_matrix_rows(g.m) == 50);
    CHECK(beig_matrix_nnz_lower(g.m) == 99);

    double nrm = 0.0;
    REQUIRE(beig_matrix_norm_est(g.m, &nrm) == BEIG_OK);
    CHECK(nrm > 3.8);
    CHECK(nrm <= 4.0);

    MatrixGuard d;
    REQUIRE(beig_matrix_gen(&d.m, "diag:1,2,3") == BEIG_OK);
    CHECK(beig_matrix_rows(d.m) == 3);
    CHECK(beig_matrix_nnz_lower(d.m) == 3);

    MatrixGuard geo;
    REQUIRE(beig_matrix_gen(&geo.m, "diag-geom:10,2.0") == BEIG_OK);
    CHECK(beig_matrix_rows(geo.m) == 10);
}

TEST_CASE("generator and reader error reporting") {
    beig_matrix* m = nullptr;
    CHECK(beig_matrix_gen(&m, "frobnicate:3") == BEIG_ERR_INVALID);
    CHECK(m == nullptr);
    CHECK(std::strlen(beig_last_error()) > 0);

    CHECK(beig_matrix_gen(nullptr, "diag:1") == BEIG_ERR_INVALID);
    CHECK(beig_matrix_gen(&m, nullptr) == BEIG_ERR_INVALID);

    CHECK(beig_matrix_read(&m, "no_such_file.mtx") == BEIG_ERR_IO);
    CHECK(m == nullptr);

    {
        std::ofstream f("capi_garbage.mtx");
        f << "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n3 3 5.0\n";
    }
    CHECK(beig_matrix_read(&m, "capi_garbage.mtx") == BEIG_ERR_PARSE);
    CHECK(std::strlen(beig_last_error()) > 0);
    std::remove("capi_garbage.mtx");
}

TEST_CASE("write and read round trip") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "diag-geom:12,1.5") == BEIG_OK);
    REQUIRE(beig_matrix_write(a.m, "capi_roundtrip.mtx") == BEIG_OK);

    MatrixGuard b;
    REQUIRE(beig_matrix_read(&b.m, "capi_roundtrip.mtx") == BEIG_OK);
    CHECK(beig_matrix_rows(b.m) == beig_matrix_rows(a.m));
    CHECK(beig_matrix_nnz_lower(b.m) == beig_matrix_nnz_lower(a.m));
    std::remove("capi_roundtrip.mtx");
}

TEST_CASE("lambda_min and the SPD shift helper") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "diag:-2,1,5") == BEIG_OK);
    double lam = 0.0;
    REQUIRE(beig_matrix_lambda_min(a.m, &lam) == BEIG_OK);
    CHECK(lam == doctest::Approx(-2.0).epsilon(1e-12));

    MatrixGuard s;
    REQUIRE(beig_matrix_spd_shift(&s.m, a.m, lam) == BEIG_OK);
    double lam2 = 0.0;
    REQUIRE(beig_matrix_lambda_min(s.m, &lam2) == BEIG_OK);
    CHECK(lam2 == doctest::Approx(0.05 * 2.0).epsilon(1e-10));

    MatrixGuard spd;
    REQUIRE(beig_matrix_gen(&spd.m, "diag:1,2") == BEIG_OK);
    MatrixGuard copy;
    REQUIRE(beig_matrix_spd_shift(&copy.m, spd.m, 1.0) == BEIG_OK);
    double lam3 = 0.0;
    REQUIRE(beig_matrix_lambda_min(copy.m, &lam3) == BEIG_OK);
    CHECK(lam3 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("configuration defaults") {
    beig_solver_config cfg;
    beig_solver_config_default(&cfg);
    CHECK(cfg.n_ev == 1);
    CHECK(cfg.n_ex == 0);
    CHECK(cfg.n_es == 0);
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.max_iters == 2000);
    CHECK(cfg.shift == 0.0);
    CHECK(cfg.cg_iters == 5);
    CHECK(cfg.precond == BEIG_PRECOND_IDENTITY);
    CHECK(cfg.expand_mode == BEIG_EXPAND_XDROP);
    CHECK(cfg.seed == 0);

    beig_strategy_config st;
    beig_strategy_config_default(&st);
    CHECK(st.kind == BEIG_STRATEGY_NONE);
    CHECK(st.j_e == 12);
    CHECK(st.j_s == 2);
    CHECK(st.mu == 1.1);
    CHECK(st.j_p == 10);
    CHECK(st.j_warm == 5);
    CHECK(st.r_warm == 1e-4);
}

TEST_CASE("solve round trip with history and work accounting") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "laplacian1d:80") == BEIG_OK);
    beig_solver_config cfg;
    beig_solver_config_default(&cfg);
    cfg.n_ev = 3;
    beig_strategy_config st;
    beig_strategy_config_default(&st);

    ResultGuard res;
    REQUIRE(beig_solve(&res.r, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 0) == BEIG_OK);
    CHECK(beig_result_status(res.r) == BEIG_STATUS_CONVERGED);
    CHECK(beig_result_nev(res.r) == 3);
    CHECK(beig_result_rows(res.r) == 80);

    double vals[3] = {0, 0, 0};
    REQUIRE(beig_result_values(res.r, vals, 3) == 3);
    for (int i = 0; i < 3; ++i) CHECK(vals[i] == doctest::Approx(lap_eig(80, i + 1)).epsilon(1e-8));
    CHECK(vals[0] < vals[1]);
    CHECK(vals[1] < vals[2]);

    std::vector<double> vecs(80 * 3, 0.0);
    REQUIRE(beig_result_vectors(res.r, vecs.data(), static_cast<int64_t>(vecs.size())) == 240);
    for (int c = 0; c < 3; ++c) {
        double nn = 0.0;
        for (int r = 0; r < 80; ++r) nn += vecs[c * 80 + r] * vecs[c * 80 + r];
        CHECK(std::sqrt(nn) == doctest::Approx(1.0).epsilon(1e-10));
    }

    const int len = beig_result_history_len(res.r);
    CHECK(len == beig_result_iterations(res.r));
    REQUIRE(len > 0);
    std::vector<beig_iter_record> hist(static_cast<size_t>(len));
    REQUIRE(beig_result_history(res.r, hist.data(), len) == len);
    for (int i = 0; i < len; ++i) {
        CHECK(hist[i].iteration == i + 1);
        CHECK(hist[i].r_overall > 0.0);
        if (i > 0) {
            CHECK(hist[i].spmv_cols >= hist[i - 1].spmv_cols);
            CHECK(hist[i].solve_cols >= hist[i - 1].solve_cols);
            CHECK(hist[i].ortho_flops >= hist[i - 1].ortho_flops);
        }
    }
    CHECK(hist[len - 1].r_overall <= cfg.tol);

    beig_work_summary w;
    REQUIRE(beig_result_work(res.r, &w) == BEIG_OK);
    CHECK(w.spmv_cols == hist[len - 1].spmv_cols);
    CHECK(w.solve_cols == hist[len - 1].solve_cols);
    const double expect = static_cast<double>(w.spmv_cols + w.solve_cols) * 2.0 *
                              static_cast<double>(beig_matrix_nnz_lower(a.m)) +
                          static_cast<double>(w.ortho_flops) + static_cast<double>(w.rr_flops);
    CHECK(w.combined == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("solve with an explicit starting block") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "laplacian1d:40") == BEIG_OK);
    beig_solver_config cfg;
    beig_solver_config_default(&cfg);
    cfg.n_ev = 3;
    cfg.n_ex = 6;
    beig_strategy_config st;
    beig_strategy_config_default(&st);

    std::vector<double> x0(40 * 6, 0.0);
    for (int c = 0; c < 6; ++c) x0[c * 40 + c] = 1.0;

    ResultGuard res;
    REQUIRE(beig_solve(&res.r, a.m, BEIG_SOLVER_SI, &cfg, &st, x0.data(), 6) == BEIG_OK);
    CHECK(beig_result_status(res.r) == BEIG_STATUS_CONVERGED);

    beig_result* bad = nullptr;
    std::vector<double> rank_def(40 * 6, 0.0);
    for (int c = 0; c < 6; ++c) rank_def[c * 40] = 1.0;
    CHECK(beig_solve(&bad, a.m, BEIG_SOLVER_SI, &cfg, &st, rank_def.data(), 6) ==
          BEIG_ERR_INVALID);
    CHECK(bad == nullptr);
    CHECK(beig_solve(&bad, a.m, BEIG_SOLVER_SI, &cfg, &st, x0.data(), 5) == BEIG_ERR_INVALID);
    CHECK(beig_solve(&bad, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 6) == BEIG_ERR_INVALID);
}

TEST_CASE("solver argument validation surfaces as error codes") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "diag:1,2,3,4") == BEIG_OK);
    beig_solver_config cfg;
    beig_solver_config_default(&cfg);
    beig_strategy_config st;
    beig_strategy_config_default(&st);
    beig_result* r = nullptr;

    cfg.n_ev = 0;
    CHECK(beig_solve(&r, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 0) == BEIG_ERR_INVALID);
    cfg.n_ev = 2;
    cfg.tol = 0.0;
    CHECK(beig_solve(&r, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 0) == BEIG_ERR_INVALID);
    cfg.tol = 1e-10;
    CHECK(beig_solve(&r, a.m, 9, &cfg, &st, nullptr, 0) == BEIG_ERR_INVALID);
    st.kind = 17;
    CHECK(beig_solve(&r, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 0) == BEIG_ERR_INVALID);
    st.kind = BEIG_STRATEGY_NONE;
    CHECK(beig_solve(nullptr, a.m, BEIG_SOLVER_SI, &cfg, &st, nullptr, 0) == BEIG_ERR_INVALID);
    CHECK(std::strlen(beig_last_error()) > 0);
    CHECK(r == nullptr);
}

TEST_CASE("shrink-and-expand through the C interface") {
    MatrixGuard a;
    REQUIRE(beig_matrix_gen(&a.m, "diag-geom:150,1.05") == BEIG_OK);
    beig_solver_config cfg;
    beig_solver_config_default(&cfg);
    cfg.n_ev = 5;
    cfg.seed = 4;
    beig_strategy_config st;
    beig_strategy_config_default(&st);
    st.kind = BEIG_STRATEGY_FIX;

    ResultGuard res;
    REQUIRE(beig_solve(&res.r, a.m, BEIG_SOLVER_LOBPCG, &cfg, &st, nullptr, 0) == BEIG_OK);
    CHECK(beig_result_status(res.r) == BEIG_STATUS_CONVERGED);
    double vals[5];
    REQUIRE(beig_result_values(res.r, vals, 5) == 5);
    for (int i = 0; i < 5; ++i) CHECK(vals[i] == doctest::Approx(std::pow(1.05, i)).epsilon(1e-8));
}

TEST_CASE("worked example values through the C interface") {
    beig_example3x3 ex;
    REQUIRE(beig_theory_example3x3(&ex) == BEIG_OK);
    CHECK(ex.rho_x1 == doctest::Approx(3.5696e-2).epsilon(5e-5));
    CHECK(ex.rho_power == doctest::Approx(9.95e-2).epsilon(5e-4));
    CHECK(ex.rho_expanded == doctest::Approx(4.9716e-2).epsilon(5e-5));
    CHECK(ex.asymptotic == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ex.x1[0] == doctest::Approx(9.9998e-1).epsilon(1e-3));
    CHECK(ex.x2[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(beig_theory_example3x3(nullptr) == BEIG_ERR_INVALID);
}

TEST_CASE("analysis suites through the C interface") {
    beig_suite_outcome out;
    char buf[8] = "intact";
    REQUIRE(beig_theory_rate_suite(&out, 30, 7, buf, sizeof buf) == BEIG_OK);
    CHECK(out.trials == 30);
    CHECK(out.violations == 0);
    CHECK(std::string(buf) == "intact");

    REQUIRE(beig_theory_decomp_suite(&out, 20, 7, nullptr, 0) == BEIG_OK);
    CHECK(out.violations == 0);
    REQUIRE(beig_theory_perturb_suite(&out, 20, 7, nullptr, 0) == BEIG_OK);
    CHECK(out.violations == 0);

    beig_scaling_outcome sc;
    REQUIRE(beig_theory_scaling(&sc, 7) == BEIG_OK);
    CHECK(sc.zero_limit_ok == 1);
    CHECK(sc.slope_ok == 1);
    CHECK(sc.floor_rate == doctest::Approx(0.1875).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) {
        CHECK(sc.eps[i] > 0.0);
        CHECK(sc.excess[i] > 0.0);
    }
}
