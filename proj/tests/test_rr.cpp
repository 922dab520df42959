#include <random>

#include "doctest.h"
#include "matio.hpp"
#include "oracles.hpp"
#include "rr.hpp"

using namespace blockeig;

TEST_CASE("full-space projection reproduces the spectrum") {
    const SparseSym a = gen_laplacian_1d(14);
    std::mt19937_64 rng(1);
    const OrthoResult o = orthonormalize(random_block(14, 14, rng));
    REQUIRE(o.kept == 14);
    const RitzSet rs = rayleigh_ritz(a, o.q);
    for (int i = 0; i < 14; ++i)
        CHECK(rs.values(i) == doctest::Approx(oracle::laplacian_eigenvalue(14, i + 1)).epsilon(1e-11));
    // lifted vectors are orthonormal and satisfy the small problem
    CHECK((rs.vectors.transpose() * rs.vectors - DenseBlock::Identity(14, 14))
              .cwiseAbs()
              .maxCoeff() < 1e-11);
}

TEST_CASE("ritz values are ascending and coefficients reproduce the vectors") {
    const SparseSym a = gen_diag_geometric(30, 1.3);
    std::mt19937_64 rng(2);
    const OrthoResult o = orthonormalize(random_block(30, 6, rng));
    const RitzSet rs = rayleigh_ritz(a, o.q);
    for (int i = 1; i < 6; ++i) CHECK(rs.values(i) >= rs.values(i - 1));
    CHECK((o.q * rs.coeffs - rs.vectors).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("residual block equals A V minus V Lambda") {
    const SparseSym a = gen_laplacian_1d(18);
    std::mt19937_64 rng(3);
    const OrthoResult o = orthonormalize(random_block(18, 4, rng));
    const RitzSet rs = rayleigh_ritz(a, o.q);
    const DenseBlock r = residual_block(a, rs);
    const DenseBlock want = spmv_block(a, rs.vectors) - rs.vectors * rs.values.asDiagonal();
    CHECK((r - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("convergence assessment scales residuals and counts a leading prefix") {
    const SparseSym a = gen_diag({1.0, 2.0, 3.0, 4.0, 5.0});
    // exact eigenvectors: every pair converges with zero residual
    DenseBlock s = DenseBlock::Identity(5, 3);
    const RitzSet rs = rayleigh_ritz(a, s);
    const DenseBlock r = residual_block(a, rs);
    const ResidualReport rep = assess_convergence(a, rs, r, 2, 1e-10);
    REQUIRE(rep.per_pair.size() == 3);
    for (double v : rep.per_pair) CHECK(v < 1e-14);
    CHECK(rep.overall < 1e-14);
    CHECK(rep.converged_count == 3);
}

TEST_CASE("overall residual is the max over the wanted pairs only") {
    const SparseSym a = gen_diag_geometric(40, 1.2);
    std::mt19937_64 rng(9);
    const OrthoResult o = orthonormalize(random_block(40, 8, rng));
    const RitzSet rs = rayleigh_ritz(a, o.q);
    const DenseBlock r = residual_block(a, rs);
    const ResidualReport rep = assess_convergence(a, rs, r, 3, 1e-10);
    REQUIRE(rep.per_pair.size() == 8);
    double want = 0;
    for (int i = 0; i < 3; ++i) want = std::max(want, rep.per_pair[static_cast<size_t>(i)]);
    CHECK(rep.overall == want);

    // per-pair scaling: ||r_i|| / (||A|| ||v_i|| + |lambda_i| ||v_i||)
    const double na = estimate_norm2(a);
    for (int i = 0; i < 8; ++i) {
        const double rn = r.col(i).norm();
        const double vn = rs.vectors.col(i).norm();
        const double denom = na * vn + std::abs(rs.values(i)) * vn;
        CHECK(rep.per_pair[static_cast<size_t>(i)] == doctest::Approx(rn / denom).epsilon(1e-12));
    }
}

TEST_CASE("converged count stops at the first unconverged pair") {
    const SparseSym a = gen_diag({1.0, 2.0, 10.0, 11.0});
    // first two columns exact, third badly off
    DenseBlock s(4, 3);
    s.setZero();
    s(0, 0) = 1;
    s(1, 1) = 1;
    s(2, 2) = std::sqrt(0.5);
    s(3, 2) = std::sqrt(0.5);
    const RitzSet rs = rayleigh_ritz(a, s);
    const DenseBlock r = residual_block(a, rs);
    const ResidualReport rep = assess_convergence(a, rs, r, 3, 1e-10);
    CHECK(rep.converged_count == 2);
    CHECK(rep.per_pair[2] > 1e-3);
}
