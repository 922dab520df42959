#pragma once

#include <cstdint>
#include <string>

#include "kernel.hpp"

namespace blockeig {

// Exact one-step contraction factor of inverse iteration toward (lambda1, v1):
// rho = lambda1 * ||A^{-1} x_perp|| with x_perp the normalized component of x
// orthogonal to v1. Cross-checked internally against the tangent ratio of an
// actual inverse-power step; throws if the two routes disagree beyond 1e-10.
double inverse_rho(const SparseSym& a, const Vector& x, const Vector& v1, double lambda1);

// The worked diag(1,10,100) example: one shift-and-invert step on a 3x2 block,
// the single-vector power path, and the step after re-expanding with the saved
// column. Columns are sign-fixed so the largest-magnitude entry is positive.
struct Example3x3 {
    DenseBlock x1;  // 3x2 iterate after one step on [[1,1],[1,4],[1,2]]
    DenseBlock x2;  // 3x2 iterate after expanding the power iterate with [1,4,2]
    double rho_x1;
    double rho_power;
    double rho_expanded;
    double asymptotic;  // lambda1/lambda2
};
Example3x3 reproduce_3x3();

// Tangent of the largest principal angle between span(vk) and span(x); both
// blocks orthonormal with the same column count, vk^T x invertible.
double tan_angle(const DenseBlock& vk, const DenseBlock& x);

struct BoundReport {
    double measured = 0;
    double bound = 0;
    bool holds = false;      // measured <= bound + 1e-12
    bool conclusive = true;  // hypotheses satisfied
};

// One-step rate bound: tan(V_k, BX)/tan(V_k, X) against
// sigma_{l+1}/sigma_k + ((sigma_{k+1}-sigma_{l+1})/sigma_k) * |X_{l\k}X_k^-1| / tan(V_k, X),
// with the eigenbasis of B ordered by descending eigenvalue.
BoundReport check_rate_bound(const SparseSym& b, const DenseBlock& x, int k, int l);

// Structured basis decomposition after an expansion, in the coordinates of the
// eigenbasis (V = I): Y = [X_mid (X_mid^T X_mid)^{-1/2}, X_exp] written as
// V_l + E. Checks the per-block norm bounds on E, the lower bound on E31, and
// the Gram lemma 2|F| <= |X_mid^T X_mid - I| <= its eta/eps estimate.
struct DecompReport {
    static constexpr int kChecks = 9;
    // 0:E11 1:E21 2:E31(upper) 3:E31(lower, bound <= measured) 4:E12 5:E22
    // 6:E32 7:Gram lemma 8:Gram estimate
    double measured[kChecks] = {0};
    double bound[kChecks] = {0};
    double eps_eff = 0, eta_tilde = 0, eta_hat = 0;
    bool holds = false;
    bool conclusive = true;
};
DecompReport check_decomp_bounds(const DenseBlock& x, const DenseBlock& x_exp, int k, int l);

// Eigenvector perturbation structure of H = Sigma + dH with Sigma = diag(H):
// with the gap hypothesis min spec(Theta_k) > max Sigma_{l\k} + alpha, the
// eigenvector matrix differs from a block-unitary reference (polar factors of
// its diagonal blocks) by at most eta off-diagonal and eta^2 on-diagonal,
// eta = ||dH_2|| / alpha.
struct PerturbReport {
    double eta_check = 0;
    double off_measured = 0;
    double diag_measured = 0;
    bool holds = false;
    bool conclusive = true;
};
PerturbReport check_perturbation_structure(const DenseBlock& h, int k, double alpha);

// Post-expansion one-step rate: Rayleigh-Ritz on span{X, X_exp} keeping the k
// pairs with the largest Ritz values, then one multiplication by B. `measured`
// is the raw tangent ratio; `bound` is the one-step rate bound evaluated on
// the Ritz output, whose excess over the floor sigma_{l+1}/sigma_k is the
// O(eps_exp) quantity (the raw ratio can sit strictly below the floor).
struct MainBoundReport {
    double measured = 0;
    double bound = 0;
    double floor_rate = 0;
    double excess = 0;   // bound - floor
    double eps_eff = 0;  // ||X_exp - V_{l\k}||
    bool holds = false;
    bool conclusive = true;
};
MainBoundReport check_main_bound(const SparseSym& b, const DenseBlock& x, const DenseBlock& x_exp,
                                 int k, int l);

// Deterministic fuzz drivers. Violations are genuine bound failures;
// inconclusive trials (hypothesis not met, ill-conditioned X_k) are skipped
// and counted. first_failure carries a JSON dump for replay.
struct SuiteOutcome {
    int trials = 0;
    int violations = 0;
    int inconclusive = 0;
    std::string first_failure;
};
SuiteOutcome run_rate_suite(int trials, std::uint64_t seed);
SuiteOutcome run_decomp_suite(int trials, std::uint64_t seed);
SuiteOutcome run_perturb_suite(int trials, std::uint64_t seed);

// Fixed-instance eps_exp sweep: the bound excess must vanish at eps = 0 and
// scale linearly over {1e-5, 1e-4, 1e-3}.
struct ScalingOutcome {
    double floor_rate = 0;
    double rate_at_zero = 0;
    double excess_at_zero = 0;
    std::vector<double> eps, excess;
    double slope = 0;  // log-log fit
    double k_fit = 0;  // mean excess/eps
    bool zero_limit_ok = false;
    bool slope_ok = false;
};
ScalingOutcome run_scaling_check(std::uint64_t seed);

}  // namespace blockeig
