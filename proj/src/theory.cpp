#include "theory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "matio.hpp"
#include "rr.hpp"

namespace blockeig {

namespace {

double norm2(const DenseBlock& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

// Eigen-decomposition with eigenvalues in descending order.
void eig_desc(const DenseBlock& m, Vector& values, DenseBlock& vectors) {
    const auto [v, z] = sym_eig_small(m);
    const int n = static_cast<int>(v.size());
    values.resize(n);
    vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        values(i) = v(n - 1 - i);
        vectors.col(i) = z.col(n - 1 - i);
    }
}

// tan of the largest principal angle between span(e_1..e_k) and span(c),
// where c holds coordinates in an orthonormal basis. rows(c) >= k == cols(c).
double tan_angle_coords(const DenseBlock& c, int k, bool* ok = nullptr) {
    const DenseBlock ck = c.topRows(k);
    Eigen::PartialPivLU<DenseBlock> lu(DenseBlock(ck.transpose()));
    const DenseBlock rest = c.bottomRows(c.rows() - k);
    const DenseBlock ratio = lu.solve(rest.transpose().eval()).transpose();
    const double t = norm2(ratio);
    if (ok) {
        const double cond = norm2(ck) * norm2(lu.inverse());
        *ok = std::isfinite(t) && cond < 1e10;
    }
    return t;
}

DenseBlock inv_sqrt_spd(const DenseBlock& g, bool* pd) {
    const auto [v, z] = sym_eig_small(g);
    *pd = v.minCoeff() > 1e-14 * std::max(1.0, v.maxCoeff());
    if (!*pd) return DenseBlock::Identity(g.rows(), g.cols());
    return z * v.cwiseSqrt().cwiseInverse().asDiagonal() * z.transpose();
}

DenseBlock polar_factor(const DenseBlock& m) {
    Eigen::JacobiSVD<DenseBlock> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

// Symmetric orthonormalization: columns of m mapped to an orthonormal basis of
// the same span, closest to m.
DenseBlock orth_sym(const DenseBlock& m) {
    bool pd = false;
    const DenseBlock s = inv_sqrt_spd(m.transpose() * m, &pd);
    if (!pd) throw std::runtime_error("orth_sym: rank-deficient block");
    return m * s;
}

void fill_gaussian(DenseBlock& m, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
}

DenseBlock random_orthonormal(int n, int k, std::mt19937_64& rng) {
    DenseBlock g(n, k);
    fill_gaussian(g, rng);
    Eigen::HouseholderQR<DenseBlock> qr(g);
    return DenseBlock(qr.householderQ() * DenseBlock::Identity(n, k));
}

void fix_column_signs(DenseBlock& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index imax = 0;
        m.col(j).cwiseAbs().maxCoeff(&imax);
        if (m(imax, j) < 0) m.col(j) = -m.col(j);
    }
}

std::string json_escape_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string failure_json(const char* suite, std::uint64_t seed, int trial,
                         std::initializer_list<std::pair<const char*, double>> fields) {
    std::ostringstream os;
    os << "{\"suite\":\"" << suite << "\",\"seed\":" << seed << ",\"trial\":" << trial;
    for (const auto& [k, v] : fields) os << ",\"" << k << "\":" << json_escape_number(v);
    os << "}";
    return os.str();
}

constexpr double kSlack = 1e-12;

}  // namespace

double inverse_rho(const SparseSym& a, const Vector& x, const Vector& v1, double lambda1) {
    if (x.size() != a.rows() || v1.size() != a.rows())
        throw std::invalid_argument("inverse_rho: dimension mismatch");
    const Vector xp = x - v1 * (v1.dot(x));
    const double nx = xp.norm();
    if (nx <= 1e-300) return 0.0;
    SpdFactor fac(a, 0.0);

    const Vector y = fac.solve(xp / nx);
    const double rho = lambda1 * y.norm();

    // Independent route: tangent contraction of one actual inverse-power step.
    const double c0 = std::abs(v1.dot(x));
    if (c0 > 1e-300) {
        const double t0 = nx / c0;
        const Vector z = fac.solve(x);
        const Vector zp = z - v1 * (v1.dot(z));
        const double c1 = std::abs(v1.dot(z));
        if (c1 > 1e-300) {
            const double t1 = zp.norm() / c1;
            const double ratio = t1 / t0;
            if (std::abs(rho - ratio) > 1e-10 * std::max(1.0, rho))
                throw std::runtime_error(
                    "inverse_rho: contraction-factor routes disagree; "
                    "(v1, lambda1) is not the dominant pair of A^{-1}");
        }
    }
    return rho;
}

Example3x3 reproduce_3x3() {
    const SparseSym a = gen_diag({1.0, 10.0, 100.0});
    SpdFactor fac(a, 0.0);
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;

    const auto step = [&](const DenseBlock& x0) {
        DenseBlock y = fac.solve(x0);
        OrthoResult o = orthonormalize(y);
        if (o.q.cols() != x0.cols()) throw std::runtime_error("reproduce_3x3: rank collapse");
        const RitzSet rs = rayleigh_ritz(a, o.q);
        DenseBlock x = rs.vectors;
        fix_column_signs(x);
        return x;
    };

    Example3x3 out;
    DenseBlock x0(3, 2);
    x0 << 1, 1, 1, 4, 1, 2;
    out.x1 = step(x0);
    out.rho_x1 = inverse_rho(a, out.x1.col(0), e1, 1.0);

    Vector xs = Vector::Ones(3);
    Vector ys = fac.solve(xs);
    ys /= ys.norm();
    if (ys(0) < 0) ys = -ys;
    out.rho_power = inverse_rho(a, ys, e1, 1.0);

    DenseBlock xe(3, 2);
    xe.col(0) = ys;
    xe(0, 1) = 1;
    xe(1, 1) = 4;
    xe(2, 1) = 2;
    out.x2 = step(xe);
    out.rho_expanded = inverse_rho(a, out.x2.col(0), e1, 1.0);
    out.asymptotic = 1.0 / 10.0;
    return out;
}

double tan_angle(const DenseBlock& vk, const DenseBlock& x) {
    if (vk.rows() != x.rows() || vk.cols() != x.cols())
        throw std::invalid_argument("tan_angle: blocks must have equal shape");
    const DenseBlock m = vk.transpose() * x;
    const DenseBlock perp = x - vk * m;
    Eigen::PartialPivLU<DenseBlock> lu(DenseBlock(m.transpose()));
    return norm2(DenseBlock(lu.solve(perp.transpose().eval()).transpose()));
}

BoundReport check_rate_bound(const SparseSym& b, const DenseBlock& x, int k, int l) {
    const int n = static_cast<int>(b.rows());
    if (x.rows() != n || x.cols() != k || k < 1 || l <= k || l >= n)
        throw std::invalid_argument("check_rate_bound: need 1 <= k < l < n and X n-by-k");
    Vector sigma;
    DenseBlock v;
    eig_desc(to_dense(b), sigma, v);
    if (sigma(k - 1) <= 0) throw std::invalid_argument("check_rate_bound: sigma_k must be positive");

    BoundReport rep;
    const DenseBlock c = v.transpose() * x;
    bool ok = true;
    const double t0 = tan_angle_coords(c, k, &ok);
    const DenseBlock cb = v.transpose() * spmv_block(b, x);
    bool ok1 = true;
    const double t1 = tan_angle_coords(cb, k, &ok1);
    if (!ok || !ok1) {
        rep.conclusive = false;
        return rep;
    }
    rep.measured = t0 <= 1e-13 ? 0.0 : t1 / t0;

    Eigen::PartialPivLU<DenseBlock> lu(DenseBlock(c.topRows(k).transpose()));
    const DenseBlock mid = lu.solve(c.middleRows(k, l - k).transpose().eval()).transpose();
    const double align = t0 <= 1e-13 ? 0.0 : norm2(mid) / t0;
    rep.bound = sigma(l) / sigma(k - 1) + (sigma(k) - sigma(l)) / sigma(k - 1) * align;
    rep.holds = rep.measured <= rep.bound + kSlack;
    return rep;
}

DecompReport check_decomp_bounds(const DenseBlock& x, const DenseBlock& x_exp, int k, int l) {
    const int n = static_cast<int>(x.rows());
    if (x.cols() != k || x_exp.rows() != n || x_exp.cols() != l - k || k < 1 || l <= k || l > n)
        throw std::invalid_argument("check_decomp_bounds: inconsistent shapes");

    DecompReport rep;
    Eigen::PartialPivLU<DenseBlock> lu(DenseBlock(x.topRows(k).transpose()));
    const auto solve_right = [&](const DenseBlock& m) {
        return DenseBlock(lu.solve(m.transpose().eval()).transpose());
    };
    rep.eta_tilde = norm2(solve_right(x.bottomRows(n - l)));
    const DenseBlock xxki = solve_right(x);
    rep.eta_hat = norm2(xxki);

    DenseBlock base = DenseBlock::Zero(n, l - k);
    base.middleRows(k, l - k).setIdentity();
    rep.eps_eff = norm2(x_exp - base);

    const DenseBlock xmid = xxki - x_exp * (x_exp.transpose() * xxki);
    const DenseBlock g = xmid.transpose() * xmid;
    bool pd = false;
    const DenseBlock gs = inv_sqrt_spd(g, &pd);
    if (!pd) {
        rep.conclusive = false;
        return rep;
    }
    DenseBlock y(n, l);
    y.leftCols(k) = xmid * gs;
    y.rightCols(l - k) = x_exp;
    DenseBlock e = y;
    e.topRows(l) -= DenseBlock::Identity(l, l);

    const double et = rep.eta_tilde, eh = rep.eta_hat, ep = rep.eps_eff;
    const double gram_upper = et * et + 2 * ep * (et * eh + eh) + 6 * ep * ep * eh * eh;

    rep.measured[0] = norm2(e.topLeftCorner(k, k));
    rep.bound[0] = gram_upper + ep * (eh + ep * eh);
    rep.measured[1] = norm2(e.block(k, 0, l - k, k));
    rep.bound[1] = ep * eh * (1 + gram_upper) + gram_upper;
    rep.measured[2] = norm2(e.block(l, 0, n - l, k));
    rep.bound[2] = (et + ep * eh * (1 + et)) * (1 + gram_upper);
    rep.measured[3] = rep.measured[2];
    rep.bound[3] = (et - ep * eh * (1 + et)) * (1 - gram_upper);  // lower bound
    rep.measured[4] = norm2(e.topRightCorner(k, l - k));
    rep.bound[4] = ep;
    rep.measured[5] = norm2(e.block(k, k, l - k, l - k));
    rep.bound[5] = ep;
    rep.measured[6] = norm2(e.block(l, k, n - l, l - k));
    rep.bound[6] = ep;

    const DenseBlock f = gs - DenseBlock::Identity(k, k);
    rep.measured[7] = 2 * norm2(f);
    rep.bound[7] = norm2(DenseBlock(g - DenseBlock::Identity(k, k)));
    rep.measured[8] = rep.bound[7];
    rep.bound[8] = gram_upper;

    rep.holds = true;
    for (int i = 0; i < DecompReport::kChecks; ++i) {
        const bool ok = (i == 3) ? rep.bound[i] <= rep.measured[i] + kSlack
                                 : rep.measured[i] <= rep.bound[i] + kSlack;
        if (!ok) rep.holds = false;
    }
    return rep;
}

PerturbReport check_perturbation_structure(const DenseBlock& h, int k, double alpha) {
    const int l = static_cast<int>(h.rows());
    if (h.cols() != l || k < 1 || k >= l) throw std::invalid_argument("check_perturbation_structure: bad k");
    if (!(alpha > 0)) throw std::invalid_argument("check_perturbation_structure: alpha must be positive");

    PerturbReport rep;
    const Vector sigma = h.diagonal();
    DenseBlock dh = h;
    dh.diagonal().setZero();

    Vector theta;
    DenseBlock c;
    eig_desc(DenseBlock((h + h.transpose()) / 2.0), theta, c);
    if (!(theta(k - 1) > sigma.tail(l - k).maxCoeff() + alpha)) {
        rep.conclusive = false;
        return rep;
    }
    rep.eta_check = norm2(DenseBlock(dh.rightCols(l - k))) / alpha;

    const DenseBlock c11 = c.topLeftCorner(k, k);
    const DenseBlock c22 = c.bottomRightCorner(l - k, l - k);
    rep.off_measured = std::max(norm2(DenseBlock(c.topRightCorner(k, l - k))),
                                norm2(DenseBlock(c.bottomLeftCorner(l - k, k))));
    rep.diag_measured = std::max(norm2(DenseBlock(c11 - polar_factor(c11))),
                                 norm2(DenseBlock(c22 - polar_factor(c22))));
    rep.holds = rep.off_measured <= rep.eta_check + kSlack &&
                rep.diag_measured <= rep.eta_check * rep.eta_check + kSlack;
    return rep;
}

MainBoundReport check_main_bound(const SparseSym& b, const DenseBlock& x, const DenseBlock& x_exp,
                                 int k, int l) {
    const int n = static_cast<int>(b.rows());
    if (x.rows() != n || x.cols() != k || x_exp.rows() != n || x_exp.cols() != l - k || k < 1 ||
        l <= k || l >= n)
        throw std::invalid_argument("check_main_bound: inconsistent shapes");

    MainBoundReport rep;
    Vector sigma;
    DenseBlock v;
    eig_desc(to_dense(b), sigma, v);
    rep.floor_rate = sigma(l) / sigma(k - 1);

    DenseBlock s(n, l);
    s.leftCols(k) = x;
    s.rightCols(l - k) = x_exp;
    OrthoResult o = orthonormalize(s);
    if (o.q.cols() != l) {
        rep.conclusive = false;
        return rep;
    }
    const RitzSet rs = rayleigh_ritz(b, o.q);  // ascending Ritz values
    const DenseBlock xr = rs.vectors.rightCols(k);

    DenseBlock c = v.transpose() * xr;
    bool ok = true;
    const double t0 = tan_angle_coords(c, k, &ok);
    const DenseBlock cb = v.transpose() * spmv_block(b, xr);
    bool ok1 = true;
    const double t1 = tan_angle_coords(cb, k, &ok1);
    if (!ok || !ok1 || t0 <= 1e-13) {
        rep.conclusive = ok && ok1;
        rep.measured = 0.0;
        rep.bound = rep.floor_rate;
        rep.excess = 0.0;
        rep.holds = rep.conclusive;
        return rep;
    }
    rep.measured = t1 / t0;

    Eigen::PartialPivLU<DenseBlock> lu(DenseBlock(c.topRows(k).transpose()));
    const DenseBlock mid = lu.solve(c.middleRows(k, l - k).transpose().eval()).transpose();
    rep.bound = rep.floor_rate + (sigma(k) - sigma(l)) / sigma(k - 1) * norm2(mid) / t0;
    rep.excess = rep.bound - rep.floor_rate;

    // eps_eff needs a sign-consistent eigenbasis; flipping rows of the
    // coordinate matrix leaves every norm above unchanged.
    DenseBlock ce = v.transpose() * x_exp;
    for (int i = 0; i < l - k; ++i)
        if (ce(k + i, i) < 0) ce.row(k + i) = -ce.row(k + i);
    DenseBlock base = DenseBlock::Zero(n, l - k);
    base.middleRows(k, l - k).setIdentity();
    rep.eps_eff = norm2(ce - base);

    rep.holds = rep.measured <= rep.bound + kSlack;
    return rep;
}

SuiteOutcome run_rate_suite(int trials, std::uint64_t seed) {
    SuiteOutcome out;
    out.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + 0x51a7eULL * (t + 1));
        std::uniform_int_distribution<int> nd(6, 50);
        const int n = nd(rng);
        std::uniform_int_distribution<int> kd(1, std::min(5, n - 2));
        const int k = kd(rng);
        std::uniform_int_distribution<int> ld(k + 1, std::min({n - 1, k + 9, 10}));
        const int l = ld(rng);

        std::uniform_real_distribution<double> sd(0.1, 10.0);
        Vector sigma(n);
        for (int i = 0; i < n; ++i) sigma(i) = sd(rng);
        std::sort(sigma.data(), sigma.data() + n, std::greater<double>());

        const DenseBlock q = random_orthonormal(n, n, rng);
        const DenseBlock bd = q * sigma.asDiagonal() * q.transpose();
        const SparseSym b = from_dense(DenseBlock((bd + bd.transpose()) / 2.0));
        const DenseBlock x = random_orthonormal(n, k, rng);

        const BoundReport rep = check_rate_bound(b, x, k, l);
        if (!rep.conclusive) {
            ++out.inconclusive;
            continue;
        }
        if (!rep.holds) {
            ++out.violations;
            if (out.first_failure.empty())
                out.first_failure = failure_json(
                    "rate", seed, t,
                    {{"n", n}, {"k", k}, {"l", l}, {"measured", rep.measured}, {"bound", rep.bound}});
        }
    }
    return out;
}

SuiteOutcome run_decomp_suite(int trials, std::uint64_t seed) {
    SuiteOutcome out;
    out.trials = trials;
    const double eps_grid[3] = {1e-6, 1e-4, 1e-3};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + 0xdec0ULL * (t + 1));
        std::uniform_int_distribution<int> nd(8, 40);
        const int n = nd(rng);
        std::uniform_int_distribution<int> kd(1, 3);
        const int k = kd(rng);
        std::uniform_int_distribution<int> ld(k + 1, std::min(n - 2, k + 5));
        const int l = ld(rng);

        std::uniform_real_distribution<double> etad(0.01, 0.3);
        const double eta_target = etad(rng);
        const double eps = eps_grid[t % 3];

        DenseBlock g2(l - k, k), g3(n - l, k);
        fill_gaussian(g2, rng);
        fill_gaussian(g3, rng);
        g2 *= 0.3;
        const double g3n = norm2(g3);
        if (g3n > 0) g3 *= eta_target / g3n;

        DenseBlock xr(n, k);
        xr.topRows(k).setIdentity();
        xr.middleRows(k, l - k) = g2;
        xr.bottomRows(n - l) = g3;
        const DenseBlock x = orth_sym(xr);

        DenseBlock base = DenseBlock::Zero(n, l - k);
        base.middleRows(k, l - k).setIdentity();
        DenseBlock delta(n, l - k);
        fill_gaussian(delta, rng);
        const double dn = norm2(delta);
        if (dn > 0) delta *= eps / dn;
        const DenseBlock x_exp = orth_sym(DenseBlock(base + delta));

        const DecompReport rep = check_decomp_bounds(x, x_exp, k, l);
        if (!rep.conclusive) {
            ++out.inconclusive;
            continue;
        }
        if (!rep.holds) {
            ++out.violations;
            if (out.first_failure.empty()) {
                int bad = 0;
                for (int i = 0; i < DecompReport::kChecks; ++i) {
                    const bool ok = (i == 3) ? rep.bound[i] <= rep.measured[i] + kSlack
                                             : rep.measured[i] <= rep.bound[i] + kSlack;
                    if (!ok) {
                        bad = i;
                        break;
                    }
                }
                out.first_failure =
                    failure_json("decomp", seed, t,
                                 {{"n", n},
                                  {"k", k},
                                  {"l", l},
                                  {"eps", eps},
                                  {"eta", eta_target},
                                  {"check", bad},
                                  {"measured", rep.measured[bad]},
                                  {"bound", rep.bound[bad]}});
            }
        }
    }
    return out;
}

SuiteOutcome run_perturb_suite(int trials, std::uint64_t seed) {
    SuiteOutcome out;
    out.trials = trials;
    const double dh_grid[3] = {1e-5, 1e-3, 1e-2};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + 0x9e37ULL * (t + 1));
        std::uniform_int_distribution<int> ldd(3, 11);
        const int l = ldd(rng);
        std::uniform_int_distribution<int> kd(1, l - 1);
        const int k = kd(rng);

        std::uniform_real_distribution<double> topd(2.0, 4.0);
        std::uniform_real_distribution<double> restd(0.1, 1.0);
        Vector sig(l);
        for (int i = 0; i < k; ++i) sig(i) = topd(rng);
        for (int i = k; i < l; ++i) sig(i) = restd(rng);

        DenseBlock dh(l, l);
        fill_gaussian(dh, rng);
        dh = DenseBlock((dh + dh.transpose()) / 2.0);
        const double dn = norm2(dh);
        if (dn > 0) dh *= dh_grid[t % 3] / dn;
        const DenseBlock h = DenseBlock(sig.asDiagonal()) + dh;

        const auto [theta, z] = sym_eig_small(h);
        const double alpha =
            (theta(l - k) - h.diagonal().tail(l - k).maxCoeff()) * (1.0 - 1e-9);
        if (!(alpha > 0)) {
            ++out.inconclusive;
            continue;
        }
        const PerturbReport rep = check_perturbation_structure(h, k, alpha);
        if (!rep.conclusive) {
            ++out.inconclusive;
            continue;
        }
        if (!rep.holds) {
            ++out.violations;
            if (out.first_failure.empty())
                out.first_failure = failure_json("perturb", seed, t,
                                                 {{"l", l},
                                                  {"k", k},
                                                  {"alpha", alpha},
                                                  {"eta", rep.eta_check},
                                                  {"off", rep.off_measured},
                                                  {"diag", rep.diag_measured}});
        }
    }
    return out;
}

ScalingOutcome run_scaling_check(std::uint64_t seed) {
    const int n = 30, k = 2, l = 6;
    Vector sigma(n);
    sigma(0) = 10;
    sigma(1) = 8;
    sigma(2) = 5;
    sigma(3) = 4;
    sigma(4) = 3;
    sigma(5) = 2.5;
    for (int i = l; i < n; ++i) sigma(i) = 1.5 * std::pow(0.8, i - l);

    std::mt19937_64 rng(seed);
    const DenseBlock q = random_orthonormal(n, n, rng);
    const DenseBlock bd = q * sigma.asDiagonal() * q.transpose();
    const SparseSym b = from_dense(DenseBlock((bd + bd.transpose()) / 2.0));

    DenseBlock g2(l - k, k), g3(n - l, k);
    fill_gaussian(g2, rng);
    fill_gaussian(g3, rng);
    g2 *= 0.3;
    const double g3n = norm2(g3);
    if (g3n > 0) g3 *= 0.05 / g3n;
    DenseBlock xr(n, k);
    xr.topRows(k).setIdentity();
    xr.middleRows(k, l - k) = g2;
    xr.bottomRows(n - l) = g3;
    const DenseBlock x = q * orth_sym(xr);

    DenseBlock base = DenseBlock::Zero(n, l - k);
    base.middleRows(k, l - k).setIdentity();
    DenseBlock delta(n, l - k);
    fill_gaussian(delta, rng);
    const double dn = norm2(delta);
    if (dn > 0) delta /= dn;

    ScalingOutcome out;
    out.floor_rate = sigma(l) / sigma(k - 1);

    const auto exp_at = [&](double eps) {
        return DenseBlock(q * orth_sym(DenseBlock(base + eps * delta)));
    };

    const MainBoundReport rep0 = check_main_bound(b, x, exp_at(0.0), k, l);
    out.rate_at_zero = rep0.measured;
    out.excess_at_zero = rep0.excess;
    out.zero_limit_ok = rep0.conclusive && rep0.holds &&
                        rep0.measured <= out.floor_rate + 1e-10 &&
                        rep0.excess <= 1e-10;

    for (double eps : {1e-5, 1e-4, 1e-3}) {
        const MainBoundReport rep = check_main_bound(b, x, exp_at(eps), k, l);
        if (!rep.conclusive || !rep.holds) return out;
        out.eps.push_back(rep.eps_eff);
        out.excess.push_back(rep.excess);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(out.eps.size());
    for (int i = 0; i < m; ++i) {
        const double lx = std::log10(out.eps[i]);
        const double ly = std::log10(out.excess[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double kacc = 0;
    for (int i = 0; i < m; ++i) kacc += out.excess[i] / out.eps[i];
    out.k_fit = kacc / m;
    out.slope_ok = out.slope >= 0.7 && out.slope <= 1.3;
    return out;
}

}  // namespace blockeig
