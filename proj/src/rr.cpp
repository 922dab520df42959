#include "rr.hpp"

#include <algorithm>
#include <stdexcept>

namespace blockeig {

RitzSet rayleigh_ritz(const SparseSym& a, const DenseBlock& s) {
    if (s.cols() == 0) throw std::invalid_argument("rayleigh_ritz: empty basis");
    DenseBlock as = spmv_block(a, s);
    DenseBlock h = s.transpose() * as;
    EigResult e = sym_eig_small(h);
    return {e.values, s * e.vectors, e.vectors};
}

DenseBlock residual_block(const SparseSym& a, const RitzSet& ritz) {
    DenseBlock r = spmv_block(a, ritz.vectors);
    for (Eigen::Index j = 0; j < r.cols(); ++j) r.col(j) -= ritz.values[j] * ritz.vectors.col(j);
    return r;
}

ResidualReport assess_convergence(const SparseSym& a, const RitzSet& ritz, const DenseBlock& r,
                                  int n_ev, double tol) {
    const int m = static_cast<int>(ritz.vectors.cols());
    if (n_ev < 1 || n_ev > m) throw std::invalid_argument("assess_convergence: bad n_ev");
    const double norm_a = estimate_norm2(a);
    ResidualReport rep;
    rep.per_pair.resize(m);
    for (int i = 0; i < m; ++i) {
        const double vnorm = ritz.vectors.col(i).norm();
        const double denom = norm_a * vnorm + vnorm * std::fabs(ritz.values[i]);
        rep.per_pair[i] = denom > 0.0 ? r.col(i).norm() / denom : r.col(i).norm();
    }
    rep.overall = *std::max_element(rep.per_pair.begin(), rep.per_pair.begin() + n_ev);
    rep.converged_count = 0;
    while (rep.converged_count < m && rep.per_pair[rep.converged_count] <= tol) ++rep.converged_count;
    return rep;
}

}  // namespace blockeig
