#include "kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace blockeig {

Vector spmv(const SparseSym& a, const Vector& x) {
    const int n = a.rows();
    Vector y = Vector::Zero(n);
    const auto& rp = a.row_ptr();
    const auto& col = a.col();
    const auto& val = a.val();
    for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        const double xr = x[r];
        for (std::int64_t p = rp[r]; p < rp[r + 1]; ++p) {
            const int c = col[p];
            const double v = val[p];
            acc += v * x[c];
            if (c != r) y[c] += v * xr;  // mirrored upper-triangle contribution
        }
        y[r] += acc;
    }
    return y;
}

DenseBlock spmv_block(const SparseSym& a, const DenseBlock& x) {
    if (x.rows() != a.rows()) throw std::invalid_argument("spmv_block: dimension mismatch");
    DenseBlock y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) y.col(j) = spmv(a, x.col(j));
    return y;
}

DenseBlock to_dense(const SparseSym& a) {
    DenseBlock d = DenseBlock::Zero(a.rows(), a.rows());
    for (int r = 0; r < a.rows(); ++r) {
        for (std::int64_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
            d(r, a.col()[p]) = a.val()[p];
            d(a.col()[p], r) = a.val()[p];
        }
    }
    return d;
}

SparseSym from_dense(const DenseBlock& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("from_dense: matrix must be square");
    const int n = static_cast<int>(a.rows());
    std::vector<std::int64_t> rp(n + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c <= r; ++c) {
            if (a(r, c) != 0.0) {
                col.push_back(c);
                val.push_back(a(r, c));
                rp[r + 1]++;
            }
        }
    }
    for (int r = 0; r < n; ++r) rp[r + 1] += rp[r];
    return SparseSym(n, std::move(rp), std::move(col), std::move(val));
}

OrthoResult project_orthonormalize(const DenseBlock& w, const DenseBlock& q, double drop_tol) {
    const Eigen::Index n = w.rows();
    if (q.cols() > 0 && q.rows() != n)
        throw std::invalid_argument("project_orthonormalize: dimension mismatch");
    DenseBlock out(n, w.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
        Vector v = w.col(j);
        const double ref = v.norm();
        if (ref == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            if (q.cols() > 0) v -= q * (q.transpose() * v);
            if (kept > 0) {
                auto qk = out.leftCols(kept);
                v -= qk * (qk.transpose() * v);
            }
        }
        const double nrm = v.norm();
        if (nrm < drop_tol * ref) continue;
        out.col(kept) = v / nrm;
        ++kept;
    }
    out.conservativeResize(n, kept);
    return {std::move(out), static_cast<int>(kept)};
}

OrthoResult orthonormalize(const DenseBlock& x, double drop_tol) {
    return project_orthonormalize(x, DenseBlock(x.rows(), 0), drop_tol);
}

EigResult sym_eig_small(const DenseBlock& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("sym_eig_small: matrix must be square");
    Eigen::SelfAdjointEigenSolver<DenseBlock> es(0.5 * (h + h.transpose()));
    if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig_small: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

SpdFactor::SpdFactor(const SparseSym& a, double zeta) : n_(a.rows()), dense_(a.rows() <= kDenseThreshold) {
    if (dense_) {
        DenseBlock d = to_dense(a);
        for (int i = 0; i < n_; ++i) d(i, i) -= zeta;
        llt_.compute(d);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("SpdFactor: matrix is not positive definite");
    } else {
        std::vector<Eigen::Triplet<double>> ts;
        ts.reserve(2 * a.nnz_lower() + n_);
        for (int r = 0; r < n_; ++r) {
            bool has_diag = false;
            for (std::int64_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
                const int c = a.col()[p];
                double v = a.val()[p];
                if (c == r) {
                    v -= zeta;
                    has_diag = true;
                }
                ts.emplace_back(r, c, v);
                if (c != r) ts.emplace_back(c, r, v);
            }
            if (!has_diag) ts.emplace_back(r, r, -zeta);
        }
        Eigen::SparseMatrix<double> s(n_, n_);
        s.setFromTriplets(ts.begin(), ts.end());
        sllt_.compute(s);
        if (sllt_.info() != Eigen::Success)
            throw std::runtime_error("SpdFactor: matrix is not positive definite");
    }
}

DenseBlock SpdFactor::solve(const DenseBlock& b) const {
    if (b.rows() != n_) throw std::invalid_argument("SpdFactor::solve: dimension mismatch");
    return dense_ ? DenseBlock(llt_.solve(b)) : DenseBlock(sllt_.solve(b));
}

DenseBlock cg_solve(const LinOp& apply, const DenseBlock& b, int iters) {
    if (iters < 1) throw std::invalid_argument("cg_solve: iters must be positive");
    DenseBlock x = DenseBlock::Zero(b.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        Vector r = b.col(j);
        const double bnorm = r.norm();
        if (bnorm == 0.0) continue;
        Vector xj = Vector::Zero(b.rows());
        Vector p = r;
        double rs = r.squaredNorm();
        for (int it = 0; it < iters; ++it) {
            if (std::sqrt(rs) < 1e-14 * bnorm) break;
            Vector ap = apply(p);
            const double pap = p.dot(ap);
            if (pap <= 0.0) break;  // operator only positive semidefinite on a subspace
            const double alpha = rs / pap;
            xj += alpha * p;
            r -= alpha * ap;
            const double rs_new = r.squaredNorm();
            p = r + (rs_new / rs) * p;
            rs = rs_new;
        }
        x.col(j) = xj;
    }
    return x;
}

DenseBlock random_block(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    DenseBlock x(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) x(i, j) = dist(rng);
    return x;
}

double estimate_norm2(const SparseSym& a) {
    const double cached = a.cached_norm();
    if (cached >= 0.0) return cached;
    const int n = a.rows();
    if (n == 0) return 0.0;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    Vector v = random_block(n, 1, rng).col(0);
    double nrm = v.norm();
    if (nrm == 0.0) return 0.0;
    v /= nrm;
    for (int it = 0; it < 30; ++it) {
        Vector w = spmv(a, spmv(a, v));
        nrm = w.norm();
        if (nrm == 0.0) {
            a.set_cached_norm(0.0);
            return 0.0;
        }
        v = w / nrm;
    }
    const double est = spmv(a, v).norm();
    a.set_cached_norm(est);
    return est;
}

}  // namespace blockeig
