#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <random>

#include "matio.hpp"

namespace blockeig {

// Column-major dense block of vectors.
using DenseBlock = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDropTolDefault = 1e-8;

// Y = A * X with a fixed accumulation order, so repeated runs are
// bit-identical.
DenseBlock spmv_block(const SparseSym& a, const DenseBlock& x);
Vector spmv(const SparseSym& a, const Vector& x);

DenseBlock to_dense(const SparseSym& a);
SparseSym from_dense(const DenseBlock& a);  // symmetric input, zeros dropped

struct OrthoResult {
    DenseBlock q;  // orthonormal columns
    int kept;      // columns surviving the drop tolerance
};

// Classical Gram-Schmidt applied twice, left to right. A column whose norm
// falls below drop_tol times its pre-projection norm is dropped.
OrthoResult orthonormalize(const DenseBlock& x, double drop_tol = kDropTolDefault);

// Orthonormalizes w against an external orthonormal block q first (two
// projection passes), then internally.
OrthoResult project_orthonormalize(const DenseBlock& w, const DenseBlock& q,
                                   double drop_tol = kDropTolDefault);

struct EigResult {
    Vector values;       // ascending algebraic order
    DenseBlock vectors;  // orthonormal columns
};

// Dense symmetric eigendecomposition for projected problems.
EigResult sym_eig_small(const DenseBlock& h);

// Cholesky factorization of A - zeta*I, dense below kDenseThreshold rows,
// sparse (fill-reducing AMD ordering) above. Throws if not positive definite.
class SpdFactor {
public:
    static constexpr int kDenseThreshold = 2000;

    SpdFactor(const SparseSym& a, double zeta);

    DenseBlock solve(const DenseBlock& b) const;
    int rows() const { return n_; }

private:
    int n_;
    bool dense_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> sllt_;
};

using LinOp = std::function<Vector(const Vector&)>;

// Unpreconditioned CG, x0 = 0, run column by column for exactly `iters` steps
// unless the residual drops below 1e-14 times the right-hand side norm.
DenseBlock cg_solve(const LinOp& apply, const DenseBlock& b, int iters);

// 30 power iterations on A^2 from a fixed seeded start; cached per matrix.
double estimate_norm2(const SparseSym& a);

// Seeded standard-normal block, filled column-major.
DenseBlock random_block(int rows, int cols, std::mt19937_64& rng);

}  // namespace blockeig
