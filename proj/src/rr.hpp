#pragma once

#include "kernel.hpp"

namespace blockeig {

struct RitzSet {
    Vector values;       // ascending
    DenseBlock vectors;  // n x m, orthonormal
    DenseBlock coeffs;   // m x m eigenvector matrix of the projected problem
};

// Projects A onto the orthonormal basis s and solves the small eigenproblem.
RitzSet rayleigh_ritz(const SparseSym& a, const DenseBlock& s);

// R = A*V - V*diag(values).
DenseBlock residual_block(const SparseSym& a, const RitzSet& ritz);

struct ResidualReport {
    std::vector<double> per_pair;  // ||r_i|| / (||A|| ||v_i|| + ||v_i|| |lambda_i|)
    double overall;                // max over the first n_ev pairs
    int converged_count;           // leading pairs meeting tol, contiguous prefix
};

ResidualReport assess_convergence(const SparseSym& a, const RitzSet& ritz, const DenseBlock& r,
                                  int n_ev, double tol);

}  // namespace blockeig
