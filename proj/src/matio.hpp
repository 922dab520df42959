#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockeig {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sparse symmetric matrix. Only the lower triangle (including the diagonal)
// is stored, in CSR with strictly increasing column indices per row.
// Instances are immutable after construction and safe to share across threads.
class SparseSym {
public:
    SparseSym();
    SparseSym(int n, std::vector<std::int64_t> row_ptr, std::vector<int> col,
              std::vector<double> val);

    int rows() const { return n_; }
    std::int64_t nnz_lower() const { return static_cast<std::int64_t>(val_.size()); }
    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col() const { return col_; }
    const std::vector<double>& val() const { return val_; }

    // Diagonal entry, 0 if not stored.
    double diagonal(int i) const;

    // Cache slot for estimate_norm2; negative means unset.
    double cached_norm() const;
    void set_cached_norm(double v) const;

private:
    int n_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
    std::shared_ptr<std::atomic<double>> norm_cache_;  // shared across copies
};

// Matrix Market coordinate parser. Accepts real/integer entries, symmetric or
// general kind; a general matrix must be numerically symmetric (entries match
// their mirror within 1e-12 relative). Throws ParseError with the offending
// line number otherwise.
SparseSym parse_matrix_market(std::istream& in);
SparseSym parse_matrix_market_file(const std::string& path);
SparseSym parse_matrix_market_string(const std::string& text);

// Writes coordinate format, symmetric kind, lower triangle.
void write_matrix_market(const SparseSym& a, std::ostream& out);
void write_matrix_market_file(const SparseSym& a, const std::string& path);

SparseSym gen_diag(const std::vector<double>& values);
SparseSym gen_diag_geometric(int n, double ratio);  // diag(ratio^0 .. ratio^(n-1))
SparseSym gen_laplacian_1d(int n);                  // tridiag(-1, 2, -1)

// Generator spec strings: "laplacian1d:N", "diag:v1,v2,...", "diag-geom:N,RATIO".
SparseSym gen_from_spec(const std::string& spec);

// Spectrum shift making an indefinite/semidefinite matrix positive definite:
// returns A - 1.05*lambda1*I when lambda1 <= 0, a plain copy otherwise.
SparseSym apply_spd_shift(const SparseSym& a, double lambda1);
double spd_shift_value(double lambda1);

}  // namespace blockeig
