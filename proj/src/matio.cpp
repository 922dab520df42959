#include "matio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace blockeig {

SparseSym::SparseSym() : n_(0), row_ptr_(1, 0), norm_cache_(std::make_shared<std::atomic<double>>(-1.0)) {}

SparseSym::SparseSym(int n, std::vector<std::int64_t> row_ptr, std::vector<int> col,
                     std::vector<double> val)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_(std::move(col)),
      val_(std::move(val)),
      norm_cache_(std::make_shared<std::atomic<double>>(-1.0)) {
    if (n_ < 0 || row_ptr_.size() != static_cast<size_t>(n_) + 1 ||
        col_.size() != val_.size() || row_ptr_.back() != static_cast<std::int64_t>(val_.size()))
        throw std::invalid_argument("SparseSym: inconsistent CSR arrays");
    for (int r = 0; r < n_; ++r) {
        int prev = -1;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            if (col_[p] < 0 || col_[p] > r || col_[p] <= prev)
                throw std::invalid_argument("SparseSym: columns must be strictly increasing and <= row");
            prev = col_[p];
        }
    }
}

double SparseSym::diagonal(int i) const {
    for (std::int64_t p = row_ptr_[i + 1] - 1; p >= row_ptr_[i]; --p) {
        if (col_[p] == i) return val_[p];
        if (col_[p] < i) break;
    }
    return 0.0;
}

double SparseSym::cached_norm() const { return norm_cache_->load(std::memory_order_relaxed); }
void SparseSym::set_cached_norm(double v) const { norm_cache_->store(v, std::memory_order_relaxed); }

namespace {

struct Triplet {
    int r, c;
    double v;
};

SparseSym from_triplets(int n, std::vector<Triplet>& ts) {
    std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.r, a.c) < std::tie(b.r, b.c);
    });
    std::vector<std::int64_t> rp(n + 1, 0);
    std::vector<int> col(ts.size());
    std::vector<double> val(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        rp[ts[i].r + 1]++;
        col[i] = ts[i].c;
        val[i] = ts[i].v;
    }
    for (int r = 0; r < n; ++r) rp[r + 1] += rp[r];
    return SparseSym(n, std::move(rp), std::move(col), std::move(val));
}

bool next_content_line(std::istream& in, std::string& line, long& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        size_t i = line.find_first_not_of(" \t\r\n");
        if (i == std::string::npos) continue;
        if (line[i] == '%') continue;
        return true;
    }
    return false;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

SparseSym parse_matrix_market(std::istream& in) {
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    std::istringstream hs(line);
    std::string banner, object, format, field, kind;
    hs >> banner >> object >> format >> field >> kind;
    if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
    if (lower(object) != "matrix" || lower(format) != "coordinate")
        throw ParseError("only 'matrix coordinate' inputs are supported", lineno);
    field = lower(field);
    kind = lower(kind);
    if (field != "real" && field != "integer")
        throw ParseError("unsupported field '" + field + "' (need real or integer)", lineno);
    if (kind != "symmetric" && kind != "general")
        throw ParseError("unsupported symmetry '" + kind + "' (need symmetric or general)", lineno);
    const bool general = kind == "general";

    if (!next_content_line(in, line, lineno)) throw ParseError("missing size line", lineno + 1);
    long rows, cols, nnz;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> nnz)) throw ParseError("malformed size line", lineno);
        std::string rest;
        if (ss >> rest) throw ParseError("trailing tokens on size line", lineno);
    }
    if (rows != cols) throw ParseError("matrix is not square", lineno);
    if (rows < 0 || nnz < 0) throw ParseError("negative dimensions", lineno);
    const int n = static_cast<int>(rows);

    // key = (row, col) normalized to lower triangle; for general inputs track
    // both triangle values so symmetry can be checked entry by entry.
    struct Slot {
        double lo = 0, up = 0;
        bool has_lo = false, has_up = false;
        long line_lo = 0, line_up = 0;
    };
    std::map<std::pair<int, int>, Slot> slots;
    for (long e = 0; e < nnz; ++e) {
        if (!next_content_line(in, line, lineno))
            throw ParseError("unexpected end of input, expected " + std::to_string(nnz) +
                                 " entries, got " + std::to_string(e),
                             lineno + 1);
        std::istringstream ss(line);
        long i, j;
        double v;
        if (!(ss >> i >> j >> v)) throw ParseError("malformed entry (need 'i j value')", lineno);
        std::string rest;
        if (ss >> rest) throw ParseError("trailing tokens on entry line", lineno);
        if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of range", lineno);
        if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
        const bool is_lower = i >= j;
        if (!general && !is_lower) throw ParseError("symmetric input must store the lower triangle", lineno);
        auto key = is_lower ? std::make_pair(static_cast<int>(i - 1), static_cast<int>(j - 1))
                            : std::make_pair(static_cast<int>(j - 1), static_cast<int>(i - 1));
        Slot& s = slots[key];
        if (is_lower) {
            if (s.has_lo) throw ParseError("duplicate entry", lineno);
            s.lo = v;
            s.has_lo = true;
            s.line_lo = lineno;
        } else {
            if (s.has_up) throw ParseError("duplicate entry", lineno);
            s.up = v;
            s.has_up = true;
            s.line_up = lineno;
        }
    }

    std::vector<Triplet> ts;
    ts.reserve(slots.size());
    for (const auto& [key, s] : slots) {
        double v;
        if (key.first == key.second) {
            v = s.lo;
        } else if (general) {
            if (!s.has_lo || !s.has_up)
                throw ParseError("general input is not symmetric: entry (" +
                                     std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                                     ") lacks its mirror",
                                 s.has_lo ? s.line_lo : s.line_up);
            const double scale = std::max({std::fabs(s.lo), std::fabs(s.up), 1e-300});
            if (std::fabs(s.lo - s.up) > 1e-12 * scale)
                throw ParseError("general input is not symmetric: entry (" +
                                     std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                                     ") mismatches its mirror",
                                 s.line_up);
            v = s.lo;
        } else {
            v = s.lo;
        }
        ts.push_back({key.first, key.second, v});
    }
    return from_triplets(n, ts);
}

SparseSym parse_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_matrix_market(in);
}

SparseSym parse_matrix_market_string(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix_market(in);
}

void write_matrix_market(const SparseSym& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << a.rows() << " " << a.rows() << " " << a.nnz_lower() << "\n";
    char buf[64];
    for (int r = 0; r < a.rows(); ++r) {
        for (std::int64_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, a.col()[p] + 1, a.val()[p]);
            out << buf;
        }
    }
}

void write_matrix_market_file(const SparseSym& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_matrix_market(a, out);
    if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

SparseSym gen_diag(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<std::int64_t> rp(n + 1);
    std::vector<int> col(n);
    std::vector<double> val = values;
    for (int i = 0; i <= n; ++i) rp[i] = i;
    for (int i = 0; i < n; ++i) col[i] = i;
    return SparseSym(n, std::move(rp), std::move(col), std::move(val));
}

SparseSym gen_diag_geometric(int n, double ratio) {
    if (n < 1) throw std::invalid_argument("gen_diag_geometric: n must be positive");
    if (!(ratio > 0)) throw std::invalid_argument("gen_diag_geometric: ratio must be positive");
    std::vector<double> v(n);
    double x = 1.0;
    for (int i = 0; i < n; ++i, x *= ratio) v[i] = x;
    return gen_diag(v);
}

SparseSym gen_laplacian_1d(int n) {
    if (n < 1) throw std::invalid_argument("gen_laplacian_1d: n must be positive");
    std::vector<Triplet> ts;
    ts.reserve(2 * n - 1);
    for (int i = 0; i < n; ++i) {
        if (i > 0) ts.push_back({i, i - 1, -1.0});
        ts.push_back({i, i, 2.0});
    }
    return from_triplets(n, ts);
}

SparseSym gen_from_spec(const std::string& spec) {
    const size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("generator spec needs 'name:args', got '" + spec + "'");
    const std::string name = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    auto parse_int = [&](const std::string& s) {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "' in spec");
        return v;
    };
    auto parse_double = [&](const std::string& s) {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "' in spec");
        return v;
    };
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    if (name == "laplacian1d") return gen_laplacian_1d(parse_int(args));
    if (name == "diag") {
        std::vector<double> vals;
        for (const auto& tok : split(args)) vals.push_back(parse_double(tok));
        return gen_diag(vals);
    }
    if (name == "diag-geom") {
        auto parts = split(args);
        if (parts.size() != 2) throw std::invalid_argument("diag-geom needs 'diag-geom:n,ratio'");
        return gen_diag_geometric(parse_int(parts[0]), parse_double(parts[1]));
    }
    throw std::invalid_argument("unknown generator '" + name + "'");
}

double spd_shift_value(double lambda1) { return lambda1 <= 0.0 ? 1.05 * lambda1 : 0.0; }

SparseSym apply_spd_shift(const SparseSym& a, double lambda1) {
    const double shift = spd_shift_value(lambda1);
    if (shift == 0.0) return a;
    // subtract shift from the diagonal, inserting missing diagonal entries
    std::vector<Triplet> ts;
    ts.reserve(a.nnz_lower() + a.rows());
    for (int r = 0; r < a.rows(); ++r) {
        bool has_diag = false;
        for (std::int64_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
            double v = a.val()[p];
            if (a.col()[p] == r) {
                v -= shift;
                has_diag = true;
            }
            ts.push_back({r, a.col()[p], v});
        }
        if (!has_diag) ts.push_back({r, r, -shift});
    }
    return from_triplets(a.rows(), ts);
}

}  // namespace blockeig
