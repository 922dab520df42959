#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

Dense dense_zero(int n) {
    Dense m;
    m.n = n;
    m.a.assign(static_cast<size_t>(n) * n, 0.0);
    return m;
}

void jacobi_eig(const Dense& m, std::vector<double>& values,
                std::vector<std::vector<double>>& vectors) {
    const int n = m.n;
    Dense a = m;
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a.at(p, i), aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a.at(x, x) < a.at(y, y); });
    values.resize(n);
    vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        values[k] = a.at(order[k], order[k]);
        for (int i = 0; i < n; ++i) vectors[k][i] = v[i][order[k]];
    }
}

double laplacian_eigenvalue(int n, int k) {
    return 2.0 - 2.0 * std::cos(k * 3.14159265358979323846 / (n + 1));
}

std::vector<double> tridiag_solve(double d, double e, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    std::vector<double> c(n, 0.0);
    double denom = d;
    if (denom == 0) throw std::runtime_error("tridiag_solve: zero pivot");
    c[0] = e / denom;
    b[0] /= denom;
    for (int i = 1; i < n; ++i) {
        denom = d - e * c[i - 1];
        if (denom == 0) throw std::runtime_error("tridiag_solve: zero pivot");
        c[i] = e / denom;
        b[i] = (b[i] - e * b[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 0; --i) b[i] -= c[i] * b[i + 1];
    return b;
}

std::vector<double> dense_mul(const Dense& m, const std::vector<double>& x) {
    std::vector<double> y(static_cast<size_t>(m.n), 0.0);
    for (int i = 0; i < m.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m.n; ++j) acc += m.at(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

double tan_principal(const std::vector<double>& vk, const std::vector<double>& x, int n, int k) {
    // Gram matrix of M = Vk^T X; its smallest eigenvalue is cos^2 of the
    // largest principal angle.
    std::vector<double> m(static_cast<size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < k; ++c) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r)
                acc += vk[static_cast<size_t>(i) * n + r] * x[static_cast<size_t>(c) * n + r];
            m[static_cast<size_t>(i) * k + c] = acc;
        }
    Dense g = dense_zero(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int c = 0; c < k; ++c)
                acc += m[static_cast<size_t>(c) * k + i] * m[static_cast<size_t>(c) * k + j];
            g.at(i, j) = acc;
        }
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    jacobi_eig(g, values, vectors);
    const double c2 = std::max(values[0], 0.0);
    if (c2 <= 0) throw std::runtime_error("tan_principal: subspaces orthogonal somewhere");
    return std::sqrt(std::max(1.0 - c2, 0.0) / c2);
}

}  // namespace oracle
