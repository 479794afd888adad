/*
 * Copyright 2026 The CoPhIK Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Dense brute-force reference implementations used as test oracles. Nothing
// here calls into the library: matrices are std::vector based, inverses and
// determinants come from long-double Gauss-Jordan elimination with partial
// pivoting, and statistics are explicit loops.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Real = long double;
using Vec = std::vector<Real>;
using Mat = std::vector<Vec>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0L)); }

inline Mat identity(std::size_t n) {
    Mat m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0L;
    return m;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.size(), 0.0L);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline Real dot(const Vec& a, const Vec& b) {
    Real s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// Gauss-Jordan inverse; `det` receives the determinant.
inline Mat inverse(Mat a, Real* det = nullptr) {
    const std::size_t n = a.size();
    Mat inv = identity(n);
    Real d = 1.0L;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0L) throw std::runtime_error("oracle: singular matrix");
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            d = -d;
        }
        const Real p = a[col][col];
        d *= p;
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Real f = a[r][col];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    if (det) *det = d;
    return inv;
}

inline Real determinant(const Mat& a) {
    Real d = 0.0L;
    inverse(a, &d);
    return d;
}

/// sigma2 * exp(-1/2 sum ((x_i - y_i)/l_i)^2)
inline Real gaussian(Real sigma2, const Vec& lengths, const Vec& x, const Vec& y) {
    Real s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Real t = (x[i] - y[i]) / lengths[i];
        s += t * t;
    }
    return sigma2 * std::exp(-0.5L * s);
}

struct Posterior {
    Real mean;
    Real variance;
};

/// mu* + c^T C^{-1}(y - mu), var* - c^T C^{-1} c, with an explicit inverse.
inline Posterior posterior(Real mu_star, Real var_star, const Vec& mu, const Mat& c_mat, const Vec& c_vec,
                           const Vec& y) {
    const Mat inv = inverse(c_mat);
    const Vec w = matvec(inv, sub(y, mu));
    const Vec v = matvec(inv, c_vec);
    return {mu_star + dot(c_vec, w), var_star - dot(c_vec, v)};
}

/// -1/2 r^T C^{-1} r - 1/2 ln|C| - n/2 ln 2pi
inline Real log_likelihood(const Vec& y, const Vec& mu, const Mat& c) {
    Real det = 0.0L;
    const Mat inv = inverse(c, &det);
    const Vec r = sub(y, mu);
    const Real n = static_cast<Real>(y.size());
    return -0.5L * dot(r, matvec(inv, r)) - 0.5L * std::log(det) - 0.5L * n * std::log(2.0L * 3.14159265358979323846264338L);
}

/// members[m][node]
using Members = std::vector<Vec>;

inline Real ens_mean(const Members& y, std::size_t i) {
    Real s = 0.0L;
    for (const auto& m : y) s += m[i];
    return s / static_cast<Real>(y.size());
}

/// 1/(M-1) sample covariance by explicit double loop over members.
inline Real ens_cov(const Members& y, std::size_t i, std::size_t j) {
    const Real mi = ens_mean(y, i), mj = ens_mean(y, j);
    Real s = 0.0L;
    for (const auto& m : y) s += (m[i] - mi) * (m[j] - mj);
    return s / static_cast<Real>(y.size() - 1);
}

inline Mat ens_cov_matrix(const Members& y, const std::vector<std::size_t>& nodes) {
    Mat c = zeros(nodes.size(), nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b) c[a][b] = ens_cov(y, nodes[a], nodes[b]);
    return c;
}

/// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
inline Real spectral_radius(const Mat& a, int iterations = 20000) {
    Vec v(a.size(), 1.0L);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.1L * static_cast<Real>(i);
    Real lambda = 0.0L;
    for (int it = 0; it < iterations; ++it) {
        Vec w = matvec(a, v);
        const Real n = std::sqrt(dot(w, w));
        lambda = n / std::sqrt(dot(v, v));
        for (auto& x : w) x /= n;
        v = w;
    }
    return lambda;
}

/// Relative Frobenius error by explicit loop.
inline Real relative_error(const Vec& fr, const Vec& f) {
    Real num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += (fr[i] - f[i]) * (fr[i] - f[i]);
        den += f[i] * f[i];
    }
    return std::sqrt(num / den);
}

}  // namespace oracle
