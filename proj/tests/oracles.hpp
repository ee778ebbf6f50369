// Brute-force reference constructions used by the tests. Nothing here calls
// into the library's gate builders: matrices come from basis-state loops and
// a Taylor-series matrix exponential of the defining generators.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qdc/linalg.hpp"

namespace oracle {

using qdc::Complex;
using qdc::ComplexMatrix;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

inline ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n); }

inline ComplexMatrix eye(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

inline ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.dim();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b, Complex scale_b = 1.0) {
    ComplexMatrix c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + scale_b * b(i, j);
    return c;
}

inline ComplexMatrix scale(const ComplexMatrix& a, Complex s) { return add(zeros(a.dim()), a, s); }

inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

/// Kronecker product straight from the index definition.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix c(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t k = 0; k < na; ++k)
            for (std::size_t j = 0; j < nb; ++j)
                for (std::size_t l = 0; l < nb; ++l) c(i * nb + j, k * nb + l) = a(i, k) * b(j, l);
    return c;
}

/// exp(M) by scaling and squaring of a 40-term Taylor series.
inline ComplexMatrix expm(const ComplexMatrix& m) {
    double norm = 0.0;
    for (const auto& v : m.entries()) norm = std::max(norm, std::abs(v));
    int squarings = 0;
    while (norm * static_cast<double>(m.dim()) > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    const ComplexMatrix a = scale(m, std::pow(0.5, squarings));
    ComplexMatrix result = eye(m.dim());
    ComplexMatrix term = eye(m.dim());
    for (int k = 1; k <= 40; ++k) {
        term = scale(mul(term, a), 1.0 / k);
        result = add(result, term);
    }
    for (int s = 0; s < squarings; ++s) result = mul(result, result);
    return result;
}

/// Two-level operator on an n-dim space acting as the 2x2 block on (a, b).
inline ComplexMatrix embed(std::size_t n, std::size_t a, std::size_t b, const ComplexMatrix& block) {
    ComplexMatrix m = eye(n);
    m(a, a) = block(0, 0);
    m(a, b) = block(0, 1);
    m(b, a) = block(1, 0);
    m(b, b) = block(1, 1);
    return m;
}

inline ComplexMatrix sigma_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix sigma_y() { return ComplexMatrix(2, {0.0, -kI, kI, 0.0}); }
inline ComplexMatrix sigma_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

/// exp(-i theta/2 (cos phi sx + sin phi sy)).
inline ComplexMatrix rot(double theta, double phi) {
    const ComplexMatrix gen = add(scale(sigma_x(), std::cos(phi)), sigma_y(), std::sin(phi));
    return expm(scale(gen, -kI * theta / 2.0));
}

/// exp(-i theta/2 sz) = diag(e^{-i theta/2}, e^{i theta/2}).
inline ComplexMatrix zrot(double theta) { return expm(scale(sigma_z(), -kI * theta / 2.0)); }

inline ComplexMatrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, {r, r, r, -r});
}

/// Single-qudit operator m on qudit q (1 or 2) of a d1 x d2 system.
inline ComplexMatrix on_qudit(int q, int d1, int d2, const ComplexMatrix& m) {
    return q == 1 ? oracle::kron(m, eye(d2)) : oracle::kron(eye(d1), m);
}

/// |i,j> -> |i, (i + j) mod d>.
inline ComplexMatrix csum(int d) {
    const auto n = static_cast<std::size_t>(d * d);
    ComplexMatrix m(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(d * i + (i + j) % d, d * i + j) = 1.0;
    return m;
}

/// |c,t1> <-> |c,t2> on a d1 x d2 system.
inline ComplexMatrix cex(int d1, int d2, int c, int t1, int t2) {
    const auto n = static_cast<std::size_t>(d1 * d2);
    ComplexMatrix m(n);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j) {
            int jj = j;
            if (i == c && j == t1) jj = t2;
            if (i == c && j == t2) jj = t1;
            m(d2 * i + jj, d2 * i + j) = 1.0;
        }
    return m;
}

/// exp(-i theta/4 (I + X01 (x) X01)) with X01 the embedded sigma_x.
inline ComplexMatrix ms(int d, double theta) {
    ComplexMatrix x = zeros(static_cast<std::size_t>(d));
    x(0, 1) = x(1, 0) = 1.0;
    const ComplexMatrix gen = add(eye(static_cast<std::size_t>(d * d)), oracle::kron(x, x));
    return expm(scale(gen, -kI * theta / 4.0));
}

/// exp(-i theta sum_i |ii><ii|).
inline ComplexMatrix ls(int d, double theta) {
    ComplexMatrix m = eye(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i) m(d * i + i, d * i + i) = std::exp(-kI * theta);
    return m;
}

/// Controlled rotation: R(theta, phi) on |c,t1>, |c,t2>.
inline ComplexMatrix crot(int d1, int d2, int c, int t1, int t2, double theta, double phi) {
    return embed(static_cast<std::size_t>(d1 * d2), d2 * c + t1, d2 * c + t2, rot(theta, phi));
}

/// Partial swap: R(theta, phi) between coupled-basis indices a and b.
inline ComplexMatrix pswap(int d1, int d2, int a, int b, double theta, double phi) {
    return embed(static_cast<std::size_t>(d1 * d2), a, b, rot(theta, phi));
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// |Tr(A^dagger B)| / D from the definition.
inline double fid(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) t += std::conj(a(k, i)) * b(k, i);
    return std::abs(t) / static_cast<double>(a.dim());
}

/// Max-norm distance after aligning b's global phase to a.
inline double phase_free_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) t += std::conj(b(k, i)) * a(k, i);
    const Complex ph = std::abs(t) > 0 ? t / std::abs(t) : Complex(1.0);
    return max_diff(a, scale(b, ph));
}

inline double unitarity_error(const ComplexMatrix& m) { return max_diff(mul(dagger(m), m), eye(m.dim())); }

/// Haar unitary: Gram-Schmidt on the columns of a complex Ginibre matrix.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
    for (auto& c : cols)
        for (auto& v : c) v = {g(rng), g(rng)};
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            Complex p = 0.0;
            for (std::size_t i = 0; i < n; ++i) p += std::conj(cols[j][i]) * cols[k][i];
            for (std::size_t i = 0; i < n; ++i) cols[k][i] -= p * cols[j][i];
        }
        double nrm = 0.0;
        for (auto& v : cols[k]) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        for (auto& v : cols[k]) v /= nrm;
    }
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cols[j][i];
    return m;
}

}  // namespace oracle
