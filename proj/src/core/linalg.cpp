#include "qdc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdc/error.hpp"

namespace qdc {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                        " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
    if (data_.size() != dim * dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(dim * dim) + " entries, got " +
                        std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z *= factor;
    return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "multiply");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t k = 0; k < na; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < nb; ++j)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + j, k * nb + l) = aik * b(j, l);
        }
    return out;
}

Fidelity fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "fidelity");
    // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
    Complex tr{};
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) tr += std::conj(ea[i]) * eb[i];
    return Fidelity{std::abs(tr) / static_cast<double>(a.dim())};
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += std::conj(m(k, i)) * m(k, j);
            if (i == j) acc -= 1.0;
            if (!(std::abs(acc) <= tol)) return false;
        }
    }
    return true;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double worst = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
    return worst;
}

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "phase_aligned_distance");
    Complex tr{};
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) tr += std::conj(eb[i]) * ea[i];
    const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex{1.0};
    return max_abs_diff(a, b.scaled(phase));
}

Complex trace(const ComplexMatrix& m) {
    Complex t{};
    for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

Complex determinant(const ComplexMatrix& m) {
    // Gaussian elimination with partial pivoting.
    ComplexMatrix w = m;
    const std::size_t n = w.dim();
    Complex det{1.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(w(r, col)) > std::abs(w(pivot, col))) pivot = r;
        if (std::abs(w(pivot, col)) == 0.0) return Complex{};
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(w(pivot, c), w(col, c));
            det = -det;
        }
        det *= w(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = w(r, col) / w(col, col);
            for (std::size_t c = col; c < n; ++c) w(r, c) -= f * w(col, c);
        }
    }
    return det;
}

ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Columns as vectors, modified Gram-Schmidt.
    std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
    for (auto& c : cols)
        for (auto& z : c) z = Complex(gauss(rng), gauss(rng));
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            Complex proj{};
            for (std::size_t i = 0; i < dim; ++i) proj += std::conj(cols[k][i]) * cols[j][i];
            for (std::size_t i = 0; i < dim; ++i) cols[j][i] -= proj * cols[k][i];
        }
        double norm = 0.0;
        for (const auto& z : cols[j]) norm += std::norm(z);
        norm = std::sqrt(norm);
        for (auto& z : cols[j]) z /= norm;
    }
    ComplexMatrix u(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) u(i, j) = cols[j][i];
    return u;
}

}  // namespace qdc
