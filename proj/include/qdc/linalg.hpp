#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace qdc {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
///
/// Every unitary in the compiler (targets, gate matrices, ansatz products)
/// is carried by this type. Dimensions stay small (two qudits, D <= 64), so
/// no attempt is made at blocking or vectorisation beyond a cache-friendly
/// loop order in multiply().
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    /// Zero matrix of the given dimension; dim must be >= 1.
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const Complex> diag);

    std::size_t dim() const noexcept { return dim_; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix scaled(Complex factor) const;

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Fidelity between two unitaries, |Tr(A^dagger B)| / D.
struct Fidelity {
    double value = 0.0;
    double infidelity() const noexcept { return 1.0 - value; }
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Fidelity fidelity(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_unitary(const ComplexMatrix& m, double tol);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Max-norm distance after removing the best global phase of b relative to a.
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b);

Complex trace(const ComplexMatrix& m);
Complex determinant(const ComplexMatrix& m);

/// Haar-distributed unitary: Q factor (positive R diagonal) of a complex
/// Ginibre matrix.
ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& rng);

}  // namespace qdc
