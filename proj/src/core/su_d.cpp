#include "qdc/su_d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdc/error.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDropAngle = 1e-14;

void check_block(std::span<const double> block, int d) {
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "SU(d) needs d >= 2");
    if (static_cast<int>(block.size()) != su_param_count(d))
        throw Error(ErrorCode::InvalidArgument,
                    "SU(" + std::to_string(d) + ") block needs " + std::to_string(su_param_count(d)) +
                        " parameters, got " + std::to_string(block.size()));
}

// m <- m * exp(i Z_{a,b} lambda)
void right_phase(ComplexMatrix& m, int a, int b, double lambda) {
    const Complex pa = std::polar(1.0, lambda);
    const Complex pb = std::conj(pa);
    for (std::size_t r = 0; r < m.dim(); ++r) {
        m(r, a) *= pa;
        m(r, b) *= pb;
    }
}

// m <- m * exp(i Y_{a,b} lambda), exp(i Y lambda) = [[cos, sin], [-sin, cos]]
void right_rotation(ComplexMatrix& m, int a, int b, double lambda) {
    const double c = std::cos(lambda);
    const double s = std::sin(lambda);
    for (std::size_t r = 0; r < m.dim(); ++r) {
        const Complex x = m(r, a);
        const Complex y = m(r, b);
        m(r, a) = c * x - s * y;
        m(r, b) = s * x + c * y;
    }
}

}  // namespace

std::vector<ParamBound> su_bounds(int d) {
    std::vector<ParamBound> b;
    b.reserve(su_param_count(d));
    for (int m = 0; m < d - 1; ++m)
        for (int n = m + 1; n < d; ++n) {
            b.push_back({0.0, kPi});
            b.push_back({0.0, kPi / 2.0});
        }
    for (int l = 0; l < d - 1; ++l) b.push_back({0.0, 2.0 * kPi});
    return b;
}

ComplexMatrix local_su_d(std::span<const double> block, int d) {
    check_block(block, d);
    ComplexMatrix u = ComplexMatrix::identity(d);
    std::size_t k = 0;
    for (int m = 0; m < d - 1; ++m)
        for (int n = m + 1; n < d; ++n) {
            right_phase(u, m, n, block[k++]);
            right_rotation(u, m, n, block[k++]);
        }
    for (int l = 0; l < d - 1; ++l) right_phase(u, l, d - 1, block[k++]);
    return u;
}

std::vector<Gate> su_d_gates(std::span<const double> block, int d, int qudit) {
    check_block(block, d);
    // Factors in product order; applied in reverse.
    // exp(i Z lambda) = Z(-2 lambda), exp(i Y lambda) = R(2 lambda, -pi/2).
    std::vector<Gate> factors;
    std::size_t k = 0;
    for (int m = 0; m < d - 1; ++m)
        for (int n = m + 1; n < d; ++n) {
            const double phase = block[k++];
            const double rot = block[k++];
            if (std::abs(phase) > kDropAngle) factors.emplace_back(gates::PhaseZ{qudit, {m, n}, -2.0 * phase});
            if (std::abs(rot) > kDropAngle)
                factors.emplace_back(gates::LocalR{qudit, {m, n}, 2.0 * rot, -kPi / 2.0});
        }
    for (int l = 0; l < d - 1; ++l) {
        const double phase = block[k++];
        if (std::abs(phase) > kDropAngle)
            factors.emplace_back(gates::PhaseZ{qudit, {l, d - 1}, -2.0 * phase});
    }
    return {factors.rbegin(), factors.rend()};
}

}  // namespace qdc
