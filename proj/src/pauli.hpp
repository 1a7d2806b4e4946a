#pragma once

#include <Eigen/Dense>

namespace qcf::detail {

// sigma^0 = I, sigma^1..3 = x, y, z
inline const Eigen::Matrix2cd& pauli(int i) {
    using C = std::complex<double>;
    static const Eigen::Matrix2cd mats[4] = {
        (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, C(0, -1), C(0, 1), 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return mats[i];
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// In-place M <- (U on qubit q) M (U on qubit q)^dagger; qubit 0 is the most
// significant bit.
void conjugate_qubit(Eigen::MatrixXcd& m, int n_qubits, int q, const Eigen::Matrix2cd& u);

}  // namespace qcf::detail
