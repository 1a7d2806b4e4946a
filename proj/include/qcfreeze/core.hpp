#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcfreeze/errors.hpp"

namespace qcf {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kEigenTolerance = 1e-12;
inline constexpr int kMaxQubits = 10;

// Two-qubit state in Pauli-correlator form. Index 1,2,3 = x,y,z; qubit A is
// the first (most significant) qubit. Off-diagonal two-point correlators are
// zero for every family handled here.
struct CorrelatorState {
    double c11 = 0, c22 = 0, c33 = 0;
    double c10 = 0, c20 = 0, c30 = 0;
    double c01 = 0, c02 = 0, c03 = 0;

    double corr(int axis) const;
    double mag_a(int axis) const;
    double mag_b(int axis) const;
    void set_corr(int axis, double v);
    void set_mag_a(int axis, double v);
    void set_mag_b(int axis, double v);

    bool operator==(const CorrelatorState&) const = default;
};

CorrelatorState canonical_state(double c11, double c22, double c33, double c10, double c01);
CorrelatorState bell_diagonal(double c11, double c22, double c33);

class DensityMatrix {
public:
    // Validates shape (2^n square, n <= kMaxQubits), hermiticity and unit trace.
    // Positivity is not enforced; use is_physical.
    explicit DensityMatrix(CMat m);

    static DensityMatrix maximally_mixed(int n_qubits);
    static DensityMatrix pure(const CVec& psi);

    int n_qubits() const { return n_; }
    Eigen::Index dim() const { return m_.rows(); }
    const CMat& matrix() const { return m_; }
    Eigen::VectorXd eigenvalues() const;

private:
    CMat m_;
    int n_ = 0;
};

struct PhysicalityCheck {
    bool physical = false;
    double min_eigenvalue = 0.0;
};

PhysicalityCheck is_physical(const DensityMatrix& rho);
PhysicalityCheck is_physical(const CorrelatorState& s);

DensityMatrix to_density(const CorrelatorState& s);

struct CorrelatorExtraction {
    CorrelatorState state;
    // sum of squares of the off-diagonal two-point correlators c_ab, a != b
    double residual_weight = 0.0;
    bool residual_warning = false;
};
CorrelatorExtraction from_density(const DensityMatrix& rho);

// Closed-form spectrum of a canonical state (c20 = c02 = c30 = c03 = 0), in
// the order (1+c11 -+ r+, 1-c11 -+ r-)/4.
std::array<double, 4> canonical_eigenvalues(const CorrelatorState& s);

// 2n-qubit state (1/4^n)[I + c1 X..X + c2 Y..Y + c3 Z..Z].
class DiagonalState {
public:
    DiagonalState(int n, double c1, double c2, double c3);

    int n() const { return n_; }
    int n_qubits() const { return 2 * n_; }
    double c1() const { return c_[0]; }
    double c2() const { return c_[1]; }
    double c3() const { return c_[2]; }
    double c(int axis) const { return c_[axis - 1]; }

    // Distinct eigenvalues, each repeated 2^(2n-2) times.
    std::array<double, 4> eigenvalue_families() const;
    double entropy() const;
    DensityMatrix to_density() const;

private:
    int n_;
    std::array<double, 3> c_;
};

// |0> -> a|00> + b|11>, |1> -> a|11> + b|00> applied to the last qubit,
// with b = sqrt(1 - a^2).
DensityMatrix encode_last_qubit(const DensityMatrix& rho, double alpha);

// n_qubits = 2: alphas = {alpha}. n_qubits >= 3: either n-2 encoding alphas
// (base alpha = 1) or n-1 values whose first entry is the base alpha.
DensityMatrix sweeping_state(int n_qubits, double x, std::span<const double> alphas);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced);
DensityMatrix trace_out_first(const DensityMatrix& rho);
DensityMatrix first_qubit_marginal(const DensityMatrix& rho);

double binary_entropy(double p);
double freezing_entropy(double y);
// Shannon entropy (bits) of a spectrum; entries clipped at 1e-15 from below.
double spectrum_entropy(const Eigen::VectorXd& lambda);
double entropy(const DensityMatrix& rho);
double concurrence(const DensityMatrix& rho);

}  // namespace qcf
