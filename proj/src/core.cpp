#include "qcfreeze/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "pauli.hpp"

namespace qcf {

namespace detail {

void conjugate_qubit(Eigen::MatrixXcd& m, int n_qubits, int q, const Eigen::Matrix2cd& u) {
    const Eigen::Index dim = m.rows();
    const Eigen::Index mask = Eigen::Index(1) << (n_qubits - 1 - q);
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index i0 = 0; i0 < dim; ++i0) {
            if (i0 & mask) continue;
            const Eigen::Index i1 = i0 | mask;
            const cplx a = m(i0, c), b = m(i1, c);
            m(i0, c) = u(0, 0) * a + u(0, 1) * b;
            m(i1, c) = u(1, 0) * a + u(1, 1) * b;
        }
    }
    const Eigen::Matrix2cd ud = u.adjoint();
    for (Eigen::Index j0 = 0; j0 < dim; ++j0) {
        if (j0 & mask) continue;
        const Eigen::Index j1 = j0 | mask;
        for (Eigen::Index r = 0; r < dim; ++r) {
            const cplx a = m(r, j0), b = m(r, j1);
            m(r, j0) = a * ud(0, 0) + b * ud(1, 0);
            m(r, j1) = a * ud(0, 1) + b * ud(1, 1);
        }
    }
}

}  // namespace detail

namespace {

void check_unit_range(double v, const char* name) {
    if (!(v >= -1.0 && v <= 1.0))
        throw DomainError(std::string(name) + " must lie in [-1, 1], got " + std::to_string(v));
}

void check_axis(int axis) {
    if (axis < 1 || axis > 3) throw DomainError("Pauli axis must be 1, 2 or 3");
}

int qubits_for_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    if ((Eigen::Index(1) << n) != dim || n == 0)
        throw SizeError("density matrix dimension must be a power of two, got " + std::to_string(dim));
    return n;
}

}  // namespace

double CorrelatorState::corr(int axis) const {
    check_axis(axis);
    return axis == 1 ? c11 : axis == 2 ? c22 : c33;
}
double CorrelatorState::mag_a(int axis) const {
    check_axis(axis);
    return axis == 1 ? c10 : axis == 2 ? c20 : c30;
}
double CorrelatorState::mag_b(int axis) const {
    check_axis(axis);
    return axis == 1 ? c01 : axis == 2 ? c02 : c03;
}
void CorrelatorState::set_corr(int axis, double v) {
    check_axis(axis);
    (axis == 1 ? c11 : axis == 2 ? c22 : c33) = v;
}
void CorrelatorState::set_mag_a(int axis, double v) {
    check_axis(axis);
    (axis == 1 ? c10 : axis == 2 ? c20 : c30) = v;
}
void CorrelatorState::set_mag_b(int axis, double v) {
    check_axis(axis);
    (axis == 1 ? c01 : axis == 2 ? c02 : c03) = v;
}

CorrelatorState canonical_state(double c11, double c22, double c33, double c10, double c01) {
    check_unit_range(c11, "c11");
    check_unit_range(c22, "c22");
    check_unit_range(c33, "c33");
    check_unit_range(c10, "c10");
    check_unit_range(c01, "c01");
    CorrelatorState s;
    s.c11 = c11;
    s.c22 = c22;
    s.c33 = c33;
    s.c10 = c10;
    s.c01 = c01;
    return s;
}

CorrelatorState bell_diagonal(double c11, double c22, double c33) {
    return canonical_state(c11, c22, c33, 0.0, 0.0);
}

DensityMatrix::DensityMatrix(CMat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw SizeError("density matrix must be square");
    n_ = qubits_for_dim(m_.rows());
    if (n_ > kMaxQubits) throw SizeError("at most 10 qubits supported in dense form");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kEigenTolerance)
        throw DomainError("density matrix is not Hermitian");
    if (std::abs(m_.trace() - cplx(1.0, 0.0)) > kEigenTolerance)
        throw DomainError("density matrix trace differs from 1");
    m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw SizeError("qubit count out of range");
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    return DensityMatrix(CMat::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::pure(const CVec& psi) {
    const double nrm = psi.norm();
    if (nrm == 0.0) throw DomainError("zero state vector");
    const CVec v = psi / nrm;
    return DensityMatrix(v * v.adjoint());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    return es.eigenvalues();
}

PhysicalityCheck is_physical(const DensityMatrix& rho) {
    const double mn = rho.eigenvalues().minCoeff();
    return {mn >= -kEigenTolerance, mn};
}

PhysicalityCheck is_physical(const CorrelatorState& s) { return is_physical(to_density(s)); }

DensityMatrix to_density(const CorrelatorState& s) {
    using detail::kron2;
    using detail::pauli;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    for (int a = 1; a <= 3; ++a) {
        m += s.corr(a) * kron2(pauli(a), pauli(a));
        m += s.mag_a(a) * kron2(pauli(a), pauli(0));
        m += s.mag_b(a) * kron2(pauli(0), pauli(a));
    }
    return DensityMatrix(CMat(m / 4.0));
}

CorrelatorExtraction from_density(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw SizeError("from_density needs a two-qubit state");
    using detail::kron2;
    using detail::pauli;
    auto expect = [&](int a, int b) { return (kron2(pauli(a), pauli(b)) * rho.matrix()).trace().real(); };
    CorrelatorExtraction out;
    for (int a = 1; a <= 3; ++a) {
        out.state.set_corr(a, expect(a, a));
        out.state.set_mag_a(a, expect(a, 0));
        out.state.set_mag_b(a, expect(0, a));
        for (int b = 1; b <= 3; ++b)
            if (a != b) out.residual_weight += std::pow(expect(a, b), 2);
    }
    out.residual_warning = out.residual_weight > 1e-9;
    return out;
}

std::array<double, 4> canonical_eigenvalues(const CorrelatorState& s) {
    const double rp = std::hypot(s.c10 + s.c01, s.c22 - s.c33);
    const double rm = std::hypot(s.c10 - s.c01, s.c22 + s.c33);
    return {0.25 * (1 + s.c11 - rp), 0.25 * (1 + s.c11 + rp), 0.25 * (1 - s.c11 - rm),
            0.25 * (1 - s.c11 + rm)};
}

DiagonalState::DiagonalState(int n, double c1, double c2, double c3) : n_(n), c_{c1, c2, c3} {
    if (n < 1) throw DomainError("diagonal state needs n >= 1");
    if (n > 512) throw SizeError("diagonal state n too large");
    check_unit_range(c1, "c1");
    check_unit_range(c2, "c2");
    check_unit_range(c3, "c3");
    for (double q : eigenvalue_families())
        if (q < -kEigenTolerance) throw NonPhysicalError("diagonal state has a negative eigenvalue");
}

std::array<double, 4> DiagonalState::eigenvalue_families() const {
    // 4^-n (1 + c1 x + c2 y + (-1)^n c3 x y), x, y = +-1
    const double sign = (n_ % 2 == 0) ? 1.0 : -1.0;
    const double scale = std::pow(0.25, n_);
    std::array<double, 4> out{};
    int k = 0;
    for (int x : {1, -1})
        for (int y : {1, -1}) out[k++] = scale * (1 + c_[0] * x + c_[1] * y + sign * c_[2] * x * y);
    return out;
}

double DiagonalState::entropy() const {
    // S = 2n - 2 + H(q/4) where q/4 are the family weights summing to one
    const double sign = (n_ % 2 == 0) ? 1.0 : -1.0;
    Eigen::VectorXd w(4);
    int k = 0;
    for (int x : {1, -1})
        for (int y : {1, -1}) w(k++) = 0.25 * (1 + c_[0] * x + c_[1] * y + sign * c_[2] * x * y);
    return 2.0 * n_ - 2.0 + spectrum_entropy(w);
}

DensityMatrix DiagonalState::to_density() const {
    const int nq = n_qubits();
    if (nq > kMaxQubits) throw SizeError("diagonal state too large for dense form");
    const Eigen::Index d = Eigen::Index(1) << nq;
    CMat m = CMat::Identity(d, d);
    // X..X flips every bit; Y..Y adds phase i^(2n) (-1)^popcount(col);
    // Z..Z is diagonal (-1)^popcount.
    const double ysign = (n_ % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index col = 0; col < d; ++col) {
        const Eigen::Index row = (d - 1) ^ col;
        const double par = (std::popcount(static_cast<unsigned long long>(col)) % 2) ? -1.0 : 1.0;
        m(row, col) += c_[0];
        m(row, col) += c_[1] * ysign * par;
        m(col, col) += c_[2] * par;
    }
    return DensityMatrix(CMat(m / double(d)));
}

DensityMatrix encode_last_qubit(const DensityMatrix& rho, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    const int n = rho.n_qubits();
    if (n + 1 > kMaxQubits) throw SizeError("encoding would exceed 10 qubits");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const Eigen::Index d = rho.dim();
    // V: 2^n -> 2^(n+1). Not an isometry in general; norm is kept only when
    // the other qubits already distinguish the two branches.
    CMat v = CMat::Zero(2 * d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Eigen::Index head = i >> 1;
        const Eigen::Index zz = head << 2, oo = (head << 2) | 3;
        if ((i & 1) == 0) {
            v(zz, i) = alpha;
            v(oo, i) = beta;
        } else {
            v(oo, i) = alpha;
            v(zz, i) = beta;
        }
    }
    CMat out = v * rho.matrix() * v.adjoint();
    if (std::abs(out.trace().real() - 1.0) > kEigenTolerance)
        throw DomainError("encoding does not preserve the trace of this state");
    return DensityMatrix(std::move(out));
}

DensityMatrix sweeping_state(int n_qubits, double x, std::span<const double> alphas) {
    if (n_qubits < 2) throw DomainError("sweeping state needs at least two qubits");
    if (n_qubits > kMaxQubits) throw SizeError("sweeping state limited to 10 qubits");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x must lie in [0, 1]");
    const std::size_t extra = static_cast<std::size_t>(n_qubits - 2);
    double base = 1.0;
    std::span<const double> enc;
    if (alphas.size() == extra + 1) {
        base = alphas[0];
        enc = alphas.subspan(1);
    } else if (alphas.size() == extra && extra > 0) {
        enc = alphas;
    } else {
        throw DomainError("sweeping state with " + std::to_string(n_qubits) + " qubits needs " +
                          std::to_string(extra) + " or " + std::to_string(extra + 1) + " alphas");
    }
    if (!(base >= 0.0 && base <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    const double b = std::sqrt(std::max(0.0, 1.0 - base * base));
    Eigen::Vector4cd psi0(base, b, 0, 0);  // |0>(a|0> + b|1>)
    Eigen::Vector4cd psi1(0, 0, b, base);  // |1>(a|1> + b|0>)
    const Eigen::Vector4cd sum = psi0 + psi1;
    CMat m = 0.5 * x * (sum * sum.adjoint()) +
             0.5 * (1 - x) * (psi0 * psi0.adjoint() + psi1 * psi1.adjoint());
    DensityMatrix rho(m);
    for (double a : enc) rho = encode_last_qubit(rho, a);
    return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced) {
    const int n = rho.n_qubits();
    unsigned traced_mask = 0;
    for (int q : traced) {
        if (q < 0 || q >= n) throw DomainError("qubit index out of range in partial trace");
        traced_mask |= 1u << (n - 1 - q);
    }
    const int nt = std::popcount(traced_mask);
    if (nt >= n) throw SizeError("cannot trace out every qubit");
    const int nk = n - nt;
    std::vector<unsigned> kept_bits, traced_bits;
    for (int b = n - 1; b >= 0; --b) ((traced_mask >> b) & 1u ? traced_bits : kept_bits).push_back(b);
    auto compose = [&](unsigned keep, unsigned tr) {
        unsigned idx = 0;
        for (int k = 0; k < nk; ++k)
            if ((keep >> (nk - 1 - k)) & 1u) idx |= 1u << kept_bits[k];
        for (int k = 0; k < nt; ++k)
            if ((tr >> (nt - 1 - k)) & 1u) idx |= 1u << traced_bits[k];
        return idx;
    };
    const unsigned dk = 1u << nk, dt = 1u << nt;
    CMat out = CMat::Zero(dk, dk);
    for (unsigned i = 0; i < dk; ++i)
        for (unsigned j = 0; j < dk; ++j) {
            cplx acc = 0;
            for (unsigned t = 0; t < dt; ++t) acc += rho.matrix()(compose(i, t), compose(j, t));
            out(i, j) = acc;
        }
    return DensityMatrix(out);
}

DensityMatrix trace_out_first(const DensityMatrix& rho) {
    const int first = 0;
    return partial_trace(rho, std::span<const int>(&first, 1));
}

DensityMatrix first_qubit_marginal(const DensityMatrix& rho) {
    std::vector<int> rest;
    for (int q = 1; q < rho.n_qubits(); ++q) rest.push_back(q);
    if (rest.empty()) return rho;
    return partial_trace(rho, rest);
}

double binary_entropy(double p) {
    if (!(p >= -1e-15 && p <= 1.0 + 1e-15)) throw DomainError("probability outside [0, 1]");
    auto term = [](double q) { return q <= 1e-15 ? 0.0 : -q * std::log2(q); };
    return term(p) + term(1.0 - p);
}

double freezing_entropy(double y) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("freezing entropy argument must lie in [0, 1]");
    return 2.0 * (binary_entropy(0.5 * (1.0 + y)) - 1.0);
}

double spectrum_entropy(const Eigen::VectorXd& lambda) {
    double s = 0.0;
    for (double l : lambda)
        if (l > 1e-15) s -= l * std::log2(l);
    return s;
}

double entropy(const DensityMatrix& rho) {
    const Eigen::VectorXd ev = rho.eigenvalues();
    if (ev.minCoeff() < -kEigenTolerance) throw NonPhysicalError("entropy of a non-physical matrix");
    return spectrum_entropy(ev);
}

double concurrence(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw SizeError("concurrence needs a two-qubit state");
    const Eigen::Matrix4cd yy = detail::kron2(detail::pauli(2), detail::pauli(2));
    const Eigen::Matrix4cd r = rho.matrix();
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    // eigenvalues of sqrt(sqrt(r) tilde sqrt(r)) are the Wootters lambdas
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r);
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sq = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::Matrix4cd h = sq * tilde * sq;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    Eigen::Vector4d l = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(l.data(), l.data() + 4, std::greater<>());
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

}  // namespace qcf
