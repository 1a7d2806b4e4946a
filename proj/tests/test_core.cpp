#include <random>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "qcfreeze/core.hpp"

using namespace qcf;

namespace {

CorrelatorState random_correlators(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    CorrelatorState s;
    for (int a = 1; a <= 3; ++a) {
        s.set_corr(a, u(rng));
        s.set_mag_a(a, 0.5 * u(rng));
        s.set_mag_b(a, 0.5 * u(rng));
    }
    return s;
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("correlator round trip matches explicit Pauli sum") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const auto s = random_correlators(rng);
        const double t[3] = {s.c11, s.c22, s.c33}, ma[3] = {s.c10, s.c20, s.c30}, mb[3] = {s.c01, s.c02, s.c03};
        const auto rho = to_density(s);
        CHECK(max_abs(rho.matrix() - oracle::two_qubit(t, ma, mb)) < 1e-14);
        const auto back = from_density(rho);
        CHECK(back.residual_weight < 1e-20);
        CHECK_FALSE(back.residual_warning);
        for (int a = 1; a <= 3; ++a) {
            CHECK(back.state.corr(a) == doctest::Approx(s.corr(a)).epsilon(1e-12));
            CHECK(back.state.mag_a(a) == doctest::Approx(s.mag_a(a)).epsilon(1e-12));
            CHECK(back.state.mag_b(a) == doctest::Approx(s.mag_b(a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("off-diagonal correlators raise the residual warning") {
    CMat m = oracle::kron(oracle::sig(0), oracle::sig(0)) + 0.3 * oracle::kron(oracle::sig(1), oracle::sig(3));
    const auto ex = from_density(DensityMatrix(m / 4.0));
    CHECK(ex.residual_weight == doctest::Approx(0.09));
    CHECK(ex.residual_warning);
}

TEST_CASE("bell diagonal spectrum and entropy") {
    const auto rho = to_density(bell_diagonal(0.6, -0.6, 1.0));
    auto ev = rho.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size());
    CHECK(ev[0] == doctest::Approx(0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(0.2));
    CHECK(ev[3] == doctest::Approx(0.8));
    CHECK(entropy(rho) == doctest::Approx(0.7219280949));
    CHECK(oracle::vn(rho.matrix()) == doctest::Approx(entropy(rho)).epsilon(1e-10));
}

TEST_CASE("physicality") {
    const auto p = is_physical(bell_diagonal(1, 1, 1));
    CHECK_FALSE(p.physical);
    CHECK(p.min_eigenvalue == doctest::Approx(-0.5));
    CHECK(is_physical(bell_diagonal(1, -1, 1)).physical);
    CHECK_THROWS_AS(entropy(to_density(bell_diagonal(1, 1, 1))), NonPhysicalError);
}

TEST_CASE("canonical eigenvalue formula agrees with dense spectrum") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 1000; ++k) {
        const double c11 = u(rng), c22 = u(rng), c33 = u(rng), c10 = u(rng), c01 = u(rng);
        auto f = canonical_eigenvalues(canonical_state(c11, c22, c33, c10, c01));
        std::sort(f.begin(), f.end());
        const auto ev = oracle::eig(oracle::canonical(c11, c22, c33, c10, c01));
        for (int i = 0; i < 4; ++i) CHECK(f[i] == doctest::Approx(ev[i]).epsilon(1e-12));
    }
}

TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix(CMat::Identity(3, 3) / 3.0), SizeError);
    CHECK_THROWS_AS(DensityMatrix(CMat::Identity(2, 3)), SizeError);
    CHECK_THROWS_AS(DensityMatrix(CMat::Identity(4, 4) / 2.0), DomainError);
    CMat nh = CMat::Identity(2, 2) / 2.0;
    nh(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{nh}, DomainError);
    CHECK_THROWS_AS(canonical_state(1.2, 0, 0, 0, 0), DomainError);
    CHECK(DensityMatrix::maximally_mixed(3).n_qubits() == 3);
}

TEST_CASE("diagonal multi-qubit state against dense construction") {
    for (int n : {1, 2, 3}) {
        const double c1 = 0.5, c2 = (n % 2 ? -1 : 1) * 0.2, c3 = 0.4;
        DiagonalState d(n, c1, c2, c3);
        oracle::Mat x = oracle::sig(1), y = oracle::sig(2), z = oracle::sig(3), id = oracle::eye(1);
        oracle::Mat X = id, Y = id, Z = id;
        for (int q = 0; q < 2 * n; ++q) {
            X = oracle::kron(X, x);
            Y = oracle::kron(Y, y);
            Z = oracle::kron(Z, z);
        }
        const Eigen::Index dim = X.rows();
        oracle::Mat ref = (oracle::eye(dim) + c1 * X + c2 * Y + c3 * Z) / double(dim);
        const auto rho = d.to_density();
        CHECK(max_abs(rho.matrix() - ref) < 1e-14);
        CHECK(d.entropy() == doctest::Approx(oracle::vn(ref)).epsilon(1e-10));
        const auto fam = d.eigenvalue_families();
        const auto ev = oracle::eig(ref);
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            bool found = false;
            for (double f : fam) found = found || std::abs(f - ev[i]) < 1e-12;
            CHECK(found);
        }
        CHECK(max_abs(first_qubit_marginal(rho).matrix() - oracle::eye(2) / 2.0) < 1e-14);
        CHECK(max_abs(trace_out_first(rho).matrix() - oracle::eye(dim / 2) / double(dim / 2)) < 1e-14);
    }
    CHECK_THROWS_AS(DiagonalState(1, 1, 1, 1), NonPhysicalError);
}

TEST_CASE("sweeping states") {
    const double x = 0.7, a = 0.8;
    const std::vector<double> al{a};
    const auto r2 = sweeping_state(2, x, al);
    const auto c = from_density(r2).state;
    const double b = std::sqrt(1 - a * a);
    Eigen::Vector4cd psi0(a, b, 0, 0), psi1(0, 0, b, a);
    oracle::Mat P0 = psi0 * psi0.adjoint(), P1 = psi1 * psi1.adjoint();
    Eigen::Vector4cd sum = (psi0 + psi1) / std::sqrt(2.0);
    oracle::Mat ref = x * oracle::Mat(sum * sum.adjoint()) + (1 - x) / 2 * (P0 + P1);
    CHECK(max_abs(r2.matrix() - ref) < 1e-14);
    CHECK(c.c30 == doctest::Approx(0).epsilon(1e-14));

    // base alpha = 1
    const auto diag = from_density(sweeping_state(2, x, std::vector<double>{1.0})).state;
    CHECK(diag.c33 == doctest::Approx(1));
    CHECK(diag.c11 == doctest::Approx(x));
    CHECK(diag.c22 == doctest::Approx(-x));
    CHECK(diag.c01 == doctest::Approx(0).epsilon(1e-14));

    const std::vector<double> a3{0.6}, a4{0.6, 0.25};
    const auto r3 = sweeping_state(3, x, a3);
    const auto r4 = sweeping_state(4, x, a4);
    CHECK(r3.n_qubits() == 3);
    CHECK(r4.n_qubits() == 4);
    const auto lhs = trace_out_first(r4);
    const auto rhs = encode_last_qubit(trace_out_first(r3), 0.25);
    CHECK(max_abs(lhs.matrix() - rhs.matrix()) < 1e-13);
    CHECK(max_abs(trace_out_first(r3).matrix() - oracle::trace_first(r3.matrix())) < 1e-14);

    // tracing the first qubit of rho3 leaves a Bell-diagonal pair
    const double a1 = 0.6, b1 = 0.8;
    const auto m = from_density(trace_out_first(r3)).state;
    CHECK(m.c11 == doctest::Approx(2 * a1 * b1));
    CHECK(m.c22 == doctest::Approx(-2 * a1 * b1));
    CHECK(m.c33 == doctest::Approx(1));
    CHECK(std::abs(m.c10) + std::abs(m.c01) + std::abs(m.c30) + std::abs(m.c03) < 1e-13);

    CHECK_THROWS(sweeping_state(3, x, std::vector<double>{}));
    CHECK_THROWS_AS(sweeping_state(2, 1.5, al), DomainError);
}

TEST_CASE("encoding keeps the spectrum of branch-distinguishing states") {
    const std::vector<double> al{0.6};
    const auto r3 = sweeping_state(3, 0.4, al);
    const auto e = encode_last_qubit(r3, 0.3);
    CHECK(e.n_qubits() == 4);
    CHECK(entropy(e) == doctest::Approx(entropy(r3)).epsilon(1e-10));
    // a generic state loses its norm under the substitution
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(encode_last_qubit(DensityMatrix(oracle::random_density(4, rng)), 0.3), DomainError);
}

TEST_CASE("partial trace agrees with block formulas") {
    std::mt19937_64 rng(9);
    const auto r = DensityMatrix(oracle::random_density(8, rng));
    CHECK(max_abs(first_qubit_marginal(r).matrix() - oracle::keep_first(r.matrix())) < 1e-14);
    const std::vector<int> last{2};
    CHECK(max_abs(partial_trace(r, last).matrix() - oracle::trace_last(r.matrix())) < 1e-14);
}

TEST_CASE("entropy functions") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1));
    CHECK(binary_entropy(0) == 0);
    CHECK(freezing_entropy(0) == doctest::Approx(0));
    CHECK(freezing_entropy(1) == doctest::Approx(-2));
    for (double y : {0.1, 0.37, 0.9}) CHECK(freezing_entropy(y) == doctest::Approx(oracle::F(y)).epsilon(1e-14));
    CHECK_THROWS_AS(freezing_entropy(-0.1), DomainError);
    CHECK(entropy(DensityMatrix::maximally_mixed(3)) == doctest::Approx(3));
}

TEST_CASE("concurrence") {
    CHECK(concurrence(to_density(bell_diagonal(0.6, -0.6, 0.6))) == doctest::Approx(0.4));
    CHECK(concurrence(to_density(bell_diagonal(0.6, -0.6, 1.0))) == doctest::Approx(0.6));
    CHECK(concurrence(to_density(bell_diagonal(-1, 1, 1))) == doctest::Approx(1));
    CHECK(concurrence(DensityMatrix::maximally_mixed(2)) == doctest::Approx(0).epsilon(1e-12));
    // Werner state p|psi-><psi-| + (1-p)I/4: C = max(0, (3p-1)/2)
    const double p = 0.8;
    CHECK(concurrence(to_density(bell_diagonal(-p, -p, -p))) == doctest::Approx((3 * p - 1) / 2));
}
