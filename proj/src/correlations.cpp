#include "qcfreeze/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pauli.hpp"

namespace qcf {

namespace {

double bloch_entropy(double r) { return binary_entropy(0.5 * (1.0 + std::min(1.0, r))); }

Eigen::Vector3d direction(Projector pr) {
    return {std::sin(pr.theta) * std::cos(pr.phi), std::sin(pr.theta) * std::sin(pr.phi), std::cos(pr.theta)};
}

double snap_zero(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

}  // namespace

std::string_view to_string(MeasurementClass c) {
    if (!c.regular) return "S2";
    switch (c.set) {
        case RegularSet::S1: return "S1:s1";
        case RegularSet::S2: return "S1:s2";
        case RegularSet::S3: return "S1:s3";
    }
    return "?";
}

std::string_view to_string(Measure m) { return m == Measure::Discord ? "qd" : "qwd"; }

Measure parse_measure(std::string_view name) {
    if (name == "qd" || name == "discord") return Measure::Discord;
    if (name == "qwd" || name == "deficit" || name == "work_deficit") return Measure::WorkDeficit;
    throw DomainError("unknown measure '" + std::string(name) + "'");
}

Method parse_method(std::string_view name) {
    if (name == "regular") return Method::Regular;
    if (name == "bruteforce" || name == "brute") return Method::BruteForce;
    if (name == "hybrid") return Method::Hybrid;
    throw DomainError("unknown method '" + std::string(name) + "'");
}

double MeasurementOutcome::outcome_entropy() const {
    double h = 0.0;
    for (double q : p)
        if (q > 1e-15) h -= q * std::log2(q);
    return h;
}

Bipartite::Bipartite(const DensityMatrix& rho) : n_(rho.n_qubits()) {
    if (n_ < 2) throw SizeError("bipartite split needs at least two qubits");
    const auto phys = is_physical(rho);
    if (!phys.physical)
        throw NonPhysicalError("state is not physical (min eigenvalue " + std::to_string(phys.min_eigenvalue) + ")");
    s_ab_ = spectrum_entropy(rho.eigenvalues());
    const DensityMatrix ra = first_qubit_marginal(rho);
    const DensityMatrix rb = trace_out_first(rho);
    s_a_ = spectrum_entropy(ra.eigenvalues());
    s_b_ = spectrum_entropy(rb.eigenvalues());
    const Eigen::Index db = rho.dim() / 2;
    r00_ = rho.matrix().topLeftCorner(db, db);
    r01_ = rho.matrix().topRightCorner(db, db);
    r11_ = rho.matrix().bottomRightCorner(db, db);
    if (n_ == 2) {
        using detail::kron2;
        using detail::pauli;
        auto expect = [&](int i, int j) { return (kron2(pauli(i), pauli(j)) * rho.matrix()).trace().real(); };
        for (int i = 1; i <= 3; ++i) {
            a_(i - 1) = expect(i, 0);
            b_(i - 1) = expect(0, i);
            for (int j = 1; j <= 3; ++j) t_(i - 1, j - 1) = expect(i, j);
        }
    }
}

MeasurementOutcome Bipartite::measure(Projector pr) const {
    MeasurementOutcome out;
    if (n_ == 2) {
        const Eigen::Vector3d n = direction(pr);
        const double an = a_.dot(n);
        const Eigen::Vector3d tn = t_.transpose() * n;
        for (int k = 0; k < 2; ++k) {
            const double sgn = k == 0 ? 1.0 : -1.0;
            out.p[k] = 0.5 * (1.0 + sgn * an);
            out.s[k] = out.p[k] > 1e-15 ? bloch_entropy((b_ + sgn * tn).norm() / (1.0 + sgn * an)) : 0.0;
        }
        return out;
    }
    const double c = std::cos(0.5 * pr.theta), s = std::sin(0.5 * pr.theta);
    const cplx e = std::polar(1.0, pr.phi);
    const std::array<std::array<cplx, 2>, 2> vecs{{{cplx(c), e * s}, {cplx(s), -e * c}}};
    for (int k = 0; k < 2; ++k) {
        const cplx u = vecs[k][0], v = vecs[k][1];
        CMat sigma = std::norm(u) * r00_ + std::norm(v) * r11_;
        const CMat cross = std::conj(u) * v * r01_;
        sigma += cross + cross.adjoint();
        const double pk = sigma.trace().real();
        out.p[k] = pk;
        if (pk <= 1e-15) {
            out.s[k] = 0.0;
            continue;
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(sigma / pk, Eigen::EigenvaluesOnly);
        out.s[k] = spectrum_entropy(es.eigenvalues());
    }
    return out;
}

double measured_conditional_entropy(const DensityMatrix& rho, double theta, double phi) {
    return Bipartite(rho).measure({theta, phi}).conditional_entropy();
}

namespace {

double objective(const Bipartite& bp, Measure m, Projector pr) {
    const auto o = bp.measure(pr);
    return m == Measure::Discord ? o.conditional_entropy() : o.conditional_entropy() + o.outcome_entropy();
}

double finish(const Bipartite& bp, Measure m, double best) {
    return m == Measure::Discord ? bp.entropy_a() - bp.entropy_ab() + best : best - bp.entropy_ab();
}

CorrelationResult optimize(const Bipartite& bp, Measure m, Method method, const SphereSearchOptions& opts) {
    CorrelationResult res;
    double reg_best = 0.0;
    for (int l = 0; l < 3; ++l) {
        const double v = objective(bp, m, kRegularProjectors[l]);
        if (l == 0 || v < reg_best) {
            reg_best = v;
            res.best_regular = static_cast<RegularSet>(l);
        }
    }
    const Projector reg_proj = kRegularProjectors[static_cast<int>(res.best_regular)];
    res.regular_value = snap_zero(finish(bp, m, reg_best));

    double best = reg_best;
    Projector best_proj = reg_proj;
    res.cls = {true, res.best_regular};
    if (method != Method::Regular) {
        const auto sm = minimize_on_sphere([&](double t, double p) { return objective(bp, m, {t, p}); }, opts);
        if (method == Method::BruteForce || sm.value < reg_best) {
            best = sm.value;
            best_proj = {sm.theta, sm.phi};
        }
        if (sm.value < reg_best - kIrregularGap) res.cls.regular = false;
    }
    res.value = snap_zero(finish(bp, m, best));
    res.optimum = best_proj;
    res.p = bp.measure(best_proj).p;
    return res;
}

}  // namespace

CorrelationResult quantum_correlation(const DensityMatrix& rho, Measure measure, Method method,
                                      const SphereSearchOptions& opts) {
    return optimize(Bipartite(rho), measure, method, opts);
}

CorrelationResult discord(const DensityMatrix& rho, Method method, const SphereSearchOptions& opts) {
    return quantum_correlation(rho, Measure::Discord, method, opts);
}

CorrelationResult work_deficit(const DensityMatrix& rho, Method method, const SphereSearchOptions& opts) {
    return quantum_correlation(rho, Measure::WorkDeficit, method, opts);
}

double classical_correlation(const DensityMatrix& rho, const SphereSearchOptions& opts) {
    const Bipartite bp(rho);
    const auto r = optimize(bp, Measure::Discord, Method::Hybrid, opts);
    const double best_cond = r.value - bp.entropy_a() + bp.entropy_ab();
    return snap_zero(bp.entropy_b() - best_cond);
}

double mutual_information(const DensityMatrix& rho) {
    const Bipartite bp(rho);
    return snap_zero(bp.entropy_a() + bp.entropy_b() - bp.entropy_ab());
}

double discord_multipartite(const DiagonalState& d, Gamma gamma) {
    const DiagonalState ev = evolve_diagonal(d, gamma);
    const double c = std::max({std::abs(ev.c1()), std::abs(ev.c2()), std::abs(ev.c3())});
    // S(rho_1) + S(rho_rest) = 1 + (2n - 1): all proper marginals are maximally mixed
    return snap_zero(2.0 * d.n() - ev.entropy() + 0.5 * freezing_entropy(std::min(1.0, c)));
}

DeficitDiscordRelation deficit_discord_relation(const DensityMatrix& rho, const SphereSearchOptions& opts) {
    const Bipartite bp(rho);
    const auto d = optimize(bp, Measure::Discord, Method::Hybrid, opts);
    const auto w = optimize(bp, Measure::WorkDeficit, Method::Hybrid, opts);
    DeficitDiscordRelation rel;
    rel.discord = d.value;
    rel.work_deficit = w.value;
    rel.entropy_a = bp.entropy_a();
    rel.discord_optimum = d.optimum;
    rel.deficit_optimum = w.optimum;
    const auto at_d = bp.measure(d.optimum);
    rel.outcome_entropy = at_d.outcome_entropy();
    // a common optimal ensemble: the discord optimum also minimises the
    // deficit objective (or the reverse)
    constexpr double tol = 1e-8;
    const double w_at_d = finish(bp, Measure::WorkDeficit, objective(bp, Measure::WorkDeficit, d.optimum));
    const double d_at_w = finish(bp, Measure::Discord, objective(bp, Measure::Discord, w.optimum));
    rel.same_ensemble = std::abs(w_at_d - w.value) <= tol || std::abs(d_at_w - d.value) <= tol;
    if (rel.same_ensemble) {
        const double h = std::abs(w_at_d - w.value) <= tol ? rel.outcome_entropy
                                                           : bp.measure(w.optimum).outcome_entropy();
        rel.residual = w.value - (d.value - rel.entropy_a + h);
        rel.identity_holds = std::abs(rel.residual) <= tol;
    }
    return rel;
}

}  // namespace qcf
