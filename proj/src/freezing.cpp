#include "qcfreeze/freezing.hpp"

#include <cmath>
#include <numbers>

#include "qcfreeze/parallel.hpp"

namespace qcf {

namespace {

double F(double y) { return freezing_entropy(std::min(1.0, std::abs(y))); }

int axis_index(DecayAxis a) { return a == DecayAxis::Z ? 3 : 2; }
int other_index(DecayAxis a) { return a == DecayAxis::Z ? 2 : 3; }

bool is_canonical(const CorrelatorState& s) {
    return std::abs(s.c20) <= kRatioTolerance && std::abs(s.c02) <= kRatioTolerance &&
           std::abs(s.c30) <= kRatioTolerance && std::abs(s.c03) <= kRatioTolerance;
}

double subadditivity_rhs(const CorrelatorState& s, Measure m) {
    double rhs = F(s.c11) + F(s.c01);
    if (m == Measure::Discord) rhs -= F(s.c10);
    return rhs;
}

ClauseCheck evaluate_clauses(const CorrelatorState& s, Measure m, DecayAxis axis) {
    ClauseCheck c;
    const double cax = s.corr(axis_index(axis));
    const double coth = s.corr(other_index(axis));
    const bool diag_ok = std::abs(coth + s.c11 * cax) <= kRatioTolerance;
    bool mag_ok;
    if (std::abs(s.c01) <= kRatioTolerance && std::abs(s.c10) <= kRatioTolerance) {
        mag_ok = true;
        c.note = "magnetizations vanish; ratio clause reduces to the correlator relation";
    } else if (std::abs(s.c01) <= kRatioTolerance) {
        mag_ok = false;
        c.note = "c10/c01 undefined (c01 = 0, c10 != 0)";
    } else {
        mag_ok = std::abs(s.c10 - s.c11 * s.c01) <= kRatioTolerance;
    }
    c.ratio = diag_ok && mag_ok;
    const double r2 = cax * cax + s.c01 * s.c01;
    c.positivity = r2 <= 1.0 + 1e-12;
    c.lhs = F(std::sqrt(r2));
    c.rhs = subadditivity_rhs(s, m);
    c.subadditivity = c.lhs <= c.rhs + 1e-12;
    return c;
}

TerminalResult solve_terminal(const CorrelatorState& s, Measure m, DecayAxis axis) {
    const double cax = s.corr(axis_index(axis));
    const double rhs = subadditivity_rhs(s, m);
    auto g = [&](double gamma) {
        const double k = std::pow(1.0 - gamma, 2);
        return F(std::sqrt(s.c01 * s.c01 + cax * cax * k * k)) - rhs;
    };
    TerminalResult out;
    if (g(0.0) > 1e-12) {
        out.diagnostic = "subadditivity clause fails at gamma = 0";
        return out;
    }
    if (g(1.0) <= 0.0) {
        out.gamma_f = 1.0;
        out.full_interval = true;
        out.diagnostic = "no root in (0, 1]: freezing inequality holds for every gamma";
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > kTerminalTolerance) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) <= 0.0 ? lo : hi) = mid;
    }
    out.gamma_f = 0.5 * (lo + hi);
    return out;
}

}  // namespace

std::string_view to_string(DecayAxis a) { return a == DecayAxis::Z ? "c33" : "c22"; }

std::string_view to_string(PhaseStatus s) {
    switch (s) {
        case PhaseStatus::NonPhysical: return "nonphysical";
        case PhaseStatus::NoFreeze: return "nofreeze";
        case PhaseStatus::Freeze: return "freeze";
    }
    return "?";
}

FreezingReport check_ns(const CorrelatorState& s, Measure m) {
    FreezingReport rep;
    rep.measure = m;
    if (!is_canonical(s)) {
        rep.diagnostics.push_back("not a canonical state: y/z magnetizations present");
        return rep;
    }
    const auto phys = is_physical(s);
    if (!phys.physical) throw NonPhysicalError("NS check needs a physical state");
    for (DecayAxis axis : {DecayAxis::Z, DecayAxis::Y}) rep.clauses[static_cast<int>(axis)] = evaluate_clauses(s, m, axis);
    if (std::abs(s.c11) <= kRatioTolerance) {
        rep.diagnostics.push_back("c11 = 0: no correlation to freeze");
        return rep;
    }
    for (DecayAxis axis : {DecayAxis::Z, DecayAxis::Y}) {
        const auto& c = rep.clauses[static_cast<int>(axis)];
        if (!(c.ratio && c.positivity && c.subadditivity)) continue;
        const auto t = solve_terminal(s, m, axis);
        if (!t.diagnostic.empty()) rep.diagnostics.push_back(t.diagnostic);
        if (t.gamma_f <= kTerminalTolerance) {
            rep.diagnostics.push_back(std::string("branch ") + std::string(to_string(axis)) +
                                      ": terminal at 0, no finite freezing interval");
            continue;
        }
        rep.satisfied = true;
        rep.branch = axis;
        rep.terminal = t.gamma_f;
        rep.full_interval = t.full_interval;
        rep.frozen_value = m == Measure::Discord ? 0.5 * (F(s.c10) - F(s.c11)) : -0.5 * F(s.c11);
        break;
    }
    if (!rep.satisfied && rep.diagnostics.empty()) rep.diagnostics.push_back("no condition set satisfied");
    return rep;
}

FreezingReport check_ns_discord(const CorrelatorState& s) { return check_ns(s, Measure::Discord); }
FreezingReport check_ns_workdeficit(const CorrelatorState& s) { return check_ns(s, Measure::WorkDeficit); }

FreezingReport check_ns_multipartite(const DiagonalState& d) {
    FreezingReport rep;
    const double sign = d.n() % 2 == 0 ? 1.0 : -1.0;
    for (DecayAxis axis : {DecayAxis::Z, DecayAxis::Y}) {
        const double cax = d.c(axis == DecayAxis::Z ? 3 : 2);
        const double coth = d.c(axis == DecayAxis::Z ? 2 : 3);
        ClauseCheck c;
        c.ratio = std::abs(coth - sign * d.c1() * cax) <= kRatioTolerance;
        c.positivity = std::abs(cax) <= 1.0 && std::abs(cax) > std::abs(d.c1());
        c.subadditivity = true;
        c.lhs = std::abs(cax);
        c.rhs = std::abs(d.c1());
        if (cax == 0.0) c.note = "decaying correlator is zero";
        rep.clauses[static_cast<int>(axis)] = c;
    }
    if (std::abs(d.c1()) <= kRatioTolerance) {
        rep.diagnostics.push_back("c1 = 0: no correlation to freeze");
        return rep;
    }
    for (DecayAxis axis : {DecayAxis::Z, DecayAxis::Y}) {
        const auto& c = rep.clauses[static_cast<int>(axis)];
        if (!(c.ratio && c.positivity)) continue;
        rep.satisfied = true;
        rep.branch = axis;
        rep.terminal = 1.0 - std::pow(c.rhs / c.lhs, 1.0 / (2.0 * d.n()));
        rep.frozen_value = -0.5 * F(d.c1());
        break;
    }
    if (!rep.satisfied) rep.diagnostics.push_back("no condition set satisfied");
    return rep;
}

TerminalResult freezing_terminal(const CorrelatorState& s, Measure m) {
    const auto rep = check_ns(s, m);
    if (!rep.satisfied) throw DomainError("freezing terminal requested for a state that does not freeze");
    return solve_terminal(s, m, *rep.branch);
}

std::array<double, 3> regular_branch_values(const CorrelatorState& s, Gamma gamma, Measure m) {
    if (!is_canonical(s)) throw DomainError("regular branch formulas need a canonical state");
    const CorrelatorState e = evolve_correlators(s, ChannelKind::BitFlip, gamma);
    const auto lam = canonical_eigenvalues(e);
    const double s_ab = spectrum_entropy(Eigen::Vector4d(lam[0], lam[1], lam[2], lam[3]));
    const double s_a = binary_entropy(0.5 * (1 + s.c10));
    auto hb = [](double r) { return binary_entropy(0.5 * (1 + std::min(1.0, r))); };
    const double cond1 = hb(std::hypot(s.c01, e.c33));
    const double cond2 = hb(std::hypot(s.c01, e.c22));
    // x measurement: outcome i with p_i = (1 + (-1)^i c10)/2 and conditional
    // distribution chi_ij
    double cond3 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double si = i == 0 ? 1.0 : -1.0;
        const double pi = 0.5 * (1 + si * s.c10);
        if (pi <= 1e-15) continue;
        double h = 0.0;
        for (int j = 0; j < 2; ++j) {
            const double sj = j == 0 ? 1.0 : -1.0;
            const double chi = (1 + si * s.c10 + sj * (s.c01 + si * s.c11)) / (2 * (1 + si * s.c10));
            if (chi > 1e-15) h -= chi * std::log2(chi);
        }
        cond3 += pi * h;
    }
    if (m == Measure::Discord) return {s_a - s_ab + cond1, s_a - s_ab + cond2, s_a - s_ab + cond3};
    Eigen::Vector4d dephased;
    int k = 0;
    for (double a : {1.0, -1.0})
        for (double b : {1.0, -1.0}) dephased(k++) = 0.25 * (1 + a * s.c01 + b * s.c10 + a * b * s.c11);
    return {1.0 + cond1 - s_ab, 1.0 + cond2 - s_ab, spectrum_entropy(dephased) - s_ab};
}

CorrelatorState random_freezing_state(Measure m, std::mt19937_64& rng, bool on_circle, bool bell_diagonal) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double c11 = u(rng);
        double c33, c01;
        if (bell_diagonal) {
            c33 = u(rng);
            c01 = 0.0;
        } else if (on_circle) {
            const double a = angle(rng);
            c33 = std::cos(a);
            c01 = std::sin(a);
        } else {
            const double r = std::sqrt(0.5 * (1 + u(rng)));
            const double a = angle(rng);
            c33 = r * std::cos(a);
            c01 = r * std::sin(a);
        }
        const auto s = canonical_state(c11, -c11 * c33, c33, c11 * c01, c01);
        if (!is_physical(s).physical) continue;
        if (check_ns(s, m).satisfied) return s;
    }
    throw NumericalError("could not sample a freezing state");
}

ComplementarityAudit complementarity_audit(const ComplementaritySpec& spec) {
    std::mt19937_64 rng(spec.seed);
    ComplementarityAudit audit;
    audit.samples.reserve(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        const auto s = random_freezing_state(spec.measure, rng, spec.on_circle, spec.bell_diagonal);
        const auto rep = check_ns(s, spec.measure);
        ComplementaritySample smp{s, rep.frozen_value, rep.terminal};
        if (smp.sum() > 1.0 + 1e-9) ++audit.violations;
        if (audit.accepted == 0 || smp.sum() > audit.max_sum) {
            audit.max_sum = smp.sum();
            audit.argmax = smp;
        }
        ++audit.accepted;
        audit.samples.push_back(smp);
    }
    return audit;
}

std::vector<PhasePoint> phase_diagram(double c11, double grid_step, Measure m, ChannelKind channel, int jobs) {
    if (channel != ChannelKind::BitFlip)
        throw DomainError("phase diagrams are defined for the bit-flip channel; relabel axes with to_bitflip_frame");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DomainError("grid step must lie in (0, 1]");
    if (!(c11 >= -1.0 && c11 <= 1.0)) throw DomainError("c11 must lie in [-1, 1]");
    const int n = static_cast<int>(std::lround(2.0 / grid_step)) + 1;
    std::vector<PhasePoint> out(static_cast<std::size_t>(n) * n);
    auto coord = [&](int i) { return std::clamp(-1.0 + i * grid_step, -1.0, 1.0); };
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        for (int j = 0; j < n; ++j) {
            PhasePoint& pt = out[i * n + j];
            pt.c33 = coord(static_cast<int>(i));
            pt.c01 = coord(j);
            const auto s = canonical_state(c11, -c11 * pt.c33, pt.c33, c11 * pt.c01, pt.c01);
            if (!is_physical(s).physical) {
                pt.status = PhaseStatus::NonPhysical;
                continue;
            }
            pt.entangled = concurrence(to_density(s)) > 1e-12;
            const auto rep = check_ns(s, m);
            if (rep.satisfied) {
                pt.status = PhaseStatus::Freeze;
                pt.gamma_f = rep.terminal;
                pt.frozen_value = rep.frozen_value;
            }
        }
    });
    return out;
}

RegionAreas region_areas(const std::vector<PhasePoint>& grid) {
    RegionAreas a;
    for (const auto& p : grid) {
        if (p.status == PhaseStatus::NonPhysical) continue;
        ++a.physical;
        if (p.entangled) ++a.entangled;
        if (p.status == PhaseStatus::Freeze) {
            ++a.freezing;
            if (!p.entangled) ++a.separable_freezing;
        }
    }
    return a;
}

NonConvexityWitness nonconvexity_witness(Measure m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        NonConvexityWitness w;
        w.first = random_freezing_state(m, rng);
        w.second = random_freezing_state(m, rng);
        if (w.first == w.second) continue;
        CorrelatorState mix;
        for (int a = 1; a <= 3; ++a) {
            mix.set_corr(a, w.p * w.first.corr(a) + (1 - w.p) * w.second.corr(a));
            mix.set_mag_a(a, w.p * w.first.mag_a(a) + (1 - w.p) * w.second.mag_a(a));
            mix.set_mag_b(a, w.p * w.first.mag_b(a) + (1 - w.p) * w.second.mag_b(a));
        }
        w.mixture = mix;
        w.mixture_report = check_ns(mix, m);
        const auto& z = w.mixture_report.clauses[0];
        const auto& y = w.mixture_report.clauses[1];
        if (!z.ratio && !y.ratio) {
            w.violated_clause = "(i) ratio relation fails for the mixture in both condition sets";
            return w;
        }
    }
    throw NumericalError("no non-convexity witness found");
}

}  // namespace qcf
