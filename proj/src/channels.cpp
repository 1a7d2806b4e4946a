#include "qcfreeze/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pauli.hpp"

namespace qcf {

std::string_view to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::BitFlip: return "bf";
        case ChannelKind::PhaseFlip: return "pf";
        case ChannelKind::BitPhaseFlip: return "bpf";
    }
    return "?";
}

ChannelKind parse_channel(std::string_view name) {
    if (name == "bf" || name == "bitflip") return ChannelKind::BitFlip;
    if (name == "pf" || name == "phaseflip") return ChannelKind::PhaseFlip;
    if (name == "bpf" || name == "bitphaseflip") return ChannelKind::BitPhaseFlip;
    throw DomainError("unknown channel '" + std::string(name) + "'");
}

int flip_axis(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::BitFlip: return 1;
        case ChannelKind::BitPhaseFlip: return 2;
        case ChannelKind::PhaseFlip: return 3;
    }
    return 1;
}

Gamma::Gamma(double value) : v_(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
}

KrausPair kraus_pair(ChannelKind kind, Gamma gamma) {
    const double g = gamma.value();
    return {std::sqrt(1.0 - 0.5 * g) * detail::pauli(0), std::sqrt(0.5 * g) * detail::pauli(flip_axis(kind))};
}

DensityMatrix apply_local_channel(const DensityMatrix& rho, ChannelKind kind, Gamma gamma) {
    const double g = gamma.value();
    const int n = rho.n_qubits();
    const Eigen::Matrix2cd& flip = detail::pauli(flip_axis(kind));
    CMat m = rho.matrix();
    for (int q = 0; q < n; ++q) {
        // tau0 is proportional to I, so rho -> (1 - g/2) rho + (g/2) s rho s
        CMat flipped = m;
        detail::conjugate_qubit(flipped, n, q, flip);
        m = (1.0 - 0.5 * g) * m + (0.5 * g) * flipped;
    }
    return DensityMatrix(std::move(m));
}

CorrelatorState evolve_correlators(const CorrelatorState& s, ChannelKind kind, Gamma gamma) {
    const double k = 1.0 - gamma.value();
    const int keep = flip_axis(kind);
    CorrelatorState out = s;
    for (int a = 1; a <= 3; ++a) {
        if (a == keep) continue;
        out.set_corr(a, s.corr(a) * k * k);
        out.set_mag_a(a, s.mag_a(a) * k);
        out.set_mag_b(a, s.mag_b(a) * k);
    }
    return out;
}

DiagonalState evolve_diagonal(const DiagonalState& d, Gamma gamma) {
    const double f = std::pow(1.0 - gamma.value(), 2 * d.n());
    return DiagonalState(d.n(), d.c1(), d.c2() * f, d.c3() * f);
}

Gamma gamma_from_time(double rate, double t) {
    if (!(rate > 0.0)) throw DomainError("decay rate must be positive");
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    if (std::isinf(t)) return Gamma(1.0);
    return Gamma(-std::expm1(-rate * t));
}

CorrelatorState to_bitflip_frame(const CorrelatorState& s, ChannelKind kind) {
    // new axis a takes old axis src[a]; cyclic, hence a proper rotation
    int src[4] = {0, 1, 2, 3};
    if (kind == ChannelKind::PhaseFlip) {
        src[1] = 3, src[2] = 1, src[3] = 2;
    } else if (kind == ChannelKind::BitPhaseFlip) {
        src[1] = 2, src[2] = 3, src[3] = 1;
    }
    CorrelatorState out;
    for (int a = 1; a <= 3; ++a) {
        out.set_corr(a, s.corr(src[a]));
        out.set_mag_a(a, s.mag_a(src[a]));
        out.set_mag_b(a, s.mag_b(src[a]));
    }
    return out;
}

}  // namespace qcf
