#pragma once

#include <string_view>

#include "qcfreeze/core.hpp"

namespace qcf {

enum class ChannelKind { BitFlip, PhaseFlip, BitPhaseFlip };

std::string_view to_string(ChannelKind kind);
ChannelKind parse_channel(std::string_view name);  // bf | pf | bpf

// Pauli axis carried by the flip Kraus operator: 1 (BF), 2 (BPF), 3 (PF).
int flip_axis(ChannelKind kind);

// Decoherence probability ("parametrized time"), 0 <= gamma <= 1.
class Gamma {
public:
    explicit Gamma(double value);
    double value() const { return v_; }

private:
    double v_;
};

struct KrausPair {
    Eigen::Matrix2cd tau0;
    Eigen::Matrix2cd tau1;
};

KrausPair kraus_pair(ChannelKind kind, Gamma gamma);

// Same channel on every qubit, applied one qubit at a time.
DensityMatrix apply_local_channel(const DensityMatrix& rho, ChannelKind kind, Gamma gamma);

CorrelatorState evolve_correlators(const CorrelatorState& s, ChannelKind kind, Gamma gamma);

// Bit-flip evolution of a diagonal state: c2, c3 scale by (1 - gamma)^(2n).
DiagonalState evolve_diagonal(const DiagonalState& d, Gamma gamma);

Gamma gamma_from_time(double rate, double t);

// Cyclic relabelling of axes that maps the channel's invariant axis onto
// axis 1, so that bit-flip results apply to phase-flip and bit-phase-flip.
CorrelatorState to_bitflip_frame(const CorrelatorState& s, ChannelKind kind);

}  // namespace qcf
