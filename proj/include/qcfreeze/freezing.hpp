#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qcfreeze/channels.hpp"
#include "qcfreeze/core.hpp"
#include "qcfreeze/correlations.hpp"

namespace qcf {

// The two condition sets differ in which diagonal correlator carries the
// decay and sits in the positivity / subadditivity clauses: c33 (Z) or c22 (Y).
// For diagonal states the analogous roles are played by c3 and c2.
enum class DecayAxis { Z, Y };

std::string_view to_string(DecayAxis a);

inline constexpr double kRatioTolerance = 1e-9;
inline constexpr double kTerminalTolerance = 1e-10;

struct ClauseCheck {
    bool ratio = false;          // (i)
    bool positivity = false;     // (ii)
    bool subadditivity = false;  // (iii)
    double lhs = 0.0;            // (iii): F(sqrt(c_axis^2 + c01^2))
    double rhs = 0.0;
    std::string note;
};

struct FreezingReport {
    Measure measure = Measure::Discord;
    bool satisfied = false;
    std::optional<DecayAxis> branch;
    double frozen_value = 0.0;
    double terminal = 0.0;
    bool full_interval = false;
    std::array<ClauseCheck, 2> clauses;  // indexed by DecayAxis
    std::vector<std::string> diagnostics;
};

FreezingReport check_ns_discord(const CorrelatorState& s);
FreezingReport check_ns_workdeficit(const CorrelatorState& s);
FreezingReport check_ns(const CorrelatorState& s, Measure m);
FreezingReport check_ns_multipartite(const DiagonalState& d);

struct TerminalResult {
    double gamma_f = 0.0;
    bool full_interval = false;
    std::string diagnostic;
};

// Requires the corresponding NS check to pass; bisection to 1e-10.
TerminalResult freezing_terminal(const CorrelatorState& s, Measure m);

// Regular-set branch values Q_1, Q_2, Q_3 of a bit-flip evolved canonical
// state, from the closed-form spectra (no optimisation).
std::array<double, 3> regular_branch_values(const CorrelatorState& s, Gamma gamma, Measure m);

struct ComplementaritySpec {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    Measure measure = Measure::Discord;
    bool on_circle = false;     // restrict to c33^2 + c01^2 = 1
    bool bell_diagonal = false; // restrict to c01 = c10 = 0
};

struct ComplementaritySample {
    CorrelatorState state;
    double frozen_value = 0.0;
    double gamma_f = 0.0;
    double sum() const { return frozen_value + gamma_f; }
};

struct ComplementarityAudit {
    double max_sum = 0.0;
    ComplementaritySample argmax;
    std::size_t accepted = 0;
    std::size_t violations = 0;  // sums above 1 + 1e-9
    std::vector<ComplementaritySample> samples;
};

ComplementarityAudit complementarity_audit(const ComplementaritySpec& spec);

enum class PhaseStatus { NonPhysical, NoFreeze, Freeze };
std::string_view to_string(PhaseStatus s);

struct PhasePoint {
    double c33 = 0.0;
    double c01 = 0.0;
    PhaseStatus status = PhaseStatus::NoFreeze;
    double gamma_f = 0.0;
    double frozen_value = 0.0;
    bool entangled = false;
};

// Grid over (c33, c01) in [-1, 1]^2 for the condition-(i) family with the
// given c11 (c22 = -c11 c33, c10 = c11 c01). Bit-flip channel only.
std::vector<PhasePoint> phase_diagram(double c11, double grid_step, Measure m,
                                      ChannelKind channel = ChannelKind::BitFlip, int jobs = 1);

struct RegionAreas {
    std::size_t physical = 0;
    std::size_t entangled = 0;
    std::size_t freezing = 0;
    std::size_t separable_freezing = 0;
};
RegionAreas region_areas(const std::vector<PhasePoint>& grid);

struct NonConvexityWitness {
    CorrelatorState first, second, mixture;
    double p = 0.5;
    std::string violated_clause;
    FreezingReport mixture_report;
};

NonConvexityWitness nonconvexity_witness(Measure m = Measure::Discord, std::uint64_t seed = 7);

// Random physical state obeying clause (i) and passing the NS check.
CorrelatorState random_freezing_state(Measure m, std::mt19937_64& rng, bool on_circle = false,
                                      bool bell_diagonal = false);

}  // namespace qcf
