#pragma once

#include <span>
#include <string>
#include <vector>

#include "qcfreeze/channels.hpp"
#include "qcfreeze/correlations.hpp"
#include "qcfreeze/freezing.hpp"

namespace qcf {

struct Trajectory {
    std::vector<double> gammas;
    std::vector<double> values;
    std::string label;
};

// Throws DomainError unless gammas are strictly ascending in [0, 1], the
// lengths match and values are non-negative.
void validate(const Trajectory& t);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct TrajectoryOptions {
    Method method = Method::Hybrid;
    SphereSearchOptions search{};
    int jobs = 1;
};

Trajectory sample_trajectory(const DensityMatrix& initial, ChannelKind channel, Measure measure,
                             std::span<const double> gamma_grid, const TrajectoryOptions& opts = {});
Trajectory sample_trajectory(const CorrelatorState& initial, ChannelKind channel, Measure measure,
                             std::span<const double> gamma_grid, const TrajectoryOptions& opts = {});

struct FreezingInterval {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double mean_value = 0.0;
    std::size_t first = 0;
    std::size_t last = 0;
};

inline constexpr double kDefaultDelta = 0.01;
inline constexpr double kDefaultMinWidth = 0.02;

// Greedy left-to-right: an interval anchored at sample i extends while
// |Q_j - Q_i| <= delta and ends where the linearly interpolated trajectory
// leaves the band. It is kept if it covers at least two samples and its width
// reaches min_width, after which the scan resumes at the next sample;
// otherwise the anchor moves by one sample.
std::vector<FreezingInterval> detect_intervals(const Trajectory& t, double delta,
                                               double min_width = kDefaultMinWidth);

// Trapezoidal integral of Q over [g1, g2], interpolating linearly at the ends.
double integrate(const Trajectory& t, double g1, double g2);

double index_from_intervals(const Trajectory& t, std::span<const FreezingInterval> intervals);
double freezing_index(const Trajectory& t, double delta, double min_width = kDefaultMinWidth);

struct ExactInterval {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double frozen_value = 0.0;
};

std::vector<ExactInterval> exact_intervals(std::span<const FreezingReport> reports);
double exact_index(const Trajectory& t, std::span<const ExactInterval> intervals);
double exact_index(const Trajectory& t, std::span<const FreezingReport> reports);

}  // namespace qcf
