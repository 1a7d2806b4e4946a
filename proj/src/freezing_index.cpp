#include "qcfreeze/freezing_index.hpp"

#include <algorithm>
#include <cmath>

#include "qcfreeze/parallel.hpp"

namespace qcf {

void validate(const Trajectory& t) {
    if (t.gammas.size() != t.values.size()) throw DomainError("trajectory gammas and values differ in length");
    for (std::size_t i = 0; i < t.gammas.size(); ++i) {
        if (!(t.gammas[i] >= 0.0 && t.gammas[i] <= 1.0)) throw DomainError("trajectory gamma outside [0, 1]");
        if (i > 0 && !(t.gammas[i] > t.gammas[i - 1])) throw DomainError("trajectory gammas not ascending");
        if (!(t.values[i] >= 0.0)) throw DomainError("trajectory value negative");
    }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) throw DomainError("grid needs at least two points and hi > lo");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * double(i) / double(points - 1);
    g.back() = hi;
    return g;
}

Trajectory sample_trajectory(const DensityMatrix& initial, ChannelKind channel, Measure measure,
                             std::span<const double> gamma_grid, const TrajectoryOptions& opts) {
    Trajectory t;
    t.gammas.assign(gamma_grid.begin(), gamma_grid.end());
    t.values.assign(gamma_grid.size(), 0.0);
    t.label = std::string(to_string(measure)) + "/" + std::string(to_string(channel));
    parallel_for(gamma_grid.size(), opts.jobs, [&](std::size_t i) {
        const DensityMatrix rho = apply_local_channel(initial, channel, Gamma(gamma_grid[i]));
        t.values[i] = quantum_correlation(rho, measure, opts.method, opts.search).value;
    });
    validate(t);
    return t;
}

Trajectory sample_trajectory(const CorrelatorState& initial, ChannelKind channel, Measure measure,
                             std::span<const double> gamma_grid, const TrajectoryOptions& opts) {
    return sample_trajectory(to_density(initial), channel, measure, gamma_grid, opts);
}

double integrate(const Trajectory& t, double g1, double g2) {
    if (g2 <= g1 || t.gammas.size() < 2) return 0.0;
    auto value_at = [&](double g) {
        const auto it = std::lower_bound(t.gammas.begin(), t.gammas.end(), g);
        if (it == t.gammas.begin()) return t.values.front();
        if (it == t.gammas.end()) return t.values.back();
        const std::size_t k = static_cast<std::size_t>(it - t.gammas.begin());
        const double w = (g - t.gammas[k - 1]) / (t.gammas[k] - t.gammas[k - 1]);
        return t.values[k - 1] + w * (t.values[k] - t.values[k - 1]);
    };
    std::vector<std::pair<double, double>> pts{{g1, value_at(g1)}};
    for (std::size_t i = 0; i < t.gammas.size(); ++i)
        if (t.gammas[i] > g1 && t.gammas[i] < g2) pts.emplace_back(t.gammas[i], t.values[i]);
    pts.emplace_back(g2, value_at(g2));
    double acc = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        acc += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
    return acc;
}

std::vector<FreezingInterval> detect_intervals(const Trajectory& t, double delta, double min_width) {
    if (!(delta > 0.0)) throw DomainError("tolerance delta must be positive");
    if (t.gammas.empty()) throw DomainError("empty trajectory");
    validate(t);
    std::vector<FreezingInterval> out;
    const std::size_t n = t.gammas.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(t.values[j + 1] - t.values[i]) <= delta) ++j;
        // the interval closes where the interpolated trajectory leaves the band
        double end = t.gammas[j];
        if (j + 1 < n) {
            const double step = t.values[j + 1] - t.values[j];
            const double level = t.values[i] + (t.values[j + 1] > t.values[i] ? delta : -delta);
            if (step != 0.0) end += (level - t.values[j]) / step * (t.gammas[j + 1] - t.gammas[j]);
        }
        const double width = end - t.gammas[i];
        if (j > i && width >= min_width) {
            FreezingInterval iv;
            iv.gamma1 = t.gammas[i];
            iv.gamma2 = end;
            iv.first = i;
            iv.last = j;
            iv.mean_value = integrate(t, iv.gamma1, iv.gamma2) / width;
            out.push_back(iv);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

double index_from_intervals(const Trajectory& t, std::span<const FreezingInterval> intervals) {
    double acc = 0.0;
    for (const auto& iv : intervals) acc += iv.mean_value * (1.0 - iv.gamma1) * integrate(t, iv.gamma1, iv.gamma2);
    return std::pow(std::max(0.0, acc), 0.25);
}

double freezing_index(const Trajectory& t, double delta, double min_width) {
    const auto iv = detect_intervals(t, delta, min_width);
    return index_from_intervals(t, iv);
}

std::vector<ExactInterval> exact_intervals(std::span<const FreezingReport> reports) {
    std::vector<ExactInterval> out;
    for (const auto& r : reports)
        if (r.satisfied && r.terminal > 0.0) out.push_back({0.0, r.terminal, r.frozen_value});
    return out;
}

double exact_index(const Trajectory& t, std::span<const ExactInterval> intervals) {
    double acc = 0.0;
    for (const auto& iv : intervals) {
        if (iv.gamma2 <= iv.gamma1) continue;
        acc += iv.frozen_value * (1.0 - iv.gamma1) * integrate(t, iv.gamma1, iv.gamma2);
    }
    return std::pow(std::max(0.0, acc), 0.25);
}

double exact_index(const Trajectory& t, std::span<const FreezingReport> reports) {
    const auto iv = exact_intervals(reports);
    return exact_index(t, iv);
}

}  // namespace qcf
