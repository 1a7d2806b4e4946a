#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcfreeze/channels.hpp"
#include "qcfreeze/core.hpp"
#include "qcfreeze/correlations.hpp"
#include "qcfreeze/freezing_index.hpp"

namespace qcf {

// H = (J/2) sum_i [(1+g) X_i X_{i+1} + (1-g) Y_i Y_{i+1}] + h sum_i Z_i,
// periodic boundaries, lambda = h / J.
struct XYParams {
    double J = 1.0;
    double g = 1.0;
    double lambda = 1.0;
    std::optional<int> size;  // empty: thermodynamic limit

    double h() const { return lambda * J; }
};

struct NNObservables {
    double mz = 0.0;
    double cxx = 0.0;
    double cyy = 0.0;
    double czz = 0.0;
};

inline constexpr int kMaxFermionSize = 4096;
inline constexpr int kMaxEDSize = 12;

NNObservables ground_state_observables(const XYParams& p);

struct EDResult {
    NNObservables obs;
    double energy = 0.0;
    bool degenerate = false;
    // the other parity sector's ground state when it is degenerate with obs
    std::optional<NNObservables> other_branch;
    double sector_gap = 0.0;  // |E_even - E_odd|
};

EDResult ed_oracle(const XYParams& p);

// Dense diagonalisation of the same Hamiltonian (N <= 10), used to validate
// the Lanczos path.
EDResult ed_dense(const XYParams& p);

CorrelatorState nn_correlators(const NNObservables& o);
DensityMatrix nn_reduced_density(const XYParams& p);

struct QptScanConfig {
    double g = 1.0;
    double J = 1.0;
    double lambda_min = 0.6;
    double lambda_max = 1.4;
    std::size_t lambda_points = 81;
    ChannelKind channel = ChannelKind::BitFlip;
    Measure measure = Measure::Discord;
    double delta = kDefaultDelta;
    double min_width = kDefaultMinWidth;
    std::size_t gamma_points = 1001;
    std::optional<int> size;
    // max |slope| must exceed this multiple of the median |slope|
    double abruptness_ratio = 1.5;
    TrajectoryOptions trajectory{Method::Hybrid, SphereSearchOptions{}, 1};
    bool keep_trajectories = false;
};

struct QptScan {
    std::vector<double> lambdas;
    std::vector<double> eta;
    double lambda_c = 0.0;
    double max_slope = 0.0;
    double median_slope = 0.0;
    bool conclusive = false;
    std::vector<Trajectory> trajectories;
};

double eta_at(const QptScanConfig& cfg, double lambda, Trajectory* keep = nullptr);
QptScan qpt_scan(const QptScanConfig& cfg);

struct ScalingFit {
    std::vector<std::pair<int, double>> points;
    double lambda_inf = 0.0;
    double exponent = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;  // rms of the log-log regression
    bool monotone = true;
    std::vector<std::string> warnings;
};

// Least squares of log|lambda_N - lambda_inf| = log|k| + b log N. With
// fixed_asymptote unset, lambda_inf comes from a direct least-squares fit of
// lambda_N = lambda_inf + k N^b with b in [-4, -0.01].
ScalingFit scaling_fit(std::span<const std::pair<int, double>> points,
                       std::optional<double> fixed_asymptote = std::nullopt);

}  // namespace qcf
