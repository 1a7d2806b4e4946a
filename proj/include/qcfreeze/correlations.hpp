#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "qcfreeze/channels.hpp"
#include "qcfreeze/core.hpp"
#include "qcfreeze/optimize.hpp"

namespace qcf {

// Measurement direction on qubit A: n = (sin t cos p, sin t sin p, cos t).
struct Projector {
    double theta = 0.0;
    double phi = 0.0;
};

enum class RegularSet { S1, S2, S3 };  // z, y, x measurement

inline constexpr std::array<Projector, 3> kRegularProjectors{
    Projector{0.0, 0.0}, Projector{1.5707963267948966, 1.5707963267948966}, Projector{1.5707963267948966, 0.0}};

struct MeasurementClass {
    bool regular = true;
    RegularSet set = RegularSet::S1;  // meaningful only when regular
    bool operator==(const MeasurementClass&) const = default;
};

std::string_view to_string(MeasurementClass c);

enum class Method { Regular, BruteForce, Hybrid };
enum class Measure { Discord, WorkDeficit };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view name);  // qd | qwd
Method parse_method(std::string_view name);

inline constexpr double kIrregularGap = 1e-6;

struct MeasurementOutcome {
    std::array<double, 2> p{};
    std::array<double, 2> s{};  // entropies of the conditional states of B
    double conditional_entropy() const { return p[0] * s[0] + p[1] * s[1]; }
    double outcome_entropy() const;
};

// Precomputed view of a state split as A (first qubit) : rest.
class Bipartite {
public:
    explicit Bipartite(const DensityMatrix& rho);

    MeasurementOutcome measure(Projector pr) const;
    double entropy_ab() const { return s_ab_; }
    double entropy_a() const { return s_a_; }
    double entropy_b() const { return s_b_; }
    int n_qubits() const { return n_; }

private:
    int n_;
    double s_ab_, s_a_, s_b_;
    // two-qubit Bloch data
    Eigen::Vector3d a_, b_;
    Eigen::Matrix3d t_;
    // general blocks of rho in the basis of qubit A
    CMat r00_, r01_, r11_;
};

struct CorrelationResult {
    double value = 0.0;
    MeasurementClass cls;
    Projector optimum;
    // best value restricted to the regular sets, and which set attains it
    double regular_value = 0.0;
    RegularSet best_regular = RegularSet::S1;
    // outcome probabilities of the optimal measurement
    std::array<double, 2> p{};
};

double measured_conditional_entropy(const DensityMatrix& rho, double theta, double phi);

CorrelationResult discord(const DensityMatrix& rho, Method method = Method::Hybrid,
                          const SphereSearchOptions& opts = {});
CorrelationResult work_deficit(const DensityMatrix& rho, Method method = Method::Hybrid,
                               const SphereSearchOptions& opts = {});
CorrelationResult quantum_correlation(const DensityMatrix& rho, Measure measure, Method method = Method::Hybrid,
                                      const SphereSearchOptions& opts = {});

double classical_correlation(const DensityMatrix& rho, const SphereSearchOptions& opts = {});
double mutual_information(const DensityMatrix& rho);

// Closed form for the single-qubit : (2n-1)-qubit split of a diagonal state
// after bit-flip noise.
double discord_multipartite(const DiagonalState& d, Gamma gamma);

struct DeficitDiscordRelation {
    double discord = 0.0;
    double work_deficit = 0.0;
    double entropy_a = 0.0;
    double outcome_entropy = 0.0;  // H(p) at the discord optimum
    bool same_ensemble = false;
    // W - (D - S(A) + H(p)); meaningful only with same_ensemble
    double residual = 0.0;
    bool identity_holds = false;
    Projector discord_optimum, deficit_optimum;
};

DeficitDiscordRelation deficit_discord_relation(const DensityMatrix& rho, const SphereSearchOptions& opts = {});

}  // namespace qcf
