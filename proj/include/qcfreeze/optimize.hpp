#pragma once

#include <array>
#include <functional>

namespace qcf {

struct SphereSearchOptions {
    int n_theta = 64;
    int n_phi = 128;
    int n_starts = 5;
    double tolerance = 1e-9;
    int max_iterations = 400;
};

struct SphereMinimum {
    double theta = 0.0;
    double phi = 0.0;
    double value = 0.0;
};

struct NelderMeadResult {
    std::array<double, 2> x{};
    double value = 0.0;
    int iterations = 0;
};

NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f, std::array<double, 2> x0,
                                double step, double tolerance, int max_iterations);

// Grid scan over theta in [0, pi] (inclusive) x phi in [0, 2 pi), then
// Nelder-Mead from the best grid points. Angles of the result are folded
// back into theta in [0, pi], phi in [0, 2 pi).
SphereMinimum minimize_on_sphere(const std::function<double(double, double)>& f,
                                 const SphereSearchOptions& opts = {});

}  // namespace qcf
