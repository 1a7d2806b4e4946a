#include "qcfreeze/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace qcf {

NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f, std::array<double, 2> x0,
                                double step, double tolerance, int max_iterations) {
    using Pt = std::array<double, 2>;
    std::array<Pt, 3> p{x0, Pt{x0[0] + step, x0[1]}, Pt{x0[0], x0[1] + step}};
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) v[i] = f(p[i][0], p[i][1]);

    auto lerp = [](const Pt& a, const Pt& b, double t) { return Pt{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
    int it = 0;
    for (; it < max_iterations; ++it) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::array<Pt, 3> ps{p[idx[0]], p[idx[1]], p[idx[2]]};
        std::array<double, 3> vs{v[idx[0]], v[idx[1]], v[idx[2]]};
        p = ps;
        v = vs;
        const double spread = std::max(std::abs(p[1][0] - p[0][0]) + std::abs(p[1][1] - p[0][1]),
                                       std::abs(p[2][0] - p[0][0]) + std::abs(p[2][1] - p[0][1]));
        if (v[2] - v[0] <= tolerance && spread < 1e-6) break;

        const Pt c{0.5 * (p[0][0] + p[1][0]), 0.5 * (p[0][1] + p[1][1])};
        const Pt r = lerp(c, p[2], -1.0);
        const double fr = f(r[0], r[1]);
        if (fr < v[0]) {
            const Pt e = lerp(c, p[2], -2.0);
            const double fe = f(e[0], e[1]);
            if (fe < fr) {
                p[2] = e, v[2] = fe;
            } else {
                p[2] = r, v[2] = fr;
            }
            continue;
        }
        if (fr < v[1]) {
            p[2] = r, v[2] = fr;
            continue;
        }
        const bool outside = fr < v[2];
        const Pt k = outside ? lerp(c, r, 0.5) : lerp(c, p[2], 0.5);
        const double fk = f(k[0], k[1]);
        if (fk < (outside ? fr : v[2])) {
            p[2] = k, v[2] = fk;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            p[i] = lerp(p[0], p[i], 0.5);
            v[i] = f(p[i][0], p[i][1]);
        }
    }
    const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    return {p[best], v[best], it};
}

namespace {

std::pair<double, double> fold_angles(double theta, double phi) {
    constexpr double pi = std::numbers::pi;
    theta = std::remainder(theta, 2 * pi);  // (-pi, pi]
    if (theta < 0) {
        theta = -theta;
        phi += pi;
    }
    phi = std::fmod(phi, 2 * pi);
    if (phi < 0) phi += 2 * pi;
    return {theta, phi};
}

}  // namespace

SphereMinimum minimize_on_sphere(const std::function<double(double, double)>& f, const SphereSearchOptions& opts) {
    constexpr double pi = std::numbers::pi;
    struct Cand {
        double v, t, p;
    };
    std::vector<Cand> grid;
    grid.reserve(static_cast<std::size_t>(opts.n_theta) * opts.n_phi);
    const double dt = opts.n_theta > 1 ? pi / (opts.n_theta - 1) : 0.0;
    const double dp = 2 * pi / opts.n_phi;
    for (int i = 0; i < opts.n_theta; ++i) {
        const double t = i * dt;
        // the poles are single points on the sphere
        const int nphi = (i == 0 || i == opts.n_theta - 1) ? 1 : opts.n_phi;
        for (int j = 0; j < nphi; ++j) grid.push_back({0.0, t, j * dp});
    }
    for (auto& c : grid) c.v = f(c.t, c.p);
    const int starts = std::min<int>(opts.n_starts, static_cast<int>(grid.size()));
    std::partial_sort(grid.begin(), grid.begin() + starts, grid.end(), [](const Cand& a, const Cand& b) {
        if (a.v != b.v) return a.v < b.v;
        if (a.t != b.t) return a.t < b.t;
        return a.p < b.p;
    });
    SphereMinimum best{grid[0].t, grid[0].p, grid[0].v};
    const double step = 0.5 * std::max(dt, dp);
    for (int s = 0; s < starts; ++s) {
        const auto r = nelder_mead_2d(f, {grid[s].t, grid[s].p}, step, opts.tolerance, opts.max_iterations);
        if (r.value < best.value) best = {r.x[0], r.x[1], r.value};
    }
    const auto [t, p] = fold_angles(best.theta, best.phi);
    best.theta = t;
    best.phi = p;
    return best;
}

}  // namespace qcf
