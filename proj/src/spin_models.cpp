#include "qcfreeze/spin_models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "qcfreeze/parallel.hpp"

namespace qcf {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const XYParams& p) {
    if (!(p.J > 0.0)) throw DomainError("coupling J must be positive");
    if (!(p.g >= -1.0 && p.g <= 1.0)) throw DomainError("anisotropy g must lie in [-1, 1]");
    if (!(p.lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    if (p.size) {
        if (*p.size < 2 || *p.size % 2 != 0) throw DomainError("chain size must be even and >= 2");
        if (*p.size > kMaxFermionSize) throw SizeError("chain size above 4096");
    }
}

NNObservables from_sums(double f0, double f1, double a1) {
    NNObservables o;
    o.mz = 1.0 - 2.0 * f0;
    o.cxx = 2.0 * f1 - 2.0 * a1;
    o.cyy = 2.0 * f1 + 2.0 * a1;
    o.czz = o.mz * o.mz - o.cxx * o.cyy;
    return o;
}

struct Sector {
    double energy = 0.0;
    NNObservables obs;
};

// Fermion parity sector of the periodic chain: antiperiodic momenta for
// even parity, periodic momenta (with unpaired k = 0, pi) for odd parity.
Sector fermion_sector(const XYParams& p, bool odd) {
    const int n = *p.size;
    const double J = p.J, h = p.h(), g = p.g;
    std::vector<double> k(n), eps(n), e(n), occ(n), anom(n);
    std::vector<bool> paired(n);
    double energy = h * n;
    int unpaired_occupied = 0;
    for (int m = 0; m < n; ++m) {
        k[m] = 2 * kPi * (m + (odd ? 0.0 : 0.5)) / n;
        eps[m] = 2 * (J * std::cos(k[m]) - h);
        e[m] = 2 * std::hypot(J * std::cos(k[m]) - h, J * g * std::sin(k[m]));
        paired[m] = odd ? (m != 0 && 2 * m != n) : true;
        if (paired[m]) {
            occ[m] = e[m] > 0 ? 0.5 * (1 - eps[m] / e[m]) : 0.5;
            anom[m] = e[m] > 0 ? J * g * std::sin(k[m]) / e[m] : 0.0;
            energy += 0.5 * (eps[m] - e[m]);
        } else {
            occ[m] = eps[m] < 0 ? 1.0 : 0.0;
            anom[m] = 0.0;
            energy += eps[m] * occ[m];
            unpaired_occupied += eps[m] < 0 ? 1 : 0;
        }
    }
    if (odd && unpaired_occupied % 2 == 0) {
        // parity constraint violated: add the cheapest single excitation
        int best = -1;
        double cost = 0.0;
        for (int m = 0; m < n; ++m) {
            const double c = paired[m] ? e[m] : std::abs(eps[m]);
            if (best < 0 || c < cost) best = m, cost = c;
        }
        energy += cost;
        if (!paired[best]) {
            occ[best] = 1.0 - occ[best];
        } else {
            // one quasiparticle: the (k, -k) pair holds exactly one fermion
            for (int m : {best, (n - best) % n}) {
                occ[m] = 0.5;
                anom[m] = 0.0;
            }
        }
    }
    double f0 = 0, f1 = 0, a1 = 0;
    for (int m = 0; m < n; ++m) {
        f0 += occ[m];
        f1 += std::cos(k[m]) * occ[m];
        a1 += anom[m] * std::sin(k[m]);
    }
    return {energy, from_sums(f0 / n, f1 / n, a1 / n)};
}

NNObservables thermodynamic_limit(const XYParams& p) {
    const double J = p.J, h = p.h(), g = p.g;
    auto energy = [&](double k) { return 2 * std::hypot(J * std::cos(k) - h, J * g * std::sin(k)); };
    auto occ = [&](double k) {
        const double e = energy(k), eps = 2 * (J * std::cos(k) - h);
        return e > 0 ? 0.5 * (1 - eps / e) : 0.5;
    };
    std::vector<double> cuts{0.0};
    if (h < J) cuts.push_back(std::acos(h / J));
    cuts.push_back(kPi);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double f0 = 0, f1 = 0, a1 = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        f0 += GK::integrate(occ, a, b, 20, 1e-14);
        f1 += GK::integrate([&](double k) { return std::cos(k) * occ(k); }, a, b, 20, 1e-14);
        a1 += GK::integrate(
            [&](double k) {
                const double e = energy(k);
                return e > 0 ? J * g * std::sin(k) * std::sin(k) / e : 0.0;
            },
            a, b, 20, 1e-14);
    }
    return from_sums(f0 / kPi, f1 / kPi, a1 / kPi);
}

// ---- exact diagonalisation in the sigma^z basis (bit 1 = spin down) ----

struct Chain {
    int n;
    double J, g, h;

    double diagonal(std::uint32_t s) const {
        const int down = std::popcount(s);
        return h * (n - 2 * down);
    }
    template <class Visit>
    void bonds(std::uint32_t s, Visit&& visit) const {
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            const std::uint32_t bi = 1u << (n - 1 - i), bj = 1u << (n - 1 - j);
            const bool same = ((s & bi) != 0) == ((s & bj) != 0);
            visit(s ^ bi ^ bj, same ? J * g : J);
        }
    }
    void apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
        out.setZero(v.size());
        for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(v.size()); ++s) {
            if (v[s] == 0.0) continue;
            out[s] += diagonal(s) * v[s];
            bonds(s, [&](std::uint32_t t, double amp) { out[t] += amp * v[s]; });
        }
    }
    NNObservables observables(const Eigen::VectorXd& v) const {
        NNObservables o;
        const double norm2 = v.squaredNorm();
        for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(v.size()); ++s) {
            const double w = v[s] * v[s];
            for (int i = 0; i < n; ++i) {
                const int j = (i + 1) % n;
                const std::uint32_t bi = 1u << (n - 1 - i), bj = 1u << (n - 1 - j);
                const double zi = (s & bi) ? -1.0 : 1.0, zj = (s & bj) ? -1.0 : 1.0;
                o.mz += w * zi;
                o.czz += w * zi * zj;
                const double flip = v[s] * v[s ^ bi ^ bj];
                o.cxx += flip;
                o.cyy += (zi == zj ? -1.0 : 1.0) * flip;
            }
        }
        const double scale = 1.0 / (n * norm2);
        o.mz *= scale;
        o.czz *= scale;
        o.cxx *= scale;
        o.cyy *= scale;
        return o;
    }
};

struct LanczosResult {
    double e0 = 0.0;
    double e1 = 0.0;
    Eigen::VectorXd vec;
};

LanczosResult lanczos_sector(const Chain& ch, int parity) {
    const std::size_t dim = std::size_t(1) << ch.n;
    auto in_sector = [&](std::uint32_t s) { return std::popcount(s) % 2 == parity; };
    std::mt19937_64 rng(0x5eed + parity);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(dim);
    for (std::uint32_t s = 0; s < dim; ++s) v[s] = in_sector(s) ? nd(rng) : 0.0;
    v.normalize();
    const int max_m = static_cast<int>(std::min<std::size_t>(dim / 2, 400));
    std::vector<Eigen::VectorXd> basis{v};
    std::vector<double> alpha, beta;
    Eigen::VectorXd w;
    LanczosResult res;
    for (int m = 0; m < max_m; ++m) {
        ch.apply(basis.back(), w);
        for (std::uint32_t s = 0; s < dim; ++s)
            if (!in_sector(s)) w[s] = 0.0;
        alpha.push_back(basis.back().dot(w));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b.dot(w) * b;
        const double bnorm = w.norm();
        const int size = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
        for (int i = 0; i < size; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const auto& ev = es.eigenvalues();
        const double r0 = std::abs(bnorm * es.eigenvectors()(size - 1, 0));
        const double r1 = size > 1 ? std::abs(bnorm * es.eigenvectors()(size - 1, 1)) : 1.0;
        const bool done = bnorm < 1e-13 || (r0 < 1e-12 && r1 < 1e-9) || m + 1 == max_m;
        if (done) {
            res.e0 = ev[0];
            res.e1 = size > 1 ? ev[1] : std::numeric_limits<double>::infinity();
            res.vec = Eigen::VectorXd::Zero(dim);
            for (int i = 0; i < size; ++i) res.vec += es.eigenvectors()(i, 0) * basis[i];
            res.vec.normalize();
            if (r0 > 1e-9) throw NumericalError("Lanczos did not converge");
            return res;
        }
        beta.push_back(bnorm);
        basis.push_back(w / bnorm);
    }
    throw NumericalError("Lanczos did not converge");
}

EDResult combine_sectors(const Chain& ch, double e_even, const Eigen::VectorXd& v_even, double e_odd,
                         const Eigen::VectorXd& v_odd) {
    EDResult r;
    r.sector_gap = std::abs(e_even - e_odd);
    const bool even_lower = e_even <= e_odd;
    r.energy = even_lower ? e_even : e_odd;
    r.obs = ch.observables(even_lower ? v_even : v_odd);
    if (r.sector_gap < 1e-10) {
        r.degenerate = true;
        r.other_branch = ch.observables(even_lower ? v_odd : v_even);
    }
    return r;
}

Chain make_chain(const XYParams& p, int max_size) {
    check_params(p);
    if (!p.size) throw DomainError("exact diagonalisation needs a finite size");
    if (*p.size > max_size) throw SizeError("chain too large for exact diagonalisation");
    return Chain{*p.size, p.J, p.g, p.h()};
}

}  // namespace

NNObservables ground_state_observables(const XYParams& p) {
    check_params(p);
    if (!p.size) return thermodynamic_limit(p);
    const Sector even = fermion_sector(p, false);
    const Sector odd = fermion_sector(p, true);
    return odd.energy < even.energy - 1e-12 ? odd.obs : even.obs;
}

EDResult ed_oracle(const XYParams& p) {
    const Chain ch = make_chain(p, kMaxEDSize);
    const auto even = lanczos_sector(ch, 0);
    const auto odd = lanczos_sector(ch, 1);
    EDResult r = combine_sectors(ch, even.e0, even.vec, odd.e0, odd.vec);
    const double next = std::min(even.e0 <= odd.e0 ? even.e1 : odd.e1, std::max(even.e0, odd.e0));
    if (next - r.energy < 1e-8) r.degenerate = true;
    return r;
}

EDResult ed_dense(const XYParams& p) {
    const Chain ch = make_chain(p, 10);
    const std::size_t dim = std::size_t(1) << ch.n;
    double e[2];
    Eigen::VectorXd vecs[2];
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<std::uint32_t> states;
        for (std::uint32_t s = 0; s < dim; ++s)
            if (std::popcount(s) % 2 == parity) states.push_back(s);
        std::vector<int> pos(dim, -1);
        for (std::size_t i = 0; i < states.size(); ++i) pos[states[i]] = static_cast<int>(i);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(states.size(), states.size());
        for (std::size_t i = 0; i < states.size(); ++i) {
            h(i, i) += ch.diagonal(states[i]);
            ch.bonds(states[i], [&](std::uint32_t t, double amp) { h(pos[t], i) += amp; });
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        e[parity] = es.eigenvalues()[0];
        vecs[parity] = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < states.size(); ++i) vecs[parity][states[i]] = es.eigenvectors()(i, 0);
    }
    return combine_sectors(ch, e[0], vecs[0], e[1], vecs[1]);
}

CorrelatorState nn_correlators(const NNObservables& o) {
    CorrelatorState s;
    s.c11 = o.cxx;
    s.c22 = o.cyy;
    s.c33 = o.czz;
    s.c30 = o.mz;
    s.c03 = o.mz;
    return s;
}

DensityMatrix nn_reduced_density(const XYParams& p) { return to_density(nn_correlators(ground_state_observables(p))); }

double eta_at(const QptScanConfig& cfg, double lambda, Trajectory* keep) {
    XYParams p{cfg.J, cfg.g, lambda, cfg.size};
    const DensityMatrix rho = nn_reduced_density(p);
    const auto grid = uniform_grid(0.0, 1.0, cfg.gamma_points);
    Trajectory t = sample_trajectory(rho, cfg.channel, cfg.measure, grid, cfg.trajectory);
    t.label += " lambda=" + std::to_string(lambda);
    const double eta = freezing_index(t, cfg.delta, cfg.min_width);
    if (keep) *keep = std::move(t);
    return eta;
}

QptScan qpt_scan(const QptScanConfig& cfg) {
    if (cfg.lambda_points < 3) throw DomainError("lambda scan needs at least three points");
    if (!(cfg.lambda_max > cfg.lambda_min) || cfg.lambda_min < 0.0) throw DomainError("invalid lambda range");
    QptScan out;
    out.lambdas = uniform_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_points);
    out.eta.assign(out.lambdas.size(), 0.0);
    if (cfg.keep_trajectories) out.trajectories.resize(out.lambdas.size());
    QptScanConfig inner = cfg;
    inner.trajectory.jobs = 1;
    parallel_for(out.lambdas.size(), cfg.trajectory.jobs, [&](std::size_t i) {
        out.eta[i] = eta_at(inner, out.lambdas[i], cfg.keep_trajectories ? &out.trajectories[i] : nullptr);
    });
    std::vector<double> slopes;
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < out.lambdas.size(); ++i) {
        slopes.push_back(std::abs((out.eta[i + 1] - out.eta[i]) / (out.lambdas[i + 1] - out.lambdas[i])));
        if (slopes[i] > slopes[best]) best = i;
    }
    out.max_slope = slopes[best];
    std::vector<double> sorted = slopes;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    out.median_slope = sorted[sorted.size() / 2];
    // one bisection pass inside the steepest interval
    const double l0 = out.lambdas[best], l1 = out.lambdas[best + 1];
    const double lm = 0.5 * (l0 + l1);
    const double em = eta_at(inner, lm);
    const double left = std::abs(em - out.eta[best]), right = std::abs(out.eta[best + 1] - em);
    out.lambda_c = left >= right ? 0.5 * (l0 + lm) : 0.5 * (lm + l1);
    out.conclusive = out.max_slope > 0.0 && out.max_slope >= cfg.abruptness_ratio * out.median_slope;
    return out;
}

ScalingFit scaling_fit(std::span<const std::pair<int, double>> points, std::optional<double> fixed_asymptote) {
    if (points.size() < 4) throw DomainError("scaling fit needs at least four sizes");
    ScalingFit fit;
    fit.points.assign(points.begin(), points.end());
    std::sort(fit.points.begin(), fit.points.end());
    const double nmin = fit.points.front().first, nmax = fit.points.back().first;
    if (nmin <= 0 || nmax < 10 * nmin) throw DomainError("scaling fit needs sizes spanning at least one decade");
    const std::size_t m = fit.points.size();
    int sign = 0;
    for (std::size_t i = 1; i < m; ++i) {
        const double d = fit.points[i].second - fit.points[i - 1].second;
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) fit.monotone = false;
        if (sign == 0) sign = s;
    }
    if (!fit.monotone) fit.warnings.push_back("lambda_c^N is not monotone in N");

    // returns (sse, intercept, slope) of the log-log regression
    auto regress = [&](double linf) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [n, l] : fit.points) {
            const double x = std::log(double(n)), y = std::log(std::max(std::abs(l - linf), 1e-300));
            sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double c = (sy - b * sx) / m;
        double sse = 0;
        for (const auto& [n, l] : fit.points) {
            const double r = std::log(std::max(std::abs(l - linf), 1e-300)) - c - b * std::log(double(n));
            sse += r * r;
        }
        return std::array<double, 3>{sse, c, b};
    };

    double linf;
    if (fixed_asymptote) {
        linf = *fixed_asymptote;
    } else {
        // variable projection: for a fixed exponent the asymptote and the
        // amplitude enter linearly
        auto project = [&](double expo) {
            Eigen::MatrixXd a(m, 2);
            Eigen::VectorXd y(m);
            for (std::size_t i = 0; i < m; ++i) {
                a(i, 0) = 1.0;
                a(i, 1) = std::pow(double(fit.points[i].first), expo);
                y(i) = fit.points[i].second;
            }
            const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
            return std::pair{(a * coef - y).squaredNorm(), coef(0)};
        };
        constexpr double kLo = -4.0, kHi = -0.01;
        constexpr int kScan = 400;
        int best = 0;
        double best_sse = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= kScan; ++i) {
            const double e = kLo + (kHi - kLo) * i / kScan;
            const double v = project(e).first;
            if (v < best_sse) best_sse = v, best = i;
        }
        const double step = (kHi - kLo) / kScan;
        const double a = std::max(kLo, kLo + (best - 1) * step), b = std::min(kHi, kLo + (best + 1) * step);
        const auto r = boost::math::tools::brent_find_minima([&](double e) { return project(e).first; }, a, b,
                                                             std::numeric_limits<double>::digits);
        linf = project(r.first).second;
    }
    const auto [sse, c, b] = regress(linf);
    fit.lambda_inf = linf;
    fit.exponent = b;
    const double dir = fit.points.back().second - linf >= 0 ? 1.0 : -1.0;
    fit.amplitude = dir * std::exp(c);
    fit.residual = std::sqrt(sse / m);
    if (!(b < 0)) fit.warnings.push_back("fitted exponent is not negative");
    return fit;
}

}  // namespace qcf
