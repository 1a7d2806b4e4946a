#include "qcfreeze/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcfreeze/channels.hpp"
#include "qcfreeze/core.hpp"
#include "qcfreeze/correlations.hpp"
#include "qcfreeze/freezing.hpp"
#include "qcfreeze/freezing_index.hpp"
#include "qcfreeze/spin_models.hpp"

namespace qcf::cli {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComputeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
auto compute(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw ComputeFailure(e.what());
    }
}

std::string num(double v) {
    if (v == 0.0) v = 0.0;  // no negative zero in output
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct Common {
    std::optional<int> jobs;
    std::string out_path;
    std::string config;
    std::uint64_t seed = 1;
};

struct StateOpts {
    std::string family = "canonical";
    std::optional<double> c11, c22, c33, c10, c01, c30, c03;
    double lambda = 1.0, g = 1.0, J = 1.0;
    std::optional<int> size;
};

struct GridOpts {
    double gmin = 0.0, gmax = 1.0;
    std::size_t points = 1001;
};

struct State {
    DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    std::optional<CorrelatorState> corr;
};

// Output routing: summary lines go to the terminal, CSV to --out or, when no
// file is given, to the terminal after '#'-prefixed summary lines.
class Sink {
public:
    Sink(std::ostream& out, const std::string& path, bool csv_to_stdout = true)
        : out_(out), csv_to_stdout_(csv_to_stdout) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    void summary(const std::string& line) { out_ << (file_ || !csv_to_stdout_ ? "" : "# ") << line << '\n'; }
    bool has_csv() const { return file_ || csv_to_stdout_; }
    std::ostream& csv() { return file_ ? static_cast<std::ostream&>(*file_) : out_; }
    void row(std::initializer_list<std::string> cells) {
        if (!has_csv()) return;
        bool first = true;
        for (const auto& c : cells) {
            csv() << (first ? "" : ",") << c;
            first = false;
        }
        csv() << '\n';
    }

private:
    std::ostream& out_;
    bool csv_to_stdout_;
    std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--jobs", c.jobs, "worker threads (default: QCFREEZE_JOBS or 1)");
    sub->add_option("--out", c.out_path, "CSV output file");
    sub->add_option("--config", c.config, "flat key=value file; command-line flags take precedence");
}

void add_state(CLI::App* sub, StateOpts& s) {
    sub->add_option("--family", s.family, "canonical | bd | xy")->check(CLI::IsMember({"canonical", "bd", "xy"}));
    sub->add_option("--c11", s.c11);
    sub->add_option("--c22", s.c22, "default -c11*c33");
    sub->add_option("--c33", s.c33);
    sub->add_option("--c10", s.c10, "default c11*c01");
    sub->add_option("--c01", s.c01);
    sub->add_option("--c30", s.c30);
    sub->add_option("--c03", s.c03);
    sub->add_option("--lambda", s.lambda, "xy family: h/J");
    sub->add_option("--g", s.g, "xy family: anisotropy");
    sub->add_option("--J", s.J, "xy family: coupling");
    sub->add_option("--size", s.size, "xy family: chain length (default: infinite chain)");
}

void add_grid(CLI::App* sub, GridOpts& g) {
    sub->add_option("--gmin", g.gmin);
    sub->add_option("--gmax", g.gmax);
    sub->add_option("--points", g.points, "gamma grid points");
}

double in_unit(const std::optional<double>& v, const char* name, double fallback) {
    const double x = v.value_or(fallback);
    if (!(x >= -1.0 && x <= 1.0)) throw ConfigError(std::string(name) + " must lie in [-1, 1]");
    return x;
}

State build_state(const StateOpts& o) {
    State st;
    if (o.family == "xy") {
        XYParams p;
        p.J = o.J;
        p.g = o.g;
        p.lambda = o.lambda;
        p.size = o.size;
        st.rho = nn_reduced_density(p);
        st.corr = from_density(st.rho).state;
        return st;
    }
    if (!o.c11 || !o.c33) throw ConfigError("--c11 and --c33 are required");
    CorrelatorState s;
    s.c11 = in_unit(o.c11, "c11", 0);
    s.c33 = in_unit(o.c33, "c33", 0);
    s.c22 = in_unit(o.c22, "c22", -s.c11 * s.c33);
    if (o.family == "bd") {
        if (o.c10 || o.c01 || o.c30 || o.c03) throw ConfigError("bd family takes no magnetizations");
    } else {
        s.c01 = in_unit(o.c01, "c01", 0);
        s.c10 = in_unit(o.c10, "c10", s.c11 * s.c01);
        s.c30 = in_unit(o.c30, "c30", 0);
        s.c03 = in_unit(o.c03, "c03", 0);
    }
    const auto phys = is_physical(s);
    if (!phys.physical) throw ConfigError("state is not physical (min eigenvalue " + num(phys.min_eigenvalue) + ")");
    st.corr = s;
    st.rho = to_density(s);
    return st;
}

std::vector<double> build_grid(const GridOpts& g) {
    if (!(g.gmin >= 0.0 && g.gmax <= 1.0 && g.gmax > g.gmin)) throw ConfigError("need 0 <= gmin < gmax <= 1");
    if (g.points < 2) throw ConfigError("need at least two gamma points");
    return uniform_grid(g.gmin, g.gmax, g.points);
}

void require_range(double v, double lo, double hi, const char* name) {
    if (!(v >= lo && v <= hi)) throw ConfigError(std::string(name) + " out of range");
}

std::string report_line(const FreezingReport& r) {
    if (r.satisfied)
        return "FREEZES, gamma_f≈" + num(r.terminal) + ", Q_f≈" + num(r.frozen_value) +
               (r.full_interval ? " (whole interval)" : "");
    std::string why = r.diagnostics.empty() ? "no condition set satisfied" : r.diagnostics.front();
    return "DOES NOT FREEZE (" + why + ")";
}

std::vector<std::pair<int, double>> read_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    std::vector<std::pair<int, double>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || !(std::isdigit(static_cast<unsigned char>(line[0])))) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double n, v;
        if (!(ss >> n >> v)) throw ConfigError("malformed line in '" + path + "': " + line);
        out.emplace_back(static_cast<int>(n), v);
    }
    return out;
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    Trajectory t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double g, v;
        if (!(ss >> g >> v)) {
            if (t.gammas.empty()) continue;  // header
            throw ConfigError("malformed line in '" + path + "'");
        }
        t.gammas.push_back(g);
        t.values.push_back(v);
    }
    try {
        validate(t);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (t.gammas.size() < 2) throw ConfigError("trajectory needs at least two samples");
    return t;
}

// Folds key=value lines from --config into the argument list for keys not
// given on the command line.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    if (args.size() < 2) return args;
    std::string path;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args[1]);
    } catch (const CLI::OptionNotFound&) {
        return args;  // the parser reports the unknown command
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto l = s.find_first_not_of(" \t\r\"");
            const auto r = s.find_last_not_of(" \t\r\"");
            return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
        };
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        while (!key.empty() && key[0] == '-') key.erase(0, 1);
        const std::string flag = "--" + key;
        if (key == "config") continue;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr) throw ConfigError("unknown config key '" + key + "'");
        bool given = false;
        for (std::size_t i = 2; i < args.size(); ++i)
            if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) given = true;
        if (given) continue;
        if (opt->get_type_size_max() == 0) {
            if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
            else if (!(value == "false" || value == "0" || value == "no"))
                throw ConfigError("config key '" + key + "' expects true or false");
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

int resolve_jobs(const Common& c) {
    int jobs = 1;
    if (const char* env = std::getenv("QCFREEZE_JOBS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw ConfigError("QCFREEZE_JOBS must be a positive integer");
        jobs = static_cast<int>(v);
    }
    if (c.jobs) {
        if (*c.jobs < 1) throw ConfigError("--jobs must be positive");
        jobs = *c.jobs;
    }
    return jobs;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Freezing of quantum correlations under local decoherence"};
    app.name("qcfreeze");
    app.require_subcommand(1);

    Common common;
    StateOpts state;
    GridOpts grid;
    std::string channel_name = "bf", measure_name = "qd", method_name = "hybrid";
    std::optional<double> delta;
    double min_width = kDefaultMinWidth;
    std::map<std::string, std::function<int()>> handlers;

    auto channel = [&] {
        try {
            return parse_channel(channel_name);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    };
    auto measure = [&] {
        try {
            return parse_measure(measure_name);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    };
    auto add_physics = [&](CLI::App* sub, bool with_method) {
        sub->add_option("--channel", channel_name, "bf | pf | bpf");
        sub->add_option("--measure", measure_name, "qd | qwd");
        if (with_method) sub->add_option("--method", method_name, "hybrid | regular | brute");
    };

    // trajectory
    {
        auto* sub = app.add_subcommand("trajectory", "quantum correlation along the decoherence path");
        add_common(sub, common);
        add_state(sub, state);
        add_grid(sub, grid);
        add_physics(sub, true);
        sub->add_option("--delta", delta, "also report effective freezing intervals");
        sub->add_option("--min-width", min_width);
        handlers["trajectory"] = [&] {
            const State st = build_state(state);
            const auto gammas = build_grid(grid);
            const auto ch = channel();
            const auto m = measure();
            TrajectoryOptions opts;
            opts.jobs = resolve_jobs(common);
            try {
                opts.method = parse_method(method_name);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            if (delta && !(*delta > 0)) throw ConfigError("--delta must be positive");
            Sink sink(out, common.out_path);
            const auto t = compute([&] { return sample_trajectory(st.rho, ch, m, gammas, opts); });
            if (st.corr) {
                const auto rep = compute([&] { return check_ns(to_bitflip_frame(*st.corr, ch), m); });
                sink.summary("exact freezing: " + report_line(rep));
            }
            if (delta) {
                const auto iv = compute([&] { return detect_intervals(t, *delta, min_width); });
                for (const auto& i : iv)
                    sink.summary("interval " + num(i.gamma1) + " " + num(i.gamma2) + " mean " + num(i.mean_value));
                sink.summary("eta_f=" + fixed6(index_from_intervals(t, iv)));
            }
            sink.row({"gamma", "value"});
            for (std::size_t i = 0; i < t.gammas.size(); ++i) sink.row({num(t.gammas[i]), num(t.values[i])});
            return kExitOk;
        };
    }

    // phase-diagram
    double c11_pd = 0.6, step = 0.01;
    {
        auto* sub = app.add_subcommand("phase-diagram", "freezing region over (c33, c01) at fixed c11");
        add_common(sub, common);
        sub->add_option("--c11", c11_pd);
        sub->add_option("--step", step, "grid step");
        add_physics(sub, false);
        handlers["phase-diagram"] = [&] {
            require_range(c11_pd, -1, 1, "--c11");
            if (!(step > 0 && step <= 1)) throw ConfigError("--step must lie in (0, 1]");
            if (channel() != ChannelKind::BitFlip)
                throw ConfigError("phase diagrams are tabulated for the bit-flip channel only");
            const auto m = measure();
            const int jobs = resolve_jobs(common);
            Sink sink(out, common.out_path);
            const auto grid_pts = compute([&] { return phase_diagram(c11_pd, step, m, ChannelKind::BitFlip, jobs); });
            const auto a = region_areas(grid_pts);
            sink.summary("points=" + std::to_string(grid_pts.size()) + " physical=" + std::to_string(a.physical) +
                         " entangled=" + std::to_string(a.entangled) + " freezing=" + std::to_string(a.freezing) +
                         " separable_freezing=" + std::to_string(a.separable_freezing));
            sink.row({"c33", "c01", "status", "gamma_f", "frozen_value"});
            for (const auto& p : grid_pts)
                sink.row({num(p.c33), num(p.c01), std::string(to_string(p.status)), num(p.gamma_f), num(p.frozen_value)});
            return kExitOk;
        };
    }

    // check and terminal
    for (const char* name : {"check", "terminal"}) {
        const bool is_check = std::string(name) == "check";
        auto* sub = app.add_subcommand(name, is_check ? "necessary and sufficient freezing conditions"
                                                      : "end of the exact freezing interval");
        add_common(sub, common);
        add_state(sub, state);
        add_physics(sub, false);
        handlers[name] = [&, is_check] {
            const State st = build_state(state);
            const auto ch = channel();
            const auto m = measure();
            Sink sink(out, common.out_path, false);
            const CorrelatorState s = to_bitflip_frame(*st.corr, ch);
            if (is_check) {
                const auto rep = compute([&] { return check_ns(s, m); });
                sink.summary(report_line(rep));
                sink.row({"branch", "ratio", "positivity", "subadditivity", "lhs", "rhs"});
                for (DecayAxis ax : {DecayAxis::Z, DecayAxis::Y}) {
                    const auto& c = rep.clauses[static_cast<int>(ax)];
                    sink.summary(std::string(to_string(ax)) + ": ratio=" + (c.ratio ? "yes" : "no") +
                                 " positivity=" + (c.positivity ? "yes" : "no") + " subadditivity=" +
                                 (c.subadditivity ? "yes" : "no") + " lhs=" + num(c.lhs) + " rhs=" + num(c.rhs) +
                                 (c.note.empty() ? "" : " (" + c.note + ")"));
                    sink.row({std::string(to_string(ax)), c.ratio ? "1" : "0", c.positivity ? "1" : "0",
                              c.subadditivity ? "1" : "0", num(c.lhs), num(c.rhs)});
                }
                for (std::size_t i = 1; i < rep.diagnostics.size(); ++i) sink.summary(rep.diagnostics[i]);
            } else {
                const auto t = compute([&] { return freezing_terminal(s, m); });
                sink.summary("gamma_f=" + num(t.gamma_f) + (t.full_interval ? " (whole interval)" : ""));
                sink.row({"gamma_f", "full_interval"});
                sink.row({num(t.gamma_f), t.full_interval ? "1" : "0"});
            }
            return kExitOk;
        };
    }

    // complementarity
    ComplementaritySpec comp;
    {
        auto* sub = app.add_subcommand("complementarity", "audit of frozen value plus terminal over random states");
        add_common(sub, common);
        sub->add_option("--samples", comp.samples);
        sub->add_option("--seed", common.seed);
        sub->add_flag("--on-circle", comp.on_circle, "restrict to c33^2 + c01^2 = 1");
        sub->add_flag("--bell-diagonal", comp.bell_diagonal, "restrict to c01 = c10 = 0");
        sub->add_option("--measure", measure_name, "qd | qwd");
        handlers["complementarity"] = [&] {
            if (comp.samples < 1) throw ConfigError("--samples must be positive");
            comp.seed = common.seed;
            comp.measure = measure();
            Sink sink(out, common.out_path);
            const auto a = compute([&] { return complementarity_audit(comp); });
            sink.summary("samples=" + std::to_string(a.accepted) + " max_sum=" + num(a.max_sum) +
                         " violations=" + std::to_string(a.violations));
            sink.summary("argmax c11=" + num(a.argmax.state.c11) + " c33=" + num(a.argmax.state.c33) +
                         " c01=" + num(a.argmax.state.c01));
            sink.row({"gamma_f", "frozen_value", "sum", "c11", "c33", "c01"});
            for (const auto& s : a.samples)
                sink.row({num(s.gamma_f), num(s.frozen_value), num(s.sum()), num(s.state.c11), num(s.state.c33),
                          num(s.state.c01)});
            return kExitOk;
        };
    }

    // index
    std::string input;
    double index_delta = kDefaultDelta;
    {
        auto* sub = app.add_subcommand("index", "effective freezing intervals and index");
        add_common(sub, common);
        add_state(sub, state);
        add_grid(sub, grid);
        add_physics(sub, true);
        sub->add_option("--input", input, "trajectory CSV (gamma,value) instead of a state");
        sub->add_option("--delta", index_delta);
        sub->add_option("--min-width", min_width);
        handlers["index"] = [&] {
            if (!(index_delta > 0)) throw ConfigError("--delta must be positive");
            if (!(min_width >= 0)) throw ConfigError("--min-width must be non-negative");
            Trajectory t;
            std::optional<FreezingReport> exact;
            if (!input.empty()) {
                t = read_trajectory(input);
            } else {
                const State st = build_state(state);
                const auto gammas = build_grid(grid);
                const auto ch = channel();
                const auto m = measure();
                TrajectoryOptions opts;
                opts.jobs = resolve_jobs(common);
                try {
                    opts.method = parse_method(method_name);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
                t = compute([&] { return sample_trajectory(st.rho, ch, m, gammas, opts); });
                exact = compute([&] { return check_ns(to_bitflip_frame(*st.corr, ch), m); });
            }
            Sink sink(out, common.out_path);
            const auto iv = compute([&] { return detect_intervals(t, index_delta, min_width); });
            sink.summary("intervals=" + std::to_string(iv.size()));
            sink.summary("eta_f=" + fixed6(index_from_intervals(t, iv)));
            if (exact) {
                const std::vector<FreezingReport> reps{*exact};
                sink.summary("exact_eta_f=" + fixed6(exact_index(t, reps)));
            }
            sink.row({"gamma1", "gamma2", "mean_value"});
            for (const auto& i : iv) sink.row({num(i.gamma1), num(i.gamma2), num(i.mean_value)});
            return kExitOk;
        };
    }

    // multipartite
    int mp_n = 1;
    double mp_c1 = 0.6, mp_c3 = 1.0;
    std::optional<double> mp_c2;
    bool mp_dense = false;
    {
        auto* sub = app.add_subcommand("multipartite", "2n-qubit diagonal states, first qubit : rest");
        add_common(sub, common);
        add_grid(sub, grid);
        sub->add_option("--n", mp_n, "half the number of qubits");
        sub->add_option("--c1", mp_c1);
        sub->add_option("--c2", mp_c2, "default (-1)^n c1 c3");
        sub->add_option("--c3", mp_c3);
        sub->add_flag("--dense", mp_dense, "optimise on the dense state instead of the closed form");
        handlers["multipartite"] = [&] {
            if (mp_n < 1 || 2 * mp_n > kMaxQubits) throw ConfigError("--n must lie in [1, 5]");
            require_range(mp_c1, -1, 1, "--c1");
            require_range(mp_c3, -1, 1, "--c3");
            const double c2 = mp_c2.value_or((mp_n % 2 ? -1.0 : 1.0) * mp_c1 * mp_c3);
            require_range(c2, -1, 1, "--c2");
            std::optional<DiagonalState> d;
            try {
                d.emplace(mp_n, mp_c1, c2, mp_c3);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            const auto gammas = build_grid(grid);
            const int jobs = resolve_jobs(common);
            Sink sink(out, common.out_path);
            sink.summary("exact freezing: " + report_line(compute([&] { return check_ns_multipartite(*d); })));
            Trajectory t;
            if (mp_dense) {
                TrajectoryOptions opts;
                opts.jobs = jobs;
                t = compute([&] {
                    return sample_trajectory(d->to_density(), ChannelKind::BitFlip, Measure::Discord, gammas, opts);
                });
            } else {
                t.gammas = gammas;
                for (double g : gammas) t.values.push_back(compute([&] { return discord_multipartite(*d, Gamma(g)); }));
            }
            sink.row({"gamma", "value"});
            for (std::size_t i = 0; i < t.gammas.size(); ++i) sink.row({num(t.gammas[i]), num(t.values[i])});
            return kExitOk;
        };
    }

    // sweeping
    int sw_qubits = 3;
    double sw_x = 0.6;
    std::vector<double> sw_alpha{0.2};
    double sw_delta = 1e-3;
    {
        auto* sub = app.add_subcommand("sweeping", "sweeping states and their left-traced marginals");
        add_common(sub, common);
        add_grid(sub, grid);
        add_physics(sub, true);
        sub->add_option("--qubits", sw_qubits);
        sub->add_option("--x", sw_x);
        sub->add_option("--alpha", sw_alpha, "encoding parameters, comma separated")->delimiter(',');
        sub->add_option("--delta", sw_delta, "tolerance for the reported plateau");
        handlers["sweeping"] = [&] {
            if (sw_qubits < 2 || sw_qubits > kMaxQubits) throw ConfigError("--qubits must lie in [2, 10]");
            std::optional<DensityMatrix> rho;
            try {
                rho.emplace(sweeping_state(sw_qubits, sw_x, sw_alpha));
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            const auto gammas = build_grid(grid);
            const auto ch = channel();
            const auto m = measure();
            TrajectoryOptions opts;
            opts.jobs = resolve_jobs(common);
            try {
                opts.method = parse_method(method_name);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            Sink sink(out, common.out_path);
            std::vector<Trajectory> ts;
            DensityMatrix cur = *rho;
            while (true) {
                ts.push_back(compute([&] { return sample_trajectory(cur, ch, m, gammas, opts); }));
                const auto iv = compute([&] { return detect_intervals(ts.back(), sw_delta, 0.0); });
                const std::string head = "q" + std::to_string(cur.n_qubits());
                if (!iv.empty() && iv.front().first == 0)
                    sink.summary(head + ": value " + num(ts.back().values.front()) + " held within " + num(sw_delta) +
                                 " up to gamma " + num(iv.front().gamma2));
                else
                    sink.summary(head + ": value " + num(ts.back().values.front()) + ", no plateau from gamma 0");
                if (cur.n_qubits() == 2) break;
                cur = trace_out_first(cur);
            }
            if (sink.has_csv()) {
                sink.csv() << "gamma";
                for (std::size_t k = 0; k < ts.size(); ++k) sink.csv() << ",q" << sw_qubits - static_cast<int>(k);
                sink.csv() << '\n';
                for (std::size_t i = 0; i < gammas.size(); ++i) {
                    sink.csv() << num(gammas[i]);
                    for (const auto& t : ts) sink.csv() << ',' << num(t.values[i]);
                    sink.csv() << '\n';
                }
            }
            return kExitOk;
        };
    }

    // xy-scan and scaling share the scan options
    QptScanConfig scan;
    std::size_t scan_lpoints = scan.lambda_points;
    std::vector<int> sizes{32, 64, 128, 256, 512, 1024, 2048};
    std::optional<double> asymptote;
    auto add_scan = [&](CLI::App* sub) {
        add_common(sub, common);
        sub->add_option("--g", scan.g);
        sub->add_option("--J", scan.J);
        sub->add_option("--lmin", scan.lambda_min);
        sub->add_option("--lmax", scan.lambda_max);
        sub->add_option("--lpoints", scan_lpoints);
        sub->add_option("--delta", scan.delta);
        sub->add_option("--min-width", scan.min_width);
        sub->add_option("--gpoints", scan.gamma_points);
        add_physics(sub, true);
    };
    auto finish_scan = [&] {
        require_range(scan.g, -1, 1, "--g");
        if (!(scan.J > 0)) throw ConfigError("--J must be positive");
        if (!(scan.lambda_min >= 0 && scan.lambda_max > scan.lambda_min)) throw ConfigError("invalid lambda range");
        if (scan_lpoints < 3) throw ConfigError("--lpoints must be at least 3");
        if (!(scan.delta > 0)) throw ConfigError("--delta must be positive");
        if (scan.gamma_points < 2) throw ConfigError("--gpoints must be at least 2");
        scan.lambda_points = scan_lpoints;
        scan.channel = channel();
        scan.measure = measure();
        try {
            scan.trajectory.method = parse_method(method_name);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    };
    {
        auto* sub = app.add_subcommand("xy-scan", "freezing index across the XY transition");
        add_scan(sub);
        sub->add_option("--size", scan.size, "chain length (default: infinite chain)");
        handlers["xy-scan"] = [&] {
            finish_scan();
            if (scan.size && (*scan.size < 2 || *scan.size % 2 || *scan.size > kMaxFermionSize))
                throw ConfigError("--size must be even and in [2, 4096]");
            scan.trajectory.jobs = resolve_jobs(common);
            Sink sink(out, common.out_path);
            const auto r = compute([&] { return qpt_scan(scan); });
            sink.summary("lambda_c=" + num(r.lambda_c) + (r.conclusive ? "" : " (inconclusive)"));
            sink.summary("max_slope=" + num(r.max_slope) + " median_slope=" + num(r.median_slope));
            sink.row({"lambda", "eta_f"});
            for (std::size_t i = 0; i < r.lambdas.size(); ++i) sink.row({num(r.lambdas[i]), num(r.eta[i])});
            return kExitOk;
        };
    }
    {
        auto* sub = app.add_subcommand("scaling", "finite-size transition points and power-law fit");
        add_scan(sub);
        sub->add_option("--sizes", sizes, "chain lengths, comma separated")->delimiter(',');
        sub->add_option("--input", input, "CSV of N,lambda_c_N instead of scanning");
        sub->add_option("--asymptote", asymptote, "fix the infinite-size transition point");
        handlers["scaling"] = [&] {
            std::vector<std::pair<int, double>> pts;
            if (!input.empty()) {
                pts = read_pairs(input);
            } else {
                finish_scan();
                for (int n : sizes)
                    if (n < 2 || n % 2 || n > kMaxFermionSize) throw ConfigError("sizes must be even and in [2, 4096]");
                scan.trajectory.jobs = resolve_jobs(common);
                for (int n : sizes) {
                    scan.size = n;
                    const auto r = compute([&] { return qpt_scan(scan); });
                    pts.emplace_back(n, r.lambda_c);
                }
            }
            if (pts.size() < 4) throw ConfigError("need at least four sizes");
            const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
            if (lo->first <= 0 || hi->first < 10 * lo->first) throw ConfigError("sizes must span at least one decade");
            Sink sink(out, common.out_path);
            const auto fit = compute([&] { return scaling_fit(pts, asymptote); });
            sink.summary("lambda_inf=" + num(fit.lambda_inf));
            sink.summary("exponent=" + num(fit.exponent));
            sink.summary("amplitude=" + num(fit.amplitude));
            sink.summary("residual=" + num(fit.residual));
            sink.summary(std::string("monotone=") + (fit.monotone ? "true" : "false"));
            for (const auto& w : fit.warnings) sink.summary("warning=" + w);
            sink.row({"N", "lambda_c_N"});
            for (const auto& [n, l] : fit.points) sink.row({std::to_string(n), num(l)});
            return kExitOk;
        };
    }

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = merge_config(app, std::move(args));
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(cmd)();
    } catch (const ComputeFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace qcf::cli
