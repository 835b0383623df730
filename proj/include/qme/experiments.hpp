// experiments.hpp — Scenario presets, parameter sweeps and CSV tables
//
// A scenario fixes the chain and tau_SB and sweeps (tau_B, R, kind). For every tau_B the
// coupling is calibrated against the Redfield generator, which also supplies the reference
// covariance. Grid points run on a small worker pool; rows are stored by grid index so the
// output order never depends on scheduling.

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qme/builders.hpp"
#include "qme/calibration.hpp"
#include "qme/error.hpp"
#include "qme/lattice.hpp"
#include "qme/metrics.hpp"
#include "qme/quadratic_solver.hpp"

namespace qme {

inline std::vector<double> logspace(double lo, double hi, int n) {
    require(lo > 0.0 && hi > 0.0, "logspace: bounds must be positive");
    require(n >= 1, "logspace: need at least one point");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

struct Scenario {
    std::string name{"custom"};
    ChainSpec chain{128, 16, 1.0, 0.0, 0.5, 0.1};
    double tau_sb{100.0};
    std::vector<double> tau_b_grid{logspace(0.01, 10.0, 25)};
    std::vector<int> radii{2, 4, 8, 16, 32};
    std::vector<QmeKind> kinds{QmeKind::LocalDavies, QmeKind::LocalNRE};
    bool include_eta{false};
    bool odd_radii{false}; // add R-1 and R+1 next to every listed radius
    int threads{0};        // 0: hardware concurrency
    std::string out;

    void validate() const {
        chain.validate();
        require(tau_sb > 0.0, "Scenario: tau_sb must be positive");
        require(!tau_b_grid.empty(), "Scenario: tau_b grid is empty");
        for (double t : tau_b_grid) require(t > 0.0 && std::isfinite(t), "Scenario: tau_b values must be positive");
        require(!radii.empty(), "Scenario: radius list is empty");
        for (int r : radii)
            require(r >= 1 && r <= chain.L, "Scenario: radius " + std::to_string(r) + " outside [1, L]");
        require(!kinds.empty(), "Scenario: kind list is empty");
        require(threads >= 0, "Scenario: threads must be >= 0");
    }

    // Radii actually swept, ascending and unique.
    std::vector<int> effective_radii() const {
        std::vector<int> r;
        for (int x : radii) {
            r.push_back(x);
            if (odd_radii) {
                if (x - 1 >= 1) r.push_back(x - 1);
                if (x + 1 <= chain.L) r.push_back(x + 1);
            }
        }
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        return r;
    }
};

// --- Presets ------------------------------------------------------------------------------

inline std::vector<std::string> preset_names() {
    return {"calibration", "distance", "steady-eq", "steady-neq",
            "populations", "tradeoff", "odd-even"};
}

inline Scenario preset(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "calibration") {
        s.kinds = {QmeKind::Redfield};
        s.radii = {128};
    } else if (name == "distance" || name == "steady-neq") {
        // defaults
    } else if (name == "steady-eq") {
        s.chain.beta_left = s.chain.beta_right = 0.1;
    } else if (name == "populations") {
        s.chain.beta_left = s.chain.beta_right = 0.1;
        s.tau_b_grid = {1.0};
        s.radii = {2, 8, 32};
    } else if (name == "tradeoff") {
        s.tau_sb = 10.0;
        s.tau_b_grid = {1.0};
        s.radii.clear();
        for (int r = 2; r <= 64; r += 2) s.radii.push_back(r);
        s.kinds = {QmeKind::LocalDavies};
    } else if (name == "odd-even") {
        s.chain.beta_left = 0.1;
        s.chain.beta_right = 0.5;
        s.radii = {2, 4, 8, 16};
        s.odd_radii = true;
    } else {
        throw ConfigError("unknown scenario preset '" + name + "'");
    }
    return s;
}

// --- Config files ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
    return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, std::string v) {
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

} // namespace detail

// "0.01, 0.1, 1" or "logspace(0.01, 10, 25)".
inline std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    const std::string v = detail::trim(value);
    if (v.rfind("logspace", 0) == 0) {
        const auto open = v.find('('), close = v.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw ConfigError("config key '" + key + "': malformed logspace(...)");
        const auto args = detail::split(v.substr(open + 1, close - open - 1), ',');
        if (args.size() != 3) throw ConfigError("config key '" + key + "': logspace needs (lo, hi, n)");
        return logspace(detail::parse_double(key, args[0]), detail::parse_double(key, args[1]),
                        detail::parse_int(key, args[2]));
    }
    std::vector<double> out;
    for (const auto& item : detail::split(v, ',')) out.push_back(detail::parse_double(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& item : detail::split(value, ',')) out.push_back(detail::parse_int(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

inline std::vector<QmeKind> parse_kind_list(const std::string& value) {
    std::vector<QmeKind> out;
    for (const auto& item : detail::split(value, ',')) out.push_back(parse_kind(item));
    if (out.empty()) throw ConfigError("config key 'kinds': empty list");
    return out;
}

inline void apply_setting(Scenario& s, const std::string& key, const std::string& value) {
    if (key == "scenario" || key == "preset") {
        const std::string keep_out = s.out;
        s = preset(value);
        s.out = keep_out;
    } else if (key == "name") s.name = value;
    else if (key == "L") s.chain.L = detail::parse_int(key, value);
    else if (key == "N") s.chain.N = detail::parse_int(key, value);
    else if (key == "J") s.chain.J = detail::parse_double(key, value);
    else if (key == "omega0") s.chain.omega0 = detail::parse_double(key, value);
    else if (key == "beta_l" || key == "beta_left") s.chain.beta_left = detail::parse_double(key, value);
    else if (key == "beta_r" || key == "beta_right") s.chain.beta_right = detail::parse_double(key, value);
    else if (key == "tau_sb") s.tau_sb = detail::parse_double(key, value);
    else if (key == "tau_b_grid" || key == "tau_b") s.tau_b_grid = parse_double_list(key, value);
    else if (key == "radii") s.radii = parse_int_list(key, value);
    else if (key == "kinds") s.kinds = parse_kind_list(value);
    else if (key == "include_eta") s.include_eta = detail::parse_bool(key, value);
    else if (key == "odd_radii") s.odd_radii = detail::parse_bool(key, value);
    else if (key == "threads") s.threads = detail::parse_int(key, value);
    else if (key == "out") s.out = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

// `key = value` lines, '#' starts a comment. A `scenario` key resets to that preset, so it
// should come first.
inline Scenario parse_config(std::istream& in, Scenario s = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(s, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return s;
}

inline Scenario load_config(const std::string& path, Scenario s = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(s));
}

// --- Worker pool ----------------------------------------------------------------------------

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs task(i) for i in [0, n). The first exception is rethrown after all workers finish.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// --- Sweeps ---------------------------------------------------------------------------------

struct ReferenceState {
    double tau_b{0.0};
    double j_int{0.0};
    GeneratorM m;
    CovarianceW w;
    std::string error;
};

struct ScenarioRow {
    std::string scenario;
    QmeKind kind{QmeKind::Redfield};
    int radius{0};
    double tau_b{0.0};
    double tau_sb{0.0};
    double j_int{NAN};
    double distance{NAN};
    double delta{NAN};
    double abscissa{NAN}; // 4 J tau_B / R
    std::string error;
};

struct PopulationRow {
    QmeKind kind{QmeKind::Redfield};
    int radius{0};
    int mode_index{0};
    double omega{0.0};
    double population{0.0};
    double gibbs{0.0};
};

struct CalibrationRow {
    std::string scenario;
    double tau_b{0.0};
    double tau_sb{0.0};
    double j_int{0.0};
    double scaled{0.0}; // J_int sqrt(tau_SB tau_B)
};

inline ReferenceState build_reference(const Scenario& s, const SingleParticleMatrix& h, const Eigen::MatrixXcd& hmaj,
                                      double tau_b, bool need_w = true) {
    ReferenceState ref;
    ref.tau_b = tau_b;
    try {
        ref.j_int = calibrate_jint(s.tau_sb, h, make_chain_baths(s.chain, tau_b, 1.0), s.include_eta);
        ref.m = build_redfield_m(h, make_chain_baths(s.chain, tau_b, ref.j_int), s.include_eta);
        if (need_w) ref.w = steady_state_covariance(hmaj, ref.m);
    } catch (const std::exception& e) {
        ref.error = e.what();
    }
    return ref;
}

inline std::vector<ReferenceState> build_references(const Scenario& s, const SingleParticleMatrix& h,
                                                    const Eigen::MatrixXcd& hmaj, bool need_w = true) {
    std::vector<ReferenceState> refs(s.tau_b_grid.size());
    parallel_for(refs.size(), resolve_threads(s.threads),
                 [&](std::size_t i) { refs[i] = build_reference(s, h, hmaj, s.tau_b_grid[i], need_w); });
    return refs;
}

// Row order: tau_B outer, then R, then kind, each in scenario order. Global kinds produce one
// row per tau_B with R = L.
inline std::vector<ScenarioRow> run_scenario(const Scenario& s) {
    s.validate();
    const SingleParticleMatrix h = build_chain_hamiltonian(s.chain);
    const Eigen::MatrixXcd hmaj = hamiltonian_to_majorana(h);
    const std::vector<ReferenceState> refs = build_references(s, h, hmaj);
    const std::vector<int> radii = s.effective_radii();

    struct Point {
        std::size_t ref;
        int radius;
        QmeKind kind;
    };
    std::vector<Point> points;
    for (std::size_t t = 0; t < refs.size(); ++t)
        for (int r : radii)
            for (QmeKind k : s.kinds)
                if (is_local(k) || r == radii.front()) points.push_back({t, is_local(k) ? r : s.chain.L, k});

    std::vector<ScenarioRow> rows(points.size());
    parallel_for(points.size(), resolve_threads(s.threads), [&](std::size_t i) {
        const Point& p = points[i];
        const ReferenceState& ref = refs[p.ref];
        ScenarioRow& row = rows[i];
        row.scenario = s.name;
        row.kind = p.kind;
        row.radius = p.radius;
        row.tau_b = ref.tau_b;
        row.tau_sb = s.tau_sb;
        row.abscissa = 4.0 * s.chain.J * ref.tau_b / p.radius;
        if (!ref.error.empty()) {
            row.error = "reference: " + ref.error;
            return;
        }
        row.j_int = ref.j_int;
        try {
            const GeneratorM g = build_generator(p.kind, h, make_chain_baths(s.chain, ref.tau_b, ref.j_int), p.radius,
                                                 s.include_eta);
            row.distance = generator_distance(g, ref.m);
            row.delta = steady_state_delta(steady_state_covariance(hmaj, g), ref.w);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

inline std::vector<CalibrationRow> run_calibration(const Scenario& s, const std::vector<double>& tau_sb_grid = {}) {
    s.validate();
    const SingleParticleMatrix h = build_chain_hamiltonian(s.chain);
    std::vector<std::pair<double, double>> grid; // (tau_b, tau_sb)
    for (double tb : s.tau_b_grid) grid.emplace_back(tb, s.tau_sb);
    for (double tsb : tau_sb_grid) grid.emplace_back(s.tau_b_grid.front(), tsb);
    std::vector<CalibrationRow> rows(grid.size());
    parallel_for(grid.size(), resolve_threads(s.threads), [&](std::size_t i) {
        const auto [tb, tsb] = grid[i];
        const double j = calibrate_jint(tsb, h, make_chain_baths(s.chain, tb, 1.0), s.include_eta);
        rows[i] = {s.name, tb, tsb, j, j * std::sqrt(tsb * tb)};
    });
    return rows;
}

// Mode populations at the first tau_B of the grid; requires beta_l = beta_r.
inline std::vector<PopulationRow> run_populations(const Scenario& s) {
    s.validate();
    require(s.chain.beta_left == s.chain.beta_right, "run_populations: needs an equilibrium setting (beta_l = beta_r)");
    const SingleParticleMatrix h = build_chain_hamiltonian(s.chain);
    const Eigen::MatrixXcd hmaj = hamiltonian_to_majorana(h);
    const EigenDecomposition eig = diagonalize(h);
    const double tau_b = s.tau_b_grid.front();
    const double j = calibrate_jint(s.tau_sb, h, make_chain_baths(s.chain, tau_b, 1.0), s.include_eta);
    const auto baths = make_chain_baths(s.chain, tau_b, j);
    const auto gibbs = gibbs_populations(eig, s.chain.beta_left);

    std::vector<std::pair<QmeKind, int>> cases;
    for (QmeKind k : s.kinds) {
        if (!is_local(k)) {
            cases.emplace_back(k, s.chain.L);
            continue;
        }
        for (int r : s.effective_radii()) cases.emplace_back(k, r);
    }
    std::vector<std::vector<PopulationRow>> blocks(cases.size());
    parallel_for(cases.size(), resolve_threads(s.threads), [&](std::size_t i) {
        const auto [kind, radius] = cases[i];
        const GeneratorM g = build_generator(kind, h, baths, radius, s.include_eta);
        const auto pops = mode_populations(steady_state_covariance(hmaj, g), eig);
        for (std::size_t m = 0; m < pops.size(); ++m)
            blocks[i].push_back({kind, radius, static_cast<int>(m), pops[m].omega, pops[m].population, gibbs[m].population});
    });
    std::vector<PopulationRow> rows;
    for (auto& b : blocks) rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

// --- CSV ------------------------------------------------------------------------------------

inline std::string format_double(double x) {
    if (std::isnan(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

inline void write_scenario_csv(std::ostream& os, const std::vector<ScenarioRow>& rows) {
    os << "scenario,kind,R,tau_b,tau_sb,j_int,distance,delta,abscissa_4JtauB_over_R,error\n";
    for (const auto& r : rows)
        os << csv_escape(r.scenario) << ',' << to_string(r.kind) << ',' << r.radius << ',' << format_double(r.tau_b) << ','
           << format_double(r.tau_sb) << ',' << format_double(r.j_int) << ',' << format_double(r.distance) << ','
           << format_double(r.delta) << ',' << format_double(r.abscissa) << ',' << csv_escape(r.error) << '\n';
}

inline void write_population_csv(std::ostream& os, const std::vector<PopulationRow>& rows) {
    os << "kind,R,mode_index,omega_m,population,gibbs\n";
    for (const auto& r : rows)
        os << to_string(r.kind) << ',' << r.radius << ',' << r.mode_index << ',' << format_double(r.omega) << ','
           << format_double(r.population) << ',' << format_double(r.gibbs) << '\n';
}

inline void write_calibration_csv(std::ostream& os, const std::vector<CalibrationRow>& rows) {
    os << "scenario,tau_b,tau_sb,j_int,j_int_sqrt_tau_sb_tau_b\n";
    for (const auto& r : rows)
        os << csv_escape(r.scenario) << ',' << format_double(r.tau_b) << ',' << format_double(r.tau_sb) << ','
           << format_double(r.j_int) << ',' << format_double(r.scaled) << '\n';
}

} // namespace qme
