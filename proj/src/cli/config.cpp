#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tdbc/cli.hpp"
#include "tdbc/errors.hpp"

namespace tdbc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); });
    const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char ch) { return std::isspace(ch); });
    return first < last.base() ? std::string(first, last.base()) : std::string();
}

double parse_number(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError(key, "expected a number, got '" + raw + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
    return v;
}

// Shortest text that parses back to the same double.
std::string show(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + show(v[i]);
    return s;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(std::istream& in, const std::string& source) {
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no), "expected key=value");
        }
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no), "empty key");
        cfg.values_[key] = trim(body.substr(eq + 1));
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read " + path.string());
    return parse(in, path.string());
}

std::string ScenarioConfig::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "missing required key");
    return it->second;
}

std::string ScenarioConfig::text(const std::string& key, const std::string& fallback) {
    if (!has(key)) values_[key] = fallback;
    return values_.at(key);
}

double ScenarioConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

double ScenarioConfig::number(const std::string& key, double fallback) {
    if (!has(key)) values_[key] = show(fallback);
    return number(key);
}

int ScenarioConfig::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key, "expected an integer");
    return static_cast<int>(v);
}

int ScenarioConfig::integer(const std::string& key, int fallback) {
    if (!has(key)) values_[key] = std::to_string(fallback);
    return integer(key);
}

std::vector<double> ScenarioConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list");
    return out;
}

std::vector<double> ScenarioConfig::numbers(const std::string& key,
                                            const std::vector<double>& fallback) {
    if (!has(key)) values_[key] = join(fallback);
    return numbers(key);
}

std::string ScenarioConfig::resolved() const {
    std::string s;
    for (const auto& [k, v] : values_) {
        if (!s.empty()) s += ';';
        s += k + '=' + v;
    }
    return s;
}

WallTrajectory ScenarioConfig::trajectory() {
    const std::string kind = text("trajectory.kind");
    const double L0 = number("trajectory.L0");
    const auto build = [&]() -> WallTrajectory {
        if (kind == "linear") return WallTrajectory::linear(L0, number("trajectory.q"));
        if (kind == "reversing_linear") {
            return WallTrajectory::reversing_linear(L0, number("trajectory.q"), number("trajectory.T"));
        }
        if (kind == "smooth_periodic") {
            return WallTrajectory::smooth_periodic(L0, number("trajectory.q"),
                                                   number("trajectory.omega"));
        }
        throw ConfigError("trajectory.kind",
                          "unknown kind '" + kind + "' (linear, reversing_linear, smooth_periodic)");
    };
    try {
        WallTrajectory traj = build();
        const double k = number("trajectory.k", 1.0);
        return k == 1.0 ? traj : WallTrajectory::scaled(traj, k);
    } catch (const DomainError& e) {
        throw ConfigError("trajectory", e.what());
    }
}

GaussianParams ScenarioConfig::gaussian() {
    GaussianParams g{number("gaussian.d"), number("gaussian.x0", 0.0), number("gaussian.p0", 0.0)};
    try {
        g.validate();
    } catch (const DomainError& e) {
        throw ConfigError("gaussian.d", e.what());
    }
    return g;
}

PhysicalConstants ScenarioConfig::constants() {
    PhysicalConstants c{number("constants.hbar", 1.0), number("constants.mass", 1.0)};
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw ConfigError("constants", e.what());
    }
    return c;
}

GridSpec ScenarioConfig::grid() {
    const int n = integer("grid.n_points", 2001);
    if (n < 2) throw ConfigError("grid.n_points", "must be >= 2");
    GridSpec g{static_cast<std::size_t>(n), number("grid.x_min"), number("grid.x_max")};
    try {
        g.validate();
    } catch (const DomainError& e) {
        throw ConfigError("grid", e.what());
    }
    return g;
}

std::vector<double> ScenarioConfig::times() {
    if (has("time.t_list")) return numbers("time.t_list");
    return {number("time.t")};
}

}  // namespace tdbc::cli
