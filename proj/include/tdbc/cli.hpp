#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdbc/core_model.hpp"

namespace tdbc::cli {

/// Flat dotted key=value scenario file. Lines starting with '#' are comments.
/// Getters throw ConfigError naming the key; defaults that get used are
/// recorded so that resolved() lists every value a run depended on.
class ScenarioConfig {
public:
    static ScenarioConfig parse(std::istream& in, const std::string& source = "<config>");
    static ScenarioConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string text(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback);
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback);
    int integer(const std::string& key) const;
    int integer(const std::string& key, int fallback);
    std::vector<double> numbers(const std::string& key) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);

    /// "key=value;..." in key order.
    std::string resolved() const;

    WallTrajectory trajectory();
    GaussianParams gaussian();
    PhysicalConstants constants();
    GridSpec grid();
    /// time.t_list if present, else time.t.
    std::vector<double> times();

private:
    std::map<std::string, std::string> values_;
};

struct RunOptions {
    std::string command;
    std::optional<std::filesystem::path> config_path;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 20240521;
    bool strict = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitThreshold = 3;

const std::vector<std::string>& command_names();

/// Runs one command. The summary line goes to out, warnings and errors to err.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace tdbc::cli
