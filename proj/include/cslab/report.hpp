#pragma once

#include <string>
#include <vector>
#include <cstdint>

namespace cslab::report {

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    Check& add(const std::string& name, double residual, double tolerance,
               const std::string& note = "");
    bool all_pass() const;
    std::string to_json(bool with_timestamp = true) const;
    void write(const std::string& dir) const;
    void print() const;
};

/// key=value config file with CLI-style overrides layered on top.
struct Config {
    std::vector<std::pair<std::string, std::string>> kv;
    static Config load(const std::string& path);
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key, double fallback) const;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace cslab::report
