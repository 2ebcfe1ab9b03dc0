#include "cslab/report.hpp"

#include "json.hpp"
#include <fstream>
#include <filesystem>
#include <chrono>
#include <cstdio>

namespace cslab::report {

using json = nlohmann::json;

Check& Report::add(const std::string& name, double residual, double tolerance,
                   const std::string& note) {
    checks.push_back(Check{name, residual, tolerance, residual <= tolerance, note});
    return checks.back();
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string Report::to_json(bool with_timestamp) const {
    json j;
    j["suite"] = suite;
    j["seed"] = seed;
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
    j["checks"] = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["residual"] = c.residual;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        if (!c.note.empty()) e["note"] = c.note;
        j["checks"].push_back(e);
    }
    j["all_pass"] = all_pass();
    return j.dump(2);
}

void Report::write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + suite + ".json");
    out << to_json() << "\n";
}

void Report::print() const {
    for (const auto& c : checks)
        std::printf("  [%s] %-48s residual %11.4e  tol %9.2e%s%s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.tolerance,
                    c.note.empty() ? "" : "  ", c.note.c_str());
}

Config Config::load(const std::string& path) {
    Config cfg;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto p = line.find('=');
        if (p == std::string::npos) continue;
        cfg.set(line.substr(0, p), line.substr(p + 1));
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : kv)
        if (k == key) {
            v = value;
            return;
        }
    kv.emplace_back(key, value);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    return fallback;
}

double Config::get_num(const std::string& key, double fallback) const {
    for (const auto& [k, v] : kv)
        if (k == key) return std::stod(v);
    return fallback;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path);
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    out.precision(17);
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i)
            out << r[i] << (i + 1 < r.size() ? "," : "\n");
    }
}

} // namespace cslab::report
