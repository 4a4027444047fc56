#include "wsdecay/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wsdecay {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

LatticeParams LatticeConfig::to_params() const {
    return LatticeParams::make(hbar, omega, epsilon, q, r, f0);
}

LatticeConfig parse_lattice_config_text(const std::string& text) {
    LatticeConfig cfg;
    bool have_hbar = false, have_omega = false, have_epsilon = false, have_q = false,
         have_r = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "hbar") {
                cfg.hbar = std::stod(value);
                have_hbar = true;
            } else if (key == "omega") {
                cfg.omega = std::stod(value);
                have_omega = true;
            } else if (key == "epsilon") {
                cfg.epsilon = std::stod(value);
                have_epsilon = true;
            } else if (key == "q") {
                cfg.q = std::stoi(value);
                have_q = true;
            } else if (key == "r") {
                cfg.r = std::stoi(value);
                have_r = true;
            } else if (key == "f0") {
                cfg.f0 = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else {
                throw std::runtime_error("config: unknown key '" + key + "' on line " +
                                         std::to_string(line_no));
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config: cannot parse value for '" + key +
                                     "' on line " + std::to_string(line_no));
        }
    }

    std::vector<std::string> missing;
    if (!have_hbar) missing.push_back("hbar");
    if (!have_omega) missing.push_back("omega");
    if (!have_epsilon) missing.push_back("epsilon");
    if (!have_q) missing.push_back("q");
    if (!have_r) missing.push_back("r");
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
        throw std::runtime_error("config: missing required keys: " + list);
    }
    return cfg;
}

LatticeConfig parse_lattice_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_lattice_config_text(buffer.str());
}

} // namespace wsdecay
