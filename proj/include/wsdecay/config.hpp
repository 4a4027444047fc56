#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "wsdecay/lattice.hpp"

namespace wsdecay {

/// Plain key=value configuration ('#' starts a comment). Recognized keys:
/// hbar, omega, epsilon, q, r, f0 (optional override), seed.
/// Unknown keys are errors; so is a file missing any required key.
struct LatticeConfig {
    double hbar = 0.0;
    double omega = 0.0;
    double epsilon = 0.0;
    int q = 0;
    int r = 0;
    std::optional<double> f0;
    std::uint64_t seed = 1;

    LatticeParams to_params() const;
};

/// Parses `key = value` lines. Throws std::runtime_error naming the
/// offending line for malformed input or unknown keys, and listing every
/// missing required key for incomplete files.
LatticeConfig parse_lattice_config(const std::filesystem::path& path);
LatticeConfig parse_lattice_config_text(const std::string& text);

} // namespace wsdecay
