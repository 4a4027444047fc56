#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wsdecay/analysis.hpp"
#include "wsdecay/lattice.hpp"
#include "wsdecay/series.hpp"

namespace wsdecay {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment {
    strobe,
    monodromy_map,
    classical_decay,
    quantum_decay,
    amp_stats,
    rmt_curve,
    resonance_scan,
    width_scaling,
};

const char* to_string(Experiment e);

/// Grid/step overrides shared by the experiments.
struct NumericsConfig {
    std::size_t grid_n = 2048;
    double grid_p_min = -24.0;     // request; the grid factory snaps dp to ħ/M
    double grid_p_max = 12.0;
    double absorber_fraction = 0.15;
    int dt_divisor = 1024;         // quantum dt = T_ω / dt_divisor
    int classical_dt_divisor = 2048;
    double island_norm_threshold = 1e2;
    std::size_t map_nx = 100;
    std::size_t map_np = 100;
    double x0 = 0.0;               // 0 means "π" (set in resolve())
    double p0 = 0.0;
    double sigma_p = 0.28;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::rmt_curve;
    LatticeParams params;
    StripBounds strip{-5.0, 7.0};
    NumericsConfig numerics;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    unsigned workers = 1;

    int periods = 200;             // simulation horizon in driving periods
    int sample_stride = 10;        // density snapshot cadence (periods)
    bool single_snapshot_file = true;
    double t_shift_periods = 8.0;  // power-law fits shift the data by this

    std::optional<double> ratio;   // ω/ω_B override; sets F0 = ħω/(2π·ratio)
    double t_heisenberg_periods = 53.2;  // rmt-curve parameter
    int amp_stats_period = 100;

    std::vector<double> scan_ratios;      // resonance scan; default 41 in [0.998, 1.002]
    std::vector<int> width_scan_periods = {75, 150, 300};
    std::size_t ensemble_size = 4000;
    int strobe_seeds = 32;

    /// Applies the ratio override to F0 and fills defaulted fields.
    void resolve();
    void validate() const;
};

/// One scan point of the resonance profile.
struct ScanPoint {
    double ratio = 0.0;    // ω/ω_B
    double omega_b = 0.0;
    double survival = 0.0;
    bool ok = false;
    std::string error;
};

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::optional<PowerLawFit> power_fit;
    std::optional<ExponentialFit> exponential_fit;
    std::optional<PeakFit> peak_fit;
    std::optional<WidthScalingFit> width_fit;
    std::optional<DistributionComparison> statistics;
};

/// Runs one experiment end to end: validates the configuration, produces the
/// data/fit files and a manifest echoing the resolved configuration.
/// Throws on invalid configuration or numerical aborts.
RunResult run(const ExperimentConfig& config);

/// Quantum survival sampled once per period (elapsed time = k·T_ω); optional
/// mid-run state capture for the statistics pipeline.
SurvivalSeries quantum_survival_series(const ExperimentConfig& config,
                                       const LatticeParams& params);

/// Independent quantum-decay runs per frequency ratio, aggregated in input
/// order; failures are recorded per ratio and skipped in fits.
std::vector<ScanPoint> scan_survival(const ExperimentConfig& config,
                                     const std::vector<double>& ratios,
                                     int t_star_periods);

/// 41 ratios over [0.998, 1.002].
std::vector<double> default_scan_ratios();

} // namespace wsdecay
