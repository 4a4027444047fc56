#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "wsdecay/config.hpp"
#include "wsdecay/experiments.hpp"
#include "wsdecay/parallel.hpp"

namespace {

struct CliOptions {
    std::string config_file;
    std::string out_dir = "out";
    unsigned workers = wsdecay::default_workers();
    std::optional<std::uint64_t> seed;
    std::optional<int> q;
    std::optional<int> r;
    std::optional<double> ratio;
    std::optional<int> periods;
    std::optional<std::size_t> grid_n;
    std::optional<int> dt_div;
    std::optional<double> p1, p2;
    double th = 53.2;
    int stride = 10;
    std::size_t ensemble = 4000;
    int amp_period = 100;
    double t_shift = 8.0;
    std::vector<int> t_stars;
    double scan_lo = 0.998, scan_hi = 1.002;
    int scan_points = 41;
    bool snapshot_files = false;
};

void add_common_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_file, "key=value parameter file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--workers", opt.workers, "worker thread count");
    sub->add_option("--seed", opt.seed, "RNG seed (overrides config file)");
    sub->add_option("--q", opt.q, "resonance channel integer q");
    sub->add_option("--r", opt.r, "resonance integer r");
    sub->add_option("--ratio", opt.ratio, "omega/omega_B override (sets F0)");
    sub->add_option("--periods", opt.periods, "horizon in driving periods");
    sub->add_option("--grid-n", opt.grid_n, "momentum grid points (power of two)");
    sub->add_option("--dt-div", opt.dt_div, "steps per period");
    sub->add_option("--p1", opt.p1, "strip lower momentum bound");
    sub->add_option("--p2", opt.p2, "strip upper momentum bound");
    sub->add_option("--th", opt.th, "Heisenberg time in units of T_omega (rmt-curve)");
    sub->add_option("--stride", opt.stride, "density snapshot stride in periods");
    sub->add_option("--ensemble", opt.ensemble, "classical ensemble size");
    sub->add_option("--amp-period", opt.amp_period, "sampling time for amp-stats (periods)");
    sub->add_option("--t-shift", opt.t_shift, "fit shift in periods");
    sub->add_option("--t-stars", opt.t_stars, "width-scaling sample times (periods)");
    sub->add_option("--scan-lo", opt.scan_lo, "lowest omega/omega_B of the scan");
    sub->add_option("--scan-hi", opt.scan_hi, "highest omega/omega_B of the scan");
    sub->add_option("--scan-points", opt.scan_points, "number of scan ratios");
    sub->add_flag("--snapshot-files", opt.snapshot_files,
                  "one density file per snapshot instead of a single long file");
}

wsdecay::ExperimentConfig build_config(wsdecay::Experiment experiment, const CliOptions& opt) {
    double hbar = 0.1, omega = 1.0, epsilon = 3.0;
    int q = 1, r = 1;
    std::optional<double> f0;
    std::uint64_t seed = 1;
    if (!opt.config_file.empty()) {
        const wsdecay::LatticeConfig file = wsdecay::parse_lattice_config(opt.config_file);
        hbar = file.hbar;
        omega = file.omega;
        epsilon = file.epsilon;
        q = file.q;
        r = file.r;
        f0 = file.f0;
        seed = file.seed;
    }
    if (opt.q) q = *opt.q;
    if (opt.r) r = *opt.r;
    if (opt.seed) seed = *opt.seed;

    wsdecay::ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.params = wsdecay::LatticeParams::make(hbar, omega, epsilon, q, r, f0);
    cfg.seed = seed;
    cfg.workers = opt.workers;
    cfg.output_dir = opt.out_dir;
    cfg.ratio = opt.ratio;
    if (opt.p1) cfg.strip.p1 = *opt.p1;
    if (opt.p2) cfg.strip.p2 = *opt.p2;
    if (opt.grid_n) cfg.numerics.grid_n = *opt.grid_n;
    if (opt.dt_div) cfg.numerics.dt_divisor = *opt.dt_div;
    cfg.sample_stride = opt.stride;
    cfg.ensemble_size = opt.ensemble;
    cfg.amp_stats_period = opt.amp_period;
    cfg.t_shift_periods = opt.t_shift;
    cfg.t_heisenberg_periods = opt.th;
    cfg.single_snapshot_file = !opt.snapshot_files;
    if (!opt.t_stars.empty()) cfg.width_scan_periods = opt.t_stars;
    if (opt.scan_points > 1) {
        cfg.scan_ratios.clear();
        for (int i = 0; i < opt.scan_points; ++i)
            cfg.scan_ratios.push_back(opt.scan_lo +
                                      (opt.scan_hi - opt.scan_lo) * i / (opt.scan_points - 1));
    }

    if (opt.periods) {
        cfg.periods = *opt.periods;
    } else {
        switch (experiment) {
            case wsdecay::Experiment::resonance_scan: cfg.periods = 300; break;
            case wsdecay::Experiment::width_scaling: cfg.periods = 300; break;
            case wsdecay::Experiment::strobe: cfg.periods = 200; break;
            default: cfg.periods = 200; break;
        }
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ac-dc driven lattice decay toolkit"};
    app.require_subcommand(1);
    CliOptions opt;

    const std::vector<std::pair<wsdecay::Experiment, const char*>> experiments = {
        {wsdecay::Experiment::strobe, "stroboscopic section of the non-biased lattice"},
        {wsdecay::Experiment::monodromy_map, "log10 tangent-map norm over phase space"},
        {wsdecay::Experiment::classical_decay, "classical chaotic-ensemble survival"},
        {wsdecay::Experiment::quantum_decay, "wavepacket survival and tail fit"},
        {wsdecay::Experiment::amp_stats, "strip amplitude statistics vs GOE/GUE/GSE"},
        {wsdecay::Experiment::rmt_curve, "closed-form decay-law table"},
        {wsdecay::Experiment::resonance_scan, "survival vs omega/omega_B profile"},
        {wsdecay::Experiment::width_scaling, "peak width vs time exponent"},
    };
    for (const auto& [kind, help] : experiments)
        add_common_options(app.add_subcommand(wsdecay::to_string(kind), help), opt);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [kind, help] : experiments) {
            if (app.got_subcommand(wsdecay::to_string(kind))) {
                const wsdecay::ExperimentConfig cfg = build_config(kind, opt);
                const wsdecay::RunResult result = wsdecay::run(cfg);
                for (const auto& f : result.files) std::printf("wrote %s\n", f.c_str());
                if (result.power_fit)
                    std::printf("power-law exponent = %.6g, T_H/T_omega = %.6g\n",
                                result.power_fit->exponent,
                                result.power_fit->t_heisenberg / cfg.params.t_omega);
                if (result.width_fit)
                    std::printf("width scaling gamma = %.6g\n", result.width_fit->gamma);
                if (result.statistics)
                    std::printf("best nu = %d (KS: goe %.4f, gue %.4f, gse %.4f)\n",
                                result.statistics->best_nu, result.statistics->ks_distance[0],
                                result.statistics->ks_distance[1],
                                result.statistics->ks_distance[2]);
                return 0;
            }
        }
        std::fprintf(stderr, "error: no experiment selected\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
