#include "wsdecay/experiments.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "wsdecay/classical.hpp"
#include "wsdecay/csv.hpp"
#include "wsdecay/parallel.hpp"
#include "wsdecay/quantum.hpp"
#include "wsdecay/rmt.hpp"
#include "wsdecay/rng.hpp"

namespace wsdecay {

namespace {

using json = nlohmann::json;

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string series_digest(const SurvivalSeries& s) {
    std::uint64_t h = fnv1a(s.t.data(), s.t.size() * sizeof(double));
    h ^= fnv1a(s.p.data(), s.p.size() * sizeof(double));
    std::ostringstream os;
    os << "fnv1a:" << std::hex << h;
    return os.str();
}

std::vector<std::pair<std::string, std::string>> metadata_block(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const auto& n = cfg.numerics;
    std::vector<std::pair<std::string, std::string>> md;
    md.emplace_back("generator", std::string("wsdecay ") + kVersion);
    md.emplace_back("experiment", to_string(cfg.experiment));
    md.emplace_back("hbar", format_double(p.hbar));
    md.emplace_back("omega", format_double(p.omega));
    md.emplace_back("epsilon", format_double(p.epsilon));
    md.emplace_back("a_omega", format_double(p.a_omega));
    md.emplace_back("f0", format_double(p.f0));
    md.emplace_back("q", std::to_string(p.q));
    md.emplace_back("r", std::to_string(p.r));
    md.emplace_back("t0", format_double(p.t0));
    md.emplace_back("t_omega", format_double(p.t_omega));
    md.emplace_back("omega_b", format_double(bloch_frequency(p.f0, p.hbar)));
    md.emplace_back("strip_p1", format_double(cfg.strip.p1));
    md.emplace_back("strip_p2", format_double(cfg.strip.p2));
    md.emplace_back("grid_n", std::to_string(n.grid_n));
    md.emplace_back("grid_p_min_request", format_double(n.grid_p_min));
    md.emplace_back("grid_p_max", format_double(n.grid_p_max));
    md.emplace_back("absorber_fraction", format_double(n.absorber_fraction));
    md.emplace_back("dt_divisor", std::to_string(n.dt_divisor));
    md.emplace_back("classical_dt_divisor", std::to_string(n.classical_dt_divisor));
    md.emplace_back("island_norm_threshold", format_double(n.island_norm_threshold));
    md.emplace_back("x0", format_double(n.x0));
    md.emplace_back("p0", format_double(n.p0));
    md.emplace_back("sigma_p", format_double(n.sigma_p));
    md.emplace_back("periods", std::to_string(cfg.periods));
    md.emplace_back("seed", std::to_string(cfg.seed));
    md.emplace_back("workers", std::to_string(cfg.workers));
    if (cfg.ratio) md.emplace_back("ratio", format_double(*cfg.ratio));
    return md;
}

void write_manifest(const ExperimentConfig& cfg) {
    std::ofstream out(cfg.output_dir / "manifest.txt");
    if (!out) throw std::runtime_error("cannot write manifest in " + cfg.output_dir.string());
    for (const auto& [key, value] : metadata_block(cfg)) out << key << " = " << value << "\n";
    out << "ensemble_size = " << cfg.ensemble_size << "\n";
    out << "sample_stride = " << cfg.sample_stride << "\n";
    out << "t_shift_periods = " << format_double(cfg.t_shift_periods) << "\n";
    out << "t_heisenberg_periods = " << format_double(cfg.t_heisenberg_periods) << "\n";
    out << "amp_stats_period = " << cfg.amp_stats_period << "\n";
}

json fit_json(const PowerLawFit& f, double t_omega) {
    return json{{"exponent", f.exponent},
                {"t_heisenberg", f.t_heisenberg},
                {"t_heisenberg_over_t_omega", f.t_heisenberg / t_omega},
                {"t_shift", f.t_shift},
                {"window_lo", f.window_lo},
                {"window_hi", f.window_hi},
                {"residual", f.residual},
                {"low_confidence", f.low_confidence}};
}

json fit_json(const ExponentialFit& f) {
    return json{{"rate", f.rate},
                {"window_lo", f.window_lo},
                {"window_hi", f.window_hi},
                {"residual", f.residual}};
}

json fit_json(const PeakFit& f) {
    return json{{"a", f.a},
                {"b", f.b},
                {"delta_omega", f.delta_omega},
                {"center", f.center},
                {"peak_value", f.peak_value()},
                {"residual", f.residual},
                {"converged", f.converged},
                {"iterations", f.iterations}};
}

json fit_json(const WidthScalingFit& f) {
    return json{{"gamma", f.gamma}, {"prefactor", f.prefactor}, {"residual", f.residual}};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

LatticeParams params_for_ratio(const LatticeParams& base, double ratio) {
    // scan knob: F0 varies at fixed ω so the classical driving is unchanged
    const double f0 = base.hbar * base.omega / (2.0 * std::numbers::pi * ratio);
    return LatticeParams::make(base.hbar, base.omega, base.epsilon, base.q, base.r, f0);
}

MomentumGrid make_grid(const ExperimentConfig& cfg) {
    const auto& n = cfg.numerics;
    MomentumGrid grid = MomentumGrid::make(n.grid_p_min, n.grid_p_max, n.grid_n,
                                           cfg.params.hbar, n.absorber_fraction);
    if (grid.absorber_top > cfg.strip.p1 - 4.0)
        throw std::invalid_argument("config: absorber ramp top must stay below p1 - 4");
    return grid;
}

SurvivalSeries survival_series_for(const LatticeParams& params, const ExperimentConfig& cfg,
                                   int n_periods, WavepacketState* capture,
                                   int capture_period,
                                   std::vector<std::pair<int, std::vector<double>>>* snapshots) {
    const MomentumGrid grid = MomentumGrid::make(cfg.numerics.grid_p_min,
                                                 cfg.numerics.grid_p_max, cfg.numerics.grid_n,
                                                 params.hbar, cfg.numerics.absorber_fraction);
    const double x0 = cfg.numerics.x0 != 0.0 ? cfg.numerics.x0 : std::numbers::pi;
    WavepacketState state = init_gaussian(x0, cfg.numerics.p0, cfg.numerics.sigma_p,
                                          grid, params);
    const double dt = params.t_omega / cfg.numerics.dt_divisor;

    SurvivalSeries series;
    series.source = SeriesSource::quantum;
    series.t.reserve(n_periods + 1);
    series.p.reserve(n_periods + 1);
    for (int k = 0; k <= n_periods; ++k) {
        if (k > 0) evolve(state, params.t_omega, dt);
        series.t.push_back(k * params.t_omega);
        series.p.push_back(survival_probability(state, cfg.strip));
        if (capture && k == capture_period) *capture = state;
        if (snapshots && k % cfg.sample_stride == 0)
            snapshots->emplace_back(k, momentum_density(state));
    }
    return series;
}

void write_survival_csv(const std::filesystem::path& path, const ExperimentConfig& cfg,
                        const SurvivalSeries& series) {
    auto md = metadata_block(cfg);
    md.emplace_back("source", to_string(series.source));
    CsvWriter csv(path, md, {"t_over_T_omega", "P"});
    for (std::size_t i = 0; i < series.size(); ++i)
        csv.row({series.t[i] / cfg.params.t_omega, series.p[i]});
    csv.close();
}

RunResult run_strobe(const ExperimentConfig& cfg) {
    // non-biased section: F0 = 0 regardless of the resonance setting
    const LatticeParams p0 = LatticeParams::make(cfg.params.hbar, cfg.params.omega,
                                                 cfg.params.epsilon, cfg.params.q,
                                                 cfg.params.r, 0.0);
    SplitMix64 rng(cfg.seed);
    std::vector<PhaseState> seeds;
    seeds.reserve(cfg.strobe_seeds);
    for (int i = 0; i < cfg.strobe_seeds; ++i)
        seeds.push_back(PhaseState{rng.uniform(0.0, 2.0 * std::numbers::pi),
                                   rng.uniform(-8.0, 8.0), p0.t0});
    const double dt = p0.t_omega / cfg.numerics.classical_dt_divisor;
    const auto points = stroboscopic_section(seeds, cfg.periods, p0, dt);

    RunResult result;
    const auto path = cfg.output_dir / "strobe.csv";
    CsvWriter csv(path, metadata_block(cfg), {"x", "p"});
    for (const auto& pt : points) csv.row({pt.x, pt.p});
    csv.close();
    result.files.push_back(path);
    return result;
}

RunResult run_monodromy_map(const ExperimentConfig& cfg) {
    const double dt = cfg.params.t_omega / cfg.numerics.classical_dt_divisor;
    const MonodromyMap map =
        monodromy_map(0.0, 2.0 * std::numbers::pi, cfg.numerics.map_nx, -8.0, 8.0,
                      cfg.numerics.map_np, 6.0 * cfg.params.t_omega, cfg.params, dt,
                      cfg.workers);
    RunResult result;
    const auto path = cfg.output_dir / "monodromy_map.csv";
    CsvWriter csv(path, metadata_block(cfg), {"x", "p", "log10_norm"});
    for (std::size_t jp = 0; jp < map.p.size(); ++jp)
        for (std::size_t ix = 0; ix < map.x.size(); ++ix)
            csv.row({map.x[ix], map.p[jp], map.at(jp, ix)});
    csv.close();
    result.files.push_back(path);
    return result;
}

RunResult run_classical_decay(const ExperimentConfig& cfg) {
    SurvivalOptions opt;
    opt.dt_divisor = cfg.numerics.classical_dt_divisor;
    opt.island_norm_threshold = cfg.numerics.island_norm_threshold;
    opt.workers = cfg.workers;
    const SurvivalSeries series = classical_survival(cfg.ensemble_size, cfg.periods,
                                                     cfg.strip, cfg.params, cfg.seed, opt);
    RunResult result;
    const auto path = cfg.output_dir / "classical_survival.csv";
    write_survival_csv(path, cfg, series);
    result.files.push_back(path);

    json fits{{"series_digest", series_digest(series)}};
    try {
        const double lo = 0.1 * cfg.periods * cfg.params.t_omega;
        const double hi = cfg.periods * cfg.params.t_omega;
        const ExponentialFit ef = fit_exponential(series, lo, hi);
        fits["exponential"] = fit_json(ef);
        result.exponential_fit = ef;
    } catch (const std::exception& e) {
        fits["exponential_error"] = e.what();
    }
    const auto fit_path = cfg.output_dir / "classical_fits.json";
    write_json(fit_path, fits);
    result.files.push_back(fit_path);
    return result;
}

RunResult run_quantum_decay(const ExperimentConfig& cfg) {
    std::vector<std::pair<int, std::vector<double>>> snapshots;
    const SurvivalSeries series =
        survival_series_for(cfg.params, cfg, cfg.periods, nullptr, -1, &snapshots);

    RunResult result;
    const auto surv_path = cfg.output_dir / "quantum_survival.csv";
    write_survival_csv(surv_path, cfg, series);
    result.files.push_back(surv_path);

    const MomentumGrid grid = make_grid(cfg);
    if (cfg.single_snapshot_file) {
        const auto dens_path = cfg.output_dir / "momentum_density.csv";
        CsvWriter csv(dens_path, metadata_block(cfg), {"t_over_T_omega", "p", "abs_psi"});
        for (const auto& [k, dens] : snapshots)
            for (std::size_t j = 0; j < dens.size(); ++j)
                csv.row({static_cast<double>(k), grid.p(j), dens[j]});
        csv.close();
        result.files.push_back(dens_path);
    } else {
        for (const auto& [k, dens] : snapshots) {
            const auto dens_path =
                cfg.output_dir / ("momentum_density_" + std::to_string(k) + ".csv");
            CsvWriter csv(dens_path, metadata_block(cfg), {"t_over_T_omega", "p", "abs_psi"});
            for (std::size_t j = 0; j < dens.size(); ++j)
                csv.row({static_cast<double>(k), grid.p(j), dens[j]});
            csv.close();
            result.files.push_back(dens_path);
        }
    }

    json fits{{"series_digest", series_digest(series)}};
    try {
        const PowerLawFit pf =
            fit_power_tail_auto(series, cfg.t_shift_periods * cfg.params.t_omega);
        fits["power_law"] = fit_json(pf, cfg.params.t_omega);
        result.power_fit = pf;
    } catch (const std::exception& e) {
        fits["power_law_error"] = e.what();
    }
    try {
        const double lo = 0.1 * cfg.periods * cfg.params.t_omega;
        const double hi = cfg.periods * cfg.params.t_omega;
        const ExponentialFit ef = fit_exponential(series, lo, hi);
        fits["exponential"] = fit_json(ef);
        result.exponential_fit = ef;
    } catch (const std::exception& e) {
        fits["exponential_error"] = e.what();
    }
    const auto fit_path = cfg.output_dir / "quantum_fits.json";
    write_json(fit_path, fits);
    result.files.push_back(fit_path);
    return result;
}

RunResult run_amp_stats(const ExperimentConfig& cfg) {
    WavepacketState capture;
    survival_series_for(cfg.params, cfg, cfg.amp_stats_period, &capture,
                        cfg.amp_stats_period, nullptr);
    const AmplitudeSamples samples = amplitude_samples(capture, cfg.strip);
    const DistributionComparison stats = compare_distributions(samples.s);

    RunResult result;
    result.statistics = stats;
    const auto hist_path = cfg.output_dir / "amplitude_histogram.csv";
    CsvWriter csv(hist_path, metadata_block(cfg),
                  {"log10_x", "W_empirical", "W_goe", "W_gue", "W_gse"});
    for (std::size_t b = 0; b < stats.histogram_log10_x.size(); ++b) {
        const double x = std::pow(10.0, stats.histogram_log10_x[b]);
        // theory curves transformed to the log axis: x·ln(10)·W_ν(x)
        const double jac = x * std::numbers::ln10;
        csv.row({stats.histogram_log10_x[b], stats.histogram_density[b],
                 jac * chi2_density(x, EnsembleClass{1}),
                 jac * chi2_density(x, EnsembleClass{2}),
                 jac * chi2_density(x, EnsembleClass{4})});
    }
    csv.close();
    result.files.push_back(hist_path);

    json stats_json{{"ks_goe", stats.ks_distance[0]},
                    {"ks_gue", stats.ks_distance[1]},
                    {"ks_gse", stats.ks_distance[2]},
                    {"best_nu", stats.best_nu},
                    {"samples", samples.s.size()},
                    {"t_over_T_omega", cfg.amp_stats_period}};
    const auto json_path = cfg.output_dir / "amplitude_stats.json";
    write_json(json_path, stats_json);
    result.files.push_back(json_path);
    return result;
}

RunResult run_rmt_curve(const ExperimentConfig& cfg) {
    const RmtSpec spec = RmtSpec::from_heisenberg(
        cfg.params.q, cfg.t_heisenberg_periods * cfg.params.t_omega);
    RunResult result;
    const auto path = cfg.output_dir / "rmt_curve.csv";
    auto md = metadata_block(cfg);
    md.emplace_back("t_heisenberg_over_t_omega", format_double(cfg.t_heisenberg_periods));
    md.emplace_back("source", "rmt");
    CsvWriter csv(path, md, {"t_over_T_omega", "P"});
    for (int k = 0; k <= cfg.periods; ++k)
        csv.row({static_cast<double>(k),
                 survival_closed(k * cfg.params.t_omega, spec)});
    csv.close();
    result.files.push_back(path);
    return result;
}

RunResult run_resonance_scan(const ExperimentConfig& cfg) {
    const std::vector<double> ratios =
        cfg.scan_ratios.empty() ? default_scan_ratios() : cfg.scan_ratios;
    const auto points = scan_survival(cfg, ratios, cfg.periods);

    RunResult result;
    const auto scan_path = cfg.output_dir / "resonance_scan.csv";
    auto md = metadata_block(cfg);
    md.emplace_back("t_star_over_T_omega", std::to_string(cfg.periods));
    CsvWriter csv(scan_path, md, {"ratio", "omega_b", "P", "ok"});
    for (const auto& pt : points)
        csv.row({pt.ratio, pt.omega_b, pt.survival, pt.ok ? 1.0 : 0.0});
    csv.close();
    result.files.push_back(scan_path);

    std::vector<double> wb, pv;
    for (const auto& pt : points)
        if (pt.ok) {
            wb.push_back(pt.omega_b);
            pv.push_back(pt.survival);
        }
    json fits;
    try {
        const PeakFit pf = fit_peak_profile(wb, pv, cfg.params.omega);
        fits["peak"] = fit_json(pf);
        result.peak_fit = pf;
    } catch (const std::exception& e) {
        fits["peak_error"] = e.what();
    }
    fits["failures"] = json::array();
    for (const auto& pt : points)
        if (!pt.ok) fits["failures"].push_back({{"ratio", pt.ratio}, {"error", pt.error}});
    const auto fit_path = cfg.output_dir / "resonance_fits.json";
    write_json(fit_path, fits);
    result.files.push_back(fit_path);
    return result;
}

RunResult run_width_scaling(const ExperimentConfig& cfg) {
    const std::vector<double> ratios =
        cfg.scan_ratios.empty() ? default_scan_ratios() : cfg.scan_ratios;
    RunResult result;
    std::vector<double> times, widths;
    json per_time = json::array();
    for (int t_star : cfg.width_scan_periods) {
        const auto points = scan_survival(cfg, ratios, t_star);
        const auto scan_path =
            cfg.output_dir / ("resonance_scan_" + std::to_string(t_star) + ".csv");
        auto md = metadata_block(cfg);
        md.emplace_back("t_star_over_T_omega", std::to_string(t_star));
        CsvWriter csv(scan_path, md, {"ratio", "omega_b", "P", "ok"});
        for (const auto& pt : points)
            csv.row({pt.ratio, pt.omega_b, pt.survival, pt.ok ? 1.0 : 0.0});
        csv.close();
        result.files.push_back(scan_path);

        std::vector<double> wb, pv;
        for (const auto& pt : points)
            if (pt.ok) {
                wb.push_back(pt.omega_b);
                pv.push_back(pt.survival);
            }
        const PeakFit pf = fit_peak_profile(wb, pv, cfg.params.omega);
        per_time.push_back({{"t_star_over_T_omega", t_star}, {"fit", fit_json(pf)}});
        times.push_back(t_star * cfg.params.t_omega);
        widths.push_back(pf.delta_omega);
    }

    const auto width_path = cfg.output_dir / "peak_widths.csv";
    CsvWriter csv(width_path, metadata_block(cfg), {"t_over_T_omega", "delta_omega"});
    for (std::size_t i = 0; i < times.size(); ++i)
        csv.row({times[i] / cfg.params.t_omega, widths[i]});
    csv.close();
    result.files.push_back(width_path);

    const WidthScalingFit wf = fit_width_scaling(times, widths);
    result.width_fit = wf;
    json fits{{"width_scaling", fit_json(wf)}, {"per_time", per_time}};
    const auto fit_path = cfg.output_dir / "width_scaling.json";
    write_json(fit_path, fits);
    result.files.push_back(fit_path);
    return result;
}

} // namespace

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::strobe: return "strobe";
        case Experiment::monodromy_map: return "monodromy-map";
        case Experiment::classical_decay: return "classical-decay";
        case Experiment::quantum_decay: return "quantum-decay";
        case Experiment::amp_stats: return "amp-stats";
        case Experiment::rmt_curve: return "rmt-curve";
        case Experiment::resonance_scan: return "resonance-scan";
        case Experiment::width_scaling: return "width-scaling";
    }
    return "unknown";
}

void ExperimentConfig::resolve() {
    if (numerics.x0 == 0.0) numerics.x0 = std::numbers::pi;
    if (ratio)
        params = LatticeParams::make(params.hbar, params.omega, params.epsilon, params.q,
                                     params.r,
                                     params.hbar * params.omega /
                                         (2.0 * std::numbers::pi * *ratio));
    validate();
}

void ExperimentConfig::validate() const {
    params.validate();
    strip.validate();
    if (periods < 0) throw std::invalid_argument("config: periods must be >= 0");
    if (sample_stride < 1) throw std::invalid_argument("config: sample_stride must be >= 1");
    if (numerics.dt_divisor < 512)
        throw std::invalid_argument("config: dt_divisor must be >= 512");
    if (numerics.classical_dt_divisor < 256)
        throw std::invalid_argument("config: classical_dt_divisor must be >= 256");
    if (ratio && !(*ratio > 0.0))
        throw std::invalid_argument("config: ratio must be positive");
    for (double rr : scan_ratios)
        if (!(rr > 0.0) || !std::isfinite(rr))
            throw std::invalid_argument("config: scan ratios must be finite and positive");
}

std::vector<double> default_scan_ratios() {
    std::vector<double> ratios;
    ratios.reserve(41);
    for (int i = 0; i < 41; ++i) ratios.push_back(0.998 + 0.004 * i / 40.0);
    return ratios;
}

SurvivalSeries quantum_survival_series(const ExperimentConfig& config,
                                       const LatticeParams& params) {
    return survival_series_for(params, config, config.periods, nullptr, -1, nullptr);
}

std::vector<ScanPoint> scan_survival(const ExperimentConfig& config,
                                     const std::vector<double>& ratios,
                                     int t_star_periods) {
    std::vector<ScanPoint> points(ratios.size());
    parallel_for(ratios.size(), config.workers, [&](std::size_t i) {
        ScanPoint& pt = points[i];
        pt.ratio = ratios[i];
        pt.omega_b = config.params.omega / ratios[i];
        try {
            const LatticeParams p = params_for_ratio(config.params, ratios[i]);
            const SurvivalSeries series =
                survival_series_for(p, config, t_star_periods, nullptr, -1, nullptr);
            pt.survival = series.p.back();
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    });
    return points;
}

RunResult run(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    cfg.resolve();
    std::filesystem::create_directories(cfg.output_dir);
    if (!std::filesystem::is_directory(cfg.output_dir))
        throw std::runtime_error("config: output_dir is not writable");
    if (cfg.experiment == Experiment::quantum_decay ||
        cfg.experiment == Experiment::amp_stats ||
        cfg.experiment == Experiment::resonance_scan ||
        cfg.experiment == Experiment::width_scaling)
        make_grid(cfg);  // validates grid/absorber/strip clearance up front

    RunResult result;
    switch (cfg.experiment) {
        case Experiment::strobe: result = run_strobe(cfg); break;
        case Experiment::monodromy_map: result = run_monodromy_map(cfg); break;
        case Experiment::classical_decay: result = run_classical_decay(cfg); break;
        case Experiment::quantum_decay: result = run_quantum_decay(cfg); break;
        case Experiment::amp_stats: result = run_amp_stats(cfg); break;
        case Experiment::rmt_curve: result = run_rmt_curve(cfg); break;
        case Experiment::resonance_scan: result = run_resonance_scan(cfg); break;
        case Experiment::width_scaling: result = run_width_scaling(cfg); break;
    }
    write_manifest(cfg);
    result.files.push_back(cfg.output_dir / "manifest.txt");
    return result;
}

} // namespace wsdecay
