#include "qtc/experiment.hpp"

#include "qtc/closure.hpp"
#include "qtc/csv.hpp"
#include "qtc/errors.hpp"
#include "qtc/lyapunov.hpp"
#include "qtc/strobe.hpp"
#include "qtc/svg.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace qtc {
namespace {

using json = nlohmann::json;

struct Labels {
    std::string t, x, p, var_x, var_p, cov;
};

Labels labels(const ExperimentConfig& cfg)
{
    if (!cfg.units.is_physical()) {
        return {"1", "1", "1", "1", "1", "1"};
    }
    return {std::string(canonical_unit(Quantity::time)),
            std::string(canonical_unit(Quantity::length)),
            std::string(canonical_unit(Quantity::momentum)),
            std::string(canonical_unit(Quantity::area)),
            std::string(canonical_unit(Quantity::momentum_variance)),
            std::string(canonical_unit(Quantity::covariance))};
}

class ArtifactLog {
public:
    explicit ArtifactLog(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

    void add(const std::string& name)
    {
        const auto p = path(name);
        items_.push_back({name, sha256_file(p), std::filesystem::file_size(p)});
    }

    const std::vector<Artifact>& items() const { return items_; }

private:
    std::filesystem::path dir_;
    std::vector<Artifact> items_;
};

json gaussian_json(const GaussianState& g)
{
    return {{"mean_x", g.mean_x}, {"mean_p", g.mean_p}, {"var_x", g.var_x}, {"var_p", g.var_p}, {"cov_xp", g.cov_xp}};
}

void run_simulate(const ExperimentConfig& cfg, ArtifactLog& log, json& summary)
{
    auto runner = make_runner(cfg);
    const auto L = labels(cfg);
    const std::uint64_t total = cfg.periods * cfg.steps_per_period;
    CsvWriter csv(log.path("trajectory.csv"),
                  {column("t", L.t), column("x", L.x), column("p", L.p), column("var_x", L.var_x),
                   column("var_p", L.var_p), column("cov_xp", L.cov)});
    std::vector<double> ts, xs;
    double max_sigma_x = 0.0;
    double min_det = std::numeric_limits<double>::infinity();
    const bool quantum = cfg.backend == Backend::closure || cfg.backend == Backend::sse ||
                         cfg.backend == Backend::wigner_grid;
    auto record = [&] {
        const auto g = runner->moments();
        csv.row({runner->time(), g.mean_x, g.mean_p, g.var_x, g.var_p, g.cov_xp});
        ts.push_back(runner->time());
        xs.push_back(g.mean_x);
        max_sigma_x = std::max(max_sigma_x, std::sqrt(std::max(0.0, g.var_x)));
        if (quantum) {
            min_det = std::min(min_det, g.uncertainty_product());
        }
    };
    record();
    for (std::uint64_t s = 1; s <= total; ++s) {
        runner->step();
        if (s % cfg.record_every == 0 || s == total) {
            record();
        }
    }
    csv.close();
    log.add("trajectory.csv");
    write_line_svg(log.path("trajectory.svg"), ts, xs,
                   {"centroid position", column("t", L.t), column("x", L.x)});
    log.add("trajectory.svg");
    summary["steps"] = total;
    summary["rows"] = ts.size();
    summary["final"] = gaussian_json(runner->moments());
    summary["max_sigma_x"] = max_sigma_x;
    if (quantum) {
        summary["min_uncertainty_over_hbar2_4"] = min_det / (0.25 * cfg.units.hbar * cfg.units.hbar);
    }
}

void run_strobe(const ExperimentConfig& cfg, ArtifactLog& log, json& summary)
{
    auto runner = make_runner(cfg);
    const auto L = labels(cfg);
    const auto map = strobe_runner(*runner, cfg.period, cfg.strobe.periods);
    CsvWriter csv(log.path("strobe.csv"), {"n", column("t", L.t), column("x", L.x), column("p", L.p)});
    std::vector<double> xs, ps;
    for (std::size_t i = 0; i < map.samples.size(); ++i) {
        csv.row({static_cast<double>(i + 1), map.times[i], map.samples[i].x, map.samples[i].p});
        xs.push_back(map.samples[i].x);
        ps.push_back(map.samples[i].p);
    }
    csv.close();
    log.add("strobe.csv");
    write_scatter_svg(log.path("strobe.svg"), xs, ps,
                      {"stroboscopic map (" + std::string(backend_name(cfg.backend)) + ")", column("x", L.x),
                       column("p", L.p), -cfg.strobe.hist_x_max, cfg.strobe.hist_x_max, -cfg.strobe.hist_p_max,
                       cfg.strobe.hist_p_max});
    log.add("strobe.svg");
    const auto hist = strobe_histogram(map, cfg.strobe.hist_x_max, cfg.strobe.hist_p_max, cfg.strobe.bins);
    summary["rows"] = map.samples.size();
    summary["histogram_occupied_cells"] = hist.occupied_cells();
    summary["histogram_dropped"] = hist.dropped();
}

void run_lyapunov(const ExperimentConfig& cfg, ArtifactLog& log, json& summary)
{
    auto runner = make_runner(cfg);
    const auto L = labels(cfg);
    const auto est = lyapunov_paper_procedure(*runner, cfg.period, cfg.lyapunov);
    CsvWriter csv(log.path("divergence.csv"),
                  {column("t", L.t), column("mean_separation", "1"), column("ln_mean_separation", "1")});
    std::vector<double> ts, ys;
    for (const auto& pt : est.curve) {
        csv.row({pt.t, pt.mean_separation, pt.log_mean});
        ts.push_back(pt.t);
        ys.push_back(pt.log_mean);
    }
    csv.close();
    log.add("divergence.csv");
    std::optional<Segment> seg;
    if (est.t_end > est.t_start) {
        // Intercept through the curve's mean over the window.
        double sx = 0.0, sy = 0.0;
        int n = 0;
        for (const auto& pt : est.curve) {
            if (pt.t >= est.t_start && pt.t <= est.t_end) {
                sx += pt.t;
                sy += pt.log_mean;
                ++n;
            }
        }
        seg = Segment{est.lambda, sy / n - est.lambda * sx / n, est.t_start, est.t_end};
    }
    write_line_svg(log.path("divergence.svg"), ts, ys,
                   {"mean phase-space separation", column("t", L.t), "ln mean separation"}, seg);
    log.add("divergence.svg");
    summary["lambda"] = est.lambda;
    summary["std_error"] = est.std_error;
    summary["lambda_times_period"] = est.lambda * cfg.period;
    summary["fit_window"] = {est.t_start, est.t_end};
    summary["r_squared"] = est.r_squared;
    summary["n_fiducials"] = est.n_fiducials;
    summary["n_samples"] = est.n_samples;
    summary["reliable"] = est.reliable;
    summary["attractor_diameter"] = est.attractor_diameter;
    summary["fiducial_slopes"] = est.fiducial_slopes;
    if (!est.diagnostic.empty()) {
        summary["diagnostic"] = est.diagnostic;
    }
}

void run_snapshot(const ExperimentConfig& cfg, ArtifactLog& log, json& summary)
{
    if (cfg.backend != Backend::sse && cfg.backend != Backend::wigner_grid) {
        throw ConfigError("backend", "wigner-snapshot requires the sse or wigner-grid backend");
    }
    auto runner = make_runner(cfg);
    const auto L = labels(cfg);
    json snaps = json::array();
    for (auto period : cfg.snapshot.at_periods) {
        const std::uint64_t target = period * cfg.steps_per_period;
        runner->run(target - runner->steps());
        WignerGrid W;
        if (const auto* sse = dynamic_cast<const SseRunner*>(runner.get())) {
            W = wigner_transform(sse->wavefunction(), cfg.snapshot.p_count, cfg.units.hbar, cfg.snapshot.x_stride);
        } else {
            W = dynamic_cast<const WignerRunner&>(*runner).wigner();
        }
        const std::string name = "wigner_" + std::to_string(period) + ".csv";
        write_wigner_csv(log.path(name), W, L.x, L.p);
        log.add(name);
        const auto g = runner->moments();
        snaps.push_back({{"period", period},
                         {"t", runner->time()},
                         {"file", name},
                         {"min_w", W.min()},
                         {"var_x", g.var_x},
                         {"var_p", g.var_p}});
    }
    summary["snapshots"] = snaps;
}

const char* verdict_str(Verdict v) { return verdict_name(v).data(); }

void run_classicality(const ExperimentConfig& cfg, ArtifactLog& log, json& summary)
{
    const auto r = classicality_report(cfg.system, cfg.classicality.typical, 0.0, cfg.measurement, cfg.units.hbar,
                                       cfg.classicality.options);
    json j = {
        {"k", cfg.measurement.k},
        {"localization", {{"lhs_8k", r.localization_lhs}, {"rhs", r.localization_rhs}, {"at_x", r.localization_x},
                          {"verdict", verdict_str(r.localization)}}},
        {"noise", {{"lower", r.noise_lower}, {"upper", r.noise_upper}, {"hbar_k", r.hbar_k},
                   {"verdict", verdict_str(r.noise)}}},
        {"nonlinearity_strong", r.nonlinearity_strong},
        {"strong_rhs", r.strong_rhs},
        {"action_s", r.action_s},
        {"s_force", std::isfinite(r.s_force) ? json(r.s_force) : json(nullptr)},
        {"s_energy", std::isfinite(r.s_energy) ? json(r.s_energy) : json(nullptr)},
        {"action_estimates_disagree", r.action_estimates_disagree},
        {"k_window", {{"empty", r.k_window.empty}, {"lo", r.k_window.lo}, {"hi", r.k_window.hi},
                      {"decades", r.k_window.decades()}, {"contains_k", r.k_window.contains(cfg.measurement.k)}}},
        {"classical", r.classical},
        {"notes", r.notes},
    };
    const auto path = log.path("classicality.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string());
    }
    out << j.dump(2) << '\n';
    out.close();
    if (out.fail()) {
        throw IoError("write failed: " + path.string());
    }
    log.add("classicality.json");
    summary = j;
}

} // namespace

std::string_view version() { return QTC_VERSION; }

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::simulate: return "simulate";
    case Command::lyapunov: return "lyapunov";
    case Command::strobe: return "strobe";
    case Command::wigner_snapshot: return "wigner-snapshot";
    case Command::check_classicality: return "check-classicality";
    }
    return "?";
}

GaussianState initial_gaussian(const ExperimentConfig& cfg)
{
    const auto& in = cfg.initial;
    if (in.var_x) {
        return {in.centroid.x, in.centroid.p, *in.var_x, *in.var_p, in.cov_xp.value_or(0.0)};
    }
    const auto g = localized_state(cfg.system, in.centroid, 0.0, cfg.measurement, cfg.units.hbar);
    if (!g) {
        throw ConfigError("initial.var_x", "no measurement steady state at the start point; give the variances");
    }
    return *g;
}

PositionGrid initial_grid(const ExperimentConfig& cfg)
{
    if (cfg.grid.x_min) {
        return PositionGrid::span(*cfg.grid.x_min, *cfg.grid.x_max, cfg.grid.n);
    }
    const auto g = initial_gaussian(cfg);
    const double reach = std::abs(g.mean_x) + 12.0 * std::sqrt(g.var_x);
    return default_position_grid(cfg.system, cfg.initial.centroid, cfg.grid.n, reach);
}

std::unique_ptr<Runner> make_runner(const ExperimentConfig& cfg, std::optional<Backend> backend)
{
    const NoiseSource noise(cfg.seed, 0);
    const double hbar = cfg.units.hbar;
    switch (backend.value_or(cfg.backend)) {
    case Backend::classical:
        return std::make_unique<ClassicalRunner>(cfg.system, cfg.initial.centroid, 0.0, cfg.dt);
    case Backend::noisy_classical:
        return std::make_unique<NoisyClassicalRunner>(cfg.system, cfg.initial.centroid, 0.0, cfg.dt,
                                                      cfg.classical_noise, noise);
    case Backend::closure:
        return std::make_unique<ClosureRunner>(cfg.system, initial_gaussian(cfg), 0.0, cfg.dt, cfg.measurement,
                                               hbar, noise);
    case Backend::sse: {
        auto psi = gaussian_wavepacket(initial_grid(cfg), initial_gaussian(cfg), hbar);
        return std::make_unique<SseRunner>(cfg.system, std::move(psi), 0.0, cfg.dt, cfg.measurement, hbar, noise);
    }
    case Backend::wigner_grid: {
        const auto psi = gaussian_wavepacket(initial_grid(cfg), initial_gaussian(cfg), hbar);
        auto W = wigner_transform(psi, cfg.grid.wigner_p_count, hbar);
        return std::make_unique<WignerRunner>(cfg.system, std::move(W), 0.0, cfg.dt, cfg.measurement, hbar, noise);
    }
    }
    throw ConfigError("backend", "unsupported backend");
}

RunResult run_experiment(const ExperimentConfig& cfg, Command cmd)
{
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    }
    ArtifactLog log(cfg.output_dir);
    RunResult result;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (cmd) {
        case Command::simulate: run_simulate(cfg, log, result.summary); break;
        case Command::lyapunov: run_lyapunov(cfg, log, result.summary); break;
        case Command::strobe: run_strobe(cfg, log, result.summary); break;
        case Command::wigner_snapshot: run_snapshot(cfg, log, result.summary); break;
        case Command::check_classicality: run_classicality(cfg, log, result.summary); break;
        }
    } catch (const NumericalHalt& h) {
        result.exit_code = exit_halt;
        result.halt_module = h.module();
        result.halt_message = h.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.artifacts = log.items();

    json manifest = {
        {"command", command_name(cmd)},
        {"version", version()},
        {"seed", cfg.seed},
        {"config", cfg.canonical},
        {"wall_time_s", wall},
        {"status", result.exit_code == exit_ok ? "ok" : "halted"},
        {"summary", result.summary},
    };
    if (result.exit_code == exit_halt) {
        manifest["halt"] = {{"module", result.halt_module}, {"message", result.halt_message}};
    }
    json arts = json::array();
    for (const auto& a : result.artifacts) {
        arts.push_back({{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    }
    manifest["artifacts"] = arts;
    result.manifest = log.path("manifest.json");
    std::ofstream out(result.manifest, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + result.manifest.string());
    }
    out << manifest.dump(2) << '\n';
    out.close();
    if (out.fail()) {
        throw IoError("write failed: " + result.manifest.string());
    }
    return result;
}

} // namespace qtc
