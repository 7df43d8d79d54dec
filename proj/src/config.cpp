#include "qtc/config.hpp"

#include "qtc/errors.hpp"
#include "qtc/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qtc {
namespace {

using json = nlohmann::json;

std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    require_object(obj, path);
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            std::string list;
            for (auto a : allowed) {
                list += list.empty() ? "" : ", ";
                list += a;
            }
            throw ConfigError(join(path, key), "unknown key (allowed: " + list + ")");
        }
    }
}

// Reads {"value": number, "unit": string} and records the canonical echo.
class Reader {
public:
    explicit Reader(UnitMode mode) : mode_(mode) {}

    std::optional<double> opt_quantity(const json& obj, const std::string& path, std::string_view key,
                                       Quantity q, json& echo) const
    {
        const auto it = obj.find(std::string(key));
        if (it == obj.end()) {
            return std::nullopt;
        }
        const auto here = join(path, key);
        if (it->is_number()) {
            throw ConfigError(here, "missing unit; write {\"value\": ..., \"unit\": \"" +
                                        std::string(mode_ == UnitMode::physical ? canonical_unit(q) : "1") +
                                        "\"}");
        }
        check_keys(*it, here, {"value", "unit"});
        if (!it->contains("value") || !(*it)["value"].is_number()) {
            throw ConfigError(join(here, "value"), "expected a number");
        }
        if (!it->contains("unit") || !(*it)["unit"].is_string()) {
            throw ConfigError(join(here, "unit"), "missing unit string");
        }
        const double v = (*it)["value"].get<double>();
        if (!std::isfinite(v)) {
            throw ConfigError(join(here, "value"), "must be finite");
        }
        double c = 0.0;
        try {
            c = to_canonical(q, v, (*it)["unit"].get<std::string>(), mode_);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(join(here, "unit"), e.what());
        }
        echo[std::string(key)] = {{"value", c},
                                  {"unit", mode_ == UnitMode::physical ? std::string(canonical_unit(q)) : "1"}};
        return c;
    }

    double quantity(const json& obj, const std::string& path, std::string_view key, Quantity q, json& echo) const
    {
        auto v = opt_quantity(obj, path, key, q, echo);
        if (!v) {
            throw ConfigError(join(path, key), "required field missing");
        }
        return *v;
    }

    json unit_value(double canonical, Quantity q) const
    {
        return {{"value", canonical},
                {"unit", mode_ == UnitMode::physical ? std::string(canonical_unit(q)) : "1"}};
    }

private:
    UnitMode mode_;
};

bool non_negative_integer(const json& v)
{
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::uint64_t read_count(const json& obj, const std::string& path, std::string_view key, std::uint64_t fallback,
                         std::uint64_t min_value, json& echo)
{
    std::uint64_t v = fallback;
    const auto it = obj.find(std::string(key));
    if (it != obj.end()) {
        if (!non_negative_integer(*it)) {
            throw ConfigError(join(path, key), "expected a non-negative integer");
        }
        v = it->get<std::uint64_t>();
    }
    if (v < min_value) {
        throw ConfigError(join(path, key), "must be >= " + std::to_string(min_value));
    }
    echo[std::string(key)] = v;
    return v;
}

double read_number(const json& obj, const std::string& path, std::string_view key, double fallback, json& echo)
{
    double v = fallback;
    const auto it = obj.find(std::string(key));
    if (it != obj.end()) {
        if (!it->is_number() || !std::isfinite(it->get<double>())) {
            throw ConfigError(join(path, key), "expected a finite number");
        }
        v = it->get<double>();
    }
    echo[std::string(key)] = v;
    return v;
}

const json& child(const json& obj, std::string_view key)
{
    static const json empty = json::object();
    const auto it = obj.find(std::string(key));
    return it == obj.end() ? empty : *it;
}

void positive_or_throw(double v, const std::string& path)
{
    if (!(v > 0.0)) {
        throw ConfigError(path, "must be positive");
    }
}

SystemSpec parse_system(const json& j, const Reader& rd, json& echo)
{
    const std::string path = "system";
    require_object(j, path);
    if (!j.contains("family") || !j["family"].is_string()) {
        throw ConfigError("system.family", "required: harmonic | double_well | driven_harmonic | duffing");
    }
    const auto family = j["family"].get<std::string>();
    echo["family"] = family;

    auto mass = [&] {
        const double m = rd.quantity(j, path, "m", Quantity::mass, echo);
        positive_or_throw(m, "system.m");
        return m;
    };
    auto quartic_B = [&](double A) {
        const bool has_b = j.contains("B");
        const bool has_ratio = j.contains("A_over_B");
        if (has_b == has_ratio) {
            throw ConfigError("system.B", "give exactly one of B or A_over_B");
        }
        double B = 0.0;
        if (has_b) {
            B = rd.quantity(j, path, "B", Quantity::quartic, echo);
        } else {
            json scratch;
            const double ratio = rd.quantity(j, path, "A_over_B", Quantity::area, scratch);
            positive_or_throw(ratio, "system.A_over_B");
            B = A / ratio;
            echo["B"] = rd.unit_value(B, Quantity::quartic);
        }
        positive_or_throw(B, has_b ? "system.B" : "system.A_over_B");
        return B;
    };

    if (family == "harmonic") {
        check_keys(j, path, {"family", "m", "w0"});
        const double m = mass();
        return SystemSpec::harmonic(m, rd.quantity(j, path, "w0", Quantity::angular_frequency, echo));
    }
    if (family == "double_well") {
        check_keys(j, path, {"family", "m", "A", "B", "A_over_B"});
        const double m = mass();
        const double A = rd.quantity(j, path, "A", Quantity::stiffness, echo);
        return SystemSpec::double_well(m, A, quartic_B(A));
    }
    if (family == "driven_harmonic") {
        check_keys(j, path, {"family", "m", "w0", "Lambda", "w"});
        const double m = mass();
        const double w0 = rd.quantity(j, path, "w0", Quantity::angular_frequency, echo);
        const double L = rd.quantity(j, path, "Lambda", Quantity::force, echo);
        const double w = rd.quantity(j, path, "w", Quantity::angular_frequency, echo);
        positive_or_throw(w, "system.w");
        return SystemSpec::driven_harmonic(m, w0, L, w);
    }
    if (family == "duffing") {
        check_keys(j, path, {"family", "m", "A", "B", "A_over_B", "Lambda", "w"});
        const double m = mass();
        const double A = rd.quantity(j, path, "A", Quantity::stiffness, echo);
        const double B = quartic_B(A);
        const double L = rd.quantity(j, path, "Lambda", Quantity::force, echo);
        const double w = rd.quantity(j, path, "w", Quantity::angular_frequency, echo);
        positive_or_throw(w, "system.w");
        return SystemSpec::duffing(m, A, B, L, w);
    }
    throw ConfigError("system.family", "unknown family \"" + family + "\"");
}

// Grid points a full quantum run would need, from the classical extent of the motion.
double estimate_grid_points(const SystemSpec& sys, const PhaseState& start, double hbar)
{
    const auto grid = default_position_grid(sys, start, 4);
    const double half = -grid.x_min;
    const double lam = std::abs(drive_amplitude(sys));
    const double energy = start.p * start.p / (2.0 * sys.mass()) + potential(sys, start.x, 0.0) -
                          drive_amplitude(sys) * start.x + lam * std::abs(start.x);
    double vmin = energy;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -half / 3.0 + (2.0 * half / 3.0) * i / 2000.0;
        vmin = std::min(vmin, potential(sys, x, 0.0) - drive_amplitude(sys) * x - lam * std::abs(x));
    }
    const double p_max = std::sqrt(2.0 * sys.mass() * (energy - vmin)) + std::abs(start.p);
    return required_grid_points(half, std::max(p_max, 1e-300), hbar);
}

} // namespace

std::string_view backend_name(Backend b)
{
    switch (b) {
    case Backend::classical: return "classical";
    case Backend::noisy_classical: return "noisy-classical";
    case Backend::closure: return "closure";
    case Backend::sse: return "sse";
    case Backend::wigner_grid: return "wigner-grid";
    }
    return "?";
}

std::optional<Backend> parse_backend(std::string_view name)
{
    for (auto b : {Backend::classical, Backend::noisy_classical, Backend::closure, Backend::sse,
                   Backend::wigner_grid}) {
        if (backend_name(b) == name) {
            return b;
        }
    }
    return std::nullopt;
}

double reference_period(const SystemSpec& sys)
{
    if (auto T = sys.drive_period()) {
        return *T;
    }
    const double m = sys.mass();
    return std::visit(
        [m](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Harmonic>) {
                return s.w0 != 0.0 ? 2.0 * constants::pi / std::abs(s.w0) : 0.0;
            } else if constexpr (std::is_same_v<T, DoubleWell>) {
                return s.A > 0.0 ? 2.0 * constants::pi / std::sqrt(4.0 * s.A / m) : 0.0;
            } else {
                return 0.0;
            }
        },
        sys.model());
}

ExperimentConfig validate_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed document: ") + e.what());
    }
    return validate_config(doc);
}

ExperimentConfig validate_config(const json& doc)
{
    check_keys(doc, "", {"description", "units", "system", "measurement", "backend", "initial", "integrator",
                         "classical_noise", "protocols", "seed", "output"});
    ExperimentConfig cfg;
    json& echo = cfg.canonical;
    echo = json::object();
    if (doc.contains("description")) {
        if (!doc["description"].is_string()) {
            throw ConfigError("description", "expected a string");
        }
        echo["description"] = doc["description"];
    }

    // units
    {
        const json& u = child(doc, "units");
        check_keys(u, "units", {"mode", "hbar_eff"});
        if (u.contains("mode") && !u["mode"].is_string()) {
            throw ConfigError("units.mode", "expected a string");
        }
        const std::string mode = u.value("mode", std::string("physical"));
        if (mode == "physical") {
            if (u.contains("hbar_eff")) {
                throw ConfigError("units.hbar_eff", "only valid in dimensionless mode");
            }
            cfg.units = UnitSystem::physical();
            echo["units"] = {{"mode", "physical"}};
        } else if (mode == "dimensionless") {
            if (!u.contains("hbar_eff") || !u["hbar_eff"].is_number() || !(u["hbar_eff"].get<double>() > 0.0)) {
                throw ConfigError("units.hbar_eff", "dimensionless mode requires a positive hbar_eff");
            }
            cfg.units = UnitSystem::dimensionless(u["hbar_eff"].get<double>());
            echo["units"] = {{"mode", "dimensionless"}, {"hbar_eff", cfg.units.hbar}};
        } else {
            throw ConfigError("units.mode", "expected \"physical\" or \"dimensionless\"");
        }
    }
    const Reader rd(cfg.units.mode);
    const double hbar = cfg.units.hbar;

    if (!doc.contains("system")) {
        throw ConfigError("system", "required field missing");
    }
    echo["system"] = json::object();
    try {
        cfg.system = parse_system(doc["system"], rd, echo["system"]);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("system", e.what());
    }

    {
        const json& m = child(doc, "measurement");
        check_keys(m, "measurement", {"k"});
        echo["measurement"] = json::object();
        cfg.measurement.k = rd.opt_quantity(m, "measurement", "k", Quantity::measurement_rate, echo["measurement"])
                                .value_or(0.0);
        if (cfg.measurement.k < 0.0) {
            throw ConfigError("measurement.k", "must be >= 0");
        }
        echo["measurement"]["k"] = rd.unit_value(cfg.measurement.k, Quantity::measurement_rate);
    }

    {
        if (doc.contains("backend") && !doc["backend"].is_string()) {
            throw ConfigError("backend", "expected a string");
        }
        const std::string name = doc.value("backend", std::string("closure"));
        const auto b = parse_backend(name);
        if (!b) {
            throw ConfigError("backend", "unknown backend \"" + name +
                                             "\" (classical | noisy-classical | closure | sse | wigner-grid)");
        }
        cfg.backend = *b;
        echo["backend"] = name;
    }

    // initial state
    {
        const std::string path = "initial";
        if (!doc.contains("initial")) {
            throw ConfigError(path, "required field missing");
        }
        const json& j = doc["initial"];
        check_keys(j, path, {"x", "p", "var_x", "var_p", "cov_xp"});
        json& e = echo["initial"] = json::object();
        cfg.initial.centroid.x = rd.quantity(j, path, "x", Quantity::length, e);
        cfg.initial.centroid.p = rd.quantity(j, path, "p", Quantity::momentum, e);
        cfg.initial.var_x = rd.opt_quantity(j, path, "var_x", Quantity::area, e);
        cfg.initial.var_p = rd.opt_quantity(j, path, "var_p", Quantity::momentum_variance, e);
        cfg.initial.cov_xp = rd.opt_quantity(j, path, "cov_xp", Quantity::covariance, e);
        if (cfg.initial.var_x && !(*cfg.initial.var_x > 0.0)) {
            throw ConfigError("initial.var_x", "must be positive");
        }
        if (cfg.initial.var_p && !(*cfg.initial.var_p > 0.0)) {
            throw ConfigError("initial.var_p", "must be positive");
        }
        if (cfg.initial.var_p && !cfg.initial.var_x) {
            throw ConfigError("initial.var_x", "required when var_p is given");
        }
        if (cfg.initial.var_x) {
            const double c = cfg.initial.cov_xp.value_or(0.0);
            if (!cfg.initial.var_p) {
                cfg.initial.var_p = (0.25 * hbar * hbar + c * c) / *cfg.initial.var_x;
                e["var_p"] = rd.unit_value(*cfg.initial.var_p, Quantity::momentum_variance);
            }
            cfg.initial.cov_xp = c;
            e["cov_xp"] = rd.unit_value(c, Quantity::covariance);
            const double det = *cfg.initial.var_x * *cfg.initial.var_p - c * c;
            if (det < 0.25 * hbar * hbar * (1.0 - 1e-6)) {
                throw ConfigError("initial.var_p", "var_x var_p - cov_xp^2 is below hbar^2/4");
            }
        }
        const bool quantum = cfg.backend == Backend::closure || cfg.backend == Backend::sse ||
                             cfg.backend == Backend::wigner_grid;
        if (quantum && !cfg.initial.var_x && !(cfg.measurement.k > 0.0)) {
            throw ConfigError("initial.var_x", "required for quantum backends when k = 0");
        }
    }

    // integrator
    {
        const std::string path = "integrator";
        const json& j = child(doc, "integrator");
        check_keys(j, path, {"period", "steps_per_period", "periods", "record_every", "grid"});
        json& e = echo["integrator"] = json::object();
        const auto T = rd.opt_quantity(j, path, "period", Quantity::time, e);
        if (T) {
            if (cfg.system.drive_period() && std::abs(*T - *cfg.system.drive_period()) > 1e-12 * *T) {
                throw ConfigError("integrator.period", "must equal the drive period 2pi/w for driven systems");
            }
            positive_or_throw(*T, "integrator.period");
            cfg.period = *T;
        } else {
            cfg.period = reference_period(cfg.system);
            if (!(cfg.period > 0.0)) {
                throw ConfigError("integrator.period", "required: the system has no natural period");
            }
            e["period"] = rd.unit_value(cfg.period, Quantity::time);
        }
        cfg.steps_per_period = read_count(j, path, "steps_per_period", 10000, 1, e);
        cfg.dt = cfg.period / static_cast<double>(cfg.steps_per_period);
        cfg.periods = read_count(j, path, "periods", 1, 1, e);
        cfg.record_every = read_count(j, path, "record_every", std::max<std::uint64_t>(1, cfg.steps_per_period / 10),
                                      1, e);

        const json& g = child(j, "grid");
        const std::string gpath = "integrator.grid";
        check_keys(g, gpath, {"n", "x_min", "x_max", "wigner_p_count", "wigner_x_stride"});
        json& ge = e["grid"] = json::object();
        cfg.grid.n = read_count(g, gpath, "n", 2048, 4, ge);
        if ((cfg.grid.n & (cfg.grid.n - 1)) != 0) {
            throw ConfigError("integrator.grid.n", "must be a power of two");
        }
        cfg.grid.x_min = rd.opt_quantity(g, gpath, "x_min", Quantity::length, ge);
        cfg.grid.x_max = rd.opt_quantity(g, gpath, "x_max", Quantity::length, ge);
        if (cfg.grid.x_min.has_value() != cfg.grid.x_max.has_value()) {
            throw ConfigError("integrator.grid.x_max", "x_min and x_max must be given together");
        }
        if (cfg.grid.x_min && !(*cfg.grid.x_max > *cfg.grid.x_min)) {
            throw ConfigError("integrator.grid.x_max", "must exceed x_min");
        }
        cfg.grid.wigner_p_count = read_count(g, gpath, "wigner_p_count", std::min<std::uint64_t>(256, cfg.grid.n), 2, ge);
        if (cfg.grid.wigner_p_count % 2 != 0 || cfg.grid.wigner_p_count > cfg.grid.n) {
            throw ConfigError("integrator.grid.wigner_p_count", "must be even and <= n");
        }
        cfg.grid.wigner_x_stride = read_count(g, gpath, "wigner_x_stride", 1, 1, ge);
        if (cfg.grid.n % cfg.grid.wigner_x_stride != 0) {
            throw ConfigError("integrator.grid.wigner_x_stride", "must divide n");
        }
    }

    // classical noise
    {
        const std::string path = "classical_noise";
        const json& j = child(doc, "classical_noise");
        check_keys(j, path, {"mode", "D_p", "D_x"});
        if (j.contains("mode") && !j["mode"].is_string()) {
            throw ConfigError("classical_noise.mode", "expected a string");
        }
        const std::string mode = j.value("mode", std::string("matched"));
        json& e = echo["classical_noise"] = json::object();
        if (mode == "matched") {
            if (j.contains("D_p") || j.contains("D_x")) {
                throw ConfigError(path, "D_p/D_x are only valid with mode \"explicit\"");
            }
            cfg.matched_noise = true;
            cfg.classical_noise = matched_classical_noise(cfg.system.mass(), hbar, cfg.measurement);
        } else if (mode == "explicit") {
            cfg.matched_noise = false;
            json scratch;
            cfg.classical_noise.D_p =
                rd.opt_quantity(j, path, "D_p", Quantity::momentum_diffusion, scratch).value_or(0.0);
            cfg.classical_noise.D_x =
                rd.opt_quantity(j, path, "D_x", Quantity::position_diffusion, scratch).value_or(0.0);
            if (cfg.classical_noise.D_p < 0.0) {
                throw ConfigError("classical_noise.D_p", "must be >= 0");
            }
            if (cfg.classical_noise.D_x < 0.0) {
                throw ConfigError("classical_noise.D_x", "must be >= 0");
            }
        } else {
            throw ConfigError("classical_noise.mode", "expected \"matched\" or \"explicit\"");
        }
        e["mode"] = "explicit";
        e["D_p"] = rd.unit_value(cfg.classical_noise.D_p, Quantity::momentum_diffusion);
        e["D_x"] = rd.unit_value(cfg.classical_noise.D_x, Quantity::position_diffusion);
    }

    // protocols
    {
        const json& j = child(doc, "protocols");
        check_keys(j, "protocols", {"lyapunov", "strobe", "snapshot", "classicality"});
        json& e = echo["protocols"] = json::object();

        const json& l = child(j, "lyapunov");
        const std::string lp = "protocols.lyapunov";
        check_keys(l, lp, {"n_fiducials", "n_samples", "gap_periods", "horizon_periods", "records_per_period",
                           "epsilon", "jitter", "seed", "norm", "fit"});
        json& le = e["lyapunov"] = json::object();
        auto& proto = cfg.lyapunov;
        proto.n_fiducials = read_count(l, lp, "n_fiducials", 5, 1, le);
        proto.n_samples = read_count(l, lp, "n_samples", 10, 1, le);
        proto.gap_periods = read_count(l, lp, "gap_periods", 20, 1, le);
        proto.horizon_periods = read_count(l, lp, "horizon_periods", 20, 1, le);
        proto.records_per_period = read_count(l, lp, "records_per_period", 20, 1, le);
        proto.epsilon = read_number(l, lp, "epsilon", 1e-6, le);
        proto.jitter = read_number(l, lp, "jitter", 1e-3, le);
        proto.seed = read_count(l, lp, "seed", 1, 0, le);
        if (!(proto.epsilon > 0.0)) {
            throw ConfigError(lp + ".epsilon", "must be positive");
        }
        if (proto.jitter < 0.0) {
            throw ConfigError(lp + ".jitter", "must be >= 0");
        }
        const json& nj = child(l, "norm");
        check_keys(nj, lp + ".norm", {"dX", "dP"});
        json& ne = le["norm"] = json::object();
        const bool phys = cfg.units.is_physical();
        proto.norm.dX = rd.opt_quantity(nj, lp + ".norm", "dX", Quantity::length, ne).value_or(phys ? 0.033 : 1.0);
        proto.norm.dP = rd.opt_quantity(nj, lp + ".norm", "dP", Quantity::momentum, ne).value_or(phys ? 0.324 : 1.0);
        positive_or_throw(proto.norm.dX, lp + ".norm.dX");
        positive_or_throw(proto.norm.dP, lp + ".norm.dP");
        ne["dX"] = rd.unit_value(proto.norm.dX, Quantity::length);
        ne["dP"] = rd.unit_value(proto.norm.dP, Quantity::momentum);
        const json& fj = child(l, "fit");
        check_keys(fj, lp + ".fit", {"r2_min", "start_factor", "saturation_fraction", "min_points", "t_start", "t_end"});
        json& fe = le["fit"] = json::object();
        proto.fit.r2_min = read_number(fj, lp + ".fit", "r2_min", 0.98, fe);
        proto.fit.start_factor = read_number(fj, lp + ".fit", "start_factor", 3.0, fe);
        proto.fit.saturation_fraction = read_number(fj, lp + ".fit", "saturation_fraction", 0.25, fe);
        proto.fit.min_points = read_count(fj, lp + ".fit", "min_points", 5, 2, fe);
        proto.fit.t_start = rd.opt_quantity(fj, lp + ".fit", "t_start", Quantity::time, fe);
        proto.fit.t_end = rd.opt_quantity(fj, lp + ".fit", "t_end", Quantity::time, fe);
        try {
            proto.validate();
        } catch (const std::invalid_argument& ex) {
            const std::string what = ex.what();
            const auto colon = what.find(": ");
            throw ConfigError("protocols." + what.substr(0, colon),
                              colon == std::string::npos ? what : what.substr(colon + 2));
        }

        const json& s = child(j, "strobe");
        const std::string sp = "protocols.strobe";
        check_keys(s, sp, {"periods", "histogram"});
        json& se = e["strobe"] = json::object();
        cfg.strobe.periods = read_count(s, sp, "periods", 2000, 2, se);
        const json& h = child(s, "histogram");
        check_keys(h, sp + ".histogram", {"x_max", "p_max", "bins"});
        json& he = se["histogram"] = json::object();
        cfg.strobe.hist_x_max =
            rd.opt_quantity(h, sp + ".histogram", "x_max", Quantity::length, he).value_or(phys ? 0.4 : 4.0);
        cfg.strobe.hist_p_max =
            rd.opt_quantity(h, sp + ".histogram", "p_max", Quantity::momentum, he).value_or(phys ? 8.0 : 3.1);
        positive_or_throw(cfg.strobe.hist_x_max, sp + ".histogram.x_max");
        positive_or_throw(cfg.strobe.hist_p_max, sp + ".histogram.p_max");
        he["x_max"] = rd.unit_value(cfg.strobe.hist_x_max, Quantity::length);
        he["p_max"] = rd.unit_value(cfg.strobe.hist_p_max, Quantity::momentum);
        cfg.strobe.bins = read_count(h, sp + ".histogram", "bins", 20, 1, he);

        const json& w = child(j, "snapshot");
        const std::string wp = "protocols.snapshot";
        check_keys(w, wp, {"at_periods", "p_count", "x_stride"});
        json& we = e["snapshot"] = json::object();
        if (w.contains("at_periods")) {
            if (!w["at_periods"].is_array() || w["at_periods"].empty()) {
                throw ConfigError(wp + ".at_periods", "expected a non-empty array of period indices");
            }
            cfg.snapshot.at_periods.clear();
            for (const auto& v : w["at_periods"]) {
                if (!v.is_number_integer() || v.get<long long>() < 0) {
                    throw ConfigError(wp + ".at_periods", "entries must be non-negative integers");
                }
                cfg.snapshot.at_periods.push_back(v.get<std::uint64_t>());
            }
            std::sort(cfg.snapshot.at_periods.begin(), cfg.snapshot.at_periods.end());
            cfg.snapshot.at_periods.erase(
                std::unique(cfg.snapshot.at_periods.begin(), cfg.snapshot.at_periods.end()),
                cfg.snapshot.at_periods.end());
        }
        we["at_periods"] = cfg.snapshot.at_periods;
        cfg.snapshot.p_count = read_count(w, wp, "p_count", cfg.grid.wigner_p_count, 2, we);
        cfg.snapshot.x_stride = read_count(w, wp, "x_stride", 4, 1, we);
        if (cfg.snapshot.p_count % 2 != 0 || cfg.snapshot.p_count > cfg.grid.n) {
            throw ConfigError(wp + ".p_count", "must be even and <= integrator.grid.n");
        }
        if (cfg.grid.n % cfg.snapshot.x_stride != 0) {
            throw ConfigError(wp + ".x_stride", "must divide integrator.grid.n");
        }

        const json& c = child(j, "classicality");
        const std::string cp = "protocols.classicality";
        check_keys(c, cp, {"typical", "margin", "unstable_samples"});
        json& ce = e["classicality"] = json::object();
        const json& t = child(c, "typical");
        check_keys(t, cp + ".typical", {"x", "p"});
        json& te = ce["typical"] = json::object();
        cfg.classicality.typical.x =
            rd.opt_quantity(t, cp + ".typical", "x", Quantity::length, te).value_or(cfg.initial.centroid.x);
        cfg.classicality.typical.p =
            rd.opt_quantity(t, cp + ".typical", "p", Quantity::momentum, te).value_or(cfg.initial.centroid.p);
        te["x"] = rd.unit_value(cfg.classicality.typical.x, Quantity::length);
        te["p"] = rd.unit_value(cfg.classicality.typical.p, Quantity::momentum);
        cfg.classicality.options.margin = read_number(c, cp, "margin", 10.0, ce);
        if (!(cfg.classicality.options.margin > 1.0)) {
            throw ConfigError(cp + ".margin", "must exceed 1");
        }
        cfg.classicality.options.unstable_samples =
            static_cast<int>(read_count(c, cp, "unstable_samples", 401, 3, ce));
    }

    if (doc.contains("seed")) {
        if (!non_negative_integer(doc["seed"])) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    echo["seed"] = cfg.seed;

    {
        const json& o = child(doc, "output");
        check_keys(o, "output", {"directory"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string() || o["directory"].get<std::string>().empty()) {
                throw ConfigError("output.directory", "expected a non-empty string");
            }
            cfg.output_dir = o["directory"].get<std::string>();
        }
        echo["output"] = {{"directory", cfg.output_dir.string()}};
    }

    // Full quantum evolution is only feasible at modest action.
    if (cfg.units.is_physical() && (cfg.backend == Backend::sse || cfg.backend == Backend::wigner_grid)) {
        const double need = estimate_grid_points(cfg.system, cfg.initial.centroid, hbar);
        if (need > 65536.0) {
            std::ostringstream msg;
            msg.precision(3);
            msg << "backend \"" << backend_name(cfg.backend)
                << "\" at physical action needs about N = " << need
                << " grid points (desk limit 2^16 = 65536); use units.mode = \"dimensionless\" with a"
                   " larger hbar_eff (see the reduced-action preset) or the closure backend";
            throw ConfigError("backend", msg.str());
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return validate_config(std::string_view(ss.str()));
}

std::filesystem::path preset_directory()
{
    if (const char* env = std::getenv("QTC_PRESET_DIR")) {
        return env;
    }
    return QTC_PRESET_DIR;
}

std::vector<std::string> list_presets()
{
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(preset_directory(), ec)) {
        if (entry.path().extension() == ".json") {
            out.push_back(entry.path().stem().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ExperimentConfig load_preset(std::string_view name)
{
    const auto path = preset_directory() / (std::string(name) + ".json");
    if (!std::filesystem::exists(path)) {
        std::string known;
        for (const auto& p : list_presets()) {
            known += known.empty() ? "" : ", ";
            known += p;
        }
        throw ConfigError("preset", "unknown preset \"" + std::string(name) + "\" (available: " + known + ")");
    }
    return load_config_file(path);
}

} // namespace qtc
