#include "cone/cli.hpp"

#include "cone/bessel.hpp"
#include "cone/cutoff.hpp"
#include "cone/error.hpp"
#include "cone/estimates.hpp"
#include "cone/hankel.hpp"
#include "cone/propagator.hpp"
#include "cone/spectrum.hpp"
#include "cone/strichartz.hpp"

#include <CLI11.hpp>
#include <fftw3.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cone::cli {

namespace {

using json = nlohmann::ordered_json;
using Defaults = std::vector<std::pair<std::string, std::string>>;

const Defaults kCommon{{"seed", "7"}, {"threads", "0"}, {"out", "cone_output"}};
const Defaults kCone{{"cone.n", "2"}, {"cone.cross_section", "circle"}, {"cone.alpha", "1"}, {"cone.a", "0"},
                     {"cone.K", "3"}};
const Defaults kGrid{{"grid.r_max", "30"}, {"grid.count", "600"}, {"grid.kind", "gauss_legendre"}};
const Defaults kDatum{{"datum.profile", "gaussian"}, {"datum.center", "0"},   {"datum.width", "1"},
                      {"datum.path", ""},           {"datum.modes", "0:1"},    {"datum.tail_tolerance", "1e-8"}};
const Defaults kEvolve{{"evolve.times", "0, 0.5, 1, 2"},   {"evolve.spectral_r_max", "10"},
                       {"evolve.spectral_count", "500"},   {"evolve.spectral_kind", "gauss_legendre"},
                       {"evolve.mass_tolerance", "1e-6"}};
const Defaults kBessel{{"bessel.nu", "0, 0.5, 1, 5.5, 10, 40"},
                       {"bessel.r", "0.5, 1, 2, 5, 10, 20, 50, 100, 1000"},
                       {"bessel.order", "6"},
                       {"bessel.tolerance", "1e-8"}};
const Defaults kHankel{{"hankel.r_max", "20"},
                       {"hankel.panels", "100"},
                       {"hankel.fd_count", "1000"},
                       {"hankel.tolerance", "1e-6"},
                       {"hankel.diagonalization_tolerance", "1e-3"}};
const Defaults kScan{{"scan.estimate", "E31"},        {"scan.rmin", "1"},           {"scan.rmax", "1024"},
                     {"scan.trials", "20"},           {"scan.p", "0"},              {"scan.epsilon", "0.1"},
                     {"scan.band", "inf"},            {"scan.threshold", "-1"},     {"scan.time_tolerance", "1e-3"},
                     {"scan.max_doublings", "10"},    {"scan.t_slack", "48"},       {"scan.dt", "0"},
                     {"scan.r_panel_width", "0"},     {"scan.r_panel_points", "10"}, {"scan.skip_tolerance", "1e-7"}};
const Defaults kStrichartz{{"strichartz.q", "4"},
                           {"strichartz.nmin", "1"},
                           {"strichartz.nmax", "64"},
                           {"strichartz.datum", "spectral_bump"},
                           {"strichartz.band", "1.5"},
                           {"strichartz.r_min", "0.00390625"},
                           {"strichartz.tail_tolerance", "1e-3"}};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

double number_or_inf(const Config& cfg, const std::string& key) {
    const auto s = cfg.get_string(key);
    if (s == "inf" || s == "infinity") return kInf;
    return cfg.get_double(key);
}

struct Context {
    Config cfg;
    std::filesystem::path out;
    std::ostream& log;
    std::vector<std::string> outputs;
    json summary = json::object();

    std::filesystem::path file(const std::string& name) {
        outputs.push_back(name);
        return out / name;
    }
};

TablePtr table_from(const Config& cfg, const ConeModel& model) {
    return std::make_shared<const SpectrumTable>(build_spectrum(model, cfg.get_double("cone.K")));
}

// Keys <prefix>r_max, <prefix>count, <prefix>kind.
GridPtr grid_from(const Config& cfg, int n, const std::string& prefix) {
    const auto count = cfg.get_int(prefix + "count");
    if (count < 16) throw ConfigError(cfg.source() + ": key `" + prefix + "count`: need at least 16 nodes");
    const double r_max = cfg.get_double(prefix + "r_max");
    if (!(r_max > 0)) throw ConfigError(cfg.source() + ": key `" + prefix + "r_max`: must be positive");
    GridKind kind;
    try {
        kind = grid_kind_from_string(cfg.get_string(prefix + "kind"));
    } catch (const Error& e) {
        throw ConfigError(cfg.source() + ": key `" + prefix + "kind`: " + e.what());
    }
    return make_grid(n, r_max, static_cast<std::size_t>(count), kind);
}

int bessel_table(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto nus = cfg.get_doubles("bessel.nu");
    const auto rs = cfg.get_doubles("bessel.r");
    const int M = static_cast<int>(cfg.get_int("bessel.order"));
    const double tol = cfg.get_double("bessel.tolerance");
    CsvWriter csv(ctx.file("bessel_table.csv"), {"nu", "r", "J", "regime", "method", "check_method", "check_difference"});
    double worst = 0;
    for (double nu : nus)
        for (double r : rs) {
            const auto e = bessel::evaluate(nu, r, M);
            // A second route through a different representation, where one applies.
            std::string check_method = "none";
            double other = std::nan("");
            if (e.method != bessel::Method::schlafli) {
                other = bessel::eval_schlafli(nu, r);
                check_method = "schlafli";
            } else if (r <= std::max(20.0, nu)) {
                other = bessel::eval_series(nu, r);
                check_method = "series";
            } else if (r >= bessel::asymptotic_threshold(nu)) {
                other = bessel::eval_asymptotic(nu, r, M);
                check_method = "asymptotic";
            }
            const double diff = std::abs(e.value - other);
            if (std::isfinite(diff)) worst = std::max(worst, diff);
            csv.row({fmt(nu), fmt(r), fmt(e.value), bessel::to_string(e.regime), bessel::to_string(e.method),
                     check_method, std::isfinite(diff) ? fmt(diff) : "nan"});
        }
    ctx.summary = {{"rows", nus.size() * rs.size()}, {"max_check_difference", worst}, {"tolerance", tol}};
    if (worst > tol) {
        ctx.log << "bessel-table: cross-route difference " << worst << " exceeds " << tol << '\n';
        return numerical_failure;
    }
    return ok;
}

int hankel_selftest_cmd(Context& ctx) {
    const auto& cfg = ctx.cfg;
    HankelBattery battery;
    battery.r_max = cfg.get_double("hankel.r_max");
    battery.panels = static_cast<int>(cfg.get_int("hankel.panels"));
    battery.fd_count = static_cast<std::size_t>(cfg.get_int("hankel.fd_count"));
    const double tol = cfg.get_double("hankel.tolerance");
    const double diag_tol = cfg.get_double("hankel.diagonalization_tolerance");
    const auto rows = hankel_selftest(battery);
    CsvWriter csv(ctx.file("hankel_selftest.csv"),
                  {"nu", "profile", "involution", "isometry", "self_adjoint", "diagonalization"});
    double worst[4] = {0, 0, 0, 0};
    ctx.log << std::left << std::setw(6) << "nu" << std::setw(20) << "profile" << std::setw(13) << "involution"
            << std::setw(13) << "isometry" << std::setw(13) << "self_adjoint" << "diagonalization\n";
    for (const auto& d : rows) {
        csv.row({fmt(d.nu), d.profile, fmt(d.involution), fmt(d.isometry), fmt(d.self_adjoint), fmt(d.diagonalization)});
        ctx.log << std::setw(6) << d.nu << std::setw(20) << d.profile << std::scientific << std::setprecision(3)
                << std::setw(13) << d.involution << std::setw(13) << d.isometry << std::setw(13) << d.self_adjoint
                << d.diagonalization << std::defaultfloat << '\n';
        worst[0] = std::max(worst[0], d.involution);
        worst[1] = std::max(worst[1], d.isometry);
        worst[2] = std::max(worst[2], d.self_adjoint);
        worst[3] = std::max(worst[3], d.diagonalization);
    }
    const bool pass = worst[0] <= tol && worst[1] <= tol && worst[2] <= tol && worst[3] <= diag_tol;
    ctx.summary = {{"rows", rows.size()},
                   {"max_involution", worst[0]},
                   {"max_isometry", worst[1]},
                   {"max_self_adjoint", worst[2]},
                   {"max_diagonalization", worst[3]},
                   {"tolerance", tol},
                   {"diagonalization_tolerance", diag_tol},
                   {"pass", pass}};
    return pass ? ok : numerical_failure;
}

int evolve_cmd(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = cone_model_from_config(cfg);
    const auto table = table_from(cfg, model);
    const auto grid = grid_from(cfg, model.n, "grid.");
    const auto spectral = grid_from(cfg, model.n, "evolve.spectral_");
    const auto datum = load_datum(cfg, table, grid);
    const auto times = cfg.get_doubles("evolve.times");
    const double mass_tol = cfg.get_double("evolve.mass_tolerance");

    const auto spec = distorted_fourier(datum, spectral);
    const auto sol = sample_solution(spec, times, grid);
    const double m0 = mass(datum);
    CsvWriter csv(ctx.file("evolve.csv"), {"t", "r", "mode", "re", "im"});
    const auto active = datum.active_slots();
    double drift = 0;
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        drift = std::max(drift, std::abs(sol.masses[k] - m0) / m0);
        for (std::size_t slot : active) {
            const auto v = sol.fields[k].mode(slot);
            for (std::size_t i = 0; i < grid->size(); ++i)
                csv.row({fmt(sol.times[k]), fmt(grid->node(i)), std::to_string(slot), fmt(v[i].real()), fmt(v[i].imag())});
        }
    }
    ctx.summary = {{"initial_mass", m0},
                   {"times", sol.times},
                   {"masses", sol.masses},
                   {"max_relative_mass_drift", drift},
                   {"mass_tolerance", mass_tol},
                   {"active_slots", active}};
    if (drift > mass_tol) {
        ctx.log << "evolve: relative mass drift " << drift << " exceeds " << mass_tol << '\n';
        return numerical_failure;
    }
    return ok;
}

int scan_localized(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = cone_model_from_config(cfg);
    const auto table = table_from(cfg, model);
    EstimateId id;
    try {
        id = estimate_id_from_string(cfg.get_string("scan.estimate"));
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.source() + ": key `scan.estimate`: " + e.what());
    }
    const auto spec = estimate_spec(id, model.n, cfg.get_double("scan.p"), cfg.get_double("scan.epsilon"));
    const auto trials = cfg.get_int("scan.trials");
    if (trials < 1) throw ConfigError(cfg.source() + ": key `scan.trials`: must be positive");
    const auto seed = cfg.get_u64("seed", 7);
    const auto data = random_coefficients(table, static_cast<int>(trials), seed, number_or_inf(cfg, "scan.band"));

    ScanNumerics numerics;
    numerics.truncation.tolerance = cfg.get_double("scan.time_tolerance");
    numerics.truncation.max_doublings = static_cast<int>(cfg.get_int("scan.max_doublings"));
    numerics.t_slack = cfg.get_double("scan.t_slack");
    numerics.dt = cfg.get_double("scan.dt");
    numerics.r_panel_width = cfg.get_double("scan.r_panel_width");
    numerics.r_panel_points = static_cast<int>(cfg.get_int("scan.r_panel_points"));
    numerics.skip_tolerance = cfg.get_double("scan.skip_tolerance");

    const auto report = dyadic_scan(spec, data, cfg.get_double("scan.rmin"), cfg.get_double("scan.rmax"), seed,
                                    numerics, cfg.get_double("scan.threshold"));
    CsvWriter csv(ctx.file("scan_localized.csv"), {"R", "lhs", "rhs", "ratio", "trial", "T", "doublings"});
    for (const auto& row : report.rows)
        csv.row({fmt(row.R), fmt(row.lhs), fmt(row.rhs), fmt(row.ratio), std::to_string(row.trial), fmt(row.T),
                 std::to_string(row.doublings)});
    ctx.summary = {{"estimate", to_string(id)},
                   {"q", std::isfinite(spec.q) ? json(spec.q) : json("inf")},
                   {"p", spec.p},
                   {"weight_exponent", spec.gamma},
                   {"envelope_exponents", {spec.e1, spec.e2}},
                   {"trials", report.trials},
                   {"seed", report.seed},
                   {"max_ratio", report.max_ratio},
                   {"slope", report.slope},
                   {"slope_error", report.slope_error},
                   {"threshold", report.threshold},
                   {"trend_ok", report.trend_ok},
                   {"time_window_converged", true}};
    ctx.log << to_string(id) << ": max ratio " << report.max_ratio << ", slope " << report.slope << " +- "
            << report.slope_error << " (threshold " << report.threshold << ")\n";
    return report.trend_ok ? ok : trend_violation;
}

int scan_strichartz(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto model = cone_model_from_config(cfg);
    StrichartzOptions options;
    options.q = cfg.get_double("strichartz.q");
    options.r_min = cfg.get_double("strichartz.r_min");
    options.tail_tolerance = cfg.get_double("strichartz.tail_tolerance");
    const double nmin = cfg.get_double("strichartz.nmin"), nmax = cfg.get_double("strichartz.nmax");
    const double band = cfg.get_double("strichartz.band");
    if (!(nmin > 0) || !(nmax >= nmin)) throw ConfigError(cfg.source() + ": need 0 < strichartz.nmin <= strichartz.nmax");
    const std::string kind = cfg.get_string("strichartz.datum");

    std::optional<ModeField> physical;
    if (kind == "physical") {
        const auto table = table_from(cfg, model);
        physical.emplace(load_datum(cfg, table, grid_from(cfg, model.n, "grid.")));
    } else if (kind != "spectral_bump") {
        throw ConfigError(cfg.source() + ": key `strichartz.datum`: expected spectral_bump or physical");
    }
    CsvWriter csv(ctx.file("scan_strichartz.csv"), {"N", "lhs", "rhs", "ratio"});
    std::vector<double> Ns, ratios;
    for (double N = nmin; N <= nmax * (1 + 1e-12); N *= 2) {
        const auto res = physical ? strichartz_ratio(model, *physical, N, options)
                                  : strichartz_ratio(model, [](double) { return cplx(1, 0); }, N, options);
        const double rhs = std::pow(N, model.n / 2.0 - (model.n + 2) / options.q) * res.datum_norm;
        csv.row({fmt(N), fmt(res.lhs), fmt(rhs), fmt(res.ratio)});
        Ns.push_back(N);
        ratios.push_back(res.ratio);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    const bool within = hi <= band * lo;
    ctx.summary = {{"q", options.q},
                   {"datum", kind},
                   {"min_ratio", lo},
                   {"max_ratio", hi},
                   {"band", band},
                   {"within_band", within},
                   {"slope", Ns.size() >= 2 ? fit_loglog(Ns, ratios).slope : 0.0}};
    ctx.log << "strichartz q = " << options.q << ": ratios in [" << lo << ", " << hi << "]\n";
    return within ? ok : trend_violation;
}

std::vector<std::pair<std::string, std::string>> parse_modes(const Config& cfg) {
    std::vector<std::pair<std::string, std::string>> items;
    std::stringstream ss(cfg.get_string("datum.modes"));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError(cfg.source() + ": key `datum.modes`: expected `slot:amplitude` items");
        items.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    return items;
}

int threads_from(const Config& cfg) {
    int threads = static_cast<int>(cfg.get_int("threads"));
    if (threads <= 0)
        if (const char* env = std::getenv("CONE_SCHRODINGER_THREADS")) threads = std::atoi(env);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void apply_defaults(Config& cfg, const std::string& subcommand) {
    std::vector<const Defaults*> groups{&kCommon};
    if (subcommand == "bessel-table") groups.push_back(&kBessel);
    if (subcommand == "hankel-selftest") groups.push_back(&kHankel);
    if (subcommand == "evolve") groups.insert(groups.end(), {&kCone, &kGrid, &kDatum, &kEvolve});
    if (subcommand == "scan-localized") groups.insert(groups.end(), {&kCone, &kScan});
    if (subcommand == "scan-strichartz") groups.insert(groups.end(), {&kCone, &kGrid, &kDatum, &kStrichartz});
    for (const auto* g : groups)
        for (const auto& [key, value] : *g)
            if (!cfg.has(key)) cfg.set(key, value);
}

ModeField load_datum(const Config& cfg, TablePtr table, GridPtr grid) {
    const std::string profile = cfg.get_string("datum.profile");
    ModeField field(table, grid);
    if (profile == "csv") {
        const auto path = cfg.get_string("datum.path");
        if (!std::filesystem::exists(path))
            throw ConfigError(cfg.source() + ": key `datum.path`: file `" + path + "` does not exist");
        field = load_field_csv(path, table, grid);
    } else if (profile == "gaussian" || profile == "bump") {
        const double c = cfg.get_double("datum.center"), w = cfg.get_double("datum.width");
        if (!(w > 0)) throw ConfigError(cfg.source() + ": key `datum.width`: must be positive");
        if (profile == "bump" && c - w / 2 <= 0) {
            std::ostringstream msg;
            msg << "bump support [" << c - w / 2 << ", " << c + w / 2 << "] reaches the cone tip r = 0";
            throw TipSupportError(msg.str());
        }
        auto shape = [&](double r) {
            return profile == "gaussian" ? std::exp(-(r - c) * (r - c) / (2 * w * w)) : bump((r - c) / w + 1.5);
        };
        for (const auto& [slot_text, amp_text] : parse_modes(cfg)) {
            char* end = nullptr;
            const long slot = std::strtol(slot_text.c_str(), &end, 10);
            const double amp = std::strtod(amp_text.c_str(), nullptr);
            if (slot < 0 || static_cast<std::size_t>(slot) >= table->slots())
                throw ConfigError(cfg.source() + ": key `datum.modes`: slot " + slot_text + " outside the spectrum (" +
                                  std::to_string(table->slots()) + " slots)");
            auto mode = field.mode(static_cast<std::size_t>(slot));
            for (std::size_t i = 0; i < grid->size(); ++i) mode[i] += amp * shape(grid->node(i));
        }
    } else {
        throw ConfigError(cfg.source() + ": key `datum.profile`: expected gaussian, bump or csv, got `" + profile + "`");
    }
    field.validate();
    const double tol = cfg.get_double("datum.tail_tolerance");
    for (std::size_t slot : field.active_slots())
        certify_tail(field.mode(slot), *grid, tol, "datum slot " + std::to_string(slot));
    return field;
}

void save_field_csv(const FieldData& field, const std::string& path) {
    CsvWriter csv(path, {"slot", "r", "re", "im"});
    for (std::size_t slot : field.active_slots()) {
        const auto v = field.mode(slot);
        for (std::size_t i = 0; i < field.nodes(); ++i)
            csv.row({std::to_string(slot), fmt(field.grid()->node(i)), fmt(v[i].real()), fmt(v[i].imag())});
    }
}

ModeField load_field_csv(const std::string& path, TablePtr table, GridPtr grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field CSV `" + path + "`");
    std::string line;
    if (!std::getline(in, line) || line != "slot,r,re,im")
        throw ShapeError(path + ": expected header `slot,r,re,im`");
    ModeField field(table, grid);
    std::vector<std::size_t> filled(table->slots(), 0);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto where = path + ":" + std::to_string(lineno) + ": ";
        std::stringstream ss(line);
        std::string cells[4];
        for (auto& c : cells)
            if (!std::getline(ss, c, ',')) throw ShapeError(where + "expected 4 columns");
        const long slot = std::strtol(cells[0].c_str(), nullptr, 10);
        if (slot < 0 || static_cast<std::size_t>(slot) >= table->slots())
            throw ShapeError(where + "slot " + cells[0] + " outside the spectrum");
        auto& i = filled[static_cast<std::size_t>(slot)];
        if (i >= grid->size()) throw ShapeError(where + "more rows than grid nodes for slot " + cells[0]);
        const double r = std::strtod(cells[1].c_str(), nullptr);
        if (r != grid->node(i))
            throw ShapeError(where + "r = " + cells[1] + " does not match grid node " + fmt(grid->node(i)));
        field.mode(static_cast<std::size_t>(slot))[i] =
            cplx(std::strtod(cells[2].c_str(), nullptr), std::strtod(cells[3].c_str(), nullptr));
        ++i;
    }
    for (std::size_t s = 0; s < filled.size(); ++s)
        if (filled[s] != 0 && filled[s] != grid->size())
            throw ShapeError(path + ": slot " + std::to_string(s) + " has " + std::to_string(filled[s]) + " rows, grid has " +
                             std::to_string(grid->size()));
    return field;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schroedinger propagator on metric cones: transforms, evolution and estimate scans"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::map<std::string, std::string> flags;
    std::vector<std::pair<CLI::Option*, std::string>> bound;
    auto bind = [&](CLI::App* where, const std::string& name, const std::string& key, const std::string& help) {
        bound.emplace_back(where->add_option(name, flags[key], help), key);
    };
    app.add_option("--config", config_path, "key = value configuration file");
    bind(&app, "--seed", "seed", "random seed (u64)");
    bind(&app, "--threads", "threads", "worker threads (fallback: CONE_SCHRODINGER_THREADS)");
    bind(&app, "--out", "out", "output directory");

    auto* bt = app.add_subcommand("bessel-table", "tabulate J_nu with regime and method");
    bind(bt, "--nu", "bessel.nu", "comma-separated orders");
    bind(bt, "--r", "bessel.r", "comma-separated arguments");
    bind(bt, "--order", "bessel.order", "truncation order M of the large-argument expansion");
    bind(bt, "--tolerance", "bessel.tolerance", "cross-route agreement tolerance");
    auto* hs = app.add_subcommand("hankel-selftest", "involution, isometry, self-adjointness and diagonalization defects");
    bind(hs, "--tolerance", "hankel.tolerance", "tolerance for the first three defects");
    auto* ev = app.add_subcommand("evolve", "evolve a datum and write snapshots");
    bind(ev, "--times", "evolve.times", "comma-separated output times");
    auto* sl = app.add_subcommand("scan-localized", "dyadic scan of a localized estimate");
    bind(sl, "--estimate", "scan.estimate", "E31 .. E36");
    bind(sl, "--rmin", "scan.rmin", "smallest R");
    bind(sl, "--rmax", "scan.rmax", "largest R");
    bind(sl, "--trials", "scan.trials", "random trials");
    bind(sl, "--K", "cone.K", "spectrum truncation");
    auto* ss = app.add_subcommand("scan-strichartz", "dyadic scan of the Strichartz ratio");
    bind(ss, "--q", "strichartz.q", "space-time exponent");
    bind(ss, "--nmin", "strichartz.nmin", "smallest N");
    bind(ss, "--nmax", "strichartz.nmax", "largest N");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_error;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    Config cfg;
    json params = json::object();
    std::optional<Context> ctx;
    int code = ok;
    std::string failure;
    try {
        if (config_path.empty()) {
            std::istringstream none;
            cfg = Config::parse(none, "<command line>");
        } else {
            cfg = Config::load(config_path);
        }
        for (const auto& [opt, key] : bound)
            if (opt->count() > 0) cfg.set(key, flags[key]);
        apply_defaults(cfg, sub);
        for (const auto& [key, entry] : cfg.entries()) params[key] = entry.value;
        const int threads = threads_from(cfg);
        std::filesystem::path dir = cfg.get_string("out");
        std::filesystem::create_directories(dir);
        ctx.emplace(Context{cfg, dir, out, {}, json::object()});
        if (sub == "bessel-table") code = bessel_table(*ctx);
        if (sub == "hankel-selftest") code = hankel_selftest_cmd(*ctx);
        if (sub == "evolve") code = evolve_cmd(*ctx);
        if (sub == "scan-localized") code = scan_localized(*ctx);
        if (sub == "scan-strichartz") code = scan_strichartz(*ctx);
        ctx->summary["exit_code"] = code;
        write_json(ctx->file("summary.json"), ctx->summary);

        json manifest = {{"subcommand", sub},
                         {"arguments", std::vector<std::string>(args.begin() + 1, args.end())},
                         {"config_file", config_path},
                         {"resolved_config", params},
                         {"threads", threads},
                         {"outputs", ctx->outputs},
                         {"exit_code", code},
                         {"fftw", std::string(fftw_version)},
                         {"timestamp", timestamp()}};
        write_json(dir / "manifest.json", manifest);
        return code;
    } catch (const Error& e) {
        code = e.numerical() ? numerical_failure : config_error;
        failure = e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        code = config_error;
        failure = e.what();
    } catch (const std::exception& e) {
        code = numerical_failure;
        failure = e.what();
    }
    err << sub << ": " << failure << '\n' << "parameters: " << params.dump() << '\n';
    return code;
}

}  // namespace cone::cli
