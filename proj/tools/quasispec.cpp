// quasispec: command-line front end.
//
// Every subcommand produces one table (CSV by default, JSON with --json) whose
// header echoes the tool version, a hash of the fully resolved configuration
// and the configuration itself. Exit status: 0 success, 1 a checked property
// failed or a numeric failure occurred, 2 invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "acceptance.hpp"
#include "quasispec/quasispec.hpp"
#include "report.hpp"

namespace qs = quasispec;
namespace acc = quasispec::acceptance;
using quasispec::tools::fmt17;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

/// A check that the command asserts; failing it yields exit status 1.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows{};
    json summary = json::object();

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

json to_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json to_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return to_json(v);
            else return v;
        },
        c);
}

std::string to_csv(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return fmt17(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else return std::to_string(v);
        },
        c);
}

struct Globals {
    double lambda{1.0};
    std::string alpha{"golden"};
    std::vector<double> coupling{1.0};
    std::uint64_t seed{20240917};
    unsigned threads{0};
    bool json{false};
    std::string output;
};

class Emitter {
public:
    Emitter(const Globals& g, std::string command, std::string resolved_config)
        : g_(g), command_(std::move(command)), config_(std::move(resolved_config)) {}

    void emit(const Table& t) const {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!g_.output.empty()) {
            file.open(g_.output, std::ios::binary | std::ios::trunc);
            if (!file) throw std::runtime_error("cannot open output file " + g_.output);
            os = &file;
        }
        const std::string hash = qs::tools::hex64(qs::tools::fnv1a(computational_config()));
        if (g_.json) {
            json j;
            j["tool"] = "quasispec";
            j["version"] = qs::kVersion;
            j["command"] = command_;
            j["config_hash"] = hash;
            j["config"] = config_;
            j["columns"] = t.columns;
            json rows = json::array();
            for (const auto& r : t.rows) {
                json row = json::array();
                for (const auto& c : r) row.push_back(to_json(c));
                rows.push_back(std::move(row));
            }
            j["rows"] = std::move(rows);
            j["summary"] = t.summary;
            *os << j.dump(2) << '\n';
        } else {
            *os << "# quasispec " << qs::kVersion << " " << command_ << "\n# config-hash " << hash << "\n";
            std::istringstream cfg(config_);
            for (std::string line; std::getline(cfg, line);)
                if (!line.empty()) *os << "# config: " << line << '\n';
            for (const auto& [k, v] : t.summary.items()) *os << "# " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
            for (std::size_t i = 0; i < t.columns.size(); ++i) *os << (i ? "," : "") << t.columns[i];
            *os << '\n';
            for (const auto& r : t.rows) {
                for (std::size_t i = 0; i < r.size(); ++i) *os << (i ? "," : "") << to_csv(r[i]);
                *os << '\n';
            }
        }
        os->flush();
    }

private:
    /// The configuration without the output-only keys, so CSV and JSON runs share a hash.
    std::string computational_config() const {
        std::istringstream in(config_);
        std::string kept;
        for (std::string line; std::getline(in, line);)
            if (line.rfind("json=", 0) != 0 && line.rfind("output=", 0) != 0) kept += line + '\n';
        return kept;
    }

    const Globals& g_;
    std::string command_;
    std::string config_;
};

qs::ModelParams make_params(const Globals& g) {
    return {g.lambda, g.coupling, qs::parse_frequency(g.alpha)};
}

unsigned resolve_threads(const Globals& g) { return g.threads == 0 ? qs::default_thread_count() : g.threads; }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw qs::DomainError("energy grid: count must be >= 1");
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// ---------------------------------------------------------------------------

struct SweepOpts {
    double e_min{-4.0};
    double e_max{4.0};
    std::size_t e_count{81};
    std::size_t grid{512};
    int m_min_exp{6};
    int m_max_exp{14};
    std::string norm{"schmidt"};
    double tolerance{0.05};
};

void add_sweep_options(CLI::App* sub, SweepOpts& o) {
    sub->add_option("--e-min", o.e_min, "Lowest energy")->capture_default_str();
    sub->add_option("--e-max", o.e_max, "Highest energy")->capture_default_str();
    sub->add_option("--e-count", o.e_count, "Number of energies")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--grid", o.grid, "Phase samples per residue")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--m-min-exp", o.m_min_exp, "Schedule starts at 2^m-min-exp")->capture_default_str();
    sub->add_option("--m-max-exp", o.m_max_exp, "Schedule ends at 2^m-max-exp")->capture_default_str();
    sub->add_option("--norm", o.norm, "Matrix norm")->capture_default_str()->check(CLI::IsMember({"schmidt", "operator"}));
}

qs::LyapunovOptions lyapunov_options(const SweepOpts& o, unsigned threads) {
    qs::LyapunovOptions opt;
    opt.grid_size = o.grid;
    opt.schedule = qs::doubling_schedule(o.m_min_exp, o.m_max_exp);
    opt.threads = threads;
    opt.norm = o.norm == "operator" ? qs::NormKind::Operator : qs::NormKind::Schmidt;
    return opt;
}

Table run_lyapunov(const Globals& g, const SweepOpts& o) {
    const auto p = make_params(g);
    const auto grid = linspace(o.e_min, o.e_max, o.e_count);
    const auto sweep = qs::le_sweep(p, grid, lyapunov_options(o, resolve_threads(g)));
    Table t{{"E", "L", "m", "spread"}};
    for (const auto& s : sweep) t.add({s.energy, s.estimate.value, s.estimate.m, s.estimate.spread});
    t.summary["modulus_of_continuity"] = to_json(qs::discrete_modulus_of_continuity(sweep));
    return t;
}

Table run_herman(const Globals& g, const SweepOpts& o) {
    const auto p = make_params(g);
    const double bound = qs::herman_lower_bound(p);
    const auto grid = linspace(o.e_min, o.e_max, o.e_count);
    const auto sweep = qs::le_sweep(p, grid, lyapunov_options(o, resolve_threads(g)));
    Table t{{"E", "L", "herman", "L_minus_herman"}};
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : sweep) {
        t.add({s.energy, s.estimate.value, bound, s.estimate.value - bound});
        worst = std::min(worst, s.estimate.value - bound);
    }
    t.summary["herman_lower_bound"] = to_json(bound);
    t.summary["min_L_minus_herman"] = to_json(worst);
    t.summary["tolerance"] = o.tolerance;
    t.summary["holds"] = worst >= -o.tolerance;
    return t;
}

// ---------------------------------------------------------------------------

struct SpectrumOpts {
    std::size_t theta_samples{64};
    double e_resolution{1e-3};
    std::string phase_union{"grid"};
    std::size_t oracle_n{0};
    double oracle_theta{0.0};
    bool duality{false};
};

Table run_spectrum(const Globals& g, const SpectrumOpts& o) {
    const auto p = make_params(g);
    qs::BandOptions opt;
    opt.theta_samples = o.theta_samples;
    opt.e_resolution = o.e_resolution;
    opt.threads = resolve_threads(g);
    opt.phase_union = o.phase_union == "exact" ? qs::PhaseUnion::Exact : qs::PhaseUnion::Grid;
    const auto b = qs::rational_bands(p, opt);
    Table t{{"index", "lo", "hi", "width"}};
    std::int64_t i = 0;
    for (const auto& iv : b.bands.intervals()) t.add({i++, iv.lo, iv.hi, iv.hi - iv.lo});
    t.summary["p"] = b.p;
    t.summary["q"] = b.q;
    t.summary["period"] = b.period;
    t.summary["theta_samples"] = b.theta_samples;
    t.summary["phase_union"] = o.phase_union;
    t.summary["measure"] = to_json(qs::spectrum_measure(b));
    if (o.duality) t.summary["duality_oracle_measure"] = to_json(qs::spectrum_measure(qs::duality_oracle_bands(p, opt)));
    if (o.oracle_n > 0) {
        const auto eig = qs::truncated_spectrum_oracle(p, o.oracle_theta, o.oracle_n, 1e-10, opt.threads);
        const auto pts = qs::IntervalUnion::from_points(eig);
        t.summary["oracle_n"] = o.oracle_n;
        t.summary["oracle_theta"] = o.oracle_theta;
        t.summary["oracle_hausdorff"] = to_json(qs::hausdorff_distance(pts, b.bands));
        t.summary["oracle_eigen_to_bands"] = to_json(pts.directed_distance_to(b.bands));
    }
    return t;
}

// ---------------------------------------------------------------------------

struct CfOpts {
    std::size_t terms{20};
    double min_remainder{1e-15};
    int liouville{0};
    double digit_budget{1e6};
};

qs::ContinuedFraction expand_frequency(const qs::Frequency& f, std::size_t terms, double min_remainder) {
    if (f.exact()) return qs::continued_fraction_expand(qs::BigRational(qs::BigInt(f.exact()->p), qs::BigInt(f.exact()->q)), terms);
    return qs::continued_fraction_expand(f.alpha(), terms, min_remainder);
}

Table run_cf(const Globals& g, const CfOpts& o) {
    std::optional<qs::ContinuedFraction> cf;
    if (o.liouville > 0) {
        const auto lc = qs::liouville_construct(o.liouville, o.digit_budget);
        cf = lc.cf;
    } else {
        cf = expand_frequency(qs::parse_frequency(g.alpha), o.terms, o.min_remainder);
    }
    Table t{{"n", "a", "p", "q", "error", "bound"}};
    for (std::size_t n = 0; n < cf->size(); ++n) {
        const auto& c = cf->convergent(n);
        const auto aq = qs::approximation_quality(*cf, n);
        t.add({static_cast<std::int64_t>(n), n == 0 ? std::string("0") : cf->quotients()[n - 1].str(), c.p.str(), c.q.str(),
               aq.error, aq.bound});
    }
    t.summary["halt"] = qs::to_string(cf->halt());
    t.summary["alpha"] = fmt17(cf->alpha());
    if (cf->size() >= 3) {
        const auto beta = qs::beta_estimate(*cf);
        t.summary["beta_estimate"] = to_json(beta.value);
        t.summary["beta_index"] = beta.index;
    }
    if (o.liouville > 0) {
        bool all = true;
        for (int j = 1; j <= o.liouville; ++j) all = all && qs::satisfies_liouville_bound(*cf, static_cast<std::size_t>(j));
        t.summary["liouville_levels"] = o.liouville;
        t.summary["liouville_bounds_hold"] = all;
        if (!all) throw CheckFailed("cf: a constructed level violates |alpha - p_j/q_j| <= j^-q_j");
    }
    return t;
}

// ---------------------------------------------------------------------------

struct GordonOpts {
    double energy{0.0};
    double theta{0.3};
    std::vector<std::size_t> levels;
    int liouville{0};
    double v_angle{0.0};
};

Table run_gordon(const Globals& g, const GordonOpts& o) {
    std::optional<qs::ContinuedFraction> cf;
    qs::ModelParams p = make_params(g);
    if (o.liouville > 0) {
        cf = qs::liouville_construct(o.liouville).cf;
        p = p.with_frequency(qs::Frequency::from_continued_fraction(*cf));
    } else {
        cf = expand_frequency(p.frequency(), 60, 1e-15);
    }
    std::vector<std::size_t> levels = o.levels;
    if (levels.empty())
        for (std::size_t l = 1; l < cf->size() && cf->convergent(l).q <= 2000; ++l) {
            const auto& c = cf->convergent(l);
            if (c.p > 0 && c.p < c.q) levels.push_back(l);
        }
    const qs::Vec2 v{std::cos(o.v_angle), std::sin(o.v_angle)};
    Table t{{"level", "p", "q", "T_k", "sup_potential_error", "D_k", "log_D_bound", "G_k", "margin", "witness",
             "worst_direction_witness", "log_D_k", "log_G_k", "log_witness", "hypothesis_met"}};
    bool ok = true;
    for (std::size_t l : levels) {
        const auto r = qs::gordon_diagnostics(p, o.energy, o.theta, *cf, l, v);
        t.add({static_cast<std::int64_t>(r.level), r.p, r.q, r.block_period, r.sup_potential_error, r.discrepancy,
               r.log_discrepancy_bound, r.four_norm, r.margin, r.witness, r.worst_direction_witness, r.log_discrepancy,
               r.log_four_norm, r.log_witness, r.hypothesis_met});
        ok = ok && r.log_four_norm >= std::log(0.5 - 1e-9);
    }
    t.summary["alpha"] = fmt17(p.alpha());
    t.summary["convention"] = "lambda multiplies T; hypothesis_met means (|lambda|/2)^k prod|T(j)| > 1";
    if (!ok) throw CheckFailed("gordon: four-norm G_k fell below 1/2");
    return t;
}

// ---------------------------------------------------------------------------

struct CohomologyOpts {
    double divisor_floor{qs::kDefaultDivisorFloor};
    std::size_t grid{1024};
    std::vector<double> energies{1e-3, 3.1622776601683794e-3, 1e-2, 3.1622776601683794e-2, 1e-1};
    std::optional<double> rho;
};

Table run_cohomology(const Globals& g, const CohomologyOpts& o) {
    const auto p = make_params(g);
    const auto sol = qs::solve_conjugation(p, o.divisor_floor);
    Table t{{"E", "residual_sup"}};
    const double at_zero = qs::residual_sup(p, 0.0, sol.h, o.grid);
    t.add({0.0, at_zero});
    std::vector<double> rs;
    for (double e : o.energies) {
        rs.push_back(qs::residual_sup(p, e, sol.h, o.grid));
        t.add({e, rs.back()});
    }
    json coeffs = json::array();
    for (std::int64_t n = -static_cast<std::int64_t>(sol.h.degree()); n <= static_cast<std::int64_t>(sol.h.degree()); ++n)
        coeffs.push_back({{"n", n}, {"re", to_json(sol.h.coeff(n).real())}, {"im", to_json(sol.h.coeff(n).imag())}});
    t.summary["h_coefficients"] = coeffs.dump();
    t.summary["step"] = to_json(sol.step);
    t.summary["smallest_divisor"] = to_json(sol.smallest_divisor);
    t.summary["equation_residual"] = to_json(sol.residual_sup);
    t.summary["residual_at_E0"] = to_json(at_zero);
    if (o.energies.size() >= 2) t.summary["loglog_slope"] = to_json(qs::log_log_slope(o.energies, rs).slope);
    if (o.rho) {
        const auto cf = expand_frequency(p.frequency(), 60, 1e-15);
        const double beta = cf.size() >= 3 ? qs::beta_estimate(cf).value : 0.0;
        t.summary["rho"] = to_json(*o.rho);
        t.summary["beta_estimate"] = to_json(beta);
        t.summary["rho_exceeds_5beta"] = *o.rho > 5.0 * beta;
    }
    if (!(at_zero <= 1e-10)) throw CheckFailed("cohomology: conjugated cocycle at E = 0 differs from -I by more than 1e-10");
    return t;
}

// ---------------------------------------------------------------------------

struct EquivalenceOpts {
    std::size_t samples{16};
    std::int64_t m{10'000};
    double tolerance{1e-8};
};

Table run_equivalence(const Globals& g, const EquivalenceOpts& o) {
    const auto f = qs::parse_frequency(g.alpha);
    std::mt19937_64 rng(g.seed);
    const double reach = 2.0 + std::abs(g.lambda);
    std::uniform_real_distribution<double> ue(-reach, reach);
    std::uniform_real_distribution<double> ut(0.0, qs::kTwoPi);
    Table t{{"E", "theta", "difference"}};
    double worst = 0.0;
    for (std::size_t i = 0; i < o.samples; ++i) {
        const double e = ue(rng);
        const double th = ut(rng);
        const double d = qs::amo_equivalence_check(g.lambda, f, e, th, o.m);
        worst = std::max(worst, d);
        t.add({e, th, d});
    }
    t.summary["max_difference"] = to_json(worst);
    t.summary["tolerance"] = o.tolerance;
    t.summary["holds"] = worst <= o.tolerance;
    return t;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
    std::string out_dir{"verify_out"};
    bool single{false};
};

Table run_verify(const Globals& g, const VerifyOpts& o) {
    acc::Config cfg;
    cfg.threads = resolve_threads(g);
    cfg.seed = g.seed;
    std::vector<acc::Outcome> outcomes;
    std::string data;
    if (o.single) {
        outcomes = acc::run_suite(cfg, {}, data);
    } else {
        std::vector<acc::Outcome> first;
        const auto det = acc::run_determinism(cfg, o.out_dir, first);
        outcomes = std::move(first);
        outcomes.push_back(det);
    }
    Table t{{"criterion", "pass", "title", "summary"}};
    bool ok = true;
    for (const auto& oc : outcomes) {
        std::cerr << acc::outcome_line(oc) << "  (" << qs::tools::fmt_short(oc.seconds) << " s)\n";
        std::string summary = oc.summary;
        for (char& ch : summary)
            if (ch == ',') ch = ';';
        t.add({static_cast<std::int64_t>(oc.id), oc.pass, std::string(oc.title), summary});
        ok = ok && oc.pass;
    }
    t.summary["all_pass"] = ok;
    if (!ok) {
        t.summary["note"] = "see the FAIL lines above";
    }
    return t;
}

/// The resolved configuration restricted to the global options and the chosen subcommand.
std::string active_config(CLI::App& app, const std::string& chosen) {
    std::vector<std::string> others;
    for (const auto* sub : app.get_subcommands([](CLI::App*) { return true; }))
        if (sub->get_name() != chosen) others.push_back(sub->get_name());
    std::istringstream in(app.config_to_str(true, false));
    std::ostringstream out;
    bool keep = true;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.front() == '[') {
            keep = line == "[" + chosen + "]";
        } else if (keep) {
            const auto dot = line.find('.');
            const auto eq = line.find('=');
            if (dot != std::string::npos && dot < eq &&
                std::find(others.begin(), others.end(), line.substr(0, dot)) != others.end())
                continue;
        }
        if (keep) out << line << '\n';
    }
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasispec: periodic-coupling almost Mathieu operator toolkit", "quasispec"};
    app.set_version_flag("--version", std::string(qs::kVersion));
    app.set_config("--config", "", "INI configuration file (one [section] per subcommand)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--lambda", g.lambda, "Coupling constant lambda")->capture_default_str();
    app.add_option("--alpha,--omega_over_2pi", g.alpha,
                   "Frequency alpha = omega/2pi: decimal, golden, sqrt2, p/q or cf:[a1,a2,...]")
        ->capture_default_str();
    app.add_option("--coupling", g.coupling, "Coupling period T(0),...,T(k-1)")->delimiter(',')->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0: machine parallelism)")->envname("QUASISPEC_THREADS");
    app.add_flag("--json", g.json, "Emit JSON instead of CSV");
    app.add_option("-o,--output", g.output, "Output file (default stdout)");

    SweepOpts lyap, herman;
    auto* c_lyap = app.add_subcommand("lyapunov", "Lyapunov exponent sweep over an energy grid");
    add_sweep_options(c_lyap, lyap);
    auto* c_herman = app.add_subcommand("herman", "Herman lower bound against exponent estimates");
    add_sweep_options(c_herman, herman);
    c_herman->add_option("--tolerance", herman.tolerance, "Allowed shortfall below the bound")->capture_default_str();

    SpectrumOpts spec;
    auto* c_spec = app.add_subcommand("spectrum", "Band spectrum of a rational-frequency operator");
    c_spec->add_option("--theta-samples", spec.theta_samples, "Phase grid size")->capture_default_str();
    c_spec->add_option("--e-resolution", spec.e_resolution, "Energy scan step")->capture_default_str();
    c_spec->add_option("--phase-union", spec.phase_union, "Union over the phase grid or over all phases")
        ->capture_default_str()
        ->check(CLI::IsMember({"grid", "exact"}));
    c_spec->add_option("--oracle-n", spec.oracle_n, "Size of the truncated-matrix cross-check (0: off)")->capture_default_str();
    c_spec->add_option("--oracle-theta", spec.oracle_theta, "Phase of the truncated matrix")->capture_default_str();
    c_spec->add_flag("--duality", spec.duality, "Also report the duality-oracle measure (k = 1)");

    CfOpts cfo;
    auto* c_cf = app.add_subcommand("cf", "Continued-fraction expansion, beta estimate, Liouville construction");
    c_cf->add_option("--terms", cfo.terms, "Maximum number of partial quotients")->capture_default_str();
    c_cf->add_option("--min-remainder", cfo.min_remainder, "Stop once |alpha - p/q| is below this")->capture_default_str();
    c_cf->add_option("--liouville", cfo.liouville, "Build a Liouville-type frequency with this many levels")->capture_default_str();
    c_cf->add_option("--digit-budget", cfo.digit_budget, "Largest allowed denominator, in decimal digits")->capture_default_str();

    GordonOpts gor;
    auto* c_gor = app.add_subcommand("gordon", "Periodic-approximant block diagnostics");
    c_gor->add_option("--energy", gor.energy, "Energy")->capture_default_str();
    c_gor->add_option("--theta", gor.theta, "Phase")->capture_default_str();
    c_gor->add_option("--levels", gor.levels, "Convergent levels (default: all with q <= 2000)")->delimiter(',');
    c_gor->add_option("--liouville", gor.liouville, "Use the Liouville construction with this many levels")->capture_default_str();
    c_gor->add_option("--v-angle", gor.v_angle, "Direction of the unit vector v")->capture_default_str();

    CohomologyOpts coh;
    auto* c_coh = app.add_subcommand("cohomology", "Solve the conjugation equation and measure the residual (k = 2, T(0) = 0)");
    c_coh->add_option("--divisor-floor", coh.divisor_floor, "Smallest allowed |e^{in step} - 1|")->capture_default_str();
    c_coh->add_option("--grid", coh.grid, "Phase grid for residual_sup")->capture_default_str();
    c_coh->add_option("--energies", coh.energies, "Energies for the residual fit")->delimiter(',')->capture_default_str();
    c_coh->add_option("--rho", coh.rho, "Analytic radius to compare against 5 beta");

    EquivalenceOpts eq;
    auto* c_eq = app.add_subcommand("equivalence", "T = {1,-1} against the almost Mathieu operator at omega + pi");
    c_eq->add_option("--samples", eq.samples, "Random (E, theta) pairs")->capture_default_str();
    c_eq->add_option("--m", eq.m, "Steps")->capture_default_str();
    c_eq->add_option("--tolerance", eq.tolerance, "Allowed relative difference")->capture_default_str();

    VerifyOpts ver;
    auto* c_ver = app.add_subcommand("verify", "Run the acceptance suite");
    c_ver->add_option("--out-dir", ver.out_dir, "Directory for the two comparison runs")->capture_default_str();
    c_ver->add_flag("--single", ver.single, "Run once and skip the determinism comparison");

    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
        sub->configurable();
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string resolved = active_config(app, chosen->get_name());
    const Emitter out(g, chosen->get_name(), resolved);

    try {
        Table t;
        if (chosen == c_lyap) t = run_lyapunov(g, lyap);
        else if (chosen == c_herman) t = run_herman(g, herman);
        else if (chosen == c_spec) t = run_spectrum(g, spec);
        else if (chosen == c_cf) t = run_cf(g, cfo);
        else if (chosen == c_gor) t = run_gordon(g, gor);
        else if (chosen == c_coh) t = run_cohomology(g, coh);
        else if (chosen == c_eq) t = run_equivalence(g, eq);
        else t = run_verify(g, ver);
        out.emit(t);
        if (t.summary.contains("holds") && !t.summary["holds"].get<bool>()) return kExitCheckFailed;
        if (t.summary.contains("all_pass") && !t.summary["all_pass"].get<bool>()) return kExitCheckFailed;
        return kExitOk;
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const qs::DomainError& e) {
        std::cerr << "invalid input in " << chosen->get_name() << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure in " << chosen->get_name() << ": " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
