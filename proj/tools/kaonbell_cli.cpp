// kaonbell: command-line front end for the kaonbell library.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaonbell/kaonbell.hpp"

namespace kb = kaonbell;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr const char* kOutDirEnv = "KAONBELL_OUT_DIR";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GlobalOptions {
    std::string preset = "kaon-paper";
    std::optional<double> gamma_S;
    std::optional<double> gamma_L;
    std::optional<double> delta_m;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string format = "csv";
    std::string out;
};

kb::MesonParameters effective_parameters(const GlobalOptions& g) {
    kb::MesonParameters p = kb::preset(g.preset);
    if (g.gamma_S || g.gamma_L || g.delta_m) {
        p.gamma_S = g.gamma_S.value_or(p.gamma_S);
        p.gamma_L = g.gamma_L.value_or(p.gamma_L);
        p.delta_m = g.delta_m.value_or(p.delta_m);
        p.label = g.preset + "+overrides";
    }
    kb::validate(p);
    return p;
}

struct Table {
    kb::Metadata meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : t.meta.entries()) j["metadata"][k] = v;
        j["columns"] = t.columns;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            auto r = nlohmann::ordered_json::array();
            // Round through the 12-digit text form so JSON and CSV carry the same numbers.
            for (double x : row) {
                if (std::isfinite(x))
                    r.push_back(std::stod(kb::format_number(x)));
                else
                    r.push_back(nullptr);
            }
            j["rows"].push_back(r);
        }
        os << j.dump(2) << '\n';
    } else {
        kb::write_comment_header(os, t.meta);
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) kb::write_csv_row(os, row);
    }
    return os.str();
}

fs::path resolve_output(const std::string& out) {
    fs::path path(out);
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0' && path.is_relative())
        path = fs::path(dir) / path;
    return path;
}

void write_text(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    const fs::path path = resolve_output(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

void emit(const GlobalOptions& g, const Table& t) { write_text(g.out, render(t, g.format)); }

kb::Metadata base_meta(const std::string& command, const GlobalOptions& g, const kb::MesonParameters& p) {
    kb::Metadata m;
    m.command = command;
    m.params = p;
    m.seed = g.seed;
    return m;
}

// ---------------------------------------------------------------- states

struct TwoKaonStateOptions {
    std::string name;
    std::string file;
    std::vector<double> r;
    std::vector<double> phi;

    void attach(CLI::App* app, const std::string& default_name = "") {
        name = default_name;
        app->add_option("--state", name, "phi+, phi-, psi+, psi-, xi or chi")->capture_default_str();
        app->add_option("--state-file", file, "JSON file with arrays r[4] and phi[4]");
        app->add_option("--r", r, "Four amplitudes (renormalized)")->delimiter(',')->expected(4);
        app->add_option("--phi", phi, "Four phases")->delimiter(',')->expected(4);
    }

    [[nodiscard]] std::string label() const {
        if (!file.empty()) return "file:" + file;
        if (!r.empty()) return "inline";
        return name;
    }

    [[nodiscard]] kb::PureTwoKaonState resolve() const {
        kb::PureTwoKaonState s;
        if (!file.empty()) {
            std::ifstream f(file);
            if (!f) throw kb::ConfigurationError("cannot read state file " + file);
            nlohmann::json j;
            try {
                f >> j;
                const auto rr = j.at("r").get<std::vector<double>>();
                const auto pp = j.contains("phi") ? j.at("phi").get<std::vector<double>>() : std::vector<double>(4, 0.0);
                if (rr.size() != 4 || pp.size() != 4) throw kb::ConfigurationError("state file needs r[4] and phi[4]");
                for (std::size_t i = 0; i < 4; ++i) {
                    s.r[i] = rr[i];
                    s.phi[i] = pp[i];
                }
            } catch (const nlohmann::json::exception& e) {
                throw kb::ConfigurationError("malformed state file: " + std::string(e.what()));
            }
            return s.normalized();
        }
        if (!r.empty()) {
            for (std::size_t i = 0; i < 4; ++i) {
                s.r[i] = r[i];
                s.phi[i] = phi.empty() ? 0.0 : phi[i];
            }
            return s.normalized();
        }
        if (name.empty()) throw kb::ConfigurationError("a two-kaon state is required (--state, --state-file or --r)");
        return kb::named_state(name);
    }
};

struct SingleStateOptions {
    std::string name = "K0";
    std::optional<double> rho_ss;
    double rho_sl_re = 0.0;
    double rho_sl_im = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--state", name, "KS, KL, K0 or K0bar")->capture_default_str();
        app->add_option("--rho-ss", rho_ss, "Explicit rho_SS (overrides --state)");
        app->add_option("--rho-sl", rho_sl_re, "Real part of rho_SL");
        app->add_option("--rho-sl-im", rho_sl_im, "Imaginary part of rho_SL");
    }

    [[nodiscard]] kb::SingleKaonInitial resolve() const {
        if (!rho_ss) return kb::named_single_initial(name);
        kb::SingleKaonInitial s{*rho_ss, 1.0 - *rho_ss, kb::complex(rho_sl_re, rho_sl_im)};
        kb::validate(s);
        return s;
    }

    [[nodiscard]] std::string label() const { return rho_ss ? "explicit" : name; }
};

std::array<double, 4> default_times_for(const std::string& state) {
    if (state == "xi") return kb::kXiTimes;
    if (state == "chi") return kb::kChiTimes;
    throw kb::ConfigurationError("--times is required for state '" + state + "'");
}

std::array<double, 4> to_times(const std::vector<double>& v) {
    return {v[0], v[1], v[2], v[3]};
}

// ---------------------------------------------------------------- reproduce

struct Check {
    std::string name;
    double value;
    double expected;
    double tolerance;
    bool pass;
};

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

kb::PureTwoKaonState random_state(std::mt19937_64& rng) {
    kb::PureTwoKaonState s;
    for (std::size_t i = 0; i < 4; ++i) {
        s.r[i] = uniform(rng) + 1e-3;
        s.phi[i] = 2.0 * std::numbers::pi * uniform(rng);
    }
    return s.normalized();
}

std::vector<Check> reproduction_checks(const kb::MesonParameters& p, std::uint64_t seed, unsigned threads) {
    std::vector<Check> out;
    const auto add = [&](std::string name, double value, double expected, double tol) {
        out.push_back({std::move(name), value, expected, tol, std::abs(value - expected) <= tol});
    };
    const auto add_bound = [&](std::string name, double value, double bound, bool at_least) {
        out.push_back({std::move(name), value, bound, 0.0, at_least ? value >= bound : value <= bound});
    };

    const auto ks = kb::minimize_purity_time(kb::SingleKaonInitial::short_lived(), p, 0.0, 5.0 / p.gamma_S);
    add("purity_min_KS", ks.purity, 0.5, 1e-9);
    add("purity_min_KS_time", ks.t, std::log(2.0) / p.gamma_S, 1e-6);
    const auto k0 = kb::minimize_purity_time(kb::SingleKaonInitial::kaon(), p, 10.0 / p.gamma_S, 5.0 / p.gamma_L);
    add("purity_min_K0", k0.purity, 0.375, 1e-4);
    add("purity_min_K0_time", k0.t, 401.881, 0.5);
    const auto mixed = kb::minimize_purity_global(p);
    add("purity_min_mixed", mixed.purity, 0.333068, 5e-5);
    add("purity_min_mixed_time", mixed.t, 0.694012, 1e-3);

    add("S_xi", kb::s_value(kb::xi_state(), kb::kXiTimes, p), 2.1175, 0.03);
    add("S_chi", kb::s_value(kb::chi_state(), kb::kChiTimes, p), 2.1596, 0.03);
    add("C_xi", kb::concurrence_closed_form(kb::xi_state(), 0.0, 0.0, p), 0.8378, 5e-4);
    add("C_chi", kb::concurrence_closed_form(kb::chi_state(), 0.0, 0.0, p), 0.9403, 5e-4);

    std::mt19937_64 rng(seed);
    double e_diff = 0.0;
    double c_diff = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto s = random_state(rng);
        const double tl = 10.0 * uniform(rng);
        const double tr = 10.0 * uniform(rng);
        const auto k0bar = kb::QuasiSpin::antikaon().projector();
        e_diff = std::max(e_diff, std::abs(kb::expectation_closed_form(s, tl, tr, p) -
                                           kb::expectation_matrix(s, k0bar, k0bar, tl, tr, p)));
        c_diff = std::max(c_diff, std::abs(kb::concurrence_closed_form(s, tl, tr, p) -
                                           kb::wootters_concurrence(kb::evolve_bipartite(s, tl, tr, p).ssss).value));
    }
    add("E_closed_vs_matrix_maxdiff", e_diff, 0.0, 1e-10);
    add("C_closed_vs_wootters_maxdiff", c_diff, 0.0, 1e-10);

    kb::OptimizerSettings opt;
    opt.seed = seed;
    opt.threads = threads;
    add_bound("S_opt_zero_phases", kb::maximize_s(kb::SearchSpace::zero_phases(), p, opt).best_S, 2.11, true);
    add_bound("S_opt_free_phases", kb::maximize_s(kb::SearchSpace::free_phases(), p, opt).best_S, 2.15, true);
    opt.budget = 20000;
    add_bound("S_opt_psi-_fixed",
              kb::maximize_s(kb::SearchSpace::fixed_state(kb::bell_state("psi-")), p, opt).best_S, 2.001, false);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strangeness Bell tests and decoherence of entangled neutral kaons", "kaonbell"};
    app.set_version_flag("--version", kb::kVersion);
    app.set_config("--config", "", "Flat 'key = value' file; command-line flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--preset", g.preset, "kaon-paper, kaon-pdg, b-meson or custom")->capture_default_str();
    app.add_option("--gamma_S,--gamma-S", g.gamma_S, "Override Gamma_S [1/tau_S]");
    app.add_option("--gamma_L,--gamma-L", g.gamma_L, "Override Gamma_L [1/tau_S]");
    app.add_option("--delta_m,--delta-m", g.delta_m, "Override delta m [1/tau_S]");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads for the optimizer and trajectories")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--format", g.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "Output file (stdout when omitted); relative paths go under $KAONBELL_OUT_DIR");

    // evolve-single
    auto* evolve = app.add_subcommand("evolve-single", "Single-kaon state on a time grid");
    SingleStateOptions ev_state;
    ev_state.attach(evolve);
    double ev_t_end = 10.0, ev_step = 0.1, ev_rk_step = kb::kDefaultIntegrationStep;
    std::string ev_offdiag = "zero";
    bool ev_integrate = false;
    evolve->add_option("--t-end", ev_t_end, "Last time [tau_S]")->capture_default_str();
    evolve->add_option("--step", ev_step, "Grid spacing [tau_S]")->capture_default_str();
    evolve->add_option("--offdiag", ev_offdiag, "Decay-channel coherence: zero or formal-x")
        ->check(CLI::IsMember({"zero", "formal-x"}))
        ->capture_default_str();
    evolve->add_flag("--integrate", ev_integrate, "Use RK4 integration of the master equation");
    evolve->add_option("--rk-step", ev_rk_step, "RK4 step [tau_S]")->capture_default_str();

    // purity-scan
    auto* scan = app.add_subcommand("purity-scan", "Single-kaon purity curve and its minimum");
    SingleStateOptions sc_state;
    sc_state.attach(scan);
    double sc_t_end = 1000.0, sc_step = 0.5;
    bool sc_global = false;
    scan->add_option("--t-end", sc_t_end, "Last time [tau_S]")->capture_default_str();
    scan->add_option("--step", sc_step, "Grid spacing [tau_S]")->capture_default_str();
    scan->add_flag("--global", sc_global, "Also minimize over all mixed initial states");

    // expectation
    auto* expect = app.add_subcommand("expectation", "Two-kaon correlation E(t_l, t_r)");
    TwoKaonStateOptions ex_state;
    ex_state.attach(expect, "psi-");
    double ex_tl = 0.0, ex_tr = 0.0;
    std::string ex_left = "K0bar", ex_right = "K0bar";
    expect->add_option("--tl", ex_tl, "Left detection time [tau_S]")->capture_default_str();
    expect->add_option("--tr", ex_tr, "Right detection time [tau_S]")->capture_default_str();
    expect->add_option("--left", ex_left, "Left quasi-spin: K0, K0bar, KS, KL")->capture_default_str();
    expect->add_option("--right", ex_right, "Right quasi-spin")->capture_default_str();

    // concurrence
    auto* conc = app.add_subcommand("concurrence", "Entanglement of the surviving two-kaon block");
    TwoKaonStateOptions co_state;
    co_state.attach(conc, "psi-");
    double co_tl = 0.0, co_tr = 0.0;
    conc->add_option("--tl", co_tl, "Left time [tau_S]")->capture_default_str();
    conc->add_option("--tr", co_tr, "Right time [tau_S]")->capture_default_str();

    // bell-eval
    auto* beval = app.add_subcommand("bell-eval", "CHSH value S(t1, t2, t3, t4)");
    TwoKaonStateOptions be_state;
    be_state.attach(beval, "xi");
    std::vector<double> be_times;
    std::vector<std::string> be_qs;
    double be_unit = 1.0;
    beval->add_option("--times", be_times, "t1,t2,t3,t4 [tau_S]; xi and chi have defaults")
        ->delimiter(',')
        ->expected(4);
    beval->add_option("--quasispins", be_qs, "Four quasi-spins (matrix path only)")->delimiter(',')->expected(4);
    beval->add_option("--time-unit", be_unit, "Multiply all times by this factor")->capture_default_str();

    // bell-optimize
    auto* bopt = app.add_subcommand("bell-optimize", "Multi-start maximization of S");
    TwoKaonStateOptions bo_state;
    bo_state.attach(bopt, "psi-");
    std::string bo_mode = "free-phases";
    kb::OptimizerSettings bo_settings;
    double bo_tmax = 50.0;
    bopt->add_option("--mode", bo_mode, "zero-phases, free-phases or fixed-state")
        ->check(CLI::IsMember({"zero-phases", "free-phases", "fixed-state"}))
        ->capture_default_str();
    bopt->add_option("--budget", bo_settings.budget, "Total objective evaluations")->capture_default_str();
    bopt->add_option("--starts", bo_settings.starts, "Number of starts")->capture_default_str();
    bopt->add_option("--t-max", bo_tmax, "Upper bound on each time [tau_S]")->capture_default_str();

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "Purity and concurrence along a detection-time path");
    TwoKaonStateOptions tr_state;
    tr_state.attach(traj, "phi+");
    std::string tr_scenario = "equal";
    double tr_t_end = 100.0, tr_step = 0.05, tr_unit = 1.0;
    traj->add_option("--scenario", tr_scenario, "equal, left-zero or left-0.3")->capture_default_str();
    traj->add_option("--t-end", tr_t_end, "Last time")->capture_default_str();
    traj->add_option("--step", tr_step, "Grid spacing")->capture_default_str();
    traj->add_option("--time-unit", tr_unit, "Length of one time unit in tau_S")->capture_default_str();

    // curves
    auto* curves = app.add_subcommand("curves", "Reference and S curves");
    std::string cu_which = "mems";
    std::size_t cu_n = 201;
    TwoKaonStateOptions cu_state;
    cu_state.attach(curves, "xi");
    std::vector<double> cu_times;
    double cu_umax = 3.0;
    SingleStateOptions cu_single;
    double cu_t_end = 1000.0, cu_step = 0.5;
    curves->add_option("--which", cu_which, "mems, werner, s or purity")
        ->check(CLI::IsMember({"mems", "werner", "s", "purity"}))
        ->capture_default_str();
    curves->add_option("--n", cu_n, "Number of points (mems, werner, s)")->capture_default_str();
    curves->add_option("--times", cu_times, "Base times for the S path")->delimiter(',')->expected(4);
    curves->add_option("--u-max", cu_umax, "S path runs over u in [0, u_max]")->capture_default_str();
    curves->add_option("--single-state", cu_single.name, "Single-kaon state for --which purity")
        ->capture_default_str();
    curves->add_option("--t-end", cu_t_end, "Purity curve end [tau_S]")->capture_default_str();
    curves->add_option("--step", cu_step, "Purity curve step [tau_S]")->capture_default_str();

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "Recompute the headline numbers and print a pass/fail table");
    bool strict = false;
    repro->add_flag("--strict", strict, "Exit with status 1 if any check fails");

    if (argc > 1 && argv[1][0] != '-') {
        bool known = false;
        for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == argv[1];
        if (!known) {
            std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
            return kExitUsage;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const kb::MesonParameters p = effective_parameters(g);

        if (evolve->parsed()) {
            const auto init = ev_state.resolve();
            const auto mode = ev_offdiag == "zero" ? kb::OffdiagMode::zero : kb::OffdiagMode::formal_x;
            if (!(ev_step > 0.0) || !(ev_t_end >= 0.0)) throw kb::DomainError("need step > 0 and t-end >= 0");
            Table t{base_meta("evolve-single", g, p),
                    {"t", "rho_SS", "rho_LL", "rho_SL_re", "rho_SL_im", "p_fromL", "p_fromS", "X_re", "X_im",
                     "surviving_trace", "total_trace", "purity", "prob_antikaon"},
                    {}};
            t.meta.add("state", ev_state.label()).add("offdiag", ev_offdiag).add("method", ev_integrate ? "rk4" : "closed");
            const auto k0bar = kb::QuasiSpin::antikaon().projector();
            for (std::size_t k = 0; k < kb::grid_size(ev_t_end, ev_step); ++k) {
                const double time = static_cast<double>(k) * ev_step;
                const auto s = ev_integrate ? kb::integrate_master_equation(init, time, p, ev_rk_step, mode)
                                            : kb::evolve_single(init, time, p, mode);
                t.rows.push_back({time, s.ss(0, 0).real(), s.ss(1, 1).real(), s.ss(0, 1).real(), s.ss(0, 1).imag(),
                                  s.p_fromL, s.p_fromS, s.ff_offdiag.real(), s.ff_offdiag.imag(),
                                  s.surviving_trace(), s.total_trace(), kb::purity(s), kb::prob_yes(s, k0bar)});
            }
            emit(g, t);
        } else if (scan->parsed()) {
            const auto init = sc_state.resolve();
            const auto curve = kb::purity_curve(init, sc_t_end, sc_step, p);
            std::size_t arg = 0;
            for (std::size_t k = 1; k < curve.size(); ++k)
                if (curve[k].purity < curve[arg].purity) arg = k;
            const double lo = arg > 0 ? curve[arg - 1].t : 0.0;
            const double hi = arg + 1 < curve.size() ? curve[arg + 1].t : curve[arg].t + sc_step;
            const auto m = kb::minimize_purity_time(init, p, lo, hi);
            Table t{base_meta("purity-scan", g, p), {"t", "purity"}, {}};
            t.meta.add("state", sc_state.label()).add("min_t", m.t).add("min_purity", m.purity);
            if (sc_global) {
                const auto gm = kb::minimize_purity_global(p);
                t.meta.add("global_min_purity", gm.purity)
                    .add("global_min_t", gm.t)
                    .add("global_min_rho_SS", gm.init.rho_SS)
                    .add("global_min_abs_rho_SL", std::abs(gm.init.rho_SL));
            }
            for (const auto& pt : curve) t.rows.push_back({pt.t, pt.purity});
            emit(g, t);
        } else if (expect->parsed()) {
            const auto psi = ex_state.resolve();
            const auto ql = kb::QuasiSpin::named(ex_left);
            const auto qr = kb::QuasiSpin::named(ex_right);
            const double closed = ql.is_antikaon() && qr.is_antikaon()
                                      ? kb::expectation_closed_form(psi, ex_tl, ex_tr, p)
                                      : kNaN;
            Table t{base_meta("expectation", g, p), {"t_l", "t_r", "E_closed", "E_matrix"}, {}};
            t.meta.add("state", ex_state.label()).add("left", ex_left).add("right", ex_right);
            t.rows.push_back(
                {ex_tl, ex_tr, closed, kb::expectation_matrix(psi, ql.projector(), qr.projector(), ex_tl, ex_tr, p)});
            emit(g, t);
        } else if (conc->parsed()) {
            const auto psi = co_state.resolve();
            const auto sigma = kb::evolve_bipartite(psi, co_tl, co_tr, p);
            const double c = kb::wootters_concurrence(sigma.ssss).value;
            Table t{base_meta("concurrence", g, p),
                    {"t_l", "t_r", "C_wootters", "C_closed", "C_renorm", "EoF", "ppt_min_eigenvalue", "purity_norm"},
                    {}};
            t.meta.add("state", co_state.label());
            t.rows.push_back({co_tl, co_tr, c, kb::concurrence_closed_form(psi, co_tl, co_tr, p),
                              kb::normalized_concurrence(sigma.ssss), kb::eof_from_concurrence(std::min(1.0, c)),
                              kb::ppt_min_eigenvalue(sigma), kb::purity_bipartite(sigma).normalized});
            emit(g, t);
        } else if (beval->parsed()) {
            const auto psi = be_state.resolve();
            auto times = be_times.empty() ? default_times_for(be_state.label()) : to_times(be_times);
            if (!(be_unit > 0.0)) throw kb::DomainError("time unit must be positive");
            for (double& x : times) x *= be_unit;
            kb::BellConfiguration cfg(times);
            if (!be_qs.empty())
                for (std::size_t i = 0; i < 4; ++i) cfg.quasispins[i] = kb::QuasiSpin::named(be_qs[i]);
            const double closed = cfg.all_antikaon() ? kb::s_value(psi, cfg, p, kb::EvaluationPath::closed) : kNaN;
            Table t{base_meta("bell-eval", g, p), {"t1", "t2", "t3", "t4", "S_closed", "S_matrix"}, {}};
            t.meta.add("state", be_state.label()).add("time_unit", be_unit);
            t.rows.push_back({times[0], times[1], times[2], times[3], closed, kb::s_general(psi, cfg, p)});
            emit(g, t);
        } else if (bopt->parsed()) {
            kb::SearchSpace space = bo_mode == "zero-phases"   ? kb::SearchSpace::zero_phases(bo_tmax)
                                    : bo_mode == "free-phases" ? kb::SearchSpace::free_phases(bo_tmax)
                                                               : kb::SearchSpace::fixed_state(bo_state.resolve(), bo_tmax);
            bo_settings.seed = g.seed;
            bo_settings.threads = g.threads;
            const auto r = kb::maximize_s(space, p, bo_settings);
            Table t{base_meta("bell-optimize", g, p),
                    {"S", "S_matrix", "r1", "r2", "r3", "r4", "phi1", "phi2", "phi3", "phi4", "t1", "t2", "t3", "t4"},
                    {}};
            t.meta.add("mode", bo_mode)
                .add("budget", std::to_string(bo_settings.budget))
                .add("starts", std::to_string(r.n_starts))
                .add("evaluations", std::to_string(r.n_evals))
                .add("budget_exhausted", r.budget_exhausted ? "true" : "false");
            if (bo_mode == "fixed-state") t.meta.add("state", bo_state.label());
            const auto& s = r.best_state;
            const auto& x = r.best_times;
            t.rows.push_back({r.best_S, r.matrix_S, s.r[0], s.r[1], s.r[2], s.r[3], s.phi[0], s.phi[1], s.phi[2],
                              s.phi[3], x[0], x[1], x[2], x[3]});
            emit(g, t);
        } else if (traj->parsed()) {
            const auto psi = tr_state.resolve();
            const auto scenario = kb::parse_scenario(tr_scenario);
            const auto pts = kb::trajectory(psi, scenario, tr_t_end, tr_step, p, tr_unit, g.threads);
            Table t{base_meta("trajectory", g, p),
                    {"t", "t_l", "t_r", "purity_raw", "purity_norm", "concurrence_raw", "concurrence_renorm"},
                    {}};
            t.meta.add("state", tr_state.label())
                .add("scenario", std::string(kb::scenario_name(scenario)))
                .add("time_unit", tr_unit)
                .add("purity_dimension", "16")
                .add("concurrence_raw", "surviving block as is")
                .add("concurrence_renorm", "surviving block divided by its trace");
            for (const auto& pt : pts)
                t.rows.push_back({pt.t, pt.t_l, pt.t_r, pt.purity_raw, pt.purity_norm, pt.concurrence_raw,
                                  pt.concurrence_renorm});
            emit(g, t);
        } else if (curves->parsed()) {
            Table t{base_meta("curves", g, p), {}, {}};
            t.meta.add("curve", cu_which);
            if (cu_which == "mems" || cu_which == "werner") {
                const auto pts = cu_which == "mems" ? kb::mems_curve(cu_n) : kb::werner_curve(cu_n);
                t.columns = {cu_which == "mems" ? "concurrence_param" : "p", "purity_norm", "concurrence"};
                t.meta.add("purity_dimension", "4");
                for (const auto& pt : pts) t.rows.push_back({pt.parameter, pt.purity_norm, pt.concurrence});
            } else if (cu_which == "s") {
                const auto psi = cu_state.resolve();
                const auto base = cu_times.empty() ? default_times_for(cu_state.label()) : to_times(cu_times);
                t.columns = {"u", "t1", "t2", "t3", "t4", "S"};
                t.meta.add("state", cu_state.label()).add("path", "times(u) = u * base");
                for (const auto& pt : kb::s_curve(psi, base, p, cu_umax, cu_n))
                    t.rows.push_back({pt.u, pt.times[0], pt.times[1], pt.times[2], pt.times[3], pt.s});
            } else {
                t.columns = {"t", "purity"};
                t.meta.add("state", cu_single.label());
                for (const auto& pt : kb::purity_curve(cu_single.resolve(), cu_t_end, cu_step, p))
                    t.rows.push_back({pt.t, pt.purity});
            }
            emit(g, t);
        } else if (repro->parsed()) {
            const auto checks = reproduction_checks(p, g.seed, g.threads);
            std::ostringstream os;
            auto meta = base_meta("reproduce", g, p);
            bool all = true;
            for (const auto& c : checks) all = all && c.pass;
            meta.add("result", all ? "PASS" : "FAIL");
            if (g.format == "json") {
                nlohmann::ordered_json j;
                for (const auto& [k, v] : meta.entries()) j["metadata"][k] = v;
                j["checks"] = nlohmann::ordered_json::array();
                for (const auto& c : checks)
                    j["checks"].push_back({{"name", c.name},
                                           {"value", std::stod(kb::format_number(c.value))},
                                           {"expected", std::stod(kb::format_number(c.expected))},
                                           {"tolerance", c.tolerance},
                                           {"status", c.pass ? "PASS" : "FAIL"}});
                os << j.dump(2) << '\n';
            } else {
                kb::write_comment_header(os, meta);
                os << "check,value,expected,tolerance,status\n";
                for (const auto& c : checks)
                    os << c.name << ',' << kb::format_number(c.value) << ',' << kb::format_number(c.expected) << ','
                       << kb::format_number(c.tolerance) << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
            }
            write_text(g.out, os.str());
            if (strict && !all) return kExitDomain;
        }
    } catch (const kb::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}
