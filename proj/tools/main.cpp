// dpnls: command-line surface over the standing-wave stability library.
// Every subcommand echoes its resolved configuration (JSON "config" object,
// or "# key=value" lines in CSV) and formats floats at 15 significant
// digits, so identical invocations produce identical bytes.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dpnls/errors.hpp"
#include "dpnls/model.hpp"
#include "dpnls/profile.hpp"
#include "dpnls/simulator.hpp"
#include "dpnls/stability.hpp"
#include "json_writer.hpp"

using namespace dpnls;
using cli::ConfigEcho;
using cli::JsonValue;

namespace {

struct Common {
    double p = 0.0;
    double q = 0.0;
    Tolerances tols;
    std::string out_path;
};

void add_exponents(CLI::App* cmd, Common& c) {
    cmd->add_option("--p", c.p, "lower exponent p (needs 1 < p < q)")->required();
    cmd->add_option("--q", c.q, "upper exponent q")->required();
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--quad-tol", c.tols.quad_tol, "quadrature tolerance")
        ->capture_default_str();
    cmd->add_option("--root-tol", c.tols.root_tol, "root-finding tolerance")
        ->capture_default_str();
    cmd->add_option("--series-tol", c.tols.series_tol, "series tolerance")
        ->capture_default_str();
    cmd->add_option("--out", c.out_path, "write output to PATH instead of stdout");
}

ConfigEcho base_config(const std::string& command, const Common& c, bool with_pq = true) {
    ConfigEcho cfg;
    cfg.add("command", command);
    if (with_pq) {
        cfg.add("p", c.p);
        cfg.add("q", c.q);
    }
    return cfg;
}

void add_tolerances(ConfigEcho& cfg, const Common& c) {
    cfg.add("quad_tol", c.tols.quad_tol);
    cfg.add("root_tol", c.tols.root_tol);
    cfg.add("series_tol", c.tols.series_tol);
}

std::string render_json(const ConfigEcho& cfg, JsonValue payload_holder) {
    JsonValue root = JsonValue::object();
    root.set("schema", JsonValue::integer(1));
    root.set("config", cfg.json());
    // payload_holder is an object whose fields are appended in order
    root.merge_from(std::move(payload_holder));
    return root.dump() + "\n";
}

JsonValue opt_num(const std::optional<double>& v) {
    return v ? JsonValue::number(*v) : JsonValue::null();
}

// ---- subcommand runners ----

std::string run_classify(const Common& c) {
    const StabilityReport rep = classify({c.p, c.q}, c.tols);
    ConfigEcho cfg = base_config("classify", c);
    add_tolerances(cfg, c);

    JsonValue intervals = JsonValue::array();
    for (const TheoryInterval& ti : rep.theory_intervals) {
        JsonValue one = JsonValue::object();
        one.set("lo", JsonValue::number(ti.lo));
        one.set("hi", JsonValue::number(ti.hi));  // +inf serializes as null
        one.set("verdict", JsonValue::string(verdict_name(ti.verdict)));
        intervals.push(std::move(one));
    }
    JsonValue scan = JsonValue::array();
    for (const ScanPoint& pt : rep.numeric_sign_scan) {
        JsonValue one = JsonValue::object();
        one.set("omega", JsonValue::number(pt.omega));
        one.set("sign", JsonValue::integer(pt.sign));
        scan.push(std::move(one));
    }

    JsonValue payload = JsonValue::object();
    payload.set("regime", JsonValue::string(regime_name(rep.regime)));
    payload.set("omega_star", opt_num(rep.omega_star));
    payload.set("mu_estimate", opt_num(rep.mu_estimate));
    payload.set("omega0", opt_num(rep.omega0));
    payload.set("theory_intervals", std::move(intervals));
    payload.set("numeric_sign_scan", std::move(scan));
    return render_json(cfg, std::move(payload));
}

std::string run_dmass(const Common& c, double omega) {
    const double value = dmass({c.p, c.q}, omega, c.tols.quad_tol, c.tols.root_tol);
    ConfigEcho cfg = base_config("dmass", c);
    cfg.add("omega", omega);
    add_tolerances(cfg, c);
    JsonValue payload = JsonValue::object();
    payload.set("value", JsonValue::number(value));
    return render_json(cfg, std::move(payload));
}

std::string run_limit(const Common& c) {
    const ZeroFrequencyLimit zf = zero_frequency_limit({c.p, c.q});
    ConfigEcho cfg = base_config("limit", c);
    add_tolerances(cfg, c);
    JsonValue payload = JsonValue::object();
    payload.set("kind", JsonValue::string(zf.kind == LimitKind::finite
                                              ? "finite"
                                              : "negative_infinity"));
    payload.set("value", JsonValue::number(zf.value));  // -inf -> null, see kind
    payload.set("sign", JsonValue::integer(zf.sign));
    payload.set("c_pq", JsonValue::number(zf.c_pq));
    return render_json(cfg, std::move(payload));
}

std::string run_threshold(const Common& c) {
    const Nonlinearity nl{c.p, c.q};
    const Regime regime = decide_regime(nl);
    const auto th = threshold(nl, c.tols);
    ConfigEcho cfg = base_config("threshold", c);
    add_tolerances(cfg, c);
    JsonValue payload = JsonValue::object();
    payload.set("regime", JsonValue::string(regime_name(regime)));
    payload.set("omega_star", th ? JsonValue::number(th->omega_star) : JsonValue::null());
    payload.set("z_star", th ? JsonValue::number(th->z_star) : JsonValue::null());
    payload.set("curvature_estimate",
                th ? JsonValue::number(th->curvature_estimate) : JsonValue::null());
    payload.set("omega0", nl.q < 5.0 ? JsonValue::number(critical_points(nl).omega0)
                                     : JsonValue::null());
    return render_json(cfg, std::move(payload));
}

std::string run_critical_points(const Common& c) {
    const CriticalPoints cp = critical_points({c.p, c.q});
    ConfigEcho cfg = base_config("critical-points", c);
    add_tolerances(cfg, c);
    JsonValue payload = JsonValue::object();
    payload.set("h0", JsonValue::number(cp.h0));
    payload.set("s0", JsonValue::number(cp.s0));
    payload.set("s1", JsonValue::number(cp.s1));
    payload.set("s2", JsonValue::number(cp.s2));
    payload.set("t0", JsonValue::number(cp.t0));
    payload.set("t1", JsonValue::number(cp.t1));
    payload.set("t2", JsonValue::number(cp.t2));
    payload.set("omega0", JsonValue::number(cp.omega0));
    return render_json(cfg, std::move(payload));
}

std::string run_h_limit(const Common& c) {
    const Nonlinearity nl{c.p, c.q};
    const bool divergent = h_limit_divergent(nl);
    ConfigEcho cfg = base_config("h-limit", c);
    add_tolerances(cfg, c);
    JsonValue payload = JsonValue::object();
    payload.set("divergent", JsonValue::boolean(divergent));
    if (divergent) {
        payload.set("quadrature", JsonValue::null());
        payload.set("closed_form", JsonValue::null());
    } else {
        payload.set("quadrature", JsonValue::number(h_limit_integral(nl, c.tols.quad_tol)));
        payload.set("closed_form", JsonValue::number(h_limit_closed_form(nl)));
    }
    return render_json(cfg, std::move(payload));
}

std::string run_audit(const Common& c) {
    const AuditRecord rec = sign_pattern_audit({c.p, c.q}, c.tols.quad_tol);
    ConfigEcho cfg = base_config("audit", c);
    add_tolerances(cfg, c);
    JsonValue items = JsonValue::array();
    for (const AuditItem& it : rec.items) {
        JsonValue one = JsonValue::object();
        one.set("name", JsonValue::string(it.name));
        one.set("pass", JsonValue::boolean(it.pass));
        one.set("witness", JsonValue::string(it.witness));
        items.push(std::move(one));
    }
    JsonValue payload = JsonValue::object();
    payload.set("items", std::move(items));
    payload.set("all_pass", JsonValue::boolean(rec.all_pass));
    return render_json(cfg, std::move(payload));
}

std::string run_profile(const Common& c, double omega, int n_samples, double x_max) {
    const double resolved_x_max = x_max > 0.0 ? x_max : auto_x_max(omega);
    const SolitonProfile prof =
        build_profile({c.p, c.q}, omega, n_samples, resolved_x_max, c.tols.quad_tol);
    ConfigEcho cfg = base_config("profile", c);
    cfg.add("omega", omega);
    cfg.add("n_samples", static_cast<long long>(n_samples));
    cfg.add("x_max", resolved_x_max);
    add_tolerances(cfg, c);

    std::string out = cfg.csv();
    out += "x,phi\n";
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        out += cli::format_double(prof.x[i]) + "," + cli::format_double(prof.phi[i]) + "\n";
    }
    return out;
}

std::string run_region_scan(const Common& c, double p_min, double p_max, int p_steps,
                            double q_min, double q_max, int q_steps) {
    auto grid_value = [](double lo, double hi, int steps, int i) {
        return steps > 1 ? lo + (hi - lo) * i / (steps - 1) : lo;
    };

    // one task per p-row; rows are emitted in ascending (p, q) order
    std::vector<std::future<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(p_steps));
    for (int i = 0; i < p_steps; ++i) {
        const double p = grid_value(p_min, p_max, p_steps, i);
        rows.push_back(std::async(std::launch::async, [=, &c]() {
            std::string chunk;
            for (int j = 0; j < q_steps; ++j) {
                const double q = grid_value(q_min, q_max, q_steps, j);
                if (!(p > 1.0) || !(q > p)) continue;  // inadmissible cell: skip
                const Nonlinearity nl{p, q};
                const Regime regime = decide_regime(nl);
                std::string omega_star;
                if (regime == Regime::sharp_threshold) {
                    const auto th = threshold(nl, c.tols);
                    if (th) omega_star = cli::format_double(th->omega_star);
                }
                chunk += cli::format_double(p) + "," + cli::format_double(q) + "," +
                         regime_name(regime) + "," + omega_star + "\n";
            }
            return chunk;
        }));
    }

    ConfigEcho cfg = base_config("region-scan", c, false);
    cfg.add("p_min", p_min);
    cfg.add("p_max", p_max);
    cfg.add("p_steps", static_cast<long long>(p_steps));
    cfg.add("q_min", q_min);
    cfg.add("q_max", q_max);
    cfg.add("q_steps", static_cast<long long>(q_steps));
    add_tolerances(cfg, c);

    std::string out = cfg.csv();
    out += "p,q,regime,omega_star\n";
    for (auto& row : rows) out += row.get();
    return out;
}

std::string run_simulate(const Common& c, double omega, double eps, double t_end,
                         int n_grid, double dt, const std::string& kind_name) {
    const PerturbationKind kind = kind_name == "gaussian_bump"
                                      ? PerturbationKind::gaussian_bump
                                      : PerturbationKind::scale;
    const ExperimentResult res = stability_experiment({c.p, c.q}, omega, eps, t_end,
                                                      n_grid, dt, kind, c.tols.quad_tol);
    ConfigEcho cfg = base_config("simulate", c);
    cfg.add("omega", omega);
    cfg.add("eps", eps);
    cfg.add("t_end", t_end);
    cfg.add("n_grid", static_cast<long long>(n_grid));
    cfg.add("dt", dt);
    cfg.add("perturbation", kind_name);
    add_tolerances(cfg, c);

    std::string out = cfg.csv();
    out += "# verdict_hint=" + std::string(verdict_hint_name(res.verdict_hint)) + "\n";
    out += "# max_distance=" + cli::format_double(res.max_distance) + "\n";
    out += "# profile_h1_norm=" + cli::format_double(res.profile_h1_norm) + "\n";
    out += "# blew_up=" + std::string(res.blew_up ? "true" : "false") + "\n";
    out += "t,orbital_distance,mass,energy\n";
    for (const ExperimentRecord& r : res.series) {
        out += cli::format_double(r.t) + "," + cli::format_double(r.distance) + "," +
               cli::format_double(r.mass) + "," + cli::format_double(r.energy) + "\n";
    }
    return out;
}

bool write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return true;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "standing-wave stability toolkit for the double-power Schrodinger equation\n"
        "JSON goes to stdout (schema 1, 15-significant-digit floats, fixed field\n"
        "order); CSV columns are documented per subcommand."};
    app.require_subcommand(1);

    std::string output;
    std::string out_path;

    Common c_classify, c_dmass, c_limit, c_threshold, c_critical, c_hlimit, c_audit,
        c_profile, c_scan, c_simulate;
    double omega_dmass = 0.0, omega_profile = 0.0, omega_sim = 0.0;
    int n_samples = 2049;
    double x_max = 0.0;
    double p_min = 1.1, p_max = 3.0, q_min = 1.2, q_max = 4.9;
    int p_steps = 8, q_steps = 8;
    double eps = 1e-3, t_end = 30.0, dt = 1e-3;
    int n_grid = 1024;
    std::string perturbation = "scale";

    auto* classify_cmd =
        app.add_subcommand("classify", "full stability report for one exponent pair (JSON)");
    add_exponents(classify_cmd, c_classify);
    add_common(classify_cmd, c_classify);
    classify_cmd->callback([&] {
        output = run_classify(c_classify);
        out_path = c_classify.out_path;
    });

    auto* dmass_cmd =
        app.add_subcommand("dmass", "derivative of the soliton mass at one frequency (JSON)");
    add_exponents(dmass_cmd, c_dmass);
    dmass_cmd->add_option("--omega", omega_dmass, "frequency (> 0)")->required();
    add_common(dmass_cmd, c_dmass);
    dmass_cmd->callback([&] {
        output = run_dmass(c_dmass, omega_dmass);
        out_path = c_dmass.out_path;
    });

    auto* limit_cmd =
        app.add_subcommand("limit", "zero-frequency limit of the mass derivative (JSON)");
    add_exponents(limit_cmd, c_limit);
    add_common(limit_cmd, c_limit);
    limit_cmd->callback([&] {
        output = run_limit(c_limit);
        out_path = c_limit.out_path;
    });

    auto* threshold_cmd = app.add_subcommand(
        "threshold", "sharp stability threshold when the regime admits one (JSON)");
    add_exponents(threshold_cmd, c_threshold);
    add_common(threshold_cmd, c_threshold);
    threshold_cmd->callback([&] {
        output = run_threshold(c_threshold);
        out_path = c_threshold.out_path;
    });

    auto* critical_cmd = app.add_subcommand(
        "critical-points", "landmark amplitudes h0, s_j, t_j and omega0 (JSON)");
    add_exponents(critical_cmd, c_critical);
    add_common(critical_cmd, c_critical);
    critical_cmd->callback([&] {
        output = run_critical_points(c_critical);
        out_path = c_critical.out_path;
    });

    auto* hlimit_cmd = app.add_subcommand(
        "h-limit", "degenerate-limit integral: quadrature and closed form side by side (JSON)");
    add_exponents(hlimit_cmd, c_hlimit);
    add_common(hlimit_cmd, c_hlimit);
    hlimit_cmd->callback([&] {
        output = run_h_limit(c_hlimit);
        out_path = c_hlimit.out_path;
    });

    auto* audit_cmd = app.add_subcommand(
        "audit", "sign-pattern audit in the transitional exponent window (JSON)");
    add_exponents(audit_cmd, c_audit);
    add_common(audit_cmd, c_audit);
    audit_cmd->callback([&] {
        output = run_audit(c_audit);
        out_path = c_audit.out_path;
    });

    auto* profile_cmd =
        app.add_subcommand("profile", "soliton profile samples (CSV columns: x,phi)");
    add_exponents(profile_cmd, c_profile);
    profile_cmd->add_option("--omega", omega_profile, "frequency (>= 0)")->required();
    profile_cmd->add_option("--n-samples", n_samples, "grid samples on [0, x_max]")
        ->capture_default_str();
    profile_cmd->add_option("--x-max", x_max, "half-line extent (0 = automatic)")
        ->capture_default_str();
    add_common(profile_cmd, c_profile);
    profile_cmd->callback([&] {
        output = run_profile(c_profile, omega_profile, n_samples, x_max);
        out_path = c_profile.out_path;
    });

    auto* scan_cmd = app.add_subcommand(
        "region-scan",
        "regime over a (p,q) rectangle (CSV columns: p,q,regime,omega_star; rows sorted by (p,q))");
    scan_cmd->add_option("--p-min", p_min, "lower p bound")->capture_default_str();
    scan_cmd->add_option("--p-max", p_max, "upper p bound")->capture_default_str();
    scan_cmd->add_option("--p-steps", p_steps, "grid points in p")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    scan_cmd->add_option("--q-min", q_min, "lower q bound")->capture_default_str();
    scan_cmd->add_option("--q-max", q_max, "upper q bound")->capture_default_str();
    scan_cmd->add_option("--q-steps", q_steps, "grid points in q")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(scan_cmd, c_scan);
    scan_cmd->callback([&] {
        output = run_region_scan(c_scan, p_min, p_max, p_steps, q_min, q_max, q_steps);
        out_path = c_scan.out_path;
    });

    auto* simulate_cmd = app.add_subcommand(
        "simulate",
        "perturbed-soliton evolution (CSV columns: t,orbital_distance,mass,energy)");
    add_exponents(simulate_cmd, c_simulate);
    simulate_cmd->add_option("--omega", omega_sim, "frequency (> 0)")->required();
    simulate_cmd->add_option("--eps", eps, "relative perturbation size")->capture_default_str();
    simulate_cmd->add_option("--t-end", t_end, "evolution horizon")->capture_default_str();
    simulate_cmd->add_option("--n-grid", n_grid, "spatial grid size (even)")
        ->capture_default_str();
    simulate_cmd->add_option("--dt", dt, "time step")->capture_default_str();
    simulate_cmd->add_option("--perturbation", perturbation, "scale or gaussian_bump")
        ->check(CLI::IsMember({"scale", "gaussian_bump"}))
        ->capture_default_str();
    add_common(simulate_cmd, c_simulate);
    simulate_cmd->callback([&] {
        output = run_simulate(c_simulate, omega_sim, eps, t_end, n_grid, dt, perturbation);
        out_path = c_simulate.out_path;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends: print and exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }

    if (!write_output(output, out_path)) {
        std::fprintf(stderr, "cannot write output to '%s'\n", out_path.c_str());
        return 1;
    }
    return 0;
}
