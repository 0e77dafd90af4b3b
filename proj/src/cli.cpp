#include "patankar/cli.hpp"

#include "patankar/analysis.hpp"
#include "patankar/errors.hpp"
#include "patankar/problems.hpp"
#include "patankar/tableau.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace patankar {

namespace {

const char* kFamilies = "mpe, mprk22, mprk43, mprkso22, mprkso43, mpdec, mprk32, sirk2, sirk3";
const char* kProblems = "linear2x2, scalar, robertson, hires";

double parse_real(const std::string& key, const std::string& value) {
    double x = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || value.empty())
        throw InvalidScheme("scheme parameter '" + key + "' has non-numeric value '" + value + "'");
    return x;
}

} // namespace

std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

SchemeSpec parse_scheme(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
                throw InvalidScheme("malformed scheme parameter '" + tok + "' (expected key=value)");
            if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
                throw InvalidScheme("duplicate scheme parameter '" + tok + "'");
        }
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto real = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw InvalidScheme("scheme '" + name + "' requires parameter '" + key + "'");
        return parse_real(key, *v);
    };

    SchemeSpec spec;
    if (name == "mpe") spec = SchemeSpec::mpe();
    else if (name == "mprk22") spec = SchemeSpec::mprk22(real("alpha"));
    else if (name == "mprk43") {
        const double a = real("alpha");
        spec = SchemeSpec::mprk43(a, real("beta"));
    } else if (name == "mprkso22") {
        const double a = real("alpha");
        spec = SchemeSpec::mprkso22(a, real("beta"));
    } else if (name == "mprkso43") spec = SchemeSpec::mprkso43();
    else if (name == "mpdec") {
        auto ord = take("order");
        if (!ord) throw InvalidScheme("scheme 'mpdec' requires parameter 'order'");
        int order = 0;
        auto [ptr, ec] = std::from_chars(ord->data(), ord->data() + ord->size(), order);
        if (ec != std::errc() || ptr != ord->data() + ord->size())
            throw InvalidScheme("scheme parameter 'order' has non-integer value '" + *ord + "'");
        NodeFamily nodes = NodeFamily::GaussLobatto;
        if (auto n = take("nodes")) {
            if (*n == "gl") nodes = NodeFamily::GaussLobatto;
            else if (*n == "eq") nodes = NodeFamily::Equispaced;
            else throw InvalidScheme("unknown node family '" + *n + "' (valid: gl, eq)");
        }
        spec = SchemeSpec::mpdec(order, nodes);
    } else if (name == "mprk32") spec = SchemeSpec::mprk32();
    else if (name == "sirk2") spec = SchemeSpec::sirk2();
    else if (name == "sirk3") spec = SchemeSpec::sirk3();
    else throw InvalidScheme("unknown scheme '" + name + "'; valid names: " + kFamilies);

    if (!kv.empty()) throw InvalidScheme("unexpected parameter '" + kv.begin()->first + "' for scheme '" + name + "'");
    return spec;
}

std::string format_scheme(const SchemeSpec& spec) {
    const std::string name = family_name(spec.family);
    switch (spec.family) {
    case Family::MPRK22: return name + ":alpha=" + format_real(spec.alpha);
    case Family::MPRK43:
    case Family::MPRKSO22: return name + ":alpha=" + format_real(spec.alpha) + ",beta=" + format_real(spec.beta);
    case Family::MPDEC:
        return name + ":order=" + std::to_string(spec.order) +
               ",nodes=" + (spec.nodes == NodeFamily::GaussLobatto ? "gl" : "eq");
    default: return name;
    }
}

namespace {

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
            throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
        out.push_back(x);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ",") + format_real(x);
    return s;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

/// Resolved configuration echoed as the first CSV line.
struct Header {
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;

    void add(const std::string& flag, const std::string& value) { flags.emplace_back(flag, value); }
    std::string line() const {
        std::string s = "# patankar " + command;
        for (const auto& [f, v] : flags) s += " --" + f + " " + v;
        return s + "\n";
    }
};

struct ProblemOptions {
    std::string name = "linear2x2";
    double theta = 0.5;
    double eps = 1e-2;
    double k = 1e4;
    bool eps_given = false;

    Problem build(Header& h) const {
        h.add("problem", name);
        if (name == "linear2x2") {
            h.add("theta", format_real(theta));
            h.add("eps", format_real(eps));
            return linear2x2({theta, eps});
        }
        if (name == "scalar") {
            h.add("k", format_real(k));
            return scalar_nonlinear({k});
        }
        if (name == "robertson") {
            RobertsonSpec s;
            if (eps_given) s.ic_epsilon = eps;
            h.add("eps", format_real(s.ic_epsilon));
            return robertson(s);
        }
        if (name == "hires") {
            HiresSpec s;
            if (eps_given) s.ic_epsilon = eps;
            h.add("eps", format_real(s.ic_epsilon));
            return hires(s);
        }
        throw InvalidProblem("unknown problem '" + name + "'; valid names: " + kProblems);
    }
};

struct GridOptions {
    double dt_min = 0.015625, dt_max = 64.0;
    int per_octave = 16;
    double eps_min = 1e-8;
    int eps_points = 25;
    double theta_min = 1e-8;
    int theta_points = 25;

    void attach(CLI::App* app) {
        app->add_option("--dt-min", dt_min, "Smallest dt of the scan grid");
        app->add_option("--dt-max", dt_max, "Largest dt of the scan grid");
        app->add_option("--dt-per-octave", per_octave, "Grid points per factor of two in dt");
        app->add_option("--eps-min", eps_min, "Smallest initial value eps");
        app->add_option("--eps-points", eps_points, "Number of eps values in [eps-min, 0.5]");
        app->add_option("--theta-min", theta_min, "Smallest theta (mirrored to 1 - theta)");
        app->add_option("--theta-points", theta_points, "Number of theta values in [theta-min, 0.5]");
    }
    ScanGrid build(Header& h) const {
        h.add("dt-min", format_real(dt_min));
        h.add("dt-max", format_real(dt_max));
        h.add("dt-per-octave", std::to_string(per_octave));
        h.add("eps-min", format_real(eps_min));
        h.add("eps-points", std::to_string(eps_points));
        h.add("theta-min", format_real(theta_min));
        h.add("theta-points", std::to_string(theta_points));
        return ScanGrid::make(eps_min, eps_points, theta_min, theta_points, dt_min, dt_max, per_octave);
    }
};

const char* class_name(VanishingClass c) {
    return c == VanishingClass::FirstOrderCollapse ? "FIRST_ORDER_COLLAPSE" : "NO_COLLAPSE";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positivity-preserving Patankar-type integrators and their diagnostics", "patankar"};
    app.require_subcommand(1);

    std::string scheme_text = "mpe";
    std::string out_path = "-";
    int threads = 0;
    ProblemOptions prob;
    GridOptions grid;

    auto add_scheme = [&](CLI::App* c) { c->add_option("--scheme", scheme_text, "Scheme, e.g. mprk22:alpha=1")->required(); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "Output CSV path ('-' for stdout)"); };
    auto add_problem = [&](CLI::App* c) {
        c->add_option("--problem", prob.name, std::string("Problem: ") + kProblems);
        c->add_option("--theta", prob.theta, "linear2x2 parameter theta");
        c->add_option("--eps", prob.eps, "Initial value eps (linear2x2) or zero replacement (robertson, hires)")
            ->each([&](const std::string&) { prob.eps_given = true; });
        c->add_option("--k", prob.k, "Stiffness k of the scalar problem");
    };

    // solve
    auto* solve = app.add_subcommand("solve", "Integrate a problem and write the trajectory");
    int steps = 1000;
    std::optional<double> t_end;
    std::string time_grid = "auto";
    double first_fraction = 1e-6;
    int every = 1;
    add_scheme(solve);
    add_problem(solve);
    add_out(solve);
    solve->add_option("--steps", steps, "Number of time steps");
    solve->add_option("--t-end", t_end, "Final time (default: problem's)");
    solve->add_option("--grid", time_grid, "Time grid: uniform, exponential or auto");
    solve->add_option("--first-step", first_fraction, "First step fraction of the exponential grid");
    solve->add_option("--every", every, "Write every n-th step (final step always written)");

    // scan-dt
    auto* scan = app.add_subcommand("scan-dt", "Oscillation-free dt bound on the 2x2 linear system");
    add_scheme(scan);
    add_out(scan);
    grid.attach(scan);
    scan->add_option("--threads", threads, "Worker threads (0: all cores)");

    // convergence
    auto* conv = app.add_subcommand("convergence", "Observed order of accuracy");
    double dt_min_conv = 0.001953125, dt_max_conv = 0.0625;
    add_scheme(conv);
    add_problem(conv);
    add_out(conv);
    conv->add_option("--dt-min", dt_min_conv, "Smallest dt (dts halve from dt-max)");
    conv->add_option("--dt-max", dt_max_conv, "Largest dt");
    conv->add_option("--t-end", t_end, "Final time (default: problem's)");

    // vanishing-ic
    auto* van = app.add_subcommand("vanishing-ic", "First-step probe for order collapse at vanishing initial data");
    add_scheme(van);
    add_out(van);

    // direction
    auto* dir = app.add_subcommand("direction", "First-step direction check on the 2x2 linear system");
    std::optional<double> dir_theta, dir_eps, dir_dt;
    int samples = 0;
    unsigned long long seed = 1;
    add_scheme(dir);
    add_out(dir);
    grid.attach(dir);
    dir->add_option("--theta", dir_theta, "Single-point theta");
    dir->add_option("--eps", dir_eps, "Single-point eps");
    dir->add_option("--dt", dir_dt, "Single-point dt");
    dir->add_option("--samples", samples, "Random (eps, theta, dt) samples instead of the full grid");
    dir->add_option("--seed", seed, "Seed for --samples");

    // stability
    auto* stab = app.add_subcommand("stability", "Positivity threshold of R(-dt) for implicit RK tableaus");
    std::string tableau = "all";
    double horizon = 64.0;
    add_out(stab);
    stab->add_option("--tableau", tableau, "Tableau name or 'all'");
    stab->add_option("--dt-max", horizon, "Search horizon");

    // scalar-cfl
    auto* cfl = app.add_subcommand("scalar-cfl", "Overshoot of u' = -k|u|u + 1 versus CFL number");
    std::string cfl_text;
    double cfl_k = 1e4;
    add_scheme(cfl);
    add_out(cfl);
    cfl->add_option("--k", cfl_k, "Stiffness k");
    cfl->add_option("--cfl", cfl_text, "Comma-separated CFL numbers (default 2^-6 .. 2^6 by octaves)");

    // param-sweep
    auto* sweep = app.add_subcommand("param-sweep", "dt bound and vanishing-IC class over a parameter grid");
    std::string family = "mprk43", alphas_text, betas_text;
    add_out(sweep);
    grid.attach(sweep);
    sweep->add_option("--family", family, "mprk43, mprkso22 or mprk22");
    sweep->add_option("--alphas", alphas_text, "Comma-separated alpha values");
    sweep->add_option("--betas", betas_text, "Comma-separated beta values");
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::ostringstream csv;
    try {
        CLI::App* cmd = app.get_subcommands().front();
        Header h;
        h.command = cmd->get_name();

        if (cmd == solve) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            const Problem pr = prob.build(h);
            const double te = t_end.value_or(pr.t_end);
            std::string kind = time_grid;
            if (kind == "auto") kind = pr.name == "robertson" ? "exponential" : "uniform";
            if (kind != "uniform" && kind != "exponential")
                throw std::invalid_argument("unknown time grid '" + time_grid + "' (valid: uniform, exponential, auto)");
            if (steps < 1 || every < 1) throw std::invalid_argument("--steps and --every must be positive");
            h.add("steps", std::to_string(steps));
            h.add("t-end", format_real(te));
            h.add("grid", kind);
            if (kind == "exponential") h.add("first-step", format_real(first_fraction));
            h.add("every", std::to_string(every));
            const std::vector<double> times = kind == "uniform" ? uniform_time_grid(0.0, te, steps)
                                                                : exponential_time_grid(0.0, te, steps, first_fraction);
            csv << h.line() << "t";
            for (int i = 1; i <= pr.system.dim; ++i) csv << ",u" << i;
            csv << "\n";
            auto row = [&](const State& s) {
                csv << num(s.t);
                for (Eigen::Index i = 0; i < s.u.size(); ++i) csv << "," << num(s.u[i]);
                csv << "\n";
            };
            const Stepper stepper = make_stepper(spec);
            State s = pr.initial;
            row(s);
            for (int n = 1; n <= steps; ++n) {
                s = stepper(pr.system, s, times[n] - times[n - 1]);
                s.t = times[n];
                if (n % every == 0 || n == steps) row(s);
            }
        } else if (cmd == scan) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            const ScanGrid g = grid.build(h);
            const ScanResult r = dt_bound_scan(spec, g, threads);
            csv << h.line() << "# tolerance " << num(r.tolerance) << "\n";
            csv << "dt,worst_measure,pass\n";
            for (std::size_t i = 0; i < r.dt_values.size(); ++i)
                csv << num(r.dt_values[i]) << "," << num(r.worst_measure[i]) << ","
                    << (r.worst_measure[i] <= r.tolerance ? 1 : 0) << "\n";
            csv << "dt_bound," << num(r.dt_bound) << "\n";
        } else if (cmd == conv) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            const Problem pr = prob.build(h);
            const double te = t_end.value_or(pr.t_end);
            if (!(dt_min_conv > 0.0 && dt_max_conv >= dt_min_conv))
                throw std::invalid_argument("convergence: need 0 < dt-min <= dt-max");
            h.add("dt-min", format_real(dt_min_conv));
            h.add("dt-max", format_real(dt_max_conv));
            h.add("t-end", format_real(te));
            std::vector<double> dts;
            for (double dt = dt_max_conv; dt >= dt_min_conv * (1 - 1e-12); dt /= 2) dts.push_back(dt);
            const OrderEstimate est = convergence_study(spec, pr, dts, te);
            csv << h.line() << "dt,error\n";
            for (std::size_t i = 0; i < est.dts.size(); ++i) csv << num(est.dts[i]) << "," << num(est.errors[i]) << "\n";
            csv << "slope," << num(est.slope) << "\n";
        } else if (cmd == van) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            const VanishingProbe p = vanishing_ic_probe(spec);
            csv << h.line() << "scheme,u1,class\n"
                << format_scheme(spec) << "," << num(p.u1) << "," << class_name(p.cls) << "\n";
        } else if (cmd == dir) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            const bool single = dir_theta || dir_eps || dir_dt;
            if (single) {
                if (!(dir_theta && dir_eps && dir_dt))
                    throw std::invalid_argument("direction: --theta, --eps and --dt must be given together");
                h.add("theta", format_real(*dir_theta));
                h.add("eps", format_real(*dir_eps));
                h.add("dt", format_real(*dir_dt));
                csv << h.line() << "eps,theta,dt,correct\n"
                    << num(*dir_eps) << "," << num(*dir_theta) << "," << num(*dir_dt) << ","
                    << (direction_check(spec, *dir_eps, *dir_theta, *dir_dt) ? 1 : 0) << "\n";
            } else {
                const ScanGrid g = grid.build(h);
                std::vector<std::array<double, 3>> pts;
                if (samples > 0) {
                    h.add("samples", std::to_string(samples));
                    h.add("seed", std::to_string(seed));
                    std::mt19937_64 rng(seed);
                    std::uniform_real_distribution<double> unit(0.0, 1.0);
                    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
                    for (int i = 0; i < samples; ++i) {
                        const double e = logu(g.eps_values.front(), 0.5);
                        double t = logu(g.theta_values.front(), 0.5);
                        if (unit(rng) < 0.5) t = 1.0 - t;
                        pts.push_back({e, t, logu(g.dt_values.front(), g.dt_values.back())});
                    }
                } else {
                    for (double e : g.eps_values)
                        for (double t : g.theta_values)
                            for (double d : g.dt_values) pts.push_back({e, t, d});
                }
                csv << h.line() << "eps,theta,dt,correct\n";
                std::size_t failures = 0;
                for (const auto& p : pts) {
                    if (!direction_check(spec, p[0], p[1], p[2])) {
                        ++failures;
                        csv << num(p[0]) << "," << num(p[1]) << "," << num(p[2]) << ",0\n";
                    }
                }
                csv << "checked," << pts.size() << "\nfailures," << failures << "\n";
            }
        } else if (cmd == stab) {
            h.add("tableau", tableau);
            h.add("dt-max", format_real(horizon));
            std::vector<const ButcherTableau*> tabs;
            if (tableau == "all")
                for (const auto& t : tableau_registry()) tabs.push_back(&t);
            else
                tabs.push_back(&find_tableau(tableau));
            csv << h.line() << "tableau,threshold\n";
            for (const auto* t : tabs) csv << t->name << "," << num(rk_positivity_threshold(*t, horizon)) << "\n";
        } else if (cmd == cfl) {
            const SchemeSpec spec = parse_scheme(scheme_text);
            h.add("scheme", format_scheme(spec));
            std::vector<double> cfls;
            if (cfl_text.empty())
                for (int e = -6; e <= 6; ++e) cfls.push_back(std::ldexp(1.0, e));
            else
                cfls = parse_list(cfl_text, "--cfl");
            h.add("k", format_real(cfl_k));
            h.add("cfl", join(cfls));
            const std::vector<double> m = scalar_cfl_scan(spec, cfl_k, cfls);
            const double c = ScalarProblemSpec{cfl_k}.lipschitz();
            csv << h.line() << "cfl,dt,overshoot\n";
            for (std::size_t i = 0; i < cfls.size(); ++i) csv << num(cfls[i]) << "," << num(cfls[i] / c) << "," << num(m[i]) << "\n";
        } else if (cmd == sweep) {
            std::vector<double> alphas, betas;
            if (family == "mprk43") {
                alphas = alphas_text.empty() ? linspace(0.5, 3.0, 11) : parse_list(alphas_text, "--alphas");
                betas = betas_text.empty() ? linspace(0.1, 1.1, 11) : parse_list(betas_text, "--betas");
            } else if (family == "mprkso22") {
                alphas = alphas_text.empty() ? linspace(0.0, 1.0, 11) : parse_list(alphas_text, "--alphas");
                betas = betas_text.empty() ? linspace(0.5, 8.0, 11) : parse_list(betas_text, "--betas");
            } else if (family == "mprk22") {
                alphas = alphas_text.empty() ? linspace(0.5, 5.5, 11) : parse_list(alphas_text, "--alphas");
                if (!betas_text.empty()) throw std::invalid_argument("param-sweep: mprk22 takes no --betas");
                betas = {0.0};
            } else {
                throw std::invalid_argument("param-sweep: unknown family '" + family + "' (valid: mprk43, mprkso22, mprk22)");
            }
            h.add("family", family);
            h.add("alphas", join(alphas));
            if (family != "mprk22") h.add("betas", join(betas));
            const ScanGrid g = grid.build(h);
            csv << h.line() << "alpha,beta,positive_region,dt_bound,vanishing_class,u1\n";
            for (double a : alphas) {
                for (double b : betas) {
                    csv << num(a) << "," << (family == "mprk22" ? std::string("") : num(b)) << ",";
                    SchemeSpec spec;
                    try {
                        spec = family == "mprk43"     ? SchemeSpec::mprk43(a, b)
                               : family == "mprkso22" ? SchemeSpec::mprkso22(a, b)
                                                      : SchemeSpec::mprk22(a);
                    } catch (const Error& e) {
                        csv << ",,invalid,\n";
                        continue;
                    }
                    const ScanResult r = dt_bound_scan(spec, g, threads, true);
                    const VanishingProbe p = vanishing_ic_probe(spec);
                    csv << (spec.positive_region ? 1 : 0) << "," << num(r.dt_bound) << "," << class_name(p.cls) << ","
                        << num(p.u1) << "\n";
                }
            }
        }
    } catch (const InvalidScheme& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidProblem& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const TableauSingular& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GammaSingular& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (out_path == "-") {
        out << csv.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot open '" << out_path << "' for writing\n";
            return 2;
        }
        f << csv.str();
    }
    return 0;
}

} // namespace patankar
