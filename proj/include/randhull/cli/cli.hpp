#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "randhull/cli/suites.hpp"
#include "randhull/estimators/depth.hpp"

namespace randhull::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_budget = 3;

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot read file '" + path + "'");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Inline JSON when the argument starts with '{', otherwise a path to a JSON file.
inline dist::DistributionSpec load_spec(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_file(arg);
    return dist::make_spec(nlohmann::json::parse(text));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream in(s);
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw invalid_input(std::string("cannot parse ") + what + " value '" + s + "'");
    }
}

inline std::uint64_t parse_count(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw invalid_input(std::string("cannot parse ") + what + " value '" + s + "'");
    return std::stoull(s);
}

inline Vector parse_vector(const std::string& s, const char* what) {
    Vector v;
    for (const auto& item : split(s, ',')) v.push_back(parse_double(item, what));
    return v;
}

/// Comma list of sample sizes; an item a:b expands to a..b.
inline std::vector<std::uint64_t> parse_n_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(s, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(parse_count(item, "--n"));
            continue;
        }
        const auto a = parse_count(item.substr(0, colon), "--n"), b = parse_count(item.substr(colon + 1), "--n");
        if (b < a) throw invalid_input("--n: empty range '" + item + "'");
        for (auto n = a; n <= b; ++n) out.push_back(n);
    }
    if (out.empty()) throw invalid_input("--n: no sample sizes given");
    return out;
}

/// Replaces stored flags by overrides: an override flag drops the stored flag
/// together with the values that followed it.
inline std::vector<std::string> merge_overrides(const std::vector<std::string>& stored,
                                                const std::vector<std::string>& overrides) {
    auto is_flag = [](const std::string& a) { return a.size() > 2 && a.rfind("--", 0) == 0; };
    auto flag_name = [](const std::string& a) { return a.substr(0, a.find('=')); };
    std::vector<std::string> names;
    for (const auto& a : overrides)
        if (is_flag(a)) names.push_back(flag_name(a));
    std::vector<std::string> out;
    bool skipping = false;
    for (const auto& a : stored) {
        if (is_flag(a)) skipping = std::find(names.begin(), names.end(), flag_name(a)) != names.end();
        if (!skipping) out.push_back(a);
    }
    out.insert(out.end(), overrides.begin(), overrides.end());
    return out;
}

struct Common {
    std::string spec;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
    std::string format = "csv";
    double tol = geom::default_tol;
};

inline void add_common(CLI::App* app, Common& c, bool with_spec) {
    if (with_spec) app->add_option("--spec", c.spec, "distribution spec: inline JSON or a JSON file")->required();
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app->add_option("--out", c.out, "write results to FILE and a manifest to FILE.manifest.json");
    app->add_option("--format", c.format, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
    app->add_option("--tol", c.tol, "geometric tolerance")->check(CLI::PositiveNumber);
}

inline void emit(const Table& t, const std::string& format, std::ostream& os, const std::string& stamp) {
    if (format == "json") write_json(t, os, stamp);
    else if (format == "table") write_text(t, os);
    else write_csv(t, os, stamp);
}

inline Vector theta_or_mean(const std::string& arg, const dist::DistributionSpec& spec) {
    Vector theta = arg.empty() ? dist::mean(spec) : parse_vector(arg, "--theta");
    if (theta.size() != spec.dim()) throw invalid_input("--theta: dimension does not match the spec");
    return theta;
}

inline estimators::McConfig mc_config(const Common& c) {
    estimators::McConfig cfg;
    cfg.threads = c.threads;
    cfg.tol = c.tol;
    return cfg;
}

inline Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell{}; }

inline void add_report(Table& t, const std::string& group, const bounds::BoundReport& r) {
    for (const auto& e : r.entries)
        t.add({group, e.name, e.value, std::string(bounds::to_string(e.kind)), e.source, e.note});
}

/// Runs the command line; returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    // Manifest replay: the stored argv with any flags given here overriding it.
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--manifest") continue;
        if (i + 1 >= args.size()) {
            err << "error: --manifest needs a file\n";
            return exit_invalid;
        }
        try {
            const auto manifest = nlohmann::json::parse(read_file(args[i + 1]));
            std::vector<std::string> overrides(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(i));
            overrides.insert(overrides.end(), args.begin() + static_cast<std::ptrdiff_t>(i) + 2, args.end());
            args = merge_overrides(manifest.at("argv").get<std::vector<std::string>>(), overrides);
        } catch (const std::exception& e) {
            err << "error: bad manifest: " << e.what() << "\n";
            return exit_invalid;
        }
        break;
    }

    CLI::App app{"randhull: random convex hulls, depth, sample-count bounds and cubature"};
    app.require_subcommand(1);
    Common c;

    std::string mode = "p", cub_mode = "alg1", n_arg, theta_arg;
    double epsilon = 0.0, alpha = 0.3, delta = 0.5, confidence = 0.95, p_arg = -1.0;
    std::uint64_t trials = 10000, cap = 1000, m_arg = 0, dirs = 4096, ell = 17;
    std::size_t d_arg = 0;

    auto* est = app.add_subcommand("estimate", "Monte Carlo p_n(theta), first hit, or N_X(theta)");
    add_common(est, c, true);
    est->add_option("--mode", mode, "p, first-hit or N")->check(CLI::IsMember({"p", "first-hit", "N"}));
    est->add_option("--n", n_arg, "sample sizes, e.g. 3,4,8 or 3:10");
    est->add_option("--theta", theta_arg, "point, comma separated (default: the mean)");
    est->add_option("--epsilon", epsilon, "distance tolerance")->check(CLI::NonNegativeNumber);
    est->add_option("--trials", trials, "Monte Carlo trials");
    est->add_option("--cap", cap, "first-hit cap");
    est->add_option("--confidence", confidence, "bracket confidence for N");

    auto* depth = app.add_subcommand("depth", "Tukey depth of theta");
    add_common(depth, c, true);
    depth->add_option("--theta", theta_arg, "point, comma separated (default: the mean)");
    depth->add_option("--epsilon", epsilon, "depth radius")->check(CLI::NonNegativeNumber);
    depth->add_option("--dirs", dirs, "scan directions");
    depth->add_option("--trials", trials, "sample size per direction scan");

    auto* bnd = app.add_subcommand("bounds", "closed-form and moment bounds");
    add_common(bnd, c, false);
    bnd->add_option("--spec", c.spec, "spec for the moment bounds");
    bnd->add_option("--d", d_arg, "dimension");
    bnd->add_option("--alpha", alpha, "depth level");
    bnd->add_option("--n", n_arg, "sample size");
    bnd->add_option("--m", m_arg, "reference sample size for the ratio sandwich");
    bnd->add_option("--p", p_arg, "p_m for the ratio sandwich");
    bnd->add_option("--delta", delta, "failure probability");
    bnd->add_option("--epsilon", epsilon, "shrink factor");
    bnd->add_option("--trials", trials, "Monte Carlo budget for moments");

    auto* cub = app.add_subcommand("cubature", "degree-1 cubature by random convex hulls");
    add_common(cub, c, true);
    cub->add_option("--mode", cub_mode, "alg1, a or b")->check(CLI::IsMember({"alg1", "a", "b"}));
    cub->add_option("--ell", ell, "Algorithm 1 batch factor");
    cub->add_option("--theta", theta_arg, "target (default: the mean)");

    auto* inter = app.add_subcommand("interior", "K^alpha membership or the inclusion experiment");
    add_common(inter, c, true);
    inter->add_option("--theta", theta_arg, "membership test point; omit for the inclusion experiment");
    inter->add_option("--alpha", alpha, "depth level");
    inter->add_option("--epsilon", epsilon, "shrink factor of K^alpha");
    inter->add_option("--delta", delta, "failure probability");
    inter->add_option("--trials", trials, "trials");
    inter->add_option("--n", n_arg, "sample size (default: the theorem's)");

    auto* rep = app.add_subcommand("reproduce", "run a named reproduction suite");
    std::string suite, d_list, eps_list, alpha_list;
    SuiteOptions so;
    std::uint64_t suite_trials = 0, dmax = 0, nmax = 0;
    add_common(rep, c, false);
    rep->add_option("suite", suite, "suite name")->required()->check(
        [](const std::string& s) { return suites::registry().count(s) ? std::string{} : "unknown suite '" + s + "'"; });
    rep->add_option("--trials", suite_trials, "trials");
    rep->add_option("--dmax", dmax, "largest dimension");
    rep->add_option("--nmax", nmax, "largest sample size");
    rep->add_option("--d", d_list, "dimensions, comma separated");
    rep->add_option("--epsilon", eps_list, "epsilons, comma separated");
    rep->add_option("--alpha", alpha_list, "alphas, comma separated");
    rep->add_option("--confidence", so.confidence, "bracket confidence");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        const std::string stamp = utc_timestamp();
        Table t;
        if (est->parsed()) {
            const auto spec = load_spec(c.spec);
            const Vector theta = theta_or_mean(theta_arg, spec);
            const random::RngStream stream(c.seed, 0);
            if (mode == "p") {
                const auto ns = parse_n_list(n_arg.empty() ? std::to_string(2 * spec.dim()) : n_arg);
                const auto pr = estimators::estimate_p_profile(spec, theta, epsilon, ns, trials, stream, mc_config(c));
                t = Table{"p_n(theta) for " + spec.name(), {"n", "estimate", "stderr", "ci_low", "ci_high", "exact"},
                          {}, {}, {}};
                for (std::size_t j = 0; j < ns.size(); ++j) {
                    const auto& e = pr.estimates[j];
                    t.add({ns[j], e.value, e.stderr, e.ci95.lower, e.ci95.upper,
                           epsilon == 0.0 ? opt_cell(dist::exact_p(spec, ns[j], theta)) : Cell{}});
                }
                t.notes.push_back("trials " + std::to_string(trials) + ", per-trial monotone " +
                                  (pr.per_trial_monotone ? "true" : "false"));
            } else if (mode == "first-hit") {
                const auto r = estimators::estimate_first_hit(spec, theta, trials, cap, stream, mc_config(c), epsilon,
                                                              confidence);
                t = Table{"first hit index for " + spec.name(),
                          {"mean_hit", "stderr", "capped", "reliable", "N_lower", "N_upper"}, {}, {}, {}};
                t.add({r.mean_hit.value, r.mean_hit.stderr, r.capped, r.reliable, r.bracket.lower,
                       suites::bound_cell(r.bracket.upper)});
            } else {
                const auto r = estimators::estimate_N(spec, theta, confidence, stream, mc_config(c), epsilon);
                t = Table{"N_X(theta) bracket for " + spec.name() + " at confidence " + format_double(confidence),
                          {"n", "trials", "p_hat", "radius", "verdict"}, {}, {}, {}};
                for (const auto& cmp : r.comparisons)
                    t.add({cmp.n, cmp.trials, cmp.p_hat, cmp.radius, std::string(estimators::to_string(cmp.verdict))});
                t.notes.push_back("bracket [" + std::to_string(r.bracket.lower) + ", " +
                                  format_cell(suites::bound_cell(r.bracket.upper)) + "]" +
                                  (r.bracket.widened ? " widened" : ""));
            }
        } else if (depth->parsed()) {
            const auto spec = load_spec(c.spec);
            const Vector theta = theta_or_mean(theta_arg, spec);
            const auto r = estimators::estimate_tukey_mc(spec, theta, epsilon, dirs, trials,
                                                         random::RngStream(c.seed, 0), c.threads);
            t = Table{"Tukey depth for " + spec.name(), {"method", "depth", "stderr"}, {}, {}, {}};
            t.add({std::string("monte-carlo"), r.estimate.value, r.estimate.stderr});
            t.add({std::string("scan-minimum"), r.scan_min, {}});
            if (const auto ex = dist::exact_tukey(spec, theta, epsilon)) t.add({std::string("exact"), *ex, 0.0});
            if (const auto* e = std::get_if<dist::Empirical>(&spec.kind); e && spec.dim() == 2 && epsilon == 0.0)
                t.add({std::string("exact-sweep"), estimators::empirical_tukey_2d(e->measure, theta), 0.0});
        } else if (bnd->parsed()) {
            t = Table{"bounds", {"group", "name", "value", "kind", "source", "note"}, {}, {}, {}};
            std::uint64_t n = 0;
            if (!n_arg.empty()) n = parse_count(n_arg, "--n");
            std::uint64_t d = d_arg;
            std::optional<dist::DistributionSpec> spec;
            if (!c.spec.empty()) {
                spec = load_spec(c.spec);
                if (d == 0) d = spec->dim();
                if (d != spec->dim()) throw invalid_input("--d: does not match the spec dimension");
            }
            if (d == 0) throw invalid_input("bounds: give --d or --spec");
            t.add({std::string("containment"), std::string("N_lower_2d"), static_cast<double>(2 * d),
                   std::string("lower"), std::string("Wendel, symmetric laws"), std::string{}});
            add_report(t, "depth", bounds::nx_depth_bounds(alpha, d));
            if (n > 0) {
                t.add({std::string("wendel"), std::string("p_n_symmetric"), bounds::wendel_exact(n, d),
                       std::string("exact"), std::string("Wendel"), std::string{}});
                if (alpha > 0.0 && alpha < 1.0) add_report(t, "g", bounds::g_bounds(d, n, alpha));
                if (m_arg > 0 && p_arg >= 0.0) add_report(t, "sandwich", bounds::sandwich_bounds(p_arg, m_arg, n, d));
            }
            if (alpha > 0.0 && alpha < 1.0 && delta > 0.0 && delta < 1.0 && epsilon > 0.0 && epsilon < 1.0)
                t.add({std::string("interior"), std::string("sample_size"),
                       static_cast<double>(bounds::interior_sample_size(d, alpha, delta, epsilon)),
                       std::string("upper"), std::string("eps-net union bound"), std::string{}});
            if (spec) {
                random::RngStream ms(c.seed, 0);
                const auto moments = dist::moment_stats(*spec, std::max<std::uint64_t>(trials, 1000), ms);
                add_report(t, "moments", bounds::nx_moment_bounds(d, moments));
                if (n > 0) {
                    bounds::GapInputs gi{moments.rho3, moments.m3, moments.norm_bound, {epsilon > 0.0 ? epsilon : 0.1}};
                    add_report(t, "berry-esseen", bounds::be_gaps(n, d, gi));
                }
            }
        } else if (cub->parsed()) {
            const auto spec = load_spec(c.spec);
            std::optional<Vector> target;
            if (!theta_arg.empty()) target = theta_or_mean(theta_arg, spec);
            random::RngStream stream(c.seed, 0);
            cubature::CubatureResult r;
            if (cub_mode == "alg1") {
                cubature::Algorithm1Config cfg;
                cfg.ell = ell;
                cfg.tol = c.tol;
                r = cubature::run_algorithm1(spec, target, stream, cfg);
            } else {
                cubature::NaiveConfig cfg;
                cfg.tol = c.tol;
                r = cubature::naive_scheme(spec, cub_mode == "a" ? cubature::NaiveMode::a : cubature::NaiveMode::b, target,
                                           stream, cfg);
            }
            std::vector<std::string> cols{"atom", "weight"};
            for (std::size_t k = 0; k < spec.dim(); ++k) cols.push_back("x" + std::to_string(k + 1));
            t = Table{"cubature rule for " + spec.name() + " (" + cub_mode + ")", cols, {}, {}, {}};
            if (r.measure)
                for (std::size_t i = 0; i < r.measure->size(); ++i) {
                    std::vector<Cell> row{std::uint64_t{i}, r.measure->weights()[i]};
                    for (double x : r.measure->support()[i]) row.push_back(x);
                    t.add(std::move(row));
                }
            t.notes.push_back("status " + std::string(cubature::to_string(r.status)) + ", k " + std::to_string(r.k) +
                              ", samples drawn " + std::to_string(r.samples_drawn) + ", iterations " +
                              std::to_string(r.iterations) + ", residual " + format_double(r.residual));
            if (r.status != cubature::Status::success) {
                emit(t, c.format, out, stamp);
                err << "error: cubature budget exhausted\n";
                return exit_budget;
            }
        } else if (inter->parsed()) {
            const auto spec = load_spec(c.spec);
            const random::RngStream stream(c.seed, 0);
            if (!theta_arg.empty()) {
                const Vector theta = theta_or_mean(theta_arg, spec);
                interior::SamplingConfig cfg;
                cfg.threads = c.threads;
                const auto m = interior::kalpha_contains(spec, theta, alpha, stream, cfg);
                t = Table{"K^alpha membership for " + spec.name(), {"alpha", "verdict", "source", "depth", "stderr"},
                          {}, {}, {}};
                t.add({alpha, std::string(interior::to_string(m.verdict)), std::string(interior::to_string(m.source)),
                       m.depth, m.stderr});
            } else {
                interior::InclusionConfig cfg;
                cfg.threads = c.threads;
                cfg.tol = c.tol;
                if (!n_arg.empty()) cfg.n = parse_count(n_arg, "--n");
                const double eps = epsilon > 0.0 ? epsilon : 0.5;
                const auto r = interior::inclusion_experiment(spec, alpha, eps, delta, trials, stream, cfg);
                t = Table{"inclusion of (1-eps) K^alpha in the sample hull for " + spec.name(),
                          {"alpha", "eps", "delta", "n", "theorem_n", "trials", "net_size", "frequency", "stderr",
                           "vacuous"},
                          {}, {}, {}};
                t.add({r.alpha, r.eps, r.delta, r.n, r.theorem_n, r.trials, std::uint64_t{r.net_size},
                       r.success_frequency, r.stderr, r.vacuous});
            }
        } else if (rep->parsed()) {
            so.seed = c.seed;
            so.threads = c.threads;
            so.tol = c.tol;
            if (suite_trials) so.trials = suite_trials;
            if (dmax) so.dmax = dmax;
            if (nmax) so.nmax = nmax;
            for (const auto& s : split(d_list, ',')) so.d.push_back(parse_count(s, "--d"));
            so.epsilon = parse_vector(eps_list, "--epsilon");
            so.alpha = parse_vector(alpha_list, "--alpha");
            t = run_suite(suite, so);
        }

        emit(t, c.format, out, stamp);
        if (!c.out.empty()) {
            std::ofstream f(c.out);
            if (!f) throw invalid_input("cannot write '" + c.out + "'");
            emit(t, c.format, f, stamp);
            std::ofstream mf(c.out + ".manifest.json");
            nlohmann::json manifest = {{"argv", args},     {"seed", c.seed},  {"threads", c.threads},
                                       {"format", c.format}, {"timestamp", stamp}, {"output", c.out}};
            mf << manifest.dump(2) << "\n";
        }
        return exit_ok;
    } catch (const invalid_input& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const budget_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_budget;
    } catch (const geom::convergence_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_budget;
    } catch (const numerical_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_budget;
    }
}

}  // namespace randhull::cli
