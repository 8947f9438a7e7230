#include "wigner/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wigner/experiments.hpp"
#include "wigner/lcd.hpp"
#include "wigner/output.hpp"

namespace wigner {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunFlags {
    Index size = 100;
    Index rows = 0;
    Index trials = 100;
    std::string ensemble = "goe";
    double k0 = 2.0;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: take WIGNERLAB_WORKERS, else 1
    Index bins = 40;
    std::vector<double> t_grid{1.0, 2.0, 3.0};
    std::vector<double> eps_grid{0.05, 0.1, 0.2, 0.5, 1.0};
    std::string mode;
    double lo = 0.1, hi = 1.1;
    Index intervals = 10;
    Index instances = 200;
    bool with_decomposition = false;
    bool with_sigma_min = false;
    std::string out, json_path, svg_path, config_path;
    bool force = false;
};

json flags_to_json(const std::string& subcommand, const RunFlags& f) {
    return json{{"subcommand", subcommand},
                {"size", f.size},
                {"rows", f.rows},
                {"trials", f.trials},
                {"ensemble", f.ensemble},
                {"k0", f.k0},
                {"seed", f.seed},
                {"workers", f.workers},
                {"bins", f.bins},
                {"t_grid", f.t_grid},
                {"eps_grid", f.eps_grid},
                {"mode", f.mode},
                {"lo", f.lo},
                {"hi", f.hi},
                {"intervals", f.intervals},
                {"instances", f.instances},
                {"with_decomposition", f.with_decomposition},
                {"with_sigma_min", f.with_sigma_min}};
}

void overlay_from_json(const json& j, RunFlags& f, CLI::App* sub) {
    auto take = [&](const char* flag, auto& field) {
        std::string key = flag;
        key.erase(0, key.find_first_not_of('-'));
        std::replace(key.begin(), key.end(), '-', '_');
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        bool given_on_cli = opt != nullptr && opt->count() > 0;
        if (!given_on_cli && j.contains(key))
            field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("--size", f.size);
    take("--rows", f.rows);
    take("--trials", f.trials);
    take("--ensemble", f.ensemble);
    take("--k0", f.k0);
    take("--seed", f.seed);
    take("--workers", f.workers);
    take("--bins", f.bins);
    take("--t-grid", f.t_grid);
    take("--eps-grid", f.eps_grid);
    take("--mode", f.mode);
    take("--lo", f.lo);
    take("--hi", f.hi);
    take("--intervals", f.intervals);
    take("--instances", f.instances);
    take("--with-decomposition", f.with_decomposition);
    take("--with-sigma-min", f.with_sigma_min);
}

// Resolves the config-file overlay: explicit flag > config file > default.
void apply_config_file(RunFlags& f, CLI::App* sub) {
    if (f.config_path.empty()) return;
    std::ifstream in(f.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + f.config_path);
    json j = json::parse(in);
    if (j.contains("cli")) j = j.at("cli");  // accept a full summary file
    overlay_from_json(j, f, sub);
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("WIGNERLAB_WORKERS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 1;
}

std::ofstream open_output(const std::string& path, bool force) {
    if (!force && fs::exists(path))
        throw CLI::ValidationError("output", path + " exists (use --force to overwrite)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("output", "cannot write " + path);
    return out;
}

ExperimentConfig make_config(const RunFlags& f, bool symmetric) {
    ExperimentConfig config;
    config.ensemble.kind = ensemble_kind_from_string(f.ensemble);
    config.ensemble.symmetric = symmetric;
    config.ensemble.dimension = f.size;
    config.ensemble.subgaussian_param = f.k0;
    config.n = f.rows;
    config.trials = f.trials;
    config.master_seed = f.seed;
    config.t_grid = f.t_grid;
    config.workers = resolve_workers(f.workers);
    config.histogram_bins = f.bins;
    config.with_decomposition = f.with_decomposition;
    config.with_sigma_min = f.with_sigma_min;
    return config;
}

void emit_json(const json& summary, const RunFlags& f) {
    if (f.json_path.empty()) return;
    auto out = open_output(f.json_path, f.force);
    out << summary.dump(2) << '\n';
}

Vector parse_vector(const std::vector<double>& values, const char* what) {
    if (values.empty()) throw CLI::ValidationError(what, "empty vector");
    Vector x(static_cast<Index>(values.size()));
    for (Index i = 0; i < x.size(); ++i) x(i) = values[static_cast<std::size_t>(i)];
    return x;
}

void add_common_options(CLI::App* sub, RunFlags& f, bool needs_rows) {
    sub->add_option("--size", f.size, "matrix size N");
    if (needs_rows) sub->add_option("--rows", f.rows, "subspace rows n");
    sub->add_option("--trials", f.trials, "number of Monte-Carlo trials");
    sub->add_option("--ensemble", f.ensemble,
                    "standard-gaussian | rademacher | goe | custom-subgaussian");
    sub->add_option("--k0", f.k0, "subgaussian truncation parameter");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--workers", f.workers, "worker threads (default $WIGNERLAB_WORKERS or 1)");
    sub->add_option("--out", f.out, "CSV output path");
    sub->add_option("--json", f.json_path, "JSON summary path");
    sub->add_option("--config", f.config_path, "JSON config (flags override it)");
    sub->add_flag("--force", f.force, "overwrite existing output files");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Distance concentration and least-singular-value experiments for Wigner"
                 " matrices, plus exact identity checks and LCD/small-ball queries"};
    app.require_subcommand(1);
    int exit_code = 0;

    // dist-hist
    auto dist_flags = std::make_shared<RunFlags>();
    dist_flags->size = 1000;
    dist_flags->rows = 900;
    dist_flags->trials = 1000;
    CLI::App* dist = app.add_subcommand("dist-hist",
                                        "histogram of (dist^2 - m)/sqrt(m) for the symmetric model");
    add_common_options(dist, *dist_flags, true);
    dist->add_option("--bins", dist_flags->bins, "histogram bins");
    dist->add_option("--svg", dist_flags->svg_path, "SVG histogram path");
    dist->add_flag("--with-decomposition", dist_flags->with_decomposition,
                   "record the distance split per trial");
    dist->add_flag("--with-sigma-min", dist_flags->with_sigma_min,
                   "record sigma_min(B) per trial");
    dist->callback([&, dist_flags] {
        apply_config_file(*dist_flags, dist);
        ExperimentConfig config = make_config(*dist_flags, true);
        DistanceHistResult result = run_distance_experiment(config);
        if (!dist_flags->out.empty()) {
            auto os = open_output(dist_flags->out, dist_flags->force);
            write_distance_csv(result, os);
        }
        if (!dist_flags->svg_path.empty()) {
            auto os = open_output(dist_flags->svg_path, dist_flags->force);
            std::ostringstream title;
            title << "(dist^2 - m)/sqrt(m), " << to_string(config.ensemble.kind) << ", N="
                  << config.size() << ", n=" << config.n << ", trials=" << config.trials;
            write_svg_histogram(result.histogram, title.str(), "(dist^2 - m)/sqrt(m)", os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("dist-hist", *dist_flags);
        emit_json(summary, *dist_flags);
        std::cout << "dist-hist: model=" << to_string(config.ensemble.kind)
                  << " mean=" << format_double(result.mean_normalized)
                  << " var=" << format_double(result.var_normalized)
                  << " degenerate=" << result.degenerate_count << "/" << config.trials << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // dist-tail (independent model)
    auto tail_flags = std::make_shared<RunFlags>();
    tail_flags->size = 400;
    tail_flags->rows = 360;
    tail_flags->trials = 2000;
    tail_flags->ensemble = "standard-gaussian";
    CLI::App* tail = app.add_subcommand("dist-tail",
                                        "P(|dist - sqrt(m)| >= t) for the independent iid model");
    add_common_options(tail, *tail_flags, true);
    tail->add_option("--t-grid", tail_flags->t_grid, "tail thresholds");
    tail->callback([&, tail_flags] {
        apply_config_file(*tail_flags, tail);
        ExperimentConfig config = make_config(*tail_flags, false);
        IndependentTailResult result = run_independent_distance_experiment(config);
        if (!tail_flags->out.empty()) {
            auto os = open_output(tail_flags->out, tail_flags->force);
            write_scalar_csv(result.records, "dist", "deviation", os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("dist-tail", *tail_flags);
        emit_json(summary, *tail_flags);
        std::cout << "dist-tail: fitted K=" << format_double(result.curve.fitted_rate)
                  << " degenerate=" << result.degenerate_count << "/" << config.trials << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // sv-tail
    auto sv_flags = std::make_shared<RunFlags>();
    sv_flags->size = 200;
    sv_flags->rows = 150;
    sv_flags->trials = 300;
    sv_flags->ensemble = "standard-gaussian";
    sv_flags->mode = "rect";
    CLI::App* sv = app.add_subcommand("sv-tail", "least-singular-value lower tail");
    add_common_options(sv, *sv_flags, true);
    sv->add_option("--mode", sv_flags->mode, "square | rect");
    sv->add_option("--eps-grid", sv_flags->eps_grid, "tail thresholds (units of the scale)");
    sv->callback([&, sv_flags] {
        apply_config_file(*sv_flags, sv);
        SvTailMode mode;
        if (sv_flags->mode == "square")
            mode = SvTailMode::square;
        else if (sv_flags->mode == "rect")
            mode = SvTailMode::rectangular;
        else
            throw CLI::ValidationError("--mode", "must be square or rect");
        ExperimentConfig config = make_config(*sv_flags, true);
        SvTailResult result = run_sv_tail_experiment(config, mode, sv_flags->eps_grid);
        if (!sv_flags->out.empty()) {
            auto os = open_output(sv_flags->out, sv_flags->force);
            write_scalar_csv(result.records, "sigma_min", "scaled", os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("sv-tail", *sv_flags);
        emit_json(summary, *sv_flags);
        std::cout << "sv-tail(" << sv_flags->mode
                  << "): median scaled=" << format_double(result.median_scaled)
                  << " fitted exponent=" << format_double(result.curve.fitted_rate) << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // hw-check
    auto hw_flags = std::make_shared<RunFlags>();
    hw_flags->size = 100;
    hw_flags->trials = 10000;
    hw_flags->ensemble = "standard-gaussian";
    hw_flags->mode = "identity";
    CLI::App* hw = app.add_subcommand("hw-check", "quadratic-form concentration tails");
    add_common_options(hw, *hw_flags, false);
    hw->add_option("--matrix", hw_flags->mode, "identity | projection | spd | zero");
    hw->add_option("--t-grid", hw_flags->t_grid, "tail thresholds");
    hw->callback([&, hw_flags] {
        apply_config_file(*hw_flags, hw);
        HwMatrixKind kind;
        if (hw_flags->mode == "identity")
            kind = HwMatrixKind::identity;
        else if (hw_flags->mode == "projection")
            kind = HwMatrixKind::projection;
        else if (hw_flags->mode == "spd")
            kind = HwMatrixKind::spd;
        else if (hw_flags->mode == "zero")
            kind = HwMatrixKind::zero;
        else
            throw CLI::ValidationError("--matrix", "must be identity, projection, spd, or zero");
        ExperimentConfig config = make_config(*hw_flags, false);
        HansonWrightResult result = run_hanson_wright_check(config, kind);
        if (!hw_flags->out.empty()) {
            auto os = open_output(hw_flags->out, hw_flags->force);
            write_hanson_wright_csv(result, os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("hw-check", *hw_flags);
        emit_json(summary, *hw_flags);
        std::cout << "hw-check(" << hw_flags->mode
                  << "): fitted C quad=" << format_double(result.quad_curve.fitted_rate)
                  << " norm=" << format_double(result.norm_curve.fitted_rate) << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // deloc
    auto deloc_flags = std::make_shared<RunFlags>();
    deloc_flags->size = 400;
    deloc_flags->trials = 200;
    deloc_flags->ensemble = "standard-gaussian";
    CLI::App* deloc = app.add_subcommand("deloc", "normal-vector delocalization statistic");
    add_common_options(deloc, *deloc_flags, false);
    deloc->callback([&, deloc_flags] {
        apply_config_file(*deloc_flags, deloc);
        ExperimentConfig config = make_config(*deloc_flags, true);
        DelocalizationResult result = run_delocalization_experiment(config);
        if (!deloc_flags->out.empty()) {
            auto os = open_output(deloc_flags->out, deloc_flags->force);
            write_scalar_csv(result.records, "linf", "statistic", os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("deloc", *deloc_flags);
        emit_json(summary, *deloc_flags);
        std::cout << "deloc: max=" << format_double(result.max_statistic)
                  << " median=" << format_double(result.median_statistic)
                  << " degenerate=" << result.degenerate_count << "/" << config.trials << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // inv-entry
    auto inv_flags = std::make_shared<RunFlags>();
    inv_flags->size = 400;
    inv_flags->trials = 200;
    inv_flags->ensemble = "standard-gaussian";
    CLI::App* inv = app.add_subcommand("inv-entry", "inverse-entry ratio statistic");
    add_common_options(inv, *inv_flags, false);
    inv->callback([&, inv_flags] {
        apply_config_file(*inv_flags, inv);
        ExperimentConfig config = make_config(*inv_flags, true);
        InverseEntryResult result = run_inverse_entry_experiment(config);
        if (!inv_flags->out.empty()) {
            auto os = open_output(inv_flags->out, inv_flags->force);
            write_scalar_csv(result.records, "ratio", "normalized", os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("inv-entry", *inv_flags);
        emit_json(summary, *inv_flags);
        std::cout << "inv-entry: max ratio=" << format_double(result.max_ratio)
                  << " median scaled=" << format_double(result.median_scaled)
                  << " degenerate=" << result.degenerate_count << "/" << config.trials << '\n';
        exit_code = exit_code_for_degeneracy(result.degenerate_count, config.trials);
    });

    // identities
    auto id_flags = std::make_shared<RunFlags>();
    CLI::App* ident = app.add_subcommand("identities", "machine-precision identity suite");
    ident->add_option("--instances", id_flags->instances, "number of seeded instances");
    ident->add_option("--seed", id_flags->seed, "master seed");
    ident->add_option("--workers", id_flags->workers, "worker threads");
    ident->add_option("--out", id_flags->out, "CSV output path");
    ident->add_option("--json", id_flags->json_path, "JSON summary path");
    ident->add_flag("--force", id_flags->force, "overwrite existing output files");
    ident->callback([&, id_flags] {
        IdentitySuiteConfig config;
        config.instances = id_flags->instances;
        config.master_seed = id_flags->seed;
        config.workers = resolve_workers(id_flags->workers);
        IdentitySuiteResult result = run_identity_suite(config);
        if (!id_flags->out.empty()) {
            auto os = open_output(id_flags->out, id_flags->force);
            write_identity_csv(result, os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("identities", *id_flags);
        emit_json(summary, *id_flags);
        if (result.vacuous)
            std::cout << "identities: vacuous pass (no instances requested)\n";
        else
            std::cout << "identities: " << result.violations << " violations over "
                      << result.config.instances << " instances (skipped degenerate: "
                      << result.degenerate_skips << ")\n";
        if (result.violations > 0) {
            std::cerr << "identities: first offending instance "
                      << result.first_offending_instance << '\n';
            exit_code = 2;
        }
    });

    // spectral-count
    auto spec_flags = std::make_shared<RunFlags>();
    spec_flags->size = 1000;
    spec_flags->trials = 20;
    spec_flags->ensemble = "standard-gaussian";
    CLI::App* spectral = app.add_subcommand("spectral-count",
                                            "singular-value interval counts vs prediction");
    add_common_options(spectral, *spec_flags, false);
    spectral->add_option("--lo", spec_flags->lo, "partition start (normalized axis)");
    spectral->add_option("--hi", spec_flags->hi, "partition end");
    spectral->add_option("--intervals", spec_flags->intervals, "number of intervals");
    spectral->callback([&, spec_flags] {
        apply_config_file(*spec_flags, spectral);
        ExperimentConfig config = make_config(*spec_flags, true);
        IntervalCountResult result =
            run_interval_count_experiment(config, spec_flags->lo, spec_flags->hi,
                                          spec_flags->intervals);
        if (!spec_flags->out.empty()) {
            auto os = open_output(spec_flags->out, spec_flags->force);
            write_interval_csv(result, os);
        }
        json summary = summary_json(result);
        summary["cli"] = flags_to_json("spectral-count", *spec_flags);
        emit_json(summary, *spec_flags);
        double mean_within = 0.0;
        for (const auto& trial : result.trials) mean_within += trial.within_fraction;
        if (!result.trials.empty()) mean_within /= static_cast<double>(result.trials.size());
        std::cout << "spectral-count: mean within-10% fraction="
                  << format_double(mean_within) << '\n';
    });

    // lcd
    auto lcd_flags = std::make_shared<RunFlags>();
    std::vector<double> lcd_vector;
    double lcd_alpha = 1.0, lcd_gamma = 0.5, lcd_bound = 0.0, lcd_step = 0.0;
    CLI::App* lcd_cmd = app.add_subcommand("lcd", "essential least common denominator of a vector");
    lcd_cmd->add_option("--vector", lcd_vector, "coordinates")->required();
    lcd_cmd->add_option("--alpha", lcd_alpha, "accuracy cap alpha");
    lcd_cmd->add_option("--gamma", lcd_gamma, "relative accuracy gamma in (0,1)");
    lcd_cmd->add_option("--bound", lcd_bound, "search bound (default 10 sqrt(N))");
    lcd_cmd->add_option("--step", lcd_step, "grid step (default 1e-5 * bound)");
    lcd_cmd->add_option("--json", lcd_flags->json_path, "JSON output path");
    lcd_cmd->add_flag("--force", lcd_flags->force, "overwrite existing output files");
    lcd_cmd->callback([&, lcd_flags] {
        Vector x = parse_vector(lcd_vector, "--vector");
        double bound = lcd_bound > 0 ? lcd_bound
                                     : 10.0 * std::sqrt(static_cast<double>(x.size()));
        LcdResult result = lcd(x, LcdParams{lcd_alpha, lcd_gamma}, bound, lcd_step);
        json j{{"value", result.found ? json(result.value) : json("not-found-below-bound")},
               {"found", result.found},
               {"witness_theta", result.witness_theta},
               {"search_bound", result.search_bound},
               {"resolution", result.resolution},
               {"alpha", lcd_alpha},
               {"gamma", lcd_gamma}};
        if (!lcd_flags->json_path.empty()) {
            auto os = open_output(lcd_flags->json_path, lcd_flags->force);
            os << j.dump(2) << '\n';
        }
        std::cout << j.dump(2) << '\n';
    });

    // smallball
    auto sb_flags = std::make_shared<RunFlags>();
    std::vector<double> sb_vector;
    double sb_radius = 0.1, sb_alpha = 1.0, sb_gamma = 0.5, sb_c0 = 1.0;
    std::string sb_method = "exact";
    std::string sb_dist = "rademacher";
    Index sb_trials = 100000;
    std::uint64_t sb_seed = 0;
    bool sb_with_bound = false;
    CLI::App* sb = app.add_subcommand("smallball", "Levy concentration of sum a_i x_i");
    sb->add_option("--vector", sb_vector, "weights")->required();
    sb->add_option("--radius", sb_radius, "ball radius");
    sb->add_option("--method", sb_method, "exact | mc");
    sb->add_option("--distribution", sb_dist, "scalar distribution for the mc method");
    sb->add_option("--trials", sb_trials, "mc sample count");
    sb->add_option("--seed", sb_seed, "mc seed");
    sb->add_flag("--with-bound", sb_with_bound,
                 "attach the structure bound C0 (radius/gamma + exp(-2 alpha^2))");
    sb->add_option("--alpha", sb_alpha, "LCD alpha (bound)");
    sb->add_option("--gamma", sb_gamma, "LCD gamma (bound)");
    sb->add_option("--c0-const", sb_c0, "bound constant C0");
    sb->add_option("--json", sb_flags->json_path, "JSON output path");
    sb->add_flag("--force", sb_flags->force, "overwrite existing output files");
    sb->callback([&, sb_flags] {
        Vector x = parse_vector(sb_vector, "--vector");
        SmallBallMethod method;
        if (sb_method == "exact")
            method = SmallBallMethod::exact_enumeration;
        else if (sb_method == "mc")
            method = SmallBallMethod::monte_carlo;
        else
            throw CLI::ValidationError("--method", "must be exact or mc");
        SmallBallEstimate estimate = levy_concentration(
            x, ensemble_kind_from_string(sb_dist), sb_radius, method, sb_trials, sb_seed);
        if (sb_with_bound)
            estimate.theory_bound =
                small_ball_bound_1d(sb_radius, LcdParams{sb_alpha, sb_gamma}, sb_c0);
        json j{{"radius", estimate.radius},
               {"estimate", estimate.estimate},
               {"method", sb_method},
               {"std_error", estimate.std_error},
               {"theory_bound", estimate.theory_bound}};
        if (!sb_flags->json_path.empty()) {
            auto os = open_output(sb_flags->json_path, sb_flags->force);
            os << j.dump(2) << '\n';
        }
        std::cout << j.dump(2) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.push_back("wignerlab");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& s : full) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wigner
