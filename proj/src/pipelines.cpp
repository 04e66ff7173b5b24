#include "suborbit/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "suborbit/errors.hpp"
#include "suborbit/shifts.hpp"

namespace suborbit {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ------------------------------------------------------- config -> objects ----

WeightedLpSpace space_from_config(const KeyValueConfig& cfg) {
    const double p = cfg.get_double("space.p", 2.0);
    const std::string kind = cfg.get_string("space.weight", "constant");

    WeightSequence w = WeightSequence::constant(1.0);
    if (kind == "constant") {
        w = WeightSequence::constant(cfg.get_double("space.c", 1.0));
    } else if (kind == "geometric") {
        w = WeightSequence::geometric(cfg.require_double("space.ratio"));
    } else if (kind == "power") {
        w = WeightSequence::power(cfg.require_double("space.s"));
    } else if (kind == "table") {
        std::vector<double> prefix;
        std::istringstream in(cfg.require_string("space.prefix"));
        std::string tok;
        while (std::getline(in, tok, ',')) prefix.push_back(std::stod(tok));
        w = WeightSequence::table(std::move(prefix), cfg.require_double("space.tail"));
    } else {
        throw InvalidInputError("unknown weight kind: " + kind);
    }

    const std::string mode = cfg.get_string("space.basis", "scaled");
    if (mode != "scaled" && mode != "canonical") {
        throw InvalidInputError("basis mode must be 'scaled' or 'canonical'");
    }
    return {p, std::move(w), mode == "scaled" ? BasisMode::Scaled : BasisMode::Canonical};
}

std::vector<SeqVector> load_family_csv(const std::string& path, std::int64_t K) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open family file: " + path);
    std::vector<SeqVector> family(static_cast<std::size_t>(K));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::int64_t k, index;
        double value;
        if (!(row >> k >> index >> value)) {
            throw InvalidInputError("family file row must be 'k,index,value': " + line);
        }
        if (k < 1 || k > K) throw InvalidInputError("family row index k out of range");
        family[static_cast<std::size_t>(k - 1)].set(index, value);
    }
    return family;
}

std::vector<SeqVector> family_from_config(const KeyValueConfig& cfg,
                                          const WeightedLpSpace& space, std::int64_t K) {
    (void)space;
    const std::string gen = cfg.get_string("family.generator", "canonical");
    std::vector<SeqVector> family;
    if (gen == "canonical") {
        for (std::int64_t k = 1; k <= K; ++k) family.push_back(SeqVector::unit(k, 1.0));
    } else if (gen == "localized_envelope") {
        const double C = cfg.get_double("family.C", 1.0);
        const double beta = cfg.require_double("family.beta");
        const double trunc = cfg.get_double("family.truncation", 1e-16);
        if (!(beta > 0.0) || !(C > 0.0) || !(trunc > 0.0)) {
            throw InvalidInputError("localized envelope needs C > 0, beta > 0, truncation > 0");
        }
        const auto width = static_cast<std::int64_t>(std::floor(std::log(C / trunc) / beta));
        for (std::int64_t k = 1; k <= K; ++k) {
            SeqVector f;
            for (std::int64_t j = std::max<std::int64_t>(1, k - width); j <= k + width; ++j) {
                f.set(j, C * std::exp(-beta * static_cast<double>(std::llabs(j - k))));
            }
            family.push_back(std::move(f));
        }
    } else if (gen == "file") {
        family = load_family_csv(cfg.require_string("family.path"), K);
    } else {
        throw InvalidInputError("unknown family generator: " + gen);
    }
    return family;
}

ErrorBudget budget_from_config(const KeyValueConfig& cfg, const WeightedLpSpace& space) {
    const double epsilon = cfg.get_double("run.epsilon", 1.0);
    const std::string variant = cfg.get_string("run.variant", "i");
    if (variant == "i") return make_budget_simple(epsilon);
    if (variant == "ii") return make_budget_weighted(epsilon, space.p(), space.weights());
    if (variant == "iii") return make_budget_space_norm(epsilon, space);
    throw InvalidInputError("budget variant must be one of i, ii, iii");
}

// ----------------------------------------------------------- CSV helpers ----

std::vector<std::string> schedule_csv_lines(const PowerSchedule& schedule) {
    std::vector<std::string> lines{"k,alpha_k,binding_constraint"};
    for (std::int64_t k = 1; k <= schedule.size(); ++k) {
        lines.push_back(std::to_string(k) + "," + std::to_string(schedule.alpha(k)) + ","
                        + schedule.binding[static_cast<std::size_t>(k - 1)]);
    }
    return lines;
}

std::vector<std::string> error_csv_lines(const ErrorReport& report) {
    std::vector<std::string> lines{"k,alpha_k,actual_error,bound,allowance,pass"};
    for (const auto& row : report.rows) {
        lines.push_back(std::to_string(row.k) + "," + std::to_string(row.alpha) + ","
                        + format_float(row.actual) + "," + format_float(row.bound) + ","
                        + format_float(row.allowance) + "," + (row.pass ? "1" : "0"));
    }
    return lines;
}

std::vector<std::string> error_csv_lines(const FunctionReport& report) {
    std::vector<std::string> lines{"k,alpha_k,actual_error,bound,allowance,quad_allowance,pass"};
    for (const auto& row : report.rows) {
        lines.push_back(std::to_string(row.k) + "," + std::to_string(row.alpha) + ","
                        + format_float(row.actual) + "," + format_float(row.bound) + ","
                        + format_float(row.allowance) + "," + format_float(row.quad_allowance)
                        + "," + (row.pass ? "1" : "0"));
    }
    return lines;
}

// -------------------------------------------------------------- pipelines ----

namespace {

struct SequenceRun {
    PowerSchedule schedule;
    ErrorReport report;
    ShiftOperators ops;
    ErrorBudget budget;
    std::int64_t trunc = 0;
    double truncation_tail_bound = 0.0;
};

std::vector<double> family_norms(const WeightedLpSpace& space, const std::vector<SeqVector>& family) {
    std::vector<double> norms;
    norms.reserve(family.size());
    for (const auto& f : family) norms.push_back(norm(space, f));
    return norms;
}

std::vector<std::int64_t> family_supports(const std::vector<SeqVector>& family) {
    std::vector<std::int64_t> supports;
    supports.reserve(family.size());
    for (const auto& f : family) supports.push_back(std::max<std::int64_t>(1, f.max_index()));
    return supports;
}

ShiftOperators operators_from_config(const KeyValueConfig& cfg, const WeightedLpSpace& space) {
    if (const auto lambda = cfg.optional_double("run.lambda")) {
        return {space, *lambda};
    }
    return ShiftOperators::with_default_lambda(space);
}

std::int64_t trunc_index(const KeyValueConfig& cfg, const RunOptions& options, std::int64_t K) {
    std::int64_t n = cfg.get_int("run.N", K);
    if (options.trunc) n = *options.trunc;
    if (n < 0 || n > K) throw InvalidInputError("truncation index must lie in [0, K]");
    return n;
}

SequenceRun run_sequence_common(const KeyValueConfig& cfg, const RunOptions& options,
                                const WeightedLpSpace& space, bool localized) {
    const std::int64_t K = cfg.require_int("family.K");
    if (K < 1) throw InvalidInputError("family size K must be >= 1");
    auto family = family_from_config(cfg, space, K);
    auto budget = budget_from_config(cfg, space);
    ShiftOperators ops = operators_from_config(cfg, space);
    const auto norms = family_norms(space, family);

    PowerSchedule schedule;
    if (localized) {
        LocalizedParams params;
        params.C = cfg.get_double("localized.C", cfg.get_double("family.C", 1.0));
        params.beta = cfg.has("localized.beta") ? cfg.require_double("localized.beta")
                                                : cfg.require_double("family.beta");
        params.lambda = ops.lambda();
        params.norm_S = ops.norm_contraction();
        params.B = cfg.get_double("localized.B", 1.0);
        params.include_zeroth_term = cfg.get_bool("localized.include_zeroth_term", true);
        // X_d = plain l^p: || {e^{-beta j}} ||_p in closed form
        const double x = std::exp(-params.beta * space.p());
        params.xd_norm_exp_beta =
            std::pow(WeightSequence::constant(1.0).weighted_power_sum(x, 1), 1.0 / space.p());
        schedule = schedule_localized(params, norms, budget, K);
    } else {
        schedule = schedule_finite({family_supports(family), norms}, ops.norm_contraction(),
                                   budget, K);
    }

    const std::int64_t N = trunc_index(cfg, options, K);
    const auto orbit = build_orbit(ops, schedule, family, N);
    auto report = verify_bounds(orbit, budget, space, options.jobs);
    return {std::move(schedule), std::move(report), std::move(ops), budget,
            N, orbit.truncation_tail_bound};
}

void append_closeness(std::ostringstream& out, const KeyValueConfig& cfg,
                      const WeightedLpSpace& space, const SequenceRun& run, bool* all_pass) {
    const std::string variant = cfg.get_string("run.variant", "i");
    ClosenessCheck close;
    if (variant == "i") {
        close = eps_close_simple(run.report, run.budget, space.p());
    } else if (variant == "ii") {
        close = eps_close_weighted(run.report, run.budget, space.p(), space.weights());
    } else {
        close = eps_close_space_norm(run.report, run.budget, space);
    }
    out << "eps_close_variant = " << variant << "\n"
        << "eps_close_lhs = " << format_float(close.lhs) << "\n"
        << "eps_close_rhs = " << format_float(close.rhs) << "\n"
        << "eps_close_pass = " << (close.pass ? "true" : "false") << "\n";
    *all_pass = *all_pass && close.pass;
}

PipelineResult finish_sequence(const KeyValueConfig& cfg, const RunOptions& options,
                               const WeightedLpSpace& space, const SequenceRun& run) {
    PipelineResult result;
    bool all_pass = true;
    for (const auto& row : run.report.rows) all_pass = all_pass && row.pass;

    std::ostringstream out;
    out << "lambda = " << format_float(run.ops.lambda()) << "\n"
        << "norm_L = " << format_float(run.ops.norm_left()) << "\n"
        << "norm_R = " << format_float(run.ops.norm_right()) << "\n"
        << "norm_S = " << format_float(run.ops.norm_contraction()) << "\n"
        << "budget_M = " << format_float(run.budget.normalization) << "\n"
        << "K = " << run.report.rows.size() << "\n"
        << "trunc_N = " << run.trunc << "\n"
        << "truncation_tail_bound = " << format_float(run.truncation_tail_bound) << "\n"
        << "max_error_ratio = " << format_float(run.report.max_ratio) << "\n";
    append_closeness(out, cfg, space, run, &all_pass);

    const auto sample = sample_priesz_bounds(space, 64, 16, options.seed);
    out << "priesz_sampled_A_upper = " << format_float(sample.lower_bound_upper_estimate) << "\n"
        << "priesz_sampled_B_lower = " << format_float(sample.upper_bound_lower_estimate) << "\n"
        << "all_pass = " << (all_pass ? "true" : "false") << "\n";

    result.all_pass = all_pass;
    result.summary = out.str();
    result.schedule_csv = schedule_csv_lines(run.schedule);
    result.errors_csv = error_csv_lines(run.report);
    return result;
}

ModerateWeight grid_weight_from_config(const KeyValueConfig& cfg) {
    const std::string kind = cfg.get_string("function.weight", "constant");
    if (kind == "constant") return ModerateWeight::constant(cfg.get_double("function.c", 1.0));
    if (kind == "exponential") return ModerateWeight::exponential(cfg.require_double("function.gamma"));
    if (kind == "polynomial") return ModerateWeight::polynomial(cfg.require_double("function.s"));
    throw InvalidInputError("unknown grid weight kind: " + kind);
}

GridFunction grid_generator_from_config(const KeyValueConfig& cfg) {
    const auto q = cfg.get_int("function.q", 64);
    const double L = cfg.get_double("function.L", 40.0);
    const double p = cfg.get_double("function.p", 1.0);
    const ModerateWeight w = grid_weight_from_config(cfg);
    const std::string gen = cfg.get_string("function.generator", "exp_decay");
    if (gen == "exp_decay") {
        return make_exponential(q, L, p, w, cfg.get_double("function.rate", 1.0));
    }
    if (gen == "char_interval") {
        return make_characteristic(q, L, p, w, cfg.get_double("function.lo", 0.0),
                                   cfg.get_double("function.hi", 1.0));
    }
    if (gen == "gaussian_trunc") {
        return make_gaussian(q, L, p, w, cfg.get_double("function.center", 0.0),
                             cfg.get_double("function.sigma", 1.0));
    }
    if (gen == "file") {
        return load_grid_csv(cfg.require_string("function.path"), p, w);
    }
    throw InvalidInputError("unknown grid generator: " + gen);
}

PipelineResult run_grid_pipeline(const KeyValueConfig& cfg, const RunOptions& options,
                                 bool with_modulations) {
    const GridFunction g = grid_generator_from_config(cfg);
    const double d0 = cfg.get_double("function.d0", 1.0);
    const double margin = cfg.get_double("function.margin", 10.0);
    const TailFit fit = fit_tail_certificate(g, d0, margin);
    if (fit.zero_tail) {
        throw PreconditionError("generator has no tail beyond d0; nothing to certify");
    }

    const double a = cfg.get_double("function.a", 1.0);
    const double b = cfg.get_double("function.b", 1.0);
    const int M_max = with_modulations ? static_cast<int>(cfg.get_int("function.M_max", 2)) : 0;
    const auto K = cfg.get_int("function.K", 10);
    const auto n_max = cfg.get_int("function.n_max", std::max<std::int64_t>(K, 1));

    double mu = cfg.get_double("function.mu", 0.0);
    if (mu <= 0.0) mu = fit.mu;

    auto members = gabor_half_system(g, a, b, M_max, static_cast<int>(n_max), fit.C, mu, d0);
    if (static_cast<std::int64_t>(members.size()) < K) {
        throw InvalidInputError("snake enumeration yields fewer than K members; "
                                "increase M_max or n_max");
    }
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(K), members.end());

    std::vector<GridFunction> family;
    std::vector<DecayCertificate> certs;
    for (auto& m : members) {
        family.push_back(std::move(m.f));
        certs.push_back(m.cert);
    }

    const double t1b = g.weight().t1_bound(g.p());
    const double lambda = cfg.has("run.lambda") ? cfg.require_double("run.lambda") : 1.5 * t1b;
    const ErrorBudget budget = make_budget_simple(cfg.get_double("run.epsilon", 1.0));

    const FunctionReport report =
        run_function_pipeline(family, certs, lambda, mu, budget, options.jobs);

    PipelineResult result;
    bool all_pass = true;
    double max_quad = 0.0;
    for (const auto& row : report.rows) {
        all_pass = all_pass && row.pass;
        max_quad = std::max(max_quad, row.quad_allowance);
    }

    std::ostringstream out;
    out << "lambda = " << format_float(report.lambda) << "\n"
        << "mu = " << format_float(report.mu) << "\n"
        << "fitted_mu = " << format_float(fit.mu) << "\n"
        << "certified_C = " << format_float(fit.C) << "\n"
        << "norm_S_bound = " << format_float(report.norm_S_bound) << "\n"
        << "budget_M = " << format_float(budget.normalization) << "\n"
        << "K = " << report.rows.size() << "\n"
        << "max_error_ratio = " << format_float(report.max_ratio) << "\n"
        << "max_quad_allowance = " << format_float(max_quad) << "\n"
        << "all_pass = " << (all_pass ? "true" : "false") << "\n";

    result.all_pass = all_pass;
    result.summary = out.str();
    result.schedule_csv = schedule_csv_lines(report.schedule);
    result.errors_csv = error_csv_lines(report);
    return result;
}

PipelineResult run_decomposition_pipeline(const KeyValueConfig& cfg, const RunOptions& options) {
    const auto D = cfg.get_int("decomposition.D", 20);
    const double eps = cfg.get_double("decomposition.epsilon_close", 0.5);
    const double A = cfg.get_double("decomposition.A", 1.0);
    const double B = cfg.get_double("decomposition.B", 1.0);
    if (!(eps > 0.0) || !(eps < 1.0 / B)) {
        throw PreconditionError("closeness epsilon must satisfy 0 < epsilon < 1/B");
    }

    WeightedLpSpace space(2.0, WeightSequence::constant(1.0), BasisMode::Canonical);
    ShiftOperators ops = operators_from_config(cfg, space);

    std::vector<SeqVector> family;
    for (std::int64_t k = 1; k <= D; ++k) family.push_back(SeqVector::unit(k, 1.0));
    const ErrorBudget budget = make_budget_simple(eps);
    const auto schedule = schedule_finite({family_supports(family), family_norms(space, family)},
                                          ops.norm_contraction(), budget, D);
    const auto orbit = build_orbit(ops, schedule, family);
    const auto report = verify_bounds(orbit, budget, space, options.jobs);

    std::vector<double> errors;
    for (const auto& row : report.rows) errors.push_back(row.actual);
    const bool close = check_closeness(errors, space.p(), eps, B);

    AtomicSystem perturbed;
    perturbed.dimension = D;
    perturbed.p = 2.0;
    perturbed.A = A;
    perturbed.B = B;
    for (std::int64_t k = 1; k <= D; ++k) {
        SeqVector g;
        for (const auto& [i, c] : evaluate_suborbit(orbit, k).coefficients()) {
            if (i <= D) g.set(i, c);
        }
        perturbed.vectors.push_back(std::move(g));
    }
    const auto envelope = perturbed_bounds(A, B, eps);
    const auto measured = frame_bounds_p2(perturbed);
    const bool inside = measured.lower >= envelope.first * (1.0 - 1e-12)
                        && measured.upper <= envelope.second * (1.0 + 1e-12);
    const bool complete = is_complete_p2(perturbed);

    bool all_pass = close && inside && complete;
    for (const auto& row : report.rows) all_pass = all_pass && row.pass;

    std::ostringstream out;
    out << "dimension = " << D << "\n"
        << "epsilon_close = " << format_float(eps) << "\n"
        << "lambda = " << format_float(ops.lambda()) << "\n"
        << "closeness_pass = " << (close ? "true" : "false") << "\n"
        << "envelope_lower = " << format_float(envelope.first) << "\n"
        << "envelope_upper = " << format_float(envelope.second) << "\n"
        << "measured_lower = " << format_float(measured.lower) << "\n"
        << "measured_upper = " << format_float(measured.upper) << "\n"
        << "bounds_inside_envelope = " << (inside ? "true" : "false") << "\n"
        << "complete = " << (complete ? "true" : "false") << "\n"
        << "all_pass = " << (all_pass ? "true" : "false") << "\n";

    PipelineResult result;
    result.all_pass = all_pass;
    result.summary = out.str();
    result.schedule_csv = schedule_csv_lines(schedule);
    result.errors_csv = error_csv_lines(report);
    return result;
}

} // namespace

PipelineResult run_pipeline(const std::string& pipeline, const KeyValueConfig& cfg,
                            const RunOptions& options) {
    if (pipeline == "finite" || pipeline == "localized") {
        const WeightedLpSpace space = space_from_config(cfg);
        const SequenceRun run = run_sequence_common(cfg, options, space, pipeline == "localized");
        return finish_sequence(cfg, options, space, run);
    }
    if (pipeline == "function") return run_grid_pipeline(cfg, options, false);
    if (pipeline == "gabor") return run_grid_pipeline(cfg, options, true);
    if (pipeline == "decomposition") return run_decomposition_pipeline(cfg, options);
    throw InvalidInputError("unknown pipeline: " + pipeline);
}

int run_pipeline_to_files(const std::string& pipeline, const KeyValueConfig& cfg,
                          const RunOptions& options) {
    const PipelineResult result = run_pipeline(pipeline, cfg, options);
    std::filesystem::create_directories(options.out_dir);

    auto write_lines = [&](const std::string& name, const std::vector<std::string>& lines) {
        std::ofstream out(options.out_dir + "/" + name, std::ios::trunc);
        if (!out) throw InvalidInputError("cannot write " + options.out_dir + "/" + name);
        for (const auto& line : lines) out << line << "\n";
    };
    write_lines("schedule.csv", result.schedule_csv);
    write_lines("errors.csv", result.errors_csv);
    {
        std::ofstream out(options.out_dir + "/summary.txt", std::ios::trunc);
        if (!out) throw InvalidInputError("cannot write summary.txt");
        out << result.summary;
    }
    return result.all_pass ? 0 : 1;
}

} // namespace suborbit
