#include "suborbit/function_space.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "suborbit/errors.hpp"

namespace suborbit {

// ---------------------------------------------------------------- weight ----

ModerateWeight ModerateWeight::constant(double value) {
    if (!(value > 0.0)) throw InvalidInputError("constant weight must be positive");
    return {Kind::Constant, value};
}

ModerateWeight ModerateWeight::exponential(double gamma) {
    if (!std::isfinite(gamma)) throw InvalidInputError("exponential rate must be finite");
    return {Kind::Exponential, gamma};
}

ModerateWeight ModerateWeight::polynomial(double s) {
    if (!(s >= 0.0)) throw InvalidInputError("polynomial weight degree must be >= 0");
    return {Kind::Polynomial, s};
}

double ModerateWeight::value(double x) const {
    switch (kind_) {
    case Kind::Constant:    return param_;
    case Kind::Exponential: return std::exp(param_ * x);
    case Kind::Polynomial:  return std::pow(1.0 + std::abs(x), param_);
    }
    return 1.0;
}

double ModerateWeight::majorant(double x) const {
    switch (kind_) {
    case Kind::Constant:    return 1.0;
    case Kind::Exponential: return std::exp(param_ * x);
    case Kind::Polynomial:  return std::pow(1.0 + std::abs(x), param_);
    }
    return 1.0;
}

double ModerateWeight::t1_bound(double p) const { return std::pow(majorant(1.0), 1.0 / p); }
double ModerateWeight::tm1_bound(double p) const { return std::pow(majorant(-1.0), 1.0 / p); }

// ------------------------------------------------------------ grid basics ----

GridFunction::GridFunction(std::int64_t q, std::vector<std::complex<double>> samples,
                           double p, ModerateWeight weight)
    : q_(q), samples_(std::move(samples)), p_(p), weight_(weight) {
    if (q_ < 1) throw GridMismatchError("grid density q must be >= 1");
    if (samples_.size() < 2) throw GridMismatchError("grid needs at least two samples");
    if (!(p_ >= 1.0)) throw InvalidInputError("exponent p must satisfy 1 <= p < infinity");
    for (const auto& v : samples_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InvalidInputError("non-finite sample value");
        }
    }
}

GridFunction GridFunction::zeros(std::int64_t q, double length, double p, ModerateWeight weight) {
    const auto n = static_cast<std::int64_t>(std::llround(length * static_cast<double>(q))) + 1;
    return GridFunction(q, std::vector<std::complex<double>>(static_cast<std::size_t>(n)), p, weight);
}

double GridFunction::log_scale() const {
    return static_cast<double>(lambda_exp_) * std::log(lambda_);
}

std::complex<double> GridFunction::value_at(std::int64_t i) const {
    const auto& v = samples_.at(static_cast<std::size_t>(i));
    const double ls = log_scale();
    if (std::abs(ls) < 600.0) return v * std::exp(ls);
    if (v == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    const double mag = std::abs(v);
    return v / mag * std::exp(ls + std::log(mag));
}

namespace {

/// Rectangle-rule p-sum of |f|^p w over cells [x_i, x_{i+1}), i in
/// [from_cell, last), at the raw (unscaled) samples, with the given stride.
double raw_p_sum(const GridFunction& f, std::int64_t from_cell, std::int64_t stride) {
    const double h = f.step() * static_cast<double>(stride);
    const auto& v = f.raw_samples();
    const std::int64_t last = f.sample_count() - 1;
    double sum = 0.0;
    for (std::int64_t i = from_cell; i < last; i += stride) {
        const double av = std::abs(v[static_cast<std::size_t>(i)]);
        if (av != 0.0) {
            sum += std::pow(av, f.p()) * f.weight().value(static_cast<double>(i) * f.step());
        }
    }
    return sum * h;
}

double scaled_root(const GridFunction& f, double p_sum) {
    if (p_sum <= 0.0) return 0.0;
    return std::exp(f.log_scale() + std::log(p_sum) / f.p());
}

std::int64_t snap_cell(const GridFunction& f, double from, bool* snapped) {
    if (snapped) *snapped = false;
    if (from <= 0.0) return 0;
    const double cells = from * static_cast<double>(f.q());
    auto cell = static_cast<std::int64_t>(std::floor(cells + 1e-9));
    if (std::abs(cells - std::round(cells)) > 1e-9) {
        if (snapped) *snapped = true;
    }
    return std::min(cell, f.sample_count() - 1);
}

} // namespace

double lp_norm(const GridFunction& f, double from, bool* snapped) {
    return scaled_root(f, raw_p_sum(f, snap_cell(f, from, snapped), 1));
}

double lp_norm_coarse(const GridFunction& f, double from) {
    std::int64_t cell = snap_cell(f, from, nullptr);
    cell += cell % 2; // coarse grid lives on even indices
    return scaled_root(f, raw_p_sum(f, cell, 2));
}

// ------------------------------------------------------------- operators ----

namespace {

/// Moves samples by `cells` toward larger x (negative: toward 0), zero
/// filling. Returns the raw p-sum of the samples that crossed the edge
/// named by `track_low` / `track_high`, measured at their target positions.
struct ShiftedSamples {
    std::vector<std::complex<double>> samples;
    double edge_p_sum = 0.0;
};

ShiftedSamples shift_samples(const GridFunction& f, std::int64_t cells,
                             bool track_low, bool track_high) {
    const std::int64_t n = f.sample_count();
    const double h = f.step();
    ShiftedSamples out;
    out.samples.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t src = i - cells;
        out.samples[static_cast<std::size_t>(i)] =
            (src >= 0 && src < n) ? f.raw_samples()[static_cast<std::size_t>(src)]
                                  : std::complex<double>(0.0, 0.0);
    }
    auto add_edge = [&](std::int64_t src) {
        const double av = std::abs(f.raw_samples()[static_cast<std::size_t>(src)]);
        if (av != 0.0) {
            out.edge_p_sum += std::pow(av, f.p())
                              * f.weight().value(static_cast<double>(src + cells) * h) * h;
        }
    };
    if (cells > 0 && track_high) {
        for (std::int64_t src = std::max<std::int64_t>(n - cells, 0); src < n; ++src) add_edge(src);
    }
    if (cells < 0 && track_low) {
        for (std::int64_t src = 0; src < std::min(-cells, n); ++src) add_edge(src);
    }
    return out;
}

void set_lambda_power(GridFunction& g, double base_in, std::int64_t exp_in,
                      double lambda, std::int64_t delta,
                      double& base_out, std::int64_t& exp_out) {
    if (exp_in != 0 && base_in != lambda) {
        throw GridMismatchError("mixing different lambda bases in one grid function");
    }
    base_out = lambda;
    exp_out = exp_in + delta;
    (void)g;
}

} // namespace

GridFunction translate_by_cells(const GridFunction& f, std::int64_t cells) {
    auto shifted = shift_samples(f, cells, /*track_low=*/true, /*track_high=*/true);
    GridFunction out = f;
    out.samples_ = std::move(shifted.samples);
    const double steps = std::abs(static_cast<double>(cells)) / static_cast<double>(f.q());
    const double op_bound = cells >= 0 ? std::pow(f.weight().t1_bound(f.p()), steps)
                                       : std::pow(f.weight().tm1_bound(f.p()), steps);
    out.dropped_tail_ = f.dropped_tail_ * op_bound + scaled_root(f, shifted.edge_p_sum);
    return out;
}

GridFunction translate(const GridFunction& f, std::int64_t n) {
    return translate_by_cells(f, n * f.q());
}

GridFunction t_pow_grid(const GridFunction& f, double lambda, std::int64_t n) {
    if (n < 0) throw InvalidInputError("operator power must be nonnegative");
    if (!(lambda > 0.0)) throw InvalidInputError("lambda must be positive");
    // the chi_{[0,inf)} truncation is part of the operator, so the low edge
    // is not a loss; pulled-in values beyond L are exact zeros by support
    auto shifted = shift_samples(f, -n * f.q(), /*track_low=*/false, /*track_high=*/false);
    GridFunction out = f;
    out.samples_ = std::move(shifted.samples);
    set_lambda_power(out, f.lambda_, f.lambda_exp_, lambda, n, out.lambda_, out.lambda_exp_);
    out.dropped_tail_ = f.dropped_tail_
        * std::pow(lambda * f.weight().tm1_bound(f.p()), static_cast<double>(n));
    return out;
}

GridFunction s_pow_grid(const GridFunction& f, double lambda, std::int64_t n) {
    if (n < 0) throw InvalidInputError("operator power must be nonnegative");
    if (!(lambda > 0.0)) throw InvalidInputError("lambda must be positive");
    auto shifted = shift_samples(f, n * f.q(), /*track_low=*/true, /*track_high=*/true);
    GridFunction out = f;
    out.samples_ = std::move(shifted.samples);
    set_lambda_power(out, f.lambda_, f.lambda_exp_, lambda, -n, out.lambda_, out.lambda_exp_);
    const double contraction = std::pow(f.weight().t1_bound(f.p()) / lambda, static_cast<double>(n));
    // edge loss happened after the translation, so it is scaled by lambda^{-n}
    // relative to the incoming samples
    double edge_loss = 0.0;
    if (shifted.edge_p_sum > 0.0) {
        edge_loss = std::exp(out.log_scale() - f.log_scale()
                             + std::log(scaled_root(f, shifted.edge_p_sum)));
    }
    out.dropped_tail_ = f.dropped_tail_ * contraction + edge_loss;
    return out;
}

GridFunction modulate(const GridFunction& f, double frequency) {
    GridFunction out = f;
    const double h = f.step();
    for (std::int64_t i = 0; i < f.sample_count(); ++i) {
        const double phase = 2.0 * std::numbers::pi * frequency * static_cast<double>(i) * h;
        out.samples_[static_cast<std::size_t>(i)] *= std::polar(1.0, phase);
    }
    return out;
}

GridFunction subtract(const GridFunction& a, const GridFunction& b) {
    if (a.q() != b.q() || a.sample_count() != b.sample_count()) {
        throw GridMismatchError("grid functions live on different grids");
    }
    GridFunction out = a;
    out.lambda_ = 1.0;
    out.lambda_exp_ = 0;
    for (std::int64_t i = 0; i < a.sample_count(); ++i) {
        out.samples_[static_cast<std::size_t>(i)] = a.value_at(i) - b.value_at(i);
    }
    out.dropped_tail_ = a.dropped_tail_ + b.dropped_tail_;
    return out;
}

// ------------------------------------------------------ tail certificates ----

TailFit fit_tail_certificate(const GridFunction& g, double d0, double margin) {
    if (!(d0 >= 0.0)) throw InvalidInputError("tail fit start must be nonnegative");
    const double h = g.step();
    const double d_hi = g.length() - margin;
    if (d_hi <= d0) throw InvalidInputError("tail fit window is empty; reduce the margin");

    std::vector<double> ds, lts;
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t i = static_cast<std::int64_t>(std::ceil(d0 / h - 1e-9));
         static_cast<double>(i) * h <= d_hi; ++i) {
        const double d = static_cast<double>(i) * h;
        const double t = lp_norm(g, d);
        if (t <= 0.0) break;
        if (!(t < prev) && !ds.empty()) {
            throw NoCertificateError("measured tails are not strictly decreasing beyond d0");
        }
        prev = t;
        ds.push_back(d);
        lts.push_back(std::log(t));
    }
    if (ds.empty()) {
        return {std::numeric_limits<double>::min(), std::exp(1.0), true};
    }
    if (ds.size() < 3) {
        throw NoCertificateError("too few positive tail samples to fit a certificate");
    }

    const auto n = static_cast<double>(ds.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sx += ds[i]; sy += lts[i]; sxx += ds[i] * ds[i]; sxy += ds[i] * lts[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (!(slope < 0.0)) {
        throw NoCertificateError("tail does not decay: fitted rate is nonnegative");
    }
    TailFit fit;
    fit.mu = std::exp(-slope);
    // inflate C so the bound is certified at every measured cutoff
    double c = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        c = std::max(c, std::exp(lts[i] + ds[i] * std::log(fit.mu)));
    }
    fit.C = c;
    return fit;
}

bool check_decay_certificate(const GridFunction& f, const DecayCertificate& cert,
                             double rel_tol) {
    const double h = f.step();
    const double ln_mu = std::log(cert.mu);
    for (std::int64_t i = cert.cutoff * f.q(); i < f.sample_count(); ++i) {
        const double d = static_cast<double>(i) * h;
        const double bound = std::exp(std::log(cert.C) - d * ln_mu);
        if (lp_norm(f, d) > bound * (1.0 + rel_tol)) return false;
    }
    return true;
}

// ----------------------------------------------------------- gabor system ----

std::vector<GaborMember> gabor_half_system(const GridFunction& g, double a, double b,
                                           int M_max, int n_max,
                                           double C, double mu, double d0) {
    if (M_max < 0 || n_max < 0) throw InvalidInputError("snake extents must be nonnegative");
    if (!(mu > 1.0)) throw PreconditionError("tail certificate needs mu > 1");
    const double cells_real = a * static_cast<double>(g.q());
    const auto a_cells = static_cast<std::int64_t>(std::llround(cells_real));
    if (std::abs(cells_real - static_cast<double>(a_cells)) > 1e-9 || a_cells < 1) {
        throw GridMismatchError("translation step a must be a positive multiple of the grid step");
    }

    std::vector<GaborMember> members;
    std::int64_t k = 0;
    auto push = [&](int m, int n) {
        ++k;
        GaborMember mem{modulate(translate_by_cells(g, n * a_cells), static_cast<double>(m) * b),
                        m, n, {}};
        mem.cert.mu = mu;
        mem.cert.C = C * std::pow(mu, static_cast<double>(k) * a);
        mem.cert.cutoff = static_cast<std::int64_t>(std::ceil(d0 + static_cast<double>(k) * a - 1e-9));
        members.push_back(std::move(mem));
    };

    for (int n = 0; n <= n_max; ++n) {
        if (n == 0) {
            for (int m = 0; m <= M_max; ++m) push(m, n); // start at g itself
        } else if (n % 2 == 1) {
            for (int m = M_max; m >= -M_max; --m) push(m, n);
        } else {
            for (int m = -M_max; m <= M_max; ++m) push(m, n);
        }
    }
    return members;
}

// -------------------------------------------------------------- pipeline ----

namespace {

FunctionErrorRow function_error_row(const std::vector<GridFunction>& family,
                                    const PowerSchedule& schedule, double lambda,
                                    const ErrorBudget& budget, std::int64_t k) {
    const GridFunction& fk = family[static_cast<std::size_t>(k - 1)];
    const std::int64_t n = fk.sample_count();
    const std::int64_t q = fk.q();
    const double h = fk.step();
    const std::int64_t alpha_k = schedule.alpha(k);
    const double norm_S = fk.weight().t1_bound(fk.p()) / lambda;

    std::vector<std::complex<double>> acc(static_cast<std::size_t>(n));
    double dropped = 0.0;
    for (std::int64_t j = 1; j <= schedule.size(); ++j) {
        const std::int64_t shift = schedule.alpha(j) - alpha_k;
        const std::int64_t cells = shift * q;
        const double log_scale = -static_cast<double>(shift) * std::log(lambda);
        const double scale = std::abs(log_scale) < 600.0 ? std::exp(log_scale) : 0.0;
        const auto& src = family[static_cast<std::size_t>(j - 1)].raw_samples();
        if (scale != 0.0) {
            for (std::int64_t i = std::max<std::int64_t>(0, cells); i < n; ++i) {
                const std::int64_t s = i - cells;
                if (s >= n) break;
                acc[static_cast<std::size_t>(i)] += src[static_cast<std::size_t>(s)] * scale;
            }
        }
        if (cells > 0) {
            // top part of S^{shift} f_j crossed the domain edge; bound it by
            // ||S||^{shift} * || f_j restricted past the cut ||
            const std::int64_t cut = n - 1 - cells;
            const double from = cut <= 0 ? 0.0 : static_cast<double>(cut) * h;
            const double tail = lp_norm(family[static_cast<std::size_t>(j - 1)], from);
            if (tail > 0.0) {
                dropped += std::exp(static_cast<double>(shift) * std::log(norm_S) + std::log(tail));
            }
        }
    }

    GridFunction err(q, std::move(acc), fk.p(), fk.weight());
    {
        // err currently holds T^{alpha(k)} phi; subtract f_k in place
        std::vector<std::complex<double>> diff(err.raw_samples().size());
        for (std::int64_t i = 0; i < n; ++i) {
            diff[static_cast<std::size_t>(i)] =
                fk.raw_samples()[static_cast<std::size_t>(i)] - err.raw_samples()[static_cast<std::size_t>(i)];
        }
        err = GridFunction(q, std::move(diff), fk.p(), fk.weight());
    }

    FunctionErrorRow row;
    row.k = k;
    row.alpha = alpha_k;
    row.actual = lp_norm(err);
    row.quad_allowance = std::abs(row.actual - lp_norm_coarse(err));
    row.allowance = dropped;
    row.bound = budget.tail(k);
    row.pass = row.actual <= row.bound + row.allowance + row.quad_allowance;
    return row;
}

} // namespace

FunctionReport run_function_pipeline(const std::vector<GridFunction>& family,
                                     const std::vector<DecayCertificate>& certs,
                                     double lambda, double mu, const ErrorBudget& budget,
                                     int jobs) {
    if (family.empty() || certs.size() != family.size()) {
        throw InvalidInputError("need one decay certificate per family member");
    }
    const auto K = static_cast<std::int64_t>(family.size());
    const GridFunction& f0 = family.front();
    for (const auto& f : family) {
        if (f.q() != f0.q() || f.sample_count() != f0.sample_count() || f.p() != f0.p()) {
            throw GridMismatchError("family members live on different grids");
        }
        if (f.lambda_exponent() != 0) {
            throw InvalidInputError("family members must carry no pending lambda power");
        }
    }
    const double t1b = f0.weight().t1_bound(f0.p());
    const double tm1b = f0.weight().tm1_bound(f0.p());
    if (!(lambda > t1b)) {
        throw PreconditionError("lambda must exceed the translation norm bound ||T_1|| ("
                                + std::to_string(lambda) + " <= " + std::to_string(t1b) + ")");
    }

    std::vector<double> norms;
    std::vector<std::int64_t> a_ks;
    std::vector<double> C_ks;
    norms.reserve(family.size());
    for (std::int64_t k = 1; k <= K; ++k) {
        norms.push_back(lp_norm(family[static_cast<std::size_t>(k - 1)]));
        a_ks.push_back(certs[static_cast<std::size_t>(k - 1)].cutoff);
        C_ks.push_back(certs[static_cast<std::size_t>(k - 1)].C);
    }

    FunctionReport report;
    report.lambda = lambda;
    report.mu = mu;
    report.norm_S_bound = t1b / lambda;
    report.schedule = schedule_function({t1b / lambda, lambda, tm1b, mu},
                                        norms, a_ks, C_ks, budget, K);
    report.rows.resize(static_cast<std::size_t>(K));

    auto fill = [&](std::int64_t k) {
        report.rows[static_cast<std::size_t>(k - 1)] =
            function_error_row(family, report.schedule, lambda, budget, k);
    };
    if (jobs <= 1) {
        for (std::int64_t k = 1; k <= K; ++k) fill(k);
    } else {
        std::atomic<std::int64_t> next{1};
        std::vector<std::future<void>> tasks;
        const int workers = static_cast<int>(std::min<std::int64_t>(jobs, K));
        tasks.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&] {
                for (std::int64_t k = next.fetch_add(1); k <= K; k = next.fetch_add(1)) fill(k);
            }));
        }
        for (auto& t : tasks) t.get();
    }
    for (const auto& row : report.rows) {
        report.max_ratio = std::max(report.max_ratio, row.actual / row.bound);
    }
    return report;
}

// ------------------------------------------------------------ generators ----

GridFunction make_exponential(std::int64_t q, double length, double p, ModerateWeight w,
                              double rate) {
    GridFunction g = GridFunction::zeros(q, length, p, w);
    std::vector<std::complex<double>> v(static_cast<std::size_t>(g.sample_count()));
    for (std::int64_t i = 0; i < g.sample_count(); ++i) {
        v[static_cast<std::size_t>(i)] = std::exp(-rate * static_cast<double>(i) * g.step());
    }
    return GridFunction(q, std::move(v), p, w);
}

GridFunction make_characteristic(std::int64_t q, double length, double p, ModerateWeight w,
                                 double lo, double hi) {
    GridFunction g = GridFunction::zeros(q, length, p, w);
    std::vector<std::complex<double>> v(static_cast<std::size_t>(g.sample_count()));
    for (std::int64_t i = 0; i < g.sample_count(); ++i) {
        const double x = static_cast<double>(i) * g.step();
        v[static_cast<std::size_t>(i)] = (x >= lo && x < hi) ? 1.0 : 0.0;
    }
    return GridFunction(q, std::move(v), p, w);
}

GridFunction make_gaussian(std::int64_t q, double length, double p, ModerateWeight w,
                           double center, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInputError("gaussian width must be positive");
    GridFunction g = GridFunction::zeros(q, length, p, w);
    std::vector<std::complex<double>> v(static_cast<std::size_t>(g.sample_count()));
    for (std::int64_t i = 0; i < g.sample_count(); ++i) {
        const double x = static_cast<double>(i) * g.step();
        const double t = (x - center) / sigma;
        v[static_cast<std::size_t>(i)] = std::exp(-0.5 * t * t);
    }
    return GridFunction(q, std::move(v), p, w);
}

GridFunction load_grid_csv(const std::string& path, double p, ModerateWeight w) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open grid file: " + path);
    std::vector<double> xs;
    std::vector<std::complex<double>> vs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, re, im = 0.0;
        if (!(row >> x >> re)) continue;
        row >> im;
        xs.push_back(x);
        vs.emplace_back(re, im);
    }
    if (xs.size() < 2) throw InvalidInputError("grid file needs at least two samples");
    if (std::abs(xs.front()) > 1e-9) throw GridMismatchError("grid must start at x = 0");
    const double h = xs[1] - xs[0];
    if (!(h > 0.0)) throw GridMismatchError("grid abscissae must increase");
    const double q_real = 1.0 / h;
    const auto q = static_cast<std::int64_t>(std::llround(q_real));
    if (q < 1 || std::abs(q_real - static_cast<double>(q)) > 1e-6 * q_real) {
        throw GridMismatchError("grid step must be 1/q for an integer q");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i] - static_cast<double>(i) * h) > 1e-9) {
            throw GridMismatchError("grid abscissae must be uniform");
        }
    }
    return GridFunction(q, std::move(vs), p, w);
}

} // namespace suborbit
