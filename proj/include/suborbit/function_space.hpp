#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "suborbit/schedule.hpp"

namespace suborbit {

/// Closed-form weight w on [0, infinity) paired with a submultiplicative
/// majorant m satisfying w(x+y) <= m(x) w(y), which makes the translation
/// operators bounded with ||T_{+-1}|| <= m(+-1)^{1/p}.
class ModerateWeight {
public:
    enum class Kind { Constant, Exponential, Polynomial };

    static ModerateWeight constant(double value = 1.0);
    /// w(x) = e^{gamma x}
    static ModerateWeight exponential(double gamma);
    /// w(x) = (1 + |x|)^s, s >= 0
    static ModerateWeight polynomial(double s);

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }

    double value(double x) const;
    double majorant(double x) const;
    double t1_bound(double p) const;
    double tm1_bound(double p) const;

private:
    ModerateWeight(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_;
};

/// Complex function sampled on the uniform grid {0, h, 2h, ..., L} with
/// h = 1/q. Integer translations permute samples exactly; the lambda power
/// of the weighted translation operators is carried as an exact integer
/// exponent and folded in only when samples or norms are read.
class GridFunction {
public:
    GridFunction(std::int64_t q, std::vector<std::complex<double>> samples,
                 double p, ModerateWeight weight);

    static GridFunction zeros(std::int64_t q, double length, double p, ModerateWeight weight);

    std::int64_t q() const { return q_; }
    double step() const { return 1.0 / static_cast<double>(q_); }
    std::int64_t sample_count() const { return static_cast<std::int64_t>(samples_.size()); }
    double length() const { return static_cast<double>(sample_count() - 1) * step(); }
    double p() const { return p_; }
    const ModerateWeight& weight() const { return weight_; }

    const std::vector<std::complex<double>>& raw_samples() const { return samples_; }
    std::complex<double> value_at(std::int64_t i) const; // scale folded in

    double lambda_base() const { return lambda_; }
    std::int64_t lambda_exponent() const { return lambda_exp_; }
    double log_scale() const;

    /// Norm bound on content discarded at the domain edges so far.
    double dropped_tail_bound() const { return dropped_tail_; }

    friend GridFunction translate(const GridFunction& f, std::int64_t n);
    friend GridFunction translate_by_cells(const GridFunction& f, std::int64_t cells);
    friend GridFunction t_pow_grid(const GridFunction& f, double lambda, std::int64_t n);
    friend GridFunction s_pow_grid(const GridFunction& f, double lambda, std::int64_t n);
    friend GridFunction modulate(const GridFunction& f, double frequency);
    friend GridFunction subtract(const GridFunction& a, const GridFunction& b);

private:
    std::int64_t q_;
    std::vector<std::complex<double>> samples_;
    double p_;
    ModerateWeight weight_;
    double lambda_ = 1.0;
    std::int64_t lambda_exp_ = 0;
    double dropped_tail_ = 0.0;
};

/// Left-endpoint rectangle rule for (integral_from^L |f|^p w)^{1/p}.
/// A non-grid cutoff is snapped down; *snapped reports that.
double lp_norm(const GridFunction& f, double from = 0.0, bool* snapped = nullptr);
/// Same quadrature at double step, for a-posteriori error estimates.
double lp_norm_coarse(const GridFunction& f, double from = 0.0);

/// T_n f(x) = f(x - n); mass pushed over an edge is dropped and recorded.
GridFunction translate(const GridFunction& f, std::int64_t n);
GridFunction translate_by_cells(const GridFunction& f, std::int64_t cells);
/// T^n f = lambda^n (T_{-n} f) chi_{[0,inf)}
GridFunction t_pow_grid(const GridFunction& f, double lambda, std::int64_t n);
/// S^n f = lambda^{-n} T_n f
GridFunction s_pow_grid(const GridFunction& f, double lambda, std::int64_t n);
/// E_freq f(x) = e^{2 pi i freq x} f(x)
GridFunction modulate(const GridFunction& f, double frequency);
GridFunction subtract(const GridFunction& a, const GridFunction& b);

struct TailFit {
    double C = 0.0;
    double mu = 1.0;
    bool zero_tail = false;
};

/// Fits ln(tail(d)) ~ ln C - d ln mu over grid cutoffs d in [d0, L - margin],
/// then inflates C so the bound holds at every measured cutoff.
TailFit fit_tail_certificate(const GridFunction& g, double d0, double margin = 10.0);

/// Verified bound ||f chi_{[a,inf)}|| <= C mu^{-a} for all cutoffs a >= cutoff.
struct DecayCertificate {
    double C = 1.0;
    std::int64_t cutoff = 0; // a_k
    double mu = 2.0;
};

/// Replays the certificate at every grid cutoff >= cert.cutoff.
bool check_decay_certificate(const GridFunction& f, const DecayCertificate& cert,
                             double rel_tol = 1e-9);

struct GaborMember {
    GridFunction f;
    int m = 0; // modulation index
    int n = 0; // translation index
    DecayCertificate cert;
};

/// Half Gabor system E_{mb} T_{na} g enumerated boustrophedon over columns
/// n = 0, 1, ..., n_max: column 0 ascends m = 0..M_max (so the first member
/// is g itself), odd columns descend M_max..-M_max, even columns ascend
/// -M_max..M_max. Consecutive members differ by exactly one modulation or
/// one translation step. Certificates: C_k = C mu^{k a}, a_k = ceil(d0 + k a).
std::vector<GaborMember> gabor_half_system(const GridFunction& g, double a, double b,
                                           int M_max, int n_max,
                                           double C, double mu, double d0);

struct FunctionErrorRow {
    std::int64_t k = 0;
    std::int64_t alpha = 0;
    double actual = 0.0;
    double bound = 0.0;
    double allowance = 0.0;      // edge-truncation bound
    double quad_allowance = 0.0; // a-posteriori quadrature estimate
    bool pass = false;
};

struct FunctionReport {
    PowerSchedule schedule;
    std::vector<FunctionErrorRow> rows;
    double max_ratio = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double norm_S_bound = 0.0;
};

/// Full grid pipeline: schedule from the certificates, then per-k suborbit
/// errors measured by quadrature, with edge-truncation and quadrature
/// allowances reported separately.
FunctionReport run_function_pipeline(const std::vector<GridFunction>& family,
                                     const std::vector<DecayCertificate>& certs,
                                     double lambda, double mu, const ErrorBudget& budget,
                                     int jobs = 1);

// Built-in sample generators and the CSV loader (rows: x, re, im).
GridFunction make_exponential(std::int64_t q, double length, double p, ModerateWeight w,
                              double rate = 1.0);
GridFunction make_characteristic(std::int64_t q, double length, double p, ModerateWeight w,
                                 double lo, double hi);
GridFunction make_gaussian(std::int64_t q, double length, double p, ModerateWeight w,
                           double center, double sigma);
GridFunction load_grid_csv(const std::string& path, double p, ModerateWeight w);

} // namespace suborbit
