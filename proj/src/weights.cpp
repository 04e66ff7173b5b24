#include "suborbit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suborbit/errors.hpp"

namespace suborbit {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInputError(std::string(what) + " must be positive and finite");
    }
}

} // namespace

WeightSequence::WeightSequence(Kind kind, double param, std::vector<double> prefix)
    : kind_(kind), param_(param), prefix_(std::move(prefix)) {}

WeightSequence WeightSequence::constant(double value) {
    require_positive(value, "constant weight");
    return {Kind::Constant, value};
}

WeightSequence WeightSequence::geometric(double ratio) {
    require_positive(ratio, "geometric ratio");
    return {Kind::Geometric, ratio};
}

WeightSequence WeightSequence::power(double exponent) {
    if (!std::isfinite(exponent)) {
        throw InvalidInputError("power exponent must be finite");
    }
    return {Kind::Power, exponent};
}

WeightSequence WeightSequence::table(std::vector<double> prefix, double tail) {
    require_positive(tail, "table tail");
    for (double w : prefix) require_positive(w, "table entry");
    return {Kind::Table, tail, std::move(prefix)};
}

double WeightSequence::at(std::int64_t k) const {
    if (k < 1) throw InvalidInputError("weight index must be >= 1");
    switch (kind_) {
    case Kind::Constant:  return param_;
    case Kind::Geometric: return std::pow(param_, static_cast<double>(k));
    case Kind::Power:     return std::pow(static_cast<double>(k), param_);
    case Kind::Table:
        if (static_cast<std::size_t>(k) <= prefix_.size()) return prefix_[k - 1];
        return param_;
    }
    return 1.0;
}

double WeightSequence::sup_ratio_down() const {
    double sup = 0.0;
    switch (kind_) {
    case Kind::Constant:
        return 1.0;
    case Kind::Geometric:
        sup = 1.0 / param_;
        break;
    case Kind::Power:
        // ((k-1)/k)^s: monotone in k, so the sup is either the k=2 value
        // or the limit 1, depending on the sign of s.
        sup = param_ >= 0.0 ? 1.0 : std::pow(0.5, param_);
        break;
    case Kind::Table: {
        sup = 1.0; // constant tail
        for (std::size_t k = 1; k <= prefix_.size(); ++k) {
            const double prev = prefix_[k - 1];
            const double next = (k < prefix_.size()) ? prefix_[k] : param_;
            sup = std::max(sup, prev / next);
        }
        break;
    }
    }
    if (!std::isfinite(sup)) {
        throw UnboundedOperatorError("L", "sup w_{k-1}/w_k diverges");
    }
    return sup;
}

double WeightSequence::sup_ratio_up() const {
    double sup = 0.0;
    switch (kind_) {
    case Kind::Constant:
        return 1.0;
    case Kind::Geometric:
        sup = param_;
        break;
    case Kind::Power:
        sup = param_ >= 0.0 ? std::pow(2.0, param_) : 1.0;
        break;
    case Kind::Table: {
        sup = 1.0;
        for (std::size_t k = 1; k <= prefix_.size(); ++k) {
            const double prev = prefix_[k - 1];
            const double next = (k < prefix_.size()) ? prefix_[k] : param_;
            sup = std::max(sup, next / prev);
        }
        break;
    }
    }
    if (!std::isfinite(sup)) {
        throw UnboundedOperatorError("R", "sup w_k/w_{k-1} diverges");
    }
    return sup;
}

double WeightSequence::weighted_power_sum(double x, std::int64_t from) const {
    if (!(x > 0.0 && x < 1.0)) {
        throw InvalidInputError("weighted_power_sum requires 0 < x < 1");
    }
    if (from < 1) from = 1;
    const double J = static_cast<double>(from);

    switch (kind_) {
    case Kind::Constant:
        return param_ * std::pow(x, J) / (1.0 - x);
    case Kind::Geometric: {
        const double q = x * param_;
        if (!(q < 1.0)) {
            throw UnsupportedWeightError("geometric weight grows faster than the decay: series diverges");
        }
        return std::pow(q, J) / (1.0 - q);
    }
    case Kind::Table: {
        double sum = 0.0;
        const auto n = static_cast<std::int64_t>(prefix_.size());
        for (std::int64_t k = from; k <= n; ++k) {
            sum += std::pow(x, static_cast<double>(k)) * prefix_[k - 1];
        }
        const std::int64_t tail_from = std::max(from, n + 1);
        sum += param_ * std::pow(x, static_cast<double>(tail_from)) / (1.0 - x);
        return sum;
    }
    case Kind::Power: {
        // No elementary closed form; sum until a geometric majorant
        // certifies the remainder below double resolution of the partial.
        const double s = param_;
        double sum = 0.0;
        std::int64_t m = from;
        for (;; ++m) {
            sum += std::pow(x, static_cast<double>(m)) * std::pow(static_cast<double>(m), s);
            // For k > m: k^s <= (m+1)^s * rho^{k-m-1} with
            // rho = ((m+2)/(m+1))^s for s > 0 and rho = 1 for s <= 0.
            const double rho = s > 0.0
                ? std::pow(static_cast<double>(m + 2) / static_cast<double>(m + 1), s)
                : 1.0;
            if (x * rho >= 1.0) continue;
            const double remainder = std::pow(x, static_cast<double>(m + 1))
                * std::pow(static_cast<double>(m + 1), s) / (1.0 - x * rho);
            if (remainder <= sum * 1e-18 + std::numeric_limits<double>::min()) break;
            if (m > from + 100000) {
                throw UnsupportedWeightError("power-weight series did not certify convergence");
            }
        }
        return sum;
    }
    }
    return 0.0;
}

double WeightSequence::weighted_decay_sum(double rate, std::int64_t center,
                                          std::int64_t from) const {
    if (!(rate > 0.0)) throw InvalidInputError("weighted_decay_sum requires rate > 0");
    if (from < 1) from = 1;
    const double offset = -rate * static_cast<double>(from - center);
    const double x = std::exp(-rate);

    switch (kind_) {
    case Kind::Constant:
        return param_ * std::exp(offset) / (1.0 - x);
    case Kind::Geometric: {
        const double lnr = std::log(param_);
        if (!(lnr < rate)) {
            throw UnsupportedWeightError("geometric weight grows faster than the decay: series diverges");
        }
        // sum_{k>=from} e^{-rate(k-center)} r^k = e^{offset + from ln r} / (1 - e^{lnr-rate})
        return std::exp(offset + static_cast<double>(from) * lnr) / (1.0 - std::exp(lnr - rate));
    }
    case Kind::Table: {
        double sum = 0.0;
        const auto n = static_cast<std::int64_t>(prefix_.size());
        for (std::int64_t k = from; k <= n; ++k) {
            sum += std::exp(-rate * static_cast<double>(k - center)) * prefix_[k - 1];
        }
        const std::int64_t tail_from = std::max(from, n + 1);
        sum += param_ * std::exp(-rate * static_cast<double>(tail_from - center)) / (1.0 - x);
        return sum;
    }
    case Kind::Power: {
        const double s = param_;
        double sum = 0.0; // of e^{-rate i} (from+i)^s, i >= 0
        std::int64_t i = 0;
        for (;; ++i) {
            const double k = static_cast<double>(from + i);
            sum += std::exp(-rate * static_cast<double>(i)) * std::pow(k, s);
            const double rho = s > 0.0 ? std::pow((k + 2.0) / (k + 1.0), s) : 1.0;
            if (x * rho >= 1.0) continue;
            const double remainder =
                std::exp(-rate * static_cast<double>(i + 1)) * std::pow(k + 1.0, s) / (1.0 - x * rho);
            if (remainder <= sum * 1e-18 + std::numeric_limits<double>::min()) break;
            if (i > 100000) {
                throw UnsupportedWeightError("power-weight series did not certify convergence");
            }
        }
        return std::exp(offset) * sum;
    }
    }
    return 0.0;
}

} // namespace suborbit
