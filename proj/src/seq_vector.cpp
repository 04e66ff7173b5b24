#include "suborbit/seq_vector.hpp"

#include <cmath>

#include "suborbit/errors.hpp"

namespace suborbit {

SeqVector::SeqVector(std::map<std::int64_t, double> coefficients,
                     std::optional<DecayProfile> decay)
    : coef_(std::move(coefficients)), decay_(decay) {
    for (auto it = coef_.begin(); it != coef_.end();) {
        if (it->second == 0.0) {
            it = coef_.erase(it);
        } else {
            ++it;
        }
    }
    validate();
}

void SeqVector::validate() const {
    for (const auto& [k, c] : coef_) {
        if (k < 1) throw InvalidInputError("coefficient index must be >= 1");
        if (!std::isfinite(c)) throw InvalidInputError("non-finite coefficient");
        if (decay_) {
            const double envelope =
                decay_->C * std::exp(-decay_->beta * std::abs(static_cast<double>(k - decay_->center)));
            if (std::abs(c) > envelope * (1.0 + 1e-12)) {
                throw InvalidInputError("stored coefficient exceeds its decay envelope");
            }
        }
    }
    if (decay_ && (!(decay_->C > 0.0) || !(decay_->beta > 0.0) || decay_->center < 1)) {
        throw InvalidInputError("decay profile requires C > 0, beta > 0, center >= 1");
    }
}

SeqVector SeqVector::unit(std::int64_t k, double value) {
    SeqVector v;
    v.set(k, value);
    return v;
}

double SeqVector::at(std::int64_t k) const {
    const auto it = coef_.find(k);
    return it == coef_.end() ? 0.0 : it->second;
}

void SeqVector::set(std::int64_t k, double value) {
    if (k < 1) throw InvalidInputError("coefficient index must be >= 1");
    if (!std::isfinite(value)) throw InvalidInputError("non-finite coefficient");
    if (value == 0.0) {
        coef_.erase(k);
    } else {
        coef_[k] = value;
    }
}

std::int64_t SeqVector::min_index() const {
    return coef_.empty() ? 0 : coef_.begin()->first;
}

std::int64_t SeqVector::max_index() const {
    return coef_.empty() ? 0 : coef_.rbegin()->first;
}

namespace {
void require_plain(const SeqVector& v, const char* op) {
    if (v.decay()) {
        throw InvalidInputError(std::string(op) + " is defined for finitely supported vectors only");
    }
}
} // namespace

SeqVector& SeqVector::operator+=(const SeqVector& rhs) {
    require_plain(*this, "vector addition");
    require_plain(rhs, "vector addition");
    for (const auto& [k, c] : rhs.coef_) {
        const double sum = at(k) + c;
        set(k, sum);
    }
    return *this;
}

SeqVector& SeqVector::operator-=(const SeqVector& rhs) {
    require_plain(*this, "vector subtraction");
    require_plain(rhs, "vector subtraction");
    for (const auto& [k, c] : rhs.coef_) {
        set(k, at(k) - c);
    }
    return *this;
}

SeqVector& SeqVector::operator*=(double scalar) {
    require_plain(*this, "scalar multiplication");
    if (!std::isfinite(scalar)) throw InvalidInputError("non-finite scalar");
    if (scalar == 0.0) {
        coef_.clear();
        return *this;
    }
    for (auto& [k, c] : coef_) c *= scalar;
    return *this;
}

bool SeqVector::operator==(const SeqVector& rhs) const {
    return coef_ == rhs.coef_;
}

} // namespace suborbit
