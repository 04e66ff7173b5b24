#pragma once

#include <cstdint>
#include <map>
#include <optional>

namespace suborbit {

/// Certifies |c_j| <= C * exp(-beta |j - center|) for every index j beyond
/// the stored support of the owning vector.
struct DecayProfile {
    double C = 1.0;
    double beta = 1.0;
    std::int64_t center = 1;
};

/// Sparse coefficient vector over basis indices k >= 1.
///
/// Zero coefficients are never stored, so support queries are exact.
/// An optional decay profile extends the vector with an exponential
/// envelope tail beyond the largest stored index; norms treat that tail
/// as saturated, which makes them certified upper bounds for any actual
/// tail the envelope admits.
class SeqVector {
public:
    SeqVector() = default;
    explicit SeqVector(std::map<std::int64_t, double> coefficients,
                       std::optional<DecayProfile> decay = std::nullopt);

    static SeqVector unit(std::int64_t k, double value = 1.0);

    double at(std::int64_t k) const;
    void set(std::int64_t k, double value); // value 0 erases
    bool empty() const { return coef_.empty(); }
    std::size_t support_size() const { return coef_.size(); }
    std::int64_t min_index() const; // 0 when empty
    std::int64_t max_index() const; // 0 when empty

    const std::map<std::int64_t, double>& coefficients() const { return coef_; }
    const std::optional<DecayProfile>& decay() const { return decay_; }

    SeqVector& operator+=(const SeqVector& rhs);
    SeqVector& operator-=(const SeqVector& rhs);
    SeqVector& operator*=(double scalar);
    friend SeqVector operator+(SeqVector lhs, const SeqVector& rhs) { return lhs += rhs; }
    friend SeqVector operator-(SeqVector lhs, const SeqVector& rhs) { return lhs -= rhs; }
    friend SeqVector operator*(double scalar, SeqVector v) { return v *= scalar; }

    bool operator==(const SeqVector& rhs) const;

private:
    void validate() const;

    std::map<std::int64_t, double> coef_;
    std::optional<DecayProfile> decay_;
};

} // namespace suborbit
