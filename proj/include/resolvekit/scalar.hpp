// Exact coefficients: rationals and truncated rings Q[s]/(s^(n+1)).
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rk {

using Q = mpq_class;

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element c_0 + c_1 s + ... + c_n s^n of A_n.
class Truncated {
public:
    Truncated() = default;
    Truncated(std::vector<Q> coeffs, int order);
    static Truncated constant(const Q& c, int order);

    int order() const { return n_; }
    const std::vector<Q>& coeffs() const { return c_; }
    const Q& operator[](int i) const { return c_[static_cast<size_t>(i)]; }

    bool is_zero() const;
    bool is_unit() const { return c_[0] != 0; }
    // Index of the first nonzero coefficient, n+1 for zero.
    int valuation() const;
    Truncated inverse() const;

    Truncated operator+(const Truncated& o) const;
    Truncated operator-(const Truncated& o) const;
    Truncated operator*(const Truncated& o) const;
    Truncated operator-() const;
    bool operator==(const Truncated& o) const;

    std::string str() const;

private:
    void check_same(const Truncated& o) const;
    std::vector<Q> c_;
    int n_ = 0;
};

class Scalar {
public:
    Scalar() : v_(Q(0)) {}
    Scalar(const Q& q) : v_(q) {}
    Scalar(long q) : v_(Q(q)) {}
    Scalar(int q) : v_(Q(q)) {}
    Scalar(const Truncated& t) : v_(t) {}

    bool is_rational() const { return std::holds_alternative<Q>(v_); }
    bool is_truncated() const { return !is_rational(); }
    const Q& rational() const;
    const Truncated& truncated() const;
    // Truncation order, or -1 for a plain rational.
    int order() const { return is_rational() ? -1 : truncated().order(); }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;
    Scalar inverse() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Lift to A_n; rationals become constants.
    Truncated as_truncated(int order) const;
    std::string str() const;

private:
    std::variant<Q, Truncated> v_;
};

std::string q_str(const Q& q);

}  // namespace rk
