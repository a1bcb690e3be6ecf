#include "resolvekit/scalar.hpp"

#include <sstream>

namespace rk {

std::string q_str(const Q& q) {
    return q.get_str();
}

Truncated::Truncated(std::vector<Q> coeffs, int order) : c_(std::move(coeffs)), n_(order) {
    if (order < 0) throw AlgebraError("truncation order must be nonnegative");
    c_.resize(static_cast<size_t>(order) + 1, Q(0));
    for (auto& q : c_) q.canonicalize();
}

Truncated Truncated::constant(const Q& c, int order) {
    std::vector<Q> v(static_cast<size_t>(order) + 1, Q(0));
    v[0] = c;
    return Truncated(std::move(v), order);
}

void Truncated::check_same(const Truncated& o) const {
    if (n_ != o.n_) throw AlgebraError("truncation orders differ");
}

bool Truncated::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

int Truncated::valuation() const {
    for (int i = 0; i <= n_; ++i)
        if (c_[static_cast<size_t>(i)] != 0) return i;
    return n_ + 1;
}

Truncated Truncated::inverse() const {
    if (!is_unit()) throw AlgebraError("non-unit in truncated ring");
    std::vector<Q> inv(c_.size(), Q(0));
    inv[0] = 1 / c_[0];
    for (int k = 1; k <= n_; ++k) {
        Q acc = 0;
        for (int j = 1; j <= k; ++j) acc += c_[static_cast<size_t>(j)] * inv[static_cast<size_t>(k - j)];
        inv[static_cast<size_t>(k)] = -acc * inv[0];
    }
    return Truncated(std::move(inv), n_);
}

Truncated Truncated::operator+(const Truncated& o) const {
    check_same(o);
    std::vector<Q> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] + o.c_[i];
    return Truncated(std::move(r), n_);
}

Truncated Truncated::operator-(const Truncated& o) const {
    check_same(o);
    std::vector<Q> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] - o.c_[i];
    return Truncated(std::move(r), n_);
}

Truncated Truncated::operator*(const Truncated& o) const {
    check_same(o);
    std::vector<Q> r(c_.size(), Q(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; i + j < c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return Truncated(std::move(r), n_);
}

Truncated Truncated::operator-() const {
    std::vector<Q> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
    return Truncated(std::move(r), n_);
}

bool Truncated::operator==(const Truncated& o) const {
    return n_ == o.n_ && c_ == o.c_;
}

std::string Truncated::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= n_; ++i) {
        const Q& q = c_[static_cast<size_t>(i)];
        if (q == 0) continue;
        if (!first) os << (q > 0 ? " + " : " - ");
        else if (q < 0) os << "-";
        Q a = abs(q);
        if (i == 0) os << q_str(a);
        else {
            if (a != 1) os << q_str(a) << "*";
            os << "s";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

const Q& Scalar::rational() const {
    if (!is_rational()) throw AlgebraError("expected a rational scalar");
    return std::get<Q>(v_);
}

const Truncated& Scalar::truncated() const {
    if (is_rational()) throw AlgebraError("expected a truncated scalar");
    return std::get<Truncated>(v_);
}

bool Scalar::is_zero() const {
    return is_rational() ? rational() == 0 : truncated().is_zero();
}

bool Scalar::is_one() const {
    if (is_rational()) return rational() == 1;
    const auto& t = truncated();
    return t == Truncated::constant(Q(1), t.order());
}

bool Scalar::is_unit() const {
    return is_rational() ? rational() != 0 : truncated().is_unit();
}

Scalar Scalar::inverse() const {
    if (is_rational()) {
        if (rational() == 0) throw AlgebraError("division by zero");
        return Scalar(Q(1) / rational());
    }
    return Scalar(truncated().inverse());
}

Truncated Scalar::as_truncated(int order) const {
    if (is_rational()) return Truncated::constant(rational(), order);
    if (truncated().order() != order) throw AlgebraError("truncation orders differ");
    return truncated();
}

namespace {
enum class Op { Add, Sub, Mul };

Q apply(Op op, const Q& x, const Q& y) {
    switch (op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        default: return x * y;
    }
}

Truncated apply(Op op, const Truncated& x, const Truncated& y) {
    switch (op) {
        case Op::Add: return x + y;
        case Op::Sub: return x - y;
        default: return x * y;
    }
}

Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    if (a.is_rational() && b.is_rational()) return Scalar(apply(op, a.rational(), b.rational()));
    int n = a.is_truncated() ? a.order() : b.order();
    return Scalar(apply(op, a.as_truncated(n), b.as_truncated(n)));
}
}  // namespace

Scalar Scalar::operator+(const Scalar& o) const { return combine(*this, o, Op::Add); }
Scalar Scalar::operator-(const Scalar& o) const { return combine(*this, o, Op::Sub); }
Scalar Scalar::operator*(const Scalar& o) const { return combine(*this, o, Op::Mul); }

Scalar Scalar::operator-() const {
    if (is_rational()) return Scalar(Q(-rational()));
    return Scalar(-truncated());
}

bool Scalar::operator==(const Scalar& o) const {
    if (is_rational() && o.is_rational()) return rational() == o.rational();
    int n = is_truncated() ? order() : o.order();
    if (is_truncated() && o.is_truncated() && order() != o.order()) return false;
    return as_truncated(n) == o.as_truncated(n);
}

std::string Scalar::str() const {
    return is_rational() ? q_str(rational()) : "(" + truncated().str() + ")";
}

}  // namespace rk
