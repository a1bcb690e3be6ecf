#include "resolvekit/rfvalue.hpp"

#include <algorithm>

namespace rk {

RFValue RFValue::bottom(int dim) {
    RFValue v;
    v.kind_ = Kind::Bottom;
    v.dim_ = dim;
    return v;
}

RFValue RFValue::top(int dim) {
    RFValue v;
    v.kind_ = Kind::Top;
    v.dim_ = dim;
    return v;
}

RFValue RFValue::tpair(const Q& omega, int n, const RFValue& tail, int dim) {
    RFValue v;
    v.kind_ = Kind::TPair;
    v.dim_ = dim;
    v.omega_ = omega;
    v.omega_.canonicalize();
    v.n_ = n;
    v.tail_ = std::make_shared<const RFValue>(tail);
    return v;
}

RFValue RFValue::monomial(int g1, const Q& g2, std::vector<int> g3, int dim) {
    RFValue v;
    v.kind_ = Kind::Monomial;
    v.dim_ = dim;
    v.neg_g1_ = -g1;
    v.g2_ = g2;
    v.g2_.canonicalize();
    v.g3_ = std::move(g3);
    return v;
}

int RFValue::compare(const RFValue& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
    switch (kind_) {
        case Kind::Bottom:
        case Kind::Top:
            return 0;
        case Kind::TPair: {
            if (omega_ != o.omega_) return omega_ < o.omega_ ? -1 : 1;
            if (n_ != o.n_) return n_ < o.n_ ? -1 : 1;
            return tail_->compare(*o.tail_);
        }
        case Kind::Monomial: {
            if (neg_g1_ != o.neg_g1_) return neg_g1_ < o.neg_g1_ ? -1 : 1;
            if (g2_ != o.g2_) return g2_ < o.g2_ ? -1 : 1;
            size_t len = std::max(g3_.size(), o.g3_.size());
            for (size_t i = 0; i < len; ++i) {
                int a = i < g3_.size() ? g3_[i] : 0;
                int b = i < o.g3_.size() ? o.g3_[i] : 0;
                if (a != b) return a < b ? -1 : 1;
            }
            return 0;
        }
    }
    return 0;
}

int RFValue::depth() const {
    return kind_ == Kind::TPair ? 1 + tail_->depth() : 0;
}

std::string RFValue::str() const {
    switch (kind_) {
        case Kind::Bottom:
            return "0_" + std::to_string(dim_);
        case Kind::Top:
            return "inf_" + std::to_string(dim_);
        case Kind::TPair:
            return "(" + q_str(omega_) + "," + std::to_string(n_) + "," + tail_->str() + ")";
        case Kind::Monomial: {
            std::string s = "G(" + std::to_string(neg_g1_) + "," + q_str(g2_) + ",[";
            for (size_t i = 0; i < g3_.size(); ++i) s += (i ? "," : "") + std::to_string(g3_[i]);
            return s + "])";
        }
    }
    return "?";
}

}  // namespace rk
