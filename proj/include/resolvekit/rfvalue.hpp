// Values of the resolution function, totally ordered:
// Bottom < TPair(omega, n, tail) < Monomial(-G1, G2, G3) < Top.
#pragma once

#include "resolvekit/scalar.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rk {

class RFValue {
public:
    enum class Kind { Bottom = 0, TPair = 1, Monomial = 2, Top = 3 };

    RFValue() = default;
    static RFValue bottom(int dim);
    static RFValue top(int dim);
    static RFValue tpair(const Q& omega, int n, const RFValue& tail, int dim);
    // g1 is the positive subset size; it is stored negated.
    static RFValue monomial(int g1, const Q& g2, std::vector<int> g3, int dim);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Q& omega() const { return omega_; }
    int n() const { return n_; }
    const RFValue& tail() const { return *tail_; }
    bool has_tail() const { return static_cast<bool>(tail_); }
    int neg_g1() const { return neg_g1_; }
    const Q& g2() const { return g2_; }
    const std::vector<int>& g3() const { return g3_; }

    // Comparison ignores the dimension label, so values of a family and of
    // its fibers compare entry by entry.
    int compare(const RFValue& o) const;
    bool operator<(const RFValue& o) const { return compare(o) < 0; }
    bool operator>(const RFValue& o) const { return compare(o) > 0; }
    bool operator==(const RFValue& o) const { return compare(o) == 0; }
    bool operator!=(const RFValue& o) const { return compare(o) != 0; }
    bool operator<=(const RFValue& o) const { return compare(o) <= 0; }

    // Depth of nested TPairs before the terminal entry.
    int depth() const;
    std::string str() const;

private:
    Kind kind_ = Kind::Bottom;
    int dim_ = 0;
    Q omega_ = 0;
    int n_ = 0;
    std::shared_ptr<const RFValue> tail_;
    int neg_g1_ = 0;
    Q g2_ = 0;
    std::vector<int> g3_;
};

}  // namespace rk
