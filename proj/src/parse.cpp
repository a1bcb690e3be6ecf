#include "resolvekit/parse.hpp"

#include <cctype>

namespace rk {

ParseError::ParseError(const std::string& msg, size_t col)
    : std::runtime_error(msg + " at column " + std::to_string(col + 1)), column(col) {}

namespace {

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    Poly run() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("empty polynomial", pos_);
        Poly p = expr();
        skip();
        if (pos_ < s_.size()) {
            if (starts_operand()) throw ParseError("implicit multiplication is not allowed", pos_);
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        }
        return p;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool starts_operand() const {
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            skip();
            if (pos_ >= s_.size()) break;
            char c = s_[pos_];
            if (c != '+' && c != '-') break;
            ++pos_;
            Poly rhs = term();
            acc = (c == '+') ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            skip();
            if (pos_ >= s_.size() || s_[pos_] != '*') break;
            ++pos_;
            acc = acc * unary();
        }
        return acc;
    }

    Poly unary() {
        skip();
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            bool neg = s_[pos_] == '-';
            ++pos_;
            Poly p = unary();
            return neg ? -p : p;
        }
        return power();
    }

    Poly power() {
        Poly base = primary();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            skip();
            size_t start = pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError("exponent must be a nonnegative integer", pos_);
            long k = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                k = k * 10 + (s_[pos_] - '0');
                if (k > 100000) throw ParseError("exponent too large", start);
                ++pos_;
            }
            base = base.pow(static_cast<int>(k));
        }
        return base;
    }

    std::string integer() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    Poly primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            std::string num = integer();
            std::string den = "1";
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                den = integer();
                if (den.empty()) throw ParseError("expected denominator", pos_);
            }
            if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                throw ParseError("implicit multiplication is not allowed", pos_);
            Q q(num + "/" + den);
            if (q.get_den() == 0) throw ParseError("zero denominator", start);
            q.canonicalize();
            return Poly::constant(vars_, Scalar(q));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            for (const auto& v : vars_)
                if (v == name) return Poly::variable(vars_, name);
            throw ParseError("unknown variable '" + name + "'", start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& vars) {
    return Parser(text, vars).run();
}

}  // namespace rk
