#include "morsetower/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

namespace morse {

namespace {

Jet chain(const Jet& a, double f, double f1, double f2) {
    // f(a): value f, df f1, d2f f2 at a.v
    Jet r;
    r.v = f;
    for (int i = 0; i < 3; ++i) r.g[static_cast<std::size_t>(i)] = f1 * a.g[static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.h[static_cast<std::size_t>(3 * i + j)] =
                f1 * a.hess(i, j) + f2 * a.g[static_cast<std::size_t>(i)] * a.g[static_cast<std::size_t>(j)];
    return r;
}

double h_of(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

} // namespace

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
    for (std::size_t i = 0; i < 9; ++i) r.h[i] = a.h[i] + b.h[i];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v - b.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] - b.g[i];
    for (std::size_t i = 0; i < 9; ++i) r.h[i] = a.h[i] - b.h[i];
    return r;
}

Jet operator-(const Jet& a) {
    Jet r;
    r.v = -a.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = -a.g[i];
    for (std::size_t i = 0; i < 9; ++i) r.h[i] = -a.h[i];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.h[static_cast<std::size_t>(3 * i + j)] =
                a.hess(i, j) * b.v + a.v * b.hess(i, j) +
                a.g[static_cast<std::size_t>(i)] * b.g[static_cast<std::size_t>(j)] +
                a.g[static_cast<std::size_t>(j)] * b.g[static_cast<std::size_t>(i)];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    // a/b = a * b^{-1}
    return a * chain(b, 1.0 / b.v, -1.0 / (b.v * b.v), 2.0 / (b.v * b.v * b.v));
}

Jet jet_exp(const Jet& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}
Jet jet_sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
Jet jet_cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
Jet jet_sqrt(const Jet& a) {
    const double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
Jet jet_log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

Jet jet_pow(const Jet& a, double p) {
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    if (p == 0.0) return Jet::constant(1.0);
    const double f = std::pow(a.v, p);
    const double f1 = p * std::pow(a.v, p - 1);
    const double f2 = p * (p - 1) * std::pow(a.v, p - 2);
    return chain(a, f, f1, f2);
}

Jet jet_bump(const Jet& a) {
    const double x = a.v;
    if (std::abs(x) >= 1.0) return Jet::constant(0.0);
    const double w = 1.0 - x * x;
    const double f = std::exp(-1.0 / w);
    const double f1 = f * (-2.0 * x / (w * w));
    // f'' = f * [ (2x/w^2)^2 - 2/w^2 - 8x^2/w^3 ]
    const double f2 = f * (4.0 * x * x / (w * w * w * w) - 2.0 / (w * w) - 8.0 * x * x / (w * w * w));
    return chain(a, f, f1, f2);
}

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = h_of(x), b = h_of(1.0 - x);
    return a / (a + b);
}

double smoothstep_inv(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (smoothstep(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double bump_value(double x) {
    return std::abs(x) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - x * x));
}

Jet jet_smoothstep(const Jet& a) {
    const double x = a.v;
    if (x <= 0.0 || x >= 1.0) return Jet::constant(x <= 0.0 ? 0.0 : 1.0);
    const double ha = h_of(x), hb = h_of(1.0 - x);
    const double ha1 = ha / (x * x);
    const double hb1 = hb / ((1.0 - x) * (1.0 - x)); // d/dx h(1-x) = -hb1
    const double ha2 = ha * (1.0 / (x * x * x * x) - 2.0 / (x * x * x));
    const double hb2 = hb * (1.0 / std::pow(1.0 - x, 4) - 2.0 / std::pow(1.0 - x, 3));
    const double s = ha + hb;
    const double s1 = ha1 - hb1;
    const double s2 = ha2 + hb2;
    const double f = ha / s;
    const double f1 = (ha1 * s - ha * s1) / (s * s);
    const double f2 = (ha2 * s - ha * s2) / (s * s) - 2.0 * s1 * (ha1 * s - ha * s1) / (s * s * s);
    return chain(a, f, f1, f2);
}

namespace {

int var_index(const std::string& name) {
    if (name == "x") return 0;
    if (name == "y") return 1;
    if (name == "z") return 2;
    if (name == "t") return 3;
    if (name == "s1") return 4;
    if (name == "s2") return 5;
    if (name == "s3") return 6;
    if (name == "u1") return 7;
    if (name == "u2") return 8;
    return -1;
}

double env_value(const EvalEnv& e, int idx) {
    switch (idx) {
        case 0: return e.x;
        case 1: return e.y;
        case 2: return e.z;
        case 3: return e.t;
        case 4: return e.s1;
        case 5: return e.s2;
        case 6: return e.s3;
        case 7: return e.u1;
        default: return e.u2;
    }
}

} // namespace

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) {}

    Expression run() {
        Expression e;
        e.text_ = text_;
        while (accept_word("let")) {
            skip_ws();
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            if (end == pos_) fail("expected a name after 'let'");
            const std::string name = text_.substr(pos_, end - pos_);
            pos_ = end;
            if (var_index(name) >= 0) fail("'" + name + "' shadows a builtin variable");
            if (!accept('=')) fail("expected '=' in let binding");
            const int slot = parse_expr();
            if (!accept(';')) fail("expected ';' after let binding");
            lets_[name] = slot;
        }
        root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        e.code_ = std::move(code_);
        return e;
    }

private:
    using Op = Expression::Op;

    const std::string& text_;
    std::size_t pos_ = 0;
    std::vector<Expression::Instr> code_;
    std::map<std::string, int> lets_;
    int root_ = -1;

    bool accept_word(const char* w) {
        skip_ws();
        const std::size_t n = std::strlen(w);
        if (text_.compare(pos_, n, w) != 0) return false;
        const std::size_t after = pos_ + n;
        if (after < text_.size() &&
            (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
            return false;
        pos_ = after;
        return true;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(pos_) +
                                    ": " + why + " in '" + text_ + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int emit(Expression::Instr in) {
        code_.push_back(in);
        return static_cast<int>(code_.size()) - 1;
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = emit({Op::Add, lhs, parse_term(), 0, -1});
            else if (accept('-')) lhs = emit({Op::Sub, lhs, parse_term(), 0, -1});
            else return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = emit({Op::Mul, lhs, parse_factor(), 0, -1});
            else if (accept('/')) lhs = emit({Op::Div, lhs, parse_factor(), 0, -1});
            else return lhs;
        }
    }

    int parse_factor() {
        int base = parse_unary();
        if (accept('^')) {
            // exponent must be a numeric literal (possibly negated)
            skip_ws();
            bool neg = accept('-');
            const double p = parse_number_literal() * (neg ? -1.0 : 1.0);
            return emit({Op::Pow, base, -1, p, -1});
        }
        return base;
    }

    int parse_unary() {
        if (accept('-')) return emit({Op::Neg, parse_unary(), -1, 0, -1});
        return parse_primary();
    }

    double parse_number_literal() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
            ++end;
        if (end == pos_) fail("expected number");
        const double v = std::stod(text_.substr(pos_, end - pos_));
        pos_ = end;
        return v;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return emit({Op::Const, -1, -1, parse_number_literal(), -1});
        if (c == '(') {
            ++pos_;
            int e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            const std::string name = text_.substr(pos_, end - pos_);
            pos_ = end;
            if (accept('(')) {
                int arg = parse_expr();
                if (!accept(')')) fail("expected ')' after function argument");
                if (name == "exp") return emit({Op::Exp, arg, -1, 0, -1});
                if (name == "sin") return emit({Op::Sin, arg, -1, 0, -1});
                if (name == "cos") return emit({Op::Cos, arg, -1, 0, -1});
                if (name == "sqrt") return emit({Op::Sqrt, arg, -1, 0, -1});
                if (name == "log") return emit({Op::Log, arg, -1, 0, -1});
                if (name == "bump") return emit({Op::Bump, arg, -1, 0, -1});
                if (name == "smoothstep") return emit({Op::SmoothStep, arg, -1, 0, -1});
                fail("unknown function '" + name + "'");
            }
            if (name == "pi") return emit({Op::Const, -1, -1, 3.14159265358979323846, -1});
            const auto let_it = lets_.find(name);
            if (let_it != lets_.end()) return let_it->second;
            const int vi = var_index(name);
            if (vi < 0) fail("unknown variable '" + name + "'");
            return emit({Op::Var, -1, -1, 0, vi});
        }
        fail("unexpected character");
    }
};

Expression Expression::parse(const std::string& text) { return ExprParser(text).run(); }

double Expression::value(const EvalEnv& env) const {
    thread_local std::vector<double> scratch;
    scratch.resize(code_.size());
    std::vector<double>& slot = scratch;
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const double a = in.a >= 0 ? slot[static_cast<std::size_t>(in.a)] : 0;
        const double b = in.b >= 0 ? slot[static_cast<std::size_t>(in.b)] : 0;
        switch (in.op) {
            case Op::Const: slot[i] = in.c; break;
            case Op::Var: slot[i] = env_value(env, in.var); break;
            case Op::Add: slot[i] = a + b; break;
            case Op::Sub: slot[i] = a - b; break;
            case Op::Mul: slot[i] = a * b; break;
            case Op::Div: slot[i] = a / b; break;
            case Op::Neg: slot[i] = -a; break;
            case Op::Pow: slot[i] = in.c == 2.0 ? a * a : std::pow(a, in.c); break;
            case Op::Exp: slot[i] = std::exp(a); break;
            case Op::Sin: slot[i] = std::sin(a); break;
            case Op::Cos: slot[i] = std::cos(a); break;
            case Op::Sqrt: slot[i] = std::sqrt(a); break;
            case Op::Log: slot[i] = std::log(a); break;
            case Op::Bump: {
                slot[i] = std::abs(a) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - a * a));
                break;
            }
            case Op::SmoothStep: slot[i] = smoothstep(a); break;
        }
    }
    return code_.empty() ? 0.0 : slot.back();
}

void Expression::grad(const EvalEnv& env, double& value, std::array<double, 3>& g) const {
    struct V {
        double v;
        double g0, g1, g2;
    };
    thread_local std::vector<V> scratch;
    scratch.resize(code_.size());
    std::vector<V>& slot = scratch;
    auto un = [](const V& a, double f, double f1) {
        return V{f, f1 * a.g0, f1 * a.g1, f1 * a.g2};
    };
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const V a = in.a >= 0 ? slot[static_cast<std::size_t>(in.a)] : V{0, 0, 0, 0};
        const V b = in.b >= 0 ? slot[static_cast<std::size_t>(in.b)] : V{0, 0, 0, 0};
        switch (in.op) {
            case Op::Const: slot[i] = {in.c, 0, 0, 0}; break;
            case Op::Var: {
                const double v = env_value(env, in.var);
                slot[i] = {v, in.var == 0 ? 1.0 : 0.0, in.var == 1 ? 1.0 : 0.0,
                           in.var == 2 ? 1.0 : 0.0};
                break;
            }
            case Op::Add: slot[i] = {a.v + b.v, a.g0 + b.g0, a.g1 + b.g1, a.g2 + b.g2}; break;
            case Op::Sub: slot[i] = {a.v - b.v, a.g0 - b.g0, a.g1 - b.g1, a.g2 - b.g2}; break;
            case Op::Mul:
                slot[i] = {a.v * b.v, a.g0 * b.v + a.v * b.g0, a.g1 * b.v + a.v * b.g1,
                           a.g2 * b.v + a.v * b.g2};
                break;
            case Op::Div: {
                const double inv = 1.0 / b.v, q = a.v * inv;
                slot[i] = {q, (a.g0 - q * b.g0) * inv, (a.g1 - q * b.g1) * inv,
                           (a.g2 - q * b.g2) * inv};
                break;
            }
            case Op::Neg: slot[i] = {-a.v, -a.g0, -a.g1, -a.g2}; break;
            case Op::Pow: {
                if (in.c == 2.0) {
                    slot[i] = {a.v * a.v, 2 * a.v * a.g0, 2 * a.v * a.g1, 2 * a.v * a.g2};
                } else {
                    const double f = std::pow(a.v, in.c);
                    slot[i] = un(a, f, in.c * std::pow(a.v, in.c - 1));
                }
                break;
            }
            case Op::Exp: {
                const double e = std::exp(a.v);
                slot[i] = un(a, e, e);
                break;
            }
            case Op::Sin: slot[i] = un(a, std::sin(a.v), std::cos(a.v)); break;
            case Op::Cos: slot[i] = un(a, std::cos(a.v), -std::sin(a.v)); break;
            case Op::Sqrt: {
                const double r = std::sqrt(a.v);
                slot[i] = un(a, r, 0.5 / r);
                break;
            }
            case Op::Log: slot[i] = un(a, std::log(a.v), 1.0 / a.v); break;
            case Op::Bump: {
                const double x = a.v;
                if (std::abs(x) >= 1.0) {
                    slot[i] = {0, 0, 0, 0};
                } else {
                    const double w = 1.0 - x * x;
                    const double f = std::exp(-1.0 / w);
                    slot[i] = un(a, f, f * (-2.0 * x / (w * w)));
                }
                break;
            }
            case Op::SmoothStep: {
                const double x = a.v;
                if (x <= 0.0 || x >= 1.0) {
                    slot[i] = {x <= 0.0 ? 0.0 : 1.0, 0, 0, 0};
                } else {
                    const double ha = h_of(x), hb = h_of(1.0 - x);
                    const double sden = ha + hb;
                    const double ha1 = ha / (x * x), hb1 = hb / ((1.0 - x) * (1.0 - x));
                    const double f = ha / sden;
                    const double f1 = (ha1 * sden - ha * (ha1 - hb1)) / (sden * sden);
                    slot[i] = un(a, f, f1);
                }
                break;
            }
        }
    }
    if (code_.empty()) {
        value = 0;
        g = {0, 0, 0};
        return;
    }
    const V& out = slot.back();
    value = out.v;
    g = {out.g0, out.g1, out.g2};
}

Jet Expression::jet(const EvalEnv& env) const {
    thread_local std::vector<Jet> scratch;
    scratch.resize(code_.size());
    std::vector<Jet>& slot = scratch;
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const Jet& a = in.a >= 0 ? slot[static_cast<std::size_t>(in.a)] : slot[i];
        const Jet& b = in.b >= 0 ? slot[static_cast<std::size_t>(in.b)] : slot[i];
        switch (in.op) {
            case Op::Const: slot[i] = Jet::constant(in.c); break;
            case Op::Var:
                slot[i] = in.var <= 2 ? Jet::variable(env_value(env, in.var), in.var)
                                      : Jet::constant(env_value(env, in.var));
                break;
            case Op::Add: slot[i] = a + b; break;
            case Op::Sub: slot[i] = a - b; break;
            case Op::Mul: slot[i] = a * b; break;
            case Op::Div: slot[i] = a / b; break;
            case Op::Neg: slot[i] = -a; break;
            case Op::Pow: slot[i] = jet_pow(a, in.c); break;
            case Op::Exp: slot[i] = jet_exp(a); break;
            case Op::Sin: slot[i] = jet_sin(a); break;
            case Op::Cos: slot[i] = jet_cos(a); break;
            case Op::Sqrt: slot[i] = jet_sqrt(a); break;
            case Op::Log: slot[i] = jet_log(a); break;
            case Op::Bump: slot[i] = jet_bump(a); break;
            case Op::SmoothStep: slot[i] = jet_smoothstep(a); break;
        }
    }
    return code_.empty() ? Jet::constant(0.0) : slot.back();
}

} // namespace morse
