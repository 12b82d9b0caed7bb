#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace morse {

/// Second-order forward-mode value in the three ambient variables x,y,z.
/// Everything else (t, parameters) enters expressions as passive scalars.
struct Jet {
    double v = 0;
    std::array<double, 3> g{0, 0, 0};
    std::array<double, 9> h{0, 0, 0, 0, 0, 0, 0, 0, 0}; // row-major 3x3, symmetric

    static Jet constant(double c) { return Jet{c, {0, 0, 0}, {0}}; }
    static Jet variable(double value, int axis) {
        Jet j = constant(value);
        j.g[static_cast<std::size_t>(axis)] = 1;
        return j;
    }
    double hess(int i, int j) const { return h[static_cast<std::size_t>(3 * i + j)]; }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet jet_exp(const Jet& a);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);
Jet jet_sqrt(const Jet& a);
Jet jet_log(const Jet& a);
Jet jet_pow(const Jet& a, double p);
/// exp(-1/(1-x^2)) on (-1,1), 0 outside; all derivatives vanish at the ends.
Jet jet_bump(const Jet& a);
/// Flat-ended smooth step built from e^{-1/x}: 0 for x<=0, 1 for x>=1.
Jet jet_smoothstep(const Jet& a);

double smoothstep(double x);
/// Inverse of smoothstep on (0,1), by bisection to 1e-15.
double smoothstep_inv(double y);
double bump_value(double x);

/// Variable slots an expression may reference.
/// x,y,z are ambient surface coordinates; t is flow time; s1..s3 homotopy
/// parameters (s1 innermost, matching the scan order); u1,u2 chart coords.
struct EvalEnv {
    double x = 0, y = 0, z = 0;
    double t = 0;
    double s1 = 0, s2 = 0, s3 = 0;
    double u1 = 0, u2 = 0;
};

/// Parsed scalar expression: arithmetic, ^, exp, sin, cos, sqrt, log,
/// bump, smoothstep, plus leading named bindings
/// ("let a = ...; let b = ...; final"), each evaluated once.
/// Compiled to a flat program, cheap to evaluate.
class Expression {
public:
    static Expression parse(const std::string& text);

    double value(const EvalEnv& env) const;
    /// Value with first and second ambient derivatives (w.r.t. x,y,z).
    Jet jet(const EvalEnv& env) const;
    /// Value with first ambient derivatives only; the flow-field fast path.
    void grad(const EvalEnv& env, double& value, std::array<double, 3>& g) const;

    const std::string& text() const { return text_; }
    bool empty() const { return code_.empty(); }

private:
    enum class Op : std::uint8_t {
        Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sqrt, Log, Bump, SmoothStep
    };
    struct Instr {
        Op op;
        int a = -1, b = -1; // operand slots
        double c = 0;       // constant payload / pow exponent
        int var = -1;       // variable index for Var
    };
    std::string text_;
    std::vector<Instr> code_;
    friend class ExprParser;
};

} // namespace morse
