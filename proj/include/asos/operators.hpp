#ifndef ASOS_OPERATORS_HPP
#define ASOS_OPERATORS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "asos/errors.hpp"

namespace asos::sym {

// ---------------------------------------------------------------------------
// Symbol operator library. Values are scalars or lists; booleans are 0/1.
// Division-style domain errors yield a large sentinel plus a fault flag so
// evolution can keep scoring degenerate candidates.
// ---------------------------------------------------------------------------

constexpr double kFaultValue = 1e30;

struct SymVal {
    bool is_list = false;
    double x = 0.0;
    std::vector<double> xs;

    SymVal() = default;
    SymVal(double v) : x(v) {}
    static SymVal list(std::vector<double> v) {
        SymVal s;
        s.is_list = true;
        s.xs = std::move(v);
        return s;
    }
    double scalar() const { return is_list ? (xs.empty() ? 0.0 : xs.front()) : x; }
    std::vector<double> as_list() const { return is_list ? xs : std::vector<double>{x}; }
    bool truthy() const { return scalar() != 0.0; }
    bool operator==(const SymVal&) const = default;
};

enum class OpKind {
    Add, Sub, Mul, Div, MAX, MIN, Max1, Min1, Sign, X01, Inv, Neg, Abs, Sum, Sum3,
    LimUp, LimDown, Const0, Const01, Const1, Comb,
    And, Or, Eq, Gt, Lt, Not,
    IfElse, WhileStart, WhileEnd,
};

enum class OpCategory { Arithmetic, Logical, Conditional };

struct OperatorDef {
    OpKind kind;
    const char* name;
    int arity;            // Comb is list construction, fixed at 3 connections
    OpCategory category;
};

inline const std::array<OperatorDef, 30>& operator_library() {
    static const std::array<OperatorDef, 30> defs = {{
        {OpKind::Add, "Add", 2, OpCategory::Arithmetic},
        {OpKind::Sub, "Sub", 2, OpCategory::Arithmetic},
        {OpKind::Mul, "Mul", 2, OpCategory::Arithmetic},
        {OpKind::Div, "Div", 2, OpCategory::Arithmetic},
        {OpKind::MAX, "MAX", 1, OpCategory::Arithmetic},
        {OpKind::MIN, "MIN", 1, OpCategory::Arithmetic},
        {OpKind::Max1, "Max1", 1, OpCategory::Arithmetic},
        {OpKind::Min1, "Min1", 1, OpCategory::Arithmetic},
        {OpKind::Sign, "Sign", 1, OpCategory::Arithmetic},
        {OpKind::X01, "x01", 1, OpCategory::Arithmetic},
        {OpKind::Inv, "Inv", 1, OpCategory::Arithmetic},
        {OpKind::Neg, "Neg", 1, OpCategory::Arithmetic},
        {OpKind::Abs, "Abs", 1, OpCategory::Arithmetic},
        {OpKind::Sum, "Sum", 1, OpCategory::Arithmetic},
        {OpKind::Sum3, "Sum3", 3, OpCategory::Arithmetic},
        {OpKind::LimUp, "LimUp", 2, OpCategory::Arithmetic},
        {OpKind::LimDown, "LimDown", 2, OpCategory::Arithmetic},
        {OpKind::Const0, "Const0", 0, OpCategory::Arithmetic},
        {OpKind::Const01, "Const01", 0, OpCategory::Arithmetic},
        {OpKind::Const1, "Const1", 0, OpCategory::Arithmetic},
        {OpKind::Comb, "Comb", 3, OpCategory::Arithmetic},
        {OpKind::And, "And", 2, OpCategory::Logical},
        {OpKind::Or, "Or", 2, OpCategory::Logical},
        {OpKind::Eq, "Eq", 2, OpCategory::Logical},
        {OpKind::Gt, "Gt", 2, OpCategory::Logical},
        {OpKind::Lt, "Lt", 2, OpCategory::Logical},
        {OpKind::Not, "Not", 1, OpCategory::Logical},
        {OpKind::IfElse, "If-else", 1, OpCategory::Conditional},
        {OpKind::WhileStart, "While_start", 1, OpCategory::Conditional},
        {OpKind::WhileEnd, "While_end", 1, OpCategory::Conditional},
    }};
    return defs;
}

inline const OperatorDef& operator_def(OpKind k) {
    return operator_library()[static_cast<std::size_t>(k)];
}

/// Ratio parameters used by LimUp / LimDown.
struct OperatorContext {
    double upper_limit_ratio = 0.1;
    double lower_limit_ratio = 0.1;
};

namespace detail {

/// x >= y*(1+r), evaluated through the relative spread so that integral
/// prices hit the boundary exactly (e.g. LimUp(110, 100) at r=0.1).
inline bool lim_up_fires(double x, double y, double r) {
    if (y > 0.0) return (x - y) / y >= r;
    return x >= y * (1.0 + r);
}

inline bool lim_down_fires(double x, double y, double r) {
    if (y > 0.0) return (y - x) / y >= r;
    return x <= y * (1.0 - r);
}

inline SymVal binary_elementwise(const SymVal& a, const SymVal& b, bool* fault,
                                 double (*f)(double, double, bool*)) {
    if (!a.is_list && !b.is_list) return SymVal(f(a.x, b.x, fault));
    std::vector<double> av = a.as_list(), bv = b.as_list();
    std::size_t n = std::max(av.size(), bv.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double l = a.is_list ? (i < av.size() ? av[i] : 0.0) : a.x;
        double r = b.is_list ? (i < bv.size() ? bv[i] : 0.0) : b.x;
        out[i] = f(l, r, fault);
    }
    return SymVal::list(std::move(out));
}

inline SymVal unary_elementwise(const SymVal& a, bool* fault, double (*f)(double, bool*)) {
    if (!a.is_list) return SymVal(f(a.x, fault));
    std::vector<double> out;
    out.reserve(a.xs.size());
    for (double v : a.xs) out.push_back(f(v, fault));
    return SymVal::list(std::move(out));
}

} // namespace detail

/// Evaluates one library operator on already-checked operands. `fault` is set
/// (never cleared) on domain errors.
inline SymVal eval_operator(OpKind kind, const std::vector<SymVal>& args, const OperatorContext& ctx,
                            bool* fault) {
    const OperatorDef& def = operator_def(kind);
    if (static_cast<int>(args.size()) != def.arity)
        throw ContractError(std::string(def.name) + " expects " + std::to_string(def.arity) +
                            " arguments, got " + std::to_string(args.size()));
    switch (kind) {
        case OpKind::Add:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a + b; });
        case OpKind::Sub:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a - b; });
        case OpKind::Mul:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a * b; });
        case OpKind::Div:
            return detail::binary_elementwise(args[0], args[1], fault, [](double a, double b, bool* f) {
                if (b == 0.0) {
                    if (f) *f = true;
                    return kFaultValue;
                }
                return a / b;
            });
        case OpKind::MAX: {
            auto v = args[0].as_list();
            if (v.empty()) { if (fault) *fault = true; return SymVal(kFaultValue); }
            return SymVal(*std::max_element(v.begin(), v.end()));
        }
        case OpKind::MIN: {
            auto v = args[0].as_list();
            if (v.empty()) { if (fault) *fault = true; return SymVal(kFaultValue); }
            return SymVal(*std::min_element(v.begin(), v.end()));
        }
        case OpKind::Max1:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) { return std::max(a, 0.0); });
        case OpKind::Min1:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) { return std::min(a, 0.0); });
        case OpKind::Sign:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) {
                return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
            });
        case OpKind::X01:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) { return 0.1 * a; });
        case OpKind::Inv:
            return detail::unary_elementwise(args[0], fault, [](double a, bool* f) {
                if (a == 0.0) {
                    if (f) *f = true;
                    return kFaultValue;
                }
                return 1.0 / a;
            });
        case OpKind::Neg:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) { return -a; });
        case OpKind::Abs:
            return detail::unary_elementwise(args[0], fault, [](double a, bool*) { return std::fabs(a); });
        case OpKind::Sum: {
            double s = 0.0;
            for (double v : args[0].as_list()) s += v;
            return SymVal(s);
        }
        case OpKind::Sum3: {
            auto xs = args[0].as_list();
            auto ys = args[1].as_list();
            double z = args[2].scalar();
            double s = 0.0;
            for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
                if (xs[i] >= z) s += ys[i];
            return SymVal(s);
        }
        case OpKind::LimUp:
            return SymVal(detail::lim_up_fires(args[0].scalar(), args[1].scalar(), ctx.upper_limit_ratio)
                              ? 1.0 : 0.0);
        case OpKind::LimDown:
            return SymVal(detail::lim_down_fires(args[0].scalar(), args[1].scalar(), ctx.lower_limit_ratio)
                              ? 1.0 : 0.0);
        case OpKind::Const0: return SymVal(0.0);
        case OpKind::Const01: return SymVal(0.1);
        case OpKind::Const1: return SymVal(1.0);
        case OpKind::Comb: {
            std::vector<double> out;
            for (const auto& a : args)
                for (double v : a.as_list()) out.push_back(v);
            return SymVal::list(std::move(out));
        }
        case OpKind::And:
            return detail::binary_elementwise(args[0], args[1], fault, [](double a, double b, bool*) {
                return (a != 0.0 && b != 0.0) ? 1.0 : 0.0;
            });
        case OpKind::Or:
            return detail::binary_elementwise(args[0], args[1], fault, [](double a, double b, bool*) {
                return (a != 0.0 || b != 0.0) ? 1.0 : 0.0;
            });
        case OpKind::Eq:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a == b ? 1.0 : 0.0; });
        case OpKind::Gt:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a > b ? 1.0 : 0.0; });
        case OpKind::Lt:
            return detail::binary_elementwise(args[0], args[1], fault,
                                              [](double a, double b, bool*) { return a < b ? 1.0 : 0.0; });
        case OpKind::Not:
            return detail::unary_elementwise(args[0], fault,
                                             [](double a, bool*) { return a == 0.0 ? 1.0 : 0.0; });
        // Control operators pass their operand through; the program runner
        // owns their branching/looping effect.
        case OpKind::IfElse:
        case OpKind::WhileStart:
        case OpKind::WhileEnd:
            return args[0];
    }
    throw ContractError("unknown operator");
}

} // namespace asos::sym

#endif
