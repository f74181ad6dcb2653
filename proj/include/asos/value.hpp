#ifndef ASOS_VALUE_HPP
#define ASOS_VALUE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "asos/errors.hpp"

namespace asos {

enum class ValueKind { Real, Int, Bool, Seq, Cat };

inline const char* to_string(ValueKind k) {
    switch (k) {
        case ValueKind::Real: return "real";
        case ValueKind::Int: return "int";
        case ValueKind::Bool: return "bool";
        case ValueKind::Seq: return "seq";
        case ValueKind::Cat: return "cat";
    }
    return "?";
}

inline ValueKind value_kind_from_string(const std::string& s) {
    if (s == "real") return ValueKind::Real;
    if (s == "int") return ValueKind::Int;
    if (s == "bool") return ValueKind::Bool;
    if (s == "seq") return ValueKind::Seq;
    if (s == "cat") return ValueKind::Cat;
    throw ContractError("unknown value kind: " + s);
}

/// One property value. Categorical values are stored as integer codes.
class Value {
public:
    Value() : kind_(ValueKind::Real), real_(0.0) {}

    static Value real(double x) { Value v; v.kind_ = ValueKind::Real; v.real_ = x; return v; }
    static Value integer(std::int64_t x) { Value v; v.kind_ = ValueKind::Int; v.int_ = x; return v; }
    static Value boolean(bool x) { Value v; v.kind_ = ValueKind::Bool; v.int_ = x ? 1 : 0; return v; }
    static Value seq(std::vector<double> x) { Value v; v.kind_ = ValueKind::Seq; v.seq_ = std::move(x); return v; }
    static Value cat(std::int64_t code) { Value v; v.kind_ = ValueKind::Cat; v.int_ = code; return v; }

    static Value zero_of(ValueKind k) {
        switch (k) {
            case ValueKind::Real: return real(0.0);
            case ValueKind::Int: return integer(0);
            case ValueKind::Bool: return boolean(false);
            case ValueKind::Seq: return seq({});
            case ValueKind::Cat: return cat(0);
        }
        return real(0.0);
    }

    ValueKind kind() const { return kind_; }

    double as_real() const {
        switch (kind_) {
            case ValueKind::Real: return real_;
            case ValueKind::Int:
            case ValueKind::Bool:
            case ValueKind::Cat: return static_cast<double>(int_);
            case ValueKind::Seq:
                throw ContractError("sequence value used as scalar");
        }
        return 0.0;
    }

    std::int64_t as_int() const {
        switch (kind_) {
            case ValueKind::Int:
            case ValueKind::Bool:
            case ValueKind::Cat: return int_;
            case ValueKind::Real: return static_cast<std::int64_t>(real_);
            case ValueKind::Seq:
                throw ContractError("sequence value used as integer");
        }
        return 0;
    }

    bool as_bool() const { return kind_ == ValueKind::Real ? real_ != 0.0 : int_ != 0; }

    const std::vector<double>& as_seq() const {
        if (kind_ != ValueKind::Seq) throw ContractError("scalar value used as sequence");
        return seq_;
    }
    std::vector<double>& as_seq() {
        if (kind_ != ValueKind::Seq) throw ContractError("scalar value used as sequence");
        return seq_;
    }

    bool matches(ValueKind k) const { return kind_ == k; }

    /// Lossless-if-possible conversion used by node alteration. Throws
    /// ContractError when the stored value cannot represent the new kind.
    Value convert_to(ValueKind k) const {
        if (k == kind_) return *this;
        switch (k) {
            case ValueKind::Real:
                if (kind_ == ValueKind::Seq) throw ContractError("cannot convert sequence to real");
                return real(as_real());
            case ValueKind::Int:
                if (kind_ == ValueKind::Seq) throw ContractError("cannot convert sequence to int");
                if (kind_ == ValueKind::Real && real_ != static_cast<double>(static_cast<std::int64_t>(real_)))
                    throw ContractError("non-integral real cannot become int");
                return integer(as_int());
            case ValueKind::Bool: {
                if (kind_ == ValueKind::Seq) throw ContractError("cannot convert sequence to bool");
                std::int64_t i = as_int();
                double r = as_real();
                if ((i != 0 && i != 1) || (r != 0.0 && r != 1.0))
                    throw ContractError("only 0/1 convert to bool");
                return boolean(i == 1);
            }
            case ValueKind::Cat:
                if (kind_ != ValueKind::Int && kind_ != ValueKind::Bool)
                    throw ContractError("only integer values convert to categorical");
                return cat(as_int());
            case ValueKind::Seq:
                throw ContractError("cannot convert scalar to sequence");
        }
        throw ContractError("bad conversion");
    }

    bool operator==(const Value& o) const {
        if (kind_ != o.kind_) return false;
        if (kind_ == ValueKind::Real) return real_ == o.real_;
        if (kind_ == ValueKind::Seq) return seq_ == o.seq_;
        return int_ == o.int_;
    }

private:
    ValueKind kind_;
    double real_ = 0.0;
    std::int64_t int_ = 0;
    std::vector<double> seq_;
};

} // namespace asos

#endif
