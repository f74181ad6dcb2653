#include <catch2/catch_amalgamated.hpp>

#include "asos/operators.hpp"

using namespace asos::sym;

namespace {

SymVal ev(OpKind k, std::vector<SymVal> args, const OperatorContext& ctx = {}, bool* fault = nullptr) {
    bool local = false;
    SymVal v = eval_operator(k, args, ctx, fault ? fault : &local);
    return v;
}

} // namespace

TEST_CASE("library holds exactly the published operator set") {
    const auto& lib = operator_library();
    REQUIRE(lib.size() == 30);
    std::vector<std::string> names;
    for (const auto& d : lib) names.push_back(d.name);
    CHECK(names == std::vector<std::string>{
        "Add", "Sub", "Mul", "Div", "MAX", "MIN", "Max1", "Min1", "Sign", "x01", "Inv", "Neg",
        "Abs", "Sum", "Sum3", "LimUp", "LimDown", "Const0", "Const01", "Const1", "Comb",
        "And", "Or", "Eq", "Gt", "Lt", "Not", "If-else", "While_start", "While_end"});
}

TEST_CASE("arithmetic operators match their printed definitions") {
    CHECK(ev(OpKind::Add, {2.0, 3.0}).scalar() == 5.0);
    CHECK(ev(OpKind::Sub, {2.0, 3.0}).scalar() == -1.0);
    CHECK(ev(OpKind::Mul, {2.0, 3.0}).scalar() == 6.0);
    CHECK(ev(OpKind::Div, {6.0, 3.0}).scalar() == 2.0);
    CHECK(ev(OpKind::MAX, {SymVal::list({1.0, 7.0, 3.0})}).scalar() == 7.0);
    CHECK(ev(OpKind::MIN, {SymVal::list({1.0, 7.0, 3.0})}).scalar() == 1.0);
    CHECK(ev(OpKind::Max1, {-2.0}).scalar() == 0.0);
    CHECK(ev(OpKind::Max1, {2.0}).scalar() == 2.0);
    CHECK(ev(OpKind::Min1, {-2.0}).scalar() == -2.0);
    CHECK(ev(OpKind::Min1, {2.0}).scalar() == 0.0);
    CHECK(ev(OpKind::X01, {5.0}).scalar() == 0.5);
    CHECK(ev(OpKind::Inv, {4.0}).scalar() == 0.25);
    CHECK(ev(OpKind::Neg, {4.0}).scalar() == -4.0);
    CHECK(ev(OpKind::Abs, {-4.0}).scalar() == 4.0);
    CHECK(ev(OpKind::Sum, {SymVal::list({1.0, 2.0, 3.0})}).scalar() == 6.0);
    CHECK(ev(OpKind::Const0, {}).scalar() == 0.0);
    CHECK(ev(OpKind::Const01, {}).scalar() == 0.1);
    CHECK(ev(OpKind::Const1, {}).scalar() == 1.0);
}

TEST_CASE("Sign is the three-way piecewise function") {
    CHECK(ev(OpKind::Sign, {3.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Sign, {0.0}).scalar() == 0.0);
    CHECK(ev(OpKind::Sign, {-0.5}).scalar() == -1.0);
}

TEST_CASE("vector arithmetic is element-wise with scalar broadcast") {
    auto v = ev(OpKind::Add, {SymVal::list({1.0, 2.0}), SymVal::list({10.0, 20.0})});
    CHECK(v.as_list() == std::vector<double>{11.0, 22.0});
    auto w = ev(OpKind::Mul, {SymVal::list({1.0, 2.0}), SymVal(3.0)});
    CHECK(w.as_list() == std::vector<double>{3.0, 6.0});
}

TEST_CASE("Sum3 selects elements of y whose x counterpart reaches the threshold") {
    // hand-applied: x = [1,5,2] against z=2 selects indices 1 and 2 -> 20+30
    auto v = ev(OpKind::Sum3, {SymVal::list({1.0, 5.0, 2.0}), SymVal::list({10.0, 20.0, 30.0}), 2.0});
    CHECK(v.scalar() == 50.0);
}

TEST_CASE("LimUp and LimDown fire inclusively at the threshold") {
    OperatorContext ctx{0.1, 0.1};
    // hand-applied boundary: 110 >= 100 * 1.1
    CHECK(ev(OpKind::LimUp, {110.0, 100.0}, ctx).scalar() == 1.0);
    CHECK(ev(OpKind::LimUp, {109.9, 100.0}, ctx).scalar() == 0.0);
    CHECK(ev(OpKind::LimDown, {90.0, 100.0}, ctx).scalar() == 1.0);
    CHECK(ev(OpKind::LimDown, {90.1, 100.0}, ctx).scalar() == 0.0);
}

TEST_CASE("Comb concatenates operands into one list") {
    auto v = ev(OpKind::Comb, {1.0, SymVal::list({2.0, 3.0}), 4.0});
    CHECK(v.as_list() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("logical operators return 0/1") {
    CHECK(ev(OpKind::And, {1.0, 0.0}).scalar() == 0.0);
    CHECK(ev(OpKind::And, {1.0, 2.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Or, {0.0, 2.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Eq, {2.0, 2.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Gt, {3.0, 2.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Lt, {3.0, 2.0}).scalar() == 0.0);
    CHECK(ev(OpKind::Not, {0.0}).scalar() == 1.0);
    CHECK(ev(OpKind::Not, {5.0}).scalar() == 0.0);
}

TEST_CASE("division-style domain errors yield the sentinel and a fault flag") {
    bool fault = false;
    CHECK(ev(OpKind::Div, {1.0, 0.0}, {}, &fault).scalar() == kFaultValue);
    CHECK(fault);
    fault = false;
    CHECK(ev(OpKind::Inv, {0.0}, {}, &fault).scalar() == kFaultValue);
    CHECK(fault);
}

TEST_CASE("arity mismatch is a contract error") {
    bool fault = false;
    CHECK_THROWS_AS(eval_operator(OpKind::Add, {SymVal(1.0)}, {}, &fault), asos::ContractError);
    CHECK_THROWS_AS(eval_operator(OpKind::Const1, {SymVal(1.0)}, {}, &fault), asos::ContractError);
}
