#include <doctest.h>

#include <random>

#include "hyptctl/model.hpp"
#include "hyptctl/model_parser.hpp"

using namespace hyptctl;

namespace {

Pta fig1_revised() {
    // the revised drift generator: guards p1-1 < c < p1 and 2 < c < 3
    return parse_pta(
        "pta clkgen\nclocks c;\nparams p1;\n"
        "loc l0 initial labels {H} inv c <= p1;\n"
        "loc l1 labels {L} inv c <= 3;\n"
        "edge l0 -> l1 when p1 - 1 < c & c < p1 reset {c};\n"
        "edge l1 -> l0 when 2 < c & c < 3;\n");
}

}  // namespace

TEST_CASE("eval_guard on the drift-generator guard") {
    std::set<std::string> clocks{"c"}, params{"p1"};
    Guard g = parse_guard_text("p1 - 1 < c & c < p1", clocks, params);
    ClockValuation mu{{"c", Rational(3, 2)}};
    ParamValuation v{{"p1", Rational(9, 5)}};
    CHECK(eval_guard(g, mu, v));

    CHECK(eval_guard(Guard::top(), {}, {}));  // empty conjunction

    Guard g2 = parse_guard_text("c < p1", clocks, params);
    CHECK_FALSE(eval_guard(g2, {{"c", Rational(2)}}, {{"p1", Rational(9, 5)}}));
}

TEST_CASE("eval_guard reports unknown identifiers") {
    std::set<std::string> clocks{"c"}, params{"p1"};
    Guard g = parse_guard_text("c < p1", clocks, params);
    CHECK_THROWS_AS(eval_guard(g, {}, {{"p1", Rational(1)}}), IdentifierError);
    CHECK_THROWS_AS(eval_guard(g, {{"c", Rational(1)}}, {}), IdentifierError);
}

TEST_CASE("valuate_pta substitutes parameters") {
    Pta a = fig1_revised();
    auto r = valuate_pta(a, {{"p1", Rational(2)}});
    CHECK(r.pta.params.empty());
    CHECK(r.scale == 1);
    CHECK(r.pta.locations[0].invariant.to_string() == "c <= 2");
    CHECK(r.pta.edges[0].guard.to_string() == "c > 1 & c < 2");

    // parameter-free model with the empty valuation is the identity
    Pta free = parse_pta("pta t\nclocks c;\nloc a initial inv c <= 3;\nedge a -> a when c >= 1 reset {c};\n");
    auto rf = valuate_pta(free, {});
    CHECK(rf.pta.locations[0].invariant == free.locations[0].invariant);
    CHECK(rf.pta.edges[0].guard == free.edges[0].guard);
}

TEST_CASE("valuate_pta rescales by the lcm of denominators") {
    Pta a = fig1_revised();
    auto r = valuate_pta(a, {{"p1", Rational(3, 2)}}, /*rescale=*/true);
    CHECK(r.scale == 2);
    CHECK(r.pta.locations[0].invariant.to_string() == "c <= 3");
    CHECK(r.pta.edges[0].guard.to_string() == "c > 1 & c < 3");
    CHECK(r.pta.locations[1].invariant.to_string() == "c <= 6");
}

TEST_CASE("valuate_pta requires a total valuation") {
    CHECK_THROWS_AS(valuate_pta(fig1_revised(), {}), IdentifierError);
}

TEST_CASE("validate_pta") {
    CHECK(validate_pta(fig1_revised()).empty());

    Pta bad = fig1_revised();
    bad.edges.push_back({0, Guard::top(), {}, 7});
    auto diags = validate_pta(bad);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Diagnostic::Severity::Error);

    Pta loop = parse_pta("pta t\nloc a initial;\nedge a -> a;\n");
    auto warn = validate_pta(loop);
    REQUIRE(warn.size() == 1);
    CHECK(warn[0].severity == Diagnostic::Severity::Warning);
}

TEST_CASE("eval_guard is monotone in upper-bound parameters") {
    // for c < lt with a positive coefficient on p, raising p never flips
    // a satisfied atom to false
    std::set<std::string> clocks{"c"}, params{"p"};
    Guard g = parse_guard_text("c < 2*p + 1", clocks, params);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(0, 20);
    for (int i = 0; i < 200; ++i) {
        Rational c(num(rng), 4);
        Rational p(num(rng), 4);
        Rational bump(num(rng), 4);
        ClockValuation mu{{"c", c}};
        if (eval_guard(g, mu, {{"p", p}})) CHECK(eval_guard(g, mu, {{"p", p + bump}}));
    }
}

TEST_CASE("valuation commutes with substitution") {
    Pta a = fig1_revised();
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(0, 12);
    for (int i = 0; i < 100; ++i) {
        ParamValuation v{{"p1", Rational(num(rng), 2)}};
        ClockValuation mu{{"c", Rational(num(rng), 2)}};
        auto concrete = valuate_pta(a, v);
        for (size_t e = 0; e < a.edges.size(); ++e) {
            CHECK(eval_guard(a.edges[e].guard, mu, v) ==
                  eval_guard(concrete.pta.edges[e].guard, mu, {}));
        }
    }
}

TEST_CASE("model parser rejects malformed input") {
    CHECK_THROWS_AS(parse_pta("pta t\nloc a initial;\nedge a -> nowhere;\n"), ParseError);
    CHECK_THROWS_AS(parse_pta("pta t\nclocks c;\nloc a initial inv c <= q;\n"), ParseError);
    CHECK_THROWS_AS(parse_pta("pta t\nclocks c1, c2, c3;\nloc a initial inv c1 + c2 + c3 <= 1;\n"),
                    ParseError);
}

TEST_CASE("max_guard_constant") {
    Pta a = fig1_revised();
    CHECK(max_guard_constant(a, {{"p1", Rational(9, 5)}}) == 3);
    CHECK(max_guard_constant(a, {{"p1", Rational(7)}}) == 7);
}
