#include <doctest.h>

#include "hyptctl/formula_parser.hpp"
#include "hyptctl/fragment.hpp"
#include "hyptctl/model_parser.hpp"

using namespace hyptctl;

namespace {

Pta clkgen() {
    return parse_pta(
        "pta clkgen\nclocks c;\nparams p1;\n"
        "loc l0 initial labels {H} inv c <= p1;\n"
        "loc l1 labels {L} inv c <= 3;\n"
        "edge l0 -> l1 when c < p1 reset {c};\n"
        "edge l1 -> l0 when c < 3;\n");
}

Pta nonparametric_ta() {
    return parse_pta(
        "pta ta\nclocks x;\n"
        "loc a initial labels {Start};\n"
        "loc b labels {Private};\n"
        "loc g labels {Goal};\n"
        "edge a -> b when x >= 1 reset {x};\n"
        "edge a -> g when x >= 2;\n"
        "edge b -> g when x >= 1;\n"
        "edge g -> g when x >= 1 reset {x};\n");
}

TopPtr opacity() {
    return parse_formula(
        "E [pi1,pi2] ((~Goal@pi1 & ~Goal@pi2) U{= p} "
        "(Goal@pi1 & Goal@pi2 & COUNT(Private@pi1) = 0 & COUNT(Private@pi2) > 0))");
}

TopPtr deviation() {
    return parse_formula(
        "E [pi1,pi2] (((COUNT(H@pi1) - COUNT(H@pi2)) mod 4 in {0,1,3}) U "
        "((COUNT(H@pi1) - COUNT(H@pi2)) mod 4 = 0 & LAST(H@pi1) - LAST(H@pi2) not in [-p2, p2]))");
}

}  // namespace

TEST_CASE("the drift generator is an upper-bound-only L/U model") {
    FragmentReport r = classify_fragment(clkgen(), parse_formula("true"));
    CHECK(r.model_is_lu);
    CHECK(r.upper_bound_params == std::vector<std::string>{"p1"});
    CHECK(r.lower_bound_params.empty());
    CHECK_FALSE(r.model_nonparametric);
    CHECK(r.model_has_invariants);
    CHECK_FALSE(r.model_nonstandard_guards);
}

TEST_CASE("non-parametric model with restricted parameters is decidable") {
    FragmentReport r = classify_fragment(nonparametric_ta(), opacity());
    CHECK(r.model_nonparametric);
    CHECK_FALSE(r.formula_params_in_ext);
    CHECK_FALSE(r.formula_nonparametric);  // the bound uses p
    CHECK(r.max_path_vars == 2);
    CHECK(r.verdict == DecidabilityClass::NonparametricModelRestrictedFormula);
    CHECK(r.verdict_assumes_integer_params);
}

TEST_CASE("parametric model and parametric window fall back to the semi-algorithm") {
    FragmentReport r = classify_fragment(clkgen(), deviation());
    CHECK(r.model_is_lu);
    CHECK(r.formula_params_in_ext);
    CHECK_FALSE(r.formula_nonparametric);
    CHECK(r.verdict == DecidabilityClass::SemiAlgorithmOnly);
}

TEST_CASE("L/U models with non-parametric reachability formulas are decidable") {
    FragmentReport r = classify_fragment(clkgen(), parse_formula("E<> [pi1] (L@pi1)"));
    CHECK(r.formula_nonparametric);
    CHECK(r.formula_only_exists_diamond);
    CHECK(r.verdict == DecidabilityClass::LUModelReachability);

    // an until with a non-trivial left operand leaves the reachability class
    FragmentReport r2 =
        classify_fragment(clkgen(), parse_formula("E [pi1] ((H@pi1) U (L@pi1))"));
    CHECK_FALSE(r2.formula_only_exists_diamond);
    // still decidable when the model has no invariants
    Pta flat = clkgen();
    for (auto& loc : flat.locations) loc.invariant = Guard::top();
    FragmentReport r3 =
        classify_fragment(flat, parse_formula("E [pi1] ((H@pi1) U (L@pi1))"));
    CHECK_FALSE(r3.model_has_invariants);
    CHECK(r3.verdict == DecidabilityClass::LUModelNoInvariants);
}

TEST_CASE("single parametric clock over discrete time") {
    Pta m = parse_pta(
        "pta t\nclocks x, y;\nparams p;\n"
        "loc a initial labels {S} inv x <= p;\n"
        "loc g labels {Goal};\n"
        "edge a -> g when x >= p reset {y};\n"
        "edge g -> a when y >= 1 reset {x, y};\n");
    // x is both lower- and upper-bounded by p, so the model is not L/U
    FragmentReport dense = classify_fragment(m, parse_formula("E<> [pi1,pi2] (Goal@pi1 & Goal@pi2)"), false);
    CHECK_FALSE(dense.model_is_lu);
    CHECK(dense.verdict == DecidabilityClass::SemiAlgorithmOnly);
    FragmentReport disc = classify_fragment(m, parse_formula("E<> [pi1,pi2] (Goal@pi1 & Goal@pi2)"), true);
    CHECK(disc.parametric_clocks == 1);
    CHECK(disc.verdict == DecidabilityClass::SingleParametricClockDiscrete);
}

TEST_CASE("general linear guards are flagged as non-standard") {
    Pta m = parse_pta(
        "pta t\nclocks x;\nparams p, q;\n"
        "loc a initial labels {S};\nloc g labels {Goal};\n"
        "edge a -> g when x <= 2*p + q;\n");
    FragmentReport r = classify_fragment(m, parse_formula("E<> [pi1] (Goal@pi1)"));
    CHECK(r.model_nonstandard_guards);
    CHECK(r.verdict == DecidabilityClass::SemiAlgorithmOnly);
}

TEST_CASE("alternation-free prefix detection") {
    CHECK(classify_fragment(nonparametric_ta(),
                            parse_formula("exists p. exists q. (p > q)"))
              .alternation_free_param_quantifiers);
    CHECK_FALSE(classify_fragment(nonparametric_ta(),
                                  parse_formula("exists p. (forall q. (p > q))"))
                    .alternation_free_param_quantifiers);
}
