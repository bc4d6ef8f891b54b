#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyptctl/formula_parser.hpp"
#include "hyptctl/imitator.hpp"
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

ReductionArtifacts artifacts_for(const Pta& m, const std::string& formula) {
    TopPtr core = desugar(parse_formula(formula));
    REQUIRE(core->kind == TopExpr::Kind::Temporal);
    return build_reduction(m, core->temporal);
}

}  // namespace

TEST_CASE("the worked example renders to valid solver files") {
    auto art = artifacts_for(clkgen(),
        "E [pi1,pi2] (((COUNT(H@pi1) - COUNT(H@pi2)) mod 4 in {0,1,3}) U "
        "((COUNT(H@pi1) - COUNT(H@pi2)) mod 4 = 0 & LAST(H@pi1) - LAST(H@pi2) not in [-p2, p2]))");
    ImitatorFiles files = render_imitator(art);
    CHECK(validate_imi(files.model_text).empty());
    CHECK(validate_imiprop(files.property_text).empty());
    // the until property names both operand predicates
    CHECK(files.property_text.find("#synth EU(") != std::string::npos);
    // the legend survives as comments
    CHECK(files.model_text.find("__ext0") != std::string::npos);
}

TEST_CASE("a minimal model renders and validates") {
    Pta unit = parse_pta("pta unit\nloc only initial labels {Goal};\nedge only -> only when true reset {};\n");
    auto art = artifacts_for(unit, "E<> [pi1] (Goal@pi1)");
    ImitatorFiles files = render_imitator(art);
    CHECK(validate_imi(files.model_text).empty());
    CHECK(validate_imiprop(files.property_text).empty());
    CHECK(files.property_text.find("#synth EF(") != std::string::npos);
}

TEST_CASE("bounded properties ride on the absolute-time clock") {
    auto art = artifacts_for(clkgen(), "E<>{= p2} [pi1] (L@pi1)");
    ImitatorFiles files = render_imitator(art);
    CHECK(validate_imi(files.model_text).empty());
    CHECK(validate_imiprop(files.property_text).empty());
    // identifiers are mangled to the solver's letter-first convention
    CHECK(files.model_text.find("dur : clock") != std::string::npos);
    CHECK(files.property_text.find("dur = p2") != std::string::npos);
}

TEST_CASE("universal untils export with a notice") {
    auto art = artifacts_for(clkgen(), "A [pi1] ((H@pi1) U (L@pi1))");
    ImitatorFiles files = render_imitator(art);
    CHECK(validate_imi(files.model_text).empty());
    CHECK(validate_imiprop(files.property_text).empty());
    CHECK(files.property_text.find("#synth AU(") != std::string::npos);
    REQUIRE_FALSE(files.notes.empty());
    CHECK(files.notes[0].find("built-in") != std::string::npos);
}

TEST_CASE("multiple initial locations dispatch through an urgent location") {
    Pta multi = parse_pta(
        "pta multi\nclocks c;\n"
        "loc a initial labels {S};\nloc b initial labels {S};\nloc g labels {Goal};\n"
        "edge a -> g when c >= 1;\nedge b -> g when c >= 2;\nedge g -> g when c >= 1 reset {c};\n");
    auto art = artifacts_for(multi, "E<> [pi1] (Goal@pi1)");
    ImitatorFiles files = render_imitator(art);
    CHECK(validate_imi(files.model_text).empty());
    CHECK(files.model_text.find("urgent loc") != std::string::npos);
}

TEST_CASE("export writes both files to the output directory") {
    auto art = artifacts_for(clkgen(), "E<> [pi1] (L@pi1)");
    std::string dir = (std::filesystem::temp_directory_path() / "hyptctl_export_test").string();
    auto [mp, pp] = export_imitator(art, dir, "clkgen");
    std::ifstream mf(mp), pf(pp);
    REQUIRE(mf.good());
    REQUIRE(pf.good());
    std::stringstream ms, ps;
    ms << mf.rdbuf();
    ps << pf.rdbuf();
    CHECK(validate_imi(ms.str()).empty());
    CHECK(validate_imiprop(ps.str()).empty());
}

TEST_CASE("the validators reject malformed text") {
    CHECK_FALSE(validate_imi("var x : clock;\n").empty());
    CHECK_FALSE(validate_imi(
        "var\n\tx : clock;\nautomaton A\nsynclabs: ;\nloc a: invariant True\n"
        "\twhen True goto nowhere;\nend\ninit := {\n\tdiscrete =\n\t\tloc[A] := a\n\t;\n"
        "\tcontinuous =\n\t\t& x = 0\n\t;\n}\nend\n").empty());
    CHECK_FALSE(validate_imiprop("property := #synth XY(True);").empty());
    CHECK_FALSE(validate_imiprop("property := #synth EU(True);").empty());  // arity
}
