#include <doctest.h>

#include <set>

#include "hyptctl/compose.hpp"
#include "hyptctl/model_parser.hpp"
#include "hyptctl/observers.hpp"
#include "hyptctl/oracle.hpp"

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

}  // namespace

TEST_CASE("self-composition of the drift generator") {
    auto sc = self_compose(clkgen(), 2);
    const Pta& a2 = sc.pta;
    // four product locations, renamed clocks, the shared parameter
    CHECK(a2.locations.size() == 4);
    CHECK(a2.clocks == std::set<std::string>{"c^1", "c^2"});
    CHECK(a2.params == std::set<std::string>{"p1"});
    CHECK(a2.props == std::set<std::string>{"H^1", "H^2", "L^1", "L^2"});
    // 2 left-only + 2 right-only per source row & joint moves: 12 edges
    CHECK(a2.edges.size() == 2 * 2 + 2 * 2 + 2 * 2);
    // the initial pair carries the conjoined invariant on both copies
    REQUIRE(a2.initial.size() == 1);
    const Location& init = a2.locations[*a2.initial.begin()];
    CHECK(init.labels == std::set<std::string>{"H^1", "H^2"});
    CHECK(init.invariant.to_string() == "c^1 <= p1 & c^2 <= p1");
    CHECK(validate_pta(a2).empty());
}

TEST_CASE("self-composition sizes and renaming schemes") {
    Pta a = clkgen();
    auto one = self_compose(a, 1);
    CHECK(one.pta.locations.size() == 2);
    CHECK(one.pta.props == std::set<std::string>{"H^1", "L^1"});
    CHECK(one.renamings.size() == 1);
    CHECK(one.renamings[0].prop_map.at("H") == "H^1");
    CHECK(one.renamings[0].prop_inv.at("H^1") == "H");

    auto three = self_compose(a, 3);
    CHECK(three.pta.locations.size() == 8);  // |L|^n
    CHECK(three.pta.clocks.size() == 3);
    CHECK(three.pta.params == std::set<std::string>{"p1"});
}

TEST_CASE("parallel composition requires disjoint alphabets") {
    Pta a = clkgen();
    CHECK_THROWS_AS(parallel(a, a), IdentifierError);
}

TEST_CASE("parallel with a label-only component unions one label set") {
    Pta a = self_compose(clkgen(), 1).pta;
    Pta tag = parse_pta("pta tag\nloc t initial labels {Tag};\n");
    Pta c = parallel(a, tag);
    CHECK(c.locations.size() == a.locations.size());
    CHECK(c.edges.size() == a.edges.size());
    for (size_t i = 0; i < c.locations.size(); ++i) {
        std::set<std::string> expected = a.locations[i].labels;
        expected.insert("Tag");
        CHECK(c.locations[i].labels == expected);
    }
}

TEST_CASE("synchronized product with the unit observer is the system") {
    Pta a = self_compose(clkgen(), 1).pta;
    Pta p = sync_product(a, unit_pta());
    CHECK(p.locations.size() == a.locations.size());
    CHECK(p.edges.size() == a.edges.size());
    CHECK(p.initial.size() == a.initial.size());
    for (size_t i = 0; i < p.edges.size(); ++i) {
        CHECK(p.edges[i].guard == a.edges[i].guard);
        CHECK(p.edges[i].resets == a.edges[i].resets);
    }
}

TEST_CASE("label-inconsistent initial pairs leave the product empty") {
    Pta sys = parse_pta("pta s\nloc a initial labels {x};\n");
    // an observer over {x} whose only initial location carries no x
    Pta obs = parse_pta("pta o\nprops x;\nloc e initial;\nloc f labels {x};\nedge e -> f;\n");
    Pta p = sync_product(sys, obs);
    CHECK(p.initial.empty());
    CHECK(p.locations.empty());
}

TEST_CASE("observer initial pairing follows the monitored labels") {
    // the mod-4 observer pairs the {H^1,H^2}-labeled system location only
    // with observer initials whose monitored part is {H^1,H^2}
    auto sc = self_compose(clkgen(), 2);
    CountModAtom atom;
    atom.terms = {{1, "H^1", "pi"}, {-1, "H^2", "pi"}};
    atom.modulus = 4;
    atom.rel = Rel::Eq;
    atom.bound = 0;
    auto obs = observer_count_mod(atom, "__ext0");
    Pta p = sync_product(sc.pta, obs.observer);
    REQUIRE(p.initial.size() == 1);
    const Location& init = p.locations[*p.initial.begin()];
    CHECK(init.labels.count("H^1"));
    CHECK(init.labels.count("H^2"));
    CHECK(init.labels.count("__ext0"));  // counters start equal, 0 mod 4 = 0
}

TEST_CASE("joint paths project to component paths and back") {
    // the n=2 joint enumeration and the single-path enumeration of the
    // self-composition reach exactly the same position signatures
    Pta a = parse_pta(
        "pta t\nclocks c;\n"
        "loc s initial labels {x} inv c <= 2;\n"
        "loc u labels {y};\n"
        "edge s -> u when c >= 1 reset {c};\n"
        "edge u -> s when c >= 1 reset {c};\n");
    auto sc = self_compose(a, 2);

    std::multiset<std::string> joint, composed;
    oracle_walk_positions(a, {}, 2, 4, [&](const JointPositionView& pv) {
        std::string sig = std::to_string(pv.time);
        for (size_t i = 0; i < pv.locations.size(); ++i) {
            sig += "|" + std::to_string(pv.locations[i]);
            for (auto c : pv.clocks[i]) sig += ":" + std::to_string(c);
        }
        joint.insert(sig);
    });
    oracle_walk_positions(sc.pta, {}, 1, 4, [&](const JointPositionView& pv) {
        // decode the pair from the composed location index (row-major)
        int loc = pv.locations[0];
        int l1 = loc / 2, l2 = loc % 2;
        std::string sig = std::to_string(pv.time);
        // clock order in the composition is c^1, c^2
        sig += "|" + std::to_string(l1) + ":" + std::to_string(pv.clocks[0][0]);
        sig += "|" + std::to_string(l2) + ":" + std::to_string(pv.clocks[0][1]);
        composed.insert(sig);
    });
    CHECK(joint == composed);
}

TEST_CASE("products with a complete observer keep the system behaviour") {
    // reachable system-location projections agree with and without the
    // count observer attached
    Pta a = self_compose(parse_pta(
        "pta t\nclocks c;\n"
        "loc s initial labels {x} inv c <= 2;\n"
        "loc u labels {y};\n"
        "edge s -> u when c >= 1 reset {c};\n"
        "edge u -> s when c >= 1 reset {c};\n"), 1).pta;
    CountGe0Atom atom;
    atom.terms = {{1, "x^1", "pi"}};
    atom.rel = Rel::Ge;
    atom.bound = 1;
    auto obs = observer_count_ge0(atom, "__ext0");
    Pta prod = sync_product(a, obs.observer);

    std::set<std::string> direct, productside;
    oracle_walk_positions(a, {}, 1, 4, [&](const JointPositionView& pv) {
        direct.insert(std::to_string(pv.locations[0]) + "@" + std::to_string(pv.time));
    });
    oracle_walk_positions(prod, {}, 1, 4, [&](const JointPositionView& pv) {
        // product locations are named "(<system>|<observer>)"
        const std::string& nm = prod.locations[pv.locations[0]].name;
        std::string sys = nm.substr(1, nm.find('|') - 1);
        int idx = a.location_index(sys);
        REQUIRE(idx >= 0);
        productside.insert(std::to_string(idx) + "@" + std::to_string(pv.time));
    });
    CHECK(direct == productside);
}

TEST_CASE("self-composition strips unguarded no-reset self-loops") {
    Pta a = parse_pta(
        "pta t\nclocks c;\nloc s initial labels {x};\nloc u labels {y};\n"
        "edge s -> u when c >= 1;\nedge u -> s when c >= 1 reset {c};\n");
    auto sc = self_compose(a, 2);
    for (auto& e : sc.pta.edges) {
        bool trivial_loop = e.source == e.target && e.guard.is_top() && e.resets.empty();
        CHECK_FALSE(trivial_loop);
    }
}
