#include <doctest.h>

#include <random>

#include "hyptctl/formula_parser.hpp"
#include "hyptctl/model_parser.hpp"
#include "hyptctl/observers.hpp"
#include "hyptctl/oracle.hpp"

using namespace hyptctl;

namespace {

LastAtom last_window_atom() {
    // LAST(H1@pi) - LAST(H2@pi) not in [-p2, p2]
    LastAtom a;
    a.prop1 = "H1";
    a.path1 = "pi";
    a.prop2 = "H2";
    a.path2 = "pi";
    a.window.kind = LastWindow::Kind::NotIn;
    a.window.lo_rel = Rel::Ge;
    a.window.lo = LinearTerm::from_param("p2", -1);
    a.window.hi_rel = Rel::Le;
    a.window.hi = LinearTerm::from_param("p2", 1);
    return a;
}

/// Count the base (pr, flag) cells of a LAST observer, merging the
/// duplicated initial copies introduced by disjunctive invariants.
int base_cells(const Pta& o) {
    std::set<std::string> cells;
    for (auto& loc : o.locations) {
        std::string n = loc.name;
        auto hash = n.find('#');
        if (hash != std::string::npos) n = n.substr(0, hash) + ")";
        cells.insert(n);
    }
    return static_cast<int>(cells.size());
}

}  // namespace

TEST_CASE("LAST observer has the powerset-times-flag location structure") {
    auto r = observer_last(last_window_atom(), "phi3");
    CHECK(base_cells(r.observer) == 16);  // P({H1,H2,phi}) x {pre, post}
    CHECK(r.observer.clocks == std::set<std::string>{"__phi3_H1", "__phi3_H2"});
    CHECK(r.observer.params == std::set<std::string>{"p2"});
    CHECK(validate_pta(r.observer).empty());
    for (auto& loc : r.observer.locations) {
        for (auto& l : loc.labels) CHECK(r.observer.props.count(l));
    }
}

TEST_CASE("LAST observer with the zero window drops unsatisfiable initials") {
    LastAtom a;
    a.prop1 = "x";
    a.path1 = "pi";
    a.prop2 = "y";
    a.path2 = "pi";
    a.window.kind = LastWindow::Kind::Rel;
    a.window.rel = Rel::Eq;
    a.window.bound = LinearTerm::from_constant(0);
    auto r = observer_last(a, "phi");
    int with_phi = 0, without_phi = 0;
    for (int i : r.observer.initial) {
        if (r.observer.locations[i].labels.count("phi"))
            ++with_phi;
        else
            ++without_phi;
    }
    CHECK(with_phi == 4);     // every pr containing phi survives (0 = 0)
    CHECK(without_phi == 0);  // complement copies 0 < 0 and 0 > 0 are dropped
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("LAST observer reproduces the deviation-window rise edge") {
    // from ({H1, phi3}, pre): a rise of H2 re-evaluates the window with the
    // fresh clock substituted by zero, giving __last_H1 outside [-p2, p2]
    // and resetting __last_H2
    auto r = observer_last(last_window_atom(), "phi3");
    const Pta& o = r.observer;
    int src = -1;
    for (size_t i = 0; i < o.locations.size(); ++i) {
        if (o.locations[i].labels == std::set<std::string>{"H1", "phi3"} &&
            o.initial.count(static_cast<int>(i)))
            src = static_cast<int>(i);
    }
    REQUIRE(src >= 0);
    bool low_branch = false, high_branch = false;
    for (auto& e : o.edges) {
        if (e.source != src) continue;
        if (e.resets != std::set<std::string>{"__phi3_H2"}) continue;
        const Location& tgt = o.locations[e.target];
        if (tgt.labels != std::set<std::string>{"H1", "H2", "phi3"}) continue;
        if (e.guard.to_string() == "__phi3_H1 < -p2") low_branch = true;
        if (e.guard.to_string() == "__phi3_H1 > p2") high_branch = true;
    }
    CHECK(low_branch);
    CHECK(high_branch);
}

TEST_CASE("LAST observer on a self-comparison collapses to one clock") {
    LastAtom a;
    a.prop1 = a.prop2 = "x";
    a.path1 = a.path2 = "pi";
    a.window.kind = LastWindow::Kind::Rel;
    a.window.rel = Rel::Le;
    a.window.bound = LinearTerm::from_constant(1);
    auto r = observer_last(a, "phi");
    CHECK(r.observer.clocks.size() == 1);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("count observer saturates above the bound") {
    CountGe0Atom atom;
    atom.terms = {{1, "a", "pi"}};
    atom.rel = Rel::Le;
    atom.bound = 1;
    auto r = observer_count_ge0(atom, "phi");
    const Pta& o = r.observer;
    CHECK(o.locations.size() == 6);  // {∅,{a}} x {0,1,2}
    CHECK(o.clocks.empty());
    CHECK(o.params.empty());
    int src = o.location_index("({},1)");
    int tgt = o.location_index("({a},2)");
    REQUIRE(src >= 0);
    REQUIRE(tgt >= 0);
    bool found = false;
    for (auto& e : o.edges) found = found || (e.source == src && e.target == tgt);
    CHECK(found);
    int src2 = o.location_index("({},2)");
    REQUIRE(src2 >= 0);
    for (auto& e : o.edges) {
        if (e.source != src2) continue;
        if (o.locations[e.target].labels.count("a")) CHECK(o.locations[e.target].name == "({a},2)");
    }
}

TEST_CASE("count observer labels by the comparison") {
    CountGe0Atom atom;
    atom.terms = {{1, "Private", "pi"}};
    atom.rel = Rel::Eq;
    atom.bound = 0;
    auto r = observer_count_ge0(atom, "phi");
    for (auto& loc : r.observer.locations) {
        bool zero = loc.name.find(",0)") != std::string::npos;
        CHECK(loc.labels.count("phi") == (zero ? 1u : 0u));
    }
}

TEST_CASE("stuttering label sets leave counters unchanged and drop self-loops") {
    CountGe0Atom atom;
    atom.terms = {{1, "a", "pi"}};
    atom.rel = Rel::Ge;
    atom.bound = 1;
    auto r = observer_count_ge0(atom, "phi");
    for (auto& e : r.observer.edges) CHECK(e.source != e.target);
}

TEST_CASE("mod observer wraps at the modulus") {
    CountModAtom atom;
    atom.terms = {{1, "a", "pi"}};
    atom.modulus = 4;
    atom.rel = Rel::Eq;
    atom.bound = 0;
    auto r = observer_count_mod(atom, "phi");
    const Pta& o = r.observer;
    int src = o.location_index("({},3)");
    REQUIRE(src >= 0);
    for (auto& e : o.edges) {
        if (e.source != src) continue;
        if (o.locations[e.target].labels.count("a")) CHECK(o.locations[e.target].name == "({a},0)");
    }
}

TEST_CASE("mod observer reproduces the joint-rise fragment") {
    CountModAtom atom;
    atom.terms = {{1, "H1", "pi"}, {-1, "H2", "pi"}};
    atom.modulus = 4;
    atom.rel = Rel::Eq;
    atom.bound = 0;
    auto r = observer_count_mod(atom, "phi2");
    const Pta& o = r.observer;
    int src = o.location_index("({},0,0)");
    int tgt = o.location_index("({H1.H2},1,1)");
    REQUIRE(src >= 0);
    REQUIRE(tgt >= 0);
    CHECK(o.locations[src].labels.count("phi2"));
    CHECK(o.locations[tgt].labels.count("phi2"));  // (1 - 1) mod 4 = 0
    bool found = false;
    for (auto& e : o.edges) found = found || (e.source == src && e.target == tgt);
    CHECK(found);
    CHECK(o.initial.count(src));
}

TEST_CASE("observer product deduplicates predicates and strips them") {
    TopPtr none = parse_formula("E [pi] ((a@pi) U (b@pi))");
    auto empty = build_observer_product(none);
    CHECK_FALSE(empty.has_ext());
    CHECK(empty.product.locations.size() == 1);
    CHECK(top_equal(empty.stripped, none));

    TopPtr twice = parse_formula("E [pi] ((COUNT(a@pi) >= 1) U (COUNT(a@pi) >= 1 & b@pi))");
    auto dedup = build_observer_product(twice);
    CHECK(dedup.observers.size() == 1);
    CHECK(dedup.legend.size() == 1);
    const TemporalFormula& t = dedup.stripped->temporal;
    CHECK(t.lhs->kind == BoolExpr::Kind::Prop);
    CHECK(t.lhs->prop.prop == "__ext0");

    // the worked deviation example: the membership set desugars into three
    // mod atoms whose mod-0 member is shared with the right operand, plus
    // one windowed LAST atom
    TopPtr dev = parse_formula(
        "E [pi] (((COUNT(H1@pi) - COUNT(H2@pi)) mod 4 in {0,1,3}) U "
        "((COUNT(H1@pi) - COUNT(H2@pi)) mod 4 = 0 & LAST(H1@pi) - LAST(H2@pi) not in [-p2, p2]))");
    auto full = build_observer_product(dev);
    CHECK(full.observers.size() == 4);
    CHECK(full.legend.size() == 4);
}

TEST_CASE("observers cover every monitored label change") {
    auto check_complete = [](const Pta& o, const std::set<std::string>& monitored) {
        std::vector<std::string> mon(monitored.begin(), monitored.end());
        for (size_t i = 0; i < o.locations.size(); ++i) {
            std::set<std::string> current;
            for (auto& p : o.locations[i].labels)
                if (monitored.count(p)) current.insert(p);
            for (int mask = 0; mask < (1 << mon.size()); ++mask) {
                std::set<std::string> t;
                for (size_t k = 0; k < mon.size(); ++k)
                    if (mask & (1 << k)) t.insert(mon[k]);
                if (t == current) continue;
                bool covered = false;
                for (auto& e : o.edges) {
                    if (e.source != static_cast<int>(i)) continue;
                    std::set<std::string> tgt_mon;
                    for (auto& p : o.locations[e.target].labels)
                        if (monitored.count(p)) tgt_mon.insert(p);
                    if (tgt_mon == t) covered = true;
                }
                CHECK_MESSAGE(covered, o.name, " location ", o.locations[i].name);
            }
        }
    };
    check_complete(observer_last(last_window_atom(), "phi3").observer, {"H1", "H2"});
    CountModAtom atom;
    atom.terms = {{1, "H1", "pi"}, {-1, "H2", "pi"}};
    atom.modulus = 3;
    atom.rel = Rel::Eq;
    atom.bound = 0;
    check_complete(observer_count_mod(atom, "phi").observer, {"H1", "H2"});
}

TEST_CASE("observer labels agree with the recorded semantics along paths") {
    // a small driver composed with each observer; at every enumerated
    // position the fresh label must match the direct evaluation of the
    // predicate from the bookkeeping valuations
    Pta driver = parse_pta(
        "pta drv\nclocks c;\n"
        "loc q0 initial labels {H1} inv c <= 2;\n"
        "loc q1 labels {H2};\n"
        "loc q2 labels {H1, H2};\n"
        "loc q3 labels {};\n"
        "edge q0 -> q1 when c >= 1 reset {c};\n"
        "edge q1 -> q2 when c >= 1 reset {c};\n"
        "edge q2 -> q3 when c >= 1 reset {c};\n"
        "edge q3 -> q0 when c >= 1 reset {c};\n");

    auto run = [&](const BoolPtr& atom, const ObserverResult& obs, const ParamValuation& v) {
        Pta prod = sync_product(driver, obs.observer);
        int positions = 0;
        oracle_walk_positions(prod, v, 1, 6, [&](const JointPositionView& pv) {
            ++positions;
            bool labeled = prod.locations[pv.locations[0]].labels.count(obs.fresh_prop) > 0;
            CHECK(labeled == pv.holds(atom));
        });
        CHECK(positions > 0);
    };

    LastAtom la = last_window_atom();
    run(BoolExpr::mk_last(la), observer_last(la, "__e0"), {{"p2", Rational(1)}});

    CountModAtom cm;
    cm.terms = {{1, "H1", "pi"}};
    cm.modulus = 3;
    cm.rel = Rel::Eq;
    cm.bound = 1;
    run(BoolExpr::mk_count_mod(cm), observer_count_mod(cm, "__e1"), {});

    CountGe0Atom cg;
    cg.terms = {{1, "H2", "pi"}};
    cg.rel = Rel::Ge;
    cg.bound = 2;
    run(BoolExpr::mk_count_ge0(cg), observer_count_ge0(cg, "__e2"), {});
}

TEST_CASE("several LAST observers coexist in one product") {
    // two windows over the same propositions need disjoint observer clocks
    TopPtr f = parse_formula(
        "E [pi] ((LAST(H1@pi) - LAST(H2@pi) <= 1) U "
        "(LAST(H1@pi) - LAST(H2@pi) not in [-2, 2]))");
    auto obs = build_observer_product(f);
    REQUIRE(obs.observers.size() == 2);
    CHECK(obs.product.clocks.size() == 4);
    CHECK(validate_pta(obs.product).empty());

    Pta driver = parse_pta(
        "pta drv\nclocks c;\n"
        "loc q0 initial labels {H1} inv c <= 2;\n"
        "loc q1 labels {H2};\n"
        "edge q0 -> q1 when c >= 1 reset {c};\n"
        "edge q1 -> q0 when c >= 1 reset {c};\n");
    Pta prod = attach_observers(driver, obs);
    CHECK_FALSE(prod.initial.empty());
    // both fresh labels still track their own predicate along every path
    LastAtom a1;
    a1.prop1 = "H1";
    a1.path1 = "pi";
    a1.prop2 = "H2";
    a1.path2 = "pi";
    a1.window.kind = LastWindow::Kind::Rel;
    a1.window.rel = Rel::Le;
    a1.window.bound = LinearTerm::from_constant(1);
    LastAtom a2 = a1;
    a2.window.kind = LastWindow::Kind::NotIn;
    a2.window.lo_rel = Rel::Ge;
    a2.window.lo = LinearTerm::from_constant(-2);
    a2.window.hi_rel = Rel::Le;
    a2.window.hi = LinearTerm::from_constant(2);
    int mismatches = 0, positions = 0;
    oracle_walk_positions(prod, {}, 1, 6, [&](const JointPositionView& pv) {
        ++positions;
        const auto& labels = prod.locations[pv.locations[0]].labels;
        if ((labels.count("__ext0") > 0) != pv.holds(BoolExpr::mk_last(a1))) ++mismatches;
        if ((labels.count("__ext1") > 0) != pv.holds(BoolExpr::mk_last(a2))) ++mismatches;
    });
    CHECK(positions > 0);
    CHECK(mismatches == 0);
}

TEST_CASE("oversized self-compositions are rejected with a clear error") {
    Pta big;
    big.name = "big";
    for (int i = 0; i < 60; ++i) {
        big.locations.push_back({"l" + std::to_string(i), {}, Guard::top()});
        big.edges.push_back({i, Guard::top(), {}, (i + 1) % 60});
    }
    big.initial.insert(0);
    CHECK_THROWS_AS(self_compose(big, 3), IdentifierError);
}
