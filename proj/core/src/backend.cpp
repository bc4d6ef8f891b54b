#include "hyptctl/backend.hpp"

#include <chrono>
#include <deque>
#include <map>

namespace hyptctl {

namespace {

constexpr const char* kDurClock = "__dur";

struct ZoneContext {
    const Pta* a = nullptr;
    std::vector<std::string> clocks;  // including __dur when bounded
    std::vector<std::string> params;
    std::vector<ConvexPoly> invariants;    // per location
    std::vector<std::vector<int>> by_src;  // edge indices per source location

    ZoneContext(const Pta& pta, bool with_dur) : a(&pta) {
        for (auto& c : pta.clocks) clocks.push_back(c);
        if (with_dur) clocks.push_back(kDurClock);
        for (auto& p : pta.params) params.push_back(p);
        for (auto& loc : pta.locations) {
            ConvexPoly inv;
            for (auto& atom : loc.invariant.atoms) inv.add_atom(atom);
            invariants.push_back(std::move(inv));
        }
        by_src.resize(pta.locations.size());
        for (size_t i = 0; i < pta.edges.size(); ++i)
            by_src[pta.edges[i].source].push_back(static_cast<int>(i));
    }

    ConvexPoly guard_poly(const Guard& g) const {
        ConvexPoly p;
        for (auto& atom : g.atoms) p.add_atom(atom);
        return p;
    }

    /// Future time elapse: every clock advances by the same non-negative
    /// delay. Substituting c -> c - delta needs only coefficient surgery
    /// on the fresh delta variable, then one elimination.
    ConvexPoly elapse(const ConvexPoly& p) const {
        static const std::string delta = "__delta";
        std::vector<LinIneq> cons;
        for (auto& c : p.constraints()) {
            LinIneq shifted = c;
            Integer sum = 0;
            for (auto& name : clocks) {
                auto it = c.coeffs.find(name);
                if (it != c.coeffs.end()) sum += it->second;
            }
            if (sum != 0) shifted.coeffs[delta] = -sum;
            cons.push_back(std::move(shifted));
        }
        LinIneq nonneg;
        nonneg.coeffs[delta] = -1;  // delta >= 0
        nonneg.rel = LinIneq::R::Le;
        cons.push_back(std::move(nonneg));
        ConvexPoly q(std::move(cons));
        return q.eliminate(delta);
    }

    ConvexPoly apply_resets(const ConvexPoly& p, const std::set<std::string>& resets) const {
        ConvexPoly q = p;
        for (auto& c : resets) {
            q = q.eliminate(c);
            LinIneq zero;
            zero.coeffs[c] = 1;
            zero.rel = LinIneq::R::Eq;
            q.add(std::move(zero));
        }
        return q;
    }

    ConvexPoly initial_entry(int loc) const {
        ConvexPoly p;
        for (auto& c : clocks) {
            LinIneq z;
            z.coeffs[c] = 1;
            z.rel = LinIneq::R::Eq;
            p.add(std::move(z));
        }
        for (auto& prm : params) {
            LinIneq nn;
            nn.coeffs[prm] = -1;  // p >= 0
            nn.rel = LinIneq::R::Le;
            p.add(std::move(nn));
        }
        return p.meet(invariants[loc]);
    }

    /// (entry poly, elapsed poly) of the successor through one edge.
    std::optional<std::pair<ConvexPoly, ConvexPoly>> step(const ConvexPoly& elapsed,
                                                          const Edge& e) const {
        ConvexPoly fired = elapsed.meet(guard_poly(e.guard));
        if (fired.is_empty()) return std::nullopt;
        ConvexPoly entry = apply_resets(fired, e.resets).meet(invariants[e.target]);
        if (entry.is_empty()) return std::nullopt;
        ConvexPoly after = elapse(entry).meet(invariants[e.target]);
        after.reduce_strong();
        return std::make_pair(std::move(entry), std::move(after));
    }
};

LinIneq bound_constraint(const TemporalBound& b) {
    std::map<std::string, Rational> coeffs;
    coeffs[kDurClock] = 1;
    Rational constant = 0;
    if (b.param)
        coeffs[*b.param] -= 1;
    else
        constant = -rational_of(b.nat);
    return LinIneq::make(coeffs, constant, b.rel);
}

/// For upper-style bounds, a state whose whole dwell lies beyond the
/// bound can never contribute and none of its successors can either.
std::optional<LinIneq> bound_feasibility(const TemporalBound& b) {
    Rel r;
    switch (b.rel) {
        case Rel::Lt: r = Rel::Lt; break;
        case Rel::Le:
        case Rel::Eq: r = Rel::Le; break;
        default: return std::nullopt;
    }
    TemporalBound relaxed = b;
    relaxed.rel = r;
    return bound_constraint(relaxed);
}

}  // namespace

std::vector<SymbolicState> symbolic_successors(const SymbolicState& s, const Pta& a) {
    ZoneContext cx(a, /*with_dur=*/true);
    std::vector<SymbolicState> out;
    for (auto& e : a.edges) {
        if (e.source != s.location) continue;
        auto next = cx.step(s.poly, e);
        if (!next) continue;
        out.push_back({e.target, std::move(next->second)});
    }
    return out;
}

std::set<int> locations_satisfying(const Pta& a, const BoolPtr& operand) {
    std::function<bool(const BoolPtr&, const std::set<std::string>&)> holds =
        [&](const BoolPtr& e, const std::set<std::string>& labels) -> bool {
        if (!e) return true;
        using K = BoolExpr::Kind;
        switch (e->kind) {
            case K::True: return true;
            case K::Prop: return labels.count(e->prop.prop) > 0;
            case K::Not: return !holds(e->a, labels);
            case K::Or: return holds(e->a, labels) || holds(e->b, labels);
            case K::And: return holds(e->a, labels) && holds(e->b, labels);
            case K::Implies: return !holds(e->a, labels) || holds(e->b, labels);
            case K::Equiv: return holds(e->a, labels) == holds(e->b, labels);
            case K::Nequiv: return holds(e->a, labels) != holds(e->b, labels);
            default:
                throw IdentifierError{"", "operand still contains an extended predicate; "
                                          "compile observers first"};
        }
    };
    std::set<int> out;
    for (size_t i = 0; i < a.locations.size(); ++i)
        if (holds(operand, a.locations[i].labels)) out.insert(static_cast<int>(i));
    return out;
}

SynthOutcome eu_synth(const Pta& a, const std::set<int>& phi1_locs, const std::set<int>& phi2_locs,
                      const std::optional<TemporalBound>& bound, const SynthOptions& opts) {
    SynthOutcome out;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(opts.timeout_seconds));

    ZoneContext cx(a, bound.has_value());
    std::optional<LinIneq> collect_bound;
    std::optional<LinIneq> feasibility;
    if (bound) {
        collect_bound = bound_constraint(*bound);
        feasibility = bound_feasibility(*bound);
    }

    for (size_t i = 0; i < a.locations.size(); ++i)
        if (a.edges_from(static_cast<int>(i)).empty()) {
            out.warnings.push_back(
                "location '" + a.locations[i].name +
                "' has no outgoing edge; witness prefixes are assumed extensible");
            break;
        }

    std::vector<ConvexPoly> results;
    auto collect = [&](int loc, const ConvexPoly& entry, const ConvexPoly& elapsed) {
        if (!phi2_locs.count(loc)) return;
        ConvexPoly chosen = phi1_locs.count(loc) ? elapsed : entry;
        if (collect_bound) chosen.add(*collect_bound);
        if (chosen.is_empty()) return;
        for (auto& c : cx.clocks) chosen = chosen.eliminate(c);
        chosen.reduce_strong();
        if (!chosen.is_empty()) results.push_back(std::move(chosen));
    };

    struct Item {
        SymbolicState state;
        int depth;
    };
    struct VisitedZone {
        ConvexPoly poly;
        std::set<LinIneq> cons;  // for syntactic subset tests
    };
    std::deque<Item> work;
    std::map<int, std::vector<VisitedZone>> visited;
    std::map<int, std::set<std::string>> seen_keys;

    auto subsumed = [&](int loc, const ConvexPoly& poly,
                        const std::optional<std::map<std::string, Rational>>& sample) {
        std::set<LinIneq> mine(poly.constraints().begin(), poly.constraints().end());
        for (auto& have : visited[loc]) {
            // have's constraints all present in poly -> poly subset of have
            if (std::includes(mine.begin(), mine.end(), have.cons.begin(), have.cons.end()))
                return true;
            if (!opts.inclusion_check) continue;
            // a sample of poly outside have rules the inclusion out cheaply
            if (sample && !have.poly.evaluate(*sample)) continue;
            if (poly.included_in(have.poly)) return true;
        }
        return false;
    };

    auto enqueue = [&](int loc, ConvexPoly entry, ConvexPoly elapsed, int depth) {
        collect(loc, entry, elapsed);
        if (!phi1_locs.count(loc)) return;  // cannot be passed through
        if (feasibility) {
            ConvexPoly probe = entry;
            probe.add(*feasibility);
            if (probe.is_empty()) return;  // every later instant is past the bound
        }
        elapsed.canonicalize();
        std::string key = elapsed.to_string();
        if (!seen_keys[loc].insert(key).second) return;  // exact duplicate
        auto sample = elapsed.sample_point();
        if (!sample) return;  // empty after all
        if (subsumed(loc, elapsed, sample)) return;
        visited[loc].push_back(
            {elapsed, {elapsed.constraints().begin(), elapsed.constraints().end()}});
        work.push_back({{loc, std::move(elapsed)}, depth});
    };

    for (int init : a.initial) {
        ConvexPoly entry = cx.initial_entry(init);
        if (entry.is_empty()) continue;
        ConvexPoly elapsed = cx.elapse(entry).meet(cx.invariants[init]);
        elapsed.reduce_strong();
        enqueue(init, std::move(entry), std::move(elapsed), 0);
    }

    while (!work.empty()) {
        if (std::chrono::steady_clock::now() > deadline) {
            out.truncated = true;
            out.warnings.push_back("timeout: the result is an under-approximation");
            break;
        }
        Item item = std::move(work.front());
        work.pop_front();
        if (opts.max_depth && item.depth >= *opts.max_depth) {
            out.truncated = true;
            continue;
        }
        ++out.states_explored;
        for (int ei : cx.by_src[item.state.location]) {
            const Edge& e = a.edges[ei];
            auto next = cx.step(item.state.poly, e);
            if (!next) continue;
            enqueue(e.target, std::move(next->first), std::move(next->second), item.depth + 1);
        }
    }

    out.result = ParamSet::of_polys(cx.params, std::move(results)).canonical();
    return out;
}

}  // namespace hyptctl
