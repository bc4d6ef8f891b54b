#include "hyptctl/compose.hpp"

#include <algorithm>
#include <deque>

namespace hyptctl {

RenamingScheme RenamingScheme::for_copy(const Pta& a, int index) {
    RenamingScheme r;
    r.index = index;
    std::string suffix = "^" + std::to_string(index);
    for (auto& s : a.props) {
        r.prop_map[s] = s + suffix;
        r.prop_inv[s + suffix] = s;
    }
    for (auto& c : a.clocks) {
        r.clock_map[c] = c + suffix;
        r.clock_inv[c + suffix] = c;
    }
    return r;
}

namespace {

Guard rename_guard(const Guard& g, const std::map<std::string, std::string>& clock_map) {
    Guard out = g;
    for (auto& atom : out.atoms) {
        auto ren = [&](std::string& c) {
            auto it = clock_map.find(c);
            if (it != clock_map.end()) c = it->second;
        };
        if (atom.lhs != AtomicConstraint::Lhs::Zero) ren(atom.clock1);
        if (atom.lhs == AtomicConstraint::Lhs::Diff) ren(atom.clock2);
    }
    return out;
}

std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (auto& x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

}  // namespace

Pta rename_pta(const Pta& a, const RenamingScheme& r) {
    Pta out = a;
    out.props.clear();
    for (auto& s : a.props) out.props.insert(r.prop_map.at(s));
    out.clocks.clear();
    for (auto& c : a.clocks) out.clocks.insert(r.clock_map.at(c));
    for (auto& loc : out.locations) {
        std::set<std::string> labels;
        for (auto& s : loc.labels) labels.insert(r.prop_map.at(s));
        loc.labels = std::move(labels);
        loc.invariant = rename_guard(loc.invariant, r.clock_map);
    }
    for (auto& e : out.edges) {
        e.guard = rename_guard(e.guard, r.clock_map);
        std::set<std::string> resets;
        for (auto& c : e.resets) resets.insert(r.clock_map.at(c));
        e.resets = std::move(resets);
    }
    return out;
}

Pta parallel(const Pta& a1, const Pta& a2) {
    for (auto& c : intersect(a1.clocks, a2.clocks))
        throw IdentifierError{c, "parallel composition requires disjoint clocks: '" + c + "'"};
    for (auto& s : intersect(a1.props, a2.props))
        throw IdentifierError{s, "parallel composition requires disjoint propositions: '" + s + "'"};

    Pta out;
    out.name = a1.name + "||" + a2.name;
    out.props = a1.props;
    out.props.insert(a2.props.begin(), a2.props.end());
    out.clocks = a1.clocks;
    out.clocks.insert(a2.clocks.begin(), a2.clocks.end());
    out.params = a1.params;
    out.params.insert(a2.params.begin(), a2.params.end());

    int n2 = static_cast<int>(a2.locations.size());
    auto idx = [&](int i, int j) { return i * n2 + j; };
    for (auto& l1 : a1.locations)
        for (auto& l2 : a2.locations) {
            Location loc;
            loc.name = "(" + l1.name + "|" + l2.name + ")";
            loc.labels = l1.labels;
            loc.labels.insert(l2.labels.begin(), l2.labels.end());
            loc.invariant = l1.invariant.conjoin(l2.invariant);
            out.locations.push_back(std::move(loc));
        }
    for (int i : a1.initial)
        for (int j : a2.initial) out.initial.insert(idx(i, j));

    for (auto& e : a1.edges)
        for (int j = 0; j < n2; ++j)
            out.edges.push_back({idx(e.source, j), e.guard, e.resets, idx(e.target, j)});
    for (auto& e : a2.edges)
        for (int i = 0; i < static_cast<int>(a1.locations.size()); ++i)
            out.edges.push_back({idx(i, e.source), e.guard, e.resets, idx(i, e.target)});
    for (auto& e1 : a1.edges)
        for (auto& e2 : a2.edges) {
            std::set<std::string> resets = e1.resets;
            resets.insert(e2.resets.begin(), e2.resets.end());
            out.edges.push_back({idx(e1.source, e2.source), e1.guard.conjoin(e2.guard),
                                 std::move(resets), idx(e1.target, e2.target)});
        }
    return out;
}

Pta sync_product(const Pta& a1, const Pta& a2) {
    for (auto& c : intersect(a1.clocks, a2.clocks))
        throw IdentifierError{c, "synchronized product requires disjoint clocks: '" + c + "'"};

    auto consistent = [&](int l1, int l2) {
        return intersect(a1.locations[l1].labels, a2.props) ==
               intersect(a2.locations[l2].labels, a1.props);
    };

    Pta out;
    out.name = "(" + a1.name + "x" + a2.name + ")";
    out.props = a1.props;
    out.props.insert(a2.props.begin(), a2.props.end());
    out.clocks = a1.clocks;
    out.clocks.insert(a2.clocks.begin(), a2.clocks.end());
    out.params = a1.params;
    out.params.insert(a2.params.begin(), a2.params.end());

    // Discover the discretely reachable pairs from the consistent initial
    // ones; unreachable product locations cannot affect any property.
    std::map<std::pair<int, int>, int> index;
    std::deque<std::pair<int, int>> work;
    auto discover = [&](int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(out.locations.size());
        index[key] = id;
        Location loc;
        loc.name = "(" + a1.locations[i].name + "|" + a2.locations[j].name + ")";
        loc.labels = a1.locations[i].labels;
        loc.labels.insert(a2.locations[j].labels.begin(), a2.locations[j].labels.end());
        loc.invariant = a1.locations[i].invariant.conjoin(a2.locations[j].invariant);
        out.locations.push_back(std::move(loc));
        work.emplace_back(i, j);
        return id;
    };

    for (int i : a1.initial)
        for (int j : a2.initial)
            if (consistent(i, j)) out.initial.insert(discover(i, j));

    while (!work.empty()) {
        auto [i, j] = work.front();
        work.pop_front();
        int src = index.at({i, j});
        for (auto& e1 : a1.edges) {
            if (e1.source != i) continue;
            // left-only: the right component's labels must already match
            if (consistent(e1.target, j))
                out.edges.push_back({src, e1.guard, e1.resets, discover(e1.target, j)});
            // joint moves
            for (auto& e2 : a2.edges) {
                if (e2.source != j) continue;
                if (!consistent(e1.target, e2.target)) continue;
                std::set<std::string> resets = e1.resets;
                resets.insert(e2.resets.begin(), e2.resets.end());
                out.edges.push_back({src, e1.guard.conjoin(e2.guard), std::move(resets),
                                     discover(e1.target, e2.target)});
            }
        }
        for (auto& e2 : a2.edges) {
            if (e2.source != j) continue;
            if (consistent(i, e2.target))
                out.edges.push_back({src, e2.guard, e2.resets, discover(i, e2.target)});
        }
    }
    return out;
}

Pta sync_product_all(const std::vector<Pta>& parts) {
    if (parts.empty()) return unit_pta();
    Pta acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = sync_product(acc, parts[i]);
    return acc;
}

SelfComposition self_compose(const Pta& a, int n) {
    if (n < 1) throw IdentifierError{"n", "self-composition requires n >= 1"};
    double locs = 1;
    for (int i = 0; i < n; ++i) locs *= static_cast<double>(a.locations.size());
    if (locs > 2e5)
        throw IdentifierError{a.name, "self-composition of '" + a.name + "' would have " +
                                          std::to_string(static_cast<long long>(locs)) +
                                          " locations; reduce the path variable count"};
    SelfComposition out;
    for (int i = 1; i <= n; ++i) out.renamings.push_back(RenamingScheme::for_copy(a, i));
    Pta acc = rename_pta(a, out.renamings[0]);
    acc.name = a.name + "^1";
    for (int i = 2; i <= n; ++i) {
        Pta copy = rename_pta(a, out.renamings[i - 1]);
        copy.name = a.name + "^" + std::to_string(i);
        acc = parallel(acc, copy);
    }
    acc.name = a.name + "^" + std::to_string(n);
    std::erase_if(acc.edges, [](const Edge& e) {
        return e.source == e.target && e.guard.is_top() && e.resets.empty();
    });
    out.pta = std::move(acc);
    return out;
}

Pta unit_pta() {
    Pta u;
    u.name = "unit";
    u.locations.push_back({"u", {}, Guard::top()});
    u.initial.insert(0);
    return u;
}

}  // namespace hyptctl
