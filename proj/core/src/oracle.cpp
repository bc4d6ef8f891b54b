#include "hyptctl/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hyptctl {

namespace {

// ---------------------------------------------------------------------------
// Valuated discrete TA with capped clocks
// ---------------------------------------------------------------------------

struct CompiledAtom {
    AtomicConstraint::Lhs kind;
    int c1 = -1, c2 = -1;
    Rel rel = Rel::Le;
    Rational rhs;
};
using CompiledGuard = std::vector<CompiledAtom>;

bool cmp_rat(const Rational& a, Rel r, const Rational& b) {
    switch (r) {
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
        case Rel::Eq: return a == b;
        case Rel::Ge: return a >= b;
        case Rel::Gt: return a > b;
    }
    return false;
}

long long math_mod(long long x, long long n) {
    long long r = x % n;
    return r < 0 ? r + n : r;
}

/// Discrete-time view of A[v]: integer clock values capped at
/// max(max constant, horizon) + 1. Within the horizon the cap never
/// triggers, so enumeration is exact; the capability analysis beyond the
/// horizon relies on the standard capping argument (the only diagonal
/// guards we produce come in complement pairs and never block).
struct DiscreteTA {
    const Pta* a = nullptr;
    ParamValuation v;
    std::vector<std::string> clock_names;
    std::map<std::string, int> clock_index;
    long long cap = 1;
    std::vector<CompiledGuard> inv;
    std::vector<CompiledGuard> guards;
    std::vector<std::vector<int>> resets;  // per edge, clock indices
    std::vector<std::vector<int>> out;     // per location, edge indices

    DiscreteTA(const Pta& pta, const ParamValuation& val, int horizon) : a(&pta), v(val) {
        for (auto& c : pta.clocks) clock_names.push_back(c);
        std::sort(clock_names.begin(), clock_names.end());
        for (size_t i = 0; i < clock_names.size(); ++i)
            clock_index[clock_names[i]] = static_cast<int>(i);
        for (auto& p : pta.params) {
            auto it = v.find(p);
            if (it == v.end()) throw IdentifierError{p, "parameter '" + p + "' has no value"};
            if (!is_integral(it->second))
                throw std::runtime_error("discrete oracle requires an integer valuation for '" +
                                         p + "' (rescale the model first)");
        }
        Integer m = max_guard_constant(pta, v);
        long long mc = m.fits_slong_p() ? m.get_si() : horizon;
        cap = std::max<long long>(mc, horizon) + 1;

        auto compile = [&](const Guard& g) {
            CompiledGuard cg;
            for (auto& atom : g.atoms) {
                CompiledAtom ca;
                ca.kind = atom.lhs;
                ca.rel = atom.rel;
                ca.rhs = atom.rhs.evaluate(v);
                if (!is_integral(ca.rhs) && atom.lhs != AtomicConstraint::Lhs::Zero)
                    throw std::runtime_error(
                        "discrete oracle requires integer guard constants (got " +
                        rational_to_string(ca.rhs) + "); rescale the model first");
                if (atom.lhs != AtomicConstraint::Lhs::Zero) ca.c1 = clock_index.at(atom.clock1);
                if (atom.lhs == AtomicConstraint::Lhs::Diff) ca.c2 = clock_index.at(atom.clock2);
                cg.push_back(std::move(ca));
            }
            return cg;
        };
        for (auto& loc : pta.locations) inv.push_back(compile(loc.invariant));
        out.resize(pta.locations.size());
        for (size_t i = 0; i < pta.edges.size(); ++i) {
            const Edge& e = pta.edges[i];
            guards.push_back(compile(e.guard));
            std::vector<int> r;
            for (auto& c : e.resets) r.push_back(clock_index.at(c));
            resets.push_back(std::move(r));
            out[e.source].push_back(static_cast<int>(i));
        }
    }

    bool guard_ok(const CompiledGuard& g, const std::vector<long long>& clocks) const {
        for (auto& ca : g) {
            long long lhs = 0;
            switch (ca.kind) {
                case AtomicConstraint::Lhs::Clock: lhs = clocks[ca.c1]; break;
                case AtomicConstraint::Lhs::Diff: lhs = clocks[ca.c1] - clocks[ca.c2]; break;
                case AtomicConstraint::Lhs::Zero: lhs = 0; break;
            }
            if (!cmp_rat(rational_of(lhs), ca.rel, ca.rhs)) return false;
        }
        return true;
    }

    bool inv_ok(int loc, const std::vector<long long>& clocks) const {
        return guard_ok(inv[loc], clocks);
    }

    std::vector<long long> plus1(const std::vector<long long>& clocks) const {
        std::vector<long long> out = clocks;
        for (auto& c : out) c = std::min(c + 1, cap);
        return out;
    }

    std::vector<long long> reset_clocks(const std::vector<long long>& clocks, int edge) const {
        std::vector<long long> out = clocks;
        for (int i : resets[edge]) out[i] = 0;
        return out;
    }
};

// ---------------------------------------------------------------------------
// Time-divergence capability on the capped graph
// ---------------------------------------------------------------------------

struct VecHash {
    size_t operator()(const std::vector<long long>& v) const {
        size_t h = 1469598103934665603ull;
        for (long long x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// capable(s): some run from s lets time diverge (edge-finite tails are
/// allowed). On the finite capped graph this holds iff s reaches a
/// strongly connected component with an internal delay step.
class CapabilityOracle {
public:
    explicit CapabilityOracle(const DiscreteTA& ta) : ta_(ta) {}

    bool capable(int loc, const std::vector<long long>& clocks) {
        if (!ta_.inv_ok(loc, clocks)) return false;
        auto key = encode(loc, clocks);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        explore(key);
        return memo_.at(key);
    }

private:
    std::vector<long long> encode(int loc, const std::vector<long long>& clocks) const {
        std::vector<long long> key;
        key.reserve(clocks.size() + 1);
        key.push_back(loc);
        key.insert(key.end(), clocks.begin(), clocks.end());
        return key;
    }

    struct Succ {
        std::vector<long long> node;
        bool time;
    };

    std::vector<Succ> successors(const std::vector<long long>& node) const {
        int loc = static_cast<int>(node[0]);
        std::vector<long long> clocks(node.begin() + 1, node.end());
        std::vector<Succ> out;
        auto up = ta_.plus1(clocks);
        if (ta_.inv_ok(loc, up)) out.push_back({encode(loc, up), true});
        for (int e : ta_.out[loc]) {
            if (!ta_.guard_ok(ta_.guards[e], clocks)) continue;
            auto r = ta_.reset_clocks(clocks, e);
            int tgt = ta_.a->edges[e].target;
            if (ta_.inv_ok(tgt, r)) out.push_back({encode(tgt, r), false});
        }
        return out;
    }

    /// Iterative Tarjan from `root`; SCC completion order is reverse
    /// topological, so "reaches a delay-cycle" propagates immediately.
    void explore(const std::vector<long long>& root) {
        struct Frame {
            std::vector<long long> node;
            std::vector<Succ> succ;
            size_t next = 0;
        };
        std::unordered_map<std::vector<long long>, int, VecHash> index, low;
        std::unordered_map<std::vector<long long>, bool, VecHash> on_stack;
        std::vector<std::vector<long long>> stack;
        std::vector<Frame> frames;
        int counter = 0;

        auto push_node = [&](const std::vector<long long>& n) {
            index[n] = low[n] = counter++;
            on_stack[n] = true;
            stack.push_back(n);
            frames.push_back({n, successors(n), 0});
        };
        push_node(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < f.succ.size()) {
                const auto& s = f.succ[f.next++];
                if (memo_.count(s.node)) continue;  // finished earlier
                if (!index.count(s.node)) {
                    push_node(s.node);
                } else if (on_stack[s.node]) {
                    low[f.node] = std::min(low[f.node], index[s.node]);
                }
                continue;
            }
            // all successors done
            std::vector<long long> done = f.node;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().node] = std::min(low[frames.back().node], low[done]);
            if (low[done] != index[done]) continue;
            // done is an SCC root: pop the component
            std::vector<std::vector<long long>> comp;
            for (;;) {
                auto n = stack.back();
                stack.pop_back();
                on_stack[n] = false;
                comp.push_back(n);
                if (n == done) break;
            }
            std::unordered_set<std::vector<long long>, VecHash> members(comp.begin(), comp.end());
            bool good = false;
            for (auto& n : comp) {
                for (auto& s : successors(n)) {
                    if (members.count(s.node)) {
                        if (s.time) good = true;
                    } else if (memo_.count(s.node) && memo_.at(s.node)) {
                        good = true;  // reaches an already-known capable node
                    }
                    if (good) break;
                }
                if (good) break;
            }
            for (auto& n : comp) memo_[n] = good;
        }
    }

    const DiscreteTA& ta_;
    std::unordered_map<std::vector<long long>, bool, VecHash> memo_;
};

// ---------------------------------------------------------------------------
// Extended-predicate bookkeeping (counter and recording valuations)
// ---------------------------------------------------------------------------

/// Which (proposition, path index) pairs the operands observe, and the
/// finite abstractions that keep them exact: counts saturate above the
/// largest plain bound, residues live modulo the lcm of the moduli.
struct Bookkeeping {
    std::vector<std::pair<std::string, int>> count_pairs;
    std::map<std::pair<std::string, int>, int> count_index;
    std::vector<std::pair<std::string, int>> last_pairs;
    std::map<std::pair<std::string, int>, int> last_index;
    long long sat_cap = 1;  // counts stored as min(count, sat_cap)
    long long mod_lcm = 1;  // residues stored mod mod_lcm
    bool exact_counts = false;  // walker mode: never saturate

    void note_count_pair(const std::string& prop, int path) {
        auto key = std::make_pair(prop, path);
        if (count_index.count(key)) return;
        count_index[key] = static_cast<int>(count_pairs.size());
        count_pairs.push_back(key);
    }
    void note_last_pair(const std::string& prop, int path) {
        auto key = std::make_pair(prop, path);
        if (last_index.count(key)) return;
        last_index[key] = static_cast<int>(last_pairs.size());
        last_pairs.push_back(key);
    }

    void collect(const BoolPtr& e, const std::map<std::string, int>& path_of) {
        if (!e) return;
        switch (e->kind) {
            case BoolExpr::Kind::CountGe0:
                for (auto& t : e->count_ge0.terms) note_count_pair(t.prop, path_of.at(t.path));
                sat_cap = std::max(sat_cap, e->count_ge0.bound + 1);
                break;
            case BoolExpr::Kind::CountMod:
                for (auto& t : e->count_mod.terms) note_count_pair(t.prop, path_of.at(t.path));
                mod_lcm = std::lcm(mod_lcm, e->count_mod.modulus);
                break;
            case BoolExpr::Kind::Last:
                note_last_pair(e->last.prop1, path_of.at(e->last.path1));
                note_last_pair(e->last.prop2, path_of.at(e->last.path2));
                break;
            default:
                collect(e->a, path_of);
                collect(e->b, path_of);
        }
    }
};

// ---------------------------------------------------------------------------
// Joint configurations
// ---------------------------------------------------------------------------

struct JointCfg {
    std::vector<int> locs;
    std::vector<std::vector<long long>> clocks;  // per path
    std::vector<long long> counts;               // per count pair (abstracted)
    std::vector<long long> residues;             // per count pair (mod lcm)
    std::vector<long long> last_rise;            // per last pair, absolute time
    long long time = 0;
    long long steps = 0;
};

struct EvalContext {
    const Pta* a;
    const ParamValuation* v;
    const Bookkeeping* bk;
};

bool eval_bool_at(const EvalContext& cx, const BoolPtr& e, const JointCfg& cfg);

bool eval_atom_at(const EvalContext& cx, const BoolPtr& e, const JointCfg& cfg,
                  const std::map<std::string, int>& path_of) {
    switch (e->kind) {
        case BoolExpr::Kind::Prop: {
            int pi = path_of.at(e->prop.path);
            return cx.a->locations[cfg.locs[pi]].labels.count(e->prop.prop) > 0;
        }
        case BoolExpr::Kind::CountGe0: {
            long long sum = 0;
            for (auto& t : e->count_ge0.terms) {
                if (t.coeff == 0) continue;
                auto it = cx.bk->count_index.find({t.prop, path_of.at(t.path)});
                // a proposition that never occurs in the model never rises
                long long c = it == cx.bk->count_index.end() ? 0 : cfg.counts[it->second];
                sum += t.coeff * c;
            }
            // saturated counts exceed every plain bound, so the comparison
            // against d is unaffected
            switch (e->count_ge0.rel) {
                case Rel::Lt: return sum < e->count_ge0.bound;
                case Rel::Le: return sum <= e->count_ge0.bound;
                case Rel::Eq: return sum == e->count_ge0.bound;
                case Rel::Ge: return sum >= e->count_ge0.bound;
                case Rel::Gt: return sum > e->count_ge0.bound;
            }
            return false;
        }
        case BoolExpr::Kind::CountMod: {
            long long sum = 0;
            for (auto& t : e->count_mod.terms) {
                if (t.coeff == 0) continue;
                auto it = cx.bk->count_index.find({t.prop, path_of.at(t.path)});
                long long c = 0;
                if (it != cx.bk->count_index.end())
                    c = cx.bk->exact_counts ? cfg.counts[it->second] : cfg.residues[it->second];
                sum += t.coeff * c;
            }
            long long m = math_mod(sum, e->count_mod.modulus);
            switch (e->count_mod.rel) {
                case Rel::Lt: return m < e->count_mod.bound;
                case Rel::Le: return m <= e->count_mod.bound;
                case Rel::Eq: return m == e->count_mod.bound;
                case Rel::Ge: return m >= e->count_mod.bound;
                case Rel::Gt: return m > e->count_mod.bound;
            }
            return false;
        }
        case BoolExpr::Kind::Last: {
            const LastAtom& at = e->last;
            auto rise_of = [&](const std::string& prop, const std::string& path) -> long long {
                auto it = cx.bk->last_index.find({prop, path_of.at(path)});
                return it == cx.bk->last_index.end() ? 0 : cfg.last_rise[it->second];
            };
            long long r1 = cfg.time - rise_of(at.prop1, at.path1);
            long long r2 = cfg.time - rise_of(at.prop2, at.path2);
            Rational diff = rational_of(r1 - r2);
            switch (at.window.kind) {
                case LastWindow::Kind::Rel:
                    return cmp_rat(diff, at.window.rel, at.window.bound.evaluate(*cx.v));
                case LastWindow::Kind::In:
                    return cmp_rat(diff, at.window.lo_rel, at.window.lo.evaluate(*cx.v)) &&
                           cmp_rat(diff, at.window.hi_rel, at.window.hi.evaluate(*cx.v));
                case LastWindow::Kind::NotIn:
                    return !(cmp_rat(diff, at.window.lo_rel, at.window.lo.evaluate(*cx.v)) &&
                             cmp_rat(diff, at.window.hi_rel, at.window.hi.evaluate(*cx.v)));
            }
            return false;
        }
        default: return false;
    }
}

struct BoolEvaluator {
    EvalContext cx;
    const std::map<std::string, int>* path_of;
    bool single_path = false;  // any path name maps to the only path

    bool operator()(const BoolPtr& e, const JointCfg& cfg) const {
        if (!e) return true;
        using K = BoolExpr::Kind;
        switch (e->kind) {
            case K::True: return true;
            case K::Not: return !(*this)(e->a, cfg);
            case K::Or: return (*this)(e->a, cfg) || (*this)(e->b, cfg);
            case K::And: return (*this)(e->a, cfg) && (*this)(e->b, cfg);
            case K::Implies: return !(*this)(e->a, cfg) || (*this)(e->b, cfg);
            case K::Equiv: return (*this)(e->a, cfg) == (*this)(e->b, cfg);
            case K::Nequiv: return (*this)(e->a, cfg) != (*this)(e->b, cfg);
            default:
                if (single_path) {
                    std::map<std::string, int> all;
                    auto note = [&](const std::string& p) { all[p] = 0; };
                    collect_paths(e, note);
                    return eval_atom_at(cx, e, cfg, all);
                }
                return eval_atom_at(cx, e, cfg, *path_of);
        }
    }

    static void collect_paths(const BoolPtr& e, const std::function<void(const std::string&)>& f) {
        if (!e) return;
        switch (e->kind) {
            case BoolExpr::Kind::Prop: f(e->prop.path); break;
            case BoolExpr::Kind::Last:
                f(e->last.path1);
                f(e->last.path2);
                break;
            case BoolExpr::Kind::CountGe0:
                for (auto& t : e->count_ge0.terms) f(t.path);
                break;
            case BoolExpr::Kind::CountMod:
                for (auto& t : e->count_mod.terms) f(t.path);
                break;
            default:
                collect_paths(e->a, f);
                collect_paths(e->b, f);
        }
    }
};

// ---------------------------------------------------------------------------
// The until search
// ---------------------------------------------------------------------------

class UntilEngine {
public:
    UntilEngine(const Pta& a, const ParamValuation& v, const TemporalFormula& t, int horizon)
        : pta_(a), v_(v), horizon_(horizon), ta_(a, v, horizon), capability_(ta_) {
        assert(t.kind == TemporalFormula::Kind::Until);
        exists_ = t.exists;
        n_ = static_cast<int>(t.path_vars.size());
        for (int i = 0; i < n_; ++i) path_of_[t.path_vars[i]] = i;
        b1_ = t.lhs;
        b2_ = t.rhs;
        bk_.collect(b1_, path_of_);
        bk_.collect(b2_, path_of_);
        if (t.bound) {
            has_bound_ = true;
            bound_rel_ = t.bound->rel;
            if (t.bound->param) {
                auto it = v.find(*t.bound->param);
                if (it == v.end())
                    throw IdentifierError{*t.bound->param,
                                          "bound parameter '" + *t.bound->param + "' has no value"};
                bound_val_ = it->second;
            } else {
                bound_val_ = rational_of(t.bound->nat);
            }
        }
        eval_.cx = {&pta_, &v_, &bk_};
        eval_.path_of = &path_of_;
    }

    /// Satisfaction from the initial states: the path quantifier also picks
    /// the shared initial state (all bound paths start at the same one).
    bool run() {
        std::vector<long long> zero(ta_.clock_names.size(), 0);
        for (int init : pta_.initial) {
            if (!ta_.inv_ok(init, zero)) continue;       // no valid state at all
            if (!capability_.capable(init, zero)) continue;  // no time-divergent path
            JointCfg cfg;
            cfg.locs.assign(n_, init);
            cfg.clocks.assign(n_, zero);
            cfg.counts.assign(bk_.count_pairs.size(), 0);
            cfg.residues.assign(bk_.count_pairs.size(), 0);
            cfg.last_rise.assign(bk_.last_pairs.size(), 0);
            bool r = go(cfg);
            if (exists_ && r) return true;
            if (!exists_ && !r) return false;
        }
        return !exists_;  // exists: nothing worked; forall: vacuous or all passed
    }

private:
    bool bound_ok(long long t) const {
        if (!has_bound_) return true;
        return cmp_rat(rational_of(t), bound_rel_, bound_val_);
    }

    /// Is there an integer time x in [t, t+d] with x REL gamma?
    bool bound_hit_within(long long t, long long d) const {
        if (!has_bound_) return true;
        Rational lo = rational_of(t), hi = rational_of(t + d);
        switch (bound_rel_) {
            case Rel::Lt: return lo < bound_val_;
            case Rel::Le: return lo <= bound_val_;
            case Rel::Ge: return hi >= bound_val_;
            case Rel::Gt: return hi > bound_val_;
            case Rel::Eq:
                return is_integral(bound_val_) && lo <= bound_val_ && bound_val_ <= hi;
        }
        return false;
    }

    /// With upper-bound relations, states past the bound can never collect.
    bool bound_unreachable(long long t) const {
        if (!has_bound_) return false;
        Rational rt = rational_of(t);
        switch (bound_rel_) {
            case Rel::Lt: return rt >= bound_val_;
            case Rel::Le: return rt > bound_val_;
            case Rel::Eq: return rt > bound_val_;
            default: return false;
        }
    }

    std::vector<long long> encode(const JointCfg& cfg) const {
        std::vector<long long> key;
        key.reserve(n_ * (1 + ta_.clock_names.size()) + cfg.counts.size() * 2 +
                    cfg.last_rise.size() + 2);
        for (int i = 0; i < n_; ++i) {
            key.push_back(cfg.locs[i]);
            key.insert(key.end(), cfg.clocks[i].begin(), cfg.clocks[i].end());
        }
        key.insert(key.end(), cfg.counts.begin(), cfg.counts.end());
        key.insert(key.end(), cfg.residues.begin(), cfg.residues.end());
        for (auto lr : cfg.last_rise) key.push_back(cfg.time - lr);
        key.push_back(cfg.time);
        key.push_back(cfg.steps);
        return key;
    }

    bool all_inv_ok(const JointCfg& cfg, const std::vector<std::vector<long long>>& clocks) const {
        for (int i = 0; i < n_; ++i)
            if (!ta_.inv_ok(cfg.locs[i], clocks[i])) return false;
        return true;
    }

    bool all_capable(const JointCfg& cfg, const std::vector<std::vector<long long>>& clocks) {
        for (int i = 0; i < n_; ++i)
            if (!capability_.capable(cfg.locs[i], clocks[i])) return false;
        return true;
    }

    /// Enabled edges of path i at the given clock valuation.
    std::vector<int> enabled(int loc, const std::vector<long long>& clocks) const {
        std::vector<int> out;
        for (int e : ta_.out[loc]) {
            if (!ta_.guard_ok(ta_.guards[e], clocks)) continue;
            auto r = ta_.reset_clocks(clocks, e);
            if (ta_.inv_ok(pta_.edges[e].target, r)) out.push_back(e);
        }
        return out;
    }

    JointCfg apply(const JointCfg& cfg, long long d,
                   const std::vector<std::vector<long long>>& delayed,
                   const std::vector<int>& fired /* -1 = idle, else edge */) {
        JointCfg next = cfg;
        next.time += d;
        next.steps += 1;
        next.clocks = delayed;
        for (int i = 0; i < n_; ++i) {
            int e = fired[i];
            if (e < 0) continue;
            int src = cfg.locs[i];
            int tgt = pta_.edges[e].target;
            next.clocks[i] = ta_.reset_clocks(delayed[i], e);
            next.locs[i] = tgt;
            const auto& old_labels = pta_.locations[src].labels;
            const auto& new_labels = pta_.locations[tgt].labels;
            for (size_t k = 0; k < bk_.count_pairs.size(); ++k) {
                auto& [prop, pi] = bk_.count_pairs[k];
                if (pi != i) continue;
                if (!old_labels.count(prop) && new_labels.count(prop)) {
                    if (bk_.exact_counts || next.counts[k] < bk_.sat_cap) next.counts[k] += 1;
                    next.residues[k] = math_mod(next.residues[k] + 1, bk_.mod_lcm);
                }
            }
            for (size_t k = 0; k < bk_.last_pairs.size(); ++k) {
                auto& [prop, pi] = bk_.last_pairs[k];
                if (pi != i) continue;
                if (!old_labels.count(prop) && new_labels.count(prop)) next.last_rise[k] = next.time;
            }
        }
        return next;
    }

    /// Every valid fire set at the delayed clocks: a nonempty choice of
    /// paths, one enabled edge each.
    void fire_sets(const std::vector<std::vector<long long>>& delayed, const JointCfg& cfg,
                   const std::function<bool(const std::vector<int>&)>& use) {
        std::vector<std::vector<int>> options(n_);
        for (int i = 0; i < n_; ++i) options[i] = enabled(cfg.locs[i], delayed[i]);
        std::vector<int> pick(n_, -1);
        std::function<bool(int, bool)> rec = [&](int i, bool any) -> bool {
            if (i == n_) {
                if (!any) return false;
                return use(pick);
            }
            pick[i] = -1;
            if (rec(i + 1, any)) return true;
            for (int e : options[i]) {
                pick[i] = e;
                if (rec(i + 1, true)) return true;
            }
            pick[i] = -1;
            return false;
        };
        rec(0, false);
    }

    bool go(const JointCfg& cfg) {
        auto key = encode(cfg);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool result = compute(cfg);
        memo_[key] = result;
        return result;
    }

    bool compute(const JointCfg& cfg) {
        bool b1 = eval_(b1_, cfg);
        bool b2 = eval_(b2_, cfg);
        if (b2 && bound_ok(cfg.time)) return true;
        if (!b1) return false;
        if (bound_unreachable(cfg.time)) return false;

        long long maxd = horizon_ - cfg.time;
        bool can_step = cfg.steps + 1 <= horizon_;

        if (exists_) {
            // mid-dwell witness
            if (b2) {
                auto clocks = cfg.clocks;
                for (long long r = 1; r <= maxd; ++r) {
                    for (auto& c : clocks) c = ta_.plus1(c);
                    if (!all_inv_ok(cfg, clocks)) break;
                    if (bound_ok(cfg.time + r) && all_capable(cfg, clocks)) return true;
                }
            }
            if (!can_step) return false;
            auto delayed = cfg.clocks;
            for (long long d = 0; d <= maxd; ++d) {
                if (d > 0) {
                    for (auto& c : delayed) c = ta_.plus1(c);
                    if (!all_inv_ok(cfg, delayed)) break;
                }
                bool found = false;
                fire_sets(delayed, cfg, [&](const std::vector<int>& fired) {
                    JointCfg next = apply(cfg, d, delayed, fired);
                    if (!all_capable(next, next.clocks)) return false;
                    if (go(next)) {
                        found = true;
                        return true;
                    }
                    return false;
                });
                if (found) return true;
            }
            return false;
        }

        // forall: every valid completion needs a witness within the horizon
        auto delayed = cfg.clocks;
        long long reached = -1;  // largest valid dwell with the clocks in `delayed`
        for (long long d = 0; d <= maxd; ++d) {
            if (d > 0) {
                for (auto& c : delayed) c = ta_.plus1(c);
                if (!all_inv_ok(cfg, delayed)) break;
            }
            reached = d;
            bool hit = b2 && bound_hit_within(cfg.time, d);
            bool violated = false;
            fire_sets(delayed, cfg, [&](const std::vector<int>& fired) {
                JointCfg next = apply(cfg, d, delayed, fired);
                if (!all_capable(next, next.clocks)) return false;  // prefix of no valid path
                if (hit) return false;                              // witnessed before the fire
                if (!can_step || !go(next)) {
                    violated = true;
                    return true;
                }
                return false;
            });
            if (violated) return false;
        }
        // completions that stay in this segment through the horizon
        if (reached == maxd && all_capable(cfg, delayed)) {
            if (!(b2 && bound_hit_within(cfg.time, maxd))) return false;
        }
        return true;
    }

    const Pta& pta_;
    ParamValuation v_;
    int horizon_;
    DiscreteTA ta_;
    CapabilityOracle capability_;
    bool exists_ = true;
    int n_ = 1;
    std::map<std::string, int> path_of_;
    BoolPtr b1_, b2_;
    Bookkeeping bk_;
    bool has_bound_ = false;
    Rel bound_rel_ = Rel::Le;
    Rational bound_val_;
    BoolEvaluator eval_;
    std::unordered_map<std::vector<long long>, bool, VecHash> memo_;
};

/// Boolean-level formula under the empty path assignment: propositions and
/// extended predicates mention unassigned path variables, so only the
/// truth constant survives.
bool eval_empty_assignment(const BoolPtr& e) {
    using K = BoolExpr::Kind;
    switch (e->kind) {
        case K::True: return true;
        case K::Prop:
        case K::Last:
        case K::CountGe0:
        case K::CountMod: return false;
        case K::Not: return !eval_empty_assignment(e->a);
        case K::Or: return eval_empty_assignment(e->a) || eval_empty_assignment(e->b);
        case K::And: return eval_empty_assignment(e->a) && eval_empty_assignment(e->b);
        case K::Implies: return !eval_empty_assignment(e->a) || eval_empty_assignment(e->b);
        case K::Equiv: return eval_empty_assignment(e->a) == eval_empty_assignment(e->b);
        case K::Nequiv: return eval_empty_assignment(e->a) != eval_empty_assignment(e->b);
    }
    return false;
}

bool eval_top_rec(const Pta& a, const ParamValuation& v, const TopPtr& psi, int horizon,
                  const std::vector<Rational>& grid) {
    using K = TopExpr::Kind;
    switch (psi->kind) {
        case K::BoolAtom: return eval_empty_assignment(psi->atom);
        case K::ParamCmp: {
            auto it = v.find(psi->param);
            if (it == v.end())
                throw IdentifierError{psi->param, "parameter '" + psi->param + "' has no value"};
            return cmp_rat(it->second, psi->rel, psi->lt.evaluate(v));
        }
        case K::Not: return !eval_top_rec(a, v, psi->a, horizon, grid);
        case K::Or:
            return eval_top_rec(a, v, psi->a, horizon, grid) ||
                   eval_top_rec(a, v, psi->b, horizon, grid);
        case K::And:
            return eval_top_rec(a, v, psi->a, horizon, grid) &&
                   eval_top_rec(a, v, psi->b, horizon, grid);
        case K::Implies:
            return !eval_top_rec(a, v, psi->a, horizon, grid) ||
                   eval_top_rec(a, v, psi->b, horizon, grid);
        case K::ExistsParam: {
            if (grid.empty())
                throw std::runtime_error(
                    "existential parameter quantifier requires a candidate grid");
            for (auto& val : grid) {
                ParamValuation v2 = v;
                v2[psi->param] = val;
                if (eval_top_rec(a, v2, psi->a, horizon, grid)) return true;
            }
            return false;
        }
        case K::ForallParam: {
            if (grid.empty())
                throw std::runtime_error(
                    "universal parameter quantifier requires a candidate grid");
            for (auto& val : grid) {
                ParamValuation v2 = v;
                v2[psi->param] = val;
                if (!eval_top_rec(a, v2, psi->a, horizon, grid)) return false;
            }
            return true;
        }
        case K::Temporal: {
            TemporalFormula t = psi->temporal;
            if (t.kind != TemporalFormula::Kind::Until)
                throw std::runtime_error("oracle expects desugared formulas (until only)");
            UntilEngine engine(a, v, t, horizon);
            return engine.run();
        }
    }
    return false;
}

}  // namespace

bool oracle_eval_top(const Pta& a, const ParamValuation& v, const TopPtr& psi, int horizon,
                     const std::vector<Rational>& exists_grid) {
    if (horizon < 1) throw std::runtime_error("oracle horizon must be at least 1");
    return eval_top_rec(a, v, desugar(psi), horizon, exists_grid);
}

std::vector<ParamValuation> oracle_grid_synth(const Pta& a, const TopPtr& psi,
                                              const std::vector<ParamValuation>& grid, int horizon,
                                              const std::vector<Rational>& exists_grid) {
    std::vector<ParamValuation> out;
    TopPtr d = desugar(psi);
    for (auto& v : grid)
        if (eval_top_rec(a, v, d, horizon, exists_grid)) out.push_back(v);
    return out;
}

void oracle_walk_positions(const Pta& a, const ParamValuation& v, int n, int horizon,
                           const std::function<void(const JointPositionView&)>& visit) {
    DiscreteTA ta(a, v, horizon);
    CapabilityOracle capability(ta);

    // Exact bookkeeping for every (prop, path) pair: counts within the
    // horizon are bounded by the step budget, so no abstraction is needed.
    Bookkeeping bk;
    bk.exact_counts = true;
    bk.sat_cap = horizon + 1;
    std::map<std::string, int> path_of;
    for (int i = 0; i < n; ++i) path_of["pi" + std::to_string(i + 1)] = i;
    for (auto& prop : a.props)
        for (int i = 0; i < n; ++i) {
            bk.note_count_pair(prop, i);
            bk.note_last_pair(prop, i);
        }

    EvalContext cx{&a, &v, &bk};
    BoolEvaluator eval{cx, &path_of};
    eval.single_path = n == 1;

    auto encode = [&](const JointCfg& cfg) {
        std::vector<long long> key;
        for (int i = 0; i < n; ++i) {
            key.push_back(cfg.locs[i]);
            key.insert(key.end(), cfg.clocks[i].begin(), cfg.clocks[i].end());
        }
        key.insert(key.end(), cfg.counts.begin(), cfg.counts.end());
        key.insert(key.end(), cfg.last_rise.begin(), cfg.last_rise.end());
        key.push_back(cfg.time);
        key.push_back(cfg.steps);
        return key;
    };

    std::unordered_set<std::vector<long long>, VecHash> seen;
    std::deque<JointCfg> work;
    std::vector<long long> zero(ta.clock_names.size(), 0);
    for (int init : a.initial) {
        if (!ta.inv_ok(init, zero) || !capability.capable(init, zero)) continue;
        JointCfg cfg;
        cfg.locs.assign(n, init);
        cfg.clocks.assign(n, zero);
        cfg.counts.assign(bk.count_pairs.size(), 0);
        cfg.residues.assign(bk.count_pairs.size(), 0);
        cfg.last_rise.assign(bk.last_pairs.size(), 0);
        if (seen.insert(encode(cfg)).second) work.push_back(cfg);
    }

    auto emit = [&](const JointCfg& cfg) {
        JointPositionView view{cfg.locs, cfg.clocks, ta.clock_names, cfg.time, nullptr};
        view.holds = [&](const BoolPtr& e) { return eval(e, cfg); };
        visit(view);
    };

    while (!work.empty()) {
        JointCfg cfg = work.front();
        work.pop_front();
        emit(cfg);

        // delay by one unit
        if (cfg.time + 1 <= horizon) {
            JointCfg next = cfg;
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                next.clocks[i] = ta.plus1(next.clocks[i]);
                if (!ta.inv_ok(next.locs[i], next.clocks[i])) ok = false;
            }
            next.time += 1;
            if (ok) {
                bool cap_ok = true;
                for (int i = 0; i < n && cap_ok; ++i)
                    cap_ok = capability.capable(next.locs[i], next.clocks[i]);
                if (cap_ok && seen.insert(encode(next)).second) work.push_back(next);
            }
        }
        // fire a nonempty set of edges now
        if (cfg.steps + 1 <= horizon) {
            std::vector<std::vector<int>> options(n);
            for (int i = 0; i < n; ++i) {
                for (int e : ta.out[cfg.locs[i]]) {
                    if (!ta.guard_ok(ta.guards[e], cfg.clocks[i])) continue;
                    auto r = ta.reset_clocks(cfg.clocks[i], e);
                    if (ta.inv_ok(a.edges[e].target, r)) options[i].push_back(e);
                }
            }
            std::vector<int> pick(n, -1);
            std::function<void(int, bool)> rec = [&](int i, bool any) {
                if (i == n) {
                    if (!any) return;
                    JointCfg next = cfg;
                    next.steps += 1;
                    for (int k = 0; k < n; ++k) {
                        int e = pick[k];
                        if (e < 0) continue;
                        int src = cfg.locs[k];
                        int tgt = a.edges[e].target;
                        next.clocks[k] = ta.reset_clocks(cfg.clocks[k], e);
                        next.locs[k] = tgt;
                        const auto& ol = a.locations[src].labels;
                        const auto& nl = a.locations[tgt].labels;
                        for (size_t j = 0; j < bk.count_pairs.size(); ++j) {
                            auto& [prop, pi] = bk.count_pairs[j];
                            if (pi != k) continue;
                            if (!ol.count(prop) && nl.count(prop)) next.counts[j] += 1;
                        }
                        for (size_t j = 0; j < bk.last_pairs.size(); ++j) {
                            auto& [prop, pi] = bk.last_pairs[j];
                            if (pi != k) continue;
                            if (!ol.count(prop) && nl.count(prop)) next.last_rise[j] = next.time;
                        }
                    }
                    bool cap_ok = true;
                    for (int k = 0; k < n && cap_ok; ++k)
                        cap_ok = capability.capable(next.locs[k], next.clocks[k]);
                    if (cap_ok && seen.insert(encode(next)).second) work.push_back(next);
                    return;
                }
                pick[i] = -1;
                rec(i + 1, any);
                for (int e : options[i]) {
                    pick[i] = e;
                    rec(i + 1, true);
                }
                pick[i] = -1;
            };
            rec(0, false);
        }
    }
}

}  // namespace hyptctl
