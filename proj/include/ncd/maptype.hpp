// Decorated combinatorial types of maps into level-m buildings: contact
// records, trivial components and their chains, naive and enhanced matching,
// weighted-projective evaluation and relative stability.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "exactnum.hpp"
#include "json_util.hpp"

namespace ncd {

// Contact in one local branch. `level` is the level of the component's lift in
// that branch direction; `formal` marks a component constant in that direction
// (its sign, multiplicity and coefficient are then formal decorations).
struct SlotContact {
    std::string branch;
    std::optional<long> s;
    int sign = 1;
    int level = 0;
    std::optional<ExactComplex> a;
    bool formal = false;
};

struct ContactRecord {
    std::string stratum; // empty for an ordinary point
    std::vector<SlotContact> slots;

    const SlotContact* find(const std::string& branch) const
    {
        for (auto& s : slots)
            if (s.branch == branch) return &s;
        return nullptr;
    }
    std::size_t depth() const { return slots.size(); }
    long degree() const
    {
        long d = 0;
        for (auto& s : slots) d += s.s.value_or(0);
        return d;
    }
    std::set<std::string> branches() const
    {
        std::set<std::string> b;
        for (auto& s : slots) b.insert(s.branch);
        return b;
    }
};

struct SpecialPoint {
    std::string id;
    ContactRecord contact;
};

struct Component {
    std::string id;
    int genus = 0;
    bool trivial = false;
    std::optional<int> level; // global level of the piece the component maps to
    std::vector<SpecialPoint> points;
};

struct Node {
    std::string id;
    std::string minus, plus; // the two point ids
};

struct Pairings {
    long c1A = 0; // c1(TX) . A
    long AV = 0;  // A . V
    long chi = 2; // Euler characteristic of the domain
    long ell = 0; // number of contact points
};

struct MapType {
    std::vector<int> levels{0};           // level count per scaling direction
    std::map<std::string, int> branch_dirs; // branch -> scaling direction (default 0)
    int dimX = 4;
    Pairings pairings;
    std::vector<Component> components;
    std::vector<Node> nodes;
    std::vector<std::string> marked;

    int direction(const std::string& branch) const
    {
        auto it = branch_dirs.find(branch);
        return it == branch_dirs.end() ? 0 : it->second;
    }
    int top(const std::string& branch) const
    {
        int d = direction(branch);
        return (d >= 0 && d < static_cast<int>(levels.size())) ? levels[d] : 0;
    }
};

struct PointRef {
    std::size_t comp = 0, point = 0;
    friend bool operator==(const PointRef&, const PointRef&) = default;
    friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

// lookup tables for a map type
struct PointIndex {
    std::map<std::string, PointRef> where;
    std::map<std::string, std::size_t> node_of; // point id -> node index

    explicit PointIndex(const MapType& mt)
    {
        for (std::size_t c = 0; c < mt.components.size(); ++c)
            for (std::size_t p = 0; p < mt.components[c].points.size(); ++p)
                where.emplace(mt.components[c].points[p].id, PointRef{c, p});
        for (std::size_t n = 0; n < mt.nodes.size(); ++n) {
            node_of.emplace(mt.nodes[n].minus, n);
            node_of.emplace(mt.nodes[n].plus, n);
        }
    }
};

inline const SpecialPoint& point(const MapType& mt, PointRef r) { return mt.components[r.comp].points[r.point]; }

// ---------------------------------------------------------------- contraction

// A special point x of the base curve C_0 together with its fibre B_x: the
// chain of trivial components it stretches into.
struct BasePoint {
    enum class Kind { Node, Marked } kind = Kind::Node;
    std::string id;
    std::vector<std::size_t> components; // K_0 (nontrivial), trivial ones, [K_last nontrivial for nodes]
    std::vector<std::size_t> nodes;      // node between components[k] and components[k+1]
    std::vector<std::pair<PointRef, PointRef>> node_sides; // (side on components[k], side on components[k+1])
    PointRef start;                      // x- on the nontrivial component
    std::optional<PointRef> end;         // x+ (other nontrivial side, or the marked end of the chain)

    std::size_t stretch() const
    {
        return kind == Kind::Node ? (components.size() >= 2 ? components.size() - 2 : 0) : components.size() - 1;
    }
};

struct Contraction {
    std::vector<BasePoint> base;
    std::vector<std::string> violations;
};

inline Contraction contract(const MapType& mt)
{
    Contraction out;
    PointIndex ix(mt);
    std::set<std::size_t> seen_nodes;
    std::set<std::size_t> visited_trivial;

    auto other = [&](std::size_t n, const std::string& pid) {
        return mt.nodes[n].minus == pid ? mt.nodes[n].plus : mt.nodes[n].minus;
    };
    for (std::size_t c = 0; c < mt.components.size(); ++c) {
        const Component& K = mt.components[c];
        if (K.trivial) continue;
        for (std::size_t p = 0; p < K.points.size(); ++p) {
            const std::string& pid = K.points[p].id;
            BasePoint bp;
            bp.start = {c, p};
            bp.components = {c};
            auto nit = ix.node_of.find(pid);
            if (nit == ix.node_of.end()) {
                bp.kind = BasePoint::Kind::Marked;
                bp.id = pid;
                bp.end = bp.start;
                out.base.push_back(bp);
                continue;
            }
            if (seen_nodes.count(nit->second)) continue;
            // walk through trivial components
            std::size_t n = nit->second;
            PointRef here{c, p};
            bool ok = true;
            for (std::size_t guard = 0; guard <= mt.components.size() + 1; ++guard) {
                std::string oid = other(n, point(mt, here).id);
                auto oit = ix.where.find(oid);
                if (oit == ix.where.end()) {
                    ok = false;
                    break;
                }
                PointRef there = oit->second;
                bp.nodes.push_back(n);
                bp.node_sides.emplace_back(here, there);
                bp.components.push_back(there.comp);
                seen_nodes.insert(n);
                const Component& T = mt.components[there.comp];
                if (!T.trivial) {
                    bp.kind = BasePoint::Kind::Node;
                    bp.end = there;
                    break;
                }
                if (T.points.size() != 2 || visited_trivial.count(there.comp)) {
                    ok = false;
                    break;
                }
                visited_trivial.insert(there.comp);
                PointRef next{there.comp, there.point == 0 ? std::size_t{1} : std::size_t{0}};
                auto nn = ix.node_of.find(point(mt, next).id);
                if (nn == ix.node_of.end()) {
                    bp.kind = BasePoint::Kind::Marked;
                    bp.end = next;
                    break;
                }
                here = next;
                n = nn->second;
            }
            if (!ok || !bp.end) {
                out.violations.push_back("chain starting at '" + pid + "' is not a chain of two-pointed trivial components");
                continue;
            }
            bp.id = bp.kind == BasePoint::Kind::Node ? mt.nodes[bp.nodes.front()].id : point(mt, *bp.end).id;
            out.base.push_back(bp);
        }
    }
    for (std::size_t c = 0; c < mt.components.size(); ++c)
        if (mt.components[c].trivial && !visited_trivial.count(c))
            out.violations.push_back("trivial component '" + mt.components[c].id +
                                     "' is not in a chain attached to a nontrivial component");
    return out;
}

// ---------------------------------------------------------------- validators

inline bool degree_check(const MapType& mt)
{
    PointIndex ix(mt);
    long total = 0;
    for (auto& m : mt.marked) {
        auto it = ix.where.find(m);
        if (it != ix.where.end()) total += point(mt, it->second).contact.degree();
    }
    return total == mt.pairings.AV;
}

inline std::vector<std::string> validate_structure(const MapType& mt)
{
    std::vector<std::string> v;
    if (mt.levels.empty()) v.push_back("at least one scaling direction is required");
    for (int l : mt.levels)
        if (l < 0) v.push_back("level counts must be non-negative");
    for (auto& [b, d] : mt.branch_dirs)
        if (d < 0 || d >= static_cast<int>(mt.levels.size()))
            v.push_back("branch '" + b + "' has an unknown scaling direction");

    std::set<std::string> cids, pids;
    for (auto& K : mt.components) {
        if (!cids.insert(K.id).second) v.push_back("duplicate component id '" + K.id + "'");
        for (auto& P : K.points)
            if (!pids.insert(P.id).second) v.push_back("duplicate point id '" + P.id + "'");
    }
    PointIndex ix(mt);
    std::set<std::string> in_node, nids;
    for (auto& n : mt.nodes) {
        if (!nids.insert(n.id).second) v.push_back("duplicate node id '" + n.id + "'");
        for (auto* p : {&n.minus, &n.plus}) {
            if (!ix.where.count(*p)) v.push_back("node '" + n.id + "' references unknown point '" + *p + "'");
            if (!in_node.insert(*p).second) v.push_back("point '" + *p + "' lies on more than one node side");
        }
    }
    std::set<std::string> expected_marked;
    for (auto& p : pids)
        if (!in_node.count(p)) expected_marked.insert(p);
    if (std::set<std::string>(mt.marked.begin(), mt.marked.end()) != expected_marked || mt.marked.size() != expected_marked.size())
        v.push_back("marked points must be exactly the special points not on nodes");

    for (auto& K : mt.components) {
        std::string at = "component '" + K.id + "': ";
        if (K.genus < 0) v.push_back(at + "negative genus");
        int max_lift = 0;
        for (auto& P : K.points) {
            std::set<std::string> br;
            for (auto& s : P.contact.slots) {
                std::string sat = at + "point '" + P.id + "' branch '" + s.branch + "': ";
                if (!br.insert(s.branch).second) v.push_back(sat + "repeated branch");
                if (P.contact.stratum.empty()) v.push_back(sat + "contact without a stratum label");
                if (s.sign < -1 || s.sign > 1) v.push_back(sat + "sign must be -1, 0 or +1");
                if (s.level < 0 || s.level > mt.top(s.branch)) v.push_back(sat + "level out of range");
                if (s.s && *s.s <= 0) v.push_back(sat + "multiplicity must be positive");
                if (!s.formal && s.sign == -1 && s.level < 1) v.push_back(sat + "infinity side at level 0");
                if (!K.trivial && !s.s) v.push_back(sat + "undefined multiplicity on a nontrivial component");
                if (!K.trivial && s.formal) v.push_back(sat + "formal decoration on a nontrivial component");
                if (!s.formal) max_lift = std::max(max_lift, s.level);
            }
        }
        if (K.level && *K.level < max_lift) v.push_back(at + "component level below the level of its contacts");
        if (!K.trivial) continue;
        if (K.genus != 0) v.push_back(at + "trivial components have genus 0");
        if (K.points.size() != 2) {
            v.push_back(at + "trivial components have exactly two special points");
            continue;
        }
        const ContactRecord& x = K.points[0].contact;
        const ContactRecord& y = K.points[1].contact;
        bool geometric = false;
        for (auto& s : x.slots) geometric |= !s.formal;
        for (auto& s : y.slots) geometric |= !s.formal;
        if (!geometric) v.push_back(at + "trivial component constant in every direction");
        if (x.stratum == y.stratum && x.branches() != y.branches())
            v.push_back(at + "end points over the same stratum with different branches");
        for (auto& s : x.slots) {
            const SlotContact* t = y.find(s.branch);
            if (!t) {
                if (s.formal) v.push_back(at + "formal branch '" + s.branch + "' missing at the other end");
                continue;
            }
            std::string bat = at + "branch '" + s.branch + "': ";
            if (s.s != t->s) v.push_back(bat + "multiplicities differ at the two ends");
            if (s.sign == 0 || s.sign != -t->sign) v.push_back(bat + "ends must carry opposite nonzero signs");
            if (s.level != t->level) v.push_back(bat + "ends at different levels");
            if (s.formal != t->formal) v.push_back(bat + "formal flag differs at the two ends");
            if (s.a && t->a && !(*s.a * *t->a).is_unit()) v.push_back(bat + "coefficients are not reciprocal");
        }
        for (auto& s : y.slots)
            if (!x.find(s.branch) && s.formal) v.push_back(at + "formal branch '" + s.branch + "' missing at the other end");
    }
    // marked points: never on an infinity divisor; contacts only with the top zero divisor
    for (auto& m : mt.marked) {
        auto it = ix.where.find(m);
        if (it == ix.where.end()) continue;
        for (auto& s : point(mt, it->second).contact.slots) {
            if (s.sign == -1) v.push_back("marked point '" + m + "' maps to an infinity divisor");
            if (s.sign == 1 && s.level != mt.top(s.branch))
                v.push_back("marked point '" + m + "' meets a zero divisor below the top level");
        }
    }
    if (!degree_check(mt)) v.push_back("sum of contact degrees of marked points differs from AV");
    for (auto& s : contract(mt).violations) v.push_back(s);
    return v;
}

inline std::vector<std::string> check_naive(const MapType& mt)
{
    std::vector<std::string> v;
    PointIndex ix(mt);
    for (auto& n : mt.nodes) {
        auto a = ix.where.find(n.minus), b = ix.where.find(n.plus);
        if (a == ix.where.end() || b == ix.where.end()) {
            v.push_back("node '" + n.id + "': unknown point");
            continue;
        }
        const ContactRecord& x = point(mt, a->second).contact;
        const ContactRecord& y = point(mt, b->second).contact;
        std::string at = "node '" + n.id + "': ";
        if (x.slots.empty() && y.slots.empty()) continue; // ordinary node
        if (x.stratum != y.stratum) v.push_back(at + "image strata differ");
        if (x.branches() != y.branches()) {
            v.push_back(at + "branch sets differ");
            continue;
        }
        for (auto& s : x.slots) {
            const SlotContact& t = *y.find(s.branch);
            std::string sat = at + "branch '" + s.branch + "': ";
            if (!s.s || !t.s)
                v.push_back(sat + "undefined multiplicity");
            else if (*s.s != *t.s)
                v.push_back(sat + "multiplicities " + std::to_string(*s.s) + " and " + std::to_string(*t.s) + " differ");
            if (s.sign == 0 || s.sign != -t.sign) {
                v.push_back(sat + "signs are not opposite");
                continue;
            }
            const SlotContact& plus = s.sign == 1 ? s : t;
            const SlotContact& minus = s.sign == 1 ? t : s;
            bool crossing = minus.level == plus.level + 1;
            bool flat = minus.level == plus.level && (plus.formal || minus.formal);
            if (!crossing && !flat) v.push_back(sat + "levels do not match across the node");
        }
    }
    return v;
}

// Per direction of a base point: groups of chain nodes between consecutive
// components that are geometric in that direction, each with its junction level.
struct DirectionGroups {
    std::string branch;
    int direction = 0;
    long s = 0;
    std::vector<std::pair<int, std::vector<std::size_t>>> groups; // (junction level, node indices)
};

namespace detail {

inline bool geometric_in(const Component& K, const std::string& branch)
{
    if (!K.trivial) return true;
    for (auto& P : K.points)
        if (auto* s = P.contact.find(branch); s && !s->formal) return true;
    return false;
}

} // namespace detail

inline std::vector<DirectionGroups> chain_groups(const MapType& mt, const BasePoint& bp, std::vector<std::string>* problems = nullptr)
{
    std::vector<DirectionGroups> out;
    auto complain = [&](const std::string& msg) {
        if (problems)
            problems->push_back("fibre over '" + bp.id + "': " + msg);
        else
            throw StructuralError("fibre over '" + bp.id + "': " + msg);
    };
    if (bp.nodes.empty()) return out;
    const ContactRecord& start = point(mt, bp.start).contact;
    for (auto& sl : start.slots) {
        DirectionGroups g{sl.branch, mt.direction(sl.branch), sl.s.value_or(0), {}};
        int trend = 0;
        std::vector<std::size_t> pending;
        std::optional<int> junction;
        int crossings = 0;
        bool broken = false;
        for (std::size_t k = 0; k < bp.nodes.size(); ++k) {
            auto [near, far] = bp.node_sides[k];
            const SlotContact* a = point(mt, near).contact.find(sl.branch);
            const SlotContact* b = point(mt, far).contact.find(sl.branch);
            if (!a || !b) {
                complain("direction '" + sl.branch + "' missing at node '" + mt.nodes[bp.nodes[k]].id + "'");
                broken = true;
                break;
            }
            int delta = b->level - a->level;
            if (delta != 0) {
                if (std::abs(delta) != 1) complain("direction '" + sl.branch + "' jumps by more than one level");
                if (trend != 0 && delta != trend) complain("direction '" + sl.branch + "' is not monotone");
                trend = delta;
                ++crossings;
                junction = std::max(a->level, b->level);
            }
            pending.push_back(bp.nodes[k]);
            if (detail::geometric_in(mt.components[bp.components[k + 1]], sl.branch)) {
                if (crossings != 1 || !junction)
                    complain("direction '" + sl.branch + "' needs exactly one level step between geometric components");
                else
                    g.groups.emplace_back(*junction, pending);
                pending.clear();
                junction.reset();
                crossings = 0;
            }
        }
        if (broken) continue;
        if (crossings != 0) complain("direction '" + sl.branch + "' steps levels past its last geometric component");
        out.push_back(std::move(g));
    }
    // every node moves in at least one direction
    for (std::size_t k = 0; k < bp.nodes.size(); ++k) {
        auto [near, far] = bp.node_sides[k];
        bool moves = false;
        for (auto& s : point(mt, near).contact.slots)
            if (auto* t = point(mt, far).contact.find(s.branch); t && t->level != s.level) moves = true;
        if (!moves && !point(mt, near).contact.slots.empty())
            complain("no direction changes level at node '" + mt.nodes[bp.nodes[k]].id + "'");
    }
    return out;
}

inline std::vector<std::string> check_broken_cylinders(const MapType& mt)
{
    std::vector<std::string> v;
    Contraction c = contract(mt);
    v = c.violations;
    for (auto& bp : c.base) chain_groups(mt, bp, &v);
    return v;
}

inline std::optional<std::size_t> stretch(const MapType& mt, const std::string& base_point)
{
    for (auto& bp : contract(mt).base)
        if (bp.id == base_point) return bp.stretch();
    return std::nullopt;
}

inline bool is_decorated(const MapType& mt)
{
    PointIndex ix(mt);
    for (auto& n : mt.nodes)
        for (auto* p : {&n.minus, &n.plus})
            for (auto& s : point(mt, ix.where.at(*p)).contact.slots)
                if (!s.a) return false;
    return true;
}

struct EnhancedResult {
    bool satisfiable = true;
    std::map<std::string, ExactComplex> witness; // node id -> c(node)
    std::optional<std::string> failure;
};

// products a_i(y-) a_i(y+) and multiplicities at one node
inline std::pair<std::vector<ExactComplex>, std::vector<long>> node_products(const MapType& mt, const Node& n)
{
    PointIndex ix(mt);
    const ContactRecord& x = point(mt, ix.where.at(n.minus)).contact;
    const ContactRecord& y = point(mt, ix.where.at(n.plus)).contact;
    std::vector<ExactComplex> prods;
    std::vector<long> s;
    for (auto& a : x.slots) {
        const SlotContact* b = y.find(a.branch);
        if (!b) throw StructuralError("node '" + n.id + "': branch sets differ");
        if (!a.a || !b->a) throw StructuralError("node '" + n.id + "': undecorated branch '" + a.branch + "'");
        if (!a.s) throw StructuralError("node '" + n.id + "': undefined multiplicity");
        prods.push_back(*a.a * *b->a);
        s.push_back(*a.s);
    }
    return {prods, s};
}

// Exists c(y) with a_i(y-) a_i(y+) c(y)^{s_i} = 1 for every node y and branch i?
inline EnhancedResult check_enhanced(const MapType& mt)
{
    EnhancedResult r;
    for (auto& n : mt.nodes) {
        auto [prods, s] = node_products(mt, n);
        if (prods.empty()) continue;
        IntegerMatrix m(prods.size(), 1);
        std::vector<ExactComplex> rhs;
        for (std::size_t i = 0; i < prods.size(); ++i) {
            m(i, 0) = s[i];
            rhs.push_back(prods[i].inverse());
        }
        PowerSolution sol = solve_power_system(m, rhs, 1);
        if (!sol.consistent) {
            r.satisfiable = false;
            PointIndex ix(mt);
            const auto& slots = point(mt, ix.where.at(n.minus)).contact.slots;
            r.failure = "node '" + n.id + "', branch '" + slots[sol.violated.value_or(0)].branch + "'";
            r.witness.clear();
            return r;
        }
        r.witness[n.id] = sol.representatives.at(0).at(0);
    }
    return r;
}

inline bool check_relative_stability(const MapType& mt)
{
    for (std::size_t d = 0; d < mt.levels.size(); ++d)
        for (int l = 1; l <= mt.levels[d]; ++l) {
            bool carried = false;
            for (auto& K : mt.components) {
                if (K.trivial) continue;
                if (d == 0 && mt.levels.size() == 1 && K.level == l) carried = true;
                for (auto& P : K.points)
                    for (auto& s : P.contact.slots)
                        if (mt.direction(s.branch) == static_cast<int>(d) && s.level == l) carried = true;
            }
            if (!carried) return false;
        }
    return true;
}

// ---------------------------------------------------------------- weighted projective classes

// b == t.a for some t, where (t.a)_i = t^{w_i} a_i
inline bool wproj_equal(const std::vector<ExactComplex>& a, const std::vector<ExactComplex>& b, const std::vector<long>& w)
{
    if (a.size() != b.size() || a.size() != w.size()) throw StructuralError("wproj_equal: length mismatch");
    if (a.empty()) return true;
    std::vector<ExactComplex> r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (w[i] <= 0) throw StructuralError("wproj_equal: weights must be positive");
        r.push_back(b[i] / a[i]);
    }
    // cross-ratio invariants r_i^{w_j} = r_j^{w_i}
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j)
            if (r[i].pow(w[j]) != r[j].pow(w[i])) return false;
    // root existence: t^g = prod r_i^{u_i} with g = gcd(w) = sum u_i w_i
    long g = w[0];
    std::vector<long> u(w.size(), 0);
    u[0] = 1;
    for (std::size_t i = 1; i < w.size(); ++i) {
        // extended Euclid on (g, w_i)
        long old_r = g, rr = w[i], old_s = 1, s = 0, old_t = 0, t = 1;
        while (rr != 0) {
            long q = old_r / rr;
            std::tie(old_r, rr) = std::make_pair(rr, old_r - q * rr);
            std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
            std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
        }
        for (std::size_t k = 0; k < i; ++k) u[k] *= old_s;
        u[i] = old_t;
        g = old_r;
    }
    ExactComplex R;
    for (std::size_t i = 0; i < r.size(); ++i) R *= r[i].pow(u[i]);
    for (auto& t : R.roots(g)) {
        bool all = true;
        for (std::size_t i = 0; i < r.size() && all; ++i) all = (t.pow(w[i]) == r[i]);
        if (all) return true;
    }
    return false;
}

// ([a_minus], [a_plus]) lies on the antidiagonal {([a], [a^{-1}])}
inline bool antidiagonal(const std::vector<ExactComplex>& a_minus, const std::vector<ExactComplex>& a_plus,
                         const std::vector<long>& w)
{
    std::vector<ExactComplex> inv;
    for (auto& x : a_minus) inv.push_back(x.inverse());
    return wproj_equal(inv, a_plus, w);
}

struct EvaluationRecord {
    std::string stratum;
    std::vector<std::string> branches;
    std::vector<long> weights;
    std::vector<ExactComplex> coefficients;

    bool same_class(const EvaluationRecord& o) const
    {
        return stratum == o.stratum && branches == o.branches && weights == o.weights &&
               wproj_equal(coefficients, o.coefficients, weights);
    }
};

inline EvaluationRecord evaluation(const MapType& mt, const std::string& point_id)
{
    PointIndex ix(mt);
    auto it = ix.where.find(point_id);
    if (it == ix.where.end()) throw StructuralError("unknown point '" + point_id + "'");
    const ContactRecord& c = point(mt, it->second).contact;
    EvaluationRecord r{c.stratum, {}, {}, {}};
    for (auto& s : c.slots) {
        if (!s.a || !s.s) throw StructuralError("point '" + point_id + "' is undecorated in branch '" + s.branch + "'");
        r.branches.push_back(s.branch);
        r.weights.push_back(*s.s);
        r.coefficients.push_back(*s.a);
    }
    return r;
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const MapType& mt)
{
    using nlohmann::json;
    json comps = json::array();
    for (auto& K : mt.components) {
        json pts = json::array();
        for (auto& P : K.points) {
            json slots = json::array();
            for (auto& s : P.contact.slots) {
                json js = {{"branch", s.branch},
                           {"s", s.s ? json(*s.s) : json(nullptr)},
                           {"sign", s.sign},
                           {"level", s.level},
                           {"formal", s.formal}};
                if (s.a) js["a"] = json_util::complex_json(*s.a);
                slots.push_back(js);
            }
            json jp = {{"id", P.id}, {"contact", slots}};
            if (!P.contact.stratum.empty()) jp["stratum"] = P.contact.stratum;
            pts.push_back(jp);
        }
        json jc = {{"id", K.id}, {"genus", K.genus}, {"trivial", K.trivial}, {"points", pts}};
        if (K.level) jc["level"] = *K.level;
        comps.push_back(jc);
    }
    json nodes = json::array();
    for (auto& n : mt.nodes) nodes.push_back({{"id", n.id}, {"ends", {n.minus, n.plus}}});
    json out = {{"levels", mt.levels},
                {"dimX", mt.dimX},
                {"pairings",
                 {{"c1A", mt.pairings.c1A}, {"AV", mt.pairings.AV}, {"chi", mt.pairings.chi}, {"ell", mt.pairings.ell}}},
                {"components", comps},
                {"nodes", nodes},
                {"marked", mt.marked}};
    if (!mt.branch_dirs.empty()) out["branches"] = mt.branch_dirs;
    return out;
}

inline MapType maptype_from_json(const nlohmann::json& j)
{
    using namespace json_util;
    MapType mt;
    const std::string top = "map type";
    if (!j.is_object()) throw FormatError(top + ": expected an object");
    if (j.contains("levels") && j.at("levels").is_number_integer())
        mt.levels = {j.at("levels").get<int>()};
    else
        mt.levels = get<std::vector<int>>(j, "levels", top);
    mt.branch_dirs = get_or<std::map<std::string, int>>(j, "branches", {}, top);
    mt.dimX = get_or<int>(j, "dimX", 4, top);
    const json& pj = field(j, "pairings", top);
    mt.pairings.c1A = get<long>(pj, "c1A", "pairings");
    mt.pairings.AV = get<long>(pj, "AV", "pairings");
    mt.pairings.chi = get<long>(pj, "chi", "pairings");
    mt.pairings.ell = get<long>(pj, "ell", "pairings");
    const json& cj = field(j, "components", top);
    if (!cj.is_array()) throw FormatError(top + ": 'components' must be an array");
    for (auto& c : cj) {
        Component K;
        K.id = get<std::string>(c, "id", "component");
        std::string where = "component '" + K.id + "'";
        K.genus = get_or<int>(c, "genus", 0, where);
        K.trivial = get_or<bool>(c, "trivial", false, where);
        if (c.contains("level")) K.level = get<int>(c, "level", where);
        const json& ps = field(c, "points", where);
        if (!ps.is_array()) throw FormatError(where + ": 'points' must be an array");
        for (auto& p : ps) {
            SpecialPoint P;
            P.id = get<std::string>(p, "id", where + " point");
            std::string pw = "point '" + P.id + "'";
            P.contact.stratum = get_or<std::string>(p, "stratum", "", pw);
            const json& sl = get_or<json>(p, "contact", json::array(), pw);
            if (!sl.is_array()) throw FormatError(pw + ": 'contact' must be an array");
            for (auto& s : sl) {
                SlotContact x;
                x.branch = get<std::string>(s, "branch", pw);
                const json& sv = field(s, "s", pw);
                if (!sv.is_null()) {
                    if (!sv.is_number_integer()) throw FormatError(pw + ": multiplicity must be an integer or null");
                    x.s = sv.get<long>();
                }
                x.sign = get<int>(s, "sign", pw);
                x.level = get<int>(s, "level", pw);
                x.formal = get_or<bool>(s, "formal", false, pw);
                if (s.contains("a")) x.a = complex(s.at("a"), pw);
                P.contact.slots.push_back(std::move(x));
            }
            K.points.push_back(std::move(P));
        }
        mt.components.push_back(std::move(K));
    }
    const json& nj = get_or<json>(j, "nodes", json::array(), top);
    if (!nj.is_array()) throw FormatError(top + ": 'nodes' must be an array");
    for (auto& n : nj) {
        Node x;
        x.id = get<std::string>(n, "id", "node");
        auto ends = get<std::vector<std::string>>(n, "ends", "node '" + x.id + "'");
        if (ends.size() != 2) throw FormatError("node '" + x.id + "': exactly two ends required");
        x.minus = ends[0];
        x.plus = ends[1];
        mt.nodes.push_back(std::move(x));
    }
    mt.marked = get_or<std::vector<std::string>>(j, "marked", {}, top);
    return mt;
}

} // namespace ncd
