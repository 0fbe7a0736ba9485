// Built-in worked examples: divisors of the counting examples and the decorated
// map types of the neck examples. Leading coefficients are products of
// distinct primes so that they are multiplicatively independent.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divisor.hpp"
#include "error.hpp"
#include "maptype.hpp"

namespace ncd::fixtures {

namespace detail {

inline ExactComplex prime(std::uint64_t p) { return ExactComplex::from_rational(Rational(p)); }

inline SlotContact geo(std::string branch, long s, int sign, int level)
{
    return {std::move(branch), s, sign, level, std::nullopt, false};
}

inline SlotContact formal(std::string branch, long s, int sign, int level)
{
    return {std::move(branch), s, sign, level, std::nullopt, true};
}

inline SpecialPoint pt(std::string id, std::string stratum, std::vector<SlotContact> slots)
{
    return {std::move(id), {std::move(stratum), std::move(slots)}};
}

inline Component comp(std::string id, bool trivial, std::vector<SpecialPoint> points, std::optional<int> level = {})
{
    Component c;
    c.id = std::move(id);
    c.trivial = trivial;
    c.level = level;
    c.points = std::move(points);
    return c;
}

inline SpecialPoint& find_point(MapType& mt, const std::string& id)
{
    for (auto& K : mt.components)
        for (auto& P : K.points)
            if (P.id == id) return P;
    throw StructuralError("unknown point '" + id + "'");
}

// set coefficients of a point, one per slot in order
inline void coeffs(MapType& mt, const std::string& point_id, std::vector<ExactComplex> a)
{
    auto& P = find_point(mt, point_id);
    if (a.size() != P.contact.slots.size()) throw StructuralError("coefficient count mismatch at '" + point_id + "'");
    for (std::size_t i = 0; i < a.size(); ++i) P.contact.slots[i].a = a[i];
}

// Propagate coefficients along every fibre from its start side: across a node
// with gluing parameter c the far side gets (a c^s)^{-1}; across a trivial
// component shared branches get the reciprocal value.
inline void propagate(MapType& mt, const std::map<std::string, ExactComplex>& c)
{
    for (auto& bp : contract(mt).base)
        for (std::size_t k = 0; k < bp.nodes.size(); ++k) {
            const Node& n = mt.nodes[bp.nodes[k]];
            auto [near, far] = bp.node_sides[k];
            SpecialPoint& x = mt.components[near.comp].points[near.point];
            SpecialPoint& y = mt.components[far.comp].points[far.point];
            for (auto& s : x.contact.slots)
                for (auto& t : y.contact.slots)
                    if (t.branch == s.branch) t.a = (*s.a * c.at(n.id).pow(Rational(*s.s))).inverse();
            Component& K = mt.components[far.comp];
            if (!K.trivial) continue;
            SpecialPoint& z = K.points[far.point == 0 ? 1 : 0];
            for (auto& u : z.contact.slots)
                if (auto* t = y.contact.find(u.branch)) u.a = t->a->inverse();
        }
}

inline void finish(MapType& mt)
{
    PointIndex ix(mt);
    mt.marked.clear();
    for (auto& K : mt.components)
        for (auto& P : K.points)
            if (!ix.node_of.count(P.id)) mt.marked.push_back(P.id);
}

} // namespace detail

// One node of a smooth divisor between levels 0 and 1 with contact order 3,
// and a marked contact point of order 3 at the top level.
inline MapType smooth_level1()
{
    using namespace detail;
    MapType mt;
    mt.levels = {1};
    mt.pairings = {3, 3, 2, 1};
    mt.components = {comp("f", false, {pt("y-", "V", {geo("V", 3, 1, 0)})}, 0),
                     comp("g", false, {pt("y+", "V", {geo("V", 3, -1, 1)}), pt("x", "V", {geo("V", 3, 1, 1)})}, 1)};
    mt.nodes = {{"y", "y-", "y+"}};
    finish(mt);
    coeffs(mt, "y-", {prime(3)});
    coeffs(mt, "x", {prime(5)});
    propagate(mt, {{"y", prime(2)}});
    return mt;
}

// Limit as x0 -> x1 over a self-crossing point: level 1 building.
inline MapType neck1a()
{
    using namespace detail;
    MapType mt;
    mt.levels = {1};
    mt.pairings = {3, 5, 2, 2};
    mt.components = {
        comp("f", false,
             {pt("x-", "p", {geo("b1", 1, 1, 0), geo("b2", 1, 1, 0)}),
              pt("y1-", "p", {geo("b1", 1, 1, 0), geo("b2", 2, 1, 0)})},
             0),
        comp("f1", false,
             {pt("x+", "p", {geo("b1", 1, -1, 1), geo("b2", 1, -1, 1)}),
              pt("x1", "p", {geo("b1", 1, 1, 1), geo("b2", 1, 1, 1)}), pt("x0", "", {})},
             1),
        comp("f21", true,
             {pt("y1+", "p", {formal("b1", 1, -1, 0), geo("b2", 2, -1, 1)}),
              pt("y2-", "p", {formal("b1", 1, 1, 0), geo("b2", 2, 1, 1)})}),
        comp("f22", true,
             {pt("y2+", "p", {geo("b1", 1, -1, 1), formal("b2", 2, -1, 1)}),
              pt("x2", "p", {geo("b1", 1, 1, 1), formal("b2", 2, 1, 1)})}),
    };
    mt.nodes = {{"x", "x-", "x+"}, {"y1", "y1-", "y1+"}, {"y2", "y2-", "y2+"}};
    finish(mt);
    coeffs(mt, "x-", {prime(2), prime(3)});
    coeffs(mt, "y1-", {prime(5), prime(7)});
    coeffs(mt, "x1", {prime(11), prime(13)});
    propagate(mt, {{"x", prime(17)}, {"y1", prime(19)}, {"y2", prime(23)}});
    return mt;
}

// Limit as x0 -> x2 over a self-crossing point: level 2 building.
inline MapType neck1b()
{
    using namespace detail;
    MapType mt;
    mt.levels = {2};
    mt.pairings = {3, 5, 2, 2};
    mt.components = {
        comp("f", false,
             {pt("z1-", "p", {geo("b1", 1, 1, 0), geo("b2", 1, 1, 0)}),
              pt("y1-", "p", {geo("b1", 1, 1, 0), geo("b2", 2, 1, 0)})},
             0),
        comp("N", false,
             {pt("y2+", "p", {geo("b1", 1, -1, 1), geo("b2", 2, -1, 2)}),
              pt("w-", "p", {geo("b1", 1, 1, 1), geo("b2", 2, 1, 2)}), pt("x0", "", {})}),
        comp("T", true,
             {pt("y1+", "p", {formal("b1", 1, -1, 0), geo("b2", 2, -1, 1)}),
              pt("y2-", "p", {formal("b1", 1, 1, 0), geo("b2", 2, 1, 1)})}),
        comp("f11", true,
             {pt("z1+", "p", {geo("b1", 1, -1, 1), geo("b2", 1, -1, 1)}),
              pt("z2-", "p", {geo("b1", 1, 1, 1), geo("b2", 1, 1, 1)})}),
        comp("f12", true,
             {pt("z2+", "p", {geo("b1", 1, -1, 2), geo("b2", 1, -1, 2)}),
              pt("x1", "p", {geo("b1", 1, 1, 2), geo("b2", 1, 1, 2)})}),
        comp("U", true,
             {pt("w+", "p", {geo("b1", 1, -1, 2), formal("b2", 2, -1, 2)}),
              pt("x2", "p", {geo("b1", 1, 1, 2), formal("b2", 2, 1, 2)})}),
    };
    mt.nodes = {{"y1", "y1-", "y1+"}, {"y2", "y2-", "y2+"}, {"z1", "z1-", "z1+"}, {"z2", "z2-", "z2+"}, {"w", "w-", "w+"}};
    finish(mt);
    coeffs(mt, "z1-", {prime(2), prime(3)});
    coeffs(mt, "y1-", {prime(5), prime(7)});
    coeffs(mt, "w-", {prime(11), prime(13)});
    propagate(mt, {{"y1", prime(17)}, {"y2", prime(19)}, {"z1", prime(23)}, {"z2", prime(29)}, {"w", prime(31)}});
    return mt;
}

// The same limit with globally independent normal directions: level (1,1).
inline MapType neck2()
{
    using namespace detail;
    MapType mt;
    mt.levels = {1, 1};
    mt.branch_dirs = {{"V1", 0}, {"V2", 1}};
    mt.pairings = {3, 5, 2, 2};
    const std::string p = "V1&V2";
    mt.components = {
        comp("f", false,
             {pt("x-", p, {geo("V1", 1, 1, 0), geo("V2", 2, 1, 0)}),
              pt("z1-", p, {geo("V1", 1, 1, 0), geo("V2", 1, 1, 0)})}),
        comp("N", false,
             {pt("x+", p, {geo("V1", 1, -1, 1), geo("V2", 2, -1, 1)}),
              pt("x2", p, {geo("V1", 1, 1, 1), geo("V2", 2, 1, 1)}), pt("x0", "", {})}),
        comp("T1", true,
             {pt("z1+", p, {geo("V1", 1, -1, 1), formal("V2", 1, -1, 0)}),
              pt("z2-", p, {geo("V1", 1, 1, 1), formal("V2", 1, 1, 0)})}),
        comp("T2", true,
             {pt("z2+", p, {formal("V1", 1, -1, 1), geo("V2", 1, -1, 1)}),
              pt("x1", p, {formal("V1", 1, 1, 1), geo("V2", 1, 1, 1)})}),
    };
    mt.nodes = {{"x", "x-", "x+"}, {"z1", "z1-", "z1+"}, {"z2", "z2-", "z2+"}};
    finish(mt);
    coeffs(mt, "x-", {prime(2), prime(3)});
    coeffs(mt, "z1-", {prime(5), prime(7)});
    coeffs(mt, "x2", {prime(11), prime(13)});
    propagate(mt, {{"x", prime(17)}, {"z1", prime(19)}, {"z2", prime(23)}});
    return mt;
}

// Conics degenerating into the corner of two lines: level 1 building with one
// nontrivial component over the corner and two components in zero sections.
inline MapType neck3()
{
    using namespace detail;
    MapType mt;
    mt.levels = {1};
    mt.pairings = {6, 2, 2, 2};
    const std::string p = "V1&V2";
    mt.components = {
        comp("N", false,
             {pt("pa", p, {geo("V1", 1, 1, 1), geo("V2", 1, -1, 1)}),
              pt("pb", p, {geo("V1", 1, -1, 1), geo("V2", 1, 1, 1)}), pt("x", "", {})},
             1),
        comp("Ta", true,
             {pt("qa", p, {formal("V1", 1, -1, 1), geo("V2", 1, 1, 0)}), pt("xa", "V1", {formal("V1", 1, 1, 1)})}),
        comp("Tb", true,
             {pt("qb", p, {geo("V1", 1, 1, 0), formal("V2", 1, -1, 1)}), pt("xb", "V2", {formal("V2", 1, 1, 1)})}),
    };
    mt.nodes = {{"a", "pa", "qa"}, {"b", "pb", "qb"}};
    finish(mt);
    coeffs(mt, "pa", {prime(2), prime(3)});
    coeffs(mt, "pb", {prime(5), prime(7)});
    propagate(mt, {{"a", prime(11)}, {"b", prime(13)}});
    return mt;
}

inline const std::vector<std::string>& names()
{
    static const std::vector<std::string> n = {"ex0-n2", "ex0-n3", "ex0-n4", "ex4dim",       "ex4dim-b",        "neck1a",
                                               "neck1b", "neck2",  "neck3",  "smooth-level1", "rescaled-disk-m"};
    return n;
}

inline std::optional<CombinatorialDivisor> divisor(const std::string& name)
{
    if (name == "ex0-n2") return local_model(2);
    if (name == "ex0-n3") return local_model(3);
    if (name == "ex0-n4") return local_model(4);
    if (name == "ex4dim") return simple_crossings(4, {"V1", "V2"}, {{{"V1", "V2"}, 1}});
    if (name == "ex4dim-b") return self_crossing_curve();
    if (name == "rescaled-disk-m") return local_model(1);
    return std::nullopt;
}

inline std::optional<MapType> maptype(const std::string& name)
{
    if (name == "neck1a") return neck1a();
    if (name == "neck1b") return neck1b();
    if (name == "neck2") return neck2();
    if (name == "neck3") return neck3();
    if (name == "smooth-level1") return smooth_level1();
    return std::nullopt;
}

inline nlohmann::json document(const std::string& name)
{
    if (auto d = divisor(name)) return to_json(*d);
    if (auto m = maptype(name)) return to_json(*m);
    throw StructuralError("unknown example '" + name + "'");
}

} // namespace ncd::fixtures
