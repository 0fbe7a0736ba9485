// Level-m buildings over a combinatorial divisor: pieces indexed by level
// functions, total-divisor strata with multi-sign labels, dual pairings,
// collapsing maps, the rescaled disk and torus weights.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "divisor.hpp"
#include "error.hpp"

namespace ncd {

// Global piece: a stratum T, a component of its normalization and a level in
// {1..bound} for each slot of T (up to monodromy). The depth-0 piece is X.
struct Piece {
    std::size_t id = 0;
    std::size_t stratum = 0;
    int normalization_component = 0;
    std::vector<int> levels;
};

// Open stratum of the total divisor: a local label over a stratum S together
// with a multi-sign map (+ zero/fibre side, - infinity side, 0 neither).
struct DivisorStratum {
    std::size_t id = 0;
    std::size_t stratum = 0;
    int normalization_component = 0;
    std::vector<int> levels;
    std::vector<int> signs;
    std::size_t piece = 0;
};

struct LevelBuilding {
    CombinatorialDivisor divisor;
    std::vector<int> bounds; // per divisor component (scaling direction)
    bool multi = false;
    std::vector<Piece> pieces;
    std::vector<DivisorStratum> strata;
    std::vector<std::pair<std::size_t, std::size_t>> attaching;

    int m() const { return bounds.empty() ? 0 : *std::max_element(bounds.begin(), bounds.end()); }
    int bound(std::size_t stratum, std::size_t slot) const
    {
        return bounds.at(divisor.strata.at(stratum).slots.at(slot));
    }
};

namespace detail {

// all elements of the group generated by the monodromy generators
inline std::vector<std::vector<std::size_t>> monodromy_group(const Stratum& s)
{
    std::vector<std::size_t> id(s.slots.size());
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<std::size_t>> seen{id};
    std::vector<std::vector<std::size_t>> queue{id};
    for (std::size_t q = 0; q < queue.size(); ++q)
        for (auto& g : s.monodromy) {
            std::vector<std::size_t> h(id.size());
            for (std::size_t i = 0; i < h.size(); ++i) h[i] = g[queue[q][i]];
            if (seen.insert(h).second) queue.push_back(h);
        }
    return queue;
}

// lexicographically least image of the tuples under the group
inline std::pair<std::vector<int>, std::vector<int>> canonical(const std::vector<std::vector<std::size_t>>& group,
                                                               const std::vector<int>& a, const std::vector<int>& b)
{
    std::pair<std::vector<int>, std::vector<int>> best{a, b};
    for (auto& g : group) {
        std::pair<std::vector<int>, std::vector<int>> c{a, b};
        for (std::size_t i = 0; i < g.size(); ++i) {
            c.first[i] = a[g[i]];
            if (!b.empty()) c.second[i] = b[g[i]];
        }
        best = std::min(best, c);
    }
    return best;
}

// all tuples t with lo_i <= t_i <= hi_i
inline std::vector<std::vector<int>> boxes(const std::vector<int>& lo, const std::vector<int>& hi)
{
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (hi[i] < lo[i]) return out;
    std::vector<int> t = lo;
    for (;;) {
        out.push_back(t);
        std::size_t i = 0;
        for (; i < t.size(); ++i) {
            if (++t[i] <= hi[i]) break;
            t[i] = lo[i];
        }
        if (i == t.size()) break;
    }
    return out;
}

} // namespace detail

// sign vectors allowed over a local label: + or 0 at level-0 slots, +, - or 0 above
inline std::vector<std::vector<int>> sign_labels(const std::vector<int>& levels, bool include_open = true)
{
    std::vector<int> lo(levels.size()), hi(levels.size(), 1);
    for (std::size_t i = 0; i < levels.size(); ++i) lo[i] = levels[i] >= 1 ? -1 : 0;
    std::vector<std::vector<int>> out;
    for (auto& s : detail::boxes(lo, hi)) {
        bool open = std::all_of(s.begin(), s.end(), [](int x) { return x == 0; });
        if (open && !include_open) continue;
        out.push_back(s);
    }
    return out;
}

// local labels over a stratum: all level functions slots -> {0..bound}
inline std::vector<std::vector<int>> local_labels(const LevelBuilding& b, std::size_t stratum)
{
    const Stratum& s = b.divisor.strata.at(stratum);
    std::vector<int> lo(s.slots.size(), 0), hi(s.slots.size());
    for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = b.bound(stratum, i);
    return detail::boxes(lo, hi);
}

// the global piece containing the local label (stratum S, levels l)
inline std::size_t resolve_piece(const LevelBuilding& b, std::size_t stratum, int comp, const std::vector<int>& levels)
{
    std::vector<std::size_t> J;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] >= 1) J.push_back(i);
    Face f = face(b.divisor, stratum, J);
    std::vector<int> lt;
    for (auto s : f.slot_from) lt.push_back(levels[s]);
    auto group = detail::monodromy_group(b.divisor.strata[f.stratum]);
    lt = detail::canonical(group, lt, {}).first;
    int c = (f.stratum == stratum) ? comp : 0;
    for (auto& p : b.pieces)
        if (p.stratum == f.stratum && p.normalization_component == c && p.levels == lt) return p.id;
    throw StructuralError("no piece for local label over '" + b.divisor.strata[stratum].id + "'");
}

// open divisor strata of one piece (all-0 interior label excluded)
inline std::vector<DivisorStratum> divisor_strata(const LevelBuilding& b, std::size_t piece)
{
    std::vector<DivisorStratum> out;
    for (auto& s : b.strata)
        if (s.piece == piece) out.push_back(s);
    return out;
}

namespace detail {

inline LevelBuilding assemble(const CombinatorialDivisor& d, std::vector<int> bounds, bool multi)
{
    auto bad = validate(d);
    if (!bad.empty()) throw StructuralError("invalid divisor: " + bad.front());
    LevelBuilding b;
    b.divisor = d;
    b.bounds = std::move(bounds);
    b.multi = multi;

    // pieces
    for (std::size_t t = 0; t < d.strata.size(); ++t) {
        const Stratum& T = d.strata[t];
        auto group = monodromy_group(T);
        std::vector<int> lo(T.slots.size(), 1), hi(T.slots.size());
        for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = b.bound(t, i);
        std::set<std::vector<int>> orbits;
        for (auto& l : boxes(lo, hi)) orbits.insert(canonical(group, l, {}).first);
        for (int c = 0; c < T.normalization_components; ++c)
            for (auto& l : orbits) b.pieces.push_back(Piece{b.pieces.size(), t, c, l});
    }

    // divisor strata
    std::map<std::tuple<std::size_t, int, std::vector<int>, std::vector<int>>, std::size_t> index;
    for (std::size_t s = 0; s < d.strata.size(); ++s) {
        const Stratum& S = d.strata[s];
        if (S.depth == 0) continue;
        auto group = monodromy_group(S);
        for (int c = 0; c < S.normalization_components; ++c)
            for (auto& l : local_labels(b, s))
                for (auto& e : sign_labels(l, false)) {
                    auto [cl, ce] = canonical(group, l, e);
                    auto key = std::make_tuple(s, c, cl, ce);
                    if (index.count(key)) continue;
                    index[key] = b.strata.size();
                    b.strata.push_back(DivisorStratum{b.strata.size(), s, c, cl, ce, resolve_piece(b, s, c, cl)});
                }
    }

    // dual pairs: - at l pairs with + at l-1; + below the bound pairs with - above
    for (auto& x : b.strata) {
        std::vector<int> l = x.levels, e = x.signs;
        bool flipped = false;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (e[i] == -1) {
                --l[i];
                e[i] = 1;
                flipped = true;
            } else if (e[i] == 1 && l[i] < b.bound(x.stratum, i)) {
                ++l[i];
                e[i] = -1;
                flipped = true;
            }
        }
        if (!flipped) continue;
        auto [cl, ce] = canonical(monodromy_group(d.strata[x.stratum]), l, e);
        auto it = index.find(std::make_tuple(x.stratum, x.normalization_component, cl, ce));
        if (it == index.end()) throw StructuralError("unpaired divisor stratum in building");
        if (x.id < it->second) b.attaching.emplace_back(x.id, it->second);
        if (x.id == it->second) throw StructuralError("self-dual divisor stratum in building");
    }
    return b;
}

} // namespace detail

inline LevelBuilding build(const CombinatorialDivisor& d, int m)
{
    if (m < 0) throw StructuralError("level count must be non-negative");
    return detail::assemble(d, std::vector<int>(d.components.size(), m), false);
}

// independent levels per divisor component
inline LevelBuilding build_multi(const CombinatorialDivisor& d, const std::vector<int>& levels)
{
    if (levels.size() != d.components.size()) {
        bool linked = false;
        for (auto& s : d.strata) {
            std::set<std::size_t> c(s.slots.begin(), s.slots.end());
            if (c.size() < s.slots.size()) linked = true;
        }
        if (linked && levels.size() > d.components.size())
            throw StructuralError("local branches at a self-crossing belong to one component: there is one global "
                                  "scaling parameter per component, so independent levels (" +
                                  std::to_string(levels.size()) + " given) are not allowed");
        throw StructuralError("one level per divisor component required (" + std::to_string(d.components.size()) +
                              " components, " + std::to_string(levels.size()) + " given)");
    }
    for (int l : levels)
        if (l < 0) throw StructuralError("levels must be non-negative");
    return detail::assemble(d, levels, true);
}

// per-direction multi-level of a piece: the largest level among slots of each component
inline std::vector<int> piece_multilevel(const LevelBuilding& b, const Piece& p)
{
    std::vector<int> out(b.divisor.components.size(), 0);
    const Stratum& T = b.divisor.strata[p.stratum];
    for (std::size_t i = 0; i < p.levels.size(); ++i) out[T.slots[i]] = std::max(out[T.slots[i]], p.levels[i]);
    return out;
}

inline int piece_level(const Piece& p)
{
    return p.levels.empty() ? 0 : *std::max_element(p.levels.begin(), p.levels.end());
}

// Piece classes as counted in the examples: one class per (depth, level tuple);
// bundles over a disconnected normalization count once.
inline std::map<std::pair<int, std::vector<int>>, std::size_t> piece_classes(const LevelBuilding& b)
{
    std::map<std::pair<int, std::vector<int>>, std::size_t> out;
    for (auto& p : b.pieces) ++out[{b.divisor.strata[p.stratum].depth, p.levels}];
    return out;
}

inline std::size_t count_piece_classes(const LevelBuilding& b, std::optional<int> depth = std::nullopt)
{
    std::size_t n = 0;
    for (auto& [k, v] : piece_classes(b))
        if (!depth || k.first == *depth) ++n;
    return n;
}

// per-stratum (slot-labelled) piece count of a given depth
inline std::size_t count_pieces(const LevelBuilding& b, int depth)
{
    std::size_t n = 0;
    for (auto& p : b.pieces)
        if (b.divisor.strata[p.stratum].depth == depth) ++n;
    return n;
}

inline std::vector<std::pair<std::size_t, std::size_t>> dual_pairs(const LevelBuilding& b) { return b.attaching; }

struct Collapse {
    LevelBuilding building;
    std::vector<std::size_t> piece_map; // old piece id -> new piece id
};

// collapse the levels in J: a collapsed level merges into the level below it
inline Collapse collapse(const LevelBuilding& b, const std::vector<int>& J)
{
    if (b.multi) throw StructuralError("collapse is defined for single-parameter buildings");
    int m = b.m();
    std::set<int> js(J.begin(), J.end());
    if (js.size() != J.size()) throw StructuralError("collapse: repeated level");
    for (int j : js)
        if (j < 1 || j > m) throw StructuralError("collapse: level " + std::to_string(j) + " outside 1.." + std::to_string(m));
    Collapse c{build(b.divisor, m - static_cast<int>(js.size())), {}};
    for (auto& p : b.pieces) {
        std::vector<int> l = p.levels;
        for (auto& x : l) x -= static_cast<int>(std::count_if(js.begin(), js.end(), [&](int j) { return j <= x; }));
        c.piece_map.push_back(resolve_piece(c.building, p.stratum, p.normalization_component, l));
    }
    return c;
}

// The m times rescaled disk: components at levels 0..m; divisor points are the
// origin of the disk (level 0, +) and 0 (+) / infinity (-) of each sphere.
struct RescaledDisk {
    int m = 0;
    std::vector<int> components;                          // level of each component
    std::vector<std::pair<int, int>> divisor_points;      // (level, sign)
    std::vector<std::pair<std::size_t, std::size_t>> attaching; // (level l, +) <-> (level l+1, -)

    std::size_t divisor_components() const { return divisor_points.size() - attaching.size(); }
};

inline RescaledDisk rescaled_disk(int m)
{
    if (m < 0) throw StructuralError("rescaled_disk needs m >= 0");
    RescaledDisk r;
    r.m = m;
    for (int l = 0; l <= m; ++l) {
        r.components.push_back(l);
        r.divisor_points.emplace_back(l, 1);
        if (l >= 1) r.divisor_points.emplace_back(l, -1);
    }
    auto find = [&](int l, int s) {
        auto it = std::find(r.divisor_points.begin(), r.divisor_points.end(), std::make_pair(l, s));
        return static_cast<std::size_t>(it - r.divisor_points.begin());
    };
    for (int l = 0; l < m; ++l) r.attaching.emplace_back(find(l, 1), find(l + 1, -1));
    return r;
}

// Exponents of the (C*)^m action on a_i(x-)a_i(x+) for a node joining components
// at levels l_minus <= l_plus: +1 at l_minus (if >= 1), -1 at l_plus; the zero
// vector when both levels agree.  Index k of the result is alpha_{k+1}.
inline std::vector<int> torus_weight(int l_minus, int l_plus, int m)
{
    if (l_minus < 0 || l_minus > l_plus || l_plus > m)
        throw StructuralError("torus_weight needs 0 <= l_minus <= l_plus <= m");
    std::vector<int> w(static_cast<std::size_t>(m), 0);
    if (l_minus == l_plus) return w;
    if (l_minus >= 1) w[l_minus - 1] += 1;
    w[l_plus - 1] -= 1;
    return w;
}

// ---------------------------------------------------------------- JSON dump

inline nlohmann::json to_json(const LevelBuilding& b)
{
    using nlohmann::json;
    json pieces = json::array(), strata = json::array(), pairs = json::array(), classes = json::array();
    for (auto& p : b.pieces)
        pieces.push_back({{"id", p.id},
                          {"stratum", b.divisor.strata[p.stratum].id},
                          {"normalization_component", p.normalization_component},
                          {"levels", p.levels},
                          {"multilevel", piece_multilevel(b, p)},
                          {"level", piece_level(p)}});
    for (auto& s : b.strata)
        strata.push_back({{"id", s.id},
                          {"stratum", b.divisor.strata[s.stratum].id},
                          {"normalization_component", s.normalization_component},
                          {"levels", s.levels},
                          {"signs", s.signs},
                          {"piece", s.piece}});
    for (auto& [x, y] : b.attaching) pairs.push_back({x, y});
    std::map<int, std::size_t> per_depth_classes, per_depth_pieces;
    for (auto& [k, v] : piece_classes(b)) ++per_depth_classes[k.first];
    for (auto& p : b.pieces) ++per_depth_pieces[b.divisor.strata[p.stratum].depth];
    for (auto& [k, n] : per_depth_classes)
        classes.push_back({{"depth", k}, {"classes", n}, {"pieces", per_depth_pieces[k]}});
    json out = {{"pieces", pieces}, {"divisor_strata", strata}, {"attaching", pairs}, {"summary", classes}};
    if (b.multi)
        out["levels"] = b.bounds;
    else
        out["m"] = b.m();
    return out;
}

} // namespace ncd
