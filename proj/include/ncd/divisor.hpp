// Combinatorial normal-crossings divisors: components of the normalization,
// depth-k strata with branch slots, adjacency and monodromy.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "json_util.hpp"

namespace ncd {

// A stratum of V^k \ V^{k+1}. Slot j names the normalization component of the
// j-th local branch; monodromy generators permute slots.
struct Stratum {
    std::string id;
    int depth = 0;
    std::vector<std::size_t> slots;
    int normalization_components = 1;
    std::vector<std::vector<std::size_t>> monodromy;
    std::vector<std::string> boundary; // strata of depth + 1 adjacent below

    friend bool operator==(const Stratum&, const Stratum&) = default;
};

struct CombinatorialDivisor {
    int dimX = 2;
    std::vector<std::string> components; // component id = index
    std::vector<Stratum> strata;

    std::optional<std::size_t> index_of(const std::string& id) const
    {
        for (std::size_t i = 0; i < strata.size(); ++i)
            if (strata[i].id == id) return i;
        return std::nullopt;
    }
    const Stratum& at(const std::string& id) const
    {
        auto i = index_of(id);
        if (!i) throw StructuralError("unknown stratum '" + id + "'");
        return strata[*i];
    }
    std::vector<std::size_t> of_depth(int k) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < strata.size(); ++i)
            if (strata[i].depth == k) out.push_back(i);
        return out;
    }
    int max_depth() const
    {
        int m = 0;
        for (auto& s : strata) m = std::max(m, s.depth);
        return m;
    }

    friend bool operator==(const CombinatorialDivisor&, const CombinatorialDivisor&) = default;
};

// slot orbits of the group generated by a stratum's monodromy
inline std::vector<std::size_t> slot_orbits(const Stratum& s)
{
    std::vector<std::size_t> parent(s.slots.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& g : s.monodromy)
        for (std::size_t i = 0; i < g.size() && i < parent.size(); ++i)
            if (g[i] < parent.size()) parent[find(i)] = find(g[i]);
    std::vector<std::size_t> rep(s.slots.size());
    for (std::size_t i = 0; i < rep.size(); ++i) rep[i] = find(i);
    return rep;
}

inline std::size_t slot_orbit_count(const Stratum& s)
{
    auto rep = slot_orbits(s);
    return std::set<std::size_t>(rep.begin(), rep.end()).size();
}

inline std::vector<std::string> validate(const CombinatorialDivisor& d)
{
    std::vector<std::string> v;
    if (d.dimX < 2 || d.dimX % 2 != 0) v.push_back("dimX must be even and positive");
    if (std::set<std::string>(d.components.begin(), d.components.end()).size() != d.components.size())
        v.push_back("component names must be unique");
    std::set<std::string> ids;
    int depth0 = 0;
    for (auto& s : d.strata) {
        std::string at = "stratum '" + s.id + "': ";
        if (!ids.insert(s.id).second) v.push_back(at + "duplicate id");
        if (s.depth < 0) v.push_back(at + "negative depth");
        if (s.depth == 0) ++depth0;
        if (static_cast<int>(s.slots.size()) != s.depth) v.push_back(at + "slot count differs from depth");
        if (2 * s.depth > d.dimX) v.push_back(at + "violates 2k <= dimX");
        for (auto c : s.slots)
            if (c >= d.components.size()) v.push_back(at + "slot references unknown component");
        if (s.normalization_components < 1) v.push_back(at + "normalization_components must be positive");
        for (auto& g : s.monodromy) {
            std::vector<std::size_t> sorted = g;
            std::sort(sorted.begin(), sorted.end());
            std::vector<std::size_t> iden(s.slots.size());
            std::iota(iden.begin(), iden.end(), 0);
            if (sorted != iden) {
                v.push_back(at + "monodromy generator is not a permutation of the slots");
                continue;
            }
            for (std::size_t i = 0; i < g.size(); ++i)
                if (s.slots[i] != s.slots[g[i]]) {
                    v.push_back(at + "monodromy permutes slots of different components");
                    break;
                }
        }
        for (auto& b : s.boundary) {
            auto j = d.index_of(b);
            if (!j) {
                v.push_back(at + "boundary references unknown stratum '" + b + "'");
                continue;
            }
            const Stratum& t = d.strata[*j];
            if (t.depth != s.depth + 1) v.push_back(at + "boundary stratum '" + b + "' is not one level deeper");
            // parent branches are a sub-multiset of the child's
            std::multiset<std::size_t> child(t.slots.begin(), t.slots.end());
            for (auto c : s.slots) {
                auto it = child.find(c);
                if (it == child.end()) {
                    v.push_back(at + "branches are not among those of boundary stratum '" + b + "'");
                    break;
                }
                child.erase(it);
            }
        }
    }
    if (depth0 != 1) v.push_back("exactly one depth-0 stratum (X) is required");
    for (auto& t : d.strata) {
        if (t.depth == 0) continue;
        bool covered = false;
        for (auto& s : d.strata)
            if (s.depth + 1 == t.depth && std::find(s.boundary.begin(), s.boundary.end(), t.id) != s.boundary.end())
                covered = true;
        if (!covered) v.push_back("stratum '" + t.id + "' is in no boundary of a stratum one level up");
    }
    return v;
}

namespace detail {

inline std::string subset_id(const std::vector<int>& s)
{
    if (s.empty()) return "X";
    std::string id = "V";
    for (std::size_t i = 0; i < s.size(); ++i) id += (i ? "," : "") + std::to_string(s[i]);
    return id;
}

} // namespace detail

// n coordinate hyperplanes in C^n
inline CombinatorialDivisor local_model(int n)
{
    if (n < 1) throw StructuralError("local_model needs n >= 1");
    if (n > 20) throw StructuralError("local_model: n too large");
    CombinatorialDivisor d;
    d.dimX = 2 * n;
    for (int i = 1; i <= n; ++i) d.components.push_back("V" + std::to_string(i));
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(i + 1);
        subsets.push_back(s);
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](auto& a, auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (auto& s : subsets) {
        Stratum st;
        st.id = detail::subset_id(s);
        st.depth = static_cast<int>(s.size());
        for (int c : s) st.slots.push_back(static_cast<std::size_t>(c - 1));
        for (int extra = 1; extra <= n; ++extra) {
            if (std::find(s.begin(), s.end(), extra) != s.end()) continue;
            std::vector<int> t = s;
            t.insert(std::upper_bound(t.begin(), t.end(), extra), extra);
            st.boundary.push_back(detail::subset_id(t));
        }
        d.strata.push_back(std::move(st));
    }
    return d;
}

struct StratumCounts {
    long resolution_of_Vk = 0; // components of the normalization of V^k
    long double_resolution = 0; // components of the total space of the degree-k cover
    long resolution_of_Wk1 = 0; // components of the normalization of W^{k+1}

    friend bool operator==(const StratumCounts&, const StratumCounts&) = default;
};

inline StratumCounts stratum_counts(const CombinatorialDivisor& d, int k)
{
    auto here = d.of_depth(k);
    if (here.empty()) throw StructuralError("no strata of depth " + std::to_string(k));
    auto cover = [&](const std::vector<std::size_t>& idx) {
        long c = 0;
        for (auto i : idx) c += static_cast<long>(slot_orbit_count(d.strata[i])) * d.strata[i].normalization_components;
        return c;
    };
    StratumCounts c;
    for (auto i : here) c.resolution_of_Vk += d.strata[i].normalization_components;
    c.double_resolution = cover(here);
    c.resolution_of_Wk1 = cover(d.of_depth(k + 1));
    return c;
}

// A subset of components meeting, with the number of connected components of
// the intersection.
struct Intersection {
    std::vector<std::string> members;
    int count = 1;
};

inline CombinatorialDivisor simple_crossings(int dimX, const std::vector<std::string>& names,
                                             const std::vector<Intersection>& meets)
{
    CombinatorialDivisor d;
    d.dimX = dimX;
    d.components = names;
    std::map<std::vector<std::size_t>, int> present; // sorted component set -> count
    present[{}] = 1;
    for (std::size_t i = 0; i < names.size(); ++i) present[{i}] = 1;
    for (auto& m : meets) {
        std::vector<std::size_t> s;
        for (auto& n : m.members) {
            auto it = std::find(names.begin(), names.end(), n);
            if (it == names.end()) throw StructuralError("unknown component '" + n + "'");
            s.push_back(static_cast<std::size_t>(it - names.begin()));
        }
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw StructuralError("repeated component in intersection");
        if (s.size() < 2) throw StructuralError("intersections need at least two components");
        if (m.count < 1) throw StructuralError("intersection count must be positive");
        present[s] = m.count;
    }
    auto id_of = [&](const std::vector<std::size_t>& s) {
        if (s.empty()) return std::string("X");
        std::string id;
        for (std::size_t i = 0; i < s.size(); ++i) id += (i ? "&" : "") + names[s[i]];
        return id;
    };
    for (auto& [s, cnt] : present) {
        for (std::size_t drop = 0; drop < s.size() && s.size() > 1; ++drop) {
            auto sub = s;
            sub.erase(sub.begin() + static_cast<long>(drop));
            if (!present.count(sub))
                throw StructuralError("intersection " + id_of(s) + " present but " + id_of(sub) + " is not");
        }
    }
    std::vector<std::vector<std::size_t>> order;
    for (auto& kv : present) order.push_back(kv.first);
    std::stable_sort(order.begin(), order.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
    for (auto& s : order) {
        Stratum st;
        st.id = id_of(s);
        st.depth = static_cast<int>(s.size());
        st.slots = s;
        st.normalization_components = present[s];
        for (auto& t : order) {
            if (t.size() != s.size() + 1) continue;
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) st.boundary.push_back(id_of(t));
        }
        d.strata.push_back(std::move(st));
    }
    auto bad = validate(d);
    if (!bad.empty()) throw StructuralError(bad.front());
    return d;
}

// one component crossing itself in a point of a 4-manifold
inline CombinatorialDivisor self_crossing_curve()
{
    CombinatorialDivisor d;
    d.dimX = 4;
    d.components = {"V"};
    d.strata.push_back(Stratum{"X", 0, {}, 1, {}, {"V"}});
    d.strata.push_back(Stratum{"V", 1, {0}, 1, {}, {"p"}});
    d.strata.push_back(Stratum{"p", 2, {0, 0}, 1, {}, {}});
    return d;
}

// same local shape: equal depth, same number of slots, same pattern of which
// slots share a component
inline bool locally_isomorphic(const CombinatorialDivisor& a, const std::string& sa, const CombinatorialDivisor& b,
                               const std::string& sb)
{
    const Stratum& x = a.at(sa);
    const Stratum& y = b.at(sb);
    return x.depth == y.depth && x.slots.size() == y.slots.size();
}

// Strata whose closure contains the given one (reflexive).
inline std::set<std::size_t> ancestors(const CombinatorialDivisor& d, std::size_t s)
{
    std::set<std::size_t> out{s};
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < d.strata.size(); ++i) {
            if (out.count(i)) continue;
            for (auto& b : d.strata[i].boundary) {
                auto j = d.index_of(b);
                if (j && out.count(*j)) {
                    out.insert(i);
                    grew = true;
                    break;
                }
            }
        }
    }
    return out;
}

// The ancestor stratum T of S carrying exactly the branches J (slot indices of
// S), plus for each slot of T the slot of S it corresponds to.
struct Face {
    std::size_t stratum;
    std::vector<std::size_t> slot_from; // T slot -> S slot
};

inline Face face(const CombinatorialDivisor& d, std::size_t s, const std::vector<std::size_t>& J)
{
    const Stratum& S = d.strata[s];
    std::multiset<std::size_t> want;
    for (auto j : J) want.insert(S.slots.at(j));
    for (auto t : ancestors(d, s)) {
        const Stratum& T = d.strata[t];
        if (T.depth != static_cast<int>(J.size())) continue;
        if (std::multiset<std::size_t>(T.slots.begin(), T.slots.end()) != want) continue;
        Face f{t, {}};
        std::vector<bool> used(J.size(), false);
        for (auto c : T.slots)
            for (std::size_t k = 0; k < J.size(); ++k)
                if (!used[k] && S.slots[J[k]] == c) {
                    used[k] = true;
                    f.slot_from.push_back(J[k]);
                    break;
                }
        return f;
    }
    throw StructuralError("stratum '" + S.id + "' has no face with the requested branches");
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const CombinatorialDivisor& d)
{
    nlohmann::json strata = nlohmann::json::array();
    for (auto& s : d.strata)
        strata.push_back({{"id", s.id},
                          {"depth", s.depth},
                          {"slots", s.slots},
                          {"normalization_components", s.normalization_components},
                          {"monodromy", s.monodromy},
                          {"boundary", s.boundary}});
    return {{"dimX", d.dimX}, {"components", d.components}, {"strata", strata}};
}

inline CombinatorialDivisor divisor_from_json(const nlohmann::json& j)
{
    using namespace json_util;
    CombinatorialDivisor d;
    d.dimX = get<int>(j, "dimX", "divisor");
    d.components = get<std::vector<std::string>>(j, "components", "divisor");
    const auto& st = field(j, "strata", "divisor");
    if (!st.is_array()) throw FormatError("divisor: 'strata' must be an array");
    for (auto& s : st) {
        Stratum x;
        x.id = get<std::string>(s, "id", "stratum");
        std::string where = "stratum '" + x.id + "'";
        x.depth = get<int>(s, "depth", where);
        x.slots = get<std::vector<std::size_t>>(s, "slots", where);
        x.normalization_components = get_or<int>(s, "normalization_components", 1, where);
        x.monodromy = get_or<std::vector<std::vector<std::size_t>>>(s, "monodromy", {}, where);
        x.boundary = get_or<std::vector<std::string>>(s, "boundary", {}, where);
        d.strata.push_back(std::move(x));
    }
    return d;
}

} // namespace ncd
