// The level linear system s_i * sum alpha(z) = beta(l), its positive cone,
// torus dimension and rate relations; gluing equations for the parameters
// mu(z) and asymptotic equivalence classes.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "exactnum.hpp"
#include "json_util.hpp"
#include "maptype.hpp"

namespace ncd {

// One equation per (base point, direction, level): s * sum_{z in nodes} alpha(z) - beta(direction, level) = 0.
struct LevelEquation {
    std::string base_point;
    std::string branch;
    int direction = 0;
    int level = 0;
    long s = 0;
    std::vector<std::size_t> nodes; // indices into MapType::nodes
};

// Unknown order: alpha(z) for every node with a nonempty branch set, in node
// order; then beta(d, l) for d = 0.. and l = 1..levels[d].
struct LevelSystem {
    std::vector<std::string> unknowns;
    std::size_t alpha_count = 0;
    std::vector<std::pair<int, int>> betas; // (direction, level) of unknown alpha_count + k
    std::vector<LevelEquation> equations;
    RationalMatrix matrix;

    std::size_t beta_index(int d, int l) const
    {
        for (std::size_t k = 0; k < betas.size(); ++k)
            if (betas[k] == std::make_pair(d, l)) return alpha_count + k;
        throw StructuralError("no level " + std::to_string(l) + " in direction " + std::to_string(d));
    }
};

namespace detail {

inline std::string beta_name(const MapType& mt, int d, int l)
{
    return mt.levels.size() == 1 ? "beta(" + std::to_string(l) + ")"
                                 : "beta(" + std::to_string(d + 1) + "," + std::to_string(l) + ")";
}

} // namespace detail

inline LevelSystem build_system(const MapType& mt)
{
    LevelSystem sys;
    PointIndex ix(mt);
    std::map<std::size_t, std::size_t> alpha_of; // node index -> unknown
    for (std::size_t n = 0; n < mt.nodes.size(); ++n)
        if (!point(mt, ix.where.at(mt.nodes[n].minus)).contact.slots.empty()) {
            alpha_of[n] = sys.unknowns.size();
            sys.unknowns.push_back("alpha(" + mt.nodes[n].id + ")");
        }
    sys.alpha_count = sys.unknowns.size();
    for (std::size_t d = 0; d < mt.levels.size(); ++d)
        for (int l = 1; l <= mt.levels[d]; ++l) {
            sys.betas.emplace_back(static_cast<int>(d), l);
            sys.unknowns.push_back(detail::beta_name(mt, static_cast<int>(d), l));
        }
    Contraction c = contract(mt);
    if (!c.violations.empty()) throw StructuralError(c.violations.front());
    for (auto& bp : c.base)
        for (auto& g : chain_groups(mt, bp))
            for (auto& [level, nodes] : g.groups) {
                if (level < 1 || level > mt.levels.at(g.direction))
                    throw StructuralError("fibre over '" + bp.id + "': level " + std::to_string(level) + " out of range");
                sys.equations.push_back({bp.id, g.branch, g.direction, level, g.s, nodes});
            }
    sys.matrix = RationalMatrix(sys.equations.size(), sys.unknowns.size());
    for (std::size_t r = 0; r < sys.equations.size(); ++r) {
        auto& e = sys.equations[r];
        for (auto n : e.nodes) sys.matrix(r, alpha_of.at(n)) += Rational(e.s);
        sys.matrix(r, sys.beta_index(e.direction, e.level)) -= 1;
    }
    return sys;
}

inline std::string to_string(const LevelSystem& sys, std::size_t row)
{
    std::string out;
    for (std::size_t j = 0; j < sys.unknowns.size(); ++j) {
        Rational c = sys.matrix(row, j);
        if (c == 0) continue;
        std::string mag = (c == 1 || c == -1) ? "" : to_string(Rational(abs(c))) + "*";
        if (out.empty())
            out += (c < 0 ? "-" : "") + mag + sys.unknowns[j];
        else
            out += (c < 0 ? " - " : " + ") + mag + sys.unknowns[j];
    }
    return (out.empty() ? "0" : out) + " = 0";
}

inline std::optional<std::vector<Rational>> feasible_positive(const LevelSystem& sys)
{
    return strict_positive_solution(sys.matrix);
}

namespace detail {

inline RationalMatrix beta_projection(const LevelSystem& sys)
{
    auto ns = rational_nullspace(sys.matrix);
    RationalMatrix p(ns.size(), sys.betas.size());
    for (std::size_t r = 0; r < ns.size(); ++r)
        for (std::size_t k = 0; k < sys.betas.size(); ++k) p(r, k) = ns[r][sys.alpha_count + k];
    return p;
}

} // namespace detail

inline std::size_t torus_dim(const LevelSystem& sys) { return rank(detail::beta_projection(sys)); }

// Basis of the linear relations c . beta = 0 holding on every solution,
// as primitive integer vectors indexed like LevelSystem::betas.
inline std::vector<std::vector<Rational>> beta_relations(const LevelSystem& sys)
{
    auto out = rational_nullspace(detail::beta_projection(sys));
    for (auto& v : out) v = primitive(v);
    return out;
}

inline std::string relation_string(const LevelSystem& sys, const std::vector<Rational>& rel)
{
    std::string out;
    for (std::size_t k = 0; k < rel.size(); ++k) {
        Rational c = rel[k];
        if (c == 0) continue;
        std::string name = sys.unknowns[sys.alpha_count + k];
        std::string mag = (c == 1 || c == -1) ? "" : to_string(Rational(abs(c))) + "*";
        if (out.empty())
            out += (c < 0 ? "-" : "") + mag + name;
        else
            out += (c < 0 ? " - " : " + ") + mag + name;
    }
    return out + " = 0";
}

// ---------------------------------------------------------------- gluing

// prod_{z in nodes} mu(z)^s * p = prod_{l in levels} lambda(direction, l)
struct GluingEquation {
    std::string label;
    long s = 1;
    ExactComplex p;
    std::vector<std::size_t> nodes; // unknown indices
    int direction = 0;
    std::vector<int> levels;
};

struct GluingProblem {
    std::vector<std::vector<ExactComplex>> lambda; // lambda[direction][l-1]
    std::vector<std::string> unknowns;             // mu(z)
    std::vector<GluingEquation> equations;
};

struct GluingSolution {
    bool consistent = false;
    std::optional<std::string> violated; // label of the first equation breaking consistency
    Integer count = 0;                    // number of solutions when finite
    std::size_t free_dim = 0;
    std::vector<std::vector<ExactComplex>> solutions;
    bool truncated = false;
};

// the gluing equations of a decorated map type, with the given lambdas
inline GluingProblem gluing_problem(const MapType& mt, std::vector<std::vector<ExactComplex>> lambda)
{
    if (lambda.size() != mt.levels.size()) throw StructuralError("one lambda list per scaling direction required");
    for (std::size_t d = 0; d < lambda.size(); ++d)
        if (static_cast<int>(lambda[d].size()) != mt.levels[d])
            throw StructuralError("one lambda per level required in direction " + std::to_string(d + 1));
    LevelSystem sys = build_system(mt);
    PointIndex ix(mt);
    GluingProblem gp;
    gp.lambda = std::move(lambda);
    std::map<std::size_t, std::size_t> unknown_of;
    for (std::size_t n = 0; n < mt.nodes.size(); ++n)
        if (!point(mt, ix.where.at(mt.nodes[n].minus)).contact.slots.empty()) {
            unknown_of[n] = gp.unknowns.size();
            gp.unknowns.push_back(mt.nodes[n].id);
        }
    for (auto& e : sys.equations) {
        GluingEquation g;
        g.label = e.base_point + "/" + e.branch + "/" + std::to_string(e.level);
        g.s = e.s;
        g.direction = e.direction;
        g.levels = {e.level};
        for (auto n : e.nodes) {
            const Node& nd = mt.nodes[n];
            const SlotContact* a = point(mt, ix.where.at(nd.minus)).contact.find(e.branch);
            const SlotContact* b = point(mt, ix.where.at(nd.plus)).contact.find(e.branch);
            if (!a || !b || !a->a || !b->a) throw StructuralError("node '" + nd.id + "' is undecorated in branch '" + e.branch + "'");
            g.p *= *a->a * *b->a;
            g.nodes.push_back(unknown_of.at(n));
        }
        gp.equations.push_back(std::move(g));
    }
    return gp;
}

// Coefficient matrix of the formal logarithm of the gluing equations: unknowns
// log mu(z), then log lambda(d, l).
inline RationalMatrix log_linear_matrix(const GluingProblem& gp)
{
    std::vector<std::size_t> offset;
    std::size_t cols = gp.unknowns.size();
    for (auto& l : gp.lambda) {
        offset.push_back(cols);
        cols += l.size();
    }
    RationalMatrix m(gp.equations.size(), cols);
    for (std::size_t r = 0; r < gp.equations.size(); ++r) {
        auto& e = gp.equations[r];
        for (auto n : e.nodes) m(r, n) += Rational(e.s);
        for (int l : e.levels) m(r, offset.at(e.direction) + static_cast<std::size_t>(l - 1)) -= 1;
    }
    return m;
}

inline GluingSolution solve_gluing(const GluingProblem& gp, std::size_t cap = 4096)
{
    IntegerMatrix m(gp.equations.size(), gp.unknowns.size());
    std::vector<ExactComplex> rhs;
    for (std::size_t r = 0; r < gp.equations.size(); ++r) {
        auto& e = gp.equations[r];
        if (e.s < 1) throw StructuralError("equation '" + e.label + "': multiplicity must be positive");
        ExactComplex v = e.p.inverse();
        for (int l : e.levels) {
            if (e.direction < 0 || e.direction >= static_cast<int>(gp.lambda.size()) || l < 1 ||
                l > static_cast<int>(gp.lambda[e.direction].size()))
                throw StructuralError("equation '" + e.label + "': level out of range");
            v *= gp.lambda[e.direction][l - 1];
        }
        for (auto n : e.nodes) {
            if (n >= gp.unknowns.size()) throw StructuralError("equation '" + e.label + "': unknown out of range");
            m(r, n) += e.s;
        }
        rhs.push_back(v);
    }
    PowerSolution ps = solve_power_system(m, rhs, cap);
    GluingSolution out;
    out.consistent = ps.consistent;
    if (!ps.consistent) {
        out.violated = gp.equations.at(ps.violated.value_or(0)).label;
        return out;
    }
    out.count = ps.branch_count;
    out.free_dim = ps.free_dim;
    out.solutions = std::move(ps.representatives);
    out.truncated = ps.truncated;
    return out;
}

inline nlohmann::json to_json(const GluingProblem& gp)
{
    using nlohmann::json;
    json lam = json::array();
    for (auto& row : gp.lambda) {
        json r = json::array();
        for (auto& z : row) r.push_back(json_util::complex_json(z));
        lam.push_back(r);
    }
    json eqs = json::array();
    for (auto& e : gp.equations) {
        json nodes = json::array();
        for (auto n : e.nodes) nodes.push_back(gp.unknowns.at(n));
        eqs.push_back({{"label", e.label},
                       {"s", e.s},
                       {"p", json_util::complex_json(e.p)},
                       {"nodes", nodes},
                       {"direction", e.direction},
                       {"levels", e.levels}});
    }
    return json{{"lambda", lam}, {"unknowns", gp.unknowns}, {"equations", eqs}};
}

inline GluingProblem gluing_from_json(const nlohmann::json& j)
{
    using namespace json_util;
    const std::string top = "gluing problem";
    GluingProblem gp;
    const json& lam = field(j, "lambda", top);
    if (!lam.is_array()) throw FormatError(top + ": 'lambda' must be an array");
    bool flat = !lam.empty() && lam.front().is_object(); // single direction as a flat list
    auto row = [&](const json& r) {
        if (!r.is_array()) throw FormatError(top + ": 'lambda' rows must be arrays");
        std::vector<ExactComplex> out;
        for (auto& z : r) out.push_back(complex(z, top + " lambda"));
        return out;
    };
    if (flat)
        gp.lambda.push_back(row(lam));
    else
        for (auto& r : lam) gp.lambda.push_back(row(r));
    gp.unknowns = get<std::vector<std::string>>(j, "unknowns", top);
    const json& eqs = field(j, "equations", top);
    if (!eqs.is_array()) throw FormatError(top + ": 'equations' must be an array");
    for (auto& e : eqs) {
        GluingEquation g;
        g.label = get_or<std::string>(e, "label", "eq" + std::to_string(gp.equations.size()), top);
        std::string where = "equation '" + g.label + "'";
        g.s = get<long>(e, "s", where);
        g.p = complex(field(e, "p", where), where);
        for (auto& name : get<std::vector<std::string>>(e, "nodes", where)) {
            auto it = std::find(gp.unknowns.begin(), gp.unknowns.end(), name);
            if (it == gp.unknowns.end()) throw FormatError(where + ": unknown node '" + name + "'");
            g.nodes.push_back(static_cast<std::size_t>(it - gp.unknowns.begin()));
        }
        g.direction = get_or<int>(e, "direction", 0, where);
        g.levels = get_or<std::vector<int>>(e, "levels", {}, where);
        gp.equations.push_back(std::move(g));
    }
    return gp;
}

// ---------------------------------------------------------------- asymptotics

struct AsymptoticClass {
    std::vector<std::string> members;         // unknown names
    std::map<std::string, Rational> exponents; // from a positive witness
};

inline std::vector<AsymptoticClass> asymptotic_classes(const MapType& mt)
{
    LevelSystem sys = build_system(mt);
    auto witness = feasible_positive(sys);
    if (!witness) throw StructuralError("the level system has no positive solution");
    std::vector<std::size_t> parent(sys.unknowns.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    // every equation ties its nodes to its level; nodes over one base point and
    // levels spanned by one base point are merged through the shared equations
    std::map<std::string, std::vector<std::size_t>> by_base;
    for (std::size_t r = 0; r < sys.equations.size(); ++r) {
        for (std::size_t j = 0; j < sys.unknowns.size(); ++j)
            if (sys.matrix(r, j) != 0) by_base[sys.equations[r].base_point].push_back(j);
    }
    for (auto& [x, members] : by_base)
        for (std::size_t k = 1; k < members.size(); ++k) unite(members[0], members[k]);
    std::map<std::size_t, AsymptoticClass> classes;
    for (std::size_t j = 0; j < sys.unknowns.size(); ++j) {
        auto& c = classes[find(j)];
        c.members.push_back(sys.unknowns[j]);
        c.exponents[sys.unknowns[j]] = (*witness)[j];
    }
    std::vector<AsymptoticClass> out;
    for (auto& [root, c] : classes) out.push_back(std::move(c));
    return out;
}

} // namespace ncd
