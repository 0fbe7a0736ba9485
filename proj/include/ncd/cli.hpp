// Command-line front end. run() is stream based so that it can be driven from
// tests; tools/ncd_moduli.cpp only forwards argv.
#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "building.hpp"
#include "dimension.hpp"
#include "divisor.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "levelsys.hpp"
#include "maptype.hpp"

namespace ncd::cli {

inline constexpr const char* version = "ncd-moduli/1";

enum Exit { ok = 0, invalid = 1, malformed = 2 };

namespace detail {

using nlohmann::json;

inline json read_document(const std::string& path, std::istream& in)
{
    std::string text;
    if (path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(path);
        if (!f) throw FormatError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": not valid JSON (" + e.what() + ")");
    }
    // accept the --json envelope of another subcommand
    if (j.is_object() && j.contains("version") && j.contains("result")) return j.at("result");
    return j;
}

inline std::string list_string(const std::vector<std::string>& v)
{
    std::string out;
    for (auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

struct Context {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool as_json = false;

    void emit(const std::string& command, const json& result, const std::string& human)
    {
        if (as_json)
            out << json{{"version", version}, {"command", command}, {"result", result}}.dump(2) << "\n";
        else
            out << human;
    }
};

inline int cmd_validate(Context& c, const std::string& path)
{
    MapType mt = maptype_from_json(read_document(path, c.in));
    auto structure = validate_structure(mt);
    auto naive = check_naive(mt);
    auto cylinders = check_broken_cylinders(mt);
    bool stable = check_relative_stability(mt);
    json enhanced = nullptr;
    bool enhanced_ok = true;
    std::string enhanced_line = "not checked (undecorated)";
    if (structure.empty() && naive.empty() && is_decorated(mt)) {
        auto r = check_enhanced(mt);
        enhanced_ok = r.satisfiable;
        json w = json::object();
        for (auto& [id, z] : r.witness) w[id] = json_util::complex_json(z);
        enhanced = {{"satisfiable", r.satisfiable}, {"witness", w}};
        if (r.failure) enhanced["failure"] = *r.failure;
        enhanced_line = r.satisfiable ? "ok" : "unsatisfiable at " + r.failure.value_or("?");
    }
    bool valid = structure.empty() && naive.empty() && cylinders.empty() && enhanced_ok && stable;
    std::ostringstream h;
    auto block = [&](const char* name, const std::vector<std::string>& v) {
        h << name << ": " << (v.empty() ? "ok" : std::to_string(v.size()) + " violation(s)") << "\n";
        for (auto& s : v) h << "  - " << s << "\n";
    };
    block("structure", structure);
    block("naive matching", naive);
    block("broken cylinders", cylinders);
    h << "enhanced matching: " << enhanced_line << "\n";
    h << "relative stability: " << (stable ? "ok" : "fails") << "\n";
    h << (valid ? "VALID" : "INVALID") << "\n";
    c.emit("validate",
           {{"valid", valid},
            {"structure", structure},
            {"naive", naive},
            {"cylinders", cylinders},
            {"enhanced", enhanced},
            {"stable", stable}},
           h.str());
    if (!valid)
        for (auto& s : structure) c.err << "validate: " << s << "\n";
    return valid ? ok : invalid;
}

inline int cmd_strata(Context& c, const std::string& path, std::optional<int> k)
{
    CombinatorialDivisor d = divisor_from_json(read_document(path, c.in));
    auto problems = validate(d);
    if (!problems.empty()) {
        for (auto& p : problems) c.err << "strata: " << p << "\n";
        return invalid;
    }
    std::vector<int> ks;
    if (k)
        ks = {*k};
    else
        for (int i = 1; i <= d.max_depth(); ++i) ks.push_back(i);
    json rows = json::array();
    std::ostringstream h;
    for (int i : ks) {
        auto s = stratum_counts(d, i);
        rows.push_back({{"k", i},
                        {"resolution_of_Vk", s.resolution_of_Vk},
                        {"double_resolution", s.double_resolution},
                        {"resolution_of_Wk1", s.resolution_of_Wk1}});
        h << "k=" << i << ": resolution of V^k " << s.resolution_of_Vk << ", double resolution " << s.double_resolution
          << ", resolution of W^{k+1} " << s.resolution_of_Wk1 << "\n";
    }
    c.emit("strata", rows, h.str());
    return ok;
}

inline std::vector<int> parse_levels(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw FormatError("--multi: '" + item + "' is not a non-negative integer");
        }
    }
    if (out.empty()) throw FormatError("--multi: empty level list");
    return out;
}

inline int cmd_building(Context& c, const std::string& path, std::optional<int> m, const std::string& multi)
{
    CombinatorialDivisor d = divisor_from_json(read_document(path, c.in));
    if (!m && multi.empty()) throw FormatError("building: --m or --multi is required");
    LevelBuilding b = multi.empty() ? build(d, *m) : build_multi(d, parse_levels(multi));
    json j = to_json(b);
    std::ostringstream h;
    h << "pieces: " << b.pieces.size() << ", divisor strata: " << b.strata.size()
      << ", attaching pairs: " << b.attaching.size() << "\n";
    for (auto& row : j.at("summary"))
        h << "depth " << row.at("depth").get<int>() << ": " << row.at("classes").get<long>() << " piece classes, "
          << row.at("pieces").get<long>() << " pieces\n";
    c.emit("building", j, h.str());
    return ok;
}

struct DimArgs {
    std::optional<long> c1A, chi, ell, AV;
    std::optional<int> dimX;
};

inline int cmd_dim(Context& c, const std::string& path, const DimArgs& a)
{
    json result;
    std::ostringstream h;
    if (!path.empty()) {
        MapType mt = maptype_from_json(read_document(path, c.in));
        auto depths = node_depths(mt);
        long e = expected_dim(dimension_input(mt));
        long gap = naive_gap(depths);
        long codim = stratum_codim(mt);
        result = {{"expected_dim", e}, {"naive_gap", gap}, {"enhanced_balance", enhanced_balance(depths)},
                  {"stratum_codim", codim}};
        h << "expected dimension: " << e << "\nnaive gap: " << gap << "\nstratum codimension: " << codim << "\n";
    } else {
        if (!a.c1A || !a.dimX || !a.chi || !a.ell || !a.AV)
            throw FormatError("dim: give a map-type file or all of --c1A --dimX --chi --ell --AV");
        long e = expected_dim({*a.c1A, *a.dimX, *a.chi, *a.ell, *a.AV});
        result = {{"expected_dim", e}};
        h << "expected dimension: " << e << "\n";
    }
    c.emit("dim", result, h.str());
    return ok;
}

inline int cmd_levels(Context& c, const std::string& path)
{
    MapType mt = maptype_from_json(read_document(path, c.in));
    LevelSystem sys = build_system(mt);
    auto witness = feasible_positive(sys);
    auto rels = beta_relations(sys);
    std::size_t td = torus_dim(sys);
    json eqs = json::array(), matrix = json::array(), rj = json::array();
    std::ostringstream h;
    h << "unknowns: " << list_string(sys.unknowns) << "\nequations:\n";
    for (std::size_t r = 0; r < sys.matrix.rows(); ++r) {
        json row = json::array();
        for (std::size_t j = 0; j < sys.matrix.cols(); ++j) row.push_back(json_util::rational_json(sys.matrix(r, j)));
        matrix.push_back(row);
        eqs.push_back(to_string(sys, r));
        h << "  " << to_string(sys, r) << "\n";
    }
    json w = nullptr;
    if (witness) {
        w = json::object();
        h << "positive witness:";
        for (std::size_t j = 0; j < witness->size(); ++j) {
            w[sys.unknowns[j]] = json_util::rational_json((*witness)[j]);
            h << " " << sys.unknowns[j] << "=" << (*witness)[j].str();
        }
        h << "\n";
    } else {
        h << "positive witness: none\n";
    }
    h << "torus dimension: " << td << "\nbeta relations:";
    if (rels.empty()) h << " none";
    h << "\n";
    for (auto& r : rels) {
        json coeffs = json::array();
        for (auto& x : r) coeffs.push_back(json_util::rational_json(x));
        rj.push_back({{"coefficients", coeffs}, {"text", relation_string(sys, r)}});
        h << "  " << relation_string(sys, r) << "\n";
    }
    json betas = json::array();
    for (std::size_t k = 0; k < sys.betas.size(); ++k) betas.push_back(sys.unknowns[sys.alpha_count + k]);
    c.emit("levels",
           {{"unknowns", sys.unknowns},
            {"betas", betas},
            {"equations", eqs},
            {"matrix", matrix},
            {"feasible", witness.has_value()},
            {"witness", w},
            {"torus_dim", td},
            {"beta_relations", rj}},
           h.str());
    return witness ? ok : invalid;
}

inline int cmd_glue(Context& c, const std::string& path)
{
    GluingProblem gp = gluing_from_json(read_document(path, c.in));
    GluingSolution s = solve_gluing(gp);
    std::ostringstream h;
    json sols = json::array();
    if (!s.consistent) {
        h << "no solutions: equation '" << s.violated.value_or("?") << "' is inconsistent with the previous ones\n";
    } else {
        h << "branch count: " << s.count.str() << "\nfree dimension: " << s.free_dim << "\n";
        for (auto& sol : s.solutions) {
            json row = json::object();
            h << " ";
            for (std::size_t j = 0; j < sol.size(); ++j) {
                row[gp.unknowns[j]] = json_util::complex_json(sol[j]);
                h << " " << gp.unknowns[j] << "=" << sol[j].str();
            }
            h << "\n";
            sols.push_back(row);
        }
        if (s.truncated) h << "  (list truncated)\n";
    }
    json result = {{"consistent", s.consistent},
                   {"branch_count", s.consistent ? json(s.count.str()) : json(0)},
                   {"free_dim", s.free_dim},
                   {"solutions", sols},
                   {"truncated", s.truncated}};
    if (s.violated) result["violated"] = *s.violated;
    c.emit("glue", result, h.str());
    return s.consistent ? ok : invalid;
}

inline int cmd_example(Context& c, const std::string& name, const std::string& emit_path)
{
    if (name.empty() || name == "list") {
        std::ostringstream h;
        for (auto& n : fixtures::names()) h << n << "\n";
        c.emit("example", fixtures::names(), h.str());
        return ok;
    }
    json doc;
    try {
        doc = fixtures::document(name);
    } catch (const StructuralError&) {
        throw FormatError("unknown example '" + name + "' (try 'example list')");
    }
    if (!emit_path.empty()) {
        std::ofstream f(emit_path);
        if (!f) throw FormatError("cannot write '" + emit_path + "'");
        f << doc.dump(2) << "\n";
        c.emit("example", {{"name", name}, {"written", emit_path}}, "wrote " + emit_path + "\n");
        return ok;
    }
    c.emit("example", doc, doc.dump(2) + "\n");
    return ok;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Combinatorics of relatively stable maps to normal crossings divisors", "ncd-moduli"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output in a {version, command, result} envelope");
    app.set_version_flag("--version", version);

    std::string path, multi, name, emit_path;
    std::optional<int> k, m;
    detail::DimArgs dim;

    auto* validate = app.add_subcommand("validate", "run every map-type validator");
    validate->add_option("file", path, "map-type file or - for stdin")->required();
    auto* strata = app.add_subcommand("strata", "stratum counts of a divisor");
    strata->add_option("file", path, "divisor file or - for stdin")->required();
    strata->add_option("--k", k, "depth");
    auto* building = app.add_subcommand("building", "pieces of a level-m building");
    building->add_option("file", path, "divisor file or - for stdin")->required();
    building->add_option("--m", m, "number of levels");
    building->add_option("--multi", multi, "independent level counts l1,l2,...");
    auto* dimc = app.add_subcommand("dim", "expected dimension, naive gap and stratum codimension");
    dimc->add_option("file", path, "map-type file or - for stdin");
    dimc->add_option("--c1A", dim.c1A);
    dimc->add_option("--dimX", dim.dimX);
    dimc->add_option("--chi", dim.chi);
    dimc->add_option("--ell", dim.ell);
    dimc->add_option("--AV", dim.AV);
    auto* levels = app.add_subcommand("levels", "level system, positive witness, torus dimension, rate relations");
    levels->add_option("file", path, "map-type file or - for stdin")->required();
    auto* glue = app.add_subcommand("glue", "solve the gluing equations");
    glue->add_option("file", path, "gluing-problem file or - for stdin")->required();
    auto* example = app.add_subcommand("example", "print or write a built-in example");
    example->add_option("name", name, "example name, or 'list'");
    example->add_option("--emit", emit_path, "write the example to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : malformed;
    }
    detail::Context c{in, out, err, as_json};
    try {
        if (*validate) return detail::cmd_validate(c, path);
        if (*strata) return detail::cmd_strata(c, path, k);
        if (*building) return detail::cmd_building(c, path, m, multi);
        if (*dimc) return detail::cmd_dim(c, path, dim);
        if (*levels) return detail::cmd_levels(c, path);
        if (*glue) return detail::cmd_glue(c, path);
        if (*example) return detail::cmd_example(c, name, emit_path);
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return malformed;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return malformed;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    } catch (const ArithmeticError& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    } catch (const std::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return malformed;
    }
    return malformed;
}

} // namespace ncd::cli
