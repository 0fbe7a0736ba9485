// Small helpers for reading JSON documents with FormatError diagnostics.
#pragma once

#include <string>

#include <json.hpp>

#include "error.hpp"
#include "exactnum.hpp"

namespace ncd::json_util {

using json = nlohmann::json;

inline const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object()) throw FormatError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(where + ": missing field '" + key + "'");
    return *it;
}

template <class T>
T get(const json& j, const char* key, const std::string& where)
{
    const json& v = field(j, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        throw FormatError(where + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where)
{
    if (!j.is_object()) throw FormatError(where + ": expected an object");
    if (!j.contains(key)) return fallback;
    return get<T>(j, key, where);
}

// rationals are written as integers or "p/q" strings
inline Rational rational(const json& v, const std::string& where)
{
    try {
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const ArithmeticError& e) {
        throw FormatError(where + ": " + e.what());
    }
    throw FormatError(where + ": expected an integer or a \"p/q\" string");
}

inline json rational_json(const Rational& q)
{
    if (den(q) == 1 && abs(num(q)) < Integer(1) << 52) return json(static_cast<long long>(num(q)));
    return json(q.str());
}

// {"primes": {"2": "1/2"}, "arg": "1/4"}
inline json complex_json(const ExactComplex& z)
{
    json primes = json::object();
    for (auto& [p, e] : z.magnitude()) primes[std::to_string(p)] = rational_json(e);
    return json{{"primes", primes}, {"arg", rational_json(z.arg())}};
}

inline ExactComplex complex(const json& v, const std::string& where)
{
    if (!v.is_object()) throw FormatError(where + ": coefficient must be an object {primes, arg}");
    ExactComplex::Magnitude m;
    if (v.contains("primes")) {
        const json& ps = v.at("primes");
        if (!ps.is_object()) throw FormatError(where + ": 'primes' must be an object");
        for (auto& [k, e] : ps.items()) {
            std::uint64_t p = 0;
            try {
                std::size_t used = 0;
                p = std::stoull(k, &used);
                if (used != k.size()) throw std::invalid_argument(k);
            } catch (const std::exception&) {
                throw FormatError(where + ": prime key '" + k + "' is not an integer");
            }
            if (!is_prime(p)) throw FormatError(where + ": key " + k + " is not prime");
            m[p] = rational(e, where);
        }
    }
    Rational arg = v.contains("arg") ? rational(v.at("arg"), where) : Rational(0);
    return ExactComplex(std::move(m), arg);
}

} // namespace ncd::json_util
