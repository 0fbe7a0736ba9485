// Expected dimensions: the moduli dimension formula, the naive matching gap
// and stratum codimension from the torus dimension.
#pragma once

#include <vector>

#include "error.hpp"
#include "levelsys.hpp"
#include "maptype.hpp"

namespace ncd {

struct DimensionInput {
    long c1A = 0;
    int dimX = 4;
    long chi = 2;
    long ell = 0;
    long AV = 0;
};

inline long expected_dim(const DimensionInput& in)
{
    if (in.dimX < 2 || in.dimX % 2 != 0) throw StructuralError("dimX must be even and at least 2");
    // dimX even makes dimX - 6 even, so the middle term is integral
    return 2 * in.c1A + (in.dimX - 6) / 2 * in.chi + 2 * in.ell - 2 * in.AV;
}

inline long naive_gap(const std::vector<int>& depths)
{
    long g = 0;
    for (int k : depths) {
        if (k < 1) throw StructuralError("node depths must be at least 1");
        g += 2 * (1 - k);
    }
    return g;
}

// naive gap plus the 2k-2 real conditions cut by enhanced matching at each node
inline long enhanced_balance(const std::vector<int>& depths)
{
    long b = naive_gap(depths);
    for (int k : depths) b += 2 * k - 2;
    return b;
}

inline long stratum_codim(const MapType& mt) { return 2 * static_cast<long>(torus_dim(build_system(mt))); }

inline DimensionInput dimension_input(const MapType& mt)
{
    return {mt.pairings.c1A, mt.dimX, mt.pairings.chi, mt.pairings.ell, mt.pairings.AV};
}

// depths of the base nodes that meet the divisor
inline std::vector<int> node_depths(const MapType& mt)
{
    std::vector<int> out;
    for (auto& bp : contract(mt).base)
        if (bp.kind == BasePoint::Kind::Node) {
            auto k = static_cast<int>(point(mt, bp.start).contact.depth());
            if (k > 0) out.push_back(k);
        }
    return out;
}

} // namespace ncd
