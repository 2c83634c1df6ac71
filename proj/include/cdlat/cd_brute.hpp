#pragma once

#include <cstdint>
#include <vector>

#include "cdlat/cayley.hpp"

namespace cdlat {

/// A subgroup together with its Chermak-Delgado measure |H| * |C_G(H)|
/// and the centralizer witness.
struct MeasuredSubgroup {
    SubgroupSet subgroup;
    SubgroupSet centralizer;
    std::uint64_t measure;
};

/// The Chermak-Delgado lattice of a group: all subgroups attaining the
/// maximal measure, canonically sorted, with the centralizer duality map.
struct CdResult {
    const CayleyGroup* group;
    std::uint64_t max_measure;
    std::vector<MeasuredSubgroup> members;
    std::vector<std::size_t> duality;  // members[i] |-> index of its centralizer

    std::size_t find_member(const Bitset& bits) const;  // SIZE_MAX if absent
    std::size_t min_member() const;
    std::size_t max_member() const;
};

MeasuredSubgroup measure(const CayleyGroup& g, const SubgroupSet& h);

/// Computes the CD lattice by exhaustive subgroup enumeration. Verifies
/// as a postcondition that the member set is closed under set products
/// and intersections and that centralizing is an involution on it;
/// a violation would falsify the theory and raises invariant_violation
/// with witnesses.
CdResult cd_lattice(const CayleyGroup& g, std::size_t cap = 128);

/// Member indices K with bottom <= K <= top; arguments are member indices.
std::vector<std::size_t> cd_interval(const CdResult& r, std::size_t bottom, std::size_t top);

}  // namespace cdlat
