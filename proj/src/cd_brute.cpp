#include "cdlat/cd_brute.hpp"

#include <algorithm>

namespace cdlat {

MeasuredSubgroup measure(const CayleyGroup& g, const SubgroupSet& h) {
    SubgroupSet c = centralizer(g, h);
    std::uint64_t m = static_cast<std::uint64_t>(h.order()) * c.order();
    return MeasuredSubgroup{h, std::move(c), m};
}

std::size_t CdResult::find_member(const Bitset& bits) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].subgroup.bits() == bits) return i;
    return SIZE_MAX;
}

std::size_t CdResult::min_member() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].subgroup.order() < members[best].subgroup.order()) best = i;
    return best;
}

std::size_t CdResult::max_member() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].subgroup.order() > members[best].subgroup.order()) best = i;
    return best;
}

CdResult cd_lattice(const CayleyGroup& g, std::size_t cap) {
    std::vector<SubgroupSet> subs = all_subgroups(g, cap);
    std::uint64_t best = 0;
    std::vector<MeasuredSubgroup> members;
    for (const SubgroupSet& h : subs) {
        MeasuredSubgroup m = measure(g, h);
        if (m.measure > best) {
            best = m.measure;
            members.clear();
        }
        if (m.measure == best) members.push_back(std::move(m));
    }
    std::sort(members.begin(), members.end(),
              [](const MeasuredSubgroup& a, const MeasuredSubgroup& b) {
                  return a.subgroup.bits() < b.subgroup.bits();
              });

    CdResult r{&g, best, std::move(members), {}};

    // Postconditions: the member set must be a sublattice (closed under set
    // product and intersection) and centralizing must be an involution on it.
    const std::size_t m = r.members.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            Bitset prod = product_set(g, r.members[i].subgroup.bits(),
                                      r.members[j].subgroup.bits());
            if (!is_subgroup_bits(g, prod) || r.find_member(prod) == SIZE_MAX)
                throw invariant_violation(
                    "cd_lattice: members " + std::to_string(i) + " and " + std::to_string(j) +
                    " have a set product outside the member set");
            Bitset inter = r.members[i].subgroup.bits() & r.members[j].subgroup.bits();
            if (r.find_member(inter) == SIZE_MAX)
                throw invariant_violation(
                    "cd_lattice: members " + std::to_string(i) + " and " + std::to_string(j) +
                    " have an intersection outside the member set");
        }
    }
    r.duality.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t ci = r.find_member(r.members[i].centralizer.bits());
        if (ci == SIZE_MAX)
            throw invariant_violation("cd_lattice: centralizer of member " + std::to_string(i) +
                                      " is not a member");
        r.duality[i] = ci;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (r.duality[r.duality[i]] != i)
            throw invariant_violation("cd_lattice: duality map is not an involution at member " +
                                      std::to_string(i));
    return r;
}

std::vector<std::size_t> cd_interval(const CdResult& r, std::size_t bottom, std::size_t top) {
    if (bottom >= r.members.size() || top >= r.members.size())
        throw std::invalid_argument("cd_interval: argument is not a member index");
    const SubgroupSet& lo = r.members[bottom].subgroup;
    const SubgroupSet& hi = r.members[top].subgroup;
    if (!lo.is_subset_of(hi))
        throw std::invalid_argument("cd_interval: bottom is not contained in top");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.members.size(); ++i)
        if (lo.is_subset_of(r.members[i].subgroup) && r.members[i].subgroup.is_subset_of(hi))
            out.push_back(i);
    return out;
}

}  // namespace cdlat
