#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdlat/bitset.hpp"

namespace cdlat {

/// Thrown when a computation refuses to run because a configured size
/// limit would be exceeded. The message names the limit.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a fact the engines rely on (and the theory guarantees)
/// fails to hold; always carries a concrete witness in the message.
struct invariant_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Elt = std::uint16_t;

/// A finite group given by its full multiplication table. This is the
/// ground-truth representation: construction validates the table
/// (permutation rows/columns, identity, inverses, associativity --
/// exhaustively up to order 256, on seeded random triples above that).
class CayleyGroup {
public:
    static CayleyGroup from_table(std::vector<std::vector<Elt>> table,
                                  std::vector<std::string> labels = {});

    std::size_t order() const { return n_; }
    Elt identity() const { return identity_; }
    Elt mul(Elt a, Elt b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
    Elt inv(Elt a) const { return inverse_[a]; }
    Elt conj(Elt g, Elt h) const { return mul(mul(inv(g), h), g); }
    Elt commutator(Elt a, Elt b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

    unsigned element_order(Elt a) const;
    const std::string& label(Elt a) const { return labels_[a]; }

private:
    CayleyGroup() = default;
    std::size_t n_ = 0;
    Elt identity_ = 0;
    std::vector<Elt> table_;    // row-major n*n
    std::vector<Elt> inverse_;
    std::vector<std::string> labels_;
};

/// A subgroup of a CayleyGroup, stored as a bitset of element indices.
/// Construction from raw bits validates closure.
class SubgroupSet {
public:
    SubgroupSet(const CayleyGroup& g, Bitset members);
    static SubgroupSet trivial(const CayleyGroup& g);
    static SubgroupSet whole(const CayleyGroup& g);

    const CayleyGroup& group() const { return *g_; }
    const Bitset& bits() const { return bits_; }
    std::size_t order() const { return bits_.count(); }
    bool contains(Elt a) const { return bits_.test(a); }
    bool is_subset_of(const SubgroupSet& o) const { return bits_.is_subset_of(o.bits_); }
    std::vector<Elt> elements() const;

    bool operator==(const SubgroupSet& o) const { return bits_ == o.bits_; }

private:
    const CayleyGroup* g_;
    Bitset bits_;
};

/// Smallest subgroup containing the seed elements (worklist closure).
SubgroupSet generate(const CayleyGroup& g, std::span<const Elt> seeds);

/// C_G(H) = {g : gh = hg for all h in H}.
SubgroupSet centralizer(const CayleyGroup& g, const SubgroupSet& h);

/// C_W(H) = C_G(H) intersected with W.
SubgroupSet centralizer_in(const CayleyGroup& g, const SubgroupSet& within,
                           const SubgroupSet& h);

SubgroupSet center(const CayleyGroup& g);

/// Every subgroup of g, each exactly once, canonically sorted. Refuses
/// groups larger than `cap` (subgroup counts explode; the class-2 engine
/// owns that regime).
std::vector<SubgroupSet> all_subgroups(const CayleyGroup& g, std::size_t cap = 128);

CayleyGroup direct_product(const CayleyGroup& a, const CayleyGroup& b);

/// Central product of the factors, identifying the designated central
/// subgroups positionally: designated[i][k] of factor i is glued to
/// designated[j][k] of factor j. The positional correspondence must be an
/// isomorphism of central subgroups; this is validated.
CayleyGroup central_product(const std::vector<const CayleyGroup*>& factors,
                            const std::vector<std::vector<Elt>>& designated);

/// The set product H*K = {hk}, as a bitset (not necessarily a subgroup).
Bitset product_set(const CayleyGroup& g, const Bitset& h, const Bitset& k);

bool is_subgroup_bits(const CayleyGroup& g, const Bitset& bits);

bool is_normal(const CayleyGroup& g, const SubgroupSet& h);
/// [A, B] = subgroup generated by commutators.
SubgroupSet commutator_subgroup(const CayleyGroup& g, const SubgroupSet& a,
                                const SubgroupSet& b);
SubgroupSet derived_subgroup(const CayleyGroup& g);
unsigned nilpotency_class(const CayleyGroup& g);  // throws if not nilpotent
bool is_nilpotent(const CayleyGroup& g);
bool is_abelian_set(const CayleyGroup& g, const Bitset& h);
bool is_elementary_abelian(const CayleyGroup& g, const SubgroupSet& h);

/// H/L elementary abelian, i.e. [H,H] <= L and x^p in L for all x in H,
/// where p is the prime with |H/L| a p-power. L must be normal in H.
bool quotient_is_elementary_abelian(const CayleyGroup& g, const SubgroupSet& h,
                                    const SubgroupSet& l);

/// Re-indexes a subgroup as a standalone group. index_map (optional out)
/// maps new indices back to parent element indices.
CayleyGroup subgroup_as_group(const CayleyGroup& g, const SubgroupSet& h,
                              std::vector<Elt>* index_map = nullptr);

/// Largest prime power p^k dividing n, or nullopt if n is not a prime
/// power (n = 1 yields nullopt).
std::optional<std::pair<std::uint32_t, unsigned>> as_prime_power(std::uint64_t n);

}  // namespace cdlat
