#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdlat/cayley.hpp"
#include "cdlat/fp.hpp"

namespace cdlat {

/// Element of a class-2 presentation: generator exponent vector `a` in
/// F_p^r (collected order) and central part `z` in F_p^s.
struct PElement {
    std::vector<std::uint32_t> a;
    std::vector<std::uint32_t> z;
    bool operator==(const PElement&) const = default;
};

class Class2Presentation;

/// A subgroup containing the designated center, encoded by the subspace
/// of F_p^r it projects to. Its order is p^(s + dim w).
struct CentralSubgroup {
    const Class2Presentation* pres;
    Subspace w;
    unsigned order_exponent() const;
};

/// A finite p-group of nilpotency class <= 2 with central commutators
/// and p-th powers, presented by an alternating commutator tensor
/// comm[i][j] in F_p^s (the value of [e_i, e_j]) and power vectors
/// pow[i] in F_p^s (the value of e_i^p).
///
/// Elements multiply by collection:
///   a = a1 + a2 (with mod-p carries contributing pow[i]),
///   z = z1 + z2 + sum_{i>j} a1[i] a2[j] comm[i][j] + carry terms.
/// Associativity is structural (the cocycle is bilinear plus the standard
/// carry cocycle) and is additionally spot-checked on seeded triples.
class Class2Presentation {
public:
    /// commutators: entries (i, j, value) with i > j; unspecified pairs
    /// commute. powers may be empty (all trivial) or one vector per
    /// generator.
    Class2Presentation(std::uint32_t p, unsigned r, unsigned s,
                       const std::vector<std::tuple<unsigned, unsigned, std::vector<std::uint32_t>>>& commutators,
                       const std::vector<std::vector<std::uint32_t>>& powers = {});

    std::uint32_t p() const { return p_; }
    unsigned generator_rank() const { return r_; }
    unsigned center_rank() const { return s_; }
    unsigned order_exponent() const { return r_ + s_; }

    /// Value of [e_i, e_j] in the central basis, any i, j.
    std::span<const std::uint32_t> comm(unsigned i, unsigned j) const {
        return {comm_.data() + (static_cast<std::size_t>(i) * r_ + j) * s_, s_};
    }
    std::span<const std::uint32_t> pow(unsigned i) const {
        return {pow_.data() + static_cast<std::size_t>(i) * s_, s_};
    }

    PElement identity_element() const;
    PElement generator(unsigned i) const;        // e_i
    PElement central_generator(unsigned t) const;  // z_t
    PElement multiply(const PElement& g1, const PElement& g2) const;
    PElement inverse(const PElement& g) const;
    PElement power(const PElement& g, std::uint64_t e) const;
    PElement commutator(const PElement& g1, const PElement& g2) const;

    /// Bilinear extension of the commutator tensor: b(v, u) in F_p^s.
    /// Alternating: b(v, v) = 0.
    std::vector<std::uint32_t> commutator_form(std::span<const std::uint32_t> v,
                                               std::span<const std::uint32_t> u) const;

    /// {v : b(v, .) == 0}; the center is its preimage.
    Subspace radical() const;
    CentralSubgroup center() const;

    /// {v : b(v, u) = 0 for all u in w}; the centralizer of the preimage
    /// of w is the preimage of perp(w).
    Subspace perp(const Subspace& w) const;

    /// Exponent e with m_G(preimage of w) = p^e: e = 2s + dim w + dim perp(w).
    unsigned measure_exponent(const Subspace& w) const;

    /// Explicit multiplication table of the presented group; element
    /// index is the mixed-radix value of (a, z), identity at 0.
    CayleyGroup to_cayley(std::size_t cap = 128) const;

    /// Index of an element in the to_cayley table and back.
    std::size_t element_index(const PElement& g) const;
    PElement element_at(std::size_t index) const;

    /// The subgroup preimage of w as an induced class-2 presentation on
    /// dim(w) generators over the same center.
    Class2Presentation restrict_to(const Subspace& w) const;

    /// Element bitset of the preimage of w inside to_cayley's indexing.
    Bitset preimage_bits(const Subspace& w) const;

    std::string element_label(const PElement& g) const;

private:
    std::uint32_t p_;
    unsigned r_, s_;
    std::vector<std::uint32_t> comm_;  // r*r*s, antisymmetric in (i, j)
    std::vector<std::uint32_t> pow_;   // r*s
    void spot_check_associativity() const;
};

/// CD lattice of a class-2 presentation, over center-containing
/// subgroups (justified by the dominance inequality m(H) <= m(HZ) and
/// the fact that every CD member contains the minimal member, which
/// contains the center).
struct Class2CdResult {
    const Class2Presentation* pres;
    unsigned max_measure_exponent;
    std::vector<CentralSubgroup> members;  // canonically sorted
    std::vector<std::size_t> duality;      // perp map on members

    std::size_t find_member(const Subspace& w) const;  // SIZE_MAX if absent
    std::size_t min_member() const;
    std::size_t max_member() const;
};

/// Scans every subspace of F_p^r, maximizing dim w + dim perp(w).
/// Refuses if the total subspace count exceeds `budget`. Verifies
/// sublattice closure and perp involution as postconditions.
Class2CdResult cd_lattice_class2(const Class2Presentation& pres,
                                 std::uint64_t budget = 20'000'000);

}  // namespace cdlat
