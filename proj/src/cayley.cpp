#include "cdlat/cayley.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace cdlat {

CayleyGroup CayleyGroup::from_table(std::vector<std::vector<Elt>> table,
                                    std::vector<std::string> labels) {
    CayleyGroup g;
    const std::size_t n = table.size();
    if (n == 0) throw std::invalid_argument("group table is empty");
    if (n > 65535) throw std::invalid_argument("group order exceeds index type");
    g.n_ = n;
    g.table_.resize(n * n);
    std::vector<bool> seen(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].size() != n)
            throw std::invalid_argument("table row " + std::to_string(i) + " has wrong length");
        std::fill(seen.begin(), seen.end(), false);
        for (std::size_t j = 0; j < n; ++j) {
            Elt v = table[i][j];
            if (v >= n || seen[v])
                throw std::invalid_argument("table row " + std::to_string(i) +
                                            " is not a permutation");
            seen[v] = true;
            g.table_[i * n + j] = v;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(seen.begin(), seen.end(), false);
        for (std::size_t i = 0; i < n; ++i) {
            Elt v = g.table_[i * n + j];
            if (seen[v])
                throw std::invalid_argument("table column " + std::to_string(j) +
                                            " is not a permutation");
            seen[v] = true;
        }
    }
    // Identity: the unique e with e*x = x for all x; also require x*e = x.
    std::optional<Elt> id;
    for (std::size_t e = 0; e < n; ++e) {
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x)
            ok = g.table_[e * n + x] == x && g.table_[x * n + e] == x;
        if (ok) {
            id = static_cast<Elt>(e);
            break;
        }
    }
    if (!id) throw std::invalid_argument("table has no two-sided identity");
    g.identity_ = *id;
    g.inverse_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        std::optional<Elt> inv;
        for (std::size_t b = 0; b < n; ++b)
            if (g.table_[a * n + b] == g.identity_ && g.table_[b * n + a] == g.identity_) {
                inv = static_cast<Elt>(b);
                break;
            }
        if (!inv)
            throw std::invalid_argument("element " + std::to_string(a) + " has no inverse");
        g.inverse_[a] = *inv;
    }
    // Associativity: exhaustive up to order 256, seeded sampling above.
    auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
        Elt ab = g.table_[a * n + b];
        Elt bc = g.table_[b * n + c];
        if (g.table_[static_cast<std::size_t>(ab) * n + c] !=
            g.table_[a * n + bc])
            throw std::invalid_argument("table is not associative at (" + std::to_string(a) +
                                        "," + std::to_string(b) + "," + std::to_string(c) + ")");
    };
    if (n <= 256) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) check(a, b, c);
    } else {
        std::mt19937 rng(0x5eedu);
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        for (int t = 0; t < 20000; ++t) check(d(rng), d(rng), d(rng));
    }
    if (labels.empty()) {
        labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = "g" + std::to_string(i);
    } else if (labels.size() != n) {
        throw std::invalid_argument("label count does not match group order");
    }
    g.labels_ = std::move(labels);
    return g;
}

unsigned CayleyGroup::element_order(Elt a) const {
    unsigned k = 1;
    Elt x = a;
    while (x != identity_) {
        x = mul(x, a);
        ++k;
    }
    return k;
}

SubgroupSet::SubgroupSet(const CayleyGroup& g, Bitset members) : g_(&g), bits_(std::move(members)) {
    if (bits_.size() != g.order())
        throw std::invalid_argument("subgroup bitset has wrong length");
    if (!bits_.test(g.identity()))
        throw std::invalid_argument("subgroup does not contain the identity");
    bool closed = true;
    std::vector<Elt> elems;
    bits_.for_each([&](std::size_t i) { elems.push_back(static_cast<Elt>(i)); });
    for (Elt a : elems) {
        if (!bits_.test(g.inv(a))) closed = false;
        for (Elt b : elems)
            if (!bits_.test(g.mul(a, b))) closed = false;
    }
    if (!closed) throw std::invalid_argument("element set is not closed under the group operations");
}

SubgroupSet SubgroupSet::trivial(const CayleyGroup& g) {
    Bitset b(g.order());
    b.set(g.identity());
    return SubgroupSet(g, std::move(b));
}

SubgroupSet SubgroupSet::whole(const CayleyGroup& g) {
    Bitset b(g.order());
    for (std::size_t i = 0; i < g.order(); ++i) b.set(i);
    return SubgroupSet(g, std::move(b));
}

std::vector<Elt> SubgroupSet::elements() const {
    std::vector<Elt> out;
    out.reserve(order());
    bits_.for_each([&](std::size_t i) { out.push_back(static_cast<Elt>(i)); });
    return out;
}

namespace {

// Closure as raw bits; assumes seeds nonempty set containing whatever the
// caller wants (identity is always added).
Bitset close_bits(const CayleyGroup& g, Bitset start) {
    start.set(g.identity());
    std::vector<Elt> elems;
    start.for_each([&](std::size_t i) { elems.push_back(static_cast<Elt>(i)); });
    for (Elt e : elems) {
        if (!start.test(g.inv(e))) {
            start.set(g.inv(e));
            elems.push_back(g.inv(e));
        }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = 0; j < elems.size(); ++j) {
            Elt p1 = g.mul(elems[i], elems[j]);
            if (!start.test(p1)) {
                start.set(p1);
                elems.push_back(p1);
            }
        }
        Elt iv = g.inv(elems[i]);
        if (!start.test(iv)) {
            start.set(iv);
            elems.push_back(iv);
        }
    }
    return start;
}

}  // namespace

SubgroupSet generate(const CayleyGroup& g, std::span<const Elt> seeds) {
    Bitset b(g.order());
    for (Elt s : seeds) {
        if (s >= g.order()) throw std::invalid_argument("seed element out of range");
        b.set(s);
    }
    return SubgroupSet(g, close_bits(g, std::move(b)));
}

SubgroupSet centralizer(const CayleyGroup& g, const SubgroupSet& h) {
    std::vector<Elt> hs = h.elements();
    Bitset b(g.order());
    for (std::size_t x = 0; x < g.order(); ++x) {
        Elt e = static_cast<Elt>(x);
        bool ok = true;
        for (Elt m : hs)
            if (g.mul(e, m) != g.mul(m, e)) {
                ok = false;
                break;
            }
        if (ok) b.set(x);
    }
    return SubgroupSet(g, std::move(b));
}

SubgroupSet centralizer_in(const CayleyGroup& g, const SubgroupSet& within,
                           const SubgroupSet& h) {
    return SubgroupSet(g, centralizer(g, h).bits() & within.bits());
}

SubgroupSet center(const CayleyGroup& g) {
    return centralizer(g, SubgroupSet::whole(g));
}

std::vector<SubgroupSet> all_subgroups(const CayleyGroup& g, std::size_t cap) {
    if (g.order() > cap)
        throw cap_exceeded("all_subgroups: group order " + std::to_string(g.order()) +
                           " exceeds the configured cap " + std::to_string(cap));
    // Layered closure: seed with cyclic subgroups, then join (subgroup, cyclic)
    // pairs until no new subgroup appears.
    std::unordered_set<Bitset, BitsetHash> known;
    std::vector<Bitset> cyclics;
    {
        std::unordered_set<Bitset, BitsetHash> cyc_seen;
        for (std::size_t x = 0; x < g.order(); ++x) {
            Bitset b(g.order());
            b.set(x);
            Bitset c = close_bits(g, std::move(b));
            if (cyc_seen.insert(c).second) cyclics.push_back(c);
        }
    }
    std::vector<Bitset> frontier;
    for (const Bitset& c : cyclics)
        if (known.insert(c).second) frontier.push_back(c);
    while (!frontier.empty()) {
        std::vector<Bitset> next;
        for (const Bitset& h : frontier) {
            for (const Bitset& c : cyclics) {
                if (c.is_subset_of(h)) continue;
                Bitset j = close_bits(g, h | c);
                if (known.insert(j).second) next.push_back(j);
            }
        }
        frontier = std::move(next);
    }
    std::vector<SubgroupSet> out;
    out.reserve(known.size());
    for (const Bitset& b : known) out.emplace_back(g, b);
    std::sort(out.begin(), out.end(),
              [](const SubgroupSet& a, const SubgroupSet& b) { return a.bits() < b.bits(); });
    return out;
}

CayleyGroup direct_product(const CayleyGroup& a, const CayleyGroup& b) {
    const std::size_t na = a.order(), nb = b.order();
    const std::size_t n = na * nb;
    if (n > 65535) throw cap_exceeded("direct_product: order exceeds index type");
    std::vector<std::vector<Elt>> table(n, std::vector<Elt>(n));
    for (std::size_t i1 = 0; i1 < na; ++i1)
        for (std::size_t j1 = 0; j1 < nb; ++j1)
            for (std::size_t i2 = 0; i2 < na; ++i2)
                for (std::size_t j2 = 0; j2 < nb; ++j2) {
                    std::size_t x = i1 * nb + j1, y = i2 * nb + j2;
                    table[x][y] = static_cast<Elt>(
                        static_cast<std::size_t>(a.mul(static_cast<Elt>(i1), static_cast<Elt>(i2))) * nb +
                        b.mul(static_cast<Elt>(j1), static_cast<Elt>(j2)));
                }
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            labels[i * nb + j] = a.label(static_cast<Elt>(i)) + "|" + b.label(static_cast<Elt>(j));
    return CayleyGroup::from_table(std::move(table), std::move(labels));
}

namespace {

// Quotient of g by a (validated normal) subgroup N: cosets become elements.
// coset_of receives the element -> coset index map.
CayleyGroup quotient_group(const CayleyGroup& g, const SubgroupSet& n,
                           std::vector<std::size_t>& coset_of) {
    const std::size_t ord = g.order();
    std::vector<Elt> nelems = n.elements();
    coset_of.assign(ord, SIZE_MAX);
    std::vector<Elt> rep;
    for (std::size_t x = 0; x < ord; ++x) {
        if (coset_of[x] != SIZE_MAX) continue;
        std::size_t c = rep.size();
        rep.push_back(static_cast<Elt>(x));
        for (Elt m : nelems) coset_of[g.mul(static_cast<Elt>(x), m)] = c;
    }
    const std::size_t q = rep.size();
    std::vector<std::vector<Elt>> table(q, std::vector<Elt>(q));
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            table[i][j] = static_cast<Elt>(coset_of[g.mul(rep[i], rep[j])]);
    std::vector<std::string> labels(q);
    for (std::size_t i = 0; i < q; ++i) labels[i] = g.label(rep[i]) + "N";
    return CayleyGroup::from_table(std::move(table), std::move(labels));
}

}  // namespace

CayleyGroup central_product(const std::vector<const CayleyGroup*>& factors,
                            const std::vector<std::vector<Elt>>& designated) {
    if (factors.empty()) throw std::invalid_argument("central_product: no factors");
    if (designated.size() != factors.size())
        throw std::invalid_argument("central_product: one designated subgroup per factor required");
    const std::size_t z = designated[0].size();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (designated[i].size() != z)
            throw std::invalid_argument("central_product: designated subgroups differ in size");
        // Designated subgroup must be central and closed; the positional map
        // from factor 0 must be an isomorphism.
        const CayleyGroup& f = *factors[i];
        Bitset b(f.order());
        for (Elt e : designated[i]) b.set(e);
        SubgroupSet zi(f, b);  // validates closure
        SubgroupSet cz = centralizer(f, SubgroupSet::whole(f));
        if (!zi.is_subset_of(cz))
            throw std::invalid_argument("central_product: designated subgroup is not central");
        auto pos = [&](Elt e) {
            for (std::size_t k = 0; k < z; ++k)
                if (designated[i][k] == e) return k;
            throw std::invalid_argument("central_product: designated list is not closed");
        };
        for (std::size_t k1 = 0; k1 < z; ++k1)
            for (std::size_t k2 = 0; k2 < z; ++k2) {
                std::size_t prod_i = pos(f.mul(designated[i][k1], designated[i][k2]));
                std::size_t prod_0 =
                    [&] {
                        const CayleyGroup& f0 = *factors[0];
                        Elt pr = f0.mul(designated[0][k1], designated[0][k2]);
                        for (std::size_t k = 0; k < z; ++k)
                            if (designated[0][k] == pr) return k;
                        throw std::invalid_argument("central_product: designated list is not closed");
                    }();
                if (prod_i != prod_0)
                    throw std::invalid_argument(
                        "central_product: positional correspondence is not an isomorphism");
            }
    }
    // Fold the factors in one at a time, gluing each against the running
    // product with the anti-diagonal subgroup { (z, z^-1) }.
    CayleyGroup result = *factors[0];
    std::vector<Elt> des_run = designated[0];
    for (std::size_t fi = 1; fi < factors.size(); ++fi) {
        const CayleyGroup& b = *factors[fi];
        const std::size_t nb = b.order();
        CayleyGroup d = direct_product(result, b);
        std::vector<Elt> glue;
        for (std::size_t k = 0; k < z; ++k)
            glue.push_back(static_cast<Elt>(static_cast<std::size_t>(des_run[k]) * nb +
                                            b.inv(designated[fi][k])));
        SubgroupSet n = generate(d, glue);
        std::vector<std::size_t> coset_of;
        CayleyGroup q = quotient_group(d, n, coset_of);
        std::vector<Elt> des_next(z);
        for (std::size_t k = 0; k < z; ++k)
            des_next[k] = static_cast<Elt>(
                coset_of[static_cast<std::size_t>(des_run[k]) * nb + b.identity()]);
        result = std::move(q);
        des_run = std::move(des_next);
    }
    return result;
}

Bitset product_set(const CayleyGroup& g, const Bitset& h, const Bitset& k) {
    Bitset out(g.order());
    std::vector<Elt> hs, ks;
    h.for_each([&](std::size_t i) { hs.push_back(static_cast<Elt>(i)); });
    k.for_each([&](std::size_t i) { ks.push_back(static_cast<Elt>(i)); });
    for (Elt a : hs)
        for (Elt b : ks) out.set(g.mul(a, b));
    return out;
}

bool is_subgroup_bits(const CayleyGroup& g, const Bitset& bits) {
    if (!bits.test(g.identity())) return false;
    std::vector<Elt> es;
    bits.for_each([&](std::size_t i) { es.push_back(static_cast<Elt>(i)); });
    for (Elt a : es) {
        if (!bits.test(g.inv(a))) return false;
        for (Elt b : es)
            if (!bits.test(g.mul(a, b))) return false;
    }
    return true;
}

bool is_normal(const CayleyGroup& g, const SubgroupSet& h) {
    for (std::size_t x = 0; x < g.order(); ++x)
        for (Elt m : h.elements())
            if (!h.contains(g.conj(static_cast<Elt>(x), m))) return false;
    return true;
}

SubgroupSet commutator_subgroup(const CayleyGroup& g, const SubgroupSet& a,
                                const SubgroupSet& b) {
    std::vector<Elt> seeds;
    for (Elt x : a.elements())
        for (Elt y : b.elements()) seeds.push_back(g.commutator(x, y));
    return generate(g, seeds);
}

SubgroupSet derived_subgroup(const CayleyGroup& g) {
    SubgroupSet whole = SubgroupSet::whole(g);
    return commutator_subgroup(g, whole, whole);
}

bool is_nilpotent(const CayleyGroup& g) {
    SubgroupSet whole = SubgroupSet::whole(g);
    SubgroupSet gamma = whole;
    for (std::size_t step = 0; step <= g.order(); ++step) {
        if (gamma.order() == 1) return true;
        SubgroupSet next = commutator_subgroup(g, gamma, whole);
        if (next == gamma) return false;
        gamma = next;
    }
    return false;
}

unsigned nilpotency_class(const CayleyGroup& g) {
    SubgroupSet whole = SubgroupSet::whole(g);
    SubgroupSet gamma = whole;
    unsigned c = 0;
    while (gamma.order() != 1) {
        SubgroupSet next = commutator_subgroup(g, gamma, whole);
        if (next == gamma)
            throw std::invalid_argument("nilpotency_class: group is not nilpotent");
        gamma = next;
        ++c;
    }
    return c;
}

bool is_abelian_set(const CayleyGroup& g, const Bitset& h) {
    std::vector<Elt> es;
    h.for_each([&](std::size_t i) { es.push_back(static_cast<Elt>(i)); });
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (g.mul(es[i], es[j]) != g.mul(es[j], es[i])) return false;
    return true;
}

bool is_elementary_abelian(const CayleyGroup& g, const SubgroupSet& h) {
    if (h.order() == 1) return true;
    auto pp = as_prime_power(h.order());
    if (!pp) return false;
    if (!is_abelian_set(g, h.bits())) return false;
    for (Elt e : h.elements())
        if (e != g.identity() && g.element_order(e) != pp->first) return false;
    return true;
}

bool quotient_is_elementary_abelian(const CayleyGroup& g, const SubgroupSet& h,
                                    const SubgroupSet& l) {
    if (!l.is_subset_of(h))
        throw std::invalid_argument("quotient predicate: L is not contained in H");
    for (Elt x : h.elements())
        for (Elt m : l.elements())
            if (!l.contains(g.conj(x, m)))
                throw std::invalid_argument("quotient predicate: L is not normal in H");
    std::uint64_t index = h.order() / l.order();
    if (index == 1) return true;
    auto pp = as_prime_power(index);
    if (!pp) return false;
    const std::uint32_t p = pp->first;
    // [H,H] <= L
    for (Elt a : h.elements())
        for (Elt b : h.elements())
            if (!l.contains(g.commutator(a, b))) return false;
    // x^p in L for all x in H
    for (Elt a : h.elements()) {
        Elt x = g.identity();
        for (std::uint32_t i = 0; i < p; ++i) x = g.mul(x, a);
        if (!l.contains(x)) return false;
    }
    return true;
}

CayleyGroup subgroup_as_group(const CayleyGroup& g, const SubgroupSet& h,
                              std::vector<Elt>* index_map) {
    std::vector<Elt> elems = h.elements();
    const std::size_t m = elems.size();
    std::vector<Elt> back(g.order(), 0);
    for (std::size_t i = 0; i < m; ++i) back[elems[i]] = static_cast<Elt>(i);
    std::vector<std::vector<Elt>> table(m, std::vector<Elt>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) table[i][j] = back[g.mul(elems[i], elems[j])];
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = g.label(elems[i]);
    if (index_map) *index_map = elems;
    return CayleyGroup::from_table(std::move(table), std::move(labels));
}

std::optional<std::pair<std::uint32_t, unsigned>> as_prime_power(std::uint64_t n) {
    if (n < 2) return std::nullopt;
    for (std::uint32_t p = 2;; ++p) {
        if (static_cast<std::uint64_t>(p) * p > n) break;
        if (n % p == 0) {
            unsigned k = 0;
            while (n % p == 0) {
                n /= p;
                ++k;
            }
            if (n != 1) return std::nullopt;
            return std::make_pair(p, k);
        }
    }
    // n itself is prime.
    return std::make_pair(static_cast<std::uint32_t>(n), 1u);
}

}  // namespace cdlat
