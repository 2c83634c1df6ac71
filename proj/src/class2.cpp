#include "cdlat/class2.hpp"

#include <algorithm>
#include <random>

namespace cdlat {

unsigned CentralSubgroup::order_exponent() const {
    return pres->center_rank() + static_cast<unsigned>(w.dim());
}

Class2Presentation::Class2Presentation(
    std::uint32_t p, unsigned r, unsigned s,
    const std::vector<std::tuple<unsigned, unsigned, std::vector<std::uint32_t>>>& commutators,
    const std::vector<std::vector<std::uint32_t>>& powers)
    : p_(p), r_(r), s_(s) {
    if (!is_prime(p)) throw std::invalid_argument("class2: p is not prime");
    comm_.assign(static_cast<std::size_t>(r) * r * s, 0);
    for (const auto& [i, j, val] : commutators) {
        if (i >= r || j >= r || i <= j)
            throw std::invalid_argument("class2: commutator entry needs generator indices i > j");
        if (val.size() != s)
            throw std::invalid_argument("class2: commutator value has wrong length");
        for (unsigned t = 0; t < s; ++t) {
            std::uint32_t v = val[t] % p;
            comm_[(static_cast<std::size_t>(i) * r + j) * s + t] = v;
            comm_[(static_cast<std::size_t>(j) * r + i) * s + t] = (p - v) % p;
        }
    }
    if (!powers.empty()) {
        if (powers.size() != r)
            throw std::invalid_argument("class2: need one power vector per generator");
        pow_.reserve(static_cast<std::size_t>(r) * s);
        for (const auto& pv : powers) {
            if (pv.size() != s)
                throw std::invalid_argument("class2: power vector has wrong length");
            for (std::uint32_t v : pv) pow_.push_back(v % p);
        }
    } else {
        pow_.assign(static_cast<std::size_t>(r) * s, 0);
    }
    spot_check_associativity();
}

void Class2Presentation::spot_check_associativity() const {
    std::mt19937 rng(p_ * 2654435761u + r_ * 97 + s_);
    std::uniform_int_distribution<std::uint32_t> d(0, p_ - 1);
    auto random_element = [&] {
        PElement g = identity_element();
        for (auto& x : g.a) x = d(rng);
        for (auto& x : g.z) x = d(rng);
        return g;
    };
    for (int t = 0; t < 64; ++t) {
        PElement x = random_element(), y = random_element(), z = random_element();
        if (multiply(multiply(x, y), z) != multiply(x, multiply(y, z)))
            throw invariant_violation("class2: collection product failed associativity spot check");
    }
}

PElement Class2Presentation::identity_element() const {
    return PElement{std::vector<std::uint32_t>(r_, 0), std::vector<std::uint32_t>(s_, 0)};
}

PElement Class2Presentation::generator(unsigned i) const {
    PElement g = identity_element();
    g.a[i] = 1;
    return g;
}

PElement Class2Presentation::central_generator(unsigned t) const {
    PElement g = identity_element();
    g.z[t] = 1;
    return g;
}

PElement Class2Presentation::multiply(const PElement& g1, const PElement& g2) const {
    PElement out = identity_element();
    for (unsigned t = 0; t < s_; ++t) out.z[t] = (g1.z[t] + g2.z[t]) % p_;
    for (unsigned i = 0; i < r_; ++i) {
        std::uint32_t sum = g1.a[i] + g2.a[i];
        if (sum >= p_) {
            sum -= p_;
            for (unsigned t = 0; t < s_; ++t) out.z[t] = (out.z[t] + pow(i)[t]) % p_;
        }
        out.a[i] = sum;
    }
    // Collection: moving the second factor's e_j past the first factor's
    // e_i (i > j) contributes [e_i, e_j]^(a1[i] a2[j]).
    for (unsigned i = 1; i < r_; ++i) {
        if (!g1.a[i]) continue;
        for (unsigned j = 0; j < i; ++j) {
            if (!g2.a[j]) continue;
            std::uint64_t f = static_cast<std::uint64_t>(g1.a[i]) * g2.a[j] % p_;
            if (!f) continue;
            auto c = comm(i, j);
            for (unsigned t = 0; t < s_; ++t)
                out.z[t] = static_cast<std::uint32_t>((out.z[t] + f * c[t]) % p_);
        }
    }
    return out;
}

PElement Class2Presentation::inverse(const PElement& g) const {
    // Solve g * h = 1 directly from the collection formula.
    PElement h = identity_element();
    for (unsigned i = 0; i < r_; ++i) h.a[i] = (p_ - g.a[i]) % p_;
    // Start from the negated central part, then cancel the cocycle terms
    // the product g*h will introduce.
    for (unsigned t = 0; t < s_; ++t) h.z[t] = (p_ - g.z[t]) % p_;
    PElement probe = h;
    PElement prod = multiply(g, probe);
    for (unsigned t = 0; t < s_; ++t)
        h.z[t] = (h.z[t] + p_ - prod.z[t]) % p_;
    return h;
}

PElement Class2Presentation::power(const PElement& g, std::uint64_t e) const {
    PElement acc = identity_element();
    PElement base = g;
    while (e) {
        if (e & 1) acc = multiply(acc, base);
        base = multiply(base, base);
        e >>= 1;
    }
    return acc;
}

PElement Class2Presentation::commutator(const PElement& g1, const PElement& g2) const {
    return multiply(multiply(inverse(g1), inverse(g2)), multiply(g1, g2));
}

std::vector<std::uint32_t> Class2Presentation::commutator_form(
    std::span<const std::uint32_t> v, std::span<const std::uint32_t> u) const {
    if (v.size() != r_ || u.size() != r_)
        throw std::invalid_argument("commutator_form: wrong vector length");
    std::vector<std::uint32_t> out(s_, 0);
    for (unsigned i = 0; i < r_; ++i) {
        if (!v[i]) continue;
        for (unsigned j = 0; j < r_; ++j) {
            if (!u[j] || i == j) continue;
            std::uint64_t f = static_cast<std::uint64_t>(v[i] % p_) * (u[j] % p_) % p_;
            auto c = comm(i, j);
            for (unsigned t = 0; t < s_; ++t)
                out[t] = static_cast<std::uint32_t>((out[t] + f * c[t]) % p_);
        }
    }
    return out;
}

namespace {

// Constraint matrix whose nullspace is perp(w): one row per (basis row
// of w, center coordinate).
FpMatrix perp_constraints(const Class2Presentation& pres, const Subspace& w) {
    const unsigned r = pres.generator_rank(), s = pres.center_rank();
    const std::uint32_t p = pres.p();
    std::vector<std::uint32_t> rows;
    rows.reserve(static_cast<std::size_t>(w.dim()) * s * r);
    for (std::size_t bi = 0; bi < w.dim(); ++bi) {
        auto u = w.basis().row(bi);
        for (unsigned t = 0; t < s; ++t) {
            for (unsigned i = 0; i < r; ++i) {
                std::uint64_t acc = 0;
                for (unsigned j = 0; j < r; ++j)
                    if (u[j]) acc += static_cast<std::uint64_t>(pres.comm(i, j)[t]) * u[j];
                rows.push_back(static_cast<std::uint32_t>(acc % p));
            }
        }
    }
    return FpMatrix(p, static_cast<std::size_t>(w.dim()) * s, r, std::move(rows));
}

}  // namespace

Subspace Class2Presentation::radical() const {
    return perp(Subspace::full(p_, r_));
}

CentralSubgroup Class2Presentation::center() const {
    return CentralSubgroup{this, radical()};
}

Subspace Class2Presentation::perp(const Subspace& w) const {
    if (w.p() != p_ || w.ambient_dim() != r_)
        throw std::invalid_argument("perp: subspace not in F_p^r");
    if (w.dim() == 0) return Subspace::full(p_, r_);
    return nullspace(perp_constraints(*this, w));
}

unsigned Class2Presentation::measure_exponent(const Subspace& w) const {
    return 2 * s_ + static_cast<unsigned>(w.dim() + perp(w).dim());
}

std::size_t Class2Presentation::element_index(const PElement& g) const {
    std::size_t idx = 0;
    for (unsigned i = 0; i < r_; ++i) idx = idx * p_ + g.a[i];
    for (unsigned t = 0; t < s_; ++t) idx = idx * p_ + g.z[t];
    return idx;
}

PElement Class2Presentation::element_at(std::size_t index) const {
    PElement g = identity_element();
    for (unsigned t = s_; t-- > 0;) {
        g.z[t] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    for (unsigned i = r_; i-- > 0;) {
        g.a[i] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    return g;
}

std::string Class2Presentation::element_label(const PElement& g) const {
    std::string out = "(";
    for (unsigned i = 0; i < r_; ++i) {
        if (i) out += ",";
        out += std::to_string(g.a[i]);
    }
    out += "|";
    for (unsigned t = 0; t < s_; ++t) {
        if (t) out += ",";
        out += std::to_string(g.z[t]);
    }
    out += ")";
    return out;
}

CayleyGroup Class2Presentation::to_cayley(std::size_t cap) const {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < r_ + s_; ++i) {
        n *= p_;
        if (n > cap)
            throw cap_exceeded("to_cayley: group order p^" + std::to_string(r_ + s_) +
                               " exceeds the configured cap " + std::to_string(cap));
    }
    const std::size_t ord = static_cast<std::size_t>(n);
    std::vector<PElement> elems(ord);
    std::vector<std::string> labels(ord);
    for (std::size_t i = 0; i < ord; ++i) {
        elems[i] = element_at(i);
        labels[i] = element_label(elems[i]);
    }
    std::vector<std::vector<Elt>> table(ord, std::vector<Elt>(ord));
    for (std::size_t i = 0; i < ord; ++i)
        for (std::size_t j = 0; j < ord; ++j)
            table[i][j] = static_cast<Elt>(element_index(multiply(elems[i], elems[j])));
    return CayleyGroup::from_table(std::move(table), std::move(labels));
}

Class2Presentation Class2Presentation::restrict_to(const Subspace& w) const {
    if (w.p() != p_ || w.ambient_dim() != r_)
        throw std::invalid_argument("restrict_to: subspace not in F_p^r");
    const unsigned k = static_cast<unsigned>(w.dim());
    std::vector<std::tuple<unsigned, unsigned, std::vector<std::uint32_t>>> comms;
    for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 0; j < i; ++j) {
            auto val = commutator_form(w.basis().row(i), w.basis().row(j));
            comms.emplace_back(i, j, std::move(val));
        }
    // p-th power of each basis lift, computed in the group itself.
    std::vector<std::vector<std::uint32_t>> powers;
    powers.reserve(k);
    for (unsigned i = 0; i < k; ++i) {
        PElement lift = identity_element();
        for (unsigned c = 0; c < r_; ++c) lift.a[c] = w.basis().at(i, c);
        PElement pw = power(lift, p_);
        powers.push_back(pw.z);  // pw.a is zero: p * a = 0 mod p
    }
    return Class2Presentation(p_, k, s_, comms, powers);
}

Bitset Class2Presentation::preimage_bits(const Subspace& w) const {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < r_ + s_; ++i) n *= p_;
    Bitset bits(static_cast<std::size_t>(n));
    // Enumerate w's elements (p^dim coefficient tuples) times the center.
    std::uint64_t wcount = 1;
    for (std::size_t i = 0; i < w.dim(); ++i) wcount *= p_;
    std::uint64_t zcount = 1;
    for (unsigned t = 0; t < s_; ++t) zcount *= p_;
    std::vector<std::uint32_t> coeff(w.dim(), 0);
    for (std::uint64_t wi = 0; wi < wcount; ++wi) {
        std::uint64_t tmp = wi;
        for (std::size_t i = 0; i < w.dim(); ++i) {
            coeff[i] = static_cast<std::uint32_t>(tmp % p_);
            tmp /= p_;
        }
        PElement g = identity_element();
        for (std::size_t i = 0; i < w.dim(); ++i)
            for (unsigned c = 0; c < r_; ++c)
                g.a[c] = static_cast<std::uint32_t>(
                    (g.a[c] + static_cast<std::uint64_t>(coeff[i]) * w.basis().at(i, c)) % p_);
        for (std::uint64_t zi = 0; zi < zcount; ++zi) {
            std::uint64_t t = zi;
            for (unsigned c = s_; c-- > 0;) {
                g.z[c] = static_cast<std::uint32_t>(t % p_);
                t /= p_;
            }
            bits.set(element_index(g));
        }
    }
    return bits;
}

std::size_t Class2CdResult::find_member(const Subspace& w) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].w == w) return i;
    return SIZE_MAX;
}

std::size_t Class2CdResult::min_member() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].w.dim() < members[best].w.dim()) best = i;
    return best;
}

std::size_t Class2CdResult::max_member() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].w.dim() > members[best].w.dim()) best = i;
    return best;
}

namespace {

// Echelon rank accumulator for bit-packed rows (p = 2). Rows are masks
// over up to 64 columns.
struct Gf2Echelon {
    std::uint64_t piv[64];
    unsigned rank = 0;
    void reset() { rank = 0; }
    void insert(std::uint64_t row) {
        while (row) {
            unsigned lead = 63 - static_cast<unsigned>(__builtin_clzll(row));
            bool found = false;
            for (unsigned i = 0; i < rank; ++i) {
                unsigned plead = 63 - static_cast<unsigned>(__builtin_clzll(piv[i]));
                if (plead == lead) {
                    row ^= piv[i];
                    found = true;
                    break;
                }
            }
            if (!found) {
                piv[rank++] = row;
                return;
            }
        }
    }
};

// Generic small-matrix rank over F_p with a caller-owned workspace.
struct FpEchelon {
    std::uint32_t p;
    unsigned cols;
    std::vector<std::uint32_t> rows;  // rank * cols
    unsigned rank = 0;
    std::vector<unsigned> lead;

    void reset() {
        rank = 0;
        rows.clear();
        lead.clear();
    }

    static std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
        std::uint64_t r = 1, b = a % p;
        std::uint32_t e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    }

    void insert(std::uint32_t* row) {
        for (unsigned i = 0; i < rank; ++i) {
            std::uint32_t f = row[lead[i]];
            if (!f) continue;
            const std::uint32_t* pr = rows.data() + static_cast<std::size_t>(i) * cols;
            for (unsigned c = 0; c < cols; ++c)
                row[c] = static_cast<std::uint32_t>(
                    (row[c] + static_cast<std::uint64_t>(p - f) * pr[c]) % p);
        }
        unsigned l = cols;
        for (unsigned c = 0; c < cols; ++c)
            if (row[c]) {
                l = c;
                break;
            }
        if (l == cols) return;
        std::uint32_t inv = inv_mod(row[l], p);
        for (unsigned c = 0; c < cols; ++c)
            row[c] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(row[c]) * inv % p);
        rows.insert(rows.end(), row, row + cols);
        lead.push_back(l);
        ++rank;
    }
};

}  // namespace

Class2CdResult cd_lattice_class2(const Class2Presentation& pres, std::uint64_t budget) {
    const unsigned r = pres.generator_rank(), s = pres.center_rank();
    const std::uint32_t p = pres.p();
    std::uint64_t total = subspace_count(r, p);
    if (total > budget)
        throw cap_exceeded("cd_lattice_class2: subspace count " + std::to_string(total) +
                           " exceeds the configured budget " + std::to_string(budget));

    unsigned best = 0;
    std::vector<std::pair<unsigned, std::vector<std::uint32_t>>> best_bases;  // (k, rows)

    if (p == 2 && r <= 64) {
        // Bit-packed scan. Column j of the t-th commutator slice, as a mask
        // over i: constraint row for basis vector u is XOR of these over
        // the set bits of u.
        std::vector<std::uint64_t> colmask(static_cast<std::size_t>(s) * r, 0);
        for (unsigned t = 0; t < s; ++t)
            for (unsigned j = 0; j < r; ++j) {
                std::uint64_t m = 0;
                for (unsigned i = 0; i < r; ++i)
                    if (pres.comm(i, j)[t]) m |= std::uint64_t{1} << i;
                colmask[static_cast<std::size_t>(t) * r + j] = m;
            }
        Gf2Echelon ech;
        for (unsigned k = 0; k <= r; ++k) {
            detail::scan_rref_bases(p, r, k, [&](const std::uint32_t* rows, unsigned kk) {
                ech.reset();
                for (unsigned bi = 0; bi < kk; ++bi) {
                    const std::uint32_t* u = rows + static_cast<std::size_t>(bi) * r;
                    for (unsigned t = 0; t < s; ++t) {
                        std::uint64_t crow = 0;
                        const std::uint64_t* cm = colmask.data() + static_cast<std::size_t>(t) * r;
                        for (unsigned j = 0; j < r; ++j)
                            if (u[j]) crow ^= cm[j];
                        if (crow) ech.insert(crow);
                    }
                }
                unsigned value = kk + (r - ech.rank);
                if (value < best) return;
                if (value > best) {
                    best = value;
                    best_bases.clear();
                }
                best_bases.emplace_back(
                    kk, std::vector<std::uint32_t>(rows, rows + static_cast<std::size_t>(kk) * r));
            });
        }
    } else {
        FpEchelon ech;
        ech.p = p;
        ech.cols = r;
        std::vector<std::uint32_t> crow(r);
        for (unsigned k = 0; k <= r; ++k) {
            detail::scan_rref_bases(p, r, k, [&](const std::uint32_t* rows, unsigned kk) {
                ech.reset();
                for (unsigned bi = 0; bi < kk; ++bi) {
                    const std::uint32_t* u = rows + static_cast<std::size_t>(bi) * r;
                    for (unsigned t = 0; t < s; ++t) {
                        for (unsigned i = 0; i < r; ++i) {
                            std::uint64_t acc = 0;
                            for (unsigned j = 0; j < r; ++j)
                                if (u[j]) acc += static_cast<std::uint64_t>(pres.comm(i, j)[t]) * u[j];
                            crow[i] = static_cast<std::uint32_t>(acc % p);
                        }
                        ech.insert(crow.data());
                    }
                }
                unsigned value = kk + (r - ech.rank);
                if (value < best) return;
                if (value > best) {
                    best = value;
                    best_bases.clear();
                }
                best_bases.emplace_back(
                    kk, std::vector<std::uint32_t>(rows, rows + static_cast<std::size_t>(kk) * r));
            });
        }
    }

    Class2CdResult res{&pres, 2 * s + best, {}, {}};
    res.members.reserve(best_bases.size());
    for (auto& [k, rows] : best_bases)
        res.members.push_back(CentralSubgroup{
            &pres, Subspace::from_rref(FpMatrix(p, k, r, std::move(rows)), r)});
    std::sort(res.members.begin(), res.members.end(),
              [](const CentralSubgroup& a, const CentralSubgroup& b) { return a.w < b.w; });

    // Postconditions, mirroring the brute engine: sublattice closure and
    // perp duality as an involution on members.
    const std::size_t m = res.members.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            if (res.find_member(sum(res.members[i].w, res.members[j].w)) == SIZE_MAX)
                throw invariant_violation("cd_lattice_class2: members " + std::to_string(i) +
                                          " and " + std::to_string(j) +
                                          " have a join outside the member set");
            if (res.find_member(intersect(res.members[i].w, res.members[j].w)) == SIZE_MAX)
                throw invariant_violation("cd_lattice_class2: members " + std::to_string(i) +
                                          " and " + std::to_string(j) +
                                          " have a meet outside the member set");
        }
    res.duality.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t di = res.find_member(pres.perp(res.members[i].w));
        if (di == SIZE_MAX)
            throw invariant_violation("cd_lattice_class2: perp of member " + std::to_string(i) +
                                      " is not a member");
        res.duality[i] = di;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (res.duality[res.duality[i]] != i)
            throw invariant_violation(
                "cd_lattice_class2: duality map is not an involution at member " +
                std::to_string(i));
    return res;
}

}  // namespace cdlat
