#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cdlat {

/// Fixed-length dynamic bitset with value semantics.
///
/// Used for element sets of small finite groups (order <= a few thousand).
/// The total order sorts first by popcount, then by word content, which
/// gives a deterministic canonical ordering for families of subgroups.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool operator==(const Bitset& o) const = default;

    /// Canonical order: by cardinality, then by word content.
    std::strong_ordering operator<=>(const Bitset& o) const {
        if (auto c = count() <=> o.count(); c != 0) return c;
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (auto c = words_[i] <=> o.words_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    /// Invokes fn(i) for every set bit, in ascending index order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
                fn(wi * 64 + b);
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::size_t h = nbits_;
        for (std::uint64_t w : words_)
            h ^= static_cast<std::size_t>(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace cdlat
