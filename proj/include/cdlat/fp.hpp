#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cdlat {

bool is_prime(std::uint32_t n);

/// Dense matrix over the prime field F_p. Entries are residues in [0, p).
/// Values are immutable in spirit: operations return new matrices.
class FpMatrix {
public:
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols,
             std::vector<std::uint32_t> entries);

    static FpMatrix identity(std::uint32_t p, std::size_t n);

    std::uint32_t p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::uint32_t v) { e_[i * cols_ + j] = v % p_; }

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {e_.data() + i * cols_, cols_};
    }
    const std::vector<std::uint32_t>& entries() const { return e_; }

    bool operator==(const FpMatrix&) const = default;
    auto operator<=>(const FpMatrix&) const = default;

private:
    std::uint32_t p_;
    std::size_t rows_, cols_;
    std::vector<std::uint32_t> e_;
};

/// Reduced row echelon form with zero rows dropped. The result is the
/// canonical representative of the row space.
FpMatrix rref(const FpMatrix& m);

std::size_t rank(const FpMatrix& m);

/// A subspace of F_p^m, stored as its RREF basis (no zero rows). Two
/// Subspace values compare equal exactly when they span the same set.
class Subspace {
public:
    static Subspace zero(std::uint32_t p, std::size_t ambient);
    static Subspace full(std::uint32_t p, std::size_t ambient);
    /// Row space of an arbitrary generator matrix.
    static Subspace from_generators(const FpMatrix& gens);
    /// Wraps a matrix that is already in strict RREF (validated).
    static Subspace from_rref(FpMatrix basis, std::size_t ambient);

    std::uint32_t p() const { return basis_.p(); }
    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const FpMatrix& basis() const { return basis_; }

    bool contains(std::span<const std::uint32_t> v) const;
    bool contains(const Subspace& other) const;

    bool operator==(const Subspace&) const = default;
    /// Canonical order: ambient, then dimension, then basis entries.
    auto operator<=>(const Subspace&) const = default;

private:
    Subspace(std::size_t ambient, FpMatrix basis)
        : ambient_(ambient), basis_(std::move(basis)) {}
    std::size_t ambient_;
    FpMatrix basis_;
};

/// Solution space {v : m v = 0}.
Subspace nullspace(const FpMatrix& m);

/// Subspace sum (join) and intersection (meet). Both arguments must live
/// in the same ambient space over the same prime.
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);

/// Orthogonal complement under the standard dot product.
Subspace dot_perp(const Subspace& a);

/// Number of k-dimensional subspaces of F_p^n, as an exact integer.
/// Throws std::overflow_error if the count does not fit in 64 bits.
std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint32_t p);

/// Total number of subspaces of F_p^n (all dimensions).
std::uint64_t subspace_count(unsigned n, std::uint32_t p);

/// Streams every k-dimensional subspace of F_p^n exactly once, by pivot
/// pattern, in a fixed deterministic order.
void for_each_subspace(std::uint32_t p, unsigned n, unsigned k,
                       const std::function<void(const Subspace&)>& fn);

std::vector<Subspace> enumerate_subspaces(std::uint32_t p, unsigned n, unsigned k);
std::vector<Subspace> enumerate_all_subspaces(std::uint32_t p, unsigned n);

/// Solution space of the system A Z = Z B over all elementary
/// anti-symmetric matrices Z, in the 2n^2 unknown entries of (A, B).
/// The basis vectors are laid out as (vec(A), vec(B)), row-major.
Subspace scalar_pair_solutions(unsigned n, std::uint32_t p);

/// Dimension of the above solution space. Equals 1 for n >= 3 (the
/// scalar pairs A = B = lambda I); equals n^2 for n = 2.
unsigned scalar_pair_solution_dim(unsigned n, std::uint32_t p);

namespace detail {

/// Low-level streaming enumeration of RREF bases: calls leaf(rows, k)
/// where rows is a flat k*n array of residues forming a strict RREF
/// matrix. The buffer is reused between calls.
void scan_rref_bases(std::uint32_t p, unsigned n, unsigned k,
                     const std::function<void(const std::uint32_t*, unsigned)>& leaf);

}  // namespace detail

}  // namespace cdlat
