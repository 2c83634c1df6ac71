#include "cdlat/fp.hpp"

#include <algorithm>
#include <cstring>

namespace cdlat {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    // p is tiny here; Fermat via square-and-multiply.
    std::uint64_t r = 1, b = a % p;
    std::uint32_t e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

// In-place Gauss-Jordan. Returns rank; rows [0, rank) hold the RREF.
std::size_t rref_inplace(std::vector<std::uint32_t>& e, std::size_t rows,
                         std::size_t cols, std::uint32_t p) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && e[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(e[pivot * cols + j], e[r * cols + j]);
        std::uint32_t inv = inv_mod(e[r * cols + c], p);
        for (std::size_t j = c; j < cols; ++j)
            e[r * cols + j] = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(e[r * cols + j]) * inv % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            std::uint32_t f = e[i * cols + c];
            if (!f) continue;
            for (std::size_t j = c; j < cols; ++j) {
                std::uint64_t v = e[i * cols + j] +
                                  static_cast<std::uint64_t>(p - f) * e[r * cols + j] % p;
                e[i * cols + j] = static_cast<std::uint32_t>(v % p);
            }
        }
        ++r;
    }
    return r;
}

bool is_strict_rref(const FpMatrix& m) {
    std::size_t last_pivot = 0;
    bool first = true;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::size_t c = 0;
        while (c < m.cols() && m.at(i, c) == 0) ++c;
        if (c == m.cols()) return false;  // zero row
        if (m.at(i, c) != 1) return false;
        if (!first && c <= last_pivot) return false;
        for (std::size_t k = 0; k < m.rows(); ++k)
            if (k != i && m.at(k, c) != 0) return false;
        last_pivot = c;
        first = false;
    }
    return true;
}

}  // namespace

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), e_(rows * cols, 0) {
    if (!is_prime(p)) throw std::invalid_argument("FpMatrix: modulus is not prime");
}

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols,
                   std::vector<std::uint32_t> entries)
    : p_(p), rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (!is_prime(p)) throw std::invalid_argument("FpMatrix: modulus is not prime");
    if (e_.size() != rows * cols)
        throw std::invalid_argument("FpMatrix: entry count does not match shape");
    for (auto& v : e_) v %= p;
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FpMatrix rref(const FpMatrix& m) {
    std::vector<std::uint32_t> e = m.entries();
    std::size_t r = rref_inplace(e, m.rows(), m.cols(), m.p());
    e.resize(r * m.cols());
    return FpMatrix(m.p(), r, m.cols(), std::move(e));
}

std::size_t rank(const FpMatrix& m) {
    std::vector<std::uint32_t> e = m.entries();
    return rref_inplace(e, m.rows(), m.cols(), m.p());
}

Subspace Subspace::zero(std::uint32_t p, std::size_t ambient) {
    return Subspace(ambient, FpMatrix(p, 0, ambient));
}

Subspace Subspace::full(std::uint32_t p, std::size_t ambient) {
    return Subspace(ambient, FpMatrix::identity(p, ambient));
}

Subspace Subspace::from_generators(const FpMatrix& gens) {
    return Subspace(gens.cols(), rref(gens));
}

Subspace Subspace::from_rref(FpMatrix basis, std::size_t ambient) {
    if (basis.cols() != ambient)
        throw std::invalid_argument("Subspace: basis width does not match ambient dim");
    if (!is_strict_rref(basis))
        throw std::invalid_argument("Subspace: basis is not in strict RREF");
    return Subspace(ambient, std::move(basis));
}

bool Subspace::contains(std::span<const std::uint32_t> v) const {
    if (v.size() != ambient_)
        throw std::invalid_argument("Subspace::contains: wrong vector length");
    const std::uint32_t pm = p();
    std::vector<std::uint32_t> w(v.begin(), v.end());
    for (auto& x : w) x %= pm;
    // Reduce against the RREF basis.
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        std::size_t c = 0;
        while (basis_.at(i, c) == 0) ++c;
        std::uint32_t f = w[c];
        if (!f) continue;
        for (std::size_t j = c; j < ambient_; ++j)
            w[j] = static_cast<std::uint32_t>(
                (w[j] + static_cast<std::uint64_t>(pm - f) * basis_.at(i, j)) % pm);
    }
    return std::all_of(w.begin(), w.end(), [](std::uint32_t x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_dim() != ambient_ || other.p() != p())
        throw std::invalid_argument("Subspace::contains: ambient mismatch");
    if (other.dim() > dim()) return false;
    for (std::size_t i = 0; i < other.dim(); ++i)
        if (!contains(other.basis().row(i))) return false;
    return true;
}

Subspace nullspace(const FpMatrix& m) {
    const std::uint32_t p = m.p();
    const std::size_t n = m.cols();
    FpMatrix r = rref(m);
    // Pivot columns of the RREF.
    std::vector<std::size_t> pivot_col(r.rows());
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < r.rows(); ++i) {
        std::size_t c = 0;
        while (r.at(i, c) == 0) ++c;
        pivot_col[i] = c;
        is_pivot[c] = true;
    }
    std::vector<std::uint32_t> rows;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint32_t> v(n, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < r.rows(); ++i)
            v[pivot_col[i]] = (p - r.at(i, f)) % p;
        rows.insert(rows.end(), v.begin(), v.end());
    }
    std::size_t k = rows.size() / (n ? n : 1);
    if (n == 0) return Subspace::zero(p, 0);
    return Subspace::from_generators(FpMatrix(p, k, n, std::move(rows)));
}

namespace {

void check_compatible(const Subspace& a, const Subspace& b) {
    if (a.p() != b.p() || a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("subspace operands live in different ambient spaces");
}

// Matrix whose nullspace is exactly `s` (the dot-product annihilator).
FpMatrix constraints_of(const Subspace& s) {
    return dot_perp(s).basis();
}

}  // namespace

Subspace sum(const Subspace& a, const Subspace& b) {
    check_compatible(a, b);
    const std::size_t n = a.ambient_dim();
    std::vector<std::uint32_t> rows;
    rows.reserve((a.dim() + b.dim()) * n);
    rows.insert(rows.end(), a.basis().entries().begin(), a.basis().entries().end());
    rows.insert(rows.end(), b.basis().entries().begin(), b.basis().entries().end());
    return Subspace::from_generators(FpMatrix(a.p(), a.dim() + b.dim(), n, std::move(rows)));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    check_compatible(a, b);
    FpMatrix ca = constraints_of(a);
    FpMatrix cb = constraints_of(b);
    const std::size_t n = a.ambient_dim();
    std::vector<std::uint32_t> rows;
    rows.reserve((ca.rows() + cb.rows()) * n);
    rows.insert(rows.end(), ca.entries().begin(), ca.entries().end());
    rows.insert(rows.end(), cb.entries().begin(), cb.entries().end());
    return nullspace(FpMatrix(a.p(), ca.rows() + cb.rows(), n, std::move(rows)));
}

Subspace dot_perp(const Subspace& a) {
    return nullspace(a.basis());
}

namespace {

struct U128Checked {
    unsigned __int128 v;
    U128Checked operator+(U128Checked o) const {
        unsigned __int128 r = v + o.v;
        if (r < v) throw std::overflow_error("gaussian_binomial: 128-bit overflow");
        return {r};
    }
    U128Checked operator*(U128Checked o) const {
        if (v != 0 && o.v != 0) {
            unsigned __int128 r = v * o.v;
            if (r / v != o.v) throw std::overflow_error("gaussian_binomial: 128-bit overflow");
            return {r};
        }
        return {static_cast<unsigned __int128>(0)};
    }
};

}  // namespace

std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("gaussian_binomial: p is not prime");
    if (k > n) throw std::invalid_argument("gaussian_binomial: k > n");
    // q-Pascal recurrence: [n,k] = [n-1,k-1] + p^k [n-1,k].
    std::vector<U128Checked> row(k + 1, U128Checked{0});
    row[0].v = 1;
    for (unsigned i = 1; i <= n; ++i) {
        unsigned top = std::min(i, k);
        for (unsigned j = top; j >= 1; --j) {
            U128Checked pk{1};
            for (unsigned t = 0; t < j; ++t) pk = pk * U128Checked{p};
            row[j] = row[j - 1] + pk * row[j];
            if (j == 1) break;
        }
    }
    if (row[k].v > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("gaussian_binomial: result exceeds 64 bits");
    return static_cast<std::uint64_t>(row[k].v);
}

std::uint64_t subspace_count(unsigned n, std::uint32_t p) {
    std::uint64_t total = 0;
    for (unsigned k = 0; k <= n; ++k) {
        std::uint64_t g = gaussian_binomial(n, k, p);
        if (total > UINT64_MAX - g) throw std::overflow_error("subspace_count: overflow");
        total += g;
    }
    return total;
}

namespace detail {

void scan_rref_bases(std::uint32_t p, unsigned n, unsigned k,
                     const std::function<void(const std::uint32_t*, unsigned)>& leaf) {
    if (!is_prime(p)) throw std::invalid_argument("scan_rref_bases: p is not prime");
    if (k > n) throw std::invalid_argument("scan_rref_bases: k > n");
    if (k == 0) {
        leaf(nullptr, 0);
        return;
    }
    std::vector<unsigned> pivots(k);
    for (unsigned i = 0; i < k; ++i) pivots[i] = i;
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(k) * n);
    // Free positions for the current pivot pattern, as (row, col) pairs.
    std::vector<std::pair<unsigned, unsigned>> free_pos;

    auto emit_pattern = [&]() {
        std::fill(rows.begin(), rows.end(), 0u);
        std::vector<bool> is_pivot(n, false);
        for (unsigned i = 0; i < k; ++i) {
            rows[static_cast<std::size_t>(i) * n + pivots[i]] = 1;
            is_pivot[pivots[i]] = true;
        }
        free_pos.clear();
        for (unsigned i = 0; i < k; ++i)
            for (unsigned c = pivots[i] + 1; c < n; ++c)
                if (!is_pivot[c]) free_pos.emplace_back(i, c);
        // Odometer over all assignments of the free entries.
        const std::size_t nf = free_pos.size();
        std::vector<std::uint32_t> digits(nf, 0);
        for (;;) {
            leaf(rows.data(), k);
            std::size_t d = 0;
            while (d < nf) {
                auto [ri, ci] = free_pos[d];
                std::uint32_t v = rows[static_cast<std::size_t>(ri) * n + ci] + 1;
                if (v < p) {
                    rows[static_cast<std::size_t>(ri) * n + ci] = v;
                    break;
                }
                rows[static_cast<std::size_t>(ri) * n + ci] = 0;
                ++d;
            }
            if (d == nf) break;
        }
    };

    // Iterate pivot patterns (k-combinations of columns) in lex order.
    for (;;) {
        emit_pattern();
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && pivots[i] == n - k + i) --i;
        if (i < 0) break;
        ++pivots[i];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j)
            pivots[j] = pivots[j - 1] + 1;
    }
}

}  // namespace detail

void for_each_subspace(std::uint32_t p, unsigned n, unsigned k,
                       const std::function<void(const Subspace&)>& fn) {
    detail::scan_rref_bases(p, n, k, [&](const std::uint32_t* rows, unsigned kk) {
        std::vector<std::uint32_t> e(rows, rows + static_cast<std::size_t>(kk) * n);
        fn(Subspace::from_rref(FpMatrix(p, kk, n, std::move(e)), n));
    });
}

std::vector<Subspace> enumerate_subspaces(std::uint32_t p, unsigned n, unsigned k) {
    std::vector<Subspace> out;
    out.reserve(gaussian_binomial(n, k, p));
    for_each_subspace(p, n, k, [&](const Subspace& s) { out.push_back(s); });
    return out;
}

std::vector<Subspace> enumerate_all_subspaces(std::uint32_t p, unsigned n) {
    std::vector<Subspace> out;
    out.reserve(subspace_count(n, p));
    for (unsigned k = 0; k <= n; ++k)
        for_each_subspace(p, n, k, [&](const Subspace& s) { out.push_back(s); });
    return out;
}

Subspace scalar_pair_solutions(unsigned n, std::uint32_t p) {
    if (n < 2) throw std::invalid_argument("scalar_pair_solutions: need n >= 2");
    if (!is_prime(p)) throw std::invalid_argument("scalar_pair_solutions: p is not prime");
    const std::size_t unknowns = std::size_t{2} * n * n;
    // For each pair i < j (Z = E_ij - E_ji) the relation A Z = Z B gives
    // n^2 equations, one per output entry (a, b):
    //   A[a][i] d(b,j) - A[a][j] d(b,i) - d(a,i) B[j][b] + d(a,j) B[i][b] = 0.
    std::vector<std::uint32_t> rows;
    auto aidx = [&](unsigned r, unsigned c) { return static_cast<std::size_t>(r) * n + c; };
    auto bidx = [&](unsigned r, unsigned c) {
        return static_cast<std::size_t>(n) * n + static_cast<std::size_t>(r) * n + c;
    };
    std::size_t nrows = 0;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i + 1; j < n; ++j)
            for (unsigned a = 0; a < n; ++a)
                for (unsigned b = 0; b < n; ++b) {
                    std::vector<std::uint32_t> row(unknowns, 0);
                    if (b == j) row[aidx(a, i)] = (row[aidx(a, i)] + 1) % p;
                    if (b == i) row[aidx(a, j)] = (row[aidx(a, j)] + p - 1) % p;
                    if (a == i) row[bidx(j, b)] = (row[bidx(j, b)] + p - 1) % p;
                    if (a == j) row[bidx(i, b)] = (row[bidx(i, b)] + 1) % p;
                    rows.insert(rows.end(), row.begin(), row.end());
                    ++nrows;
                }
    return nullspace(FpMatrix(p, nrows, unknowns, std::move(rows)));
}

unsigned scalar_pair_solution_dim(unsigned n, std::uint32_t p) {
    return static_cast<unsigned>(scalar_pair_solutions(n, p).dim());
}

}  // namespace cdlat
