#pragma once

#include <cstdint>
#include <vector>

#include "spgsim/errors.hpp"

namespace spgsim {

using index_t = std::int64_t;

/// Compressed sparse row matrix with 64-bit real values.
///
/// Canonical form: rowptr[0] == 0, rowptr non-decreasing, rowptr[nrows] ==
/// nnz, column indices strictly increasing within each row and in
/// [0, ncols). Explicit zeros (e.g. produced by cancellation) are legal
/// stored entries; no kernel drops them implicitly.
struct CsrMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> rowptr{0};
    std::vector<index_t> colind;
    std::vector<double> values;

    index_t nnz() const { return rowptr.empty() ? 0 : rowptr.back(); }

    static CsrMatrix zeros(index_t nrows, index_t ncols);
    static CsrMatrix identity(index_t n);

    // Throws Error if any canonical-form invariant is violated.
    void check_canonical() const;
    bool is_canonical() const;

    bool operator==(const CsrMatrix&) const = default;
};

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

// Builds a canonical matrix from coordinate triplets; duplicate coordinates
// are summed (a duplicate sum of zero is kept as an explicit zero).
CsrMatrix from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> entries);

/// Bijection on [0, n).
struct Permutation {
    index_t n = 0;
    std::vector<index_t> map;

    static Permutation identity(index_t n);
    static Permutation reversal(index_t n);
    static Permutation random(index_t n, std::uint64_t seed);

    Permutation inverse() const;
    void check_valid() const;  // throws ParameterError if not a bijection
};

// C = A * B via sequential Gustavson row merge. The accumulator is a dense
// scratch row over B's columns; contributions to each output entry are summed
// in ascending order of A's column index, so results are reproducible.
// Explicit zeros from cancellation are retained.
CsrMatrix spgemm_local(const CsrMatrix& a, const CsrMatrix& b);

// C = A + B, structural union of patterns; cancellation zeros retained.
CsrMatrix spgeam(const CsrMatrix& a, const CsrMatrix& b);

// result[p(i), p(j)] = a[i, j]; a must be square with p.n == a.nrows.
CsrMatrix permute_symmetric(const CsrMatrix& a, const Permutation& p);

// Scales every nonzero column to sum to 1. Columns whose stored values sum
// to exactly zero are left untouched.
CsrMatrix column_normalize(const CsrMatrix& a);

// Removes entries with value strictly below threshold (signed comparison).
CsrMatrix prune(const CsrMatrix& a, double threshold);

// Replaces each stored value v by v^exponent; pattern unchanged.
CsrMatrix elementwise_power(const CsrMatrix& a, double exponent);

// --- synthetic generators -------------------------------------------------

// Each of the n*n cells is present independently with probability `density`;
// values uniform in (0, 1]. Deterministic for a fixed seed.
CsrMatrix gen_erdos_renyi(index_t n, double density, std::uint64_t seed);

// Band matrix: entries at |i - j| <= halfwidth, seeded values in (0, 1].
CsrMatrix gen_banded(index_t n, index_t halfwidth, std::uint64_t seed);

// Erdos-Renyi blocks on the diagonal; block boundaries follow the same
// ceiling-division rule as row partitioning, so nblocks == P aligns the
// pattern with a rows1d partition.
CsrMatrix gen_block_diagonal(index_t n, index_t nblocks, double density, std::uint64_t seed);

// First row, first column, and diagonal populated with seeded values.
CsrMatrix gen_arrowhead(index_t n, std::uint64_t seed);

// Exactly `row_nnz` entries per row at column stride n / row_nnz, phase i.
// Every aligned block then holds exactly its proportional share of nonzeros,
// which makes per-tile counts exact for volume predictions. Requires
// n % row_nnz == 0.
CsrMatrix gen_uniform_stride(index_t n, index_t row_nnz);

// Vertical concatenation of row slices with identical column counts; the
// inverse of slicing a tile into contiguous row blocks.
CsrMatrix vconcat(const std::vector<const CsrMatrix*>& slices);

// --- comparison helpers ----------------------------------------------------

bool pattern_equal(const CsrMatrix& a, const CsrMatrix& b);

// Pattern equality plus |x - y| <= rel_tol * max(|x|, |y|) per entry.
bool allclose(const CsrMatrix& a, const CsrMatrix& b, double rel_tol);

}  // namespace spgsim
