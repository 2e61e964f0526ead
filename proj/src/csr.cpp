#include "spgsim/csr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spgsim/rng.hpp"

namespace spgsim {

CsrMatrix CsrMatrix::zeros(index_t nrows, index_t ncols) {
    CsrMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    m.rowptr.assign(static_cast<std::size_t>(nrows) + 1, 0);
    return m;
}

CsrMatrix CsrMatrix::identity(index_t n) {
    CsrMatrix m = zeros(n, n);
    m.colind.resize(static_cast<std::size_t>(n));
    m.values.assign(static_cast<std::size_t>(n), 1.0);
    for (index_t i = 0; i < n; ++i) {
        m.rowptr[static_cast<std::size_t>(i) + 1] = i + 1;
        m.colind[static_cast<std::size_t>(i)] = i;
    }
    return m;
}

void CsrMatrix::check_canonical() const {
    if (nrows < 0 || ncols < 0) throw Error("negative dimension");
    if (rowptr.size() != static_cast<std::size_t>(nrows) + 1)
        throw Error("rowptr length != nrows+1");
    if (rowptr.front() != 0) throw Error("rowptr[0] != 0");
    if (colind.size() != values.size()) throw Error("colind/values length mismatch");
    if (rowptr.back() != static_cast<index_t>(colind.size()))
        throw Error("rowptr[nrows] != nnz");
    for (index_t i = 0; i < nrows; ++i) {
        const auto lo = rowptr[static_cast<std::size_t>(i)];
        const auto hi = rowptr[static_cast<std::size_t>(i) + 1];
        if (lo > hi) throw Error("rowptr not non-decreasing at row " + std::to_string(i));
        for (index_t t = lo; t < hi; ++t) {
            const auto j = colind[static_cast<std::size_t>(t)];
            if (j < 0 || j >= ncols)
                throw Error("column index out of range in row " + std::to_string(i));
            if (t > lo && colind[static_cast<std::size_t>(t) - 1] >= j)
                throw Error("columns not strictly increasing in row " + std::to_string(i));
        }
    }
}

bool CsrMatrix::is_canonical() const {
    try {
        check_canonical();
        return true;
    } catch (const Error&) {
        return false;
    }
}

CsrMatrix from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> entries) {
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols)
            throw ParameterError("triplet coordinate out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m = CsrMatrix::zeros(nrows, ncols);
    m.colind.reserve(entries.size());
    m.values.reserve(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        const index_t r = entries[i].row;
        const index_t c = entries[i].col;
        double sum = 0.0;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
            sum += entries[i].value;
            ++i;
        }
        m.colind.push_back(c);
        m.values.push_back(sum);
        m.rowptr[static_cast<std::size_t>(r) + 1]++;
    }
    for (index_t r = 0; r < nrows; ++r)
        m.rowptr[static_cast<std::size_t>(r) + 1] += m.rowptr[static_cast<std::size_t>(r)];
    return m;
}

Permutation Permutation::identity(index_t n) {
    Permutation p;
    p.n = n;
    p.map.resize(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) p.map[static_cast<std::size_t>(i)] = i;
    return p;
}

Permutation Permutation::reversal(index_t n) {
    Permutation p = identity(n);
    std::reverse(p.map.begin(), p.map.end());
    return p;
}

Permutation Permutation::random(index_t n, std::uint64_t seed) {
    Permutation p = identity(n);
    SplitMix64 rng(seed);
    for (index_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<index_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p.map[static_cast<std::size_t>(i)], p.map[static_cast<std::size_t>(j)]);
    }
    return p;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.n = n;
    inv.map.assign(static_cast<std::size_t>(n), 0);
    for (index_t i = 0; i < n; ++i) inv.map[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = i;
    return inv;
}

void Permutation::check_valid() const {
    if (static_cast<index_t>(map.size()) != n) throw ParameterError("permutation length != n");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const index_t v : map) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw ParameterError("permutation is not a bijection on [0,n)");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

CsrMatrix spgemm_local(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.ncols != b.nrows)
        throw DimensionError("spgemm: a.ncols=" + std::to_string(a.ncols) +
                             " != b.nrows=" + std::to_string(b.nrows));
    CsrMatrix c = CsrMatrix::zeros(a.nrows, b.ncols);
    std::vector<double> acc(static_cast<std::size_t>(b.ncols), 0.0);
    std::vector<index_t> mark(static_cast<std::size_t>(b.ncols), -1);
    std::vector<index_t> touched;
    for (index_t i = 0; i < a.nrows; ++i) {
        touched.clear();
        for (index_t t = a.rowptr[static_cast<std::size_t>(i)];
             t < a.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
            const index_t k = a.colind[static_cast<std::size_t>(t)];
            const double av = a.values[static_cast<std::size_t>(t)];
            for (index_t u = b.rowptr[static_cast<std::size_t>(k)];
                 u < b.rowptr[static_cast<std::size_t>(k) + 1]; ++u) {
                const index_t j = b.colind[static_cast<std::size_t>(u)];
                if (mark[static_cast<std::size_t>(j)] != i) {
                    mark[static_cast<std::size_t>(j)] = i;
                    acc[static_cast<std::size_t>(j)] = 0.0;
                    touched.push_back(j);
                }
                acc[static_cast<std::size_t>(j)] += av * b.values[static_cast<std::size_t>(u)];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (const index_t j : touched) {
            c.colind.push_back(j);
            c.values.push_back(acc[static_cast<std::size_t>(j)]);
        }
        c.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(c.colind.size());
    }
    return c;
}

CsrMatrix spgeam(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.nrows != b.nrows || a.ncols != b.ncols)
        throw DimensionError("spgeam: shape mismatch");
    CsrMatrix c = CsrMatrix::zeros(a.nrows, a.ncols);
    c.colind.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
    c.values.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
    for (index_t i = 0; i < a.nrows; ++i) {
        index_t ta = a.rowptr[static_cast<std::size_t>(i)];
        index_t tb = b.rowptr[static_cast<std::size_t>(i)];
        const index_t ea = a.rowptr[static_cast<std::size_t>(i) + 1];
        const index_t eb = b.rowptr[static_cast<std::size_t>(i) + 1];
        while (ta < ea || tb < eb) {
            index_t ja = ta < ea ? a.colind[static_cast<std::size_t>(ta)] : a.ncols;
            index_t jb = tb < eb ? b.colind[static_cast<std::size_t>(tb)] : a.ncols;
            if (ja < jb) {
                c.colind.push_back(ja);
                c.values.push_back(a.values[static_cast<std::size_t>(ta++)]);
            } else if (jb < ja) {
                c.colind.push_back(jb);
                c.values.push_back(b.values[static_cast<std::size_t>(tb++)]);
            } else {
                c.colind.push_back(ja);
                c.values.push_back(a.values[static_cast<std::size_t>(ta++)] +
                                   b.values[static_cast<std::size_t>(tb++)]);
            }
        }
        c.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(c.colind.size());
    }
    return c;
}

CsrMatrix permute_symmetric(const CsrMatrix& a, const Permutation& p) {
    if (a.nrows != a.ncols) throw DimensionError("permute_symmetric: matrix not square");
    if (p.n != a.nrows) throw DimensionError("permute_symmetric: permutation size mismatch");
    const Permutation inv = p.inverse();
    CsrMatrix r = CsrMatrix::zeros(a.nrows, a.ncols);
    r.colind.reserve(static_cast<std::size_t>(a.nnz()));
    r.values.reserve(static_cast<std::size_t>(a.nnz()));
    std::vector<std::pair<index_t, double>> row;
    for (index_t out = 0; out < a.nrows; ++out) {
        const index_t src = inv.map[static_cast<std::size_t>(out)];
        row.clear();
        for (index_t t = a.rowptr[static_cast<std::size_t>(src)];
             t < a.rowptr[static_cast<std::size_t>(src) + 1]; ++t) {
            row.emplace_back(p.map[static_cast<std::size_t>(a.colind[static_cast<std::size_t>(t)])],
                             a.values[static_cast<std::size_t>(t)]);
        }
        std::sort(row.begin(), row.end());
        for (const auto& [j, v] : row) {
            r.colind.push_back(j);
            r.values.push_back(v);
        }
        r.rowptr[static_cast<std::size_t>(out) + 1] = static_cast<index_t>(r.colind.size());
    }
    return r;
}

CsrMatrix column_normalize(const CsrMatrix& a) {
    std::vector<double> colsum(static_cast<std::size_t>(a.ncols), 0.0);
    for (std::size_t t = 0; t < a.colind.size(); ++t)
        colsum[static_cast<std::size_t>(a.colind[t])] += a.values[t];
    CsrMatrix r = a;
    for (std::size_t t = 0; t < r.colind.size(); ++t) {
        const double s = colsum[static_cast<std::size_t>(r.colind[t])];
        if (s != 0.0) r.values[t] /= s;
    }
    return r;
}

CsrMatrix prune(const CsrMatrix& a, double threshold) {
    if (threshold < 0.0) throw ParameterError("prune: negative threshold");
    CsrMatrix r = CsrMatrix::zeros(a.nrows, a.ncols);
    for (index_t i = 0; i < a.nrows; ++i) {
        for (index_t t = a.rowptr[static_cast<std::size_t>(i)];
             t < a.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
            if (a.values[static_cast<std::size_t>(t)] < threshold) continue;
            r.colind.push_back(a.colind[static_cast<std::size_t>(t)]);
            r.values.push_back(a.values[static_cast<std::size_t>(t)]);
        }
        r.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(r.colind.size());
    }
    return r;
}

CsrMatrix elementwise_power(const CsrMatrix& a, double exponent) {
    CsrMatrix r = a;
    for (double& v : r.values) v = std::pow(v, exponent);
    return r;
}

CsrMatrix gen_erdos_renyi(index_t n, double density, std::uint64_t seed) {
    if (n < 0) throw ParameterError("gen_erdos_renyi: negative n");
    if (!(density > 0.0) || density > 1.0)
        throw ParameterError("gen_erdos_renyi: density must be in (0, 1]");
    SplitMix64 rng(seed);
    const double logq = std::log1p(-density);  // -inf at density == 1, skip becomes 0
    const index_t ncells = n * n;
    CsrMatrix m = CsrMatrix::zeros(n, n);
    index_t cell = -1;
    while (true) {
        const double u = rng.uniform01();
        const index_t skip =
            density == 1.0 ? 0 : static_cast<index_t>(std::floor(std::log1p(-u) / logq));
        cell += 1 + skip;
        if (cell >= ncells) break;
        m.colind.push_back(cell % n);
        m.values.push_back(rng.uniform_pos());
        m.rowptr[static_cast<std::size_t>(cell / n) + 1]++;
    }
    for (index_t r = 0; r < n; ++r)
        m.rowptr[static_cast<std::size_t>(r) + 1] += m.rowptr[static_cast<std::size_t>(r)];
    return m;
}

CsrMatrix gen_banded(index_t n, index_t halfwidth, std::uint64_t seed) {
    if (n < 0 || halfwidth < 0) throw ParameterError("gen_banded: negative parameter");
    SplitMix64 rng(seed);
    CsrMatrix m = CsrMatrix::zeros(n, n);
    for (index_t i = 0; i < n; ++i) {
        const index_t lo = std::max<index_t>(0, i - halfwidth);
        const index_t hi = std::min<index_t>(n - 1, i + halfwidth);
        for (index_t j = lo; j <= hi; ++j) {
            m.colind.push_back(j);
            m.values.push_back(rng.uniform_pos());
        }
        m.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(m.colind.size());
    }
    return m;
}

CsrMatrix gen_block_diagonal(index_t n, index_t nblocks, double density, std::uint64_t seed) {
    if (nblocks <= 0) throw ParameterError("gen_block_diagonal: nblocks must be positive");
    if (!(density > 0.0) || density > 1.0)
        throw ParameterError("gen_block_diagonal: density must be in (0, 1]");
    // Same ceiling-division boundaries as partitioning: first (n % nblocks)
    // blocks get one extra row.
    std::vector<Triplet> trips;
    index_t start = 0;
    for (index_t b = 0; b < nblocks; ++b) {
        const index_t size = n / nblocks + (b < n % nblocks ? 1 : 0);
        if (size > 0) {
            CsrMatrix blk = gen_erdos_renyi(size, density, seed + static_cast<std::uint64_t>(b));
            for (index_t i = 0; i < blk.nrows; ++i)
                for (index_t t = blk.rowptr[static_cast<std::size_t>(i)];
                     t < blk.rowptr[static_cast<std::size_t>(i) + 1]; ++t)
                    trips.push_back({start + i, start + blk.colind[static_cast<std::size_t>(t)],
                                     blk.values[static_cast<std::size_t>(t)]});
        }
        start += size;
    }
    return from_triplets(n, n, std::move(trips));
}

CsrMatrix gen_arrowhead(index_t n, std::uint64_t seed) {
    if (n <= 0) throw ParameterError("gen_arrowhead: n must be positive");
    SplitMix64 rng(seed);
    std::vector<Triplet> trips;
    for (index_t j = 0; j < n; ++j) trips.push_back({0, j, rng.uniform_pos()});
    for (index_t i = 1; i < n; ++i) trips.push_back({i, 0, rng.uniform_pos()});
    for (index_t i = 1; i < n; ++i) trips.push_back({i, i, rng.uniform_pos()});
    return from_triplets(n, n, std::move(trips));
}

CsrMatrix gen_uniform_stride(index_t n, index_t row_nnz) {
    if (row_nnz <= 0 || n % row_nnz != 0)
        throw ParameterError("gen_uniform_stride: row_nnz must divide n");
    const index_t stride = n / row_nnz;
    CsrMatrix m = CsrMatrix::zeros(n, n);
    std::vector<index_t> cols(static_cast<std::size_t>(row_nnz));
    for (index_t i = 0; i < n; ++i) {
        for (index_t t = 0; t < row_nnz; ++t) cols[static_cast<std::size_t>(t)] = (i + t * stride) % n;
        std::sort(cols.begin(), cols.end());
        for (const index_t j : cols) {
            m.colind.push_back(j);
            m.values.push_back(1.0 + static_cast<double>((i + j) % 7) * 0.125);
        }
        m.rowptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(m.colind.size());
    }
    return m;
}

CsrMatrix vconcat(const std::vector<const CsrMatrix*>& slices) {
    if (slices.empty()) return {};
    CsrMatrix out;
    out.ncols = slices.front()->ncols;
    out.rowptr.assign(1, 0);
    for (const CsrMatrix* s : slices) {
        if (s->ncols != out.ncols) throw DimensionError("vconcat: column count mismatch");
        const index_t base = out.nnz();
        for (index_t i = 0; i < s->nrows; ++i)
            out.rowptr.push_back(base + s->rowptr[static_cast<std::size_t>(i) + 1]);
        out.colind.insert(out.colind.end(), s->colind.begin(), s->colind.end());
        out.values.insert(out.values.end(), s->values.begin(), s->values.end());
        out.nrows += s->nrows;
    }
    return out;
}

bool pattern_equal(const CsrMatrix& a, const CsrMatrix& b) {
    return a.nrows == b.nrows && a.ncols == b.ncols && a.rowptr == b.rowptr &&
           a.colind == b.colind;
}

bool allclose(const CsrMatrix& a, const CsrMatrix& b, double rel_tol) {
    if (!pattern_equal(a, b)) return false;
    for (std::size_t t = 0; t < a.values.size(); ++t) {
        const double x = a.values[t];
        const double y = b.values[t];
        if (x == y) continue;
        if (std::abs(x - y) > rel_tol * std::max(std::abs(x), std::abs(y))) return false;
    }
    return true;
}

}  // namespace spgsim
