#pragma once

// Test-only oracles, kept independent of the CSR kernels they check: dense
// triple-loop multiply, dense add, dense symmetric permutation, and a dense
// contribution-pattern tracker that mirrors what a merge kernel must store
// (including explicit zeros from cancellation).

#include <cmath>
#include <cstdint>
#include <vector>

#include "spgsim/csr.hpp"

namespace spgsim::testing {

struct DenseOracle {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<double> value;   // row-major
    std::vector<char> present;   // stored-entry pattern

    static DenseOracle from_csr(const CsrMatrix& m) {
        DenseOracle d;
        d.nrows = m.nrows;
        d.ncols = m.ncols;
        d.value.assign(static_cast<std::size_t>(m.nrows * m.ncols), 0.0);
        d.present.assign(static_cast<std::size_t>(m.nrows * m.ncols), 0);
        for (index_t i = 0; i < m.nrows; ++i)
            for (index_t t = m.rowptr[static_cast<std::size_t>(i)];
                 t < m.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
                const auto at = static_cast<std::size_t>(i * m.ncols + m.colind[static_cast<std::size_t>(t)]);
                d.value[at] = m.values[static_cast<std::size_t>(t)];
                d.present[at] = 1;
            }
        return d;
    }

    double at(index_t i, index_t j) const { return value[static_cast<std::size_t>(i * ncols + j)]; }
    bool has(index_t i, index_t j) const { return present[static_cast<std::size_t>(i * ncols + j)] != 0; }
};

// c_ij = sum_k a_ik b_kj in ascending k; entry present iff some k contributes
// a stored a_ik and b_kj pair (explicit zeros included).
inline DenseOracle dense_matmul(const DenseOracle& a, const DenseOracle& b) {
    DenseOracle c;
    c.nrows = a.nrows;
    c.ncols = b.ncols;
    c.value.assign(static_cast<std::size_t>(c.nrows * c.ncols), 0.0);
    c.present.assign(static_cast<std::size_t>(c.nrows * c.ncols), 0);
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t k = 0; k < a.ncols; ++k) {
            if (!a.has(i, k)) continue;
            for (index_t j = 0; j < b.ncols; ++j) {
                if (!b.has(k, j)) continue;
                const auto at = static_cast<std::size_t>(i * c.ncols + j);
                c.value[at] += a.at(i, k) * b.at(k, j);
                c.present[at] = 1;
            }
        }
    return c;
}

inline DenseOracle dense_add(const DenseOracle& a, const DenseOracle& b) {
    DenseOracle c = a;
    for (std::size_t t = 0; t < c.value.size(); ++t) {
        c.value[t] += b.value[t];
        c.present[t] = c.present[t] || b.present[t];
    }
    return c;
}

inline DenseOracle dense_permute_symmetric(const DenseOracle& a, const std::vector<index_t>& p) {
    DenseOracle c;
    c.nrows = a.nrows;
    c.ncols = a.ncols;
    c.value.assign(a.value.size(), 0.0);
    c.present.assign(a.present.size(), 0);
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t j = 0; j < a.ncols; ++j) {
            if (!a.has(i, j)) continue;
            const auto at = static_cast<std::size_t>(p[static_cast<std::size_t>(i)] * a.ncols +
                                                     p[static_cast<std::size_t>(j)]);
            c.value[at] = a.at(i, j);
            c.present[at] = 1;
        }
    return c;
}

// Stored pattern identical and values within the relative tolerance.
inline bool matches(const CsrMatrix& m, const DenseOracle& d, double rel_tol) {
    if (m.nrows != d.nrows || m.ncols != d.ncols) return false;
    const DenseOracle got = DenseOracle::from_csr(m);
    if (got.present != d.present) return false;
    for (std::size_t t = 0; t < d.value.size(); ++t) {
        const double x = got.value[t];
        const double y = d.value[t];
        if (x == y) continue;
        if (std::abs(x - y) > rel_tol * std::max(std::abs(x), std::abs(y))) return false;
    }
    return true;
}

}  // namespace spgsim::testing
