#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spgsim/csr.hpp"

using namespace spgsim;
using testing::DenseOracle;

namespace {

CsrMatrix mat2x2(double a00, double a01, double a10, double a11) {
    std::vector<Triplet> t;
    if (a00 != 0) t.push_back({0, 0, a00});
    if (a01 != 0) t.push_back({0, 1, a01});
    if (a10 != 0) t.push_back({1, 0, a10});
    if (a11 != 0) t.push_back({1, 1, a11});
    return from_triplets(2, 2, t);
}

}  // namespace

TEST_CASE("spgemm_local identity and frozen 2x2 oracle values") {
    const CsrMatrix a = gen_erdos_renyi(3, 0.7, 11);
    const CsrMatrix c = spgemm_local(CsrMatrix::identity(3), a);
    CHECK(c == a);

    // Dense oracle on A=[[1,0],[0,2]], B=[[0,3],[4,0]]: row0 = 1*[0,3],
    // row1 = 2*[4,0]; frozen expected C = [[0,3],[8,0]].
    const CsrMatrix prod = spgemm_local(mat2x2(1, 0, 0, 2), mat2x2(0, 3, 4, 0));
    const CsrMatrix expected = from_triplets(2, 2, {{0, 1, 3.0}, {1, 0, 8.0}});
    CHECK(prod == expected);
}

TEST_CASE("spgemm_local empty row annihilates") {
    CsrMatrix a = from_triplets(3, 3, {{0, 1, 2.0}, {2, 0, 1.0}});  // row 1 empty
    const CsrMatrix b = gen_erdos_renyi(3, 1.0, 5);
    const CsrMatrix c = spgemm_local(a, b);
    CHECK(c.rowptr[1] == c.rowptr[2]);  // row 1 of C empty
}

TEST_CASE("spgemm_local dimension mismatch") {
    CHECK_THROWS_AS(spgemm_local(CsrMatrix::zeros(2, 3), CsrMatrix::zeros(2, 2)),
                    DimensionError);
}

TEST_CASE("spgemm_local matches the dense triple-loop oracle") {
    for (const auto seed : {1u, 2u, 3u}) {
        const CsrMatrix a = gen_erdos_renyi(40, 0.15, seed);
        const CsrMatrix b = gen_erdos_renyi(40, 0.15, seed + 100);
        const auto oracle =
            testing::dense_matmul(DenseOracle::from_csr(a), DenseOracle::from_csr(b));
        const CsrMatrix c = spgemm_local(a, b);
        c.check_canonical();
        CHECK(testing::matches(c, oracle, 1e-12));
    }
    // rectangular: crop B to 17 columns
    const CsrMatrix a = gen_erdos_renyi(24, 0.2, 9);
    const CsrMatrix b = gen_erdos_renyi(24, 0.2, 10);
    CsrMatrix bc = CsrMatrix::zeros(24, 17);
    for (index_t i = 0; i < 24; ++i) {
        for (index_t t = b.rowptr[i]; t < b.rowptr[i + 1]; ++t)
            if (b.colind[t] < 17) {
                bc.colind.push_back(b.colind[t]);
                bc.values.push_back(b.values[t]);
            }
        bc.rowptr[i + 1] = static_cast<index_t>(bc.colind.size());
    }
    const auto oracle = testing::dense_matmul(DenseOracle::from_csr(a), DenseOracle::from_csr(bc));
    CHECK(testing::matches(spgemm_local(a, bc), oracle, 1e-12));
}

TEST_CASE("spgemm retains explicit zeros from cancellation") {
    // A = [[1, 1]], B = [[1],[-1]] -> C = [[0]] stored explicitly.
    const CsrMatrix a = from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
    const CsrMatrix b = from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, -1.0}});
    const CsrMatrix c = spgemm_local(a, b);
    CHECK(c.nnz() == 1);
    CHECK(c.values[0] == 0.0);
}

TEST_CASE("spgeam identity, frozen dense-add value, cancellation") {
    const CsrMatrix a = gen_erdos_renyi(10, 0.3, 21);
    CHECK(spgeam(a, CsrMatrix::zeros(10, 10)) == a);

    // Dense-add oracle: [[1,0],[0,1]] + [[0,2],[0,1]] = [[1,2],[0,2]].
    const CsrMatrix s = spgeam(mat2x2(1, 0, 0, 1), mat2x2(0, 2, 0, 1));
    CHECK(s == from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 2.0}}));

    // A + (-A): pattern preserved, stored values all 0.0.
    CsrMatrix neg = a;
    for (double& v : neg.values) v = -v;
    const CsrMatrix z = spgeam(a, neg);
    CHECK(pattern_equal(z, a));
    for (const double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("spgeam shape mismatch") {
    CHECK_THROWS_AS(spgeam(CsrMatrix::zeros(2, 2), CsrMatrix::zeros(2, 3)), DimensionError);
}

TEST_CASE("spgeam pattern commutative, values associative within tolerance") {
    const CsrMatrix a = gen_erdos_renyi(30, 0.2, 1);
    const CsrMatrix b = gen_erdos_renyi(30, 0.2, 2);
    const CsrMatrix c = gen_erdos_renyi(30, 0.2, 3);
    CHECK(pattern_equal(spgeam(a, b), spgeam(b, a)));
    CHECK(allclose(spgeam(spgeam(a, b), c), spgeam(a, spgeam(b, c)), 1e-12));
}

TEST_CASE("gen_erdos_renyi density one, binomial count, determinism") {
    const CsrMatrix dense = gen_erdos_renyi(20, 1.0, 4);
    CHECK(dense.nnz() == 400);

    // Binomial oracle: mean n^2 d = 10000, sigma = sqrt(n^2 d (1-d)) ~ 99.5.
    const CsrMatrix er = gen_erdos_renyi(1000, 0.01, 42);
    const double sigma = std::sqrt(1000.0 * 1000.0 * 0.01 * 0.99);
    CHECK(std::abs(static_cast<double>(er.nnz()) - 10000.0) <= 3.0 * sigma);
    er.check_canonical();
    for (const double v : er.values) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    CHECK(gen_erdos_renyi(200, 0.05, 7) == gen_erdos_renyi(200, 0.05, 7));
    CHECK(gen_erdos_renyi(200, 0.05, 7) != gen_erdos_renyi(200, 0.05, 8));
    CHECK_THROWS_AS(gen_erdos_renyi(10, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(gen_erdos_renyi(10, 1.5, 1), ParameterError);
}

TEST_CASE("permute_symmetric identity, reversal oracle, round trip") {
    const CsrMatrix a = gen_erdos_renyi(15, 0.25, 33);
    CHECK(permute_symmetric(a, Permutation::identity(15)) == a);

    // Dense permute oracle: reversing diag(1,2,3) gives diag(3,2,1).
    const CsrMatrix d = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}});
    const CsrMatrix rd = permute_symmetric(d, Permutation::reversal(3));
    CHECK(rd == from_triplets(3, 3, {{0, 0, 3.0}, {1, 1, 2.0}, {2, 2, 1.0}}));

    const Permutation p = Permutation::random(15, 5);
    p.check_valid();
    const CsrMatrix ap = permute_symmetric(a, p);
    CHECK(ap.nnz() == a.nnz());
    CHECK(permute_symmetric(ap, p.inverse()) == a);

    const auto oracle = testing::dense_permute_symmetric(DenseOracle::from_csr(a), p.map);
    CHECK(testing::matches(ap, oracle, 0.0));

    CHECK_THROWS_AS(permute_symmetric(a, Permutation::identity(4)), DimensionError);
}

TEST_CASE("column_normalize, prune, elementwise_power basics") {
    // column [2, 2] -> [0.5, 0.5]
    const CsrMatrix col = from_triplets(2, 1, {{0, 0, 2.0}, {1, 0, 2.0}});
    const CsrMatrix n = column_normalize(col);
    CHECK(n.values[0] == 0.5);
    CHECK(n.values[1] == 0.5);

    // MCL default threshold: prune([[0.001, 0.5]], 0.002) keeps only 0.5.
    const CsrMatrix row = from_triplets(1, 2, {{0, 0, 0.001}, {0, 1, 0.5}});
    const CsrMatrix pr = prune(row, 0.002);
    CHECK(pr.nnz() == 1);
    CHECK(pr.colind[0] == 1);
    CHECK(pr.values[0] == 0.5);
    CHECK_THROWS_AS(prune(row, -0.1), ParameterError);

    const CsrMatrix sq = elementwise_power(from_triplets(1, 1, {{0, 0, 0.5}}), 2.0);
    CHECK(sq.values[0] == 0.25);

    // zero-sum columns stay untouched
    const CsrMatrix z = from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, -1.0}});
    CHECK(column_normalize(z) == z);
}

TEST_CASE("prune after normalize leaves values >= threshold") {
    const CsrMatrix a = gen_erdos_renyi(60, 0.1, 77);
    const double theta = 0.02;
    const CsrMatrix p = prune(column_normalize(a), theta);
    for (const double v : p.values) CHECK(v >= theta);
}

TEST_CASE("vconcat is the inverse of contiguous row slicing") {
    const CsrMatrix a = gen_erdos_renyi(17, 0.3, 8);
    std::vector<CsrMatrix> parts;
    index_t start = 0;
    for (const index_t size : {6, 6, 5}) {
        CsrMatrix part = CsrMatrix::zeros(size, a.ncols);
        for (index_t i = 0; i < size; ++i) {
            for (index_t t = a.rowptr[start + i]; t < a.rowptr[start + i + 1]; ++t) {
                part.colind.push_back(a.colind[t]);
                part.values.push_back(a.values[t]);
            }
            part.rowptr[i + 1] = static_cast<index_t>(part.colind.size());
        }
        parts.push_back(std::move(part));
        start += size;
    }
    const CsrMatrix joined = vconcat({&parts[0], &parts[1], &parts[2]});
    CHECK(joined == a);
}

TEST_CASE("canonical-form checker flags violations") {
    CsrMatrix bad = from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
    bad.colind[1] = 0;  // duplicate column in row 0
    CHECK(!bad.is_canonical());
    bad = from_triplets(2, 2, {{0, 0, 1.0}});
    bad.colind[0] = 5;  // column out of range
    CHECK(!bad.is_canonical());
    CHECK(gen_erdos_renyi(50, 0.2, 1).is_canonical());
}
