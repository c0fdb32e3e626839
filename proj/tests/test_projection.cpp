#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tuckreg/projection.hpp"

using namespace tuckreg;

namespace {

std::size_t nnz(const std::vector<double>& v) {
    std::size_t k = 0;
    for (double x : v) k += x != 0.0;
    return k;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

TuckerFactors separated_member(std::uint64_t seed, const Dims& dims, std::size_t r, const Dims& s) {
    std::mt19937_64 eng(seed);
    std::vector<Matrix> f;
    for (std::size_t i = 0; i < dims.size(); ++i) f.push_back(oracle::disjoint_orthonormal_factor(dims[i], r, s[i], eng));
    return TuckerFactors(oracle::separated_core(Dims(dims.size(), r), 20.0, eng), std::move(f), s);
}

}  // namespace

TEST(SparsePc, DominantAxis) {
    const Matrix m(3, 3, {3, 0, 0, 0, 2, 0, 0, 0, 1});
    const Matrix v = sparse_pc(m, 1, 1);
    EXPECT_EQ(v.column(0), (std::vector<double>{1, 0, 0}));
}

TEST(SparsePc, TieBreaksToLowerIndex) {
    const Matrix m(2, 2, {2, 0, 0, 2});
    EXPECT_EQ(sparse_pc(m, 1, 1).column(0), (std::vector<double>{1, 0}));
    const Matrix two = sparse_pc(m, 1, 2);
    EXPECT_EQ(two.column(1), (std::vector<double>{0, 1}));
}

TEST(SparsePc, MatchesExhaustiveOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix m = oracle::random_matrix(8, 12, 500 + seed);
        const Matrix v = sparse_pc(m, 3, 1);
        const auto col = v.column(0);
        EXPECT_LE(nnz(col), 3u);
        EXPECT_NEAR(norm(col), 1.0, 1e-12);
        EXPECT_NEAR(oracle::explained_variance(m, col), oracle::best_sparse_variance(m, 3), 1e-9) << "seed " << seed;
    }
}

TEST(SparsePc, DenseSparsityIsTopSingularVector) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix m = oracle::random_matrix(6, 9, 900 + seed);
        const auto v = sparse_pc(m, 6, 1).column(0);
        auto w = oracle::power_top_vector(m);
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * w[i];
        EXPECT_NEAR(std::abs(d), 1.0, 1e-8);
    }
}

TEST(SparsePc, ColumnsHonourContract) {
    const Matrix m = oracle::random_matrix(10, 15, 3);
    const Matrix v = sparse_pc(m, 4, 3);
    ASSERT_EQ(v.rows(), 10u);
    ASSERT_EQ(v.cols(), 3u);
    for (std::size_t c = 0; c < 3; ++c) {
        const auto col = v.column(c);
        EXPECT_LE(nnz(col), 4u);
        EXPECT_NEAR(norm(col), 1.0, 1e-12);
        for (double x : col) {
            if (x != 0.0) {
                EXPECT_GT(x, 0.0);
                break;
            }
        }
    }
}

TEST(SparsePc, ZeroAndRankDeficientInputs) {
    const Matrix zero = sparse_pc(Matrix(4, 5), 2, 2);
    EXPECT_EQ(zero, Matrix(4, 2));
    // Rank one: the second component is past the numerical rank.
    Matrix m(4, 3);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = (r + 1.0) * (c + 1.0);
    const Matrix v = sparse_pc(m, 4, 2);
    EXPECT_NEAR(norm(v.column(0)), 1.0, 1e-12);
    EXPECT_EQ(nnz(v.column(1)), 0u);
}

TEST(SparsePc, RejectsBadParameters) {
    const Matrix m = oracle::random_matrix(4, 5, 1);
    EXPECT_THROW(sparse_pc(m, 0, 1), std::invalid_argument);
    EXPECT_THROW(sparse_pc(m, 5, 1), std::invalid_argument);
    EXPECT_THROW(sparse_pc(m, 2, 0), std::invalid_argument);
    EXPECT_THROW(sparse_pc(m, 2, 5), std::invalid_argument);
}

TEST(SparseHosvd, ZeroTensor) {
    ProjectionConfig cfg{{2, 2, 2}, {2, 2, 2}};
    const TuckerFactors f = project_sparse_hosvd(DenseTensor::zeros({4, 4, 4}), cfg);
    EXPECT_EQ(f.compose(), DenseTensor::zeros({4, 4, 4}));
}

TEST(SparseHosvd, ExactOnSeparatedMembers) {
    const Dims dims{10, 9, 8};
    const Dims s{3, 3, 2};
    ProjectionConfig cfg{{2, 2, 2}, s};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DenseTensor t = separated_member(seed, dims, 2, s).compose();
        const TuckerFactors f = project_sparse_hosvd(t, cfg);
        EXPECT_LE(oracle::rel_diff(f.compose(), t), 1e-6) << "seed " << seed;
    }
}

TEST(SparseHosvd, ExactOnGeneratedMembers) {
    ProjectionConfig cfg{{2, 2, 2}, {3, 3, 3}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DenseTensor t = gen_model({10, 10, 10}, {2, 2, 2}, {3, 3, 3}, 0.5, seed).compose();
        EXPECT_LE(oracle::rel_diff(project_sparse_hosvd(t, cfg).compose(), t), 1e-8) << "seed " << seed;
    }
}

TEST(SparseHosvd, StablePerturbation) {
    const Dims dims{10, 9, 8};
    const Dims s{3, 3, 2};
    const DenseTensor clean = separated_member(77, dims, 2, s).compose();
    DenseTensor noise = oracle::random_tensor(dims, 78);
    noise *= 1e-3 * frob_norm(clean) / frob_norm(noise);
    const TuckerFactors f = project_sparse_hosvd(clean + noise, ProjectionConfig{{2, 2, 2}, s});
    EXPECT_LE(oracle::rel_diff(f.compose(), clean), 1e-2);
}

TEST(SparseHosvd, CertificateAndNeverWorseThanZero) {
    ProjectionConfig cfg{{2, 3, 2}, {2, 3, 1}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DenseTensor t = oracle::random_tensor({6, 7, 5}, 60 + seed);
        const TuckerFactors f = project_sparse_hosvd(t, cfg);
        EXPECT_EQ(f.rank(), cfg.rank);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t c = 0; c < cfg.rank[i]; ++c) EXPECT_LE(column_nnz(f.factors()[i], c), cfg.sparsity[i]);
        EXPECT_LE(frob_norm(t - f.compose()), frob_norm(t) * (1 + 1e-12));
    }
}

TEST(SparseHosvd, IdempotentOnOwnOutput) {
    ProjectionConfig cfg{{2, 2, 2}, {3, 3, 3}};
    const DenseTensor t = oracle::random_tensor({8, 8, 8}, 5);
    const DenseTensor once = project_sparse_hosvd(t, cfg).compose();
    const DenseTensor twice = project_sparse_hosvd(once, cfg).compose();
    EXPECT_LE(oracle::rel_diff(twice, once), 1e-6);
}

TEST(SparseHosvd, ValidatesConfig) {
    EXPECT_THROW(project_sparse_hosvd(DenseTensor::zeros({3, 3}), ProjectionConfig{{4, 1}, {1, 1}}),
                 std::invalid_argument);
    ProjectionConfig bad{{1, 1}, {1, 1}};
    bad.pca_iters = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(TuckerProjection, FullRankIsExact) {
    const DenseTensor t = oracle::random_tensor({4, 3, 5}, 2);
    EXPECT_LE(oracle::rel_diff(project_tucker(t, {4, 3, 5}).compose(), t), 1e-10);
    EXPECT_EQ(project_tucker(DenseTensor::zeros({3, 3}), {2, 2}).compose(), DenseTensor::zeros({3, 3}));
}

TEST(TuckerProjection, ExactOnLowRank) {
    const DenseTensor core = oracle::random_tensor({2, 3, 2}, 7);
    const std::vector<Matrix> f{oracle::random_matrix(6, 2, 8), oracle::random_matrix(7, 3, 9),
                                oracle::random_matrix(5, 2, 10)};
    const DenseTensor t = tucker_compose(core, f);
    EXPECT_LE(oracle::rel_diff(project_tucker(t, {2, 3, 2}).compose(), t), 1e-8);
}
