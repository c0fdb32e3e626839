#include "tuckreg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tuckreg {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;
using Support = std::vector<Index>;  // sorted ascending

// Components whose explained variance falls below this fraction of the
// leading one are treated as numerically zero (singular value ratio 1e-12).
constexpr double kRankCut = 1e-24;

Mat gram(const Matrix& m) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        m.data().data(), static_cast<Index>(m.rows()), static_cast<Index>(m.cols()));
    Mat g = a * a.transpose();
    return 0.5 * (g + g.transpose());
}

// Count of singular values above 1e-12 of the largest. Taken from the matrix
// itself since the Gram squares the roundoff floor.
std::size_t numerical_rank(const Matrix& m) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        m.data().data(), static_cast<Index>(m.rows()), static_cast<Index>(m.cols()));
    const Vec sv = Eigen::BDCSVD<Mat>(a).singularValues();
    if (sv.size() == 0 || !(sv[0] > 0.0)) return 0;
    return static_cast<std::size_t>((sv.array() > 1e-12 * sv[0]).count());
}

Matrix to_matrix(const Mat& m) {
    Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

// Indices of the s largest magnitudes; ties go to the lower index.
Support top_indices(const Vec& v, std::size_t s) {
    Support idx(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
    idx.resize(std::min<std::size_t>(s, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
}

Vec hard_threshold(const Vec& v, const Support& support) {
    Vec out = Vec::Zero(v.size());
    for (Index i : support) out[i] = v[i];
    return out;
}

void fix_sign(Vec& v) {
    for (Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

struct Restricted {
    double value = 0.0;
    Vec vec;  // full-length, supported on the restriction
};

// Top eigenpair of g restricted to rows/cols in `support`.
Restricted restricted_top(const Mat& g, const Support& support) {
    const auto k = static_cast<Index>(support.size());
    Mat sub(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) sub(a, b) = g(support[a], support[b]);
    Eigen::SelfAdjointEigenSolver<Mat> eig(sub);
    Restricted out;
    out.value = eig.eigenvalues()[k - 1];
    out.vec = Vec::Zero(g.rows());
    for (Index a = 0; a < k; ++a) out.vec[support[a]] = eig.eigenvectors()(a, k - 1);
    fix_sign(out.vec);
    return out;
}

// Truncated power iteration; returns the support it settles on (empty if the
// start is annihilated).
Support truncated_power(const Mat& g, std::size_t s, const Vec& start, const ProjectionConfig& cfg) {
    Vec v = hard_threshold(start, top_indices(start, s));
    double norm = v.norm();
    if (norm == 0.0) return {};
    v /= norm;
    Support support = top_indices(v, s);
    int stable = 0;
    for (std::size_t it = 0; it < cfg.pca_iters; ++it) {
        const Vec gv = g * v;
        const Support next = top_indices(gv, s);
        Vec w = hard_threshold(gv, next);
        norm = w.norm();
        if (norm == 0.0) break;
        w /= norm;
        const double step = (w - v).norm();
        v = std::move(w);
        // Only the support matters: the vector on it is recomputed exactly.
        stable = next == support ? stable + 1 : 0;
        support = next;
        if (step <= cfg.pca_tol || stable >= 8) break;
    }
    return support;
}

// Best single-swap improvements of the restricted top eigenvalue.
Support swap_search(const Mat& g, Support support) {
    const Index n = g.rows();
    double current = restricted_top(g, support).value;
    for (int pass = 0; pass < 64; ++pass) {
        double best = current;
        Support best_support;
        for (std::size_t a = 0; a < support.size(); ++a) {
            for (Index b = 0; b < n; ++b) {
                if (std::binary_search(support.begin(), support.end(), b)) continue;
                Support trial = support;
                trial[a] = b;
                std::sort(trial.begin(), trial.end());
                const double value = restricted_top(g, trial).value;
                if (value > best + 1e-12 * std::abs(best) + 1e-300) {
                    best = value;
                    best_support = std::move(trial);
                }
            }
        }
        if (best_support.empty()) break;
        current = best;
        support = std::move(best_support);
    }
    return support;
}

struct Ranked {
    Support support;
    double score;
};

// Orders by score (descending) with near-ties resolved toward the
// lexicographically smaller support.
bool ranked_before(const Ranked& a, const Ranked& b) {
    const double scale = std::max({std::abs(a.score), std::abs(b.score), 1e-300});
    if (std::abs(a.score - b.score) > 1e-13 * scale) return a.score > b.score;
    return a.support < b.support;
}

std::vector<Ranked> rank_supports(const Mat& g, const std::set<Support>& supports) {
    std::vector<Ranked> ranked;
    ranked.reserve(supports.size());
    for (const auto& s : supports) ranked.push_back({s, restricted_top(g, s).value});
    std::sort(ranked.begin(), ranked.end(), ranked_before);
    return ranked;
}

// Candidate supports from truncated power iteration on `target`, restarted
// from each vector in `starts` and from every coordinate direction.
std::set<Support> candidate_supports(const Mat& target, std::size_t s, const std::vector<Vec>& starts,
                                     const ProjectionConfig& cfg) {
    std::set<Support> out;
    for (const Vec& start : starts) {
        auto sup = truncated_power(target, s, start, cfg);
        if (!sup.empty()) out.insert(std::move(sup));
    }
    for (Index i = 0; i < target.rows(); ++i) {
        auto sup = truncated_power(target, s, Vec::Unit(target.rows(), i), cfg);
        if (!sup.empty()) out.insert(std::move(sup));
    }
    return out;
}

// One s-sparse component of the (deflated) Gram matrix g.
Vec sparse_component(const Mat& g, std::size_t s, const ProjectionConfig& cfg) {
    const Index n = g.rows();
    Eigen::SelfAdjointEigenSolver<Mat> eig(g);
    Vec top = eig.eigenvectors().col(n - 1);
    if (s >= static_cast<std::size_t>(n)) {
        fix_sign(top);
        return top;
    }
    const auto ranked = rank_supports(g, candidate_supports(g, s, {top}, cfg));
    std::vector<Ranked> refined;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
        Support sup = swap_search(g, ranked[i].support);
        const double score = restricted_top(g, sup).value;
        refined.push_back({std::move(sup), score});
    }
    std::sort(refined.begin(), refined.end(), ranked_before);
    return restricted_top(g, refined.front().support).vec;
}

double top_eigenvalue(const Mat& g) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()[g.rows() - 1];
}

Mat sparse_pc_gram(Mat g, std::size_t s, std::size_t k, std::size_t rank, const ProjectionConfig& cfg) {
    const Index n = g.rows();
    Mat out = Mat::Zero(n, static_cast<Index>(k));
    const double lead = top_eigenvalue(g);
    if (!(lead > 0.0)) return out;
    for (std::size_t c = 0; c < std::min(k, rank); ++c) {
        if (top_eigenvalue(g) <= kRankCut * lead) break;
        const Vec v = sparse_component(g, s, cfg);
        const double lambda = v.dot(g * v);
        if (lambda <= kRankCut * lead) break;
        out.col(static_cast<Index>(c)) = v;
        g -= lambda * v * v.transpose();
        g = 0.5 * (g + g.transpose());
    }
    return out;
}

// Energy of g captured by the column span of u: trace(Q^T g Q).
double captured_energy(const Mat& g, const Mat& u) {
    Eigen::ColPivHouseholderQR<Mat> qr(u);
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    if (rank == 0) return 0.0;
    const Mat q = Mat(qr.householderQ()).leftCols(rank);
    return (q.transpose() * g * q).trace();
}

Mat gather(const std::vector<Vec>& pool, const std::vector<std::size_t>& pick) {
    Mat u(pool.front().size(), static_cast<Index>(pick.size()));
    for (std::size_t c = 0; c < pick.size(); ++c) u.col(static_cast<Index>(c)) = pool[pick[c]];
    return u;
}

// Single-swap ascent on captured energy over the candidate pool.
std::pair<double, std::vector<std::size_t>> refine_selection(const Mat& g, const std::vector<Vec>& pool,
                                                             std::vector<std::size_t> pick) {
    double current = captured_energy(g, gather(pool, pick));
    for (int pass = 0; pass < 64; ++pass) {
        double best = current;
        std::vector<std::size_t> best_pick;
        for (std::size_t a = 0; a < pick.size(); ++a) {
            for (std::size_t b = 0; b < pool.size(); ++b) {
                if (std::find(pick.begin(), pick.end(), b) != pick.end()) continue;
                auto trial = pick;
                trial[a] = b;
                const double e = captured_energy(g, gather(pool, trial));
                if (e > best + 1e-12 * std::abs(best) + 1e-300) {
                    best = e;
                    best_pick = std::move(trial);
                }
            }
        }
        if (best_pick.empty()) break;
        current = best;
        pick = std::move(best_pick);
    }
    return {current, pick};
}

// s-sparse basis of r vectors maximizing the captured energy of g, seeded by
// the deflated sparse components `seed` (n x r).
Mat sparse_basis(const Mat& g, std::size_t s, const Mat& seed, const ProjectionConfig& cfg) {
    const Index n = g.rows();
    const Index r = seed.cols();
    Eigen::SelfAdjointEigenSolver<Mat> eig(g);
    const Mat lead = eig.eigenvectors().rightCols(r).rowwise().reverse();
    const Mat proj = lead * lead.transpose();

    std::vector<Vec> starts;
    for (Index c = 0; c < r; ++c) starts.push_back(lead.col(c));
    std::set<Support> supports = candidate_supports(g, s, starts, cfg);
    supports.merge(candidate_supports(proj, s, starts, cfg));
    const auto by_alignment = rank_supports(proj, supports);
    for (std::size_t i = 0; i < std::min<std::size_t>(2 * static_cast<std::size_t>(r), by_alignment.size()); ++i) {
        supports.insert(swap_search(proj, by_alignment[i].support));
    }

    std::vector<Vec> pool;
    auto add = [&pool](const Vec& v) {
        if (v.squaredNorm() == 0.0) return;
        for (const Vec& p : pool) {
            if ((p - v).norm() <= 1e-14) return;
        }
        pool.push_back(v);
    };
    std::vector<std::size_t> seeded;
    for (Index c = 0; c < r; ++c) {
        const std::size_t before = pool.size();
        add(seed.col(c));
        if (pool.size() > before) seeded.push_back(before);
    }
    for (const auto& sup : supports) {
        add(restricted_top(proj, sup).vec);
        add(restricted_top(g, sup).vec);
    }
    if (pool.size() <= static_cast<std::size_t>(r)) return seed;

    std::vector<std::vector<std::size_t>> inits;
    if (seeded.size() == static_cast<std::size_t>(r)) inits.push_back(seeded);

    std::vector<std::size_t> greedy;
    for (Index c = 0; c < r; ++c) {
        double best = -1.0;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (std::find(greedy.begin(), greedy.end(), i) != greedy.end()) continue;
            auto trial = greedy;
            trial.push_back(i);
            const double e = captured_energy(g, gather(pool, trial));
            if (e > best) {
                best = e;
                best_i = i;
            }
        }
        greedy.push_back(best_i);
    }
    inits.push_back(greedy);

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> align(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) align[i] = pool[i].dot(proj * pool[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return align[a] > align[b]; });
    std::vector<std::size_t> aligned;
    for (std::size_t i : order) {
        if (aligned.size() == static_cast<std::size_t>(r)) break;
        auto trial = aligned;
        trial.push_back(i);
        Eigen::ColPivHouseholderQR<Mat> qr(gather(pool, trial));
        qr.setThreshold(1e-8);
        if (qr.rank() == static_cast<Index>(trial.size())) aligned = std::move(trial);
    }
    if (aligned.size() == static_cast<std::size_t>(r)) inits.push_back(aligned);

    double best = -1.0;
    std::vector<std::size_t> best_pick;
    for (const auto& init : inits) {
        auto [energy, pick] = refine_selection(g, pool, init);
        if (energy > best + 1e-12 * std::abs(best)) {
            best = energy;
            best_pick = std::move(pick);
        }
    }
    (void)n;
    return gather(pool, best_pick);
}

Matrix pseudo_inverse(const Matrix& u) {
    Mat m(static_cast<Index>(u.rows()), static_cast<Index>(u.cols()));
    for (std::size_t r = 0; r < u.rows(); ++r)
        for (std::size_t c = 0; c < u.cols(); ++c) m(r, c) = u(r, c);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(m);
    cod.setThreshold(1e-10);
    return to_matrix(cod.pseudoInverse());
}

TuckerFactors zero_model(const Dims& dims, const Dims& rank, const Dims& sparsity) {
    std::vector<Matrix> factors;
    for (std::size_t i = 0; i < dims.size(); ++i) factors.emplace_back(dims[i], rank[i]);
    return TuckerFactors(DenseTensor::zeros(rank), std::move(factors), sparsity);
}

// Keep the candidate only if it beats the zero tensor.
TuckerFactors no_worse_than_zero(const DenseTensor& t, TuckerFactors candidate) {
    const double err = frob_norm(t - candidate.compose());
    if (err <= frob_norm(t)) return candidate;
    return zero_model(candidate.dims(), candidate.rank(), candidate.sparsity());
}

}  // namespace

void ProjectionConfig::validate() const {
    if (rank.size() != sparsity.size()) throw std::invalid_argument("ProjectionConfig: rank/sparsity arity mismatch");
    if (pca_iters == 0) throw std::invalid_argument("ProjectionConfig: pca_iters must be positive");
    if (!(pca_tol > 0.0)) throw std::invalid_argument("ProjectionConfig: pca_tol must be positive");
}

Matrix sparse_pc(const Matrix& m, std::size_t s, std::size_t k, const ProjectionConfig& cfg) {
    if (cfg.pca_iters == 0 || !(cfg.pca_tol > 0.0)) throw std::invalid_argument("sparse_pc: invalid configuration");
    const std::size_t n = m.rows();
    if (s < 1 || s > n) throw std::invalid_argument("sparse_pc: s must lie in [1, rows]");
    if (k < 1 || k > std::min(n, m.cols())) throw std::invalid_argument("sparse_pc: k must lie in [1, min(rows, cols)]");
    return to_matrix(sparse_pc_gram(gram(m), s, k, numerical_rank(m), cfg));
}

TuckerFactors project_sparse_hosvd(const DenseTensor& t, const ProjectionConfig& cfg) {
    cfg.validate();
    validate_tuples(t.dims(), cfg.rank, cfg.sparsity);
    const std::size_t d = t.order();

    std::vector<Matrix> factors;
    factors.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        const Matrix unfolded = matricize(t, j);
        const Mat g = gram(unfolded);
        const Mat components = sparse_pc_gram(g, cfg.sparsity[j], cfg.rank[j], numerical_rank(unfolded), cfg);
        const bool refine = cfg.subspace_refine && cfg.sparsity[j] < t.dims()[j] && components.col(0).squaredNorm() > 0.0;
        factors.push_back(to_matrix(refine ? sparse_basis(g, cfg.sparsity[j], components, cfg) : components));
    }

    DenseTensor core = t;
    for (std::size_t j = 0; j < d; ++j) core = mode_product(core, pseudo_inverse(factors[j]), j);
    return no_worse_than_zero(t, TuckerFactors(std::move(core), std::move(factors), cfg.sparsity));
}

TuckerFactors project_tucker(const DenseTensor& t, const Dims& rank) {
    const Dims& dims = t.dims();
    validate_tuples(dims, rank, dims);
    const std::size_t d = t.order();

    std::vector<Matrix> factors;
    factors.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        const Matrix unfolded = matricize(t, j);
        const Mat g = gram(unfolded);
        Eigen::SelfAdjointEigenSolver<Mat> eig(g);
        const Index n = g.rows();
        const double lead = eig.eigenvalues()[n - 1];
        Mat u = Mat::Zero(n, static_cast<Index>(rank[j]));
        const auto keep = static_cast<Index>(std::min(rank[j], numerical_rank(unfolded)));
        for (Index c = 0; c < keep; ++c) {
            if (!(lead > 0.0) || eig.eigenvalues()[n - 1 - c] <= kRankCut * lead) break;
            Vec v = eig.eigenvectors().col(n - 1 - c);
            fix_sign(v);
            u.col(c) = v;
        }
        factors.push_back(to_matrix(u));
    }

    DenseTensor core = t;
    for (std::size_t j = 0; j < d; ++j) core = mode_product(core, factors[j].transpose(), j);
    return no_worse_than_zero(t, TuckerFactors(std::move(core), std::move(factors), dims));
}

}  // namespace tuckreg
