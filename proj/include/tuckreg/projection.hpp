#pragma once

#include <cstddef>

#include "tuckreg/model.hpp"
#include "tuckreg/tensor.hpp"

namespace tuckreg {

/// Targets and knobs for the structured projection.
struct ProjectionConfig {
    Dims rank;
    Dims sparsity;
    std::size_t pca_iters = 200;  // truncated power iterations per start
    double pca_tol = 1e-9;        // stop when successive iterates are this close
    /// Select each mode's factor as the s-sparse basis capturing the most
    /// energy of the unfolding, seeded by the deflated sparse components.
    /// With this off, the factors are the sparse components themselves.
    bool subspace_refine = true;

    void validate() const;
};

/// First k s-sparse principal components of m (n x cols), as the columns of
/// an n x k matrix.
///
/// Components are extracted one at a time from the Gram matrix m m^T by
/// truncated power iteration (v <- hard_threshold_s(G v), renormalized),
/// restarted from the thresholded dense top eigenvector and from every
/// coordinate vector, followed by a single-swap support search. The returned
/// vector is the exact top eigenvector of G restricted to the chosen support.
/// Components are separated by Hotelling deflation G <- G - lambda v v^T.
///
/// Each column has at most s nonzeros and unit norm; its first nonzero entry
/// is positive. Columns past the numerical rank (singular value below 1e-12
/// of the leading one) are zero. Equal magnitudes break toward lower indices.
Matrix sparse_pc(const Matrix& m, std::size_t s, std::size_t k, const ProjectionConfig& cfg = {});

/// Sparse higher-order SVD: per-mode sparse factors U_j, core
/// T x_1 U_1^+ ... x_d U_d^+ (pseudo-inverses; U_j^T when the columns are
/// orthonormal). The result is never farther from t than the zero tensor.
TuckerFactors project_sparse_hosvd(const DenseTensor& t, const ProjectionConfig& cfg);

/// Truncated HOSVD onto Tucker rank `rank` (dense factors).
TuckerFactors project_tucker(const DenseTensor& t, const Dims& rank);

}  // namespace tuckreg
