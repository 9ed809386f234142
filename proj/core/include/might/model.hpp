#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace might {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// K observation matrices over a shared set of p covariates.
///
/// Construction does not check anything; call validate() before estimation.
/// Rows are observations, columns covariates.
class DatasetCollection {
public:
    DatasetCollection() = default;
    explicit DatasetCollection(std::vector<Matrix> datasets,
                               std::vector<std::string> covariate_names = {});

    std::size_t num_datasets() const noexcept { return datasets_.size(); }
    Index num_covariates() const noexcept {
        return datasets_.empty() ? 0 : datasets_.front().cols();
    }
    Index num_observations(std::size_t k) const { return datasets_.at(k).rows(); }
    Index total_observations() const noexcept;

    const Matrix& dataset(std::size_t k) const { return datasets_.at(k); }
    const std::vector<Matrix>& datasets() const noexcept { return datasets_; }

    /// Covariate labels; generated as "V1".."Vp" when none were supplied.
    const std::vector<std::string>& covariate_names() const noexcept { return names_; }

private:
    std::vector<Matrix> datasets_;
    std::vector<std::string> names_;
};

/// Throws DimensionMismatch, TooFewObservations or DegenerateCovariate.
void validate(const DatasetCollection& collection);

/// Subtracts per-dataset column means. Use on real data, before estimation.
DatasetCollection center(const DatasetCollection& collection);

/// Uncentered second moments (1/n_k) X^T X and their diagonals.
struct Moments {
    std::vector<Matrix> sigma;
    std::vector<Vector> gamma;
};

Moments empirical_moments(const DatasetCollection& collection);

/// Column-scaled copies of every dataset, shared read-only by all node problems.
///
/// Z^(k) = sqrt(c0 N / n_k) X^(k) diag(gamma^(k))^{-1/2}; every column of Z^(k)
/// has squared norm c0 N. The Gram blocks (1/N) Z^T Z and cross products
/// (1/N) Z^T X are precomputed once so a node problem is a cheap slice.
struct ScaledCollection {
    std::vector<Matrix> raw;        ///< X^(k)
    std::vector<Matrix> scaled;     ///< Z^(k), n_k x p
    std::vector<Vector> gamma;      ///< scale factors, diag of Sigma-hat^(k)
    std::vector<Matrix> gram;       ///< (1/N) Z^(k)T Z^(k), p x p
    std::vector<Matrix> cross;      ///< (1/N) Z^(k)T X^(k), p x p
    std::vector<Index> n;
    Index total = 0;                ///< N
    double c0 = 1.0;

    std::size_t num_datasets() const noexcept { return raw.size(); }
    Index num_covariates() const noexcept { return raw.empty() ? 0 : raw.front().cols(); }
};

std::shared_ptr<const ScaledCollection> scale_collection(const DatasetCollection& collection,
                                                         const Moments& moments, double c0);

/// Maps position i of a length-(p-1) coefficient vector for node j to a covariate.
constexpr Index covariate_of(Index i, Index node) noexcept { return i < node ? i : i + 1; }
/// Inverse of covariate_of; `covariate` must differ from `node`.
constexpr Index position_of(Index covariate, Index node) noexcept {
    return covariate < node ? covariate : covariate - 1;
}

/// The scaled multi-task regression for a single node j.
///
/// The block-diagonal N x (p-1)K design is never formed. The problem keeps a
/// handle to the shared scaled data and the per-block Gram slices with row and
/// column j removed.
class ScaledDesign {
public:
    ScaledDesign(std::shared_ptr<const ScaledCollection> shared, Index node);

    Index node() const noexcept { return node_; }
    std::size_t num_tasks() const noexcept { return shared_->num_datasets(); }
    Index num_covariates() const noexcept { return shared_->num_covariates(); }
    Index num_edges() const noexcept { return num_covariates() - 1; }
    Index num_observations(std::size_t k) const { return shared_->n.at(k); }
    Index total_observations() const noexcept { return shared_->total; }
    double c0() const noexcept { return shared_->c0; }

    /// Z^(k) without column j (materialized copy).
    Matrix block(std::size_t k) const;
    /// X_j^(k), the k-th segment of the stacked response.
    auto response(std::size_t k) const { return shared_->raw[k].col(node_); }
    /// Stacked response of length N.
    Vector stacked_response() const;
    const Vector& scale_factors(std::size_t k) const { return shared_->gamma.at(k); }

    /// (1/N) Z_{\j}^(k)T Z_{\j}^(k).
    const Matrix& gram(std::size_t k) const { return gram_[k]; }
    /// (1/N) Z_{\j}^(k)T X_j^(k).
    const Vector& correlation(std::size_t k) const { return corr_[k]; }
    double response_sq_norm(std::size_t k) const { return response_sq_norm_[k]; }

    const ScaledCollection& shared() const noexcept { return *shared_; }

private:
    std::shared_ptr<const ScaledCollection> shared_;
    Index node_;
    std::vector<Matrix> gram_;
    std::vector<Vector> corr_;
    std::vector<double> response_sq_norm_;
};

/// Builds the problem for node j from scratch (scales the whole collection).
ScaledDesign build_node_problem(const DatasetCollection& collection, const Moments& moments,
                                Index node, double c0);

/// K aligned coefficient vectors beta^(1..K) of length p-1 for one node.
///
/// Stored as a (p-1) x K matrix: column k is beta^(k), row i is the group of
/// edge i across all K datasets.
struct CoefficientStack {
    Matrix values;
    Index node = 0;

    CoefficientStack() = default;
    CoefficientStack(Index num_edges, std::size_t num_tasks, Index node_index)
        : values(Matrix::Zero(num_edges, static_cast<Index>(num_tasks))), node(node_index) {}

    Index num_edges() const noexcept { return values.rows(); }
    std::size_t num_tasks() const noexcept { return static_cast<std::size_t>(values.cols()); }
    auto group(Index i) const { return values.row(i); }
    auto task(std::size_t k) const { return values.col(static_cast<Index>(k)); }

    /// |union_k supp(beta^(k))|
    Index union_support_size() const;
    /// sum_k |supp(beta^(k))|
    Index total_support_size() const;
};

/// Residual X_j^(k) - Z_{\j}^(k) beta^(k) for one block.
Vector block_residual(const ScaledDesign& problem, const CoefficientStack& beta, std::size_t k);

struct PrecisionColumn {
    Vector diag;                  ///< Theta_jj^(k), length K
    std::vector<Vector> offdiag;  ///< Theta_{\j,j}^(k), length p-1 each
};

/// Converts scaled regression coefficients back to precision-matrix entries.
/// Throws ExactFit when a block residual vanishes.
PrecisionColumn recover_precision_column(const ScaledDesign& problem,
                                         const CoefficientStack& beta);

/// K estimated precision matrices.
struct JointPrecision {
    std::vector<Matrix> matrices;
    bool symmetrized = false;

    std::size_t num_datasets() const noexcept { return matrices.size(); }
    Index num_covariates() const noexcept {
        return matrices.empty() ? 0 : matrices.front().rows();
    }
};

}  // namespace might
