#include "might/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "might/errors.hpp"

namespace might {

namespace {

constexpr double kDegenerateTolerance = 1e-12;

Matrix symmetric_gram(const Matrix& x) {
    const Index p = x.cols();
    Matrix g = Matrix::Zero(p, p);
    g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
}

}  // namespace

DatasetCollection::DatasetCollection(std::vector<Matrix> datasets,
                                     std::vector<std::string> covariate_names)
    : datasets_(std::move(datasets)), names_(std::move(covariate_names)) {
    if (names_.empty()) {
        const Index p = num_covariates();
        names_.reserve(static_cast<std::size_t>(p));
        for (Index i = 0; i < p; ++i) names_.push_back("V" + std::to_string(i + 1));
    }
}

Index DatasetCollection::total_observations() const noexcept {
    Index total = 0;
    for (const auto& x : datasets_) total += x.rows();
    return total;
}

void validate(const DatasetCollection& collection) {
    if (collection.num_datasets() == 0) throw TooFewObservations("no datasets supplied");
    const Index p = collection.num_covariates();
    if (p < 2) throw DimensionMismatch("at least 2 covariates are required, got " +
                                       std::to_string(p));
    if (collection.covariate_names().size() != static_cast<std::size_t>(p))
        throw DimensionMismatch("covariate name count differs from column count");

    for (std::size_t k = 0; k < collection.num_datasets(); ++k) {
        const Matrix& x = collection.dataset(k);
        if (x.cols() != p)
            throw DimensionMismatch("dataset " + std::to_string(k + 1) + " has " +
                                    std::to_string(x.cols()) + " columns, expected " +
                                    std::to_string(p));
        if (x.rows() < 2)
            throw TooFewObservations("dataset " + std::to_string(k + 1) + " has " +
                                     std::to_string(x.rows()) + " rows, need at least 2");
        if (!x.allFinite())
            throw InvalidArgument("dataset " + std::to_string(k + 1) +
                                  " contains non-finite values");
        const double n = static_cast<double>(x.rows());
        for (Index i = 0; i < p; ++i) {
            const auto col = x.col(i);
            const double mean = col.mean();
            const double second = col.squaredNorm() / n;
            const double variance = (col.array() - mean).square().sum() / n;
            if (second < kDegenerateTolerance ||
                variance <= kDegenerateTolerance * mean * mean)
                throw DegenerateCovariate(k, static_cast<std::size_t>(i));
        }
    }
}

DatasetCollection center(const DatasetCollection& collection) {
    std::vector<Matrix> out;
    out.reserve(collection.num_datasets());
    for (const auto& x : collection.datasets()) {
        const Eigen::RowVectorXd mean = x.colwise().mean();
        out.push_back(x.rowwise() - mean);
    }
    return DatasetCollection(std::move(out), collection.covariate_names());
}

Moments empirical_moments(const DatasetCollection& collection) {
    Moments m;
    m.sigma.reserve(collection.num_datasets());
    m.gamma.reserve(collection.num_datasets());
    for (const auto& x : collection.datasets()) {
        Matrix s = symmetric_gram(x) / static_cast<double>(x.rows());
        m.gamma.push_back(s.diagonal());
        m.sigma.push_back(std::move(s));
    }
    return m;
}

std::shared_ptr<const ScaledCollection> scale_collection(const DatasetCollection& collection,
                                                         const Moments& moments, double c0) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("c0 must be positive");
    auto out = std::make_shared<ScaledCollection>();
    const std::size_t K = collection.num_datasets();
    const Index p = collection.num_covariates();
    out->c0 = c0;
    out->total = collection.total_observations();
    const double N = static_cast<double>(out->total);

    for (std::size_t k = 0; k < K; ++k) {
        const Matrix& x = collection.dataset(k);
        const Vector& gamma = moments.gamma.at(k);
        for (Index i = 0; i < p; ++i)
            if (!(gamma(i) >= kDegenerateTolerance)) throw DegenerateCovariate(k, i);

        const double nk = static_cast<double>(x.rows());
        const Vector inv_sqrt = gamma.array().rsqrt();
        const double factor = std::sqrt(c0 * N / nk);

        out->raw.push_back(x);
        out->scaled.push_back(factor * (x * inv_sqrt.asDiagonal()));
        out->gamma.push_back(gamma);
        out->n.push_back(x.rows());

        const Matrix& s = moments.sigma.at(k);
        // (1/N) Z^T Z = c0 D S D and (1/N) Z^T X = sqrt(c0 n_k / N) D S, D = diag(gamma)^{-1/2}
        Matrix gram(p, p);
        for (Index b = 0; b < p; ++b)
            for (Index a = 0; a < p; ++a) gram(a, b) = c0 * s(a, b) * inv_sqrt(a) * inv_sqrt(b);
        out->gram.push_back(std::move(gram));
        out->cross.push_back(std::sqrt(c0 * nk / N) * (inv_sqrt.asDiagonal() * s));
    }
    return out;
}

ScaledDesign::ScaledDesign(std::shared_ptr<const ScaledCollection> shared, Index node)
    : shared_(std::move(shared)), node_(node) {
    const Index p = shared_->num_covariates();
    if (node_ < 0 || node_ >= p)
        throw InvalidArgument("node index " + std::to_string(node_ + 1) + " out of range 1.." +
                              std::to_string(p));
    const Index m = p - 1;
    const std::size_t K = shared_->num_datasets();
    gram_.reserve(K);
    corr_.reserve(K);
    response_sq_norm_.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const Matrix& g = shared_->gram[k];
        Matrix sub(m, m);
        Vector c(m);
        for (Index b = 0; b < m; ++b) {
            const Index cb = covariate_of(b, node_);
            for (Index a = 0; a < m; ++a) sub(a, b) = g(covariate_of(a, node_), cb);
            c(b) = shared_->cross[k](cb, node_);
        }
        gram_.push_back(std::move(sub));
        corr_.push_back(std::move(c));
        response_sq_norm_.push_back(shared_->raw[k].col(node_).squaredNorm());
    }
}

Matrix ScaledDesign::block(std::size_t k) const {
    const Matrix& z = shared_->scaled.at(k);
    Matrix out(z.rows(), num_edges());
    for (Index i = 0; i < num_edges(); ++i) out.col(i) = z.col(covariate_of(i, node_));
    return out;
}

Vector ScaledDesign::stacked_response() const {
    Vector out(total_observations());
    Index offset = 0;
    for (std::size_t k = 0; k < num_tasks(); ++k) {
        const Index nk = num_observations(k);
        out.segment(offset, nk) = response(k);
        offset += nk;
    }
    return out;
}

ScaledDesign build_node_problem(const DatasetCollection& collection, const Moments& moments,
                                Index node, double c0) {
    return ScaledDesign(scale_collection(collection, moments, c0), node);
}

Index CoefficientStack::union_support_size() const {
    Index count = 0;
    for (Index i = 0; i < values.rows(); ++i)
        if ((values.row(i).array() != 0.0).any()) ++count;
    return count;
}

Index CoefficientStack::total_support_size() const {
    return static_cast<Index>((values.array() != 0.0).count());
}

Vector block_residual(const ScaledDesign& problem, const CoefficientStack& beta, std::size_t k) {
    const Matrix& z = problem.shared().scaled[k];
    Vector r = problem.response(k);
    const auto b = beta.task(k);
    for (Index i = 0; i < b.size(); ++i)
        if (b(i) != 0.0) r.noalias() -= b(i) * z.col(covariate_of(i, problem.node()));
    return r;
}

PrecisionColumn recover_precision_column(const ScaledDesign& problem,
                                         const CoefficientStack& beta) {
    const std::size_t K = problem.num_tasks();
    const Index m = problem.num_edges();
    const double N = static_cast<double>(problem.total_observations());
    PrecisionColumn out;
    out.diag.resize(static_cast<Index>(K));
    out.offdiag.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const Vector r = block_residual(problem, beta, k);
        const double rss = r.squaredNorm();
        const double x_norm = std::sqrt(problem.response_sq_norm(k));
        if (!(std::sqrt(rss) >= 1e-12 * x_norm) || rss == 0.0) throw ExactFit(k);

        const double nk = static_cast<double>(problem.num_observations(k));
        const double diag = nk / rss;
        const double factor = -std::sqrt(problem.c0() * N / nk) * diag;
        const Vector& gamma = problem.scale_factors(k);
        Vector off = Vector::Zero(m);
        const auto b = beta.task(k);
        for (Index i = 0; i < m; ++i)
            if (b(i) != 0.0)
                off(i) = factor * b(i) / std::sqrt(gamma(covariate_of(i, problem.node())));
        out.diag(static_cast<Index>(k)) = diag;
        out.offdiag.push_back(std::move(off));
    }
    return out;
}

}  // namespace might
