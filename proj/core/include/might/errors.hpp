#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace might {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory {
    input,      ///< malformed or degenerate user input
    numerical,  ///< the estimator could not produce a finite answer
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error(ErrorCategory::input, "dimension mismatch: " + what) {}
};

class TooFewObservations : public Error {
public:
    explicit TooFewObservations(const std::string& what)
        : Error(ErrorCategory::input, "too few observations: " + what) {}
};

/// A covariate with (numerically) zero second moment in one dataset.
class DegenerateCovariate : public Error {
public:
    DegenerateCovariate(std::size_t dataset, std::size_t covariate)
        : Error(ErrorCategory::input,
                "degenerate covariate " + std::to_string(covariate + 1) + " in dataset " +
                    std::to_string(dataset + 1) + " (zero sample variance)"),
          dataset_(dataset), covariate_(covariate) {}

    std::size_t dataset() const noexcept { return dataset_; }
    std::size_t covariate() const noexcept { return covariate_; }

private:
    std::size_t dataset_;
    std::size_t covariate_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what)
        : Error(ErrorCategory::input, what) {}
};

/// Unreadable or malformed input file.
class FileError : public Error {
public:
    FileError(const std::string& path, const std::string& what)
        : Error(ErrorCategory::input, path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Residual of a node regression vanished; the precision entry would be infinite.
class ExactFit : public Error {
public:
    explicit ExactFit(std::size_t dataset)
        : Error(ErrorCategory::numerical,
                "exact fit in dataset " + std::to_string(dataset + 1) +
                    " (rank-deficient or duplicated covariates)"),
          dataset_(dataset) {}

    std::size_t dataset() const noexcept { return dataset_; }

private:
    std::size_t dataset_;
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& what)
        : Error(ErrorCategory::numerical, "non-finite iterate: " + what) {}
};

class IterationCapExceeded : public Error {
public:
    explicit IterationCapExceeded(int cap)
        : Error(ErrorCategory::numerical,
                "iteration cap of " + std::to_string(cap) + " exceeded") {}
};

class SingularSubmatrix : public Error {
public:
    SingularSubmatrix(std::size_t dataset, std::size_t node)
        : Error(ErrorCategory::numerical,
                "singular covariance submatrix for dataset " + std::to_string(dataset + 1) +
                    ", node " + std::to_string(node + 1)),
          dataset_(dataset), node_(node) {}

    std::size_t dataset() const noexcept { return dataset_; }
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t dataset_;
    std::size_t node_;
};

class SupportTooLarge : public Error {
public:
    SupportTooLarge(std::size_t dataset, std::size_t node)
        : Error(ErrorCategory::numerical,
                "selected support exceeds sample size for dataset " +
                    std::to_string(dataset + 1) + ", node " + std::to_string(node + 1)) {}
};

class NonRepairableMatrix : public Error {
public:
    explicit NonRepairableMatrix(std::size_t cls)
        : Error(ErrorCategory::numerical,
                "precision matrix of class " + std::to_string(cls + 1) +
                    " has a non-finite log-determinant after repair") {}
};

class EmptyClassSplit : public Error {
public:
    explicit EmptyClassSplit(std::size_t cls)
        : Error(ErrorCategory::input,
                "split leaves class " + std::to_string(cls + 1) + " empty on one side") {}
};

/// Wraps a failure inside the node loop with the offending node attached.
class NodeFailure : public Error {
public:
    NodeFailure(std::size_t node, const Error& cause)
        : Error(cause.category(),
                "node " + std::to_string(node + 1) + ": " + cause.what()),
          node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

}  // namespace might
