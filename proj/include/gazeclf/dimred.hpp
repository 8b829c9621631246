#pragma once

// PCA and RBF kernel PCA, each with two selection modes: a fixed number of
// components, or the smallest number whose cumulative explained-variance
// ratio reaches a target fraction.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeclf/errors.hpp"
#include "gazeclf/linalg.hpp"

namespace gazeclf {

enum class ReductionMethod { none, pca, kpca };

struct ReductionSpec {
    ReductionMethod method = ReductionMethod::none;
    // Exactly one of the two modes is meaningful: components > 0 selects a
    // fixed dimension, otherwise variance_fraction applies.
    int components = 0;
    double variance_fraction = 0.0;

    static ReductionSpec none() { return {}; }
    static ReductionSpec fixed(ReductionMethod m, int k) { return {m, k, 0.0}; }
    static ReductionSpec variance(ReductionMethod m, double f) { return {m, 0, f}; }

    bool uses_variance() const { return components <= 0; }

    void validate() const {
        if (method == ReductionMethod::none) return;
        if (uses_variance()) {
            require(variance_fraction > 0.0 && variance_fraction <= 1.0, ErrorKind::InvalidArgument,
                    "variance fraction must lie in (0,1]");
        }
    }

    /// "none", "pca-2", "kpca-90%", ...
    std::string label() const {
        if (method == ReductionMethod::none) return "none";
        const std::string base = method == ReductionMethod::pca ? "pca" : "kpca";
        if (!uses_variance()) return base + "-" + std::to_string(components);
        const double pct = variance_fraction * 100.0;
        const double rounded = std::round(pct);
        if (std::abs(pct - rounded) < 1e-9) return base + "-" + std::to_string(static_cast<int>(rounded)) + "%";
        return base + "-" + std::to_string(pct) + "%";
    }

    bool operator==(const ReductionSpec&) const = default;
};

inline ReductionSpec parse_reduction(const std::string& label) {
    if (label == "none") return ReductionSpec::none();
    const auto dash = label.find('-');
    require(dash != std::string::npos, ErrorKind::Config, "bad extraction label '" + label + "'");
    const std::string base = label.substr(0, dash);
    std::string rest = label.substr(dash + 1);
    ReductionMethod m;
    if (base == "pca") {
        m = ReductionMethod::pca;
    } else if (base == "kpca") {
        m = ReductionMethod::kpca;
    } else {
        fail(ErrorKind::Config, "bad extraction label '" + label + "'");
    }
    try {
        if (!rest.empty() && rest.back() == '%') {
            rest.pop_back();
            return ReductionSpec::variance(m, std::stod(rest) / 100.0);
        }
        return ReductionSpec::fixed(m, std::stoi(rest));
    } catch (const std::logic_error&) {
        fail(ErrorKind::Config, "bad extraction label '" + label + "'");
    }
}

/// Nine extraction modes swept by default.
inline std::vector<ReductionSpec> default_extractions() {
    std::vector<ReductionSpec> out{ReductionSpec::none()};
    for (auto m : {ReductionMethod::pca, ReductionMethod::kpca}) {
        out.push_back(ReductionSpec::fixed(m, 2));
        for (double f : {0.5, 0.9, 0.99}) out.push_back(ReductionSpec::variance(m, f));
    }
    return out;
}

namespace detail {

/// Number of leading (descending) values to keep under a selection mode.
inline int select_dimension(const std::vector<double>& ratios, const ReductionSpec& spec, bool& clamped) {
    const int rank = static_cast<int>(ratios.size());
    clamped = false;
    if (!spec.uses_variance()) {
        require(spec.components >= 1, ErrorKind::InvalidArgument, "component count must be >= 1");
        if (spec.components > rank) clamped = true;
        return std::min(spec.components, rank);
    }
    double cumulative = 0.0;
    for (int k = 0; k < rank; ++k) {
        cumulative += ratios[static_cast<std::size_t>(k)];
        if (cumulative >= spec.variance_fraction) return k + 1;
    }
    return rank;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

struct PcaModel {
    RowVector mean;
    Matrix components;               // k x d, orthonormal rows
    std::vector<double> explained_variance;        // eigenvalues of the sample covariance
    std::vector<double> explained_variance_ratios;
    bool clamped = false;            // requested k exceeded the rank

    int k() const { return static_cast<int>(components.rows()); }
};

/// Centers by column means and eigendecomposes the sample covariance
/// (divisor n-1). When d > n the n x n Gram matrix is decomposed instead and
/// mapped back, which yields the same non-zero spectrum.
inline PcaModel fit_pca(const Matrix& x, const ReductionSpec& spec) {
    spec.validate();
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    require(n >= 2, ErrorKind::DegenerateData, "PCA needs at least two rows");
    require(x.allFinite(), ErrorKind::DegenerateData, "PCA input has non-finite entries");

    PcaModel model;
    model.mean = x.colwise().mean();
    const Matrix xc = x.rowwise() - model.mean;
    const double denom = static_cast<double>(n - 1);

    Vector values;
    Matrix vectors;  // d x r, columns are principal axes
    if (d <= n) {
        const auto eig = symmetric_eigen(xc.transpose() * xc / denom);
        values = eig.values;
        vectors = eig.vectors;
    } else {
        const auto eig = symmetric_eigen(xc * xc.transpose() / denom);
        values = eig.values;
        vectors.resize(d, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double lam = values(j);
            vectors.col(j) = lam > 0.0 ? Vector(xc.transpose() * eig.vectors.col(j) / std::sqrt(denom * lam))
                                       : Vector::Zero(d);
        }
    }

    const double top = values.size() > 0 ? values(0) : 0.0;
    require(top > 0.0, ErrorKind::DegenerateData, "all rows are identical (zero covariance)");
    double total = 0.0;
    for (Eigen::Index j = 0; j < values.size(); ++j) total += std::max(values(j), 0.0);

    std::vector<double> ratios;
    for (Eigen::Index j = 0; j < values.size() && values(j) > top * 1e-12; ++j) ratios.push_back(values(j) / total);

    const int k = detail::select_dimension(ratios, spec, model.clamped);
    model.components.resize(k, d);
    for (int j = 0; j < k; ++j) {
        Vector axis = vectors.col(j);
        axis.normalize();
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0.0) axis = -axis;
        model.components.row(j) = axis.transpose();
        model.explained_variance.push_back(values(j));
        model.explained_variance_ratios.push_back(ratios[static_cast<std::size_t>(j)]);
    }
    return model;
}

inline Matrix transform_pca(const PcaModel& model, const Matrix& x) {
    require(x.cols() == model.mean.size(), ErrorKind::DimensionMismatch,
            "PCA fit on " + std::to_string(model.mean.size()) + " columns, got " + std::to_string(x.cols()));
    return (x.rowwise() - model.mean) * model.components.transpose();
}

inline Matrix reconstruct_pca(const PcaModel& model, const Matrix& z) {
    return (z * model.components).rowwise() + model.mean;
}

// ---------------------------------------------------------------------------
// Kernel PCA
// ---------------------------------------------------------------------------

enum class KernelKind { rbf, linear };

struct KpcaModel {
    Matrix training_points;
    KernelKind kernel = KernelKind::rbf;
    double gamma = 1.0;
    Matrix alphas;  // n x k, column j = eigenvector / sqrt(eigenvalue)
    std::vector<double> eigenvalues;
    std::vector<double> explained_variance_ratios;
    Vector row_means;  // column means of the training kernel matrix
    double grand_mean = 0.0;
    bool clamped = false;

    int k() const { return static_cast<int>(alphas.cols()); }
};

inline Matrix kernel_matrix(const Matrix& a, const Matrix& b, KernelKind kind, double gamma) {
    if (kind == KernelKind::linear) return a * b.transpose();
    return (-gamma * squared_distances(a, b)).array().exp().matrix();
}

/// 1 / (d * mean per-feature population variance) of the fit data.
inline double default_kpca_gamma(const Matrix& x) {
    const RowVector mean = x.colwise().mean();
    const double total = (x.rowwise() - mean).squaredNorm() / static_cast<double>(x.rows());
    require(total > 0.0, ErrorKind::DegenerateData, "all rows are identical (zero variance)");
    return 1.0 / total;
}

inline KpcaModel fit_kpca(const Matrix& x, const ReductionSpec& spec, std::optional<double> gamma = std::nullopt,
                          KernelKind kind = KernelKind::rbf) {
    spec.validate();
    const Eigen::Index n = x.rows();
    require(n >= 2, ErrorKind::DegenerateData, "KPCA needs at least two rows");
    KpcaModel model;
    model.kernel = kind;
    model.gamma = gamma ? *gamma : (kind == KernelKind::rbf ? default_kpca_gamma(x) : 1.0);
    require(model.gamma > 0.0 && std::isfinite(model.gamma), ErrorKind::InvalidArgument, "gamma must be positive");
    model.training_points = x;

    const Matrix k = kernel_matrix(x, x, kind, model.gamma);
    require(k.allFinite(), ErrorKind::NonFiniteKernel, "kernel matrix has non-finite entries");
    model.row_means = k.colwise().mean().transpose();
    model.grand_mean = model.row_means.mean();
    Matrix kc = k;
    kc.rowwise() -= model.row_means.transpose();
    kc.colwise() -= model.row_means;
    kc.array() += model.grand_mean;

    const auto eig = symmetric_eigen(kc);
    double total = 0.0;
    std::vector<double> kept;
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        if (eig.values(j) > 1e-12) {
            kept.push_back(eig.values(j));
            total += eig.values(j);
        }
    }
    require(!kept.empty(), ErrorKind::DegenerateData, "centered kernel matrix has no positive eigenvalue");
    std::vector<double> ratios;
    for (double v : kept) ratios.push_back(v / total);

    const int dim = detail::select_dimension(ratios, spec, model.clamped);
    model.alphas.resize(n, dim);
    for (int j = 0; j < dim; ++j) {
        model.alphas.col(j) = eig.vectors.col(j) / std::sqrt(kept[static_cast<std::size_t>(j)]);
        model.eigenvalues.push_back(kept[static_cast<std::size_t>(j)]);
        model.explained_variance_ratios.push_back(ratios[static_cast<std::size_t>(j)]);
    }
    return model;
}

inline Matrix transform_kpca(const KpcaModel& model, const Matrix& x) {
    require(x.cols() == model.training_points.cols(), ErrorKind::DimensionMismatch,
            "KPCA fit on " + std::to_string(model.training_points.cols()) + " columns, got " + std::to_string(x.cols()));
    Matrix k = kernel_matrix(x, model.training_points, model.kernel, model.gamma);
    require(k.allFinite(), ErrorKind::NonFiniteKernel, "cross-kernel has non-finite entries");
    const Vector query_means = k.rowwise().mean();
    k.rowwise() -= model.row_means.transpose();
    k.colwise() -= query_means;
    k.array() += model.grand_mean;
    return k * model.alphas;
}

// ---------------------------------------------------------------------------
// Uniform wrapper used by the evaluation pipeline
// ---------------------------------------------------------------------------

struct FittedReduction {
    ReductionSpec spec;
    std::variant<std::monostate, PcaModel, KpcaModel> model;

    Matrix transform(const Matrix& x) const {
        if (const auto* p = std::get_if<PcaModel>(&model)) return transform_pca(*p, x);
        if (const auto* k = std::get_if<KpcaModel>(&model)) return transform_kpca(*k, x);
        return x;
    }

    int output_dimension(Eigen::Index input_cols) const {
        if (const auto* p = std::get_if<PcaModel>(&model)) return p->k();
        if (const auto* k = std::get_if<KpcaModel>(&model)) return k->k();
        return static_cast<int>(input_cols);
    }
};

inline FittedReduction fit_reduction(const Matrix& x, const ReductionSpec& spec,
                                     std::optional<double> kpca_gamma = std::nullopt) {
    switch (spec.method) {
        case ReductionMethod::pca: return {spec, fit_pca(x, spec)};
        case ReductionMethod::kpca: return {spec, fit_kpca(x, spec, kpca_gamma)};
        case ReductionMethod::none: break;
    }
    return {spec, std::monostate{}};
}

// ---------------------------------------------------------------------------
// JSON layout:
//   pca:  {"type":"pca","mean":[d],"components":[[d]...k],"explained_variance":[k],"ratios":[k]}
//   kpca: {"type":"kpca","kernel":"rbf"|"linear","gamma":g,"training_points":[[d]...n],
//          "alphas":[[k]...n],"eigenvalues":[k],"ratios":[k],"row_means":[n],"grand_mean":m}
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index cols_if_empty = 0) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : cols_if_empty;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        require(static_cast<Eigen::Index>(j.at(r).size()) == cols, ErrorKind::Config, "ragged matrix in JSON");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    }
    return m;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Eigen::Ref<const Vector>& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

inline nlohmann::json to_json(const PcaModel& m) {
    return {{"type", "pca"},
            {"mean", detail::to_std(m.mean.transpose())},
            {"components", detail::matrix_to_json(m.components)},
            {"explained_variance", m.explained_variance},
            {"ratios", m.explained_variance_ratios}};
}

inline PcaModel pca_from_json(const nlohmann::json& j) {
    PcaModel m;
    m.mean = detail::vector_from_json(j.at("mean")).transpose();
    m.components = detail::matrix_from_json(j.at("components"), m.mean.size());
    m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance_ratios = j.at("ratios").get<std::vector<double>>();
    return m;
}

inline nlohmann::json to_json(const KpcaModel& m) {
    return {{"type", "kpca"},
            {"kernel", m.kernel == KernelKind::rbf ? "rbf" : "linear"},
            {"gamma", m.gamma},
            {"training_points", detail::matrix_to_json(m.training_points)},
            {"alphas", detail::matrix_to_json(m.alphas)},
            {"eigenvalues", m.eigenvalues},
            {"ratios", m.explained_variance_ratios},
            {"row_means", detail::to_std(m.row_means)},
            {"grand_mean", m.grand_mean}};
}

inline KpcaModel kpca_from_json(const nlohmann::json& j) {
    KpcaModel m;
    m.kernel = j.at("kernel").get<std::string>() == "linear" ? KernelKind::linear : KernelKind::rbf;
    m.gamma = j.at("gamma").get<double>();
    m.training_points = detail::matrix_from_json(j.at("training_points"));
    m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    m.alphas = detail::matrix_from_json(j.at("alphas"), static_cast<Eigen::Index>(m.eigenvalues.size()));
    m.explained_variance_ratios = j.at("ratios").get<std::vector<double>>();
    m.row_means = detail::vector_from_json(j.at("row_means"));
    m.grand_mean = j.at("grand_mean").get<double>();
    return m;
}

}  // namespace gazeclf
