#pragma once

// L2-regularised logistic regression fitted by damped Newton iterations.
//
// Maximises  l(w, b) = sum_i log sigma(s_i (w.x_i + b)) - (l2/2) |w|^2,
// s_i = +1 for positives and -1 otherwise; the bias is unpenalised.
// When d > n and l2 > 0 the Newton system is solved through the n x n
// Woodbury form, so cost stays O(n^2 d) per fit.

#include <cmath>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/linalg.hpp"

namespace gazeclf {

struct LogRegModel {
    Vector weights;
    double bias = 0.0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;  // infinity norm at the returned iterate
};

struct LogRegOptions {
    double tol = 1e-8;
    int max_iter = 100;
};

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log sigma(z) without overflow.
inline double log_sigmoid(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

inline double logreg_objective(const Matrix& x, const std::vector<int>& y, double l2, const Vector& w, double b) {
    const Vector margin = (x * w).array() + b;
    double total = 0.0;
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
        const double s = y[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
        total += log_sigmoid(s * margin(i));
    }
    return total - 0.5 * l2 * w.squaredNorm();
}

/// Gradient of logreg_objective; the last entry is the bias component.
inline Vector logreg_gradient(const Matrix& x, const std::vector<int>& y, double l2, const Vector& w, double b) {
    const Vector margin = (x * w).array() + b;
    Vector resid(margin.size());
    for (Eigen::Index i = 0; i < margin.size(); ++i) resid(i) = y[static_cast<std::size_t>(i)] - sigmoid(margin(i));
    Vector g(w.size() + 1);
    g.head(w.size()) = x.transpose() * resid - l2 * w;
    g(w.size()) = resid.sum();
    return g;
}

namespace detail {

/// Solves the (d+1) Newton system H delta = g with
/// H = [X'SX + l2 I, X'S1; 1'SX, 1'S1].
inline Vector logreg_newton_step(const Matrix& x, const Matrix* gram, const Vector& s, double l2, const Vector& g) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (gram != nullptr && l2 > 0.0) {
        // A^-1 v = (v - X' S^1/2 M^-1 S^1/2 X v) / l2,  M = l2 I + S^1/2 X X' S^1/2.
        const Vector rs = s.cwiseSqrt();
        Matrix m = rs.asDiagonal() * (*gram) * rs.asDiagonal();
        m.diagonal().array() += l2;
        const Eigen::LLT<Matrix> llt(m);
        auto apply_inverse = [&](const Vector& v) -> Vector {
            const Vector t = rs.cwiseProduct(x * v);
            return (v - x.transpose() * rs.cwiseProduct(llt.solve(t))) / l2;
        };
        const Vector u = x.transpose() * s;
        const double c = s.sum();
        const Vector ainv_g = apply_inverse(g.head(d));
        const Vector ainv_u = apply_inverse(u);
        const double schur = std::max(c - u.dot(ainv_u), 1e-300);
        const double db = (g(d) - u.dot(ainv_g)) / schur;
        Vector delta(d + 1);
        delta.head(d) = ainv_g - db * ainv_u;
        delta(d) = db;
        return delta;
    }
    Matrix xa(n, d + 1);
    xa.leftCols(d) = x;
    xa.col(d).setOnes();
    Matrix h = xa.transpose() * s.asDiagonal() * xa;
    h.diagonal().head(d).array() += l2;
    // Keeps the unregularised problem solvable on rank-deficient data.
    h.diagonal().array() += 1e-10 * std::max(1.0, h.diagonal().maxCoeff());
    return h.ldlt().solve(g);
}

}  // namespace detail

/// `gram`, when given, must equal x * x' and saves recomputing it across
/// several fits on the same rows.
inline LogRegModel fit_logreg(const Matrix& x, const std::vector<int>& y, double l2, LogRegOptions opts = {},
                              const Matrix* shared_gram = nullptr) {
    require(l2 >= 0.0 && std::isfinite(l2), ErrorKind::InvalidArgument, "l2 strength must be non-negative");
    require(static_cast<std::size_t>(x.rows()) == y.size() && x.rows() > 0, ErrorKind::DimensionMismatch,
            "rows and labels differ");
    const Eigen::Index d = x.cols();
    Matrix gram;
    const bool dual = l2 > 0.0 && d > x.rows();
    if (dual && shared_gram == nullptr) gram = x * x.transpose();
    const Matrix* gram_ptr = dual ? (shared_gram ? shared_gram : &gram) : nullptr;

    LogRegModel model;
    model.weights = Vector::Zero(d);
    double objective = logreg_objective(x, y, l2, model.weights, model.bias);
    for (model.iterations = 0; model.iterations < opts.max_iter; ++model.iterations) {
        const Vector g = logreg_gradient(x, y, l2, model.weights, model.bias);
        model.gradient_norm = g.cwiseAbs().maxCoeff();
        if (model.gradient_norm < opts.tol) {
            model.converged = true;
            return model;
        }
        const Vector margin = (x * model.weights).array() + model.bias;
        Vector s(margin.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            const double p = sigmoid(margin(i));
            s(i) = std::max(p * (1.0 - p), 1e-16);
        }
        const Vector delta = detail::logreg_newton_step(x, gram_ptr, s, l2, g);

        double step = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
            const Vector w_try = model.weights + step * delta.head(d);
            const double b_try = model.bias + step * delta(d);
            const double obj_try = logreg_objective(x, y, l2, w_try, b_try);
            if (obj_try >= objective) {
                model.weights = w_try;
                model.bias = b_try;
                objective = obj_try;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    const Vector g = logreg_gradient(x, y, l2, model.weights, model.bias);
    model.gradient_norm = g.cwiseAbs().maxCoeff();
    model.converged = model.gradient_norm < opts.tol;
    return model;
}

inline std::vector<double> predict_proba_logreg(const LogRegModel& model, const Matrix& rows) {
    require(rows.cols() == model.weights.size(), ErrorKind::DimensionMismatch, "logreg feature dimension mismatch");
    const Vector margin = (rows * model.weights).array() + model.bias;
    std::vector<double> out(static_cast<std::size_t>(margin.size()));
    for (Eigen::Index i = 0; i < margin.size(); ++i) out[static_cast<std::size_t>(i)] = sigmoid(margin(i));
    return out;
}

}  // namespace gazeclf
