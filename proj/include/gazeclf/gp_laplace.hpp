#pragma once

// Binary Gaussian-process classification with a logistic likelihood and the
// Laplace approximation (Rasmussen & Williams, GPML, algorithms 3.1 / 3.2).
//
// Kernel:      k(x, x') = signal_variance * exp(-|x - x'|^2 / (2 bandwidth^2)),
//              plus a diagonal jitter on the training Gram matrix.
// Mode:        Newton iterations on  log p(y|f) - f' K^-1 f / 2  using the
//              B = I + W^1/2 K W^1/2 Cholesky factorisation.
// Prediction:  latent mean  m = k*' (t - pi(f^)),
//              variance     v = k(x*,x*) - |L \ (W^1/2 k*)|^2,
//              probability  sigma(m / sqrt(1 + pi v / 8))   (MacKay's probit
//              approximation of the logistic-Gaussian integral).

#include <cmath>
#include <numbers>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/linalg.hpp"
#include "gazeclf/logreg.hpp"

namespace gazeclf {

struct GpModel {
    Matrix train;
    double bandwidth = 1.0;
    double signal_variance = 1.0;
    double jitter = 1e-8;
    Vector latent_mode;       // f^
    Vector score;             // grad log p(y | f^) = t - pi
    Vector sqrt_w;            // W^1/2 at the mode
    Matrix chol_lower;        // L with L L' = B
    int iterations = 0;
};

/// Kernel from precomputed squared distances.
inline Matrix gp_kernel_sq(const Matrix& sq_dist, double bandwidth, double signal_variance) {
    const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
    return signal_variance * (-scale * sq_dist).array().exp().matrix();
}

inline Matrix gp_kernel(const Matrix& a, const Matrix& b, double bandwidth, double signal_variance) {
    return gp_kernel_sq(squared_distances(a, b), bandwidth, signal_variance);
}

struct GpOptions {
    double tol = 1e-10;   // on the max change of the latent mode
    int max_iter = 100;
};

namespace detail {

inline double gp_log_likelihood(const Vector& f, const Vector& t) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) total += log_sigmoid((2.0 * t(i) - 1.0) * f(i));
    return total;
}

}  // namespace detail

/// `train_sq_dist` must equal squared_distances(x, x); grid search shares it
/// across kernel settings.
inline GpModel fit_gp_laplace_sq(const Matrix& x, const Matrix& train_sq_dist, const std::vector<int>& y,
                                 double bandwidth, double signal_variance, GpOptions opts = {}) {
    require(bandwidth > 0.0 && signal_variance > 0.0 && std::isfinite(bandwidth) && std::isfinite(signal_variance),
            ErrorKind::InvalidArgument, "GP kernel parameters must be positive");
    require(static_cast<std::size_t>(x.rows()) == y.size() && x.rows() > 0, ErrorKind::DimensionMismatch,
            "rows and labels differ");
    const Eigen::Index n = x.rows();
    Vector t(n);
    for (Eigen::Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)];
    const Matrix base = gp_kernel_sq(train_sq_dist, bandwidth, signal_variance);
    require(base.allFinite(), ErrorKind::NonFiniteKernel, "GP kernel has non-finite entries");

    for (double jitter : {1e-8, 1e-7, 1e-6}) {
        Matrix k = base;
        k.diagonal().array() += jitter;

        Vector f = Vector::Zero(n);
        Vector a = Vector::Zero(n);
        double psi = detail::gp_log_likelihood(f, t);
        bool factor_failed = false;
        GpModel model;
        model.iterations = 0;
        for (; model.iterations < opts.max_iter; ++model.iterations) {
            Vector pi(n);
            for (Eigen::Index i = 0; i < n; ++i) pi(i) = sigmoid(f(i));
            const Vector w = pi.array() * (1.0 - pi.array());
            const Vector sw = w.cwiseSqrt();
            Matrix bmat = sw.asDiagonal() * k * sw.asDiagonal();
            bmat.diagonal().array() += 1.0;
            const Eigen::LLT<Matrix> llt(bmat);
            if (llt.info() != Eigen::Success) {
                factor_failed = true;
                break;
            }
            const Vector b = w.cwiseProduct(f) + (t - pi);
            const Vector rhs = sw.cwiseProduct(k * b);
            const Vector a_newton = b - sw.cwiseProduct(llt.solve(rhs));

            // Damped update: halve towards the previous a until psi does not drop.
            double step = 1.0;
            Vector a_next = a_newton;
            Vector f_next = k * a_next;
            double psi_next = -0.5 * a_next.dot(f_next) + detail::gp_log_likelihood(f_next, t);
            for (int h = 0; h < 30 && psi_next < psi; ++h) {
                step *= 0.5;
                a_next = a + step * (a_newton - a);
                f_next = k * a_next;
                psi_next = -0.5 * a_next.dot(f_next) + detail::gp_log_likelihood(f_next, t);
            }
            const double change = (f_next - f).cwiseAbs().maxCoeff();
            a = a_next;
            f = f_next;
            psi = psi_next;
            if (change < opts.tol) {
                ++model.iterations;
                break;
            }
        }
        if (factor_failed) continue;

        model.train = x;
        model.bandwidth = bandwidth;
        model.signal_variance = signal_variance;
        model.jitter = jitter;
        model.latent_mode = f;
        Vector pi(n);
        for (Eigen::Index i = 0; i < n; ++i) pi(i) = sigmoid(f(i));
        model.score = t - pi;
        model.sqrt_w = (pi.array() * (1.0 - pi.array())).sqrt();
        Matrix bmat = model.sqrt_w.asDiagonal() * k * model.sqrt_w.asDiagonal();
        bmat.diagonal().array() += 1.0;
        const Eigen::LLT<Matrix> llt(bmat);
        if (llt.info() != Eigen::Success) continue;
        model.chol_lower = llt.matrixL();
        return model;
    }
    fail(ErrorKind::IllConditionedKernel, "Cholesky of I + W^1/2 K W^1/2 failed with jitter up to 1e-6");
}

inline GpModel fit_gp_laplace(const Matrix& x, const std::vector<int>& y, double bandwidth, double signal_variance,
                              GpOptions opts = {}) {
    return fit_gp_laplace_sq(x, squared_distances(x, x), y, bandwidth, signal_variance, opts);
}

struct GpPrediction {
    std::vector<double> probability;
    std::vector<double> latent_mean;
    std::vector<double> latent_variance;
};

/// `cross_sq_dist` is squared_distances(rows, model.train), m x n.
inline GpPrediction predict_gp_sq(const GpModel& model, const Matrix& cross_sq_dist) {
    require(cross_sq_dist.cols() == model.train.rows(), ErrorKind::DimensionMismatch, "GP cross distances mismatch");
    const Matrix ks = gp_kernel_sq(cross_sq_dist, model.bandwidth, model.signal_variance);
    const Vector mean = ks * model.score;
    const Matrix v = model.chol_lower.triangularView<Eigen::Lower>().solve(model.sqrt_w.asDiagonal() * ks.transpose());
    GpPrediction out;
    for (Eigen::Index i = 0; i < cross_sq_dist.rows(); ++i) {
        const double var = std::max(model.signal_variance - v.col(i).squaredNorm(), 0.0);
        const double kappa = 1.0 / std::sqrt(1.0 + std::numbers::pi * var / 8.0);
        out.latent_mean.push_back(mean(i));
        out.latent_variance.push_back(var);
        out.probability.push_back(sigmoid(kappa * mean(i)));
    }
    return out;
}

inline GpPrediction predict_gp(const GpModel& model, const Matrix& rows) {
    require(rows.cols() == model.train.cols(), ErrorKind::DimensionMismatch, "GP feature dimension mismatch");
    return predict_gp_sq(model, squared_distances(rows, model.train));
}

inline std::vector<double> predict_proba_gp(const GpModel& model, const Matrix& rows) {
    return predict_gp(model, rows).probability;
}

}  // namespace gazeclf
