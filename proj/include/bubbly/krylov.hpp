#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

namespace bubbly {

struct GmresOptions {
    /// Stop once the true residual 2-norm is at or below this absolute value.
    double target_residual = 0.0;
    int max_iterations = 1000;
    int restart = 80;
};

struct GmresResult {
    Eigen::VectorXcd x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Restarted GMRES for A x = b with A given as a matrix-free operator.
///
/// `apply(in, out)` must write A*in into out. Arnoldi uses modified
/// Gram-Schmidt with one reorthogonalization pass; the least-squares problem
/// is updated with Givens rotations. The true residual is recomputed at every
/// restart, so the reported residual is never the recurrence estimate.
template <class Apply>
GmresResult gmres(Apply&& apply, const Eigen::VectorXcd& b, const GmresOptions& opt,
                  const Eigen::VectorXcd* x0 = nullptr) {
    using Vec = Eigen::VectorXcd;
    using C = std::complex<double>;
    const Eigen::Index n = b.size();
    const int m = std::max(1, opt.restart);

    GmresResult res;
    res.x = x0 ? *x0 : Vec::Zero(n);
    Vec r(n), w(n);
    std::vector<Vec> basis(static_cast<std::size_t>(m) + 1, Vec(n));
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<C> cs(m), sn(m), rhs(m + 1);

    auto true_residual = [&]() {
        apply(res.x, w);
        r = b - w;
        return r.norm();
    };

    double beta = true_residual();
    res.residual_norm = beta;
    while (true) {
        if (beta <= opt.target_residual) {
            res.converged = true;
            return res;
        }
        if (res.iterations >= opt.max_iterations) return res;

        basis[0] = r / beta;
        std::fill(rhs.begin(), rhs.end(), C(0.0));
        rhs[0] = beta;
        hess.setZero();
        int used = 0;
        for (int j = 0; j < m && res.iterations < opt.max_iterations; ++j) {
            apply(basis[j], w);
            ++res.iterations;
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const C hij = basis[i].dot(w);
                    hess(i, j) += hij;
                    w -= hij * basis[i];
                }
            }
            const double wn = w.norm();
            hess(j + 1, j) = wn;
            for (int i = 0; i < j; ++i) {
                const C t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                hess(i + 1, j) = -std::conj(sn[i]) * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = t;
            }
            const C a = hess(j, j);
            const C bb = hess(j + 1, j);
            const double denom = std::sqrt(std::norm(a) + std::norm(bb));
            if (denom == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                const double absa = std::abs(a);
                const C phase = absa == 0.0 ? C(1.0) : a / absa;
                cs[j] = absa / denom;
                sn[j] = phase * std::conj(bb) / denom;
            }
            hess(j, j) = cs[j] * a + sn[j] * bb;
            hess(j + 1, j) = 0.0;
            rhs[j + 1] = -std::conj(sn[j]) * rhs[j];
            rhs[j] = cs[j] * rhs[j];
            used = j + 1;
            if (wn == 0.0 || std::abs(rhs[j + 1]) <= 0.5 * opt.target_residual) break;
            basis[j + 1] = w / wn;
        }

        // Back substitution on the triangularized Hessenberg matrix.
        std::vector<C> y(used);
        for (int i = used - 1; i >= 0; --i) {
            C acc = rhs[i];
            for (int k = i + 1; k < used; ++k) acc -= hess(i, k) * y[k];
            y[i] = acc / hess(i, i);
        }
        for (int i = 0; i < used; ++i) res.x += y[i] * basis[i];

        beta = true_residual();
        res.residual_norm = beta;
    }
}

} // namespace bubbly
