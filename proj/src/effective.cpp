#include "bubbly/effective.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <fftw3.h>

#include "bubbly/errors.hpp"
#include "bubbly/krylov.hpp"

namespace bubbly {

VoxelGrid::VoxelGrid(const Vec3& lo, double side, int m) : lo_(lo), side_(side), m_(m), h_(side / m) {
    if (m < 1) throw PreconditionError("voxel grid needs at least one cell per axis");
    if (!(side > 0.0)) throw PreconditionError("voxel grid side must be positive");
}

namespace {

Vec3 cube_lo(const Domain& d) {
    const Vec3 ext = d.bounding_hi() - d.bounding_lo();
    const double side = ext.maxCoeff();
    return 0.5 * (d.bounding_lo() + d.bounding_hi()) - Vec3::Constant(0.5 * side);
}

double cube_side(const Domain& d) { return (d.bounding_hi() - d.bounding_lo()).maxCoeff(); }

} // namespace

VoxelGrid::VoxelGrid(const Domain& domain, int m) : VoxelGrid(cube_lo(domain), cube_side(domain), m) {}

Vec3 VoxelGrid::center(std::size_t flat) const noexcept {
    const std::size_t mm = static_cast<std::size_t>(m_);
    const int i = static_cast<int>(flat % mm);
    const int j = static_cast<int>((flat / mm) % mm);
    const int k = static_cast<int>(flat / (mm * mm));
    return center(i, j, k);
}

double equal_volume_radius(double h) { return std::cbrt(3.0 * h * h * h / (4.0 * kPi)); }

Complex cell_kernel(double d, double k, double h) {
    const double vol = h * h * h;
    const double a = equal_volume_radius(h);
    if (d >= a) {
        const double s = -vol / (4.0 * kPi * d);
        if (k == 0.0) return {s, 0.0};
        return s * Complex(std::cos(k * d), std::sin(k * d));
    }
    const double static_part = -(0.5 * a * a - d * d / 6.0);
    if (k == 0.0) return {static_part, 0.0};
    // G(d,k) - G(d,0) = -(exp(ikd) - 1) / (4 pi d), limit -ik/(4 pi) at d = 0.
    Complex remainder;
    if (d * k < 1e-6) {
        remainder = Complex(k * k * d / (8.0 * kPi), -k / (4.0 * kPi));
    } else {
        remainder = -(Complex(std::cos(k * d), std::sin(k * d)) - 1.0) / (4.0 * kPi * d);
    }
    return static_part + vol * remainder;
}

std::vector<Complex> volume_potential(const VoxelGrid& grid, const std::vector<Complex>& density,
                                      double k, const std::vector<Vec3>& points) {
    if (density.size() != grid.size()) throw PreconditionError("volume_potential: density size mismatch");
    std::vector<Vec3> src;
    std::vector<Complex> rho;
    for (std::size_t q = 0; q < density.size(); ++q) {
        if (density[q] != Complex(0.0, 0.0)) {
            src.push_back(grid.center(q));
            rho.push_back(density[q]);
        }
    }
    const double h = grid.h();
    const double vol = h * h * h;
    const double a = equal_volume_radius(h);
    const double pref = -vol / (4.0 * kPi);
    std::vector<Complex> out(points.size());
    const long np = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long p = 0; p < np; ++p) {
        const Vec3 x = points[static_cast<std::size_t>(p)];
        double re = 0.0, im = 0.0;
        for (std::size_t q = 0; q < src.size(); ++q) {
            const double d = (x - src[q]).norm();
            Complex kern;
            if (d >= a) {
                const double s = pref / d;
                if (k == 0.0) {
                    kern = {s, 0.0};
                } else {
                    kern = {s * std::cos(k * d), s * std::sin(k * d)};
                }
            } else {
                kern = cell_kernel(d, k, h);
            }
            const Complex c = kern * rho[q];
            re += c.real();
            im += c.imag();
        }
        out[static_cast<std::size_t>(p)] = {re, im};
    }
    return out;
}

namespace {

/// Zero-padded FFT convolution with the translation-invariant cell kernel.
class KernelConvolver {
  public:
    KernelConvolver(int m, double h, double k) : m_(m), p_(2 * m) {
        const std::size_t total = static_cast<std::size_t>(p_) * p_ * p_;
        buf_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * total));
        if (!buf_) throw std::bad_alloc();
        auto* raw = reinterpret_cast<fftw_complex*>(buf_);
        fwd_ = fftw_plan_dft_3d(p_, p_, p_, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_3d(p_, p_, p_, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);

        auto wrap = [&](int i) { return i < m_ ? i : i - p_; };
        for (int c = 0; c < p_; ++c)
            for (int b = 0; b < p_; ++b)
                for (int a = 0; a < p_; ++a) {
                    const double d = h * std::sqrt(double(wrap(a)) * wrap(a) + double(wrap(b)) * wrap(b) +
                                                   double(wrap(c)) * wrap(c));
                    buf_[flat(a, b, c)] = cell_kernel(d, k, h);
                }
        fftw_execute(fwd_);
        kernel_hat_.assign(buf_, buf_ + total);
        const double scale = 1.0 / static_cast<double>(total);
        for (auto& v : kernel_hat_) v *= scale;
    }

    KernelConvolver(const KernelConvolver&) = delete;
    KernelConvolver& operator=(const KernelConvolver&) = delete;

    ~KernelConvolver() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    /// out[i] = sum_j K(i - j) in[j] over the m^3 grid.
    void apply(const Complex* in, Complex* out) {
        const std::size_t total = static_cast<std::size_t>(p_) * p_ * p_;
        std::fill(buf_, buf_ + total, Complex(0.0, 0.0));
        for (int c = 0; c < m_; ++c)
            for (int b = 0; b < m_; ++b)
                for (int a = 0; a < m_; ++a) buf_[flat(a, b, c)] = in[a + m_ * (b + std::size_t(m_) * c)];
        fftw_execute(fwd_);
        for (std::size_t q = 0; q < total; ++q) buf_[q] *= kernel_hat_[q];
        fftw_execute(bwd_);
        for (int c = 0; c < m_; ++c)
            for (int b = 0; b < m_; ++b)
                for (int a = 0; a < m_; ++a) out[a + m_ * (b + std::size_t(m_) * c)] = buf_[flat(a, b, c)];
    }

  private:
    std::size_t flat(int a, int b, int c) const {
        return static_cast<std::size_t>(a) + static_cast<std::size_t>(p_) * (b + static_cast<std::size_t>(p_) * c);
    }

    int m_;
    int p_;
    Complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
    std::vector<Complex> kernel_hat_;
};

} // namespace

GridField GridField::sample(const Domain& domain, int m, double k, const ComplexField& psi,
                            const RealField& V) {
    GridField f{VoxelGrid(domain, m), k, {}, {}};
    f.values.resize(f.grid.size());
    f.potential.resize(f.grid.size());
    for (std::size_t q = 0; q < f.grid.size(); ++q) {
        const Vec3 x = f.grid.center(q);
        f.values[q] = psi(x);
        f.potential[q] = V(x);
    }
    return f;
}

GridField ls_solve(const Domain& domain, const RealField& V, const ComplexField& incident, Wavenumber k,
                   int m, const LsOptions& options) {
    if (m < 16) throw PreconditionError("ls_solve: grid resolution must be at least 16");
    if (!(options.tol > 0.0)) throw PreconditionError("ls_solve: tolerance must be positive");

    GridField field{VoxelGrid(domain, m), k.value(), {}, {}};
    const std::size_t n = field.grid.size();
    field.potential.resize(n);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
    bool any_potential = false;
    for (std::size_t q = 0; q < n; ++q) {
        const Vec3 x = field.grid.center(q);
        field.potential[q] = V(x);
        if (!std::isfinite(field.potential[q])) throw PreconditionError("ls_solve: potential is not finite");
        any_potential = any_potential || field.potential[q] != 0.0;
        rhs[static_cast<Eigen::Index>(q)] = incident(x);
    }

    field.values.assign(rhs.data(), rhs.data() + n);
    if (!any_potential) return field;

    KernelConvolver conv(m, field.grid.h(), k.value());
    std::vector<Complex> weighted(n), convolved(n);
    auto apply = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        for (std::size_t q = 0; q < n; ++q) weighted[q] = field.potential[q] * in[static_cast<Eigen::Index>(q)];
        conv.apply(weighted.data(), convolved.data());
        out.resize(in.size());
        for (std::size_t q = 0; q < n; ++q)
            out[static_cast<Eigen::Index>(q)] = in[static_cast<Eigen::Index>(q)] - convolved[q];
    };

    GmresOptions gopt;
    const double bnorm = rhs.norm();
    gopt.target_residual = options.tol * bnorm;
    gopt.restart = options.restart;
    gopt.max_iterations = options.max_iterations > 0
                              ? options.max_iterations
                              : static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(n))));
    const GmresResult res = gmres(apply, rhs, gopt, &rhs);
    field.iterations = res.iterations;
    field.relative_residual = bnorm > 0.0 ? res.residual_norm / bnorm : 0.0;
    if (!res.converged)
        throw ConvergenceError("Lippmann-Schwinger iteration did not converge", field.relative_residual,
                               res.iterations);
    field.values.assign(res.x.data(), res.x.data() + n);
    return field;
}

std::vector<Complex> ls_evaluate(const GridField& field, const std::vector<Vec3>& points,
                                 const ComplexField& incident) {
    std::vector<Complex> density(field.values.size());
    for (std::size_t q = 0; q < density.size(); ++q) density[q] = field.potential[q] * field.values[q];
    std::vector<Complex> out = volume_potential(field.grid, density, field.k, points);
    for (std::size_t p = 0; p < points.size(); ++p) out[p] += incident(points[p]);
    return out;
}

Complex ls_evaluate(const GridField& field, const Vec3& x, const ComplexField& incident) {
    return ls_evaluate(field, std::vector<Vec3>{x}, incident).front();
}

PdeResidual pde_residual(const GridField& field) {
    const int m = field.grid.m();
    if (m < 16) throw PreconditionError("pde_residual: grid resolution must be at least 16");
    const double h2 = field.grid.h() * field.grid.h();
    const double k2 = field.k * field.k;
    double psi_max = 0.0;
    for (const auto& v : field.values) psi_max = std::max(psi_max, std::abs(v));
    PdeResidual out{0.0, 0.0, 0, 0};
    if (psi_max == 0.0) return out;
    const double norm = (k2 > 0.0 ? k2 : 1.0) * psi_max;

    const auto& g = field.grid;
    for (int l = 2; l < m - 2; ++l)
        for (int j = 2; j < m - 2; ++j)
            for (int i = 2; i < m - 2; ++i) {
                const std::size_t c = g.index(i, j, l);
                const std::size_t nb[6] = {g.index(i - 1, j, l), g.index(i + 1, j, l), g.index(i, j - 1, l),
                                           g.index(i, j + 1, l), g.index(i, j, l - 1), g.index(i, j, l + 1)};
                Complex lap = -6.0 * field.values[c];
                bool jump = false;
                for (std::size_t q : nb) {
                    lap += field.values[q];
                    jump = jump || field.potential[q] != field.potential[c];
                }
                lap /= h2;
                const double r = std::abs(lap + (k2 - field.potential[c]) * field.values[c]) / norm;
                if (jump) {
                    out.interface = std::max(out.interface, r);
                    ++out.interface_count;
                } else {
                    out.interior = std::max(out.interior, r);
                    ++out.interior_count;
                }
            }
    return out;
}

} // namespace bubbly
