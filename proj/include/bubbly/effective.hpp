#pragma once

#include <cstddef>
#include <vector>

#include "bubbly/geometry.hpp"
#include "bubbly/types.hpp"

namespace bubbly {

/// Uniform cubic voxel grid covering the bounding cube of a domain.
class VoxelGrid {
  public:
    VoxelGrid(const Domain& domain, int m);
    VoxelGrid(const Vec3& lo, double side, int m);

    int m() const noexcept { return m_; }
    double h() const noexcept { return h_; }
    double side() const noexcept { return side_; }
    const Vec3& lo() const noexcept { return lo_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(m_) * m_ * m_; }

    /// Flat index, x fastest.
    std::size_t index(int i, int j, int k) const noexcept {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(m_) * (j + static_cast<std::size_t>(m_) * k);
    }
    Vec3 center(int i, int j, int k) const noexcept {
        return lo_ + h_ * Vec3(i + 0.5, j + 0.5, k + 0.5);
    }
    Vec3 center(std::size_t flat) const noexcept;

  private:
    Vec3 lo_;
    double side_;
    int m_;
    double h_;
};

/// Radius of the sphere with the same volume as a voxel of side h.
double equal_volume_radius(double h);

/// Integral of G(x, y, k) over the voxel of side h centred a distance d from x.
///
/// Beyond the equal-volume radius a this is h^3 G(d, k). Inside it the static
/// part is the potential of the equal-volume ball, -(a^2/2 - d^2/6), plus
/// h^3 times the bounded remainder G(d,k) - G(d,0). At d = 0 the static part
/// is the self-cell value -a^2/2.
Complex cell_kernel(double d, double k, double h);

/// Integral of G(x, y, k) rho(y) over the grid, rho given per voxel.
///
/// Only voxels with nonzero density contribute. Evaluates at every point in `points`.
std::vector<Complex> volume_potential(const VoxelGrid& grid, const std::vector<Complex>& density,
                                      double k, const std::vector<Vec3>& points);

/// Collocation solution of psi - T psi = u_inc on the voxel grid.
struct GridField {
    VoxelGrid grid;
    double k;
    std::vector<Complex> values;
    std::vector<double> potential;
    int iterations = 0;
    double relative_residual = 0.0;

    Complex at(int i, int j, int l) const { return values[grid.index(i, j, l)]; }

    /// Samples analytic psi and V on a grid. Used to check the residual machinery.
    static GridField sample(const Domain& domain, int m, double k, const ComplexField& psi,
                            const RealField& V);
};

struct LsOptions {
    double tol = 1e-8;
    int restart = 80;
    int max_iterations = 0; ///< 0 means 10 * sqrt(m^3)
};

/// Solves (I - T_h) psi = u_inc by matrix-free GMRES, T_h applied through FFT convolution.
///
/// Off-diagonal entries are G(x_i, x_j, k) V(x_j) h^3; the diagonal uses the
/// equal-volume-sphere self-cell rule. Throws ConvergenceError on stagnation.
GridField ls_solve(const Domain& domain, const RealField& V, const ComplexField& incident, Wavenumber k,
                   int m, const LsOptions& options = {});

/// Evaluates w(x) = u_inc(x) + integral of G V psi at arbitrary points.
std::vector<Complex> ls_evaluate(const GridField& field, const std::vector<Vec3>& points,
                                 const ComplexField& incident);
Complex ls_evaluate(const GridField& field, const Vec3& x, const ComplexField& incident);

struct PdeResidual {
    /// Max over smooth interior voxels of |Lap_h psi + (k^2 - V) psi| / (k^2 |psi|_inf).
    double interior;
    /// Same quantity over voxels whose stencil straddles a jump in V.
    double interface;
    std::size_t interior_count;
    std::size_t interface_count;
};

/// 7-point finite-difference residual of (Delta + k^2 - V) psi, two-voxel margin.
///
/// For k = 0 the normalization drops the k^2 factor.
PdeResidual pde_residual(const GridField& field);

} // namespace bubbly
