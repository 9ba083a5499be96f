#include <algorithm>
#include <cmath>

#include "bubbly/effective.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/geometry.hpp"
#include "bubbly/greens.hpp"

namespace bubbly {

double quadrature_error(const PointConfiguration& config, const RealField& f, Wavenumber k,
                        int reference_m) {
    if (reference_m < 64) throw PreconditionError("quadrature_error: reference grid must be at least 64^3");
    const std::size_t n = config.size();
    if (n == 0) throw PreconditionError("quadrature_error: empty configuration");

    const VoxelGrid grid(config.domain(), reference_m);
    std::vector<Complex> density(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Vec3 x = grid.center(q);
        const double dens = config.density(x);
        density[q] = dens == 0.0 ? 0.0 : dens * f(x);
    }
    const std::vector<Complex> integral = volume_potential(grid, density, k.value(), config.centers());

    std::vector<double> fvals(n);
    for (std::size_t i = 0; i < n; ++i) fvals[i] = f(config[i]);

    const double inv_n = 1.0 / static_cast<double>(n);
    double worst = 0.0;
    const long nl = static_cast<long>(n);
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 16)
    for (long jl = 0; jl < nl; ++jl) {
        const std::size_t j = static_cast<std::size_t>(jl);
        Complex sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j || fvals[i] == 0.0) continue;
            sum += green_radial((config[j] - config[i]).norm(), k.value()) * fvals[i];
        }
        worst = std::max(worst, std::abs(sum * inv_n - integral[j]));
    }
    return worst;
}

} // namespace bubbly
