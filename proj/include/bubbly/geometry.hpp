#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bubbly/types.hpp"

namespace bubbly {

/// Bounded region of space: a ball or an axis-aligned box.
class Domain {
  public:
    enum class Kind { ball, box };

    static Domain ball(const Vec3& center, double radius);
    static Domain box(const Vec3& lo, const Vec3& hi);

    Kind kind() const noexcept { return kind_; }
    const Vec3& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    const Vec3& lo() const noexcept { return lo_; }
    const Vec3& hi() const noexcept { return hi_; }

    double volume() const noexcept;
    /// Closed membership test. Points on the boundary (to 1e-12 relative) count as inside.
    bool contains(const Vec3& x) const noexcept;
    double indicator(const Vec3& x) const noexcept { return contains(x) ? 1.0 : 0.0; }

    /// Axis-aligned bounding box.
    Vec3 bounding_lo() const noexcept;
    Vec3 bounding_hi() const noexcept;
    double diameter() const noexcept;

  private:
    Domain() = default;

    Kind kind_ = Kind::ball;
    Vec3 center_ = Vec3::Zero();
    double radius_ = 1.0;
    Vec3 lo_ = Vec3::Zero();
    Vec3 hi_ = Vec3::Zero();
};

enum class Generator { periodic, jittered, custom };

std::string to_string(Generator g);
Generator generator_from_string(const std::string& s);

/// Bubble centers inside a domain with uniform density metadata.
///
/// The density is always the normalized indicator of the domain, so that the
/// empirical measure of the centers approximates it. `eta` is measured from
/// the realized centers: min_separation() >= eta * N^(-1/3) holds exactly.
class PointConfiguration {
  public:
    PointConfiguration(std::vector<Vec3> centers, Domain domain, Generator generator = Generator::custom,
                       std::uint64_t seed = 0);

    std::size_t size() const noexcept { return centers_.size(); }
    const std::vector<Vec3>& centers() const noexcept { return centers_; }
    const Vec3& operator[](std::size_t i) const { return centers_[i]; }
    const Domain& domain() const noexcept { return domain_; }
    Generator generator() const noexcept { return generator_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double eta() const noexcept { return eta_; }

    /// r_N = eta * N^(-1/3).
    double separation_radius() const noexcept;
    /// Uniform density: indicator / volume.
    double density(const Vec3& x) const noexcept;
    /// Short stable fingerprint of the centers, used to tie solutions to configurations.
    std::string fingerprint() const;

  private:
    std::vector<Vec3> centers_;
    Domain domain_;
    Generator generator_;
    std::uint64_t seed_;
    double eta_ = 0.0;
};

/// Symmetric lattice of spacing extent/n_per_axis clipped to the domain.
///
/// Boxes use cell-centred points (exactly n^3 of them); balls use the lattice
/// through the centre, so the centre is always a bubble.
PointConfiguration generate_periodic(const Domain& domain, int n_per_axis);

/// Periodic lattice with each point moved uniformly within +-jitter*spacing per axis.
PointConfiguration generate_jittered(const Domain& domain, int n_per_axis, double jitter,
                                     std::uint64_t seed);

double min_separation(const PointConfiguration& config);
double min_separation(const std::vector<Vec3>& centers);

struct RegularitySums {
    double s2; ///< (1/N) sum over |x-y_j| >= h of |x-y_j|^-2
    double s1; ///< (1/N) sum over 2 r_N <= |x-y_j| <= 3h of |x-y_j|^-1
};

RegularitySums regularity_sums(const PointConfiguration& config, const Vec3& x, double h);

/// Fraction of centers that lie in `region`.
double empirical_measure(const PointConfiguration& config, const Domain& region);

/// Worst discrepancy between the lattice sum of G*f and the volume integral of G*density*f.
///
/// The integral uses the cell quadrature of the effective solver on a grid of
/// `reference_m` cells per axis (at least 64).
double quadrature_error(const PointConfiguration& config, const RealField& f, Wavenumber k,
                        int reference_m = 64);

} // namespace bubbly
