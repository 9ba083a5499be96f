#include "bubbly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "bubbly/errors.hpp"

namespace bubbly {

Domain Domain::ball(const Vec3& center, double radius) {
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
    Domain d;
    d.kind_ = Kind::ball;
    d.center_ = center;
    d.radius_ = radius;
    d.lo_ = center.array() - radius;
    d.hi_ = center.array() + radius;
    return d;
}

Domain Domain::box(const Vec3& lo, const Vec3& hi) {
    if (!(lo.array() < hi.array()).all()) throw PreconditionError("box requires lo < hi componentwise");
    Domain d;
    d.kind_ = Kind::box;
    d.lo_ = lo;
    d.hi_ = hi;
    d.center_ = 0.5 * (lo + hi);
    d.radius_ = 0.5 * (hi - lo).norm();
    return d;
}

double Domain::volume() const noexcept {
    if (kind_ == Kind::ball) return 4.0 * kPi * radius_ * radius_ * radius_ / 3.0;
    return (hi_ - lo_).prod();
}

bool Domain::contains(const Vec3& x) const noexcept {
    constexpr double rel = 1e-12;
    if (kind_ == Kind::ball) return (x - center_).squaredNorm() <= radius_ * radius_ * (1.0 + rel);
    const Vec3 slack = rel * (hi_ - lo_);
    return ((x - lo_ + slack).array() >= 0.0).all() && ((hi_ + slack - x).array() >= 0.0).all();
}

Vec3 Domain::bounding_lo() const noexcept { return lo_; }
Vec3 Domain::bounding_hi() const noexcept { return hi_; }

double Domain::diameter() const noexcept {
    return kind_ == Kind::ball ? 2.0 * radius_ : (hi_ - lo_).norm();
}

std::string to_string(Generator g) {
    switch (g) {
    case Generator::periodic: return "periodic";
    case Generator::jittered: return "jittered";
    case Generator::custom: return "custom";
    }
    return "custom";
}

Generator generator_from_string(const std::string& s) {
    if (s == "periodic") return Generator::periodic;
    if (s == "jittered") return Generator::jittered;
    if (s == "custom") return Generator::custom;
    throw PreconditionError("unknown generator '" + s + "'");
}

double min_separation(const std::vector<Vec3>& centers) {
    const std::size_t n = centers.size();
    if (n < 2) throw PreconditionError("min_separation needs at least two points");
    double best2 = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best2) schedule(dynamic, 64)
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) best2 = std::min(best2, (centers[i] - centers[j]).squaredNorm());
    }
    return std::sqrt(best2);
}

double min_separation(const PointConfiguration& config) { return min_separation(config.centers()); }

PointConfiguration::PointConfiguration(std::vector<Vec3> centers, Domain domain, Generator generator,
                                       std::uint64_t seed)
    : centers_(std::move(centers)), domain_(std::move(domain)), generator_(generator), seed_(seed) {
    for (const auto& c : centers_)
        if (!domain_.contains(c)) throw PreconditionError("configuration center lies outside the domain");
    if (centers_.size() >= 2) {
        const double sep = min_separation(centers_);
        if (!(sep > 0.0)) throw PreconditionError("configuration contains coincident centers");
        const double scale = std::cbrt(static_cast<double>(centers_.size()));
        eta_ = sep * scale;
        // Shave rounding so that eta * N^(-1/3) never exceeds the realized separation.
        const double inv = std::pow(static_cast<double>(centers_.size()), -1.0 / 3.0);
        while (eta_ / scale > sep || eta_ * inv > sep) eta_ = std::nextafter(eta_, 0.0);
    }
}

double PointConfiguration::separation_radius() const noexcept {
    if (centers_.empty()) return 0.0;
    return eta_ / std::cbrt(static_cast<double>(centers_.size()));
}

double PointConfiguration::density(const Vec3& x) const noexcept {
    return domain_.indicator(x) / domain_.volume();
}

std::string PointConfiguration::fingerprint() const {
    // FNV-1a over the raw coordinate bytes.
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& c : centers_) {
        for (int a = 0; a < 3; ++a) {
            unsigned char bytes[sizeof(double)];
            const double v = c[a];
            std::memcpy(bytes, &v, sizeof v);
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 1099511628211ULL;
            }
        }
    }
    std::ostringstream os;
    os << "N" << centers_.size() << "-" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

namespace {

struct Lattice {
    std::vector<Vec3> points;
    Vec3 spacing;
};

Lattice lattice_points(const Domain& domain, int n) {
    if (n < 2) throw DegenerateConfigurationError("n_per_axis must be at least 2");
    Lattice lat;
    if (domain.kind() == Domain::Kind::box) {
        lat.spacing = (domain.hi() - domain.lo()) / n;
        lat.points.reserve(static_cast<std::size_t>(n) * n * n);
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const Vec3 offs((ix + 0.5) * lat.spacing.x(), (iy + 0.5) * lat.spacing.y(),
                                    (iz + 0.5) * lat.spacing.z());
                    lat.points.emplace_back(domain.lo() + offs);
                }
    } else {
        const double h = 2.0 * domain.radius() / n;
        lat.spacing = Vec3::Constant(h);
        const int half = n / 2;
        for (int iz = -half; iz <= half; ++iz)
            for (int iy = -half; iy <= half; ++iy)
                for (int ix = -half; ix <= half; ++ix) {
                    const Vec3 p = domain.center() + h * Vec3(ix, iy, iz);
                    if (domain.contains(p)) lat.points.push_back(p);
                }
    }
    if (lat.points.size() < 2)
        throw DegenerateConfigurationError("lattice retained fewer than two points inside the domain");
    return lat;
}

} // namespace

PointConfiguration generate_periodic(const Domain& domain, int n_per_axis) {
    Lattice lat = lattice_points(domain, n_per_axis);
    return PointConfiguration(std::move(lat.points), domain, Generator::periodic, 0);
}

PointConfiguration generate_jittered(const Domain& domain, int n_per_axis, double jitter,
                                     std::uint64_t seed) {
    if (!(jitter >= 0.0 && jitter < 0.5)) throw PreconditionError("jitter must lie in [0, 0.5)");
    Lattice lat = lattice_points(domain, n_per_axis);
    if (jitter > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        const Vec3 amp = jitter * lat.spacing;
        for (auto& p : lat.points) {
            // Redraw displacements that leave the domain; keep the lattice site if none fits.
            for (int attempt = 0; attempt < 64; ++attempt) {
                const Vec3 d(amp.x() * unit(rng), amp.y() * unit(rng), amp.z() * unit(rng));
                if (domain.contains(p + d)) {
                    p += d;
                    break;
                }
            }
        }
    }
    return PointConfiguration(std::move(lat.points), domain, Generator::jittered, seed);
}

RegularitySums regularity_sums(const PointConfiguration& config, const Vec3& x, double h) {
    const double rN = config.separation_radius();
    if (!(h >= 2.0 * rN * (1.0 - 1e-12)) || !(h > 0.0))
        throw PreconditionError("regularity_sums: h must be at least 2 r_N");
    const double n = static_cast<double>(config.size());
    double s2 = 0.0;
    double s1 = 0.0;
    for (const auto& y : config.centers()) {
        const double d = (x - y).norm();
        if (d >= h) s2 += 1.0 / (d * d);
        if (d >= 2.0 * rN && d <= 3.0 * h && d > 0.0) s1 += 1.0 / d;
    }
    return {s2 / n, s1 / n};
}

double empirical_measure(const PointConfiguration& config, const Domain& region) {
    if (config.size() == 0) return 0.0;
    const auto count = std::count_if(config.centers().begin(), config.centers().end(),
                                     [&](const Vec3& y) { return region.contains(y); });
    return static_cast<double>(count) / static_cast<double>(config.size());
}

} // namespace bubbly
