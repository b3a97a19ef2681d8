#pragma once

#include "compfeat/rng.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace compfeat {

enum class SpaceKind : std::uint8_t {
    binary = 0,            // X = {-1,+1},  k(x,x') = x x'
    circle = 1,            // X = T,        k(z,z') = Re(z conj(z'))
    categorical = 2,       // X = [n],      k(x,x') = 1{x = x'}
    gaussian = 3,          // X = R^d,      k(x,x') = exp(-a^2 |x-x'|^2 / 2)
    sphere_coord_pair = 4, // X = S^{d-1},  k(x,x') = <x,x'>, bound sqrt(d/2)
    sphere_projection = 5, // X = S^{d-1},  k(x,x') = <x,x'>, bound sqrt(d)
};

class BaseSpace {
public:
    static BaseSpace binary();
    static BaseSpace circle();
    static BaseSpace categorical(std::uint32_t n);
    static BaseSpace gaussian(std::uint32_t d, double a);
    static BaseSpace sphere_coord_pair(std::uint32_t d); // requires d >= 3
    static BaseSpace sphere_projection(std::uint32_t d); // requires d >= 1

    SpaceKind kind() const { return kind_; }

    /// Category count (categorical) or ambient dimension (gaussian/sphere).
    std::uint32_t extent() const { return extent_; }

    /// Gaussian kernel scale a.
    double scale() const { return scale_; }

    /// Norm bound of the space's feature scheme: sup |psi(omega, x)|.
    double bound() const;

    /// Number of scalar CSV columns one value of this space occupies.
    std::uint32_t value_columns() const;

    bool operator==(const BaseSpace& other) const;

private:
    BaseSpace(SpaceKind kind, std::uint32_t extent, double scale)
        : kind_(kind), extent_(extent), scale_(scale) {}

    SpaceKind kind_;
    std::uint32_t extent_;
    double scale_;
};

struct SphereIndexPair {
    std::uint32_t j; // coordinate index in [1, d]
    std::int8_t b;   // -1 or +1
    bool operator==(const SphereIndexPair&) const = default;
};

// A draw omega from the scheme's measure mu. The active alternative is
// determined by the owning space's kind:
//   binary -> monostate, circle -> int8 exponent, categorical -> uint32,
//   gaussian / sphere_projection -> vector<double>, sphere_coord_pair -> pair.
using BaseParam =
    std::variant<std::monostate, std::int8_t, std::uint32_t, std::vector<double>, SphereIndexPair>;

// One coordinate of an input record:
//   binary -> double (+-1), circle -> unit complex, categorical -> uint32,
//   gaussian / sphere -> vector<double>.
using BaseValue = std::variant<double, std::complex<double>, std::uint32_t, std::vector<double>>;

/// Draws omega ~ mu for the space's scheme.
BaseParam sample_base_param(const BaseSpace& space, RandomStream& rng);

/// psi(omega, x). Throws DomainMismatchError if param/value do not match.
std::complex<double> eval_base_feature(const BaseSpace& space, const BaseParam& param,
                                       const BaseValue& x);

/// The exact normalized kernel of the space.
double base_kernel(const BaseSpace& space, const BaseValue& x, const BaseValue& y);

/// Throws DomainMismatchError unless x lies in the space's domain
/// (|z| = 1 and |x| = 1 checked to 1e-12).
void check_value(const BaseSpace& space, const BaseValue& x);

/// True when the parameter domain Omega is finite (enumeration possible).
bool is_discrete(const BaseSpace& space);

/// |Omega| for discrete spaces; throws UnsupportedSpaceError otherwise.
std::size_t param_domain_size(const BaseSpace& space);

/// The idx-th element of Omega (uniform measure), idx < param_domain_size.
BaseParam param_at(const BaseSpace& space, std::size_t idx);

/// Canonical byte encoding of a parameter (doubles as bit patterns);
/// identical parameters encode identically, so byte equality is dedup
/// equality and files round-trip losslessly.
void encode_param(const BaseSpace& space, const BaseParam& param, std::vector<std::uint8_t>& out);

/// Inverse of encode_param; advances offset. Throws ParseError on malformed input.
BaseParam decode_param(const BaseSpace& space, const std::vector<std::uint8_t>& bytes,
                       std::size_t& offset);

/// A random point of the space (synthetic data): uniform for binary, circle,
/// categorical and spheres, standard normal for gaussian.
BaseValue random_value(const BaseSpace& space, RandomStream& rng);

std::string to_string(SpaceKind kind);

} // namespace compfeat
