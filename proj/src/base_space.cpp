#include "compfeat/base_space.hpp"

#include "compfeat/error.hpp"
#include "compfeat/simd.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace compfeat {

namespace {

constexpr double kDomainTol = 1e-12;

[[noreturn]] void mismatch(const BaseSpace& space, const char* what) {
    throw DomainMismatchError(std::string(what) + " for space " + to_string(space.kind()));
}

const std::vector<double>& vec_value(const BaseSpace& space, const BaseValue& x) {
    const auto* v = std::get_if<std::vector<double>>(&x);
    if (!v) mismatch(space, "value is not a vector");
    if (v->size() != space.extent()) mismatch(space, "value dimension mismatch");
    return *v;
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void push_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t read_u32(const std::vector<std::uint8_t>& bytes, std::size_t& offset) {
    if (offset + 4 > bytes.size()) throw ParseError("param decode: truncated input");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
    offset += 4;
    return v;
}

double read_f64(const std::vector<std::uint8_t>& bytes, std::size_t& offset) {
    if (offset + 8 > bytes.size()) throw ParseError("param decode: truncated input");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
    offset += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace

BaseSpace BaseSpace::binary() { return BaseSpace(SpaceKind::binary, 0, 0.0); }
BaseSpace BaseSpace::circle() { return BaseSpace(SpaceKind::circle, 0, 0.0); }

BaseSpace BaseSpace::categorical(std::uint32_t n) {
    if (n == 0) throw ParameterError("categorical space: n must be >= 1");
    return BaseSpace(SpaceKind::categorical, n, 0.0);
}

BaseSpace BaseSpace::gaussian(std::uint32_t d, double a) {
    if (d == 0) throw ParameterError("gaussian space: d must be >= 1");
    if (!(a > 0.0)) throw ParameterError("gaussian space: a must be positive");
    return BaseSpace(SpaceKind::gaussian, d, a);
}

BaseSpace BaseSpace::sphere_coord_pair(std::uint32_t d) {
    if (d < 3) throw ParameterError("sphere_coord_pair space: d must be >= 3");
    return BaseSpace(SpaceKind::sphere_coord_pair, d, 0.0);
}

BaseSpace BaseSpace::sphere_projection(std::uint32_t d) {
    if (d == 0) throw ParameterError("sphere_projection space: d must be >= 1");
    return BaseSpace(SpaceKind::sphere_projection, d, 0.0);
}

double BaseSpace::bound() const {
    switch (kind_) {
    case SpaceKind::sphere_coord_pair:
        return std::sqrt(static_cast<double>(extent_) / 2.0);
    case SpaceKind::sphere_projection:
        return std::sqrt(static_cast<double>(extent_));
    default:
        return 1.0;
    }
}

std::uint32_t BaseSpace::value_columns() const {
    switch (kind_) {
    case SpaceKind::binary:
    case SpaceKind::circle:
    case SpaceKind::categorical:
        return 1;
    default:
        return extent_;
    }
}

bool BaseSpace::operator==(const BaseSpace& other) const {
    return kind_ == other.kind_ && extent_ == other.extent_ && scale_ == other.scale_;
}

std::string to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::binary: return "binary";
    case SpaceKind::circle: return "circle";
    case SpaceKind::categorical: return "categorical";
    case SpaceKind::gaussian: return "gaussian";
    case SpaceKind::sphere_coord_pair: return "sphere_pair";
    case SpaceKind::sphere_projection: return "sphere_proj";
    }
    return "?";
}

BaseParam sample_base_param(const BaseSpace& space, RandomStream& rng) {
    switch (space.kind()) {
    case SpaceKind::binary:
        return std::monostate{};
    case SpaceKind::circle:
        return static_cast<std::int8_t>(rng.pm_one());
    case SpaceKind::categorical:
        return static_cast<std::uint32_t>(1 + rng.uniform_below(space.extent()));
    case SpaceKind::gaussian: {
        std::vector<double> omega(space.extent());
        for (double& w : omega) w = rng.normal();
        return omega;
    }
    case SpaceKind::sphere_coord_pair: {
        SphereIndexPair p;
        p.j = static_cast<std::uint32_t>(1 + rng.uniform_below(space.extent()));
        p.b = static_cast<std::int8_t>(rng.pm_one());
        return p;
    }
    case SpaceKind::sphere_projection: {
        // Normalized standard Gaussian vector: uniform on the sphere.
        std::vector<double> w(space.extent());
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& wi : w) {
                wi = rng.normal();
                norm2 += wi * wi;
            }
        } while (norm2 == 0.0);
        double inv = 1.0 / std::sqrt(norm2);
        for (double& wi : w) wi *= inv;
        return w;
    }
    }
    throw ParameterError("sample_base_param: unknown space kind");
}

std::complex<double> eval_base_feature(const BaseSpace& space, const BaseParam& param,
                                       const BaseValue& x) {
    switch (space.kind()) {
    case SpaceKind::binary: {
        if (!std::holds_alternative<std::monostate>(param)) mismatch(space, "param kind");
        const auto* v = std::get_if<double>(&x);
        if (!v) mismatch(space, "value kind");
        return {*v, 0.0};
    }
    case SpaceKind::circle: {
        const auto* e = std::get_if<std::int8_t>(&param);
        if (!e) mismatch(space, "param kind");
        const auto* z = std::get_if<std::complex<double>>(&x);
        if (!z) mismatch(space, "value kind");
        return *e == 1 ? *z : std::conj(*z); // z^{-1} = conj(z) on |z| = 1
    }
    case SpaceKind::categorical: {
        const auto* omega = std::get_if<std::uint32_t>(&param);
        if (!omega) mismatch(space, "param kind");
        const auto* v = std::get_if<std::uint32_t>(&x);
        if (!v) mismatch(space, "value kind");
        double angle = 2.0 * std::numbers::pi * static_cast<double>(*omega) *
                       static_cast<double>(*v) / static_cast<double>(space.extent());
        return std::polar(1.0, angle);
    }
    case SpaceKind::gaussian: {
        const auto* omega = std::get_if<std::vector<double>>(&param);
        if (!omega || omega->size() != space.extent()) mismatch(space, "param kind");
        const auto& v = vec_value(space, x);
        double phase = space.scale() * simd::dot(omega->data(), v.data(), v.size());
        return std::polar(1.0, phase);
    }
    case SpaceKind::sphere_coord_pair: {
        const auto* p = std::get_if<SphereIndexPair>(&param);
        if (!p || p->j < 1 || p->j > space.extent()) mismatch(space, "param kind");
        const auto& v = vec_value(space, x);
        double xj = v[p->j - 1];
        double xnext = (p->j == space.extent()) ? v[0] : v[p->j]; // x_{d+1} := x_1
        double root = std::sqrt(static_cast<double>(space.extent()) / 2.0);
        return {root * xj, root * static_cast<double>(p->b) * xnext};
    }
    case SpaceKind::sphere_projection: {
        const auto* w = std::get_if<std::vector<double>>(&param);
        if (!w || w->size() != space.extent()) mismatch(space, "param kind");
        const auto& v = vec_value(space, x);
        double root = std::sqrt(static_cast<double>(space.extent()));
        return {root * simd::dot(w->data(), v.data(), v.size()), 0.0};
    }
    }
    throw ParameterError("eval_base_feature: unknown space kind");
}

double base_kernel(const BaseSpace& space, const BaseValue& x, const BaseValue& y) {
    switch (space.kind()) {
    case SpaceKind::binary: {
        const auto* a = std::get_if<double>(&x);
        const auto* b = std::get_if<double>(&y);
        if (!a || !b) mismatch(space, "value kind");
        return *a * *b;
    }
    case SpaceKind::circle: {
        const auto* a = std::get_if<std::complex<double>>(&x);
        const auto* b = std::get_if<std::complex<double>>(&y);
        if (!a || !b) mismatch(space, "value kind");
        return a->real() * b->real() + a->imag() * b->imag();
    }
    case SpaceKind::categorical: {
        const auto* a = std::get_if<std::uint32_t>(&x);
        const auto* b = std::get_if<std::uint32_t>(&y);
        if (!a || !b) mismatch(space, "value kind");
        return *a == *b ? 1.0 : 0.0;
    }
    case SpaceKind::gaussian: {
        const auto& a = vec_value(space, x);
        const auto& b = vec_value(space, y);
        double d2 = simd::squared_distance(a.data(), b.data(), a.size());
        return std::exp(-space.scale() * space.scale() * d2 / 2.0);
    }
    case SpaceKind::sphere_coord_pair:
    case SpaceKind::sphere_projection: {
        const auto& a = vec_value(space, x);
        const auto& b = vec_value(space, y);
        return simd::dot(a.data(), b.data(), a.size());
    }
    }
    throw ParameterError("base_kernel: unknown space kind");
}

void check_value(const BaseSpace& space, const BaseValue& x) {
    switch (space.kind()) {
    case SpaceKind::binary: {
        const auto* v = std::get_if<double>(&x);
        if (!v) mismatch(space, "value kind");
        if (*v != 1.0 && *v != -1.0) mismatch(space, "binary value not in {-1,+1}");
        return;
    }
    case SpaceKind::circle: {
        const auto* z = std::get_if<std::complex<double>>(&x);
        if (!z) mismatch(space, "value kind");
        if (std::abs(std::abs(*z) - 1.0) > kDomainTol) mismatch(space, "|z| != 1");
        return;
    }
    case SpaceKind::categorical: {
        const auto* v = std::get_if<std::uint32_t>(&x);
        if (!v) mismatch(space, "value kind");
        if (*v < 1 || *v > space.extent()) mismatch(space, "category out of range");
        return;
    }
    case SpaceKind::gaussian: {
        (void)vec_value(space, x);
        return;
    }
    case SpaceKind::sphere_coord_pair:
    case SpaceKind::sphere_projection: {
        const auto& v = vec_value(space, x);
        double norm = std::sqrt(simd::dot(v.data(), v.data(), v.size()));
        if (std::abs(norm - 1.0) > kDomainTol) mismatch(space, "point not on unit sphere");
        return;
    }
    }
}

bool is_discrete(const BaseSpace& space) {
    switch (space.kind()) {
    case SpaceKind::binary:
    case SpaceKind::circle:
    case SpaceKind::categorical:
    case SpaceKind::sphere_coord_pair:
        return true;
    default:
        return false;
    }
}

std::size_t param_domain_size(const BaseSpace& space) {
    switch (space.kind()) {
    case SpaceKind::binary: return 1;
    case SpaceKind::circle: return 2;
    case SpaceKind::categorical: return space.extent();
    case SpaceKind::sphere_coord_pair: return 2 * static_cast<std::size_t>(space.extent());
    default:
        throw UnsupportedSpaceError("param domain of " + to_string(space.kind()) +
                                    " is not finite");
    }
}

BaseParam param_at(const BaseSpace& space, std::size_t idx) {
    switch (space.kind()) {
    case SpaceKind::binary:
        return std::monostate{};
    case SpaceKind::circle:
        return static_cast<std::int8_t>(idx == 0 ? -1 : 1);
    case SpaceKind::categorical:
        return static_cast<std::uint32_t>(idx + 1);
    case SpaceKind::sphere_coord_pair: {
        SphereIndexPair p;
        p.j = static_cast<std::uint32_t>(idx / 2 + 1);
        p.b = static_cast<std::int8_t>((idx % 2 == 0) ? -1 : 1);
        return p;
    }
    default:
        throw UnsupportedSpaceError("param domain of " + to_string(space.kind()) +
                                    " is not finite");
    }
}

void encode_param(const BaseSpace& space, const BaseParam& param,
                  std::vector<std::uint8_t>& out) {
    switch (space.kind()) {
    case SpaceKind::binary:
        return;
    case SpaceKind::circle:
        out.push_back(static_cast<std::uint8_t>(std::get<std::int8_t>(param)));
        return;
    case SpaceKind::categorical:
        push_u32(out, std::get<std::uint32_t>(param));
        return;
    case SpaceKind::gaussian:
    case SpaceKind::sphere_projection: {
        const auto& v = std::get<std::vector<double>>(param);
        for (double w : v) push_f64(out, w);
        return;
    }
    case SpaceKind::sphere_coord_pair: {
        const auto& p = std::get<SphereIndexPair>(param);
        push_u32(out, p.j);
        out.push_back(static_cast<std::uint8_t>(p.b));
        return;
    }
    }
}

BaseParam decode_param(const BaseSpace& space, const std::vector<std::uint8_t>& bytes,
                       std::size_t& offset) {
    switch (space.kind()) {
    case SpaceKind::binary:
        return std::monostate{};
    case SpaceKind::circle: {
        if (offset >= bytes.size()) throw ParseError("param decode: truncated input");
        return static_cast<std::int8_t>(bytes[offset++]);
    }
    case SpaceKind::categorical:
        return read_u32(bytes, offset);
    case SpaceKind::gaussian:
    case SpaceKind::sphere_projection: {
        std::vector<double> v(space.extent());
        for (double& w : v) w = read_f64(bytes, offset);
        return v;
    }
    case SpaceKind::sphere_coord_pair: {
        SphereIndexPair p;
        p.j = read_u32(bytes, offset);
        if (offset >= bytes.size()) throw ParseError("param decode: truncated input");
        p.b = static_cast<std::int8_t>(bytes[offset++]);
        return p;
    }
    }
    throw ParseError("param decode: unknown space kind");
}

BaseValue random_value(const BaseSpace& space, RandomStream& rng) {
    switch (space.kind()) {
    case SpaceKind::binary:
        return static_cast<double>(rng.pm_one());
    case SpaceKind::circle:
        return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    case SpaceKind::categorical:
        return static_cast<std::uint32_t>(1 + rng.uniform_below(space.extent()));
    case SpaceKind::gaussian: {
        std::vector<double> v(space.extent());
        for (double& x : v) x = rng.normal();
        return v;
    }
    case SpaceKind::sphere_coord_pair:
    case SpaceKind::sphere_projection: {
        std::vector<double> v(space.extent());
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& x : v) {
                x = rng.normal();
                norm2 += x * x;
            }
        } while (norm2 == 0.0);
        double inv = 1.0 / std::sqrt(norm2);
        for (double& x : v) x *= inv;
        return v;
    }
    }
    throw ParameterError("random_value: unknown space kind");
}

} // namespace compfeat
