#include "concap/gf16.hpp"

#include "concap/errors.hpp"

namespace concap {
namespace {

struct Tables {
    // exp_[i] = x^i for i in [0, 2^16-1); doubled so products skip the mod.
    std::array<std::uint16_t, 131070> exp_;
    std::array<std::uint32_t, 65536> log_;

    Tables() {
        std::uint32_t v = 1;
        for (std::uint32_t i = 0; i < 65535; ++i) {
            exp_[i] = static_cast<std::uint16_t>(v);
            log_[v] = i;
            v <<= 1;
            if (v & 0x10000u) v ^= Gf16::reduction_poly();
        }
        if (v != 1) throw InvariantPanic("gf16: generator period != 2^16-1");
        for (std::uint32_t i = 65535; i < 131070; ++i) exp_[i] = exp_[i - 65535];
        log_[0] = 0; // never read: zero operands short-circuit
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace

Gf16 operator*(Gf16 a, Gf16 b) {
    if (a.is_zero() || b.is_zero()) return Gf16(0);
    const Tables& t = tables();
    return Gf16(t.exp_[t.log_[a.value()] + t.log_[b.value()]]);
}

Gf16 Gf16::inverse() const {
    if (is_zero()) throw ValidationError("gf16: zero has no inverse");
    const Tables& t = tables();
    return Gf16(t.exp_[(65535u - t.log_[v_]) % 65535u]);
}

Gf16 Gf16::pow(std::uint32_t e) const {
    if (v_ == 0) return e == 0 ? Gf16(1) : Gf16(0);
    const Tables& t = tables();
    std::uint64_t le = static_cast<std::uint64_t>(t.log_[v_]) * e;
    return Gf16(t.exp_[le % 65535u]);
}

Gf16 gf16_mul_ref(Gf16 a, Gf16 b) {
    std::uint32_t acc = 0;
    std::uint32_t aa = a.value();
    std::uint32_t bb = b.value();
    while (bb) {
        if (bb & 1u) acc ^= aa;
        bb >>= 1;
        aa <<= 1;
        if (aa & 0x10000u) aa ^= Gf16::reduction_poly();
    }
    return Gf16(static_cast<std::uint16_t>(acc));
}

} // namespace concap
