#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace concap {

// GF(2^16) with reduction polynomial x^16 + x^12 + x^3 + x + 1 (0x1100B).
// The polynomial is primitive, so x (= 2) generates the multiplicative group;
// multiplication and inversion go through log/antilog tables built once at
// startup.
class Gf16 {
public:
    constexpr Gf16() = default;
    constexpr explicit Gf16(std::uint16_t v) : v_(v) {}

    constexpr std::uint16_t value() const { return v_; }

    friend constexpr Gf16 operator+(Gf16 a, Gf16 b) {
        return Gf16(static_cast<std::uint16_t>(a.v_ ^ b.v_));
    }
    friend constexpr Gf16 operator-(Gf16 a, Gf16 b) { return a + b; }
    Gf16& operator+=(Gf16 o) {
        v_ ^= o.v_;
        return *this;
    }

    friend Gf16 operator*(Gf16 a, Gf16 b);
    Gf16& operator*=(Gf16 o) {
        *this = *this * o;
        return *this;
    }

    // Multiplicative inverse; undefined for zero (throws).
    Gf16 inverse() const;

    // a^e with e reduced mod 2^16-1; 0^0 = 1.
    Gf16 pow(std::uint32_t e) const;

    constexpr bool operator==(const Gf16&) const = default;
    constexpr auto operator<=>(const Gf16&) const = default;

    constexpr bool is_zero() const { return v_ == 0; }

    static constexpr std::uint32_t reduction_poly() { return 0x1100Bu; }

private:
    std::uint16_t v_ = 0;
};

using SymbolVec = std::vector<Gf16>;

// Carry-less multiply + reduce, no tables. Slow reference path used to
// cross-check the table builder in tests.
Gf16 gf16_mul_ref(Gf16 a, Gf16 b);

} // namespace concap
