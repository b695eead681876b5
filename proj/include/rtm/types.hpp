#ifndef RTM_TYPES_HPP
#define RTM_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rtm {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline const Complex iu(0.0, 1.0);

// 2-D point / vector.
struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Complex-valued 2-vector (field gradients).
struct CVec2 {
    Complex x1{0.0, 0.0};
    Complex x2{0.0, 0.0};
};

inline CVec2 operator+(CVec2 a, CVec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline CVec2 operator-(CVec2 a, CVec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline CVec2 operator*(Complex s, CVec2 a) { return {s * a.x1, s * a.x2}; }
inline Complex dot(CVec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

// Field value together with its spatial gradient.
struct FieldValue {
    Complex v{0.0, 0.0};
    CVec2 grad;
};

// Strictly positive wavenumber (radians per unit length).
struct WaveNumber {
    double value;
    explicit WaveNumber(double k) : value(k) {
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("WaveNumber: value must be positive and finite");
    }
    double wavelength() const { return 2.0 * pi / value; }
};

}  // namespace rtm

#endif
