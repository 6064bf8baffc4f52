#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlscat {

using Complex = std::complex<double>;

// Error hierarchy used across the library. The CLI maps ParamError /
// ConfigError to exit code 2 and everything else to 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParamError : Error {
    using Error::Error;
};
struct GridError : Error {
    using Error::Error;
};
struct IntegrationError : Error {
    using Error::Error;
};
struct ConsistencyError : Error {
    using Error::Error;
};

// 2x2 complex matrix, row-major. Small enough that value semantics beat
// any linear-algebra dependency.
struct Mat2 {
    std::array<Complex, 4> m{};  // [a b; c d] -> m[0]=a m[1]=b m[2]=c m[3]=d

    static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
    static Mat2 diag(Complex a, Complex d) { return Mat2{{a, 0.0, 0.0, d}}; }

    Complex& operator()(int r, int c) { return m[2 * r + c]; }
    const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

    Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
    Complex trace() const { return m[0] + m[3]; }

    Mat2 operator*(const Mat2& o) const {
        return Mat2{{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
                     m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]}};
    }
    Mat2 operator+(const Mat2& o) const {
        return Mat2{{m[0] + o.m[0], m[1] + o.m[1], m[2] + o.m[2], m[3] + o.m[3]}};
    }
    Mat2 operator-(const Mat2& o) const {
        return Mat2{{m[0] - o.m[0], m[1] - o.m[1], m[2] - o.m[2], m[3] - o.m[3]}};
    }
    Mat2 operator*(Complex s) const { return Mat2{{m[0] * s, m[1] * s, m[2] * s, m[3] * s}}; }

    Mat2 inverse() const {
        const Complex d = det();
        if (std::abs(d) == 0.0) throw ConsistencyError("Mat2::inverse: singular matrix");
        const Complex id = 1.0 / d;
        return Mat2{{m[3] * id, -m[1] * id, -m[2] * id, m[0] * id}};
    }
    Mat2 adjoint() const {
        return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }
    Mat2 transpose() const { return Mat2{{m[0], m[2], m[1], m[3]}}; }

    double norm_hs() const {
        double s = 0.0;
        for (const auto& v : m) s += std::norm(v);
        return std::sqrt(s);
    }

    std::array<Complex, 2> apply(const std::array<Complex, 2>& v) const {
        return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    }
};

inline Complex sinhc(Complex s) {
    // sinh(s)/s, stable near 0. Even in s, so the branch of s = sqrt(...) is
    // irrelevant for callers.
    if (std::abs(s) < 1e-4) {
        const Complex s2 = s * s;
        return 1.0 + s2 / 6.0 * (1.0 + s2 / 20.0 * (1.0 + s2 / 42.0));
    }
    return std::sinh(s) / s;
}

// Closed-form exponential of a 2x2 complex matrix:
//   exp(M) = e^tau (cosh(s) I + sinhc(s) (M - tau I)),  tau = tr(M)/2,
//   s^2 = tau^2 - det(M)   (Cayley-Hamilton: (M - tau I)^2 = s^2 I).
inline Mat2 expm(const Mat2& M) {
    const Complex tau = M.trace() * 0.5;
    const Complex s2 = tau * tau - M.det();
    const Complex s = std::sqrt(s2);
    const Complex ch = std::cosh(s);
    const Complex sh = sinhc(s);
    const Complex et = std::exp(tau);
    Mat2 r;
    r.m[0] = et * (ch + sh * (M.m[0] - tau));
    r.m[1] = et * sh * M.m[1];
    r.m[2] = et * sh * M.m[2];
    r.m[3] = et * (ch + sh * (M.m[3] - tau));
    return r;
}

// Sampled 2x2 matrix solution of an ODE along a uniform spatial grid.
struct MatrixTrajectory {
    std::vector<double> xi;
    std::vector<Mat2> values;
    Complex lambda{0.0, 0.0};
    double det_residual = 0.0;  // max |det - 1| over the trajectory

    std::size_t size() const { return xi.size(); }
    const Mat2& back() const { return values.back(); }
};

}  // namespace nlscat
