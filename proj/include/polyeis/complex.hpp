#pragma once

#include <cmath>
#include <complex>

namespace polyeis {

// Minimal complex arithmetic over any real scalar (std::complex is only specified for
// the built-in floating types).
template <class T>
struct Cx {
    T re{0}, im{0};

    Cx() = default;
    Cx(T r, T i = T(0)) : re(r), im(i) {}
    template <class U>
    explicit Cx(const std::complex<U>& z) : re(T(z.real())), im(T(z.imag()))
    {
    }

    Cx& operator+=(const Cx& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cx& operator-=(const Cx& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Cx& operator*=(const Cx& o)
    {
        T r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cx& operator*=(const T& t)
    {
        re *= t;
        im *= t;
        return *this;
    }
    Cx& operator/=(const Cx& o)
    {
        T d = o.re * o.re + o.im * o.im;
        T r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = r;
        return *this;
    }
    Cx& operator/=(const T& t)
    {
        re /= t;
        im /= t;
        return *this;
    }
    friend Cx operator+(Cx a, const Cx& b) { return a += b; }
    friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
    friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
    friend Cx operator*(Cx a, const T& b) { return a *= b; }
    friend Cx operator*(const T& b, Cx a) { return a *= b; }
    friend Cx operator/(Cx a, const Cx& b) { return a /= b; }
    friend Cx operator/(Cx a, const T& b) { return a /= b; }
    Cx operator-() const { return {-re, -im}; }

    Cx conj() const { return {re, -im}; }
    T norm() const { return re * re + im * im; }
    T abs() const
    {
        using std::sqrt;
        return sqrt(norm());
    }
    std::complex<double> to_std() const { return {double(re), double(im)}; }
};

// exp(i t)
template <class T>
Cx<T> cis(const T& t)
{
    using std::cos;
    using std::sin;
    return {cos(t), sin(t)};
}

template <class T>
Cx<T> cx_pow(Cx<T> z, long k)
{
    Cx<T> r(T(1));
    bool neg = k < 0;
    unsigned long e = neg ? -k : k;
    while (e) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return neg ? Cx<T>(T(1)) / r : r;
}

}  // namespace polyeis
