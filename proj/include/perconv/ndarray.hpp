#pragma once

#include "perconv/errors.hpp"

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace perconv {

using Shape = std::vector<std::size_t>;

inline std::size_t numel(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
}

// Dense row-major n-dimensional value.
template <class T>
struct Array {
    Shape shape;
    std::vector<T> data;

    Array() = default;
    explicit Array(Shape s) : shape(std::move(s)), data(numel(shape), T(0)) {}
    Array(Shape s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != numel(shape)) throw ShapeError("value length does not match shape");
    }

    std::size_t size() const { return data.size(); }
    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }

    static Array zeros(Shape s) { return Array(std::move(s)); }
    static Array full(Shape s, T v) {
        Array a(std::move(s));
        for (T& x : a.data) x = v;
        return a;
    }

    template <class U>
    Array<U> cast() const {
        Array<U> out;
        out.shape = shape;
        out.data.reserve(data.size());
        for (T v : data) out.data.push_back(static_cast<U>(v));
        return out;
    }
};

template <class T>
bool same_shape(const Array<T>& a, const Array<T>& b) {
    return a.shape == b.shape;
}

// C[m,n] += A[m,k] * B[k,n]
template <class T>
void matmul_acc(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T* crow = c + i * n;
        const T* arow = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            T av = arow[p];
            if (av == T(0)) continue;
            const T* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[m,n] += A[m,l] * B[n,l]   (B transposed)
template <class T>
void matmul_nt_acc(const T* a, const T* b, T* c, std::size_t m, std::size_t l, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const T* arow = a + i * l;
        T* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const T* brow = b + j * l;
            T acc = T(0);
            for (std::size_t p = 0; p < l; ++p) acc += arow[p] * brow[p];
            crow[j] += acc;
        }
    }
}

// C[m,n] += A[l,m] * B[l,n]   (A transposed)
template <class T>
void matmul_tn_acc(const T* a, const T* b, T* c, std::size_t l, std::size_t m, std::size_t n) {
    for (std::size_t p = 0; p < l; ++p) {
        const T* arow = a + p * m;
        const T* brow = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            T av = arow[i];
            if (av == T(0)) continue;
            T* crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

} // namespace perconv
