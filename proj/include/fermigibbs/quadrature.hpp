#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace fg {

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (the 7-point Gauss rule).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <typename F>
auto gk15(F& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const auto fc = f(c);
    auto kron = fc * kKronrodWeights[7];
    auto gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        const auto s = f(c - dx) + f(c + dx);
        kron += s * kKronrodWeights[i];
        if (i % 2 == 1) gauss += s * kGaussWeights[i / 2];
    }
    err = magnitude((kron - gauss) * h);
    return kron * h;
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) on [a, b] with global error control by
// repeatedly bisecting the interval with the largest error estimate.
template <typename F>
auto integrate(F f, double a, double b, double abs_tol = 1e-14, double rel_tol = 1e-12, int max_intervals = 2000) {
    using T = decltype(f(a));
    struct Piece {
        double a, b, err;
        T val;
    };
    std::vector<Piece> pieces;
    double err = 0.0;
    T total = detail::gk15(f, a, b, err);
    pieces.push_back({a, b, err, total});
    double total_err = err;
    while (static_cast<int>(pieces.size()) < max_intervals &&
           total_err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].err > pieces[worst].err) worst = i;
        const Piece p = pieces[worst];
        const double m = 0.5 * (p.a + p.b);
        double e1 = 0.0, e2 = 0.0;
        const T v1 = detail::gk15(f, p.a, m, e1);
        const T v2 = detail::gk15(f, m, p.b, e2);
        pieces[worst] = {p.a, m, e1, v1};
        pieces.push_back({m, p.b, e2, v2});
        total = total - p.val + v1 + v2;
        total_err = total_err - p.err + e1 + e2;
    }
    // Re-sum to shed accumulated cancellation from the running update.
    T sum = pieces.front().val * 0.0;
    for (const auto& p : pieces) sum += p.val;
    return sum;
}

// Composite trapezoid rule on n uniformly spaced points of [a, b].
template <typename F>
auto trapezoid(F f, double a, double b, int n) {
    const double h = (b - a) / (n - 1);
    auto s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n - 1; ++i) s += f(a + i * h);
    return s * h;
}

}  // namespace fg
