#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace levy {

class QuadratureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

template <class F>
struct SimpsonState {
    const F& f;
    std::size_t intervals = 0;
    std::size_t cap = 0;
};

template <class F>
double simpson_step(SimpsonState<F>& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (++st.intervals > st.cap) {
        throw QuadratureError("adaptive Simpson: subdivision cap exceeded");
    }
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        if (depth <= 0 && std::abs(delta) > 15.0 * tol) {
            throw QuadratureError("adaptive Simpson: maximum depth reached without convergence");
        }
        return left + right + delta / 15.0;
    }
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
///
/// The range is first cut into `panels` equal pieces (tolerance shared
/// evenly) so that oscillatory integrands are not accepted on a coarse
/// sample. Throws QuadratureError when the subdivision cap is exhausted.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double tol, int panels = 1,
                                  std::size_t max_intervals = std::size_t{1} << 20,
                                  int max_depth = 50) {
    if (panels < 1 || !(tol > 0.0)) {
        throw std::invalid_argument("adaptive_simpson: need panels >= 1 and tol > 0");
    }
    detail::SimpsonState<F> st{f, 0, max_intervals};
    const double h = (b - a) / panels;
    const double panel_tol = tol / panels;
    double total = 0.0;
    double x0 = a;
    double f0 = f(a);
    for (int p = 0; p < panels; ++p) {
        const double x1 = (p + 1 == panels) ? b : a + (p + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += detail::simpson_step(st, x0, x1, f0, fm, f1, whole, panel_tol, max_depth);
        x0 = x1;
        f0 = f1;
    }
    return {total, st.intervals};
}

}  // namespace levy
