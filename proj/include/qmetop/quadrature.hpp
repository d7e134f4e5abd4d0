// quadrature.hpp — Gauss-Legendre panels and Cauchy principal-value
// integration on the half line.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace qmetop::quad {

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual = 0.0;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre_rule(int n);

// Integral over [a, b] with `panels` equal panels of an n-point rule.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 1, int order = 16);

// Integral over [a, b], doubling the panel count until two successive
// refinements differ by less than `target`. Throws QuadratureError with the
// last residual on non-convergence.
double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double target, int max_doublings = 14, int order = 16);

struct PvSettings {
    double target = 1e-9;          // doubling threshold per segment
    double cutoff_factor = 8.0;    // upper limit max(8*wc, pole + 8*wc)
    int max_doublings = 14;
    int order = 16;
};

// P.V. integral of numerator(w) / (w - pole) over (0, upper). For pole <= 0
// there is no singularity on the contour and the integral is ordinary. For
// pole > 0 the window [pole-h, pole+h], h = min(pole/2, h_max), is folded to
// int_0^h (N(pole+t) - N(pole-t))/t dt which removes the singularity.
double principal_value(const std::function<double(double)>& numerator,
                       double pole, double upper, double h_max,
                       const PvSettings& settings = {});

}  // namespace qmetop::quad
