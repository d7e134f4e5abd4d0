#include "qmetop/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace qmetop::quad {

namespace {

// Newton iteration on Legendre polynomials, nodes symmetric about 0.
GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_rule(n)).first;
    }
    return it->second;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels, int order) {
    const GaussRule& rule = gauss_legendre_rule(order);
    const double step = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * step;
        const double mid = lo + 0.5 * step;
        const double half = 0.5 * step;
        double sum = 0.0;
        for (int k = 0; k < order; ++k) {
            sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
        }
        total += half * sum;
    }
    return total;
}

double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double target, int max_doublings, int order) {
    if (a == b) return 0.0;
    int panels = 2;
    double prev = gauss_legendre(f, a, b, panels, order);
    for (int k = 0; k < max_doublings; ++k) {
        panels *= 2;
        const double next = gauss_legendre(f, a, b, panels, order);
        const double diff = std::abs(next - prev);
        if (diff < target) return next;
        prev = next;
    }
    throw QuadratureError("adaptive_gauss: panel doubling did not converge",
                          std::abs(prev));
}

namespace {

// integrate f over [lo, hi] on segments that double in width away from
// `focus`, starting at `width`; keeps panels matched to the 1/(w - pole)
// length scale
double graded_gauss(const std::function<double(double)>& f, double lo, double hi,
                    double focus, double width, const PvSettings& settings) {
    if (hi <= lo) return 0.0;
    double total = 0.0;
    if (focus <= lo) {   // grade rightward from lo
        double a = lo;
        double w = width;
        while (a < hi) {
            const double b = std::min(hi, a + w);
            total += adaptive_gauss(f, a, b, settings.target,
                                    settings.max_doublings, settings.order);
            a = b;
            w *= 2.0;
        }
    } else {             // focus >= hi: grade leftward from hi
        double b = hi;
        double w = width;
        while (b > lo) {
            const double a = std::max(lo, b - w);
            total += adaptive_gauss(f, a, b, settings.target,
                                    settings.max_doublings, settings.order);
            b = a;
            w *= 2.0;
        }
    }
    return total;
}

}  // namespace

double principal_value(const std::function<double(double)>& numerator,
                       double pole, double upper, double h_max,
                       const PvSettings& settings) {
    const auto plain = [&](double w) { return numerator(w) / (w - pole); };
    if (pole <= 0.0) {
        // no pole on the contour; the integrand still steepens toward w = 0
        // when the pole sits just below it
        const double width = std::max({h_max, -pole, 1e-12});
        return graded_gauss(plain, 0.0, upper, 0.0, width, settings);
    }
    if (pole >= upper) {
        throw QuadratureError("principal_value: pole beyond the upper cutoff", 0.0);
    }
    const double h = std::min(pole / 2.0, h_max);
    // symmetric fold around the pole; the integrand extends smoothly to t = 0
    const auto folded = [&](double t) {
        return (numerator(pole + t) - numerator(pole - t)) / t;
    };
    double value = graded_gauss(plain, 0.0, pole - h, pole, h, settings);
    value += adaptive_gauss(folded, 0.0, h, settings.target,
                            settings.max_doublings, settings.order);
    value += graded_gauss(plain, pole + h, upper, pole, h, settings);
    return value;
}

}  // namespace qmetop::quad
