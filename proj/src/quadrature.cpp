#include "rmplate/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rmplate {

namespace {

// Newton iteration on the Legendre polynomial; standard Golub-free approach.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

const GaussRule& GaussRule::interval(int n) {
    if (n < 1) throw std::invalid_argument("GaussRule: need at least one point");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        GaussRule r;
        gauss_legendre(n, r.points, r.weights);
        it = cache.emplace(n, std::move(r)).first;
    }
    return it->second;
}

const GaussRule& GaussRule::for_degree(int degree) {
    return interval(degree / 2 + 1);
}

const QuadratureRule& QuadratureRule::triangle(int degree) {
    if (degree < 0) degree = 0;
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(degree);
    if (it != cache.end()) return it->second;

    // Duffy map (u, v) -> (u, v(1-u)): a monomial x^a y^b with a+b <= d turns
    // into u^a v^b (1-u)^(b+1), so degree d+1 in u and d in v.
    const GaussRule& gu = GaussRule::for_degree(degree + 1);
    const GaussRule& gv = GaussRule::for_degree(degree);
    QuadratureRule r;
    r.degree = degree;
    for (size_t i = 0; i < gu.points.size(); ++i) {
        double u = 0.5 * (gu.points[i] + 1.0);
        double wu = 0.5 * gu.weights[i];
        for (size_t j = 0; j < gv.points.size(); ++j) {
            double v = 0.5 * (gv.points[j] + 1.0);
            double wv = 0.5 * gv.weights[j];
            r.points.emplace_back(u, v * (1.0 - u));
            r.weights.push_back(wu * wv * (1.0 - u));
        }
    }
    return cache.emplace(degree, std::move(r)).first->second;
}

}  // namespace rmplate
