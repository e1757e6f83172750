#include <sponge/optimize.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sponge::optimize {

namespace {

std::vector<double> gradient(const Objective& f, const std::vector<double>& x) {
    std::vector<double> g(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2 * h);
    }
    return g;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

Result bfgs_maximize(const Objective& f, std::vector<double> x, double tol, int max_iterations) {
    const std::size_t n = x.size();
    // minimise F = -f with an inverse Hessian estimate H
    auto F = [&](const std::vector<double>& z) { return -f(z); };
    double fx = F(x);
    std::vector<double> g = gradient(F, x);
    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    auto reset = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(H[i].begin(), H[i].end(), 0.0);
            H[i][i] = 1.0;
        }
    };
    reset();

    Result out;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        if (std::sqrt(dot(g, g)) < 1e-10) {
            out.converged = true;
            break;
        }
        std::vector<double> dir(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) dir[i] = -dot(H[i], g);
        double slope = dot(g, dir);
        if (slope >= 0) {
            reset();
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
            slope = dot(g, dir);
        }
        // keep steps in parameter space bounded
        double len = std::sqrt(dot(dir, dir));
        if (len > 10.0) {
            for (auto& v : dir) v *= 10.0 / len;
            slope *= 10.0 / len;
        }

        double step = 1.0;
        std::vector<double> trial(n);
        double ftrial = fx;
        bool accepted = false;
        while (step > 1e-14) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * dir[i];
            ftrial = F(trial);
            if (ftrial <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no descent along a fresh gradient either: treat as stationary
            out.converged = std::sqrt(dot(g, g)) < 1e-6;
            break;
        }

        std::vector<double> gnew = gradient(F, trial);
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial[i] - x[i];
            y[i] = gnew[i] - g[i];
        }
        const double improvement = fx - ftrial;
        x = trial;
        g = gnew;
        fx = ftrial;

        const double sy = dot(s, y);
        if (sy > 1e-14) {
            std::vector<double> Hy(n);
            for (std::size_t i = 0; i < n; ++i) Hy[i] = dot(H[i], y);
            const double yHy = dot(y, Hy);
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i][j] += (1.0 + yHy * rho) * rho * s[i] * s[j] - rho * (Hy[i] * s[j] + s[i] * Hy[j]);
                }
            }
        }
        if (improvement <= tol * (1.0 + std::fabs(fx)) && std::sqrt(dot(s, s)) < 1e-6) {
            out.converged = true;
            break;
        }
    }
    out.x = std::move(x);
    out.value = -fx;
    return out;
}

Result nelder_mead_maximize(const Objective& f, std::vector<double> x0, double step, double tol, int max_iterations) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = -f(simplex[i]);

    Result out;
    std::vector<std::size_t> idx(n + 1);
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];
        if (std::fabs(values[worst] - values[best]) <= tol * (1.0 + std::fabs(values[best]))) {
            out.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[idx[k]][i] / static_cast<double>(n);
        }
        auto along = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (simplex[worst][i] - centroid[i]);
            return p;
        };
        auto reflected = along(-1.0);
        double fr = -f(reflected);
        if (fr < values[best]) {
            auto expanded = along(-2.0);
            double fe = -f(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
        } else {
            auto contracted = fr < values[worst] ? along(-0.5) : along(0.5);
            double fc = -f(contracted);
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = std::move(contracted);
                values[worst] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    auto& v = simplex[idx[k]];
                    for (std::size_t i = 0; i < n; ++i) v[i] = simplex[best][i] + 0.5 * (v[i] - simplex[best][i]);
                    values[idx[k]] = -f(v);
                }
            }
        }
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    out.x = simplex[best];
    out.value = -values[best];
    return out;
}

}  // namespace sponge::optimize
