#include "primecvp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

// Largest coordinate distance from the best (first) vertex.
double simplex_size(const std::vector<Vertex>& simplex) {
    double m = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
        for (std::size_t i = 0; i < simplex[v].x.size(); ++i) {
            m = std::max(m, std::abs(simplex[v].x[i] - simplex.front().x[i]));
        }
    }
    return m;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options) {
    const std::size_t d = x0.size();
    const int max_iter = options.max_iter < 0 ? 400 * static_cast<int>(std::max<std::size_t>(d, 1))
                                              : options.max_iter;
    NelderMeadResult result;

    auto eval = [&](const std::vector<double>& x) {
        const double v = objective(x);
        ++result.evaluations;
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "nelder_mead: objective returned " << v << " at x = (";
            for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
            msg << ')';
            throw OptimizerError(msg.str());
        }
        return v;
    };

    std::vector<Vertex> simplex;
    simplex.push_back({x0, eval(x0)});
    if (max_iter == 0 || d == 0) {
        result.x = std::move(x0);
        result.f = simplex.front().f;
        result.converged = d == 0;
        return result;
    }
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> x = x0;
        x[i] += options.initial_step;
        const double fx = eval(x);
        simplex.push_back({std::move(x), fx});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    auto combine = [d](const std::vector<double>& a, const std::vector<double>& b, double t) {
        // a + t * (b - a)
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) out[i] = a[i] + t * (b[i] - a[i]);
        return out;
    };

    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    while (result.iterations < max_iter) {
        const double spread = simplex.back().f - simplex.front().f;
        if (spread < options.tol && simplex_size(simplex) <= options.xtol) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t v = 0; v < d; ++v)
            for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(d);

        Vertex& worst = simplex.back();
        const double f_best = simplex.front().f;
        const double f_second = simplex[d - 1].f;

        std::vector<double> xr = combine(centroid, worst.x, -1.0);
        const double fr = eval(xr);
        if (fr < f_best) {
            std::vector<double> xe = combine(centroid, worst.x, -2.0);
            const double fe = eval(xe);
            worst = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
        } else if (fr < f_second) {
            worst = {std::move(xr), fr};
        } else {
            bool shrink = false;
            if (fr < worst.f) {
                std::vector<double> xc = combine(centroid, worst.x, -0.5);
                const double fc = eval(xc);
                if (fc <= fr) worst = {std::move(xc), fc};
                else shrink = true;
            } else {
                std::vector<double> xcc = combine(centroid, worst.x, 0.5);
                const double fcc = eval(xcc);
                if (fcc < worst.f) worst = {std::move(xcc), fcc};
                else shrink = true;
            }
            if (shrink) {
                for (std::size_t v = 1; v <= d; ++v) {
                    simplex[v].x = combine(simplex.front().x, simplex[v].x, 0.5);
                    simplex[v].f = eval(simplex[v].x);
                }
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
    }
    if (!result.converged) {
        result.converged = simplex.back().f - simplex.front().f < options.tol &&
                           simplex_size(simplex) <= options.xtol;
    }
    result.x = simplex.front().x;
    result.f = simplex.front().f;
    return result;
}

}  // namespace primecvp
