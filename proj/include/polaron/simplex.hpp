#pragma once

#include <functional>
#include <vector>

namespace polaron {

struct SimplexResult {
    std::vector<double> x;
    double fx = 0.0;
    double spread = 0.0;  // max - min of f over the final simplex
    int iterations = 0;
};

/// Nelder-Mead minimisation (GSL nmsimplex2). Stops when the characteristic simplex
/// size drops below `size_tol` or after `max_iter` iterations.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const std::vector<double>& step,
                          double size_tol, int max_iter);

}  // namespace polaron
