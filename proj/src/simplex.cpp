#include "polaron/simplex.hpp"

#include "polaron/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace polaron {

namespace {

struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> buf;
};

double trampoline(const gsl_vector* v, void* p) {
    auto* ctx = static_cast<Ctx*>(p);
    for (std::size_t i = 0; i < ctx->buf.size(); ++i) ctx->buf[i] = gsl_vector_get(v, i);
    const double y = (*ctx->f)(ctx->buf);
    return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct VecDel {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinDel {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const std::vector<double>& step,
                          double size_tol, int max_iter) {
    const std::size_t n = x0.size();
    if (n == 0 || step.size() != n) throw PreconditionError("nelder_mead: dimension mismatch");
    gsl_set_error_handler_off();
    Ctx ctx{&f, std::vector<double>(n)};
    gsl_multimin_function fn{&trampoline, n, &ctx};
    std::unique_ptr<gsl_vector, VecDel> x(gsl_vector_alloc(n)), ss(gsl_vector_alloc(n));
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x.get(), i, x0[i]);
        gsl_vector_set(ss.get(), i, step[i]);
    }
    std::unique_ptr<gsl_multimin_fminimizer, MinDel> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
    if (gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get()) != GSL_SUCCESS)
        throw NumericError("nelder_mead: initialisation failed");

    SimplexResult r;
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS)
            break;
    }
    r.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.x[i] = gsl_vector_get(s.get()->x, i);
    r.fx = s.get()->fval;

    // spread over the final simplex vertices
    double lo = r.fx, hi = r.fx;
    const double size = gsl_multimin_fminimizer_size(s.get());
    for (std::size_t i = 0; i < n; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            std::vector<double> y = r.x;
            y[i] += sgn * size;
            const double fy = f(y);
            lo = std::min(lo, fy);
            hi = std::max(hi, fy);
        }
    }
    r.spread = hi - lo;
    return r;
}

}  // namespace polaron
