#include "polaron/amplitude.hpp"

#include "polaron/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace polaron {

namespace {

std::string key_str(const LatticeTuple& k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ')';
    return os.str();
}

void swap_slots(LatticeTuple& k, int a, int b) {
    for (int c = 0; c < 3; ++c) std::swap(k[3 * a + c], k[3 * b + c]);
}

}  // namespace

SingularAmplitude::SingularAmplitude(long n, double ell, bool antisymmetric)
    : n_(n), ell_(ell), antisymmetric_(antisymmetric) {
    if (n < 1) throw PreconditionError("SingularAmplitude: n must be >= 1");
    if (!(ell > 0.0)) throw PreconditionError("SingularAmplitude: ell must be positive");
}

void SingularAmplitude::set(const LatticeTuple& key, std::complex<double> value) {
    if (key.size() != static_cast<std::size_t>(3 * n_))
        throw PreconditionError("SingularAmplitude: key length must be 3N");
    if (value == 0.0)
        data_.erase(key);
    else
        data_[key] = value;
}

std::complex<double> SingularAmplitude::at(const LatticeTuple& key) const {
    auto it = data_.find(key);
    return it == data_.end() ? std::complex<double>{} : it->second;
}

double SingularAmplitude::measure() const {
    return std::pow(2.0 * std::numbers::pi / ell_, 3.0 * static_cast<double>(n_));
}

double SingularAmplitude::norm_sq() const {
    double s = 0.0;
    for (const auto& [k, v] : data_) s += std::norm(v);
    return s * measure();
}

MomentumVec SingularAmplitude::momentum(const LatticeTuple& key, int slot) const {
    const double h = 2.0 * std::numbers::pi / ell_;
    return h * MomentumVec(key[3 * slot], key[3 * slot + 1], key[3 * slot + 2]);
}

void SingularAmplitude::check_antisymmetry(double tol) const {
    for (const auto& [k, v] : data_)
        for (int a = 1; a < n_; ++a)
            for (int b = a + 1; b < n_; ++b) {
                LatticeTuple t = k;
                swap_slots(t, a, b);
                if (std::abs(at(t) + v) > tol * std::abs(v))
                    throw PreconditionError("amplitude not antisymmetric at " + key_str(k));
            }
}

SingularAmplitude SingularAmplitude::scaled(std::complex<double> c) const {
    SingularAmplitude out(n_, ell_, antisymmetric_);
    for (const auto& [k, v] : data_) out.set(k, c * v);
    return out;
}

SingularAmplitude random_fermionic(const FermionicSampleSpec& spec) {
    if (spec.radius < 0 || spec.generators < 1) throw PreconditionError("random_fermionic: bad spec");
    const long n = spec.n;
    const int side = 2 * spec.radius + 1;
    if (n - 1 > static_cast<long>(side) * side * side)
        throw PreconditionError("random_fermionic: radius too small for N-1 distinct momenta");
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> coord(-spec.radius, spec.radius);
    std::normal_distribution<double> gauss;
    SingularAmplitude xi(n, spec.ell, true);

    std::vector<int> perm(static_cast<std::size_t>(n - 1));
    for (int g = 0; g < spec.generators; ++g) {
        LatticeTuple base(static_cast<std::size_t>(3 * n));
        for (int c = 0; c < 3; ++c) base[c] = coord(rng);
        // distinct momenta in the last N-1 slots
        for (long s = 1; s < n; ++s) {
            bool fresh = false;
            while (!fresh) {
                for (int c = 0; c < 3; ++c) base[3 * s + c] = coord(rng);
                fresh = true;
                for (long t = 1; t < s && fresh; ++t)
                    fresh = !std::equal(base.begin() + 3 * s, base.begin() + 3 * s + 3, base.begin() + 3 * t);
            }
        }
        const std::complex<double> amp(gauss(rng), gauss(rng));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            // sign of the permutation from its inversion count
            int inv = 0;
            for (std::size_t a = 0; a < perm.size(); ++a)
                for (std::size_t b = a + 1; b < perm.size(); ++b) inv += perm[a] > perm[b];
            LatticeTuple k(base.size());
            std::copy(base.begin(), base.begin() + 3, k.begin());
            for (std::size_t a = 0; a < perm.size(); ++a)
                for (int c = 0; c < 3; ++c) k[3 * (a + 1) + c] = base[3 * (perm[a] + 1) + c];
            xi.set(k, xi.at(k) + (inv % 2 ? -amp : amp));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return xi;
}

}  // namespace polaron
