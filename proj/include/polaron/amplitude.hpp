#pragma once

#include "polaron/kernels.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace polaron {

/// Integer coordinates of an N-tuple of lattice momenta, 3 entries per slot.
using LatticeTuple = std::vector<int>;

/// Finitely supported ξ̂ on (2π/ℓ Z³)^N. Keys are integer tuples; momenta are 2π/ℓ times them.
class SingularAmplitude {
public:
    SingularAmplitude(long n, double ell, bool antisymmetric);

    long n() const { return n_; }
    double ell() const { return ell_; }
    bool antisymmetric() const { return antisymmetric_; }

    void set(const LatticeTuple& key, std::complex<double> value);
    std::complex<double> at(const LatticeTuple& key) const;
    const std::map<LatticeTuple, std::complex<double>>& support() const { return data_; }
    bool empty() const { return data_.empty(); }

    /// (2π/ℓ)^{3N}, the Riemann measure of one support point.
    double measure() const;
    /// Σ|ξ̂|² · measure.
    double norm_sq() const;
    MomentumVec momentum(const LatticeTuple& key, int slot) const;

    /// Throws PreconditionError unless every transposition of two of the last N-1 slots
    /// flips the sign, checked on the full support.
    void check_antisymmetry(double tol = 0.0) const;

    SingularAmplitude scaled(std::complex<double> c) const;

private:
    long n_;
    double ell_;
    bool antisymmetric_;
    std::map<LatticeTuple, std::complex<double>> data_;
};

struct FermionicSampleSpec {
    long n = 3;
    double ell = 1.0;
    int radius = 2;      // integer coordinates drawn from [-radius, radius]
    int generators = 8;  // independent tuples before antisymmetrization
    std::uint64_t seed = 1;
};

/// Random complex ξ̂, antisymmetric in the last N-1 slots.
SingularAmplitude random_fermionic(const FermionicSampleSpec& spec);

}  // namespace polaron
