#pragma once

#include <optional>
#include <string>
#include <vector>

namespace polaron {

enum class Provenance { enumerated, fitted, measured, paper_fixed, sourced };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct RegistryEntry {
    double value = 0.0;
    Provenance provenance = Provenance::fitted;
    std::string note;
    std::string manifest;  // JSON text describing the run that produced the value
};

/// Audited store of the constants entering the lower bounds.
struct ConstantsRegistry {
    static constexpr int schema_version = 1;

    RegistryEntry c_t;
    RegistryEntry c_l_prime;
    RegistryEntry c_lambda;
    RegistryEntry c_eta;
    RegistryEntry m_star_star;     // root of Λ(m) = 1
    RegistryEntry theorem_const;   // the absolute constant of the confined-box bound
    std::optional<double> a_const; // empty: A = 1/(m+2)
    std::string a_const_note = "A = 1/(m+2)";
    std::string created;           // ISO 8601 UTC

    /// ((m** + 1) / (2 m**)) c_L' / c_T
    double c_l() const;
    double a_for(double m) const;

    /// Throws PreconditionError unless every constant is positive and finite.
    void validate() const;

    std::string to_json() const;
    static ConstantsRegistry from_json(const std::string& text);
    static ConstantsRegistry load(const std::string& path);
    void save(const std::string& path) const;

    /// SHA-256 of the canonical JSON without the creation timestamp.
    std::string hash() const;
};

std::string sha256_hex(const std::string& data);

/// Current time as an ISO 8601 UTC string.
std::string utc_timestamp();

}  // namespace polaron
