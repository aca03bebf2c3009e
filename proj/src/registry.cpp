#include "polaron/registry.hpp"

#include "polaron/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace polaron {

using nlohmann::json;

namespace {

const char* const names[] = {"enumerated", "fitted", "measured", "paper-fixed", "sourced"};

json entry_json(const RegistryEntry& e) {
    json j;
    j["value"] = e.value;
    j["provenance"] = to_string(e.provenance);
    j["note"] = e.note;
    j["manifest"] = e.manifest.empty() ? json::object() : json::parse(e.manifest);
    j["manifest_sha256"] = sha256_hex(j["manifest"].dump());
    return j;
}

RegistryEntry entry_from(const json& j, const char* name) {
    if (!j.contains(name)) throw PreconditionError(std::string("registry: missing constant ") + name);
    const json& e = j.at(name);
    RegistryEntry out;
    out.value = e.at("value").get<double>();
    out.provenance = provenance_from_string(e.at("provenance").get<std::string>());
    out.note = e.value("note", "");
    if (e.contains("manifest")) out.manifest = e.at("manifest").dump();
    return out;
}

json body(const ConstantsRegistry& r) {
    json j;
    j["schema_version"] = ConstantsRegistry::schema_version;
    json c;
    c["c_T"] = entry_json(r.c_t);
    c["c_L_prime"] = entry_json(r.c_l_prime);
    c["c_Lambda"] = entry_json(r.c_lambda);
    c["c_eta"] = entry_json(r.c_eta);
    c["m_star_star"] = entry_json(r.m_star_star);
    c["theorem_const"] = entry_json(r.theorem_const);
    json cl;
    cl["value"] = r.c_l();
    cl["provenance"] = "fitted";
    cl["note"] = "((m** + 1) / (2 m**)) c_L_prime / c_T";
    c["c_L"] = cl;
    j["constants"] = c;
    json a;
    a["provenance"] = "sourced";
    a["note"] = r.a_const_note;
    a["override"] = r.a_const ? json(*r.a_const) : json(nullptr);
    j["a_const"] = a;
    return j;
}

}  // namespace

std::string to_string(Provenance p) { return names[static_cast<int>(p)]; }

Provenance provenance_from_string(const std::string& s) {
    for (int i = 0; i < 5; ++i)
        if (s == names[i]) return static_cast<Provenance>(i);
    throw PreconditionError("registry: unknown provenance '" + s + "'");
}

double ConstantsRegistry::c_l() const {
    const double ms = m_star_star.value;
    return (ms + 1.0) / (2.0 * ms) * c_l_prime.value / c_t.value;
}

double ConstantsRegistry::a_for(double m) const { return a_const ? *a_const : 1.0 / (m + 2.0); }

void ConstantsRegistry::validate() const {
    const std::pair<const char*, const RegistryEntry*> all[] = {
        {"c_T", &c_t},        {"c_L_prime", &c_l_prime},     {"c_Lambda", &c_lambda},
        {"c_eta", &c_eta},    {"m_star_star", &m_star_star}, {"theorem_const", &theorem_const}};
    for (const auto& [name, e] : all)
        if (!(std::isfinite(e->value) && e->value > 0.0))
            throw PreconditionError(std::string("registry: constant ") + name + " must be positive and finite");
    if (a_const && !(*a_const > 0.0)) throw PreconditionError("registry: a_const override must be positive");
}

std::string ConstantsRegistry::to_json() const {
    json j = body(*this);
    j["created"] = created;
    j["hash"] = hash();
    return j.dump(2);
}

ConstantsRegistry ConstantsRegistry::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("registry: invalid JSON: ") + e.what());
    }
    if (j.value("schema_version", 0) != schema_version)
        throw PreconditionError("registry: unsupported schema version");
    ConstantsRegistry r;
    try {
        const json& c = j.at("constants");
        r.c_t = entry_from(c, "c_T");
        r.c_l_prime = entry_from(c, "c_L_prime");
        r.c_lambda = entry_from(c, "c_Lambda");
        r.c_eta = entry_from(c, "c_eta");
        r.m_star_star = entry_from(c, "m_star_star");
        r.theorem_const = entry_from(c, "theorem_const");
        if (j.contains("a_const")) {
            const json& a = j.at("a_const");
            if (a.contains("override") && !a.at("override").is_null()) r.a_const = a.at("override").get<double>();
            r.a_const_note = a.value("note", r.a_const_note);
        }
        r.created = j.value("created", "");
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("registry: malformed document: ") + e.what());
    }
    r.validate();
    if (j.contains("hash") && j.at("hash").get<std::string>() != r.hash())
        throw PreconditionError("registry: stored hash does not match the contents");
    return r;
}

ConstantsRegistry ConstantsRegistry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("registry: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void ConstantsRegistry::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw PreconditionError("registry: cannot write " + path);
    out << to_json() << '\n';
}

std::string ConstantsRegistry::hash() const { return sha256_hex(body(*this).dump()); }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericError("sha256 failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace polaron
