#ifndef NATHANSON_CERTIFICATE_HPP
#define NATHANSON_CERTIFICATE_HPP

// Representation certificates: an h-tuple of class-tagged exponent lists
// claimed to sum to n. The verifier below re-derives every claim using only
// the partition queries and the numeral carry arithmetic.

#include <optional>
#include <string>
#include <vector>

#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

inline constexpr int kCertificateSchemaVersion = 1;

namespace case_tag
{
inline constexpr std::string_view kCase1 = "case1";
inline constexpr std::string_view kCase2Prefix = "case2/";
} // namespace case_tag

struct CertificatePart
{
    ClassIndex cls;
    /// Wire form, unchecked; the verifier validates ordering.
    std::vector<Exponent> exponents;

    friend bool operator==(const CertificatePart&, const CertificatePart&) = default;
};

struct RepresentationCertificate
{
    int schema_version = kCertificateSchemaVersion;
    PartitionConfig config;
    ExponentSet n;
    std::string case_tag;
    std::vector<CertificatePart> parts;
    std::optional<std::string> trace_digest;

    bool avoids_four() const { return case_tag.rfind(case_tag::kCase2Prefix, 0) == 0; }

    friend bool operator==(const RepresentationCertificate&, const RepresentationCertificate&) = default;
};

struct Violation
{
    std::optional<std::size_t> part;
    std::string constraint;
    std::string detail;
};

struct VerifyResult
{
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

inline VerifyResult verify(const RepresentationCertificate& cert)
{
    VerifyResult r;
    auto bad = [&r](std::optional<std::size_t> part, std::string constraint, std::string detail) {
        r.violations.push_back({part, std::move(constraint), std::move(detail)});
    };

    if(cert.schema_version != kCertificateSchemaVersion)
    {
        bad(std::nullopt, "schema version", "unsupported version " + std::to_string(cert.schema_version));
    }
    if(cert.case_tag != case_tag::kCase1 && !cert.avoids_four())
    {
        bad(std::nullopt, "unknown case", "case tag '" + cert.case_tag + "'");
    }

    std::optional<Partition> partition;
    try
    {
        partition.emplace(cert.config);
    }
    catch(const Error& e)
    {
        bad(std::nullopt, "config invalid", e.what());
        return r;
    }

    if(cert.parts.size() != cert.config.h)
    {
        bad(std::nullopt, "part count",
            "expected " + std::to_string(cert.config.h) + " parts, found " + std::to_string(cert.parts.size()));
    }

    ExponentMultiset total;
    for(std::size_t i = 0; i < cert.parts.size(); ++i)
    {
        const auto& part = cert.parts[i];
        if(part.exponents.empty())
        {
            bad(i, "empty part", "0 is not an element of A");
            continue;
        }
        if(part.cls.value >= cert.config.h)
        {
            bad(i, "class range", "class " + std::to_string(part.cls.value) + " >= h");
        }
        bool ordered = true;
        for(std::size_t k = 1; k < part.exponents.size(); ++k)
        {
            if(part.exponents[k - 1] >= part.exponents[k]) { ordered = false; }
        }
        if(!ordered)
        {
            bad(i, "exponent order", "exponents are not distinct and strictly increasing");
        }
        for(Exponent e : part.exponents)
        {
            const ClassIndex c = partition->classify(e);
            if(c != part.cls)
            {
                bad(i, "class impurity",
                    "exponent " + std::to_string(e) + " lies in W_" + std::to_string(c.value) +
                        ", declared W_" + std::to_string(part.cls.value));
                break;
            }
        }
        if(cert.avoids_four() && part.exponents.size() == 1 && part.exponents.front() == 2)
        {
            bad(i, "part equals 4", "avoid-4 certificate uses the element 4");
        }
        for(Exponent e : part.exponents) { total.add(e); }
    }

    const ExponentSet sum = canonicalize(total);
    if(sum != cert.n)
    {
        bad(std::nullopt, "sum mismatch",
            "parts sum to exp:[" + format_exponent_list(sum) + "], n is exp:[" + format_exponent_list(cert.n) + "]");
    }
    return r;
}

/// Builds a part from a nonempty exponent set, tagging it with its class.
/// The caller guarantees class purity; the verifier checks it.
inline CertificatePart make_part(const Partition& p, const ExponentSet& s)
{
    return CertificatePart{s.empty() ? ClassIndex{0} : p.classify(s.lowest()), s.vec()};
}

} // namespace nathanson
#endif // NATHANSON_CERTIFICATE_HPP
