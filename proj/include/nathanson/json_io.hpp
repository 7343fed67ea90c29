#ifndef NATHANSON_JSON_IO_HPP
#define NATHANSON_JSON_IO_HPP

// JSON forms of configs and certificates. Field order is fixed so that
// serialize(parse(text)) reproduces text byte for byte.

#include <string>
#include <string_view>

#include "json.hpp"

#include "nathanson/certificate.hpp"
#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"

namespace nathanson
{

using Json = nlohmann::ordered_json;

namespace detail
{
[[noreturn]] inline void schema_error(const std::string& path, const std::string& what)
{
    throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& path)
{
    if(!obj.is_object()) { schema_error(path, "expected an object"); }
    auto it = obj.find(key);
    if(it == obj.end()) { schema_error(path, std::string("missing field '") + key + "'"); }
    return *it;
}

inline std::uint64_t as_u64(const Json& v, const std::string& path)
{
    if(!v.is_number_unsigned()) { schema_error(path, "expected a nonnegative integer"); }
    return v.get<std::uint64_t>();
}

inline std::uint32_t as_u32(const Json& v, const std::string& path)
{
    const std::uint64_t x = as_u64(v, path);
    if(x > UINT32_MAX) { schema_error(path, "value too large"); }
    return static_cast<std::uint32_t>(x);
}

inline std::vector<Exponent> as_exponents(const Json& v, const std::string& path)
{
    if(!v.is_array()) { schema_error(path, "expected an array"); }
    std::vector<Exponent> out;
    out.reserve(v.size());
    for(std::size_t i = 0; i < v.size(); ++i) { out.push_back(as_u64(v[i], path + "[" + std::to_string(i) + "]")); }
    return out;
}

inline Json parse_text(std::string_view text)
{
    try
    {
        return Json::parse(text);
    }
    catch(const nlohmann::json::parse_error& e)
    {
        throw Error(ErrorCode::ParseError, e.what());
    }
}
} // namespace detail

// ---------------------------------------------------------------------------
// Config

inline Json to_json(const PartitionConfig& cfg)
{
    Json rule;
    if(const auto* a = std::get_if<ArithmeticRule>(&cfg.m_rule))
    {
        rule["kind"] = "arithmetic";
        rule["first"] = a->first;
        rule["step"] = a->step;
    }
    else if(const auto* e = std::get_if<ExplicitRule>(&cfg.m_rule))
    {
        rule["kind"] = "explicit";
        rule["values"] = e->values;
        rule["tail_step"] = e->tail_step;
    }
    else
    {
        rule["kind"] = "blocks";
        rule["blocks"] = Json::array();
        for(const auto& b : std::get<BlockPatternRule>(cfg.m_rule).blocks)
        {
            rule["blocks"].push_back(Json{{"class", b.cls}, {"length", b.length}});
        }
    }
    Json j;
    j["h"] = cfg.h;
    j["t"] = cfg.t;
    j["m_rule"] = std::move(rule);
    j["strict"] = cfg.strict;
    j["mode"] = std::string(to_string(cfg.mode));
    return j;
}

/// Structural parse only; call validate_config for the constraints.
inline PartitionConfig config_from_json(const Json& j, const std::string& path = "config")
{
    using namespace detail;
    PartitionConfig cfg;
    cfg.h = as_u32(field(j, "h", path), path + ".h");
    cfg.t = as_u32(field(j, "t", path), path + ".t");
    const Json& strict = field(j, "strict", path);
    if(!strict.is_boolean()) { schema_error(path + ".strict", "expected a boolean"); }
    cfg.strict = strict.get<bool>();
    const Json& mode = field(j, "mode", path);
    if(!mode.is_string()) { schema_error(path + ".mode", "expected a string"); }
    try
    {
        cfg.mode = mode_from_string(mode.get<std::string>());
    }
    catch(const Error& e)
    {
        schema_error(path + ".mode", e.what());
    }

    const std::string rp = path + ".m_rule";
    const Json& rule = field(j, "m_rule", path);
    const Json& kind = field(rule, "kind", rp);
    if(!kind.is_string()) { schema_error(rp + ".kind", "expected a string"); }
    const std::string k = kind.get<std::string>();
    if(k == "arithmetic")
    {
        cfg.m_rule = ArithmeticRule{as_u64(field(rule, "first", rp), rp + ".first"),
                                    as_u64(field(rule, "step", rp), rp + ".step")};
    }
    else if(k == "explicit")
    {
        cfg.m_rule = ExplicitRule{as_exponents(field(rule, "values", rp), rp + ".values"),
                                  as_u64(field(rule, "tail_step", rp), rp + ".tail_step")};
    }
    else if(k == "blocks")
    {
        const Json& blocks = field(rule, "blocks", rp);
        if(!blocks.is_array()) { schema_error(rp + ".blocks", "expected an array"); }
        BlockPatternRule b;
        for(std::size_t i = 0; i < blocks.size(); ++i)
        {
            const std::string bp = rp + ".blocks[" + std::to_string(i) + "]";
            b.blocks.push_back({as_u32(field(blocks[i], "class", bp), bp + ".class"),
                                as_u64(field(blocks[i], "length", bp), bp + ".length")});
        }
        cfg.m_rule = std::move(b);
    }
    else
    {
        schema_error(rp + ".kind", "unknown rule kind '" + k + "'");
    }
    return cfg;
}

inline PartitionConfig parse_config(std::string_view text) { return config_from_json(detail::parse_text(text)); }

// ---------------------------------------------------------------------------
// Certificate

inline Json value_to_json(const ExponentSet& n)
{
    Json j;
    j["exp"] = n.vec();
    if(n.bit_length() <= kMaxDecimalBits) { j["dec"] = to_decimal(n); }
    return j;
}

inline ExponentSet value_from_json(const Json& j, const std::string& path)
{
    using namespace detail;
    ExponentSet n;
    try
    {
        n = ExponentSet::from_sorted(as_exponents(field(j, "exp", path), path + ".exp"));
    }
    catch(const Error& e)
    {
        if(e.code() == ErrorCode::SchemaError) { throw; }
        schema_error(path + ".exp", e.what());
    }
    if(auto it = j.find("dec"); it != j.end())
    {
        if(!it->is_string()) { schema_error(path + ".dec", "expected a string"); }
        if(n.bit_length() > kMaxDecimalBits || to_decimal(n) != it->get<std::string>())
        {
            schema_error(path + ".dec", "does not match " + path + ".exp");
        }
    }
    return n;
}

inline Json to_json(const RepresentationCertificate& c)
{
    Json j;
    j["schema_version"] = c.schema_version;
    j["config"] = to_json(c.config);
    j["n"] = value_to_json(c.n);
    j["case"] = c.case_tag;
    j["parts"] = Json::array();
    for(const auto& part : c.parts) { j["parts"].push_back(Json{{"class", part.cls.value}, {"exp", part.exponents}}); }
    if(c.trace_digest) { j["trace_digest"] = *c.trace_digest; }
    return j;
}

inline std::string serialize(const RepresentationCertificate& c) { return to_json(c).dump(); }

inline RepresentationCertificate certificate_from_json(const Json& j)
{
    using namespace detail;
    const std::string path = "certificate";
    RepresentationCertificate c;
    const Json& version = field(j, "schema_version", path);
    if(!version.is_number_integer()) { schema_error(path + ".schema_version", "expected an integer"); }
    if(version.get<std::int64_t>() != kCertificateSchemaVersion)
    {
        throw Error(ErrorCode::UnsupportedVersion,
                    "schema_version " + version.dump() + " (supported: " + std::to_string(kCertificateSchemaVersion) + ")");
    }
    c.schema_version = kCertificateSchemaVersion;
    c.config = config_from_json(field(j, "config", path), path + ".config");
    c.n = value_from_json(field(j, "n", path), path + ".n");
    const Json& tag = field(j, "case", path);
    if(!tag.is_string()) { schema_error(path + ".case", "expected a string"); }
    c.case_tag = tag.get<std::string>();
    const Json& parts = field(j, "parts", path);
    if(!parts.is_array()) { schema_error(path + ".parts", "expected an array"); }
    for(std::size_t i = 0; i < parts.size(); ++i)
    {
        const std::string pp = path + ".parts[" + std::to_string(i) + "]";
        c.parts.push_back(CertificatePart{ClassIndex{as_u32(field(parts[i], "class", pp), pp + ".class")},
                                          as_exponents(field(parts[i], "exp", pp), pp + ".exp")});
    }
    if(auto it = j.find("trace_digest"); it != j.end())
    {
        if(!it->is_string()) { schema_error(path + ".trace_digest", "expected a string"); }
        c.trace_digest = it->get<std::string>();
    }
    return c;
}

inline RepresentationCertificate parse_certificate(std::string_view text)
{
    return certificate_from_json(detail::parse_text(text));
}

inline Json to_json(const VerifyResult& r)
{
    Json j;
    j["ok"] = r.ok();
    j["violations"] = Json::array();
    for(const auto& v : r.violations)
    {
        Json e;
        e["part"] = v.part ? Json(*v.part) : Json(nullptr);
        e["constraint"] = v.constraint;
        e["detail"] = v.detail;
        j["violations"].push_back(std::move(e));
    }
    return j;
}

} // namespace nathanson
#endif // NATHANSON_JSON_IO_HPP
