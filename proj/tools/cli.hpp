#ifndef NATHANSON_TOOLS_CLI_HPP
#define NATHANSON_TOOLS_CLI_HPP

// Command-line front end. Every command prints one complete JSON document
// (or a JSON-lines stream ending in a summary record) and exits with:
//   0 ok, 1 verification failure, 2 usage/config error,
//   3 the guarantee does not apply to this n.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "nathanson/avoid4.hpp"
#include "nathanson/certificate.hpp"
#include "nathanson/json_io.hpp"
#include "nathanson/oracle.hpp"
#include "nathanson/partition.hpp"
#include "nathanson/splitter.hpp"

namespace nathanson::cli
{

enum ExitCode : int
{
    kOk = 0,
    kVerificationFailed = 1,
    kUsageError = 2,
    kNotApplicable = 3,
};

inline Json error_json(std::string_view code, const std::string& message)
{
    Json e;
    e["code"] = std::string(code);
    e["message"] = message;
    return Json{{"error", std::move(e)}};
}

inline int exit_code_for(ErrorCode code)
{
    switch(code)
    {
        case ErrorCode::TooFewTerms:
        case ErrorCode::BelowGuarantee: return kNotApplicable;
        default:                        return kUsageError;
    }
}

inline std::string read_file(const std::string& path)
{
    if(path == "-")
    {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    std::ifstream in(path, std::ios::binary);
    if(!in) { throw Error(ErrorCode::ParseError, "cannot read '" + path + "'"); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Partition load_partition(const std::string& path) { return Partition(parse_config(read_file(path))); }

inline Json divergences_json(const std::vector<Divergence>& ds)
{
    Json arr = Json::array();
    for(const auto& d : ds)
    {
        Json j;
        j["subcase"] = std::string(to_string(d.subcase));
        j["part"] = d.part;
        j["exp"] = d.exponents;
        j["check"] = d.check;
        j["detail"] = d.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

struct RepresentFlags
{
    bool trace = false;
    bool paper_faithful = false;
};

/// One representation, verified before it is returned. `diag` receives
/// trace and divergence records.
struct Represented
{
    int code = kOk;
    Json payload;
};

inline Represented represent_one(const Partition& p, const ExponentSet& n, const RepresentFlags& flags,
                                 std::ostream* diag)
{
    Represented out;
    try
    {
        RepresentationCertificate cert;
        if(p.mode() == Mode::Case1)
        {
            SplitResult r;
            cert = represent_case1(p, n, SplitOptions{flags.trace}, &r);
            if(flags.trace && diag != nullptr)
            {
                Json steps = Json::array();
                for(const auto& s : r.trace) { steps.push_back(Json{{"rule", std::string(to_string(s.rule))}, {"w", s.w}}); }
                *diag << Json{{"trace", std::move(steps)}, {"steps", r.steps}}.dump() << '\n';
            }
        }
        else if(p.mode() == Mode::Case2)
        {
            auto outcome = represent_avoiding_4(p, n, Avoid4Options{flags.paper_faithful});
            if(!outcome.divergences.empty() && diag != nullptr)
            {
                *diag << Json{{"divergences", divergences_json(outcome.divergences)}}.dump() << '\n';
            }
            cert = std::move(outcome.certificate);
        }
        else
        {
            throw Error(ErrorCode::WrongMode, "generic_lab configs do not produce certificates");
        }
        const auto v = verify(cert);
        if(!v.ok())
        {
            out.code = kVerificationFailed;
            out.payload = error_json("VerificationFailed", "certificate failed self-verification");
            out.payload["error"]["verify"] = to_json(v);
            out.payload["error"]["n"] = value_to_json(n);
            return out;
        }
        out.payload = to_json(cert);
    }
    catch(const Error& e)
    {
        out.code = exit_code_for(e.code());
        out.payload = error_json(to_string(e.code()), e.what());
        out.payload["error"]["n"] = value_to_json(n);
    }
    return out;
}

inline std::uint64_t window_budget(std::uint64_t flag_value)
{
    if(flag_value != 0) { return flag_value; }
    if(const char* env = std::getenv("NATHANSON_MAX_WINDOW"))
    {
        const auto v = parse_value(env).to_u64();
        if(!v) { throw Error(ErrorCode::InvalidConfig, "NATHANSON_MAX_WINDOW does not fit in 64 bits"); }
        return *v;
    }
    return OracleOptions{}.max_window;
}

inline std::uint64_t to_u64_or_throw(const ExponentSet& v, const char* what)
{
    const auto x = v.to_u64();
    if(!x) { throw Error(ErrorCode::InvalidConfig, std::string(what) + " must fit in 64 bits"); }
    return *x;
}

inline int cmd_scan(const Partition& p, const ExponentSet& from, const ExponentSet& to, unsigned jobs,
                    const RepresentFlags& flags, std::ostream& out)
{
    const ExponentSet one = ExponentSet::from_u64(1);
    const ExponentSet threshold = p.mode() == Mode::Case1 ? case1_threshold(p) : ExponentSet{};
    std::uint64_t total = 0, ok = 0, below = 0, too_few = 0, failed = 0;
    constexpr std::size_t kBatch = 4096;
    jobs = std::max(1u, jobs);

    ExponentSet next = from;
    while(next <= to)
    {
        std::vector<ExponentSet> batch;
        while(batch.size() < kBatch && next <= to)
        {
            batch.push_back(next);
            next = add(next, one);
        }
        std::vector<Represented> results(batch.size());
        auto work = [&](unsigned w) {
            for(std::size_t i = w; i < batch.size(); i += jobs)
            {
                results[i] = represent_one(p, batch[i], RepresentFlags{false, flags.paper_faithful}, nullptr);
            }
        };
        if(jobs == 1) { work(0); }
        else
        {
            std::vector<std::jthread> pool;
            for(unsigned w = 0; w < jobs; ++w) { pool.emplace_back(work, w); }
        }
        for(std::size_t i = 0; i < batch.size(); ++i)
        {
            ++total;
            const auto& r = results[i];
            if(r.code == kOk) { ++ok; }
            else if(r.code == kNotApplicable)
            {
                const std::string code = r.payload["error"]["code"].get<std::string>();
                if(code == to_string(ErrorCode::BelowGuarantee)) { ++below; }
                else if(batch[i] < threshold) { ++too_few; }
                else { ++failed; }
            }
            else { ++failed; }
            out << r.payload.dump() << '\n';
        }
    }
    Json summary;
    summary["total"] = total;
    summary["ok"] = ok;
    summary["below_guarantee"] = below;
    summary["too_few_terms"] = too_few;
    summary["failed"] = failed;
    out << Json{{"summary", std::move(summary)}}.dump() << '\n';
    return failed == 0 ? kOk : kVerificationFailed;
}

inline Json theorem_a_json(const TheoremAReport& r)
{
    Json j;
    j["kind"] = "theorem-a";
    j["N"] = r.N;
    j["h"] = r.h;
    j["t"] = r.t;
    j["threshold"] = r.threshold ? Json(*r.threshold) : Json(nullptr);
    j["gap_count"] = r.gap_count;
    j["samples"] = Json::array();
    for(const auto& s : r.samples)
    {
        Json e;
        e["a"] = s.a;
        e["e_window_size"] = s.e_window_size;
        e["smallest"] = s.smallest ? Json(*s.smallest) : Json(nullptr);
        e["largest"] = s.largest ? Json(*s.largest) : Json(nullptr);
        j["samples"].push_back(std::move(e));
    }
    j["all_samples_nonempty"] = r.all_samples_nonempty;
    j["unmet_hypotheses"] = r.unmet_hypotheses;
    j["note"] = r.note;
    return j;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Minimal asymptotic basis constructions: partitions, certificates, brute-force oracle"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    std::string config_path;
    std::string n_text, from_text, to_text, w_text, cert_path = "-";
    RepresentFlags flags;
    unsigned jobs = 1;
    std::uint64_t big_n = 0, a_value = 0, max_window = 0, samples = 20;

    auto* config_cmd = app.add_subcommand("config", "Inspect a partition config");
    config_cmd->require_subcommand(1);
    auto* validate_cmd = config_cmd->add_subcommand("validate", "Check every config constraint");
    validate_cmd->add_option("--config", config_path, "Config JSON")->required();
    auto* show_cmd = config_cmd->add_subcommand("show", "Print the config and its first blocks");
    show_cmd->add_option("--config", config_path, "Config JSON")->required();

    auto* classify_cmd = app.add_subcommand("classify", "Class of an exponent (--w) or of an element (--n)");
    classify_cmd->add_option("--config", config_path, "Config JSON")->required();
    auto* w_opt = classify_cmd->add_option("--w", w_text, "Exponent");
    auto* cn_opt = classify_cmd->add_option("--n", n_text, "Value: decimal or exp:[...]");
    w_opt->excludes(cn_opt);

    auto* represent_cmd = app.add_subcommand("represent", "Emit a verified certificate for n");
    represent_cmd->add_option("--config", config_path, "Config JSON")->required();
    represent_cmd->add_option("--n", n_text, "Value: decimal or exp:[...]")->required();
    represent_cmd->add_flag("--trace", flags.trace, "Record the splitting trace (case1); trace goes to stderr");
    represent_cmd->add_flag("--paper-faithful", flags.paper_faithful,
                            "Use the published g_1 = 2 formula when it verifies; report divergences on stderr");

    auto* scan_cmd = app.add_subcommand("scan", "One certificate or error per n in [from, to], JSON lines");
    scan_cmd->add_option("--config", config_path, "Config JSON")->required();
    scan_cmd->add_option("--from", from_text, "First n")->required();
    scan_cmd->add_option("--to", to_text, "Last n")->required();
    scan_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    scan_cmd->add_flag("--paper-faithful", flags.paper_faithful, "As for represent");

    auto* verify_cmd = app.add_subcommand("verify", "Verify a certificate file (or - for stdin)");
    verify_cmd->add_option("certificate", cert_path, "Certificate JSON path");

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force window computations");
    oracle_cmd->require_subcommand(1);
    std::vector<CLI::App*> oracle_subs;
    for(const char* name : {"rtable", "ewindow", "enumerate", "theorem-a"})
    {
        auto* sub = oracle_cmd->add_subcommand(name);
        sub->add_option("--config", config_path, "Config JSON")->required();
        sub->add_option("--N", big_n, "Window bound")->required();
        sub->add_option("--max-window", max_window, "Window budget (default from NATHANSON_MAX_WINDOW or 2^22)");
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
        oracle_subs.push_back(sub);
    }
    oracle_subs[0]->description("r_h(A, n) for n <= N, and the n with r_h = 0");
    oracle_subs[1]->description("(hA \\ h(A \\ {a})) within [0, N]");
    oracle_subs[1]->add_option("--a", a_value, "Element a")->required();
    oracle_subs[2]->description("A within [1, N]");
    oracle_subs[3]->description("Coverage and E_a samples for a block-pattern partition with 2^t > h");
    oracle_subs[3]->add_option("--samples", samples, "Number of sampled a");
    bool allow_unmet = false;
    oracle_subs[3]->add_flag("--allow-unmet-hypotheses", allow_unmet,
                             "Run even when 2^t <= h or a class lacks a run of t; the report lists what fails");

    try
    {
        app.parse(argc, argv);
    }
    catch(const CLI::CallForHelp& e)
    {
        out << app.help();
        return kOk;
    }
    catch(const CLI::CallForAllHelp& e)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    }
    catch(const CLI::ParseError& e)
    {
        err << error_json("UsageError", e.what()).dump() << '\n';
        return kUsageError;
    }

    try
    {
        if(validate_cmd->parsed())
        {
            const auto cfg = parse_config(read_file(config_path));
            const auto violations = config_violations(cfg);
            Json j;
            j["valid"] = violations.empty();
            j["violations"] = Json::array();
            for(const auto& v : violations)
            {
                j["violations"].push_back(
                    Json{{"code", std::string(to_string(v.code))}, {"constraint", v.constraint}, {"detail", v.detail}});
            }
            out << j.dump() << '\n';
            return violations.empty() ? kOk : kUsageError;
        }
        if(show_cmd->parsed())
        {
            const auto p = load_partition(config_path);
            Json j;
            j["config"] = to_json(p.config());
            if(!p.is_block_pattern())
            {
                j["m"] = Json{p.m(1), p.m(2), p.m(3)};
                const std::uint64_t upto = p.m(3) + p.t();
                for(std::uint32_t c = 0; c < p.h(); ++c)
                {
                    Json ivs = Json::array();
                    for(const auto& iv : p.intervals(ClassIndex{c}, upto)) { ivs.push_back(Json{iv.lo, iv.hi}); }
                    j["intervals_upto"] = upto;
                    j["classes"].push_back(std::move(ivs));
                }
            }
            out << j.dump() << '\n';
            return kOk;
        }
        if(classify_cmd->parsed())
        {
            const auto p = load_partition(config_path);
            Json j;
            if(!w_text.empty())
            {
                const auto w = to_u64_or_throw(parse_value(w_text), "--w");
                j["w"] = w;
                j["class"] = p.classify(w).value;
            }
            else if(!n_text.empty())
            {
                const auto n = parse_value(n_text);
                j["n"] = value_to_json(n);
                const auto c = classify_element(p, n);
                j["class"] = c ? Json(c->value) : Json(nullptr);
                j["in_A"] = c.has_value();
            }
            else
            {
                throw Error(ErrorCode::InvalidConfig, "classify needs --w or --n");
            }
            out << j.dump() << '\n';
            return kOk;
        }
        if(represent_cmd->parsed())
        {
            const auto p = load_partition(config_path);
            const auto n = parse_value(n_text);
            const auto r = represent_one(p, n, flags, &err);
            out << r.payload.dump() << '\n';
            return r.code;
        }
        if(scan_cmd->parsed())
        {
            const auto p = load_partition(config_path);
            if(p.mode() == Mode::GenericLab)
            {
                throw Error(ErrorCode::WrongMode, "generic_lab configs do not produce certificates");
            }
            return cmd_scan(p, parse_value(from_text), parse_value(to_text), jobs, flags, out);
        }
        if(verify_cmd->parsed())
        {
            RepresentationCertificate cert;
            try
            {
                cert = parse_certificate(read_file(cert_path));
            }
            catch(const Error& e)
            {
                out << error_json(to_string(e.code()), e.what()).dump() << '\n';
                return kUsageError;
            }
            const auto v = verify(cert);
            out << to_json(v).dump() << '\n';
            return v.ok() ? kOk : kVerificationFailed;
        }
        if(oracle_cmd->parsed())
        {
            const auto p = load_partition(config_path);
            OracleOptions opts;
            opts.max_window = window_budget(max_window);
            opts.threads = jobs;
            Json j;
            if(oracle_subs[0]->parsed())
            {
                const auto table = r_h_table(p, big_n, opts);
                j["kind"] = "rtable";
                j["N"] = big_n;
                j["h"] = p.h();
                j["r"] = table.counts;
                j["saturated"] = table.saturated;
                j["count_cap"] = opts.count_cap;
                j["gaps"] = gaps(table);
            }
            else if(oracle_subs[1]->parsed())
            {
                j["kind"] = "ewindow";
                j["N"] = big_n;
                j["a"] = a_value;
                j["e_window"] = e_window(p, a_value, big_n, opts);
            }
            else if(oracle_subs[2]->parsed())
            {
                const auto elements = enumerate_A(p, big_n, opts);
                j["kind"] = "enumerate";
                j["N"] = big_n;
                j["count"] = elements.size();
                j["elements"] = elements;
            }
            else
            {
                j = theorem_a_json(theorem_a_spot_check(p, big_n, samples, opts, allow_unmet));
            }
            if(!j.contains("note")) { j["note"] = std::string(kFiniteWindowNote); }
            out << j.dump() << '\n';
            return kOk;
        }
    }
    catch(const Error& e)
    {
        out << error_json(to_string(e.code()), e.what()).dump() << '\n';
        return exit_code_for(e.code());
    }
    return kUsageError;
}

} // namespace nathanson::cli
#endif // NATHANSON_TOOLS_CLI_HPP
