#ifndef AUTOCX_SERIALIZE_HPP
#define AUTOCX_SERIALIZE_HPP

// JSON-lines records, one object per line with a "kind" field:
//   an_result, indeterminate, bound_certificate, cycle_tree, survey_table, mc_report.
// Derived data (stage trees, completion order) is not stored; decoding
// recomputes it from the trace.

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "autocx/lab.hpp"
#include "autocx/solver.hpp"

namespace autocx {

using json = nlohmann::json;

inline json tree_to_json(const CycleTree& t)
{
    json nodes = json::array();
    for (const auto& [label, cycle] : t.nodes()) nodes.push_back({{"label", label}, {"cycle", cycle}});
    return nodes;
}

inline CycleTree tree_from_json(const json& j)
{
    std::map<Label, Cycle> nodes;
    for (const auto& node : j) nodes.emplace(node.at("label").get<Label>(), node.at("cycle").get<Cycle>());
    return CycleTree(std::move(nodes));
}

inline json to_json(const BoundCertificate& c)
{
    json powers = json::array();
    if (c.set)
        for (const auto& o : c.set->occs)
            powers.push_back({{"start", o.start}, {"period", o.period}, {"length", o.length}, {"alpha", exponent_str(o)}});
    return {{"kind", "bound_certificate"}, {"word", c.word.str()},   {"alphabet", c.word.alphabet_size()},
            {"mode", mode_name(c.mode)},  {"exact", c.exact},        {"powers", powers},
            {"save_unique", c.save_unique}, {"q_min", c.q_min}};
}

inline BoundCertificate certificate_from_json(const json& j)
{
    BoundCertificate c;
    c.word = Word::parse(j.at("word").get<std::string>(), j.at("alphabet").get<int>());
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.exact = j.at("exact").get<bool>();
    LeafPowerSet set;
    for (const auto& p : j.at("powers"))
        set.occs.push_back({p.at("start").get<std::size_t>(), p.at("period").get<std::size_t>(),
                            p.at("length").get<std::size_t>()});
    if (!set.occs.empty()) c.set = std::move(set);
    c.save_unique = j.at("save_unique").get<std::int64_t>();
    c.q_min = j.at("q_min").get<std::size_t>();
    return c;
}

inline json to_json(const Word& x, const ComplexityResult& r)
{
    return {{"kind", "an_result"},
            {"word", x.str()},
            {"alphabet", x.alphabet_size()},
            {"value", r.value},
            {"trace", std::vector<State>(r.trace.begin(), r.trace.end())},
            {"witness", to_text(r.witness)},
            {"tree", tree_to_json(r.tree)},
            {"lower_bound", to_json(r.lower_certificate)},
            {"nodes", r.nodes}};
}

inline json to_json(const Word& x, const Indeterminate& r)
{
    return {{"kind", "indeterminate"}, {"word", x.str()},  {"alphabet", x.alphabet_size()},
            {"lower", r.lower},        {"upper", r.upper}, {"nodes", r.nodes},
            {"lower_bound", to_json(r.lower_certificate)}};
}

/// Rebuilds a result as stored. Nothing is re-validated here; that is
/// verify_result's job.
inline std::pair<Word, ComplexityResult> result_from_json(const json& j)
{
    Word x = Word::parse(j.at("word").get<std::string>(), j.at("alphabet").get<int>());
    StateSequence seq(j.at("trace").get<std::vector<State>>());
    auto [tree, stages] = build_cycle_tree(seq);
    ComplexityResult r{j.at("value").get<std::size_t>(),
                       nfa_from_text(j.at("witness").get<std::string>()),
                       seq,
                       tree_from_json(j.at("tree")),
                       std::move(stages),
                       certificate_from_json(j.at("lower_bound")),
                       j.at("nodes").get<std::uint64_t>()};
    return {std::move(x), std::move(r)};
}

inline json to_json(const StateSequence& seq, const CycleTree& tree)
{
    return {{"kind", "cycle_tree"}, {"trace", std::vector<State>(seq.begin(), seq.end())}, {"tree", tree_to_json(tree)}};
}

/// solver_calls and cache_hits describe one run, not the table, and are
/// left out so repeated runs produce identical records.
inline json to_json(const SurveyTable& t, BoundMode bound_mode = BoundMode::DistinctLengths)
{
    json hist = json::array();
    for (auto [v, c] : t.histogram) hist.push_back({v, c});
    json j = {{"kind", "survey_table"},
              {"n", t.n},
              {"alphabet", t.alphabet_size},
              {"provenance", survey_mode_name(t.provenance)},
              {"histogram", hist},
              {"indeterminate", t.indeterminate}};
    if (t.provenance == SurveyMode::Bound) j["bound_mode"] = mode_name(bound_mode);
    return j;
}

inline SurveyTable survey_from_json(const json& j)
{
    SurveyTable t;
    t.n = j.at("n").get<std::size_t>();
    t.alphabet_size = j.at("alphabet").get<int>();
    t.provenance = parse_survey_mode(j.at("provenance").get<std::string>());
    for (const auto& e : j.at("histogram")) t.histogram[e.at(0).get<std::size_t>()] = e.at(1).get<std::uint64_t>();
    t.indeterminate = j.at("indeterminate").get<std::uint64_t>();
    return t;
}

inline json to_json(const McReport& r)
{
    return {{"kind", "mc_report"},
            {"n", r.n},
            {"trials", r.trials},
            {"d", r.d},
            {"seed", r.seed},
            {"run_threshold", r.run_threshold},
            {"runs_bounded", r.runs_bounded},
            {"frac_run_bounded", r.frac_run_bounded},
            {"union_bound_value", r.union_bound_value},
            {"bound_threshold", r.bound_threshold},
            {"bound_met", r.bound_met},
            {"frac_bound_met", r.frac_bound_met}};
}

inline McReport mc_from_json(const json& j)
{
    McReport r;
    r.n = j.at("n").get<std::size_t>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.d = j.at("d").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.run_threshold = j.at("run_threshold").get<std::size_t>();
    r.runs_bounded = j.at("runs_bounded").get<std::uint64_t>();
    r.frac_run_bounded = j.at("frac_run_bounded").get<double>();
    r.union_bound_value = j.at("union_bound_value").get<double>();
    r.bound_threshold = j.at("bound_threshold").get<double>();
    r.bound_met = j.at("bound_met").get<std::uint64_t>();
    r.frac_bound_met = j.at("frac_bound_met").get<double>();
    return r;
}

struct VerifyOptions {
    SurveyOptions survey;
    unsigned threads = 1;
};

/// Outcome of re-checking one record: ok, or a reason.
struct VerifyReport {
    bool ok = false;
    std::string kind;
    std::string reason;
};

/// Re-checks one JSON-lines record. Results and certificates are checked
/// structurally; surveys and Monte Carlo reports are recomputed and compared.
inline VerifyReport verify_record(const std::string& line, const VerifyOptions& opts = {})
{
    VerifyReport rep;
    try {
        json j = json::parse(line);
        rep.kind = j.at("kind").get<std::string>();
        auto fail = [&](std::string why) {
            rep.reason = std::move(why);
            return rep;
        };
        if (rep.kind == "an_result") {
            auto [x, r] = result_from_json(j);
            if (!verify_result(x, r)) return fail("result does not re-check");
        } else if (rep.kind == "indeterminate") {
            return fail("record is indeterminate");
        } else if (rep.kind == "bound_certificate") {
            BoundCertificate c = certificate_from_json(j);
            if (!verify_certificate(c.word, c)) return fail("certificate does not re-check");
        } else if (rep.kind == "cycle_tree") {
            StateSequence seq(j.at("trace").get<std::vector<State>>());
            auto [tree, stages] = build_cycle_tree(seq);
            if (!(tree == tree_from_json(j.at("tree")))) return fail("tree differs from the one the trace builds");
        } else if (rep.kind == "survey_table") {
            SurveyTable t = survey_from_json(j);
            SurveyOptions so = opts.survey;
            so.threads = opts.threads;
            so.cache = nullptr;
            if (j.contains("bound_mode")) so.bound_mode = parse_mode(j.at("bound_mode").get<std::string>());
            SurveyTable fresh = survey(t.n, t.alphabet_size, t.provenance, so);
            if (fresh.histogram != t.histogram || fresh.indeterminate != t.indeterminate)
                return fail("recomputed histogram differs");
        } else if (rep.kind == "mc_report") {
            McReport r = mc_from_json(j);
            if (!(monte_carlo(r.n, r.trials, r.d, r.seed, opts.threads) == r)) return fail("recomputed report differs");
        } else {
            return fail("unknown record kind");
        }
        rep.ok = true;
    } catch (const std::exception& e) {
        rep.ok = false;
        rep.reason = e.what();
    }
    return rep;
}

} // namespace autocx

#endif // AUTOCX_SERIALIZE_HPP
