// autocx: nondeterministic automatic complexity from the command line.
//
//   autocx an WORD [--max-q Q] [--safe] [--dot PATH]
//   autocx bound WORD [--mode distinct|unique]
//   autocx tree --sequence S | --nfa FILE --word W
//   autocx survey --n N [--alphabet K] [--mode exact|bound]
//   autocx mc --n N [--trials T] [--d D] [--seed S]
//   autocx verify [FILE]
//
// Exit status: 0 success, 1 failed verification or indeterminate search,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "autocx/lab.hpp"
#include "autocx/serialize.hpp"
#include "autocx/solver.hpp"

namespace {

using namespace autocx;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

// "@file" reads the word from a file.
Word read_word(const std::string& arg, int alphabet)
{
    std::string text = arg;
    if (!text.empty() && text[0] == '@') text = slurp(text.substr(1));
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty()) throw UsageError("empty word");
    return Word::parse(text, alphabet);
}

// Hex digits, or comma-separated hex numbers when states go past F.
StateSequence read_sequence(const std::string& text)
{
    std::vector<State> raw;
    auto hex = [](const std::string& tok) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used, 16);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty()) throw UsageError("bad state \"" + tok + "\" in sequence");
        return static_cast<State>(v);
    };
    if (text.find(',') != std::string::npos) {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ',')) raw.push_back(hex(tok));
    } else {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) raw.push_back(hex(std::string(1, c)));
    }
    if (raw.empty()) throw UsageError("empty state sequence");
    return canonicalize(raw);
}

std::string nfa_pretty(const Nfa& m)
{
    std::ostringstream os;
    os << "states " << m.num_states() << ", start " << state_name(m.start()) << ", final "
       << state_name(m.final_state()) << '\n';
    for (const Edge& e : m.edges())
        os << "  " << state_name(e.source) << " -" << symbol_char(e.symbol) << "-> " << state_name(e.target) << '\n';
    return os.str();
}

std::string cert_summary(const BoundCertificate& c)
{
    std::ostringstream os;
    os << "lower bound " << c.q_min << " (" << mode_name(c.mode) << ", save_unique " << c.save_unique
       << (c.exact ? "" : ", over-approximated") << ")";
    return os.str();
}

std::optional<ResultCache> open_cache(const std::string& flag)
{
    std::string path = flag;
    if (path.empty())
        if (const char* env = std::getenv("AUTOCX_CACHE")) path = env;
    if (path.empty()) return std::nullopt;
    std::optional<ResultCache> cache(std::in_place, path);
    for (const auto& w : cache->warnings()) std::cerr << "warning: " << w << '\n';
    return cache;
}

void check_format(const std::string& format, bool csv_ok)
{
    if (format == "text" || format == "json-lines" || (csv_ok && format == "csv")) return;
    throw UsageError("unsupported --format " + format);
}

struct Flags {
    std::string word, mode, format = "text", dot, cache, sequence, nfa, file;
    std::size_t max_q = 0, n = 0;
    int alphabet = 0;
    bool safe = false;
    unsigned threads = 1;
    std::uint64_t seed = 1, trials = 1000, budget = SearchOptions{}.node_budget;
    double d = 3;
};

int cmd_an(const Flags& f)
{
    check_format(f.format, false);
    Word x = read_word(f.word, f.alphabet);
    SearchOptions opts{f.budget};
    const bool json_out = f.format == "json-lines";

    if (f.max_q > 0) {
        SearchStats stats;
        auto m = an_upper_search(x, f.max_q, opts, &stats);
        if (m) {
            auto r = make_result(x, trace(*m, x), leaf_power_lower_bound(x, BoundMode::DistinctLengths), stats.nodes);
            if (!f.dot.empty()) write_file(f.dot, to_dot(r.witness));
            if (json_out) {
                std::cout << to_json(x, r).dump() << '\n';
            } else {
                std::cout << "word " << x.str() << " (n=" << x.size() << ")\n"
                          << "A_N <= " << f.max_q << ": witness with " << r.value << " states\n"
                          << "trace " << r.trace.str() << '\n'
                          << nfa_pretty(r.witness);
            }
            return exit_ok;
        }
        if (stats.aborted) {
            std::cout << "word " << x.str() << ": search budget exhausted after " << stats.nodes << " nodes\n";
            return exit_failed;
        }
        std::cout << "word " << x.str() << ": no witness with at most " << f.max_q << " states, so A_N > "
                  << f.max_q << '\n';
        return exit_ok;
    }

    auto cache = open_cache(f.cache);
    std::optional<ComplexityResult> cached;
    if (cache) cached = cache->get(x);
    ExactOutcome out = cached ? ExactOutcome(*cached) : an_exact(x, f.safe, opts);
    if (auto* ind = std::get_if<Indeterminate>(&out)) {
        if (json_out)
            std::cout << to_json(x, *ind).dump() << '\n';
        else
            std::cout << "word " << x.str() << " (n=" << x.size() << ")\n"
                      << "indeterminate: " << ind->lower << " <= A_N <= " << ind->upper << " after " << ind->nodes
                      << " nodes\n";
        return exit_failed;
    }
    auto& r = std::get<ComplexityResult>(out);
    if (cache && !cached) cache->put(x, r);
    if (!f.dot.empty()) write_file(f.dot, to_dot(r.witness));
    if (json_out) {
        std::cout << to_json(x, r).dump() << '\n';
    } else {
        std::cout << "word " << x.str() << " (n=" << x.size() << ")\n"
                  << "A_N " << r.value << '\n'
                  << cert_summary(r.lower_certificate) << '\n'
                  << "trace " << r.trace.str() << '\n'
                  << nfa_pretty(r.witness) << "cycle tree\n"
                  << to_text(r.tree);
    }
    return exit_ok;
}

int cmd_bound(const Flags& f)
{
    check_format(f.format, false);
    Word x = read_word(f.word, f.alphabet);
    BoundMode mode = f.mode.empty() ? BoundMode::FullUniqueness : parse_mode(f.mode);
    BoundCertificate c = leaf_power_lower_bound(x, mode);
    if (f.format == "json-lines")
        std::cout << to_json(c).dump() << '\n';
    else
        std::cout << to_record(c) << "A_N >= " << c.q_min << '\n';
    return exit_ok;
}

int cmd_tree(const Flags& f)
{
    check_format(f.format, false);
    StateSequence seq;
    if (!f.sequence.empty()) {
        if (!f.nfa.empty()) throw UsageError("give either --sequence or --nfa, not both");
        seq = read_sequence(f.sequence);
    } else if (!f.nfa.empty()) {
        if (f.word.empty()) throw UsageError("--nfa needs a word");
        seq = trace(nfa_from_text(slurp(f.nfa)), read_word(f.word, f.alphabet));
    } else {
        throw UsageError("tree needs --sequence or --nfa with a word");
    }
    auto [tree, stages] = build_cycle_tree(seq);
    if (!f.dot.empty()) write_file(f.dot, to_dot(tree));
    if (f.format == "json-lines") {
        std::cout << to_json(seq, tree).dump() << '\n';
    } else {
        std::cout << "sequence " << seq.str() << '\n' << to_text(seq, stages) << "cycle tree\n" << to_text(tree);
    }
    return exit_ok;
}

int cmd_survey(const Flags& f)
{
    check_format(f.format, true);
    if (f.n == 0) throw UsageError("survey needs --n");
    SurveyMode mode = f.mode.empty() ? SurveyMode::Exact : parse_survey_mode(f.mode);
    auto cache = mode == SurveyMode::Exact ? open_cache(f.cache) : std::nullopt;
    SurveyOptions opts;
    opts.threads = f.threads;
    opts.search.node_budget = f.budget;
    opts.cache = cache ? &*cache : nullptr;
    SurveyTable t = survey(f.n, f.alphabet == 0 ? 2 : f.alphabet, mode, opts);
    if (f.format == "json-lines")
        std::cout << to_json(t, opts.bound_mode).dump() << '\n';
    else if (f.format == "csv")
        std::cout << to_csv(t);
    else
        std::cout << to_text(t);
    return t.indeterminate ? exit_failed : exit_ok;
}

int cmd_mc(const Flags& f)
{
    check_format(f.format, true);
    if (f.n == 0) throw UsageError("mc needs --n");
    if (f.trials == 0) throw UsageError("--trials must be positive");
    McReport r = monte_carlo(f.n, f.trials, f.d, f.seed, f.threads);
    if (f.format == "json-lines")
        std::cout << to_json(r).dump() << '\n';
    else if (f.format == "csv")
        std::cout << to_csv(r);
    else
        std::cout << to_text(r);
    return exit_ok;
}

int cmd_verify(const Flags& f)
{
    std::string text = f.file.empty() || f.file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                       : slurp(f.file);
    VerifyOptions opts;
    opts.threads = f.threads;
    std::istringstream in(text);
    std::string line;
    std::size_t count = 0, failed = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++count;
        VerifyReport rep = verify_record(line, opts);
        if (rep.ok) {
            std::cout << "ok " << rep.kind << '\n';
        } else {
            ++failed;
            std::cout << "FAIL " << (rep.kind.empty() ? "?" : rep.kind) << ": " << rep.reason << '\n';
        }
    }
    if (count == 0) throw UsageError("no records to verify");
    return failed ? exit_failed : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nondeterministic automatic complexity of finite words"};
    app.require_subcommand(1);
    Flags f;

    auto add_format = [&](CLI::App* c) { c->add_option("--format", f.format, "text, csv or json-lines"); };

    auto* an = app.add_subcommand("an", "Compute A_N of a word, or test an upper bound with --max-q");
    an->add_option("word,--word", f.word, "Word, exponent notation allowed (\"0^5 1 (01)^2\"), or @file")->required();
    an->add_option("--alphabet", f.alphabet, "Alphabet size (default: inferred, at least 2)");
    an->add_option("--max-q", f.max_q, "Only look for a witness with at most this many states");
    an->add_flag("--safe", f.safe, "Start the exact search at one state instead of the lower bound");
    an->add_option("--budget", f.budget, "Search node budget");
    an->add_option("--dot", f.dot, "Write the witness as Graphviz DOT");
    an->add_option("--cache", f.cache, "Result cache file (default: $AUTOCX_CACHE)");
    add_format(an);

    auto* bound = app.add_subcommand("bound", "Leaf power lower bound with its certificate");
    bound->add_option("word,--word", f.word, "Word")->required();
    bound->add_option("--alphabet", f.alphabet, "Alphabet size");
    bound->add_option("--mode", f.mode, "distinct or unique (default unique)");
    add_format(bound);

    auto* tree = app.add_subcommand("tree", "Cycle tree of a witness walk");
    tree->add_option("--sequence", f.sequence, "State sequence, hex digits or comma-separated hex");
    tree->add_option("--nfa", f.nfa, "Automaton file in text format; the trace of the word is used");
    tree->add_option("word,--word", f.word, "Word read by the automaton given with --nfa");
    tree->add_option("--alphabet", f.alphabet, "Alphabet size");
    tree->add_option("--dot", f.dot, "Write the final tree as Graphviz DOT");
    add_format(tree);

    auto* sv = app.add_subcommand("survey", "Histogram over all words of one length");
    sv->add_option("--n", f.n, "Word length")->required();
    sv->add_option("--alphabet", f.alphabet, "Alphabet size (default 2)");
    sv->add_option("--mode", f.mode, "exact or bound (default exact)");
    sv->add_option("--threads", f.threads, "Worker threads");
    sv->add_option("--budget", f.budget, "Search node budget per word");
    sv->add_option("--cache", f.cache, "Result cache file (default: $AUTOCX_CACHE)");
    add_format(sv);

    auto* mc = app.add_subcommand("mc", "Monte Carlo run statistics for random binary words");
    mc->add_option("--n", f.n, "Word length")->required();
    mc->add_option("--trials", f.trials, "Number of sampled words");
    mc->add_option("--d", f.d, "Exponent d in the run threshold d*log2(n)");
    mc->add_option("--seed", f.seed, "Generator seed (mt19937_64)");
    mc->add_option("--threads", f.threads, "Worker threads");
    add_format(mc);

    auto* verify = app.add_subcommand("verify", "Re-check JSON-lines records");
    verify->add_option("file", f.file, "Record file (default: standard input)");
    verify->add_option("--threads", f.threads, "Worker threads for recomputation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*an) return cmd_an(f);
        if (*bound) return cmd_bound(f);
        if (*tree) return cmd_tree(f);
        if (*sv) return cmd_survey(f);
        if (*mc) return cmd_mc(f);
        if (*verify) return cmd_verify(f);
    } catch (const UsageError& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_usage;
    } catch (const CapExceeded& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidWitnessSequence& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_failed;
    } catch (const NotUniquelyAccepting& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_failed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "autocx: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_usage;
}
