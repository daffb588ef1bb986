#ifndef AUTOCX_LAB_HPP
#define AUTOCX_LAB_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <boost/crc.hpp>

#include "autocx/bounds.hpp"
#include "autocx/errors.hpp"
#include "autocx/solver.hpp"
#include "autocx/word.hpp"

namespace autocx {

namespace detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers, striding.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) fn(i);
        });
}

inline std::string crc_hex(const std::string& s)
{
    boost::crc_32_type crc;
    crc.process_bytes(s.data(), s.size());
    std::ostringstream os;
    os << std::hex << std::setw(8) << std::setfill('0') << crc.checksum();
    return os.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Result cache

/// Append-only store of solved words, one checksummed line per record:
///   <alphabet>\t<word>\t<value>\t<trace, comma separated>\t<crc32 of the rest>
/// Lines failing the checksum are skipped and reported in warnings().
/// Single writer.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path path) : path_(std::move(path))
    {
        std::ifstream in(path_);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                auto [key, rec] = parse_line(line);
                records_[key] = std::move(rec);
            } catch (const CorruptRecord& e) {
                warnings_.push_back(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    std::optional<ComplexityResult> get(const Word& x) const
    {
        auto it = records_.find({x.alphabet_size(), x.str()});
        if (it == records_.end()) return std::nullopt;
        return make_result(x, it->second, leaf_power_lower_bound(x, BoundMode::DistinctLengths));
    }

    bool contains(const Word& x) const { return records_.count({x.alphabet_size(), x.str()}) > 0; }

    void put(const Word& x, const ComplexityResult& r)
    {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw Error("cannot append to cache " + path_.string());
        out << line_for(x, r.trace) << '\n';
        out.flush();
        records_[{x.alphabet_size(), x.str()}] = r.trace;
    }

    std::size_t size() const { return records_.size(); }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::filesystem::path& path() const { return path_; }

    static std::string line_for(const Word& x, const StateSequence& trace)
    {
        std::ostringstream body;
        body << x.alphabet_size() << '\t' << x.str() << '\t' << trace.num_states() << '\t';
        for (std::size_t i = 0; i < trace.size(); ++i) body << (i ? "," : "") << trace[i];
        std::string b = body.str();
        return b + '\t' + detail::crc_hex(b);
    }

    using Key = std::pair<int, std::string>;

    static std::pair<Key, StateSequence> parse_line(const std::string& line)
    {
        auto tab = line.rfind('\t');
        if (tab == std::string::npos) throw CorruptRecord("missing checksum field");
        std::string body = line.substr(0, tab);
        if (detail::crc_hex(body) != line.substr(tab + 1)) throw CorruptRecord("checksum mismatch");
        std::istringstream in(body);
        int alphabet = 0;
        std::string word, trace_text;
        std::size_t value = 0;
        if (!(in >> alphabet >> word >> value >> trace_text)) throw CorruptRecord("malformed record");
        try {
            std::vector<State> states;
            std::istringstream ts(trace_text);
            std::string tok;
            while (std::getline(ts, tok, ',')) states.push_back(static_cast<State>(std::stoul(tok)));
            StateSequence seq(std::move(states));
            Word x = Word::parse(word, alphabet);
            if (seq.size() != x.size() + 1 || seq.num_states() != value) throw CorruptRecord("inconsistent record");
            return {{alphabet, word}, std::move(seq)};
        } catch (const CorruptRecord&) {
            throw;
        } catch (const std::exception& e) {
            throw CorruptRecord(e.what());
        }
    }

private:
    std::filesystem::path path_;
    std::map<Key, StateSequence> records_;
    std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Exhaustive surveys

enum class SurveyMode { Exact, Bound };

inline std::string survey_mode_name(SurveyMode m) { return m == SurveyMode::Exact ? "exact" : "bound"; }

inline SurveyMode parse_survey_mode(const std::string& s)
{
    if (s == "exact") return SurveyMode::Exact;
    if (s == "bound") return SurveyMode::Bound;
    throw ParseError("unknown survey mode \"" + s + "\" (expected exact or bound)");
}

struct SurveyTable {
    std::size_t n = 0;
    int alphabet_size = 2;
    SurveyMode provenance = SurveyMode::Exact;
    std::map<std::size_t, std::uint64_t> histogram; // complexity (or lower bound) -> number of words
    std::uint64_t indeterminate = 0;
    std::uint64_t solver_calls = 0;
    std::uint64_t cache_hits = 0;

    std::uint64_t total() const
    {
        std::uint64_t t = indeterminate;
        for (auto [v, c] : histogram) t += c;
        return t;
    }
};

struct SurveyOptions {
    std::size_t exact_cap = 12;
    std::uint64_t bound_word_cap = std::uint64_t{1} << 22;
    unsigned threads = 1;
    ResultCache* cache = nullptr;
    SearchOptions search;
    BoundMode bound_mode = BoundMode::DistinctLengths;
};

/// Histogram of A_N (exact mode) or of the leaf power lower bound (bound
/// mode) over all words of length n.
inline SurveyTable survey(std::size_t n, int alphabet_size, SurveyMode mode, const SurveyOptions& opts = {})
{
    if (n == 0) throw std::invalid_argument("survey: n must be positive");
    if (mode == SurveyMode::Exact && n > opts.exact_cap)
        throw CapExceeded("exact survey limited to n <= " + std::to_string(opts.exact_cap));
    double count = std::pow(static_cast<double>(alphabet_size), static_cast<double>(n));
    if (count > static_cast<double>(opts.bound_word_cap))
        throw CapExceeded("survey would enumerate " + std::to_string(static_cast<std::uint64_t>(count)) + " words");

    SurveyTable table;
    table.n = n;
    table.alphabet_size = alphabet_size;
    table.provenance = mode;
    auto words = all_words(n, alphabet_size);

    if (mode == SurveyMode::Bound) {
        std::vector<std::size_t> values(words.size());
        detail::parallel_for(words.size(), opts.threads,
                             [&](std::size_t i) { values[i] = leaf_power_lower_bound(words[i], opts.bound_mode).q_min; });
        for (auto v : values) ++table.histogram[v];
        return table;
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (opts.cache && opts.cache->contains(words[i])) {
            ++table.cache_hits;
            ++table.histogram[opts.cache->get(words[i])->value];
        } else {
            pending.push_back(i);
        }
    }
    std::vector<std::optional<ExactOutcome>> outcomes(pending.size());
    detail::parallel_for(pending.size(), opts.threads,
                         [&](std::size_t k) { outcomes[k] = an_exact(words[pending[k]], false, opts.search); });
    table.solver_calls = pending.size();
    for (std::size_t k = 0; k < pending.size(); ++k) {
        if (auto* r = std::get_if<ComplexityResult>(&*outcomes[k])) {
            ++table.histogram[r->value];
            if (opts.cache) opts.cache->put(words[pending[k]], *r);
        } else {
            ++table.indeterminate;
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Monte Carlo check of the incompressibility argument

/// floor(d * log2 n). Exact for powers of two; otherwise the floating value is
/// nudged up by a few ulps so that products landing just below an integer
/// through rounding still floor to it.
inline std::size_t run_threshold(std::size_t n, double d)
{
    if (n <= 1) return 0;
    double v;
    if (std::has_single_bit(n))
        v = d * static_cast<double>(std::bit_width(n) - 1);
    else
        v = d * std::log2(static_cast<double>(n));
    v += 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, v);
    return static_cast<std::size_t>(std::floor(v));
}

/// n(n+1)/2 * n^(-d), the union bound on some run reaching d log2 n.
inline double union_bound_value(std::size_t n, double d)
{
    double nn = static_cast<double>(n);
    return nn * (nn + 1) / 2 * std::pow(nn, -d);
}

/// (n+1)/2 - (d log2 n)^2 / 2.
inline double incompressibility_threshold(std::size_t n, double d)
{
    double l = d * std::log2(static_cast<double>(n));
    return (static_cast<double>(n) + 1) / 2 - l * l / 2;
}

struct McReport {
    std::size_t n = 0;
    std::uint64_t trials = 0;
    double d = 3;
    std::uint64_t seed = 0;
    std::size_t run_threshold = 0;
    std::uint64_t runs_bounded = 0; // words whose longest run is below run_threshold
    double frac_run_bounded = 0;
    double union_bound_value = 0;
    double bound_threshold = 0;
    std::uint64_t bound_met = 0; // words whose leaf power bound reaches bound_threshold
    double frac_bound_met = 0;

    friend bool operator==(const McReport&, const McReport&) = default;
};

/// Uniform random binary word from raw generator output, low bits first.
inline Word random_word(std::size_t n, std::mt19937_64& rng)
{
    std::vector<Symbol> s(n);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) bits = rng();
        s[i] = static_cast<Symbol>(bits & 1);
        bits >>= 1;
    }
    return Word(std::move(s), 2);
}

/// Per-word run and bound statistics over a given list of words of length n.
inline McReport run_statistics(std::span<const Word> words, std::size_t n, double d, unsigned threads = 1)
{
    McReport r;
    r.n = n;
    r.trials = words.size();
    r.d = d;
    r.run_threshold = run_threshold(n, d);
    r.union_bound_value = union_bound_value(n, d);
    r.bound_threshold = incompressibility_threshold(n, d);
    for (const Word& x : words)
        if (x.size() != n) throw std::invalid_argument("run_statistics: word of wrong length");
    std::vector<char> run_ok(words.size()), bound_ok(words.size());
    detail::parallel_for(words.size(), threads, [&](std::size_t i) {
        const Word& x = words[i];
        auto runs = longest_lookback_runs(x);
        std::size_t longest = *std::max_element(runs.begin(), runs.end());
        run_ok[i] = longest < r.run_threshold;
        std::size_t q_min = n > 64 ? q_min_from(n, detail::save_unique_overapprox(runs))
                                   : leaf_power_lower_bound(x, BoundMode::DistinctLengths).q_min;
        bound_ok[i] = static_cast<double>(q_min) >= r.bound_threshold;
    });
    r.runs_bounded = static_cast<std::uint64_t>(std::count(run_ok.begin(), run_ok.end(), 1));
    r.bound_met = static_cast<std::uint64_t>(std::count(bound_ok.begin(), bound_ok.end(), 1));
    if (r.trials > 0) {
        r.frac_run_bounded = static_cast<double>(r.runs_bounded) / static_cast<double>(r.trials);
        r.frac_bound_met = static_cast<double>(r.bound_met) / static_cast<double>(r.trials);
    }
    return r;
}

/// Samples `trials` uniform binary words of length n from mt19937_64(seed).
inline McReport monte_carlo(std::size_t n, std::uint64_t trials, double d, std::uint64_t seed, unsigned threads = 1)
{
    if (n == 0) throw std::invalid_argument("monte_carlo: n must be positive");
    if (trials == 0) throw std::invalid_argument("monte_carlo: trials must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Word> words;
    words.reserve(trials);
    for (std::uint64_t i = 0; i < trials; ++i) words.push_back(random_word(n, rng));
    McReport r = run_statistics(words, n, d, threads);
    r.seed = seed;
    return r;
}

// ---------------------------------------------------------------------------
// Text and CSV renderings

inline std::string to_text(const SurveyTable& t)
{
    std::ostringstream os;
    os << "survey n=" << t.n << " alphabet=" << t.alphabet_size << " provenance="
       << (t.provenance == SurveyMode::Exact ? "exact" : "lower-bound-only") << '\n';
    for (auto [v, c] : t.histogram) os << "  " << v << ": " << c << '\n';
    if (t.indeterminate) os << "  indeterminate: " << t.indeterminate << '\n';
    os << "total " << t.total() << " solver_calls " << t.solver_calls << " cache_hits " << t.cache_hits << '\n';
    return os.str();
}

/// Columns: n,alphabet,provenance,value,count (one row per histogram bucket,
/// ascending value).
inline std::string to_csv(const SurveyTable& t)
{
    std::ostringstream os;
    os << "n,alphabet,provenance,value,count\n";
    for (auto [v, c] : t.histogram)
        os << t.n << ',' << t.alphabet_size << ',' << survey_mode_name(t.provenance) << ',' << v << ',' << c << '\n';
    return os.str();
}

inline std::string to_text(const McReport& r)
{
    std::ostringstream os;
    os << std::setprecision(10);
    os << "monte carlo n=" << r.n << " trials=" << r.trials << " d=" << r.d << " seed=" << r.seed << '\n'
       << "  run threshold floor(d log2 n) = " << r.run_threshold << '\n'
       << "  words with all runs below threshold: " << r.runs_bounded << " (" << r.frac_run_bounded << ")\n"
       << "  union bound n(n+1)/2 n^-d = " << r.union_bound_value << '\n'
       << "  bound threshold (n+1)/2 - (d log2 n)^2/2 = " << r.bound_threshold << '\n'
       << "  words whose leaf power bound meets it: " << r.bound_met << " (" << r.frac_bound_met << ")\n";
    return os.str();
}

/// Columns: n,trials,d,seed,run_threshold,runs_bounded,frac_run_bounded,
/// union_bound_value,bound_threshold,bound_met,frac_bound_met
inline std::string to_csv(const McReport& r)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "n,trials,d,seed,run_threshold,runs_bounded,frac_run_bounded,union_bound_value,bound_threshold,bound_met,"
          "frac_bound_met\n";
    os << r.n << ',' << r.trials << ',' << r.d << ',' << r.seed << ',' << r.run_threshold << ',' << r.runs_bounded
       << ',' << r.frac_run_bounded << ',' << r.union_bound_value << ',' << r.bound_threshold << ',' << r.bound_met
       << ',' << r.frac_bound_met << '\n';
    return os.str();
}

} // namespace autocx

#endif // AUTOCX_LAB_HPP
