#ifndef AUTOCX_BOUNDS_HPP
#define AUTOCX_BOUNDS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "autocx/errors.hpp"
#include "autocx/word.hpp"

namespace autocx {

enum class BoundMode {
    DistinctLengths, // all base lengths distinct
    FullUniqueness,  // sum of beta_i |x_i| has a unique representation
};

inline std::string mode_name(BoundMode mode) { return mode == BoundMode::DistinctLengths ? "distinct" : "unique"; }

inline BoundMode parse_mode(const std::string& s)
{
    if (s == "distinct") return BoundMode::DistinctLengths;
    if (s == "unique") return BoundMode::FullUniqueness;
    throw ParseError("unknown bound mode \"" + s + "\" (expected distinct or unique)");
}

/// sum_i a_i * gamma_i = T with gamma_i >= 0, where T = sum_i a_i * beta_i.
struct UniquenessInstance {
    std::vector<std::uint64_t> lengths;
    std::vector<std::uint64_t> multiplicities;

    std::uint64_t target() const
    {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < lengths.size(); ++i) t += lengths[i] * multiplicities[i];
        return t;
    }
};

/// True iff gamma = beta is the only solution. Counts representations of T
/// over the variables with a saturating coin-change table.
inline bool unique_solvability(const UniquenessInstance& inst)
{
    if (inst.lengths.size() != inst.multiplicities.size())
        throw std::invalid_argument("uniqueness instance: lengths and multiplicities differ in size");
    for (auto a : inst.lengths)
        if (a == 0) throw std::invalid_argument("uniqueness instance: lengths must be positive");
    const std::uint64_t target = inst.target();
    std::vector<std::uint8_t> ways(target + 1, 0);
    ways[0] = 1;
    for (auto a : inst.lengths)
        for (std::uint64_t v = a; v <= target; ++v)
            ways[v] = static_cast<std::uint8_t>(std::min(2, ways[v] + ways[v - a]));
    return ways[target] == 1;
}

/// sum (alpha_i - 1)|x_i|.
inline std::int64_t savings(std::span<const PowerOccurrence> occs)
{
    std::int64_t s = 0;
    for (const auto& o : occs) s += static_cast<std::int64_t>(o.length) - static_cast<std::int64_t>(o.period);
    return s;
}

/// m + sum (alpha_i - 2)|x_i|.
inline std::int64_t save_unique(std::span<const PowerOccurrence> occs)
{
    std::int64_t s = static_cast<std::int64_t>(occs.size());
    for (const auto& o : occs) s += static_cast<std::int64_t>(o.length) - 2 * static_cast<std::int64_t>(o.period);
    return s;
}

/// A strongly disjoint collection of at-least-square powers, sorted by start.
struct LeafPowerSet {
    std::vector<PowerOccurrence> occs;

    std::size_t count() const { return occs.size(); }
    std::int64_t savings() const { return autocx::savings(occs); }
    std::int64_t save_unique() const { return autocx::save_unique(occs); }

    UniquenessInstance uniqueness_instance() const
    {
        UniquenessInstance inst;
        for (const auto& o : occs) {
            inst.lengths.push_back(o.period);
            inst.multiplicities.push_back(o.length / o.period);
        }
        return inst;
    }

    friend bool operator==(const LeafPowerSet&, const LeafPowerSet&) = default;
};

struct BoundOptions {
    std::size_t exact_cap = 64;
};

struct SaveUniqueResult {
    std::int64_t value = 0;
    std::optional<LeafPowerSet> set;
    bool exact = true;
};

namespace detail {

/// Sum over base lengths p of the best single square-or-higher power of
/// period p, ignoring overlaps. Never below the true optimum.
inline std::int64_t save_unique_overapprox(std::span<const std::size_t> lookback_runs)
{
    std::int64_t total = 0;
    for (std::size_t p = 1; p < lookback_runs.size(); ++p)
        if (lookback_runs[p] >= p) total += 1 + static_cast<std::int64_t>(lookback_runs[p]) - static_cast<std::int64_t>(p);
    return total;
}

/// Exact maximisation of save_unique for short words.
///
/// Candidates are factors x[i .. i+L) with period p and L >= 2p. Distinct-length
/// mode is a memoised left-to-right selection keyed by (position, used periods);
/// full-uniqueness mode is a depth-first search bounded by that table, pruning
/// any partial set that already fails uniqueness (subsets of uniquely solvable
/// sets stay uniquely solvable).
class SaveUniqueSearch {
public:
    SaveUniqueSearch(const Word& x, BoundMode mode) : x_(x), n_(x.size()), mode_(mode)
    {
        if (n_ > 64) throw std::invalid_argument("exact save_unique search is limited to 64 symbols");
        auto s = x.symbols();
        max_len_.assign(n_, std::vector<std::size_t>(n_ / 2 + 1, 0));
        std::vector<std::size_t> streak(n_ + 1, 0);
        for (std::size_t p = 1; 2 * p <= n_; ++p) {
            streak[n_] = 0;
            for (std::size_t j = n_; j-- > p;) streak[j] = (s[j] == s[j - p]) ? streak[j + 1] + 1 : 0;
            for (std::size_t i = 0; i + 2 * p <= n_; ++i) {
                std::size_t len = p + streak[i + p];
                if (len >= 2 * p) max_len_[i][p] = len;
            }
        }
    }

    SaveUniqueResult run()
    {
        SaveUniqueResult out;
        if (mode_ == BoundMode::DistinctLengths) {
            const Best& b = solve(0, 0);
            out.value = b.value;
            if (b.m > 0) out.set = reconstruct();
            return out;
        }
        best_ = Candidate{};
        std::vector<PowerOccurrence> cur;
        dfs(0, 0, 0, cur);
        out.value = best_.value;
        if (!best_.occs.empty()) out.set = LeafPowerSet{best_.occs};
        return out;
    }

private:
    struct Best {
        std::int64_t value = 0;
        std::size_t m = 0;
        std::vector<std::size_t> starts; // 0-based
        std::size_t take_p = 0;          // 0 = skip this position
        std::size_t take_len = 0;
    };

    struct Candidate {
        std::int64_t value = 0;
        std::vector<PowerOccurrence> occs;
    };

    static std::uint64_t bit(std::size_t p) { return std::uint64_t{1} << (p - 1); }

    std::uint64_t relevant(std::size_t i) const
    {
        std::size_t room = (n_ - i) / 2;
        return room >= 64 ? ~std::uint64_t{0} : (bit(room + 1) - 1);
    }

    // value desc, then fewer occurrences, then lexicographically earliest starts
    static bool better(std::int64_t value, std::size_t m, std::size_t head, const std::vector<std::size_t>& tail,
                       const Best& than)
    {
        if (value != than.value) return value > than.value;
        if (m != than.m) return m < than.m;
        if (than.starts.empty()) return false;
        if (head != than.starts[0]) return head < than.starts[0];
        return std::lexicographical_compare(tail.begin(), tail.end(), than.starts.begin() + 1, than.starts.end());
    }

    const Best& solve(std::size_t i, std::uint64_t mask)
    {
        static const Best empty{};
        if (i >= n_) return empty;
        mask &= relevant(i);
        std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | mask;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Best best = solve(i + 1, mask);
        best.take_p = 0;
        for (std::size_t p = 1; 2 * p <= n_ - i; ++p) {
            std::size_t max_len = max_len_[i][p];
            if (max_len == 0 || (mask & bit(p))) continue;
            for (std::size_t len = 2 * p; len <= max_len; ++len) {
                const Best& sub = solve(i + len + 1, mask | bit(p));
                std::int64_t value = sub.value + 1 + static_cast<std::int64_t>(len) - 2 * static_cast<std::int64_t>(p);
                if (better(value, sub.m + 1, i, sub.starts, best)) {
                    std::vector<std::size_t> starts{i};
                    starts.insert(starts.end(), sub.starts.begin(), sub.starts.end());
                    best = Best{value, sub.m + 1, std::move(starts), p, len};
                }
            }
        }
        return memo_.emplace(key, std::move(best)).first->second;
    }

    LeafPowerSet reconstruct()
    {
        LeafPowerSet set;
        std::size_t i = 0;
        std::uint64_t mask = 0;
        while (i < n_) {
            const Best& b = solve(i, mask);
            if (b.m == 0) break;
            if (b.take_p == 0) {
                ++i;
                continue;
            }
            set.occs.push_back({i + 1, b.take_p, b.take_len});
            mask |= bit(b.take_p);
            i += b.take_len + 1;
        }
        return set;
    }

    bool improves(std::int64_t value, const std::vector<PowerOccurrence>& occs) const
    {
        if (value != best_.value) return value > best_.value;
        if (occs.size() != best_.occs.size()) return occs.size() < best_.occs.size();
        for (std::size_t k = 0; k < occs.size(); ++k)
            if (occs[k].start != best_.occs[k].start) return occs[k].start < best_.occs[k].start;
        return false;
    }

    void dfs(std::size_t i, std::uint64_t mask, std::int64_t value, std::vector<PowerOccurrence>& cur)
    {
        if (improves(value, cur)) best_ = Candidate{value, cur};
        for (std::size_t j = i; j < n_; ++j) {
            for (std::size_t p = 1; 2 * p <= n_ - j; ++p) {
                std::size_t max_len = max_len_[j][p];
                if (max_len == 0 || (mask & bit(p))) continue;
                for (std::size_t len = max_len; len >= 2 * p; --len) {
                    std::int64_t gain = 1 + static_cast<std::int64_t>(len) - 2 * static_cast<std::int64_t>(p);
                    std::int64_t ub = value + gain + solve(j + len + 1, mask | bit(p)).value;
                    if (ub < best_.value || (ub == best_.value && cur.size() + 1 > best_.occs.size())) continue;
                    cur.push_back({j + 1, p, len});
                    if (unique_solvability(LeafPowerSet{cur}.uniqueness_instance()))
                        dfs(j + len + 1, mask | bit(p), value + gain, cur);
                    cur.pop_back();
                }
            }
        }
    }

    const Word& x_;
    std::size_t n_;
    BoundMode mode_;
    std::vector<std::vector<std::size_t>> max_len_; // [start][period] -> longest factor, 0 if below a square
    std::unordered_map<std::uint64_t, Best> memo_;
    Candidate best_;
};

} // namespace detail

/// The largest save_unique over strongly disjoint sets of at-least-square
/// powers meeting the mode's condition. Exact up to `exact_cap` symbols;
/// beyond that an over-approximation with no set attached.
inline SaveUniqueResult best_save_unique(const Word& x, BoundMode mode, const BoundOptions& opts = {})
{
    if (x.size() > opts.exact_cap || x.size() > 64) {
        auto runs = longest_lookback_runs(x);
        return SaveUniqueResult{detail::save_unique_overapprox(runs), std::nullopt, false};
    }
    return detail::SaveUniqueSearch(x, mode).run();
}

/// ceil((n + 1 - save_unique) / 2), at least 1.
inline std::size_t q_min_from(std::size_t n, std::int64_t save_unique_value)
{
    std::int64_t rhs = static_cast<std::int64_t>(n) + 1 - save_unique_value;
    return rhs <= 2 ? 1 : static_cast<std::size_t>((rhs + 1) / 2);
}

struct BoundCertificate {
    Word word;
    BoundMode mode = BoundMode::DistinctLengths;
    std::optional<LeafPowerSet> set;
    std::int64_t save_unique = 0;
    std::size_t q_min = 1;
    bool exact = true;

    friend bool operator==(const BoundCertificate&, const BoundCertificate&) = default;
};

/// A_N(x) >= q_min, from the leaf power inequality 2q >= n + 1 - save_unique.
inline BoundCertificate leaf_power_lower_bound(const Word& x, BoundMode mode, const BoundOptions& opts = {})
{
    auto r = best_save_unique(x, mode, opts);
    return BoundCertificate{x, mode, std::move(r.set), r.value, q_min_from(x.size(), r.value), r.exact};
}

/// Re-checks a certificate against the word: the set is a valid strongly
/// disjoint family of at-least-square powers meeting the mode's condition,
/// the arithmetic is right, and the claimed save_unique is not below a fresh
/// computation (a smaller value would overstate the bound).
inline bool verify_certificate(const Word& x, const BoundCertificate& cert, const BoundOptions& opts = {})
{
    if (!(cert.word == x)) return false;
    const std::size_t n = x.size();
    std::int64_t claimed = 0;
    if (cert.set) {
        if (!cert.exact || cert.set->occs.empty()) return false;
        std::vector<std::size_t> periods;
        for (const auto& o : cert.set->occs) {
            if (o.period == 0 || o.start == 0 || o.length < 2 * o.period || o.last() > n) return false;
            for (std::size_t j = o.period; j < o.length; ++j)
                if (x[o.start - 1 + j] != x[o.start - 1 + j - o.period]) return false;
            periods.push_back(o.period);
        }
        if (!strongly_disjoint(cert.set->occs)) return false;
        std::sort(periods.begin(), periods.end());
        if (std::adjacent_find(periods.begin(), periods.end()) != periods.end()) return false;
        if (cert.mode == BoundMode::FullUniqueness && !unique_solvability(cert.set->uniqueness_instance())) return false;
        claimed = cert.set->save_unique();
    } else if (cert.exact) {
        claimed = 0;
    } else {
        claimed = cert.save_unique;
    }
    if (claimed != cert.save_unique) return false;
    if (cert.q_min != q_min_from(n, cert.save_unique)) return false;
    auto fresh = best_save_unique(x, cert.mode, opts);
    return cert.exact == fresh.exact && cert.save_unique >= fresh.value;
}

inline std::string exponent_str(const PowerOccurrence& o)
{
    Rational a = o.exponent();
    return a.denominator() == 1 ? std::to_string(a.numerator())
                                : std::to_string(a.numerator()) + "/" + std::to_string(a.denominator());
}

/// Line-oriented record:
///   word <symbols>
///   alphabet <k>
///   mode distinct|unique
///   exact 0|1
///   power <start> <period> <alpha>     (one per occurrence)
///   save_unique <s>
///   q_min <q>
inline std::string to_record(const BoundCertificate& c)
{
    std::ostringstream os;
    os << "word " << c.word.str() << '\n'
       << "alphabet " << c.word.alphabet_size() << '\n'
       << "mode " << mode_name(c.mode) << '\n'
       << "exact " << (c.exact ? 1 : 0) << '\n';
    if (c.set)
        for (const auto& o : c.set->occs) os << "power " << o.start << ' ' << o.period << ' ' << exponent_str(o) << '\n';
    os << "save_unique " << c.save_unique << '\n' << "q_min " << c.q_min << '\n';
    return os.str();
}

inline BoundCertificate certificate_from_record(const std::string& text)
{
    std::istringstream in(text);
    std::string line, word_text;
    int alphabet = 0;
    BoundCertificate c;
    LeafPowerSet set;
    bool have_word = false, have_mode = false, have_save = false, have_q = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&] { throw ParseError("bad certificate line: " + line); };
        if (key == "word") {
            ls >> word_text;
            have_word = true;
        } else if (key == "alphabet") {
            if (!(ls >> alphabet)) fail();
        } else if (key == "mode") {
            std::string m;
            if (!(ls >> m)) fail();
            c.mode = parse_mode(m);
            have_mode = true;
        } else if (key == "exact") {
            int e;
            if (!(ls >> e)) fail();
            c.exact = e != 0;
        } else if (key == "power") {
            std::size_t start, period;
            std::string alpha;
            if (!(ls >> start >> period >> alpha) || period == 0) fail();
            std::int64_t num = 0, den = 1;
            auto slash = alpha.find('/');
            try {
                num = std::stoll(alpha.substr(0, slash));
                if (slash != std::string::npos) den = std::stoll(alpha.substr(slash + 1));
            } catch (const std::exception&) {
                fail();
            }
            if (den <= 0 || (num * static_cast<std::int64_t>(period)) % den != 0) fail();
            set.occs.push_back({start, period, static_cast<std::size_t>(num * static_cast<std::int64_t>(period) / den)});
        } else if (key == "save_unique") {
            if (!(ls >> c.save_unique)) fail();
            have_save = true;
        } else if (key == "q_min") {
            if (!(ls >> c.q_min)) fail();
            have_q = true;
        } else {
            fail();
        }
    }
    if (!have_word || !have_mode || !have_save || !have_q) throw ParseError("incomplete certificate record");
    c.word = Word::parse(word_text, alphabet);
    if (!set.occs.empty()) c.set = std::move(set);
    return c;
}

} // namespace autocx

#endif // AUTOCX_BOUNDS_HPP
