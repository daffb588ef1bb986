#ifndef AUTOCX_WORD_HPP
#define AUTOCX_WORD_HPP

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "autocx/errors.hpp"

namespace autocx {

using Symbol = std::uint8_t;
using Rational = boost::rational<std::int64_t>;

inline constexpr int max_alphabet_size = 36;

/// Symbol ids print as 0-9 then A-Z.
inline char symbol_char(Symbol s)
{
    return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('A' + (s - 10));
}

inline int symbol_from_char(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    return -1;
}

/// A finite word over the alphabet {0, ..., alphabet_size-1}.
///
/// Indexing through operator[] is 0-based. Runs and power occurrences use
/// 1-based positions, so position i of the word is `word[i - 1]`.
class Word {
public:
    Word() = default;

    Word(std::vector<Symbol> symbols, int alphabet_size = 2)
        : symbols_(std::move(symbols)), alphabet_size_(alphabet_size)
    {
        if (alphabet_size_ < 1 || alphabet_size_ > max_alphabet_size)
            throw std::invalid_argument("alphabet size out of range: " + std::to_string(alphabet_size_));
        for (Symbol s : symbols_)
            if (s >= alphabet_size_)
                throw std::invalid_argument("symbol " + std::to_string(int{s}) + " outside alphabet of size "
                                            + std::to_string(alphabet_size_));
    }

    /// Parses "00101" or exponent notation such as "0^5 1 0^5 1^6 01000".
    ///
    /// Atoms are whitespace separated; `^k` repeats the whole atom k times and
    /// an atom may be parenthesised, e.g. "(01)^3". With alphabet_size == 0 the
    /// alphabet is the smallest one containing every symbol, and at least binary.
    static Word parse(std::string_view text, int alphabet_size = 0)
    {
        std::vector<Symbol> out;
        int max_symbol = -1;
        std::size_t i = 0;
        auto skip_space = [&] {
            while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r'))
                ++i;
        };
        skip_space();
        while (i < text.size()) {
            bool paren = text[i] == '(';
            if (paren) ++i;
            std::vector<Symbol> atom;
            while (i < text.size()) {
                int s = symbol_from_char(text[i]);
                if (s < 0) break;
                atom.push_back(static_cast<Symbol>(s));
                max_symbol = std::max(max_symbol, s);
                ++i;
            }
            if (paren) {
                if (i >= text.size() || text[i] != ')')
                    throw ParseError("unbalanced parenthesis in word \"" + std::string(text) + "\"");
                ++i;
            }
            if (atom.empty())
                throw ParseError("unexpected character '" + std::string(1, text[i]) + "' in word \"" + std::string(text)
                                 + "\"");
            std::size_t repeat = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), repeat);
                if (ec != std::errc{})
                    throw ParseError("missing exponent after '^' in word \"" + std::string(text) + "\"");
                i = static_cast<std::size_t>(ptr - text.data());
            }
            for (std::size_t r = 0; r < repeat; ++r)
                out.insert(out.end(), atom.begin(), atom.end());
            if (i < text.size() && symbol_from_char(text[i]) < 0 && text[i] != ' ' && text[i] != '\t'
                && text[i] != '\n' && text[i] != '\r' && text[i] != '(')
                throw ParseError("unexpected character '" + std::string(1, text[i]) + "' in word \""
                                 + std::string(text) + "\"");
            skip_space();
        }
        if (alphabet_size == 0) alphabet_size = std::max(2, max_symbol + 1);
        if (max_symbol >= alphabet_size)
            throw ParseError("word \"" + std::string(text) + "\" uses symbols outside alphabet of size "
                             + std::to_string(alphabet_size));
        return Word(std::move(out), alphabet_size);
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    int alphabet_size() const noexcept { return alphabet_size_; }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }

    std::string str() const
    {
        std::string s;
        s.reserve(symbols_.size());
        for (Symbol c : symbols_) s.push_back(symbol_char(c));
        return s;
    }

    /// Maps every symbol s to alphabet_size-1-s.
    Word complement() const
    {
        std::vector<Symbol> out(symbols_);
        for (Symbol& c : out) c = static_cast<Symbol>(alphabet_size_ - 1 - c);
        return Word(std::move(out), alphabet_size_);
    }

    Word reversed() const { return Word(std::vector<Symbol>(symbols_.rbegin(), symbols_.rend()), alphabet_size_); }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<Symbol> symbols_;
    int alphabet_size_ = 2;
};

inline std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

/// All words of length n over the given alphabet, in lexicographic order.
inline std::vector<Word> all_words(std::size_t n, int alphabet_size = 2)
{
    std::vector<Word> out;
    std::vector<Symbol> cur(n, 0);
    while (true) {
        out.emplace_back(cur, alphabet_size);
        std::size_t i = n;
        while (i > 0 && cur[i - 1] + 1 == alphabet_size) cur[--i] = 0;
        if (i == 0) break;
        ++cur[i - 1];
    }
    return out;
}

/// Position m starts a run with lookback k of length t:
/// x_{m+1+u} = x_{m+1+u-k} for 0 <= u < t (1-based positions).
struct Run {
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t t = 0;

    friend auto operator<=>(const Run&, const Run&) = default;
};

/// A factor x[start .. start+length-1] (1-based) with period `period`,
/// i.e. the fractional power u^(length/period) with |u| = period.
struct PowerOccurrence {
    std::size_t start = 1;
    std::size_t period = 1;
    std::size_t length = 1;

    Rational exponent() const
    {
        return Rational(static_cast<std::int64_t>(length), static_cast<std::int64_t>(period));
    }
    std::size_t last() const { return start + length - 1; }

    friend auto operator<=>(const PowerOccurrence&, const PowerOccurrence&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const PowerOccurrence& o)
{
    return os << "(start=" << o.start << ", p=" << o.period << ", alpha=" << o.exponent() << ")";
}

/// For every lookback k in 1..n-1, the longest streak of positions j with
/// x_j = x_{j-k}. Entry 0 is unused and zero.
inline std::vector<std::size_t> longest_lookback_runs(const Word& x)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> best(n == 0 ? 1 : n, 0);
    const Symbol* s = x.symbols().data();
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t cur = 0, top = 0;
        for (std::size_t j = k; j < n; ++j) {
            // branch-free reset: matches are close to random on the hot path
            cur = (cur + 1) & (std::size_t{0} - static_cast<std::size_t>(s[j] == s[j - k]));
            top = top < cur ? cur : top;
        }
        best[k] = top;
    }
    return best;
}

/// Every right-maximal run (one per start m and lookback k) of length >= t_min,
/// ordered by (m, k).
inline std::vector<Run> find_runs(const Word& x, std::size_t t_min)
{
    if (t_min == 0) throw std::invalid_argument("find_runs: t_min must be positive");
    const std::size_t n = x.size();
    auto s = x.symbols();
    std::vector<Run> out;
    // streak[j]: number of consecutive matches at distance k starting at 1-based position j
    std::vector<std::size_t> streak(n + 2, 0);
    for (std::size_t k = 1; k < n; ++k) {
        streak[n + 1] = 0;
        for (std::size_t j = n; j > k; --j) streak[j] = (s[j - 1] == s[j - 1 - k]) ? streak[j + 1] + 1 : 0;
        for (std::size_t m = k; m + 1 <= n; ++m) {
            std::size_t t = streak[m + 1];
            if (t >= t_min) out.push_back({m, k, t});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t max_run_length(const Word& x)
{
    auto best = longest_lookback_runs(x);
    return *std::max_element(best.begin(), best.end());
}

/// For each (start, period) the occurrence with maximal exponent, kept when the
/// exponent is at least alpha_min. Ordered by (start, period).
inline std::vector<PowerOccurrence> find_powers(const Word& x, Rational alpha_min)
{
    if (alpha_min < 1) throw std::invalid_argument("find_powers: alpha_min must be at least 1");
    const std::size_t n = x.size();
    auto s = x.symbols();
    std::vector<PowerOccurrence> out;
    std::vector<std::size_t> streak(n + 1, 0);
    for (std::size_t p = 1; p <= n; ++p) {
        // streak[j] (0-based): matches s[i] == s[i-p] for i = j, j+1, ...
        streak[n] = 0;
        for (std::size_t j = n; j-- > p;) streak[j] = (s[j] == s[j - p]) ? streak[j + 1] + 1 : 0;
        for (std::size_t start = 0; start + p <= n; ++start) {
            std::size_t length = p + (start + p < n ? streak[start + p] : 0);
            if (Rational(static_cast<std::int64_t>(length), static_cast<std::int64_t>(p)) >= alpha_min)
                out.push_back({start + 1, p, length});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Occurrences pairwise separated by at least one symbol.
inline bool strongly_disjoint(std::span<const PowerOccurrence> occs)
{
    std::vector<PowerOccurrence> sorted(occs.begin(), occs.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].start <= sorted[i - 1].start + sorted[i - 1].length) return false;
    return true;
}

inline bool is_square_free(const Word& x)
{
    auto best = longest_lookback_runs(x);
    for (std::size_t k = 1; k < best.size(); ++k)
        if (best[k] >= k) return false;
    return true;
}

} // namespace autocx

#endif // AUTOCX_WORD_HPP
