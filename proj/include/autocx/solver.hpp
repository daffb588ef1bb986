#ifndef AUTOCX_SOLVER_HPP
#define AUTOCX_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "autocx/automaton.hpp"
#include "autocx/bounds.hpp"
#include "autocx/cycletree.hpp"
#include "autocx/word.hpp"

namespace autocx {

struct SearchOptions {
    std::uint64_t node_budget = 100'000'000;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    bool aborted = false;
};

namespace detail {

/// Depth-first enumeration of canonical state sequences s_0..s_n for x.
///
/// Children are tried in increasing state order (existing states, then the
/// next fresh one), so the first sequence found is the lexicographically least.
/// A step is pruned when the pair already carries another symbol, or when the
/// digraph built so far has more than one walk of length t+1 from s_0 to the
/// new state: such a prefix can never extend to a unique accepting path. That
/// walk-count test subsumes the state-reentry restriction.
class WitnessSearch {
public:
    WitnessSearch(const Word& x, std::size_t max_states, bool exactly, std::uint64_t budget)
        : x_(x), n_(x.size()), q_(max_states), exactly_(exactly), budget_(budget),
          label_(max_states * max_states, -1), walks_((x.size() + 1) * max_states, 0)
    {
        if (q_ > 0) walks_[0] = 1;
    }

    std::optional<StateSequence> run()
    {
        if (q_ == 0 || (exactly_ && q_ > n_ + 1)) return std::nullopt;
        seq_.assign(1, 0);
        used_ = 1;
        if (dfs(0)) return StateSequence(seq_);
        return std::nullopt;
    }

    std::uint64_t nodes() const { return nodes_; }
    bool aborted() const { return aborted_; }

private:
    void recount()
    {
        for (std::size_t len = 1; len <= n_; ++len) {
            std::uint8_t* cur = &walks_[len * q_];
            const std::uint8_t* prev = &walks_[(len - 1) * q_];
            std::fill(cur, cur + q_, 0);
            for (auto [s, t] : edges_) cur[t] = static_cast<std::uint8_t>(std::min(2, cur[t] + prev[s]));
        }
    }

    bool dfs(std::size_t t)
    {
        if (t == n_) {
            if (exactly_ && used_ != q_) return false;
            Nfa m = nfa_from_sequence(StateSequence(seq_), x_);
            return count_accepting_paths(m, n_) == 1;
        }
        const State s = seq_[t];
        const auto b = static_cast<std::int16_t>(x_[t]);
        const std::size_t remaining = n_ - t - 1;
        const std::size_t top = std::min(used_, q_ - 1);
        for (std::size_t w = 0; w <= top; ++w) {
            if (++nodes_ > budget_) {
                aborted_ = true;
                return false;
            }
            const std::size_t fresh = (w == used_) ? 1 : 0;
            if (exactly_ && q_ - (used_ + fresh) > remaining) continue;
            std::int16_t& lab = label_[s * q_ + w];
            if (lab >= 0 && lab != b) continue;
            const bool added = lab < 0;
            std::vector<std::uint8_t> saved;
            if (added) {
                lab = b;
                edges_.emplace_back(s, static_cast<State>(w));
                saved = walks_;
                recount();
            }
            if (walks_[(t + 1) * q_ + w] == 1) {
                seq_.push_back(static_cast<State>(w));
                used_ += fresh;
                if (dfs(t + 1)) return true;
                used_ -= fresh;
                seq_.pop_back();
            }
            if (added) {
                lab = -1;
                edges_.pop_back();
                walks_ = std::move(saved);
            }
            if (aborted_) return false;
        }
        return false;
    }

    const Word& x_;
    std::size_t n_;
    std::size_t q_;
    bool exactly_;
    std::uint64_t budget_;
    std::vector<std::int16_t> label_; // q*q, -1 when the pair has no edge
    std::vector<std::uint8_t> walks_; // [length * q + state], walks from state 0, saturated at 2
    std::vector<std::pair<State, State>> edges_;
    std::vector<State> seq_;
    std::size_t used_ = 0;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

} // namespace detail

/// Some NFA with at most q states that accepts x along its only accepting path
/// of length |x|, or nothing. The search covers every automaton made of the
/// states and edges of one walk, which loses nothing: deleting off-path states
/// and edges keeps a witness a witness.
inline std::optional<Nfa> an_upper_search(const Word& x, std::size_t q, const SearchOptions& opts = {},
                                          SearchStats* stats = nullptr)
{
    if (q == 0) throw std::invalid_argument("an_upper_search: q must be positive");
    detail::WitnessSearch search(x, q, false, opts.node_budget);
    auto seq = search.run();
    if (stats) *stats = SearchStats{search.nodes(), search.aborted()};
    if (!seq) return std::nullopt;
    return nfa_from_sequence(*seq, x);
}

struct ComplexityResult {
    std::size_t value = 0;
    Nfa witness;
    StateSequence trace;
    CycleTree tree;
    StageTrace stages;
    BoundCertificate lower_certificate;
    std::uint64_t nodes = 0;
};

/// The search ran out of budget; A_N(x) lies in [lower, upper].
struct Indeterminate {
    std::size_t lower = 1;
    std::size_t upper = 1;
    std::uint64_t nodes = 0;
    BoundCertificate lower_certificate;
};

using ExactOutcome = std::variant<ComplexityResult, Indeterminate>;

/// Assembles a result around a witness walk.
inline ComplexityResult make_result(const Word& x, const StateSequence& trace, BoundCertificate lower,
                                    std::uint64_t nodes = 0)
{
    Nfa witness = nfa_from_sequence(trace, x);
    auto [tree, stages] = build_cycle_tree(trace);
    return ComplexityResult{trace.num_states(), std::move(witness), trace, std::move(tree), std::move(stages),
                            std::move(lower), nodes};
}

/// A_N(x): tries q = start, start+1, ... until a witness with exactly q states
/// exists. The start is 1 when `safe`, otherwise the distinct-lengths leaf
/// power bound.
inline ExactOutcome an_exact(const Word& x, bool safe = false, const SearchOptions& opts = {})
{
    if (x.empty()) throw std::invalid_argument("an_exact: the word must be nonempty");
    const std::size_t n = x.size();
    BoundCertificate lower = leaf_power_lower_bound(x, BoundMode::DistinctLengths);
    std::uint64_t spent = 0;
    for (std::size_t q = safe ? 1 : lower.q_min; q <= n + 1; ++q) {
        detail::WitnessSearch search(x, q, true, spent >= opts.node_budget ? 0 : opts.node_budget - spent);
        auto seq = search.run();
        spent += search.nodes();
        if (seq) return make_result(x, *seq, std::move(lower), spent);
        if (search.aborted()) return Indeterminate{q, std::max(q, n / 2 + 1), spent, std::move(lower)};
    }
    throw std::logic_error("an_exact: no witness up to n+1 states");
}

/// Re-checks everything about a result except minimality.
inline bool verify_result(const Word& x, const ComplexityResult& r)
{
    try {
        if (r.witness.num_states() != r.value) return false;
        if (!accepts_uniquely(r.witness, x)) return false;
        if (r.trace.size() != x.size() + 1 || r.trace.num_states() != r.value) return false;
        if (!(trace(r.witness, x) == r.trace)) return false;
        auto [tree, stages] = build_cycle_tree(r.trace);
        if (!(tree == r.tree)) return false;
        if (!tree.adjacency_matches_labels() || !verify_internal_visits(r.trace, tree)
            || !completion_is_kb_ordered(stages))
            return false;
        if (!verify_certificate(x, r.lower_certificate) || r.lower_certificate.q_min > r.value) return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace autocx

#endif // AUTOCX_SOLVER_HPP
