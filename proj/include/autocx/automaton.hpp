#ifndef AUTOCX_AUTOMATON_HPP
#define AUTOCX_AUTOMATON_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "autocx/errors.hpp"
#include "autocx/word.hpp"

namespace autocx {

using State = std::uint32_t;
using BigCount = boost::multiprecision::cpp_int;

/// State names: hexadecimal, upper case.
inline std::string state_name(State s)
{
    std::ostringstream os;
    os << std::uppercase << std::hex << s;
    return os.str();
}

struct Edge {
    State source = 0;
    Symbol symbol = 0;
    State target = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// NFA with a single start and a single final state, and at most one symbol
/// per ordered state pair. Immutable after construction.
class Nfa {
public:
    Nfa(std::size_t num_states, State start, State final_state, std::vector<Edge> edges)
        : num_states_(num_states), start_(start), final_(final_state), edges_(std::move(edges))
    {
        if (num_states_ == 0) throw std::invalid_argument("an NFA needs at least one state");
        if (start_ >= num_states_ || final_ >= num_states_)
            throw std::invalid_argument("start or final state out of range");
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.source >= num_states_ || e.target >= num_states_)
                throw std::invalid_argument("edge endpoint out of range");
            if (i > 0 && edges_[i - 1].source == e.source && edges_[i - 1].target == e.target)
                throw LabelConflict("state pair (" + state_name(e.source) + "," + state_name(e.target)
                                    + ") carries two symbols");
        }
    }

    std::size_t num_states() const noexcept { return num_states_; }
    State start() const noexcept { return start_; }
    State final_state() const noexcept { return final_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::optional<Symbol> label(State s, State t) const
    {
        for (const Edge& e : edges_)
            if (e.source == s && e.target == t) return e.symbol;
        return std::nullopt;
    }

    Nfa with_edge(Edge e) const
    {
        auto edges = edges_;
        edges.push_back(e);
        return Nfa(num_states_, start_, final_, std::move(edges));
    }

    Nfa without_edge(State s, State t) const
    {
        auto edges = edges_;
        std::erase_if(edges, [&](const Edge& e) { return e.source == s && e.target == t; });
        return Nfa(num_states_, start_, final_, std::move(edges));
    }

    friend bool operator==(const Nfa&, const Nfa&) = default;

private:
    std::size_t num_states_;
    State start_;
    State final_;
    std::vector<Edge> edges_;
};

/// Number of length-n walks start -> final in the underlying digraph.
inline BigCount count_accepting_paths(const Nfa& m, std::size_t n)
{
    std::vector<BigCount> cur(m.num_states()), next(m.num_states());
    cur[m.start()] = 1;
    for (std::size_t step = 0; step < n; ++step) {
        for (auto& v : next) v = 0;
        for (const Edge& e : m.edges())
            if (!cur[e.source].is_zero()) next[e.target] += cur[e.source];
        std::swap(cur, next);
    }
    return cur[m.final_state()];
}

inline bool accepts(const Nfa& m, const Word& x)
{
    std::vector<char> cur(m.num_states(), 0), next(m.num_states(), 0);
    cur[m.start()] = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::fill(next.begin(), next.end(), 0);
        for (const Edge& e : m.edges())
            if (cur[e.source] && e.symbol == x[i]) next[e.target] = 1;
        std::swap(cur, next);
    }
    return cur[m.final_state()] != 0;
}

inline bool accepts_uniquely(const Nfa& m, const Word& x)
{
    return accepts(m, x) && count_accepting_paths(m, x.size()) == 1;
}

/// A state sequence in canonical form: it starts at 0 and each newly seen
/// state is one more than the largest id seen so far.
class StateSequence {
public:
    StateSequence() = default;

    explicit StateSequence(std::vector<State> states) : states_(std::move(states))
    {
        State next = 0;
        for (State s : states_) {
            if (s > next) throw std::invalid_argument("state sequence is not in canonical form");
            if (s == next) ++next;
        }
    }

    std::size_t size() const noexcept { return states_.size(); }
    bool empty() const noexcept { return states_.empty(); }
    State operator[](std::size_t i) const { return states_[i]; }
    std::span<const State> states() const noexcept { return states_; }
    auto begin() const { return states_.begin(); }
    auto end() const { return states_.end(); }

    std::size_t num_states() const
    {
        return states_.empty() ? 0 : static_cast<std::size_t>(*std::max_element(states_.begin(), states_.end())) + 1;
    }

    std::string str() const
    {
        std::string out;
        bool wide = num_states() > 16;
        for (std::size_t i = 0; i < states_.size(); ++i) {
            if (wide && i > 0) out += ',';
            out += state_name(states_[i]);
        }
        return out;
    }

    friend bool operator==(const StateSequence&, const StateSequence&) = default;
    friend auto operator<=>(const StateSequence&, const StateSequence&) = default;

private:
    std::vector<State> states_;
};

/// Renames states in order of first appearance.
inline StateSequence canonicalize(std::span<const State> raw)
{
    std::vector<std::pair<State, State>> seen;
    std::vector<State> out;
    out.reserve(raw.size());
    for (State s : raw) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == s; });
        if (it == seen.end()) {
            seen.emplace_back(s, static_cast<State>(seen.size()));
            out.push_back(seen.back().second);
        } else {
            out.push_back(it->second);
        }
    }
    return StateSequence(std::move(out));
}

/// The unique accepting state sequence of x in m, canonicalised.
inline StateSequence trace(const Nfa& m, const Word& x)
{
    if (!accepts_uniquely(m, x)) throw NotUniquelyAccepting("automaton does not accept \"" + x.str() + "\" uniquely");
    const std::size_t n = x.size();
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(m.num_states(), 0));
    reach[0][m.start()] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (const Edge& e : m.edges())
            if (reach[i][e.source] && e.symbol == x[i]) reach[i + 1][e.target] = 1;
    std::vector<State> raw(n + 1);
    raw[n] = m.final_state();
    for (std::size_t i = n; i-- > 0;) {
        for (const Edge& e : m.edges()) {
            if (e.target == raw[i + 1] && e.symbol == x[i] && reach[i][e.source]) {
                raw[i] = e.source;
                break;
            }
        }
    }
    return canonicalize(raw);
}

/// The automaton consisting of exactly the states and edges of the walk `seq`
/// reading x.
inline Nfa nfa_from_sequence(const StateSequence& seq, const Word& x)
{
    if (seq.size() != x.size() + 1)
        throw std::invalid_argument("state sequence length must be |x|+1");
    std::vector<Edge> edges;
    edges.reserve(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        Edge e{seq[t], x[t], seq[t + 1]};
        for (const Edge& f : edges)
            if (f.source == e.source && f.target == e.target && f.symbol != e.symbol)
                throw LabelConflict("state pair (" + state_name(e.source) + "," + state_name(e.target)
                                    + ") needs symbols " + symbol_char(f.symbol) + " and " + symbol_char(e.symbol));
        edges.push_back(e);
    }
    return Nfa(seq.num_states(), seq[0], seq[x.size()], std::move(edges));
}

/// Line format: "states q", "start s", "final f", then one "edge s b t" per edge
/// in sorted order. All numbers decimal.
inline std::string to_text(const Nfa& m)
{
    std::ostringstream os;
    os << "states " << m.num_states() << '\n' << "start " << m.start() << '\n' << "final " << m.final_state() << '\n';
    for (const Edge& e : m.edges()) os << "edge " << e.source << ' ' << int{e.symbol} << ' ' << e.target << '\n';
    return os.str();
}

inline Nfa nfa_from_text(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::optional<std::size_t> states;
    std::optional<State> start, final_state;
    std::vector<Edge> edges;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        auto fail = [&] { throw ParseError("bad automaton line " + std::to_string(lineno) + ": " + line); };
        if (key == "states") {
            std::size_t q;
            if (!(ls >> q)) fail();
            states = q;
        } else if (key == "start") {
            State s;
            if (!(ls >> s)) fail();
            start = s;
        } else if (key == "final") {
            State s;
            if (!(ls >> s)) fail();
            final_state = s;
        } else if (key == "edge") {
            State s, t;
            int b;
            if (!(ls >> s >> b >> t) || b < 0 || b >= max_alphabet_size) fail();
            edges.push_back({s, static_cast<Symbol>(b), t});
        } else {
            fail();
        }
        std::string rest;
        if (ls >> rest) fail();
    }
    if (!states || !start || !final_state) throw ParseError("automaton text lacks states/start/final line");
    try {
        return Nfa(*states, *start, *final_state, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid automaton: ") + e.what());
    }
}

/// Graphviz rendering: circles, double circle for the final state, an arrow
/// from an invisible node into the start state.
inline std::string to_dot(const Nfa& m, const std::string& name = "nfa")
{
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point, style=invis];\n";
    for (State s = 0; s < m.num_states(); ++s)
        os << "  q" << state_name(s) << " [shape=" << (s == m.final_state() ? "doublecircle" : "circle")
           << ", label=\"q" << state_name(s) << "\"];\n";
    os << "  __start -> q" << state_name(m.start()) << ";\n";
    for (const Edge& e : m.edges())
        os << "  q" << state_name(e.source) << " -> q" << state_name(e.target) << " [label=\"" << symbol_char(e.symbol)
           << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace autocx

#endif // AUTOCX_AUTOMATON_HPP
