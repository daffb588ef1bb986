#ifndef AUTOCX_CYCLETREE_HPP
#define AUTOCX_CYCLETREE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "autocx/automaton.hpp"
#include "autocx/errors.hpp"

namespace autocx {

/// A node address in the tree of cycles, e.g. <0,0,1>.
using Label = std::vector<std::uint32_t>;

/// The distinct states s_1..s_{k-1} of a directed cycle, rotated so that the
/// first-visited (smallest canonical) state comes first.
using Cycle = std::vector<State>;

inline std::string label_str(const Label& l)
{
    bool wide = std::any_of(l.begin(), l.end(), [](auto v) { return v > 9; });
    std::string out = "\xE2\x9F\xA8"; // U+27E8
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (wide && i > 0) out += ',';
        out += std::to_string(l[i]);
    }
    return out + "\xE2\x9F\xA9"; // U+27E9
}

inline std::string cycle_str(const Cycle& c)
{
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i > 0) out += ',';
        out += state_name(c[i]);
    }
    return out + ")";
}

/// Kleene-Brouwer order: t < s if t properly extends s, or t is smaller at the
/// first position where both are defined and differ.
inline bool kb_less(const Label& t, const Label& s)
{
    std::size_t n = 0;
    while (n < t.size() && n < s.size() && t[n] == s[n]) ++n;
    if (n < t.size() && n < s.size()) return t[n] < s[n];
    return n == s.size() && t.size() > s.size();
}

class CycleTree {
public:
    CycleTree() = default;

    explicit CycleTree(std::map<Label, Cycle> nodes) : nodes_(std::move(nodes))
    {
        for (const auto& [label, cycle] : nodes_)
            if (label.empty() || cycle.empty()) throw std::invalid_argument("cycle tree nodes need a label and a cycle");
        if (!is_left_closed()) throw std::invalid_argument("cycle tree label set is not left-closed");
    }

    const std::map<Label, Cycle>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    bool contains(const Label& l) const { return nodes_.count(l) > 0; }
    const Cycle& at(const Label& l) const { return nodes_.at(l); }

    /// Closed under dropping the last coordinate and under decrementing it,
    /// i.e. every node's parent and left siblings exist.
    bool is_left_closed() const
    {
        for (const auto& [label, cycle] : nodes_) {
            if (label.size() > 1 && !contains(Label(label.begin(), label.end() - 1))) return false;
            if (label.back() > 0) {
                Label left = label;
                --left.back();
                if (!contains(left)) return false;
            }
        }
        return true;
    }

    /// Two cycles share a state iff one label is a child of the other.
    bool adjacency_matches_labels() const
    {
        for (auto a = nodes_.begin(); a != nodes_.end(); ++a) {
            for (auto b = std::next(a); b != nodes_.end(); ++b) {
                bool share = std::any_of(a->second.begin(), a->second.end(), [&](State s) {
                    return std::find(b->second.begin(), b->second.end(), s) != b->second.end();
                });
                auto is_child = [](const Label& parent, const Label& child) {
                    return child.size() == parent.size() + 1 && std::equal(parent.begin(), parent.end(), child.begin());
                };
                bool related = is_child(a->first, b->first) || is_child(b->first, a->first);
                if (share != related) return false;
            }
        }
        return true;
    }

    friend bool operator==(const CycleTree&, const CycleTree&) = default;

private:
    std::map<Label, Cycle> nodes_;
};

enum class CycleMove {
    NewSibling, // a new rightmost top-level label
    NewParent,  // adopts a final segment of the top-level labels
};

struct CycleCompletion {
    std::size_t time = 0; // the walk closed the cycle when arriving at this time
    Cycle cycle;
    CycleMove move = CycleMove::NewSibling;
    Label label; // label received on completion
};

/// The maps f_0..f_n and the order l_1, l_2, ... in which cycles completed.
struct StageTrace {
    std::vector<CycleTree> stages;
    std::vector<CycleCompletion> completions;
    std::vector<Label> final_labels; // final_labels[i] is the label of completions[i] in f_n
};

namespace detail {

/// Walks of length `length` from `from` to `to` in the digraph of consecutive
/// pairs of `seq`, saturated at 2.
inline int walk_count_saturated(std::span<const State> seq, std::size_t num_states, State from, State to,
                                std::size_t length)
{
    std::vector<std::pair<State, State>> edges;
    for (std::size_t t = 1; t < seq.size(); ++t) edges.emplace_back(seq[t - 1], seq[t]);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<std::uint8_t> cur(num_states, 0), next(num_states, 0);
    cur[from] = 1;
    for (std::size_t step = 0; step < length; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (auto [s, t] : edges) next[t] = static_cast<std::uint8_t>(std::min(2, next[t] + cur[s]));
        std::swap(cur, next);
    }
    return cur[to];
}

struct ClosedCycle {
    std::size_t time;
    Cycle cycle;
};

/// Loop erasure of the walk: every time the walk returns to a state still on
/// the pending stack, the states above it form a directed cycle.
inline std::vector<ClosedCycle> closed_cycles(std::span<const State> seq, std::size_t num_states)
{
    std::vector<ClosedCycle> out;
    if (seq.empty()) return out;
    std::vector<long> pos(num_states, -1);
    std::vector<State> stack{seq[0]};
    pos[seq[0]] = 0;
    for (std::size_t t = 1; t < seq.size(); ++t) {
        State v = seq[t];
        if (pos[v] >= 0) {
            Cycle c(stack.begin() + pos[v], stack.end());
            for (std::size_t i = static_cast<std::size_t>(pos[v]) + 1; i < stack.size(); ++i) pos[stack[i]] = -1;
            stack.resize(static_cast<std::size_t>(pos[v]) + 1);
            std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
            out.push_back({t, std::move(c)});
        } else {
            pos[v] = static_cast<long>(stack.size());
            stack.push_back(v);
        }
    }
    return out;
}

inline bool cycle_has_edge(const Cycle& c, State a, State b)
{
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] == a && c[(i + 1) % c.size()] == b) return true;
    return false;
}

} // namespace detail

/// Whether a (partial) walk can still be the walk of a unique-path witness:
/// no later transition enters a completed cycle through an edge outside it,
/// and the digraph of the walk has exactly one walk of the same length
/// between its endpoints. Accepts arbitrary state ids.
inline bool validate_prefix(std::span<const State> raw)
{
    if (raw.size() <= 1) return true;
    StateSequence seq = canonicalize(raw);
    auto s = seq.states();
    const std::size_t q = seq.num_states();
    auto cycles = detail::closed_cycles(s, q);
    for (const auto& cc : cycles) {
        for (std::size_t t = cc.time + 1; t < s.size(); ++t) {
            State a = s[t - 1], b = s[t];
            if (std::find(cc.cycle.begin(), cc.cycle.end(), b) != cc.cycle.end() && !detail::cycle_has_edge(cc.cycle, a, b))
                return false;
        }
    }
    return detail::walk_count_saturated(s, q, s.front(), s.back(), s.size() - 1) == 1;
}

/// Reconstructs the tree of directed cycles of a witness walk stage by stage.
/// Throws InvalidWitnessSequence when the walk is not a valid witness walk or
/// a new cycle does not attach as a sibling or as a parent of a final segment
/// of the top-level cycles.
inline std::pair<CycleTree, StageTrace> build_cycle_tree(const StateSequence& seq)
{
    if (!validate_prefix(seq.states()))
        throw InvalidWitnessSequence("state sequence " + seq.str() + " is not a unique-path witness walk");
    const std::size_t q = seq.num_states();

    std::vector<Cycle> cycles;
    std::vector<Label> labels;
    std::vector<std::size_t> completion_index;
    StageTrace trace;

    auto snapshot = [&] {
        std::map<Label, Cycle> m;
        for (std::size_t i = 0; i < cycles.size(); ++i) m.emplace(labels[i], cycles[i]);
        return CycleTree(std::move(m));
    };

    auto closed = detail::closed_cycles(seq.states(), q);
    std::size_t next_closed = 0;
    trace.stages.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (next_closed < closed.size() && closed[next_closed].time == t) {
            Cycle c = closed[next_closed++].cycle;
            if (std::find(cycles.begin(), cycles.end(), c) == cycles.end()) {
                std::size_t top = 0;
                for (const Label& l : labels) top += l.size() == 1;
                std::vector<std::uint32_t> adjacent;
                for (std::size_t i = 0; i < cycles.size(); ++i) {
                    bool share = std::any_of(c.begin(), c.end(), [&](State s) {
                        return std::find(cycles[i].begin(), cycles[i].end(), s) != cycles[i].end();
                    });
                    if (!share) continue;
                    if (labels[i].size() != 1)
                        throw InvalidWitnessSequence("cycle " + cycle_str(c) + " touches nested cycle "
                                                     + label_str(labels[i]));
                    adjacent.push_back(labels[i][0]);
                }
                std::sort(adjacent.begin(), adjacent.end());
                CycleCompletion done;
                done.time = t;
                done.cycle = c;
                if (adjacent.empty()) {
                    done.move = CycleMove::NewSibling;
                    done.label = {static_cast<std::uint32_t>(top)};
                } else {
                    std::uint32_t first = adjacent.front();
                    for (std::size_t j = 0; j < adjacent.size(); ++j)
                        if (adjacent[j] != first + j || adjacent.back() + 1 != top)
                            throw InvalidWitnessSequence("cycle " + cycle_str(c)
                                                         + " is adjacent to a non-final segment of top-level cycles");
                    for (Label& l : labels) {
                        if (l[0] < first) continue;
                        Label moved{first, l[0] - first};
                        moved.insert(moved.end(), l.begin() + 1, l.end());
                        l = std::move(moved);
                    }
                    done.move = CycleMove::NewParent;
                    done.label = {first};
                }
                cycles.push_back(c);
                labels.push_back(done.label);
                trace.completions.push_back(std::move(done));
            }
        }
        trace.stages.push_back(snapshot());
    }
    trace.final_labels = labels;
    CycleTree tree = trace.stages.empty() ? CycleTree{} : trace.stages.back();
    return {std::move(tree), std::move(trace)};
}

/// Labels with no child.
inline std::set<Label> leaves(const CycleTree& tree)
{
    std::set<Label> out;
    for (const auto& [label, cycle] : tree.nodes()) {
        Label child = label;
        child.push_back(0);
        if (!tree.contains(child)) out.insert(label);
    }
    return out;
}

/// Every state that lies on no leaf cycle occurs at most twice in the walk.
inline bool verify_internal_visits(const StateSequence& seq, const CycleTree& tree)
{
    std::set<State> on_leaf;
    for (const Label& l : leaves(tree))
        for (State s : tree.at(l)) on_leaf.insert(s);
    std::map<State, std::size_t> visits;
    for (State s : seq) ++visits[s];
    for (auto [s, count] : visits)
        if (!on_leaf.count(s) && count > 2) return false;
    return true;
}

/// Final labels in completion order are strictly increasing in the
/// Kleene-Brouwer order.
inline bool completion_is_kb_ordered(const StageTrace& trace)
{
    for (std::size_t i = 1; i < trace.final_labels.size(); ++i)
        if (!kb_less(trace.final_labels[i - 1], trace.final_labels[i])) return false;
    return true;
}

/// One line per node in pre-order, indented two spaces per level.
inline std::string to_text(const CycleTree& tree)
{
    std::ostringstream os;
    for (const auto& [label, cycle] : tree.nodes())
        os << std::string(2 * (label.size() - 1), ' ') << label_str(label) << " " << cycle_str(cycle) << '\n';
    return os.str();
}

inline std::string to_dot(const CycleTree& tree, const std::string& name = "cycletree")
{
    std::ostringstream os;
    auto id = [](const Label& l) {
        std::string s = "n";
        for (auto v : l) s += "_" + std::to_string(v);
        return s;
    };
    os << "digraph " << name << " {\n  node [shape=box];\n";
    for (const auto& [label, cycle] : tree.nodes())
        os << "  " << id(label) << " [label=\"" << label_str(label) << "\\n" << cycle_str(cycle) << "\"];\n";
    for (const auto& [label, cycle] : tree.nodes())
        if (label.size() > 1) os << "  " << id(Label(label.begin(), label.end() - 1)) << " -> " << id(label) << ";\n";
    os << "}\n";
    return os.str();
}

/// Time/state table with f_t printed whenever it changes.
inline std::string to_text(const StateSequence& seq, const StageTrace& trace)
{
    std::ostringstream os;
    os << "time state f_t\n";
    for (std::size_t t = 0; t < seq.size(); ++t) {
        os << t << ' ' << state_name(seq[t]) << ' ';
        const CycleTree& f = trace.stages[t];
        if (t > 0 && f == trace.stages[t - 1]) {
            os << "unchanged\n";
            continue;
        }
        if (f.empty()) {
            os << "empty\n";
            continue;
        }
        bool first = true;
        for (const auto& [label, cycle] : f.nodes()) {
            os << (first ? "" : " ") << label_str(label) << "=" << cycle_str(cycle);
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace autocx

#endif // AUTOCX_CYCLETREE_HPP
