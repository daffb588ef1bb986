#pragma once

#include <vector>

#include "autocx/automaton.hpp"
#include "autocx/word.hpp"

namespace fixture {

// x = 0^5 1 0^5 1^6 0 1 0^3 and the 11-state automaton drawn for it,
// states named as in the drawing (A = 10).
inline autocx::Word worked_word() { return autocx::Word::parse("0^5 1 0^5 1^6 01000"); }

inline autocx::Nfa worked_nfa()
{
    using autocx::Edge;
    std::vector<Edge> e{
        {0, 0, 1},  {1, 0, 2},  {2, 0, 3},  {3, 0, 4}, {4, 0, 5}, {5, 1, 6},  {6, 0, 7}, {7, 0, 8},
        {8, 0, 6},  {7, 0, 9},  {9, 1, 10}, {10, 1, 9}, {10, 1, 4}, {5, 1, 0},
    };
    return autocx::Nfa(11, 0, 3, e);
}

inline std::vector<autocx::State> worked_trace()
{
    return {0, 1, 2, 3, 4, 5, 6, 7, 8, 6, 7, 9, 10, 9, 10, 9, 10, 4, 5, 0, 1, 2, 3};
}

inline std::vector<autocx::State> nested_chain_trace()
{
    return {0, 1, 2, 3, 4, 5, 6, 7, 3, 4, 5, 6, 7, 3, 4, 5, 6, 7, 2, 0};
}

} // namespace fixture
