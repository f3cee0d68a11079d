#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brd/degrees.hpp"

namespace brd {

struct TrialOutcome {
  int trial = 0;
  bool skipped = false;
  int found = 0;
  int expected = 0;
  std::vector<std::string> missing;
};

struct ExperimentReport {
  std::string experiment;
  int depth = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialOutcome> outcomes;
  int successes = 0;
  std::string note;  // finite-analogue disclaimer and advice

  double success_rate() const {
    int done = 0;
    for (const auto& o : outcomes)
      if (!o.skipped) ++done;
    return done == 0 ? 0.0 : static_cast<double>(successes) / done;
  }
};

// Per trial, draw a random sub-selection D of the coding nodes (rejected
// until its represented structure contains an induced copy of the prefix
// pattern of size `pattern_cap`), then check that every known descriptor of
// A is realized by an antichain inside D.
ExperimentReport persistence_sample(const CodingTree& tree,
                                    const FinStructure& a, int trials,
                                    std::uint64_t seed, int pattern_cap = 3);

// Least antichain (in lexicographic coding-index order) whose length order
// equals its lex order and whose represented structure is omega-isomorphic
// to B.
std::optional<std::vector<NodeRef>> find_comb(const CodingTree& tree,
                                              const OrderedStructure& b);

using VertexColoring = std::vector<int>;  // color per coding index

struct OrderedDemoResult {
  bool found = false;
  std::vector<int> witness_vertices;  // the comb copy of B'
  int color = -1;
  std::string note;
};

// Searches comb-represented copies of B' in which every ordered copy of A'
// gets one color. Best effort at the given depth.
OrderedDemoResult ordered_ramsey_demo(const CodingTree& tree,
                                      const OrderedStructure& aprime,
                                      const OrderedStructure& bprime,
                                      const VertexColoring& coloring);

struct IndivResult {
  bool found = false;
  int color = -1;
  std::vector<int> vertices;
  int horizon = -1;
  std::string note;
};

// Backtracking search for a monochromatic set of coding nodes of the target
// size whose represented substructure passes the extension-demand check at
// the requested horizon.
IndivResult indivisibility_search(const CodingTree& tree,
                                  const VertexColoring& coloring,
                                  int target_size, int horizon);

// Deterministic builtin colorings for the command line: "parity" colors
// coding nodes by vertex parity, "hash" mixes the seed in.
VertexColoring builtin_coloring(const std::string& name, int depth,
                                int colors, std::uint64_t seed);

}  // namespace brd
