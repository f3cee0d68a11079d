#pragma once

#include <string>
#include <vector>

#include "brd/structures.hpp"

namespace brd {

// Sentinel arguments inside atoms. X is the type variable; PASS is the
// canonical placeholder for the passing vertex when passing types are
// compared over different parameter sets.
inline constexpr int kVarX = -1;
inline constexpr int kPassVertex = -2;

// A positive atom R(z0..zk-1) with the variable x occurring exactly once and
// the remaining arguments naming parameter vertices.
struct Atom {
  int sym = 0;
  Tuple args;  // entries: kVarX once, otherwise parameter indices

  int newest_param() const {
    int m = -1;
    for (int a : args)
      if (a >= 0 && a > m) m = a;
    return m;
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.sym == b.sym && a.args == b.args;
  }
  // Atom order: symbol declaration order, then argument tuples
  // lexicographically with x below every vertex.
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.sym != b.sym) return a.sym < b.sym;
    return a.args < b.args;
  }
};

enum class TreeMode { S, U };

// A complete quantifier-free 1-type over an initial segment K_m, stored by
// its positive atoms (absence of an atom reads as its negation). In S mode
// the parameter-free unary atoms are part of the type; in U mode types live
// in the unary-free reduct. Following the paper's convention a type over
// K_m has length m+1.
struct OneType {
  int params = 0;           // m: parameters are v_0..v_{m-1}
  std::vector<Atom> atoms;  // sorted by (level, atom order)

  int length() const { return params + 1; }

  // Level blocks: block 0 holds parameter-free atoms, block i (i>=1) the
  // atoms whose newest parameter is v_{i-1}.
  static int block_of(const Atom& a) { return a.newest_param() + 1; }

  void normalize();
  std::vector<Atom> block(int i) const;
  OneType restrict_to(int m) const;  // restriction to K_m

  std::string serialize(const Language& lang) const;

  friend bool operator==(const OneType& a, const OneType& b) {
    return a.params == b.params && a.atoms == b.atoms;
  }
};

// -1 / 0 / +1 for the lexicographic node order: proper initial segments come
// first; otherwise the type containing the first differing atom precedes.
int lex_compare(const OneType& a, const OneType& b);

std::string atom_to_string(const Atom& a, const Language& lang);

// The complete 1-type of vertex v of `s` over the initial segment K_m
// (parameters 0..m-1, v replaced by x). U mode drops unary atoms.
OneType vertex_type_over_segment(const FinStructure& s, int v, int m,
                                 TreeMode mode = TreeMode::S);

}  // namespace brd
