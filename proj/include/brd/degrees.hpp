#pragma once

#include <set>
#include <string>
#include <vector>

#include "brd/coding_tree.hpp"

namespace brd {

// Canonical form of the similarity type of a diagonal antichain of coding
// nodes: the interleaving of critical levels, the meet tree, the planar
// (lex) order of the leaves, the leaves' parameter-free formulas, and the
// relative passing types of later leaves at earlier ones.
struct SimDescriptor {
  int n = 0;
  // 2n-1 entries, bottom level first: "C<i>" for the i-th leaf (in length
  // order) or "S<k>" for the k-th split (in level order).
  std::vector<std::string> level_seq;
  std::vector<int> prec;               // lex rank of each leaf
  std::vector<std::vector<int>> meet;  // meet[i][j] = split id of leaves i,j
  std::vector<int> gamma;              // unary symbol per leaf, -1 if none
  // tau[j][i], i<j: canonical passing atoms of leaf j at leaf i
  std::vector<std::vector<std::vector<Atom>>> tau;

  std::string canonical(const Language& lang) const;
  friend bool operator<(const SimDescriptor& a, const SimDescriptor& b);
  friend bool operator==(const SimDescriptor& a, const SimDescriptor& b);
};

// Reads the descriptor off an embedded antichain. Throws DomainError when
// nodes are comparable or the meet-closure is not a diagonal tree.
SimDescriptor descriptor_of(const CodingTree& tree,
                            std::vector<NodeRef> antichain);

// Is the meet-closure of this coding-node set a diagonal tree (distinct
// critical lengths, binary meets)?
bool diagonal_antichain(const CodingTree& tree,
                        const std::vector<NodeRef>& antichain,
                        std::string* why = nullptr);

struct EnumerationStats {
  int antichains_seen = 0;    // oracle: candidate vertex subsets examined
  int candidates = 0;         // direct: coherent candidates generated
  int pruned = 0;             // direct: candidates with no embedding
  bool depth_warning = false;
};

// Brute-force side: enumerate every diagonal antichain of coding nodes
// whose represented substructure is isomorphic to A, deduplicated by
// canonical descriptor.
std::set<SimDescriptor> enumerate_types_oracle(const CodingTree& tree,
                                               const FinStructure& a,
                                               EnumerationStats* stats = nullptr,
                                               int jobs = 1);

// Characterization side: generate all coherent candidate descriptors per
// ordered copy of A and keep the ones that embed into the tree.
std::set<SimDescriptor> enumerate_types_direct(const CodingTree& tree,
                                               const FinStructure& a,
                                               EnumerationStats* stats = nullptr,
                                               int jobs = 1);

// All candidate descriptors for one ordered copy (before the embedding
// prune); exposed for the coherence tests.
std::vector<SimDescriptor> candidate_descriptors(const ClassSpec& cls,
                                                 const OrderedStructure& a,
                                                 TreeMode mode);

// Search for one antichain realizing the descriptor; empty when none.
std::vector<NodeRef> find_descriptor_witness(const CodingTree& tree,
                                             const FinStructure& a,
                                             const SimDescriptor& d);

struct PerOrderedCopy {
  OrderedStructure copy;
  int count = 0;
};

struct DegreeResult {
  std::string class_name;
  std::string structure;
  TreeMode mode = TreeMode::S;
  int depth = 0;
  int degree = 0;
  long long embedding_degree = 0;  // degree * |Aut(A)|
  bool stabilized = false;
  int stabilization_margin = 2;
  std::vector<PerOrderedCopy> per_ordered_copy;
  std::vector<std::string> descriptors;
  EnumerationStats oracle_stats, direct_stats;
};

// Runs both enumerators at the given depth, checks exact set agreement
// (EnumeratorMismatch otherwise), groups counts per ordered copy, and
// compares against depth - margin for the stabilization flag.
DegreeResult big_ramsey_degree(const ClassSpec& cls, const FinStructure& a,
                               int depth, int margin = 2, int jobs = 1,
                               std::optional<TreeMode> mode = {});

// The canonical-partition cell of a sub-copy inside an ambient antichain.
SimDescriptor classify_copy(const CodingTree& tree,
                            const std::vector<NodeRef>& ambient,
                            const std::vector<int>& copy_vertices);

// |p ^ q| <= |r ^ s| on lex-sorted pairs: the quaternary relation of the
// big Ramsey structure expansion.
bool brs_relation(const CodingTree& tree, NodeRef p, NodeRef q, NodeRef r,
                  NodeRef s);

// The represented structure expanded by the lex order and the quaternary
// meet-length comparison (distinct-entry tuples only).
FinStructure expand_brs(const CodingTree& tree,
                        const std::vector<NodeRef>& antichain);

}  // namespace brd
