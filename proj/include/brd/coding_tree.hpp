#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brd/enumerated.hpp"
#include "brd/one_type.hpp"

namespace brd {

struct NodeRef {
  int level = -1;  // type over K_level, paper length = level + 1
  int idx = -1;    // lex rank within the level

  friend bool operator==(const NodeRef& a, const NodeRef& b) {
    return a.level == b.level && a.idx == b.idx;
  }
  friend bool operator<(const NodeRef& a, const NodeRef& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.idx < b.idx;
  }
};

struct TreeNode {
  OneType type;
  int parent = -1;             // index on the previous level
  std::vector<int> children;   // indices on the next level
  int coding = -1;             // n if this node is c_n
  int gamma = -1;              // unary symbol of the coded vertex, or -1
};

// The truncated coding tree of 1-types over initial segments of an
// enumerated limit. Level n holds the realizable 1-types over K_n in lex
// order; the coding node c_n is the type of v_n over K_n.
class CodingTree {
 public:
  CodingTree(EnumeratedLimit source, int depth, TreeMode mode);

  const EnumeratedLimit& source() const { return src_; }
  TreeMode mode() const { return mode_; }
  int depth() const { return depth_; }

  int level_count() const { return static_cast<int>(levels_.size()); }
  int level_size(int n) const { return static_cast<int>(levels_[n].size()); }
  const TreeNode& node(NodeRef r) const { return levels_[r.level][r.idx]; }
  const OneType& type(NodeRef r) const { return node(r).type; }
  int length(NodeRef r) const { return r.level + 1; }

  NodeRef coding_node(int n) const;
  int coding_count() const { return static_cast<int>(coding_.size()); }
  int gamma_of_coding(int n) const { return node(coding_node(n)).gamma; }

  NodeRef parent(NodeRef r) const;
  NodeRef ancestor_at_level(NodeRef r, int level) const;
  bool is_ancestor(NodeRef a, NodeRef b) const;  // a <= b in the tree order
  NodeRef meet(NodeRef a, NodeRef b) const;
  int compare(NodeRef a, NodeRef b) const;  // lex order <=> (level idx order)

  // Immediate successors of r within the stored depth.
  const std::vector<int>& children(NodeRef r) const {
    return node(r).children;
  }

 private:
  EnumeratedLimit src_;
  TreeMode mode_;
  int depth_;
  std::vector<std::vector<TreeNode>> levels_;
  std::vector<NodeRef> coding_;
};

CodingTree build_coding_tree(const EnumeratedLimit& e, int depth,
                             TreeMode mode);
CodingTree build_coding_tree_auto(const EnumeratedLimit& e, int depth,
                                  std::optional<TreeMode> override = {});

// Passing type of `t` at the coding node c_i relative to the represented
// vertex set (increasing). Atoms mention v_i; other parameters are filtered
// to the represented vertices below |c_i| and renamed to their positions,
// v_i itself becoming the kPassVertex placeholder.
struct PassingType {
  int at = -1;             // ambient coding index i
  std::vector<Atom> atoms;  // canonical: params 0..p-1, kPassVertex, kVarX

  std::string serialize(const Language& lang) const;
  friend bool operator==(const PassingType& a, const PassingType& b) {
    return a.atoms == b.atoms;  // similarity ignores the anchor index
  }
};

PassingType passing_type(const CodingTree& tree, NodeRef t, int coding_index,
                         const std::vector<int>& represented);

// Meet-closure of a node set: the nodes, their pairwise meets, and the
// truncations of the nodes at the meet levels.
std::vector<NodeRef> meet_closure(const CodingTree& tree,
                                  const std::vector<NodeRef>& nodes);

// Similarity of two meet-closed sets with designated coding nodes, decided
// by searching for a similarity map (the six conditions). The designated
// coding nodes are the antichain members, in order of increasing length.
bool similar(const CodingTree& tree, const std::vector<NodeRef>& closure_a,
             const std::vector<NodeRef>& coding_a,
             const std::vector<NodeRef>& closure_b,
             const std::vector<NodeRef>& coding_b);
bool plus_similar(const CodingTree& tree,
                  const std::vector<NodeRef>& closure_a,
                  const std::vector<NodeRef>& coding_a,
                  const std::vector<NodeRef>& closure_b,
                  const std::vector<NodeRef>& coding_b);

// Convenience: similarity of two antichains of coding nodes.
bool similar_antichains(const CodingTree& tree, std::vector<NodeRef> a,
                        std::vector<NodeRef> b);

struct DotOptions {
  bool edge_labels = true;
  bool fill_coding = true;
  std::string rankdir = "BT";
};

std::string export_dot(const CodingTree& tree, const DotOptions& opts = {});

// --------------------------------------------------------------------------
// Diagonal coding subtrees.

struct DiagonalStage {
  int coding_ambient = -1;      // ambient vertex index of c^T_n
  NodeRef coding_node;          // c^T_n
  NodeRef coding_succ;          // its continuation (c^T_n)^+
  std::vector<NodeRef> splits;  // splitting nodes placed for this stage
  std::vector<int> split_psi;   // COE splitting-node classifier values
  std::vector<NodeRef> z_level;  // the level set just above c^T_n
};

// A diagonal coding subtree of the ambient tree: one splitting node per
// level, binary splits, no splits at the levels of its coding nodes.
struct DiagonalTree {
  const CodingTree* ambient = nullptr;
  std::vector<int> represented;  // ambient vertices of c^T_n
  std::vector<NodeRef> coding;   // c^T_n as ambient nodes
  std::vector<DiagonalStage> stages;
  std::vector<std::vector<NodeRef>> level_sets;  // per recorded critical level
  std::vector<NodeRef> frontier;  // nodes at the last built level

  FinStructure represented_structure() const;
};

// Dispatched by the class construction family; throws DomainError for
// unsupported classes and DepthError when the prefix is too shallow to place
// the next critical node.
DiagonalTree extract_diagonal(const CodingTree& tree);
// Builds as many stages as fit instead of throwing DepthError.
DiagonalTree extract_diagonal_partial(const CodingTree& tree);

struct ValidationItem {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct DiagonalReport {
  bool pass = true;
  std::vector<ValidationItem> items;
};

DiagonalReport validate_diagonal(const DiagonalTree& t);
// Treats a whole ambient tree as a subtree of itself (used to show e.g.
// that S(Q) is not diagonal).
DiagonalReport validate_diagonal_ambient(const CodingTree& tree);

std::string export_dot(const DiagonalTree& t, const DotOptions& opts = {});

}  // namespace brd
