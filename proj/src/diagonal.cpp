#include <algorithm>
#include <functional>
#include <sstream>

#include "brd/coding_tree.hpp"

namespace brd {

namespace {

// Relativization of an ambient node's type to a parameter subset, renamed to
// positions. Drops atoms touching unlisted vertices.
OneType relativize(const CodingTree& tree, NodeRef r,
                   const std::vector<int>& verts) {
  std::map<int, int> pos;
  for (size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = i;
  OneType out;
  out.params = static_cast<int>(verts.size());
  for (const auto& a : tree.type(r).atoms) {
    Tuple args = a.args;
    bool keep = true;
    for (int& z : args) {
      if (z == kVarX) continue;
      auto it = pos.find(z);
      if (it == pos.end()) {
        keep = false;
        break;
      }
      z = it->second;
    }
    if (keep) out.atoms.push_back(Atom{a.sym, args});
  }
  out.normalize();
  return out;
}

struct Branch {
  NodeRef node;
  std::vector<OneType> targets;  // over J + u (param n = u)
};

// The target's fresh block: atoms about u, parameters instantiated to the
// represented ambient vertices, u renamed to the kPassVertex placeholder.
std::vector<Atom> target_u_block(const OneType& target,
                                 const std::vector<int>& represented) {
  int upos = static_cast<int>(represented.size());
  std::vector<Atom> out;
  for (const auto& a : target.block(upos + 1)) {
    Tuple args = a.args;
    for (int& z : args) {
      if (z == kVarX) continue;
      z = z == upos ? kPassVertex : represented[z];
    }
    out.push_back(Atom{a.sym, args});
  }
  return out;
}

class DiagonalBuilder {
 public:
  DiagonalBuilder(const CodingTree& tree, bool partial)
      : tree_(tree), cls_(tree.source().spec), partial_(partial) {
    if (cls_.family == ConstructionFamily::None)
      throw DomainError("class '" + cls_.name +
                        "' has no supported diagonal construction");
    n_equiv_ = 0;
    for (const auto& ax : cls_.axioms)
      if (ax.kind == AxiomKind::Equivalence) ++n_equiv_;
  }

  DiagonalTree run() {
    out_.ambient = &tree_;
    // minimal level: the roots
    for (int i = 0; i < tree_.level_size(0); ++i)
      frontier_.push_back(Branch{NodeRef{0, i}, {}});
    level_ = 0;
    int stage = 0;
    while (true) {
      try {
        if (!build_stage(stage)) break;
      } catch (const DepthError&) {
        if (partial_) {
          rollback_frontier();
          break;
        }
        throw;
      }
      ++stage;
    }
    for (const auto& b : frontier_) out_.frontier.push_back(b.node);
    return std::move(out_);
  }

 private:
  const CodingTree& tree_;
  const ClassSpec& cls_;
  bool partial_;
  int n_equiv_ = 0;
  DiagonalTree out_;
  std::vector<Branch> frontier_;
  std::vector<Branch> checkpoint_;
  int level_ = 0, checkpoint_level_ = 0;
  size_t checkpoint_levelsets_ = 0, checkpoint_coding_ = 0;

  void rollback_frontier() {
    frontier_ = checkpoint_;
    level_ = checkpoint_level_;
    out_.level_sets.resize(checkpoint_levelsets_);
    out_.represented.resize(checkpoint_coding_);
    out_.coding.resize(checkpoint_coding_);
  }

  const FinStructure& prefix() const { return tree_.source().prefix; }

  FinStructure segment(int m) const {
    return tree_.source().initial_segment(m);
  }

  void ensure_level(int lvl) const {
    if (lvl >= tree_.level_count())
      throw DepthError("diagonal construction ran out of ambient levels",
                       lvl + 1);
  }

  int stage_gamma(int n) const {
    for (int u : cls_.language->unary_symbols())
      if (prefix().has_tuple(u, {n})) return u;
    return -1;
  }

  // Both x and u extend into K_{level+1}; xu constrains the pair. In U mode
  // the types carry no unary atoms, so u gets the stage color and x ranges
  // over the colors.
  bool joint_compat(NodeRef x, NodeRef u, const OneType& target) const {
    std::vector<Atom> xu = target_u_block(target, out_.represented);
    std::vector<Atom> u_atoms = tree_.type(u).atoms;
    std::vector<Atom> x_atoms = tree_.type(x).atoms;
    if (tree_.mode() == TreeMode::U && cls_.language->has_unary()) {
      int g = stage_gamma(static_cast<int>(out_.represented.size()));
      if (g >= 0) u_atoms.push_back(Atom{g, {kVarX}});
      for (int gx : cls_.language->unary_symbols()) {
        auto xs = x_atoms;
        xs.push_back(Atom{gx, {kVarX}});
        if (two_point_extension_ok(cls_, segment(x.level + 1), u_atoms, xs,
                                   xu))
          return true;
      }
      return false;
    }
    return two_point_extension_ok(cls_, segment(x.level + 1), u_atoms,
                                  x_atoms, xu);
  }

  bool compat_all(NodeRef x, NodeRef u,
                  const std::vector<OneType>& targets) const {
    for (const auto& t : targets)
      if (!joint_compat(x, u, t)) return false;
    return true;
  }

  std::vector<NodeRef> children_of(NodeRef r) const {
    std::vector<NodeRef> out;
    for (int ch : tree_.children(r)) out.push_back(NodeRef{r.level + 1, ch});
    return out;
  }

  // designated branch = the one whose target set contains a_star
  int designated_index(const OneType& a_star) const {
    for (size_t i = 0; i < frontier_.size(); ++i)
      for (const auto& t : frontier_[i].targets)
        if (t == a_star) return static_cast<int>(i);
    throw DomainError("diagonal construction lost its designated branch");
  }

  // Candidate partitions of a sorted target list, canonical order: the
  // first-differing-atom halves, then peeling the lex-greatest, the
  // lex-least, then the remaining bitmasks.
  std::vector<std::pair<std::vector<OneType>, std::vector<OneType>>>
  partitions(const std::vector<OneType>& s) const {
    std::vector<std::pair<std::vector<OneType>, std::vector<OneType>>> out;
    auto push = [&](const std::vector<int>& mask_side) {
      std::vector<OneType> s1, s2;
      for (size_t i = 0; i < s.size(); ++i)
        (mask_side[i] ? s1 : s2).push_back(s[i]);
      if (s1.empty() || s2.empty()) return;
      out.push_back({s1, s2});
    };
    // first differing atom: order the union of atoms, pick the first with
    // disagreement
    {
      std::vector<Atom> all;
      for (const auto& t : s)
        for (const auto& a : t.atoms) all.push_back(a);
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      auto has = [](const OneType& t, const Atom& a) {
        return std::find(t.atoms.begin(), t.atoms.end(), a) != t.atoms.end();
      };
      for (const auto& a : all) {
        int cnt = 0;
        for (const auto& t : s)
          if (has(t, a)) ++cnt;
        if (cnt > 0 && cnt < static_cast<int>(s.size())) {
          std::vector<int> mask(s.size(), 0);
          for (size_t i = 0; i < s.size(); ++i) mask[i] = has(s[i], a);
          push(mask);
          break;
        }
      }
    }
    {  // peel lex-greatest
      std::vector<int> mask(s.size(), 1);
      mask.back() = 0;
      push(mask);
    }
    {  // peel lex-least
      std::vector<int> mask(s.size(), 0);
      mask[0] = 1;
      push(mask);
    }
    for (unsigned m = 1; m + 1 < (1u << s.size()); ++m) {
      std::vector<int> mask(s.size(), 0);
      for (size_t i = 0; i < s.size(); ++i)
        if (m & (1u << i)) mask[i] = 1;
      push(mask);
    }
    return out;
  }

  int psi_of(NodeRef split) const {
    if (n_equiv_ == 0) return -1;
    // equivalence symbols in declaration order; psi counts from the finest
    std::vector<int> eq_syms;
    for (const auto& ax : cls_.axioms)
      if (ax.kind == AxiomKind::Equivalence) eq_syms.push_back(ax.sym);
    const OneType& ty = tree_.type(split);
    auto related = [&](int sym, int v) {
      for (const auto& a : ty.atoms)
        if (a.sym == sym &&
            std::find(a.args.begin(), a.args.end(), v) != a.args.end())
          return true;
      return false;
    };
    for (int i = 0; i < n_equiv_; ++i)
      for (int v : out_.represented)
        if (v < split.level && related(eq_syms[i], v)) return i;
    return n_equiv_;
  }

  // One construction stage: returns false when the prefix has no vertex to
  // code (stage cannot start).
  bool build_stage(int stage_no) {
    checkpoint_ = frontier_;
    checkpoint_level_ = level_;
    checkpoint_levelsets_ = out_.level_sets.size();
    checkpoint_coding_ = out_.coding.size();
    int n = static_cast<int>(out_.represented.size());
    if (n >= tree_.coding_count()) return false;

    // reference structure: J extended by u realizing the stage type
    OneType tau_u = vertex_type_over_segment(prefix(), n, n, tree_.mode());
    FinStructure jplus =
        extend_by_type(out_.represented.empty()
                           ? FinStructure(cls_.language, 0)
                           : induced(prefix(), out_.represented),
                       instantiate_gamma(tau_u, n).atoms);
    auto targets = realizable_types(cls_, identity_order(jplus), tree_.mode());

    // distribute targets to branches by restriction
    for (auto& b : frontier_) b.targets.clear();
    for (const auto& t : targets) {
      OneType r = t.restrict_to(n);
      bool placed = false;
      for (auto& b : frontier_) {
        if (relativize(tree_, b.node, out_.represented) == r) {
          b.targets.push_back(t);
          placed = true;
          break;
        }
      }
      if (!placed)
        throw DomainError("stage target has no matching frontier branch");
    }
    for (auto& b : frontier_)
      if (b.targets.empty())
        throw DomainError("frontier branch received no stage target");

    OneType a_star = a_star_of(tau_u, targets, n);

    DiagonalStage st;

    // split phase
    while (true) {
      bool pending = false;
      for (const auto& b : frontier_)
        if (b.targets.size() >= 2) pending = true;
      if (!pending) break;
      advance_one_level(&st, a_star);
    }

    // coding phase: extend the designated branch to an ambient coding node
    int ci = -1;
    while (true) {
      int des = designated_index(a_star);
      NodeRef dn = frontier_[des].node;
      const TreeNode& node = tree_.node(dn);
      bool is_coding = node.coding >= 0 && gamma_matches(dn, n);
      if (is_coding && dn.level > (out_.coding.empty()
                                       ? -1
                                       : out_.coding.back().level)) {
        ci = node.coding;
        break;
      }
      advance_one_level(nullptr, a_star);
    }

    int des = designated_index(a_star);
    st.coding_ambient = ci;
    st.coding_node = frontier_[des].node;
    out_.represented.push_back(ci);
    out_.coding.push_back(st.coding_node);
    record_level();

    // z step: cross the coding level realizing each branch's target
    ensure_level(level_ + 1);
    for (auto& b : frontier_) {
      const OneType& target = b.targets.front();
      NodeRef next{-1, -1};
      for (const auto& ch : children_of(b.node))
        if (relativize(tree_, ch, out_.represented) == target) {
          next = ch;
          break;
        }
      if (next.level < 0)
        throw DepthError(
            "no successor realizes the stage target above level " +
                std::to_string(level_),
            level_ + 2);
      if (b.node == st.coding_node) st.coding_succ = next;
      b.node = next;
      b.targets.clear();
    }
    ++level_;
    record_level();
    st.z_level = current_refs();
    out_.stages.push_back(std::move(st));
    (void)stage_no;
    return true;
  }

  // S mode carries the unary choice inside the type; in U mode the stage
  // color comes from the coding map and must be added for the reference
  // structure to satisfy the unary partition.
  OneType instantiate_gamma(const OneType& tau_u, int n) const {
    if (tree_.mode() == TreeMode::S || !cls_.language->has_unary())
      return tau_u;
    OneType out = tau_u;
    int g = stage_gamma(n);
    if (g >= 0) out.atoms.push_back(Atom{g, {kVarX}});
    out.normalize();
    return out;
  }

  bool gamma_matches(NodeRef candidate, int stage_vertex) const {
    if (tree_.mode() == TreeMode::S) return true;
    if (!cls_.language->has_unary()) return true;
    int want = -1;
    for (int u : cls_.language->unary_symbols())
      if (prefix().has_tuple(u, {stage_vertex})) want = u;
    return tree_.node(candidate).gamma == want;
  }

  OneType a_star_of(const OneType& tau_u,
                    const std::vector<OneType>& targets, int n) const {
    // lex-least target extending the stage type (the coding continuation)
    for (const auto& t : targets)
      if (t.restrict_to(n) == tau_u) return t;
    throw DomainError("stage type has no extension among the targets");
  }

  std::vector<NodeRef> current_refs() const {
    std::vector<NodeRef> out;
    for (const auto& b : frontier_) out.push_back(b.node);
    return out;
  }

  void record_level() { out_.level_sets.push_back(current_refs()); }

  // Advance every branch one ambient level; at most one branch splits, the
  // lex-least one that has a feasible split at this level.
  void advance_one_level(DiagonalStage* st, const OneType& a_star) {
    ensure_level(level_ + 1);
    std::sort(frontier_.begin(), frontier_.end(),
              [](const Branch& a, const Branch& b) {
                return a.node.idx < b.node.idx;
              });
    int des = designated_index(a_star);

    // the designated branch's padding move, in case it does not split here
    NodeRef dpad{-1, -1};
    for (const auto& ch : children_of(frontier_[des].node))
      if (compat_all(ch, ch, frontier_[des].targets)) {
        dpad = ch;
        break;
      }

    // choose the splitter: the lex-least branch with a feasible split
    int splitter = -1;
    std::vector<OneType> s1, s2;
    NodeRef c1{-1, -1}, c2{-1, -1};
    for (size_t bi = 0; bi < frontier_.size() && splitter < 0; ++bi) {
      Branch& b = frontier_[bi];
      if (b.targets.size() < 2) continue;
      auto kids = children_of(b.node);
      if (kids.size() < 2) continue;
      bool is_des = static_cast<int>(bi) == des;
      if (!is_des && dpad.level < 0) continue;
      for (auto& [p1, p2] : partitions(b.targets)) {
        bool p1_has_astar =
            is_des &&
            std::find(p1.begin(), p1.end(), a_star) != p1.end();
        for (size_t i = 0; i < kids.size() && splitter < 0; ++i)
          for (size_t j = 0; j < kids.size() && splitter < 0; ++j) {
            if (i == j) continue;
            NodeRef unode =
                is_des ? (p1_has_astar ? kids[i] : kids[j]) : dpad;
            if (compat_all(kids[i], unode, p1) &&
                compat_all(kids[j], unode, p2)) {
              splitter = static_cast<int>(bi);
              s1 = p1;
              s2 = p2;
              c1 = kids[i];
              c2 = kids[j];
            }
          }
        if (splitter >= 0) break;
      }
    }

    if (st && splitter >= 0) {
      st->splits.push_back(frontier_[splitter].node);
      st->split_psi.push_back(psi_of(frontier_[splitter].node));
      record_level();
    }

    NodeRef unext;
    if (splitter == des && splitter >= 0)
      unext = std::find(s1.begin(), s1.end(), a_star) != s1.end() ? c1 : c2;
    else
      unext = dpad;
    if (unext.level < 0)
      throw DomainError("designated branch cannot advance at level " +
                        std::to_string(level_));

    std::vector<Branch> next;
    for (size_t bi = 0; bi < frontier_.size(); ++bi) {
      Branch& b = frontier_[bi];
      if (static_cast<int>(bi) == splitter) {
        next.push_back(Branch{c1, s1});
        next.push_back(Branch{c2, s2});
        continue;
      }
      if (static_cast<int>(bi) == des) {
        next.push_back(Branch{unext, b.targets});
        continue;
      }
      NodeRef chosen{-1, -1};
      for (const auto& ch : children_of(b.node))
        if (compat_all(ch, unext, b.targets)) {
          chosen = ch;
          break;
        }
      if (chosen.level < 0)
        throw DomainError("frontier branch cannot advance at level " +
                          std::to_string(level_));
      next.push_back(Branch{chosen, b.targets});
    }
    frontier_ = std::move(next);
    ++level_;
  }
};

}  // namespace

DiagonalTree extract_diagonal(const CodingTree& tree) {
  return DiagonalBuilder(tree, false).run();
}

DiagonalTree extract_diagonal_partial(const CodingTree& tree) {
  return DiagonalBuilder(tree, true).run();
}

// ---------------------------------------------------------------------------
// Validation.

namespace {

void add_item(DiagonalReport& rep, const std::string& name, bool pass,
              const std::string& detail = "") {
  rep.items.push_back(ValidationItem{name, pass, detail});
  if (!pass) rep.pass = false;
}

}  // namespace

DiagonalReport validate_diagonal(const DiagonalTree& t) {
  const CodingTree& tree = *t.ambient;
  const ClassSpec& cls = tree.source().spec;
  DiagonalReport rep;

  // diagonality: critical nodes at pairwise distinct levels, splits binary,
  // none at coding levels
  {
    std::map<int, int> critical_levels;
    bool distinct = true, no_split_at_coding = true, binary = true;
    std::set<int> coding_levels;
    for (const auto& c : t.coding) coding_levels.insert(c.level);
    for (const auto& st : t.stages) {
      for (const auto& s : st.splits) {
        if (++critical_levels[s.level] > 1) distinct = false;
        if (coding_levels.count(s.level)) no_split_at_coding = false;
      }
    }
    for (const auto& c : t.coding)
      if (++critical_levels[c.level] > 1) distinct = false;
    // binary splits: in the final subtree each split has exactly two sides
    std::vector<NodeRef> tips = t.frontier;
    for (const auto& st : t.stages)
      for (const auto& s : st.splits) {
        std::set<int> sides;
        for (const auto& tip : tips)
          if (tree.is_ancestor(s, tip))
            sides.insert(tree.ancestor_at_level(tip, s.level + 1).idx);
        if (sides.size() != 2) binary = false;
      }
    add_item(rep, "diagonal: one critical node per level", distinct);
    add_item(rep, "diagonal: splits have degree two", binary);
    add_item(rep, "diagonal: no splitting at coding levels",
             no_split_at_coding);
  }

  // (1) the represented structure reproduces the ambient prefix pattern
  {
    int m = static_cast<int>(t.represented.size());
    FinStructure j = t.represented_structure();
    FinStructure k = tree.source().initial_segment(m);
    add_item(rep, "(1) represented structure matches the prefix pattern",
             j == k,
             j == k ? "" : "J_" + std::to_string(m) + " differs from K_" +
                               std::to_string(m));
  }

  // (2) level sets above coding nodes relativize onto the full type space
  {
    bool ok = true;
    std::string detail;
    for (size_t n = 0; n < t.stages.size() && ok; ++n) {
      std::vector<int> j(t.represented.begin(),
                         t.represented.begin() + n + 1);
      auto ref = realizable_types(
          cls, identity_order(induced(tree.source().prefix, j)),
          tree.mode());
      std::set<std::string> want, got;
      for (const auto& ty : ref)
        want.insert(ty.serialize(*cls.language));
      for (const auto& r : t.stages[n].z_level)
        got.insert(relativize(tree, r, j).serialize(*cls.language));
      if (want != got) {
        ok = false;
        detail = "stage " + std::to_string(n) + ": " +
                 std::to_string(got.size()) + " relativized types vs " +
                 std::to_string(want.size()) + " expected";
      }
    }
    add_item(rep, "(2) one-to-one correspondence with the ambient 1-types",
             ok, detail);
  }

  // (3) nested coding nodes continue with similar passing types
  {
    bool ok = true;
    std::string detail;
    for (size_t m = 0; m < t.stages.size() && ok; ++m)
      for (size_t n = m + 1; n < t.stages.size() && ok; ++n) {
        if (!tree.is_ancestor(t.coding[m], t.coding[n])) continue;
        std::vector<int> below(t.represented.begin(),
                               t.represented.begin() + m);
        PassingType pn = passing_type(tree, t.stages[n].coding_succ,
                                      t.represented[n], below);
        PassingType pm = passing_type(tree, t.stages[m].coding_succ,
                                      t.represented[m], below);
        if (!(pn == pm)) {
          ok = false;
          detail = "coding " + std::to_string(m) + " vs " + std::to_string(n);
        }
      }
    add_item(rep, "(3) passing types agree at successive coding nodes", ok,
             detail);
  }

  return rep;
}

DiagonalReport validate_diagonal_ambient(const CodingTree& tree) {
  DiagonalReport rep;
  bool one_split = true, binary = true, no_split_at_coding = true;
  for (int n = 0; n + 1 < tree.level_count(); ++n) {
    int splits = 0;
    for (int i = 0; i < tree.level_size(n); ++i) {
      NodeRef r{n, i};
      size_t deg = tree.children(r).size();
      if (deg >= 2) {
        ++splits;
        if (deg > 2) binary = false;
        if (tree.node(r).coding >= 0) no_split_at_coding = false;
      }
    }
    if (splits > 1) one_split = false;
  }
  add_item(rep, "diagonal: one critical node per level", one_split);
  add_item(rep, "diagonal: splits have degree two", binary);
  add_item(rep, "diagonal: no splitting at coding levels", no_split_at_coding);
  return rep;
}

}  // namespace brd
