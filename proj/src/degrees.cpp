#include "brd/degrees.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace brd {

namespace {

std::string atoms_key(const std::vector<Atom>& atoms) {
  std::ostringstream os;
  for (const auto& a : atoms) {
    os << a.sym << ":";
    for (int z : a.args) os << z << ".";
    os << "|";
  }
  return os.str();
}

}  // namespace

std::string SimDescriptor::canonical(const Language& lang) const {
  std::ostringstream os;
  os << "n=" << n << ";seq=";
  for (size_t i = 0; i < level_seq.size(); ++i)
    os << (i ? "," : "") << level_seq[i];
  os << ";prec=";
  for (size_t i = 0; i < prec.size(); ++i) os << (i ? "," : "") << prec[i];
  os << ";meets=";
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      os << i << "^" << j << "->S" << meet[i][j] << (j == n - 1 && i == j - 1 ? "" : " ");
  os << ";gamma=";
  for (int i = 0; i < n; ++i) {
    os << (i ? "," : "");
    os << (gamma[i] < 0 ? std::string("-") : lang.symbol(gamma[i]).name);
  }
  os << ";tau=";
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      os << "[" << j << "@" << i << ":";
      for (size_t k = 0; k < tau[j][i].size(); ++k) {
        if (k) os << ";";
        os << atom_to_string(tau[j][i][k], lang);
      }
      os << "]";
    }
  return os.str();
}

bool operator<(const SimDescriptor& a, const SimDescriptor& b) {
  auto key = [](const SimDescriptor& d) {
    std::ostringstream os;
    os << d.n << "|";
    for (const auto& s : d.level_seq) os << s << ",";
    os << "|";
    for (int p : d.prec) os << p << ",";
    os << "|";
    for (const auto& row : d.meet)
      for (int m : row) os << m << ",";
    os << "|";
    for (int g : d.gamma) os << g << ",";
    os << "|";
    for (const auto& row : d.tau)
      for (const auto& cell : row) os << atoms_key(cell) << "/";
    return os.str();
  };
  return key(a) < key(b);
}

bool operator==(const SimDescriptor& a, const SimDescriptor& b) {
  return !(a < b) && !(b < a);
}

bool diagonal_antichain(const CodingTree& tree,
                        const std::vector<NodeRef>& antichain,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int n = static_cast<int>(antichain.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (tree.is_ancestor(antichain[i], antichain[j]) ||
          tree.is_ancestor(antichain[j], antichain[i]))
        return fail("nodes are comparable");
    }
  if (n <= 1) return true;
  std::set<NodeRef> meets;
  std::set<int> levels;
  for (const auto& r : antichain)
    if (!levels.insert(r.level).second) return fail("equal leaf lengths");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      meets.insert(tree.meet(antichain[i], antichain[j]));
  if (static_cast<int>(meets.size()) != n - 1)
    return fail("a meet splits three ways");
  for (const auto& m : meets)
    if (!levels.insert(m.level).second)
      return fail("two critical nodes share a level");
  return true;
}

SimDescriptor descriptor_of(const CodingTree& tree,
                            std::vector<NodeRef> antichain) {
  std::sort(antichain.begin(), antichain.end());
  std::string why;
  if (!diagonal_antichain(tree, antichain, &why))
    throw DomainError("not a diagonal antichain: " + why);
  int n = static_cast<int>(antichain.size());

  SimDescriptor d;
  d.n = n;
  d.prec.resize(n);
  d.gamma.resize(n);
  d.meet.assign(n, std::vector<int>(n, -1));
  d.tau.assign(n, std::vector<std::vector<Atom>>(n));

  // critical levels: leaves C<i>, splits S<k> in level order
  std::vector<std::pair<int, std::string>> criticals;
  std::map<NodeRef, int> split_id;
  {
    std::set<NodeRef> meets;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        meets.insert(tree.meet(antichain[i], antichain[j]));
    std::vector<NodeRef> ms(meets.begin(), meets.end());
    std::sort(ms.begin(), ms.end(),
              [](const NodeRef& a, const NodeRef& b) {
                return a.level < b.level;
              });
    for (size_t k = 0; k < ms.size(); ++k) {
      split_id[ms[k]] = static_cast<int>(k);
      criticals.push_back({ms[k].level, "S" + std::to_string(k)});
    }
    for (int i = 0; i < n; ++i)
      criticals.push_back({antichain[i].level, "C" + std::to_string(i)});
    std::sort(criticals.begin(), criticals.end());
    for (const auto& [lvl, lbl] : criticals) d.level_seq.push_back(lbl);
  }

  // lex ranks
  {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return tree.compare(antichain[x], antichain[y]) < 0;
    });
    for (int r = 0; r < n; ++r) d.prec[order[r]] = r;
  }

  std::vector<int> represented;
  for (const auto& r : antichain) represented.push_back(tree.node(r).coding);

  for (int i = 0; i < n; ++i) {
    d.gamma[i] = tree.node(antichain[i]).gamma;
    for (int j = i + 1; j < n; ++j) {
      d.meet[i][j] = d.meet[j][i] =
          split_id[tree.meet(antichain[i], antichain[j])];
      d.tau[j][i] =
          passing_type(tree, antichain[j], represented[i], represented)
              .atoms;
    }
  }
  return d;
}

namespace {

// Rebuild the represented ordered structure from a descriptor (arity <= 2).
FinStructure represented_of_descriptor(const SimDescriptor& d,
                                       const LanguagePtr& lang) {
  FinStructure s(lang, d.n);
  for (int i = 0; i < d.n; ++i)
    if (d.gamma[i] >= 0) s.add_tuple(d.gamma[i], {i});
  for (int j = 1; j < d.n; ++j)
    for (int i = 0; i < j; ++i)
      for (const auto& a : d.tau[j][i]) {
        Tuple t = a.args;
        for (int& z : t) z = z == kVarX ? j : i;
        s.add_tuple(a.sym, std::move(t));
      }
  return s;
}

}  // namespace

std::set<SimDescriptor> enumerate_types_oracle(const CodingTree& tree,
                                               const FinStructure& a,
                                               EnumerationStats* stats,
                                               int /*jobs*/) {
  const ClassSpec& cls = tree.source().spec;
  if (cls.language->max_arity() > 2)
    throw DomainError(
        "degree enumeration requires relations of arity at most two");
  if (a.size() == 0) throw DomainError("the structure must be nonempty");
  if (!contains(cls, a)) throw DomainError("structure is not in the class");

  int n = a.size();
  int depth = tree.coding_count();
  std::set<SimDescriptor> out;
  EnumerationStats st;
  if (depth < 2 * n - 1) st.depth_warning = true;

  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int idx, int from) {
    if (idx == n) {
      ++st.antichains_seen;
      std::vector<int> verts(pick.begin(), pick.end());
      if (!isomorphic(induced(tree.source().prefix, verts), a)) return;
      std::vector<NodeRef> nodes;
      for (int v : pick) nodes.push_back(tree.coding_node(v));
      if (!diagonal_antichain(tree, nodes)) return;
      out.insert(descriptor_of(tree, nodes));
      return;
    }
    for (int v = from; v < depth; ++v) {
      pick[idx] = v;
      rec(idx + 1, v + 1);
    }
  };
  rec(0, 0);
  if (stats) *stats = st;
  return out;
}

std::vector<SimDescriptor> candidate_descriptors(const ClassSpec& cls,
                                                 const OrderedStructure& a,
                                                 TreeMode mode) {
  FinStructure base = a.reordered();
  int n = base.size();
  auto unary_syms = cls.language->unary_symbols();

  // leaf data forced by the ordered copy
  std::vector<int> gamma(n, -1);
  for (int i = 0; i < n; ++i)
    for (int u : unary_syms)
      if (base.has_tuple(u, {i})) gamma[i] = u;
  // tau[j][i]: atoms between leaf j (variable) and leaf i (placeholder)
  std::vector<std::vector<std::vector<Atom>>> tau(
      n, std::vector<std::vector<Atom>>(n));
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      for (int sym = 0; sym < cls.language->size(); ++sym) {
        if (cls.language->symbol(sym).arity != 2) continue;
        if (base.has_tuple(sym, {j, i}))
          tau[j][i].push_back(Atom{sym, {kVarX, kPassVertex}});
        if (base.has_tuple(sym, {i, j}))
          tau[j][i].push_back(Atom{sym, {kPassVertex, kVarX}});
      }
      std::sort(tau[j][i].begin(), tau[j][i].end());
    }

  // branch process over the planar slot tree
  struct SlotTree {
    // -1 root; internal nodes = splits (by id), leaves recorded at close
    std::vector<int> parent_split;  // per slot: the split that created it
    std::vector<bool> left_child;
  };

  std::vector<SimDescriptor> out;

  struct Slot {
    int id;
  };
  // genealogy per slot: chain of (split id, side)
  std::vector<std::vector<std::pair<int, bool>>> genealogy;
  genealogy.push_back({});  // root slot 0

  struct Event {
    bool split;
    int slot;  // index into the active list
  };

  std::vector<int> active = {0};
  std::vector<std::vector<std::pair<int, bool>>> leaf_gene(n);
  std::vector<std::string> seq;
  int splits_done = 0, closed = 0;

  std::function<void()> rec = [&]() {
    if (static_cast<int>(seq.size()) == 2 * n - 1) {
      if (!active.empty() || closed != n) return;
      // assemble the descriptor
      SimDescriptor d;
      d.n = n;
      d.level_seq = seq;
      d.gamma = gamma;
      d.tau = tau;
      d.meet.assign(n, std::vector<int>(n, -1));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          // lowest common split: longest common genealogy prefix
          size_t k = 0;
          while (k < leaf_gene[i].size() && k < leaf_gene[j].size() &&
                 leaf_gene[i][k] == leaf_gene[j][k])
            ++k;
          if (k >= leaf_gene[i].size() || k >= leaf_gene[j].size())
            return;  // one leaf's slot is an ancestor slot: not an antichain
          if (leaf_gene[i][k].first != leaf_gene[j][k].first)
            return;  // diverge at different splits: impossible shape
          d.meet[i][j] = d.meet[j][i] = leaf_gene[i][k].first;
        }
      // prec: planar order = genealogy words ordered with left < right
      std::vector<int> order(n);
      for (int i = 0; i < n; ++i) order[i] = i;
      auto planar_less = [&](int x, int y) {
        const auto& gx = leaf_gene[x];
        const auto& gy = leaf_gene[y];
        size_t k = 0;
        while (k < gx.size() && k < gy.size() && gx[k] == gy[k]) ++k;
        if (k == gx.size() || k == gy.size()) return gx.size() < gy.size();
        return gx[k].second && !gy[k].second;  // left before right
      };
      std::sort(order.begin(), order.end(), planar_less);
      d.prec.resize(n);
      for (int r = 0; r < n; ++r) d.prec[order[r]] = r;
      // coherence: i<j<k with meet(j,k) above leaf i agree over leaf i
      auto pos_of = [&](const std::string& lbl) {
        for (size_t p = 0; p < seq.size(); ++p)
          if (seq[p] == lbl) return static_cast<int>(p);
        return -1;
      };
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            int meet_pos = pos_of("S" + std::to_string(d.meet[j][k]));
            int leaf_pos = pos_of("C" + std::to_string(i));
            if (meet_pos > leaf_pos && !(tau[j][i] == tau[k][i])) return;
          }
      out.push_back(std::move(d));
      return;
    }
    // close the next leaf at any active slot
    if (closed < n) {
      for (size_t s = 0; s < active.size(); ++s) {
        int slot = active[s];
        seq.push_back("C" + std::to_string(closed));
        leaf_gene[closed] = genealogy[slot];
        active.erase(active.begin() + s);
        ++closed;
        rec();
        --closed;
        active.insert(active.begin() + s, slot);
        seq.pop_back();
      }
    }
    // split any active slot
    if (splits_done < n - 1) {
      for (size_t s = 0; s < active.size(); ++s) {
        int slot = active[s];
        int sid = splits_done;
        int l = static_cast<int>(genealogy.size());
        genealogy.push_back(genealogy[slot]);
        genealogy.back().push_back({sid, true});
        int r = static_cast<int>(genealogy.size());
        genealogy.push_back(genealogy[slot]);
        genealogy.back().push_back({sid, false});
        seq.push_back("S" + std::to_string(sid));
        active.erase(active.begin() + s);
        active.insert(active.begin() + s, r);
        active.insert(active.begin() + s, l);
        ++splits_done;
        rec();
        --splits_done;
        active.erase(active.begin() + s, active.begin() + s + 2);
        active.insert(active.begin() + s, slot);
        seq.pop_back();
        genealogy.pop_back();
        genealogy.pop_back();
      }
    }
  };
  rec();
  (void)mode;
  return out;
}

std::vector<NodeRef> find_descriptor_witness(const CodingTree& tree,
                                             const FinStructure& a,
                                             const SimDescriptor& d) {
  int n = d.n;
  int depth = tree.coding_count();
  const FinStructure& prefix = tree.source().prefix;
  std::vector<NodeRef> chosen;
  std::vector<int> verts;

  std::function<bool(int, int)> rec = [&](int idx, int from) -> bool {
    if (idx == n) {
      SimDescriptor got = descriptor_of(tree, chosen);
      return got == d;
    }
    for (int v = from; v < depth; ++v) {
      NodeRef cand = tree.coding_node(v);
      if (tree.node(cand).gamma != d.gamma[idx]) continue;
      bool ok = true;
      // pairwise relations with earlier picks must match tau
      for (int s = 0; s < idx && ok; ++s) {
        if (tree.is_ancestor(chosen[s], cand) ||
            tree.is_ancestor(cand, chosen[s])) {
          ok = false;
          break;
        }
        PassingType pt = passing_type(tree, cand, verts[s], verts);
        if (!(pt.atoms == d.tau[idx][s])) ok = false;
        // planar order
        bool lex_lt = tree.compare(cand, chosen[s]) < 0;
        if (lex_lt != (d.prec[idx] < d.prec[s])) ok = false;
      }
      // meet pattern on the placed prefix
      for (int s = 0; s < idx && ok; ++s)
        for (int t = s + 1; t < idx && ok; ++t) {
          NodeRef mst = tree.meet(chosen[s], chosen[t]);
          NodeRef msc = tree.meet(chosen[s], cand);
          NodeRef mtc = tree.meet(chosen[t], cand);
          if ((d.meet[s][t] == d.meet[s][idx]) != (mst == msc)) ok = false;
          if ((d.meet[s][t] == d.meet[t][idx]) != (mst == mtc)) ok = false;
          if ((d.meet[s][idx] == d.meet[t][idx]) != (msc == mtc)) ok = false;
        }
      if (!ok) continue;
      chosen.push_back(cand);
      verts.push_back(v);
      if (rec(idx + 1, v + 1)) return true;
      chosen.pop_back();
      verts.pop_back();
    }
    return false;
  };
  (void)a;
  if (rec(0, 0)) return chosen;
  return {};
}

std::set<SimDescriptor> enumerate_types_direct(const CodingTree& tree,
                                               const FinStructure& a,
                                               EnumerationStats* stats,
                                               int /*jobs*/) {
  const ClassSpec& cls = tree.source().spec;
  if (cls.language->max_arity() > 2)
    throw DomainError(
        "degree enumeration requires relations of arity at most two");
  if (a.size() == 0) throw DomainError("the structure must be nonempty");
  if (!contains(cls, a)) throw DomainError("structure is not in the class");

  EnumerationStats st;
  std::set<SimDescriptor> out;
  for (const auto& copy : ordered_copies(a)) {
    auto cands = candidate_descriptors(cls, copy, tree.mode());
    st.candidates += static_cast<int>(cands.size());
    for (const auto& d : cands) {
      if (find_descriptor_witness(tree, a, d).empty())
        ++st.pruned;
      else
        out.insert(d);
    }
  }
  if (stats) *stats = st;
  return out;
}

DegreeResult big_ramsey_degree(const ClassSpec& cls, const FinStructure& a,
                               int depth, int margin, int jobs,
                               std::optional<TreeMode> mode) {
  DegreeResult res;
  res.class_name = cls.name;
  res.structure = a.serialize();
  res.depth = depth;
  res.stabilization_margin = margin;

  EnumeratedLimit e = build_enumerated(cls, depth);
  TreeMode m = mode.value_or(cls.auto_mode());
  res.mode = m;
  CodingTree tree(e, depth, m);

  auto oracle = enumerate_types_oracle(tree, a, &res.oracle_stats, jobs);
  auto direct = enumerate_types_direct(tree, a, &res.direct_stats, jobs);
  if (!(oracle == direct)) {
    std::ostringstream os;
    os << "enumerators disagree for " << a.serialize() << " in "
       << cls.name << ": oracle " << oracle.size() << " vs direct "
       << direct.size();
    throw EnumeratorMismatch(os.str());
  }

  res.degree = static_cast<int>(oracle.size());
  res.embedding_degree =
      static_cast<long long>(res.degree) *
      static_cast<long long>(automorphisms(a).size());

  // stabilization: the oracle set at depth - margin
  if (depth - margin >= 1) {
    CodingTree shallow(e, depth - margin, m);
    auto prev = enumerate_types_oracle(shallow, a, nullptr, jobs);
    res.stabilized = prev == oracle;
  }

  // per-ordered-copy counts
  auto copies = ordered_copies(a);
  for (const auto& c : copies)
    res.per_ordered_copy.push_back(PerOrderedCopy{c, 0});
  for (const auto& d : oracle) {
    FinStructure rep = represented_of_descriptor(d, cls.language);
    OrderedStructure ros = identity_order(rep);
    for (auto& pc : res.per_ordered_copy)
      if (omega_isomorphic(ros, pc.copy)) {
        ++pc.count;
        break;
      }
    res.descriptors.push_back(d.canonical(*cls.language));
  }
  std::sort(res.descriptors.begin(), res.descriptors.end());
  return res;
}

SimDescriptor classify_copy(const CodingTree& tree,
                            const std::vector<NodeRef>& ambient,
                            const std::vector<int>& copy_vertices) {
  std::vector<NodeRef> sub;
  for (int v : copy_vertices) {
    bool found = false;
    for (const auto& r : ambient)
      if (tree.node(r).coding == v) {
        sub.push_back(r);
        found = true;
      }
    if (!found)
      throw DomainError("copy vertex " + std::to_string(v) +
                        " is not inside the ambient antichain");
  }
  return descriptor_of(tree, sub);
}

bool brs_relation(const CodingTree& tree, NodeRef p, NodeRef q, NodeRef r,
                  NodeRef s) {
  auto sorted_pair_len = [&](NodeRef x, NodeRef y) {
    if (tree.compare(x, y) > 0) std::swap(x, y);
    return tree.meet(x, y).level;
  };
  return sorted_pair_len(p, q) <= sorted_pair_len(r, s);
}

FinStructure expand_brs(const CodingTree& tree,
                        const std::vector<NodeRef>& antichain) {
  for (size_t i = 0; i < antichain.size(); ++i)
    for (size_t j = i + 1; j < antichain.size(); ++j)
      if (tree.is_ancestor(antichain[i], antichain[j]) ||
          tree.is_ancestor(antichain[j], antichain[i]))
        throw DomainError("antichain nodes must be pairwise incomparable");

  std::vector<NodeRef> nodes = antichain;
  std::sort(nodes.begin(), nodes.end());
  int n = static_cast<int>(nodes.size());
  const LanguagePtr& base_lang = tree.source().spec.language;

  std::vector<RelationSymbol> symbols = base_lang->symbols();
  symbols.push_back(RelationSymbol{"lex", 2});
  symbols.push_back(RelationSymbol{"Q", 4});
  auto lang = std::make_shared<Language>(symbols, /*validate=*/false);

  std::vector<int> verts;
  for (const auto& r : nodes) verts.push_back(tree.node(r).coding);
  FinStructure rep = induced(tree.source().prefix, verts);

  FinStructure out(lang, n);
  for (int s = 0; s < base_lang->size(); ++s)
    for (const auto& t : rep.tuples(s)) out.add_tuple(s, t);
  int lex_sym = base_lang->size();
  int q_sym = base_lang->size() + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && tree.compare(nodes[i], nodes[j]) < 0)
        out.add_tuple(lex_sym, {i, j});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d)
            continue;
          if (tree.compare(nodes[a], nodes[b]) < 0 &&
              tree.compare(nodes[c], nodes[d]) < 0 &&
              tree.meet(nodes[a], nodes[b]).level <=
                  tree.meet(nodes[c], nodes[d]).level)
            out.add_tuple(q_sym, {a, b, c, d});
        }
  return out;
}

}  // namespace brd
