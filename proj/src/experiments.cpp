#include "brd/experiments.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace brd {

namespace {

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(trial) + 1};
  return std::mt19937_64(seq);
}

// Does the substructure on `verts` contain an induced copy of `pattern`?
bool contains_induced(const FinStructure& prefix,
                      const std::vector<int>& verts,
                      const FinStructure& pattern) {
  if (pattern.size() == 0) return true;
  return embeds(pattern, induced(prefix, verts));
}

std::set<SimDescriptor> descriptors_inside(const CodingTree& tree,
                                           const FinStructure& a,
                                           const std::vector<int>& allowed) {
  int n = a.size();
  std::set<SimDescriptor> out;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int idx, int from) {
    if (idx == n) {
      std::vector<int> verts(pick.begin(), pick.end());
      if (!isomorphic(induced(tree.source().prefix, verts), a)) return;
      std::vector<NodeRef> nodes;
      for (int v : pick) nodes.push_back(tree.coding_node(v));
      if (!diagonal_antichain(tree, nodes)) return;
      out.insert(descriptor_of(tree, nodes));
      return;
    }
    for (size_t k = from; k < allowed.size(); ++k) {
      pick[idx] = allowed[k];
      rec(idx + 1, static_cast<int>(k) + 1);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

ExperimentReport persistence_sample(const CodingTree& tree,
                                    const FinStructure& a, int trials,
                                    std::uint64_t seed, int pattern_cap) {
  ExperimentReport rep;
  rep.experiment = "persistence";
  rep.depth = tree.depth();
  rep.trials = trials;
  rep.seed = seed;
  rep.note =
      "finite analogue: sampled sub-selections at fixed depth, not infinite "
      "subcopies";

  auto expected = enumerate_types_oracle(tree, a);
  std::vector<std::string> expected_keys;
  for (const auto& d : expected)
    expected_keys.push_back(d.canonical(*tree.source().spec.language));

  int depth = tree.coding_count();
  int cap = std::min(pattern_cap, depth);
  FinStructure pattern = tree.source().initial_segment(cap);

  for (int t = 0; t < trials; ++t) {
    TrialOutcome out;
    out.trial = t;
    out.expected = static_cast<int>(expected.size());
    auto rng = trial_rng(seed, t);

    std::vector<int> sel;
    bool have = false;
    for (int attempt = 0; attempt < 64 && !have; ++attempt) {
      sel.clear();
      for (int v = 0; v < depth; ++v)
        if (rng() & 1) sel.push_back(v);
      have = static_cast<int>(sel.size()) >= a.size() &&
             contains_induced(tree.source().prefix, sel, pattern);
    }
    if (!have) {
      out.skipped = true;
      rep.outcomes.push_back(out);
      continue;
    }

    auto got = descriptors_inside(tree, a, sel);
    std::set<std::string> got_keys;
    for (const auto& d : got)
      got_keys.insert(d.canonical(*tree.source().spec.language));
    for (const auto& k : expected_keys) {
      if (got_keys.count(k))
        ++out.found;
      else
        out.missing.push_back(k);
    }
    if (out.found == out.expected) ++rep.successes;
    rep.outcomes.push_back(out);
  }
  if (rep.successes <
      static_cast<int>(rep.outcomes.size()) -
          static_cast<int>(std::count_if(rep.outcomes.begin(),
                                         rep.outcomes.end(),
                                         [](const TrialOutcome& o) {
                                           return o.skipped;
                                         })))
    rep.note += "; misses usually mean the depth is too shallow - retry "
                "with a deeper tree";
  return rep;
}

std::optional<std::vector<NodeRef>> find_comb(const CodingTree& tree,
                                              const OrderedStructure& b) {
  int n = b.base.size();
  int depth = tree.coding_count();
  FinStructure want = b.reordered();
  std::vector<NodeRef> chosen;
  std::vector<int> verts;

  std::function<bool(int, int)> rec = [&](int idx, int from) -> bool {
    if (idx == n) return true;
    for (int v = from; v < depth; ++v) {
      NodeRef cand = tree.coding_node(v);
      bool ok = true;
      for (int s = 0; s < idx && ok; ++s) {
        if (tree.is_ancestor(chosen[s], cand) ||
            tree.is_ancestor(cand, chosen[s]))
          ok = false;
        // comb: increasing length must mean increasing lex order
        else if (tree.compare(chosen[s], cand) >= 0)
          ok = false;
      }
      if (ok) {
        // represented structure must extend the reordered prefix of b
        std::vector<int> vs = verts;
        vs.push_back(v);
        std::vector<int> pat(idx + 1);
        for (int i = 0; i <= idx; ++i) pat[i] = i;
        if (!(induced(tree.source().prefix, vs) == induced(want, pat)))
          ok = false;
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
  if (rec(0, 0)) return chosen;
  return std::nullopt;
}

OrderedDemoResult ordered_ramsey_demo(const CodingTree& tree,
                                      const OrderedStructure& aprime,
                                      const OrderedStructure& bprime,
                                      const VertexColoring& coloring) {
  OrderedDemoResult res;
  res.note = "finite analogue: first monochromatic comb copy at this depth";
  FinStructure awant = aprime.reordered();
  FinStructure bwant = bprime.reordered();
  if (!embeds(awant, bwant))
    throw DomainError("A' must embed into B'");

  int depth = tree.coding_count();
  int nb = bwant.size();
  int na = awant.size();

  // color of an ordered copy of A' given by its vertex set (increasing)
  auto copy_color = [&](const std::vector<int>& verts) -> int {
    long long h = 0;
    for (int v : verts) h = h * 1315423911ll + coloring[v] + 1;
    return static_cast<int>(((h % 7919) + 7919) % 7919);
  };

  std::vector<int> verts;
  std::function<bool(int, int)> rec = [&](int idx, int from) -> bool {
    if (idx == nb) {
      // every ordered copy of A' inside must have one color
      std::vector<int> sub(na);
      std::function<bool(int, int, std::optional<int>&)> walk =
          [&](int i, int start, std::optional<int>& color) -> bool {
        if (i == na) {
          std::vector<int> vs(na);
          for (int k = 0; k < na; ++k) vs[k] = verts[sub[k]];
          if (!(induced(tree.source().prefix, vs) == awant)) return true;
          int c = copy_color(vs);
          if (!color) color = c;
          return *color == c;
        }
        for (int p = start; p < nb; ++p) {
          sub[i] = p;
          if (!walk(i + 1, p + 1, color)) return false;
        }
        return true;
      };
      std::optional<int> color;
      if (!walk(0, 0, color)) return false;
      res.found = true;
      res.witness_vertices = verts;
      res.color = color.value_or(-1);
      return true;
    }
    for (int v = from; v < depth; ++v) {
      NodeRef cand = tree.coding_node(v);
      bool ok = true;
      for (int s = 0; s < idx && ok; ++s) {
        NodeRef prev = tree.coding_node(verts[s]);
        if (tree.is_ancestor(prev, cand) || tree.is_ancestor(cand, prev))
          ok = false;
        else if (tree.compare(prev, cand) >= 0)
          ok = false;
      }
      if (ok) {
        std::vector<int> vs = verts;
        vs.push_back(v);
        std::vector<int> pat(idx + 1);
        for (int i = 0; i <= idx; ++i) pat[i] = i;
        if (!(induced(tree.source().prefix, vs) == induced(bwant, pat)))
          ok = false;
      }
      if (!ok) continue;
      verts.push_back(v);
      if (rec(idx + 1, v + 1)) return true;
      verts.pop_back();
    }
    return false;
  };
  rec(0, 0);
  return res;
}

IndivResult indivisibility_search(const CodingTree& tree,
                                  const VertexColoring& coloring,
                                  int target_size, int horizon) {
  IndivResult res;
  res.note = "finite analogue: best-effort witness at this depth";
  int depth = tree.coding_count();
  int colors = 0;
  for (int v = 0; v < depth; ++v) colors = std::max(colors, coloring[v] + 1);

  for (int c = 0; c < colors && !res.found; ++c) {
    std::vector<int> pool;
    for (int v = 0; v < depth; ++v)
      if (coloring[v] == c) pool.push_back(v);
    if (static_cast<int>(pool.size()) < target_size) continue;

    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int from) -> bool {
      if (static_cast<int>(pick.size()) == target_size) {
        EnumeratedLimit sub;
        sub.spec = tree.source().spec;
        sub.prefix = induced(tree.source().prefix, pick);
        for (int m = 1; m <= sub.size(); ++m)
          if (!contains(sub.spec, sub.initial_segment(m))) return false;
        DemandReport rep = verify_extension_demands(sub);
        if (rep.horizon >= horizon) {
          res.found = true;
          res.color = c;
          res.vertices = pick;
          res.horizon = rep.horizon;
          return true;
        }
        return false;
      }
      for (size_t k = from; k < pool.size(); ++k) {
        pick.push_back(pool[k]);
        if (rec(static_cast<int>(k) + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    rec(0);
  }
  return res;
}

VertexColoring builtin_coloring(const std::string& name, int depth,
                                int colors, std::uint64_t seed) {
  VertexColoring out(depth, 0);
  if (colors < 1) throw DomainError("colorings need at least one color");
  if (name == "constant") {
    return out;
  } else if (name == "parity") {
    for (int v = 0; v < depth; ++v) out[v] = v % std::max(colors, 2);
  } else if (name == "hash") {
    std::mt19937_64 rng(seed);
    for (int v = 0; v < depth; ++v)
      out[v] = static_cast<int>(rng() % colors);
  } else {
    throw DomainError("unknown coloring '" + name + "'");
  }
  return out;
}

}  // namespace brd
