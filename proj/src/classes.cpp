#include "brd/classes.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace brd {

bool ClassSpec::has_transitive() const {
  for (const auto& ax : axioms)
    if (ax.kind == AxiomKind::LinearOrder) return true;
  return false;
}

std::optional<Axiom> ClassSpec::axiom_on(int sym, AxiomKind kind) const {
  for (const auto& ax : axioms)
    if (ax.sym == sym && ax.kind == kind) return ax;
  return std::nullopt;
}

bool ClassSpec::symbol_symmetric(int sym) const {
  return axiom_on(sym, AxiomKind::Symmetric).has_value() ||
         axiom_on(sym, AxiomKind::Equivalence).has_value();
}

TreeMode ClassSpec::auto_mode() const {
  if (sfap || !has_unary() || !has_transitive()) return TreeMode::S;
  return TreeMode::U;
}

namespace {

void all_permutations(const Tuple& t, std::vector<Tuple>& out) {
  Tuple s = t;
  std::sort(s.begin(), s.end());
  do {
    out.push_back(s);
  } while (std::next_permutation(s.begin(), s.end()));
}

}  // namespace

std::string membership_failure(const ClassSpec& c, const FinStructure& a) {
  if (!(*c.language == *a.language())) return "language mismatch";
  for (const auto& ax : c.axioms) {
    switch (ax.kind) {
      case AxiomKind::Symmetric: {
        for (const auto& t : a.tuples(ax.sym)) {
          std::vector<Tuple> perms;
          all_permutations(t, perms);
          for (const auto& p : perms)
            if (!a.has_tuple(ax.sym, p))
              return "symmetry fails for " + c.language->symbol(ax.sym).name;
        }
        break;
      }
      case AxiomKind::LinearOrder: {
        int s = ax.sym;
        for (int x = 0; x < a.size(); ++x)
          for (int y = x + 1; y < a.size(); ++y) {
            bool xy = a.has_tuple(s, {x, y}), yx = a.has_tuple(s, {y, x});
            if (xy == yx)
              return "linear order totality/antisymmetry fails for " +
                     c.language->symbol(s).name;
          }
        for (const auto& t : a.tuples(s))
          for (const auto& u : a.tuples(s))
            if (t[1] == u[0] && t[0] != u[1] &&
                !a.has_tuple(s, {t[0], u[1]}))
              return "linear order transitivity fails for " +
                     c.language->symbol(s).name;
        break;
      }
      case AxiomKind::Equivalence: {
        int s = ax.sym;
        for (const auto& t : a.tuples(s))
          if (!a.has_tuple(s, {t[1], t[0]}))
            return "equivalence symmetry fails for " +
                   c.language->symbol(s).name;
        for (const auto& t : a.tuples(s))
          for (const auto& u : a.tuples(s))
            if (t[1] == u[0] && t[0] != u[1] &&
                !a.has_tuple(s, {t[0], u[1]}))
              return "equivalence transitivity fails for " +
                     c.language->symbol(s).name;
        break;
      }
      case AxiomKind::Convex: {
        int e = ax.sym, lt = ax.other;
        for (const auto& t : a.tuples(e))
          for (int z = 0; z < a.size(); ++z) {
            if (z == t[0] || z == t[1]) continue;
            if (a.has_tuple(lt, {t[0], z}) && a.has_tuple(lt, {z, t[1]}) &&
                !a.has_tuple(e, {z, t[0]}))
              return "convexity fails for " + c.language->symbol(e).name;
          }
        break;
      }
      case AxiomKind::Coarsens: {
        for (const auto& t : a.tuples(ax.other))
          if (!a.has_tuple(ax.sym, t))
            return c.language->symbol(ax.sym).name + " fails to coarsen " +
                   c.language->symbol(ax.other).name;
        break;
      }
      case AxiomKind::TotalAsymmetric: {
        int s = ax.sym;
        for (int x = 0; x < a.size(); ++x)
          for (int y = x + 1; y < a.size(); ++y) {
            bool xy = a.has_tuple(s, {x, y}), yx = a.has_tuple(s, {y, x});
            if (xy == yx)
              return "total asymmetry fails for " +
                     c.language->symbol(s).name;
          }
        break;
      }
      case AxiomKind::UnaryPartition: {
        for (int v = 0; v < a.size(); ++v)
          if (a.unaries_of(v).size() != 1)
            return "unary partition fails at vertex " + std::to_string(v);
        break;
      }
    }
  }
  for (const auto& f : c.forbidden)
    if (embeds(f, a)) return "forbidden substructure embeds";
  return "";
}

bool contains(const ClassSpec& c, const FinStructure& a) {
  return membership_failure(c, a).empty();
}

FinStructure normalize(const ClassSpec& c, const FinStructure& a) {
  FinStructure out = a;
  for (const auto& ax : c.axioms) {
    if (ax.kind != AxiomKind::Symmetric && ax.kind != AxiomKind::Equivalence)
      continue;
    for (const auto& t : a.tuples(ax.sym)) {
      std::vector<Tuple> perms;
      all_permutations(t, perms);
      for (auto& p : perms) out.add_tuple(ax.sym, std::move(p));
    }
  }
  return out;
}

FinStructure extend_by_type(const FinStructure& base,
                            const std::vector<Atom>& x_atoms) {
  int n = base.size();
  FinStructure out(base.language(), n + 1);
  for (int s = 0; s < base.language()->size(); ++s)
    for (const auto& t : base.tuples(s)) out.add_tuple(s, t);
  for (const auto& a : x_atoms) {
    Tuple t = a.args;
    for (int& v : t)
      if (v == kVarX) v = n;
    out.add_tuple(a.sym, std::move(t));
  }
  return out;
}

bool one_point_extension_ok(const ClassSpec& c, const FinStructure& base,
                            const std::vector<Atom>& x_atoms) {
  return contains(c, extend_by_type(base, x_atoms));
}

bool two_point_extension_ok(const ClassSpec& c, const FinStructure& base,
                            const std::vector<Atom>& u_atoms,
                            const std::vector<Atom>& x_atoms,
                            const std::vector<Atom>& xu_atoms) {
  int n = base.size();  // u becomes vertex n, x becomes n+1
  FinStructure out(base.language(), n + 2);
  for (int s = 0; s < base.language()->size(); ++s)
    for (const auto& t : base.tuples(s)) out.add_tuple(s, t);
  auto inst = [&](const std::vector<Atom>& atoms, int xv, int uv) {
    for (const auto& a : atoms) {
      Tuple t = a.args;
      for (int& v : t) {
        if (v == kVarX)
          v = xv;
        else if (v == kPassVertex)
          v = uv;
      }
      out.add_tuple(a.sym, std::move(t));
    }
  };
  inst(u_atoms, n, -100);
  inst(x_atoms, n + 1, -100);
  inst(xu_atoms, n + 1, n);
  return contains(c, out);
}

// ---------------------------------------------------------------------------
// Assignment enumeration: the local decisions available for relating a new
// vertex x to a set of parameters, symbol by symbol, respecting symmetry.

namespace {

struct Slot {
  // Alternatives: each a set of atoms to add. Exactly one alternative picked.
  std::vector<std::vector<Atom>> choices;
};

std::vector<Tuple> arg_patterns(int arity, const std::vector<int>& params,
                                int newest) {
  // all arg tuples using kVarX exactly once, distinct params, containing
  // `newest`, drawn from params
  std::vector<Tuple> out;
  std::vector<int> pool = params;
  std::function<void(Tuple&)> rec = [&](Tuple& cur) {
    if (static_cast<int>(cur.size()) == arity) {
      bool has_x = false, has_new = false;
      std::set<int> seen;
      for (int v : cur) {
        if (v == kVarX) {
          if (has_x) return;
          has_x = true;
        } else {
          if (!seen.insert(v).second) return;
          if (v == newest) has_new = true;
        }
      }
      if (has_x && has_new) out.push_back(cur);
      return;
    }
    cur.push_back(kVarX);
    rec(cur);
    cur.back() = 0;
    for (int v : pool) {
      cur.back() = v;
      rec(cur);
    }
    cur.pop_back();
  };
  Tuple cur;
  rec(cur);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Group the atom patterns for symbol `sym` into decision units: orbits under
// permutation for symmetric symbols, singletons otherwise.
std::vector<std::vector<Atom>> atom_units(const ClassSpec& c, int sym,
                                          const std::vector<Tuple>& patterns) {
  std::vector<std::vector<Atom>> units;
  if (c.symbol_symmetric(sym)) {
    std::set<std::multiset<int>> seen;
    for (const auto& p : patterns) {
      std::multiset<int> key(p.begin(), p.end());
      if (!seen.insert(key).second) continue;
      std::vector<Atom> unit;
      std::vector<Tuple> perms;
      all_permutations(p, perms);
      for (auto& q : perms) unit.push_back(Atom{sym, q});
      units.push_back(std::move(unit));
    }
  } else {
    for (const auto& p : patterns) units.push_back({Atom{sym, p}});
  }
  return units;
}

// Decision slots for relating x to vertex `v` given earlier params 0..v.
std::vector<Slot> slots_for_vertex(const ClassSpec& c, int v) {
  std::vector<Slot> out;
  std::vector<int> params(v + 1);
  for (int i = 0; i <= v; ++i) params[i] = i;
  for (int sym = 0; sym < c.language->size(); ++sym) {
    int arity = c.language->symbol(sym).arity;
    if (arity < 2) continue;
    auto patterns = arg_patterns(arity, params, v);
    if (c.axiom_on(sym, AxiomKind::LinearOrder) ||
        c.axiom_on(sym, AxiomKind::TotalAsymmetric)) {
      // exactly one orientation of (x, v)
      Slot s;
      s.choices.push_back({Atom{sym, {kVarX, v}}});
      s.choices.push_back({Atom{sym, {v, kVarX}}});
      out.push_back(std::move(s));
      continue;
    }
    for (auto& unit : atom_units(c, sym, patterns)) {
      Slot s;
      s.choices.push_back({});
      s.choices.push_back(std::move(unit));
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

std::vector<OneType> realizable_types(const ClassSpec& c,
                                      const OrderedStructure& a,
                                      TreeMode mode) {
  FinStructure base = a.reordered();
  if (!contains(c, base)) throw DomainError("structure is not in the class");
  int n = base.size();
  bool s_mode_unaries = mode == TreeMode::S && c.has_unary();
  auto unary_syms = c.language->unary_symbols();

  std::vector<OneType> result;
  std::vector<Atom> acc;

  // Consistency of the current assignment over the prefix {0..v} (v = n-1
  // is the full check). In U mode realizability means some unary completion
  // lands in the class.
  auto prefix_ok = [&](int v) {
    std::vector<int> verts(v + 1);
    for (int i = 0; i <= v; ++i) verts[i] = i;
    FinStructure pre = v + 1 == n ? base : induced(base, verts);
    std::vector<Atom> restricted;
    for (const auto& at : acc) {
      bool inside = true;
      for (int z : at.args)
        if (z >= 0 && z > v) inside = false;
      if (inside) restricted.push_back(at);
    }
    if (mode == TreeMode::U && c.has_unary()) {
      for (int g : unary_syms) {
        auto with_g = restricted;
        with_g.push_back(Atom{g, {kVarX}});
        if (one_point_extension_ok(c, pre, with_g)) return true;
      }
      return false;
    }
    return one_point_extension_ok(c, pre, restricted);
  };

  auto emit = [&]() {
    OneType t;
    t.params = n;
    t.atoms = acc;
    t.normalize();
    result.push_back(std::move(t));
  };

  std::function<void(int)> per_vertex = [&](int v) {
    if (v == n) {
      emit();
      return;
    }
    auto slots = slots_for_vertex(c, v);
    std::function<void(size_t)> assign = [&](size_t si) {
      if (si == slots.size()) {
        if (prefix_ok(v)) per_vertex(v + 1);
        return;
      }
      for (const auto& choice : slots[si].choices) {
        size_t mark = acc.size();
        for (const auto& at : choice) acc.push_back(at);
        assign(si + 1);
        acc.resize(mark);
      }
    };
    assign(0);
  };

  auto start = [&]() {
    if (n == 0) {
      if (prefix_ok(-1)) emit();
    } else {
      per_vertex(0);
    }
  };

  if (s_mode_unaries) {
    for (int g : unary_syms) {
      acc.push_back(Atom{g, {kVarX}});
      start();
      acc.pop_back();
    }
  } else {
    start();
  }

  std::sort(result.begin(), result.end(),
            [](const OneType& x, const OneType& y) {
              return lex_compare(x, y) < 0;
            });
  return result;
}

bool is_r_irreducible(const FinStructure& f, int r) {
  if (r < 2) throw DomainError("irreducibility needs r >= 2");
  if (f.size() < r) return true;  // vacuous
  std::vector<int> subset(r);
  std::function<bool(int, int)> rec = [&](int idx, int from) -> bool {
    if (idx == r) {
      for (int s = 0; s < f.language()->size(); ++s) {
        if (f.language()->symbol(s).arity < r) continue;
        for (const auto& t : f.tuples(s)) {
          bool all = true;
          for (int i = 0; i < r; ++i)
            if (std::find(t.begin(), t.end(), subset[i]) == t.end()) {
              all = false;
              break;
            }
          if (all) return true;
        }
      }
      return false;
    }
    for (int v = from; v < f.size(); ++v) {
      subset[idx] = v;
      if (!rec(idx + 1, v + 1)) return false;
    }
    return true;
  };
  return rec(0, 0);
}

// ---------------------------------------------------------------------------
// Structure enumeration.

namespace {

// All class members on exactly `size` vertices extending `prefix` on its
// first |prefix| vertices (labeled). Deterministic order.
std::vector<FinStructure> extensions_of(const ClassSpec& c,
                                        const FinStructure& prefix, int size) {
  std::vector<FinStructure> out;
  auto unary_syms = c.language->unary_symbols();
  // grow vertex by vertex, reusing the slot machinery via extend_by_type
  std::function<void(const FinStructure&)> grow = [&](const FinStructure& s) {
    if (s.size() == size) {
      out.push_back(s);
      return;
    }
    OrderedStructure os;
    os.base = s;
    os.enumeration.resize(s.size());
    for (int i = 0; i < s.size(); ++i) os.enumeration[i] = i;
    for (const auto& t : realizable_types(c, os, TreeMode::S))
      grow(extend_by_type(s, t.atoms));
  };
  if (!contains(c, prefix)) return out;
  grow(prefix);
  return out;
}

}  // namespace

std::vector<FinStructure> enumerate_structures(const ClassSpec& c, int size) {
  FinStructure empty(c.language, 0);
  auto all = extensions_of(c, empty, size);
  std::map<std::string, FinStructure> canon;
  for (auto& s : all) canon.emplace(s.canonical_form(), s);
  std::vector<FinStructure> out;
  for (auto& [k, v] : canon) out.push_back(std::move(v));
  return out;
}

// ---------------------------------------------------------------------------
// SFAP checker.

namespace {

// The 1-type of vertex `v` of `s` over the parameter set `params` (listed in
// increasing order), with parameters renamed to their positions.
OneType type_of_vertex_over(const FinStructure& s, int v,
                            const std::vector<int>& params) {
  std::map<int, int> pos;
  for (size_t i = 0; i < params.size(); ++i) pos[params[i]] = i;
  OneType t;
  t.params = static_cast<int>(params.size());
  for (int sym = 0; sym < s.language()->size(); ++sym)
    for (const auto& tup : s.tuples(sym)) {
      bool uses_v = false, inside = true;
      Tuple args(tup.size());
      for (size_t i = 0; i < tup.size(); ++i) {
        if (tup[i] == v) {
          uses_v = true;
          args[i] = kVarX;
        } else if (pos.count(tup[i])) {
          args[i] = pos[tup[i]];
        } else {
          inside = false;
          break;
        }
      }
      if (uses_v && inside) t.atoms.push_back(Atom{sym, args});
    }
  t.normalize();
  return t;
}

}  // namespace

SfapWitness sfap_instance(const ClassSpec& cls, const FinStructure& a,
                          const FinStructure& cext, const FinStructure& b,
                          const OneType& sigma, const OneType& tau,
                          bool* holds) {
  int na = a.size();
  if (cext.size() != na + 2)
    throw DomainError("C must extend A by exactly two vertices");
  SfapWitness w;
  w.a = a;
  w.c = cext;
  w.b = b;
  w.sigma = sigma;
  w.tau = tau;
  w.d = extend_by_type(b, sigma.atoms);  // v' = vertex |B|
  int vprime = b.size();
  int wprime = b.size() + 1;
  // forced amalgam: D plus w' with tau over B and the (v,w)-relations of C
  FinStructure e(cls.language, b.size() + 2);
  for (int s = 0; s < cls.language->size(); ++s)
    for (const auto& t : w.d.tuples(s)) e.add_tuple(s, t);
  for (const auto& at : tau.atoms) {
    Tuple t = at.args;
    for (int& z : t)
      if (z == kVarX) z = wprime;
    e.add_tuple(at.sym, std::move(t));
  }
  // tuples of C involving both v (= na) and w (= na+1): transfer to v', w'
  for (int s = 0; s < cls.language->size(); ++s)
    for (const auto& t : cext.tuples(s)) {
      bool has_v = std::find(t.begin(), t.end(), na) != t.end();
      bool has_w = std::find(t.begin(), t.end(), na + 1) != t.end();
      if (!has_v || !has_w) continue;
      Tuple u(t.size());
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == na)
          u[i] = vprime;
        else if (t[i] == na + 1)
          u[i] = wprime;
        else
          u[i] = t[i];  // A-vertices keep their labels in B
      }
      e.add_tuple(s, std::move(u));
    }
  w.forced = e;
  std::string fail = membership_failure(cls, e);
  if (holds) *holds = fail.empty();
  if (!fail.empty()) w.explain = fail;
  return w;
}

SfapResult check_sfap(const ClassSpec& cls, int bound, int /*jobs*/) {
  if (bound > 7) throw DomainError("sfap bound capped at 7");
  if (bound < 3) throw DomainError("sfap bound must be at least 3");
  SfapResult res;
  res.bound = bound;

  for (int asize = 1; asize + 2 <= bound; ++asize) {
    for (const auto& a : enumerate_structures(cls, asize)) {
      std::vector<int> avars(asize);
      for (int i = 0; i < asize; ++i) avars[i] = i;
      for (const auto& cext : extensions_of(cls, a, asize + 2)) {
        OneType tpv = type_of_vertex_over(cext, asize, avars);
        OneType tpw = type_of_vertex_over(cext, asize + 1, avars);
        for (int bsize = asize; bsize <= bound; ++bsize) {
          for (const auto& b : extensions_of(cls, a, bsize)) {
            OrderedStructure ob;
            ob.base = b;
            ob.enumeration.resize(bsize);
            for (int i = 0; i < bsize; ++i) ob.enumeration[i] = i;
            auto types = realizable_types(cls, ob, TreeMode::S);
            std::vector<const OneType*> sig, tav;
            for (const auto& t : types) {
              if (t.restrict_to(asize) == tpv) sig.push_back(&t);
              if (t.restrict_to(asize) == tpw) tav.push_back(&t);
            }
            for (const OneType* s : sig)
              for (const OneType* t : tav) {
                ++res.configurations;
                bool holds = false;
                SfapWitness w = sfap_instance(cls, a, cext, b, *s, *t, &holds);
                if (!holds) {
                  res.pass = false;
                  res.witness = std::move(w);
                  return res;
                }
              }
          }
        }
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Class parsing and presets.

namespace {

struct ClassBuilder {
  std::string name;
  std::vector<RelationSymbol> symbols;
  std::vector<std::pair<std::string, std::vector<std::string>>> raw_axioms;
  std::vector<std::string> forbid_texts;
  bool ordered = false;

  int sym_index(const std::string& n) const {
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == n) return static_cast<int>(i);
    throw DomainError("unknown symbol '" + n + "' in class definition");
  }
};

void derive_metadata(ClassSpec& c) {
  bool any_order = false, any_equiv = false, any_tasym = false;
  for (const auto& ax : c.axioms) {
    if (ax.kind == AxiomKind::LinearOrder) any_order = true;
    if (ax.kind == AxiomKind::Equivalence) any_equiv = true;
    if (ax.kind == AxiomKind::TotalAsymmetric) any_tasym = true;
  }
  bool forb_irr = true, forb_3irr = true;
  for (const auto& f : c.forbidden) {
    if (!is_r_irreducible(f, 2)) forb_irr = false;
    if (!is_r_irreducible(f, 3)) forb_3irr = false;
  }

  if (!any_order && !any_equiv && !any_tasym) {
    c.free_amalgamation = forb_irr;
    c.sfap = forb_irr && forb_3irr;
    c.sdap_plus = c.sfap;
    c.family = c.sfap ? ConstructionFamily::SfapLike : ConstructionFamily::None;
    return;
  }
  if (any_tasym && !any_order && !any_equiv && c.forbidden.empty()) {
    // unrestricted with a totality constraint (tournament-like)
    c.free_amalgamation = false;
    c.sfap = false;
    c.sdap_plus = true;
    c.family = ConstructionFamily::SfapLike;
    return;
  }
  if (any_order && !any_equiv && !any_tasym) {
    // is the order the only non-unary symbol?
    int non_unary = 0, order_syms = 0;
    for (int i = 0; i < c.language->size(); ++i)
      if (c.language->symbol(i).arity >= 2) {
        ++non_unary;
        if (c.axiom_on(i, AxiomKind::LinearOrder)) ++order_syms;
      }
    if (non_unary == order_syms && order_syms == 1 && c.forbidden.empty()) {
      c.sdap_plus = true;
      c.family = ConstructionFamily::LoLike;
      return;
    }
    // ordered expansion: order + an SFAP reduct
    if (order_syms == 1 && forb_irr && forb_3irr) {
      c.sdap_plus = true;
      c.family = ConstructionFamily::OrderedSfap;
      return;
    }
  }
  if (any_order && any_equiv && !any_tasym && c.forbidden.empty()) {
    // convexly ordered equivalence hierarchy
    bool all_convex = true;
    for (const auto& ax : c.axioms)
      if (ax.kind == AxiomKind::Equivalence &&
          !c.axiom_on(ax.sym, AxiomKind::Convex))
        all_convex = false;
    if (all_convex) {
      c.sdap_plus = true;
      c.family = ConstructionFamily::CoeLike;
      return;
    }
  }
  c.family = ConstructionFamily::None;
}

ClassSpec finish(ClassBuilder& b) {
  if (b.ordered) b.symbols.push_back(RelationSymbol{"<", 2});
  ClassSpec c;
  c.name = b.name;
  c.language = std::make_shared<Language>(b.symbols);
  if (b.ordered)
    b.raw_axioms.push_back({"linear", {b.symbols.back().name}});
  // unary partition is implied by the convention whenever unaries exist
  if (c.language->has_unary())
    c.axioms.push_back(Axiom{AxiomKind::UnaryPartition, -1, -1});
  for (const auto& [kind, args] : b.raw_axioms) {
    Axiom ax;
    ax.sym = b.sym_index(args.at(0));
    if (kind == "symmetric")
      ax.kind = AxiomKind::Symmetric;
    else if (kind == "linear")
      ax.kind = AxiomKind::LinearOrder;
    else if (kind == "equivalence")
      ax.kind = AxiomKind::Equivalence;
    else if (kind == "totalasym")
      ax.kind = AxiomKind::TotalAsymmetric;
    else if (kind == "convex") {
      ax.kind = AxiomKind::Convex;
      ax.sym = b.sym_index(args.at(0));
      ax.other = b.sym_index(args.at(1));
    } else if (kind == "coarsens") {
      ax.kind = AxiomKind::Coarsens;
      ax.sym = b.sym_index(args.at(0));
      ax.other = b.sym_index(args.at(1));
    } else {
      throw DomainError("unknown axiom '" + kind + "'");
    }
    c.axioms.push_back(ax);
  }
  for (const auto& txt : b.forbid_texts) {
    FinStructure f = parse_structure(txt, c.language);
    c.forbidden.push_back(normalize(c, f));
  }
  derive_metadata(c);
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"rado",   "tournament", "digraph", "unrestricted", "k3free",
          "bipartite", "npartite", "hyper3",  "q",            "qn",
          "qq",     "coen",       "coenp"};
}

ClassSpec preset_class(const std::string& name_with_args) {
  std::string name = name_with_args;
  std::vector<int> args;
  auto paren = name.find('(');
  if (paren != std::string::npos) {
    std::string inside = name.substr(paren + 1);
    if (inside.empty() || inside.back() != ')')
      throw DomainError("malformed preset arguments in '" + name + "'");
    inside.pop_back();
    name = name.substr(0, paren);
    std::stringstream ss(inside);
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stoi(tok));
  }

  ClassBuilder b;
  b.name = name_with_args;
  auto need = [&](size_t k) {
    if (args.size() != k)
      throw DomainError("preset '" + name + "' expects " + std::to_string(k) +
                        " argument(s)");
  };

  if (name == "rado") {
    b.symbols = {{"E", 2}};
    b.raw_axioms = {{"symmetric", {"E"}}};
  } else if (name == "tournament") {
    b.symbols = {{"T", 2}};
    b.raw_axioms = {{"totalasym", {"T"}}};
  } else if (name == "digraph") {
    b.symbols = {{"D", 2}};
    b.forbid_texts = {"vertices 2; D:(0,1)(1,0)"};
  } else if (name == "unrestricted") {
    b.symbols = {{"D", 2}};
  } else if (name == "k3free") {
    b.symbols = {{"E", 2}};
    b.raw_axioms = {{"symmetric", {"E"}}};
    b.forbid_texts = {"vertices 3; E:(0,1)(1,0)(0,2)(2,0)(1,2)(2,1)"};
  } else if (name == "bipartite" || name == "npartite") {
    int parts = 2;
    if (name == "npartite") {
      need(1);
      parts = args[0];
      if (parts < 2) throw DomainError("npartite needs n >= 2");
    }
    for (int i = 0; i < parts; ++i)
      b.symbols.push_back({"U" + std::to_string(i), 1});
    b.symbols.push_back({"E", 2});
    b.raw_axioms = {{"symmetric", {"E"}}};
    for (int i = 0; i < parts; ++i) {
      std::string u = "U" + std::to_string(i);
      b.forbid_texts.push_back("vertices 2; " + u + ":(0)(1); E:(0,1)(1,0)");
    }
  } else if (name == "hyper3") {
    b.symbols = {{"R", 3}};
    b.raw_axioms = {{"symmetric", {"R"}}};
  } else if (name == "q") {
    b.symbols = {{"<", 2}};
    b.raw_axioms = {{"linear", {"<"}}};
  } else if (name == "qn") {
    need(1);
    if (args[0] < 2) throw DomainError("qn needs n >= 2");
    for (int i = 0; i < args[0]; ++i)
      b.symbols.push_back({"P" + std::to_string(i), 1});
    b.symbols.push_back({"<", 2});
    b.raw_axioms = {{"linear", {"<"}}};
  } else if (name == "qq") {
    b.symbols = {{"<", 2}, {"E", 2}};
    b.raw_axioms = {{"linear", {"<"}},
                    {"equivalence", {"E"}},
                    {"convex", {"E", "<"}}};
  } else if (name == "coen" || name == "coenp") {
    int n = 0, p = 0;
    if (name == "coen") {
      need(1);
      n = args[0];
    } else {
      need(2);
      n = args[0];
      p = args[1];
    }
    if (n < 1) throw DomainError("coen needs n >= 1");
    b.symbols.push_back({"<", 2});
    b.raw_axioms.push_back({"linear", {"<"}});
    for (int i = 0; i < n; ++i) {
      std::string e = "E" + std::to_string(i);
      b.symbols.push_back({e, 2});
      b.raw_axioms.push_back({"equivalence", {e}});
      b.raw_axioms.push_back({"convex", {e, "<"}});
      if (i > 0)
        b.raw_axioms.push_back(
            {"coarsens", {e, "E" + std::to_string(i - 1)}});
    }
    if (p > 0) {
      if (p < 2) throw DomainError("coenp needs p >= 2");
      for (int i = 0; i < p; ++i)
        b.symbols.push_back({"P" + std::to_string(i), 1});
    }
  } else {
    throw DomainError("unknown preset '" + name + "'");
  }
  return finish(b);
}

namespace {

ClassSpec superpose(const ClassSpec& x, const ClassSpec& y,
                    const std::string& name) {
  std::vector<RelationSymbol> symbols = x.language->symbols();
  for (const auto& s : y.language->symbols()) symbols.push_back(s);
  ClassSpec c;
  c.name = name;
  c.language = std::make_shared<Language>(symbols);
  int off = x.language->size();
  c.axioms = x.axioms;
  for (auto ax : y.axioms) {
    if (ax.sym >= 0) ax.sym += off;
    if (ax.other >= 0) ax.other += off;
    c.axioms.push_back(ax);
  }
  auto lift = [&](const FinStructure& f, int offset) {
    FinStructure g(c.language, f.size());
    for (int s = 0; s < f.language()->size(); ++s)
      for (const auto& t : f.tuples(s)) g.add_tuple(s + offset, t);
    return g;
  };
  for (const auto& f : x.forbidden) c.forbidden.push_back(lift(f, 0));
  for (const auto& f : y.forbidden) c.forbidden.push_back(lift(f, off));
  derive_metadata(c);
  return c;
}

}  // namespace

ClassSpec parse_class(const std::string& text) {
  // preset shorthand
  {
    std::istringstream ss(text);
    std::string kw;
    ss >> kw;
    if (kw == "preset") {
      std::string rest;
      std::getline(ss, rest);
      rest.erase(0, rest.find_first_not_of(" \t"));
      rest.erase(rest.find_last_not_of(" \t\r\n") + 1);
      return preset_class(rest);
    }
  }

  // class IDENT { decl* }
  struct Lx {
    const std::string& t;
    size_t p = 0;
    int line = 1, col = 1;
    void adv() {
      if (t[p] == '\n') {
        ++line;
        col = 1;
      } else
        ++col;
      ++p;
    }
    void skip() {
      while (p < t.size()) {
        if (t[p] == '#') {
          while (p < t.size() && t[p] != '\n') adv();
        } else if (std::isspace(static_cast<unsigned char>(t[p])))
          adv();
        else
          break;
      }
    }
    bool eof() {
      skip();
      return p >= t.size();
    }
    char peek() {
      skip();
      return p < t.size() ? t[p] : '\0';
    }
    bool accept(char c) {
      skip();
      if (p < t.size() && t[p] == c) {
        adv();
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!accept(c))
        throw ParseError(std::string("expected '") + c + "'", line, col);
    }
    std::string word() {
      skip();
      size_t s = p;
      while (p < t.size() &&
             (std::isalnum(static_cast<unsigned char>(t[p])) || t[p] == '_' ||
              t[p] == '<' || t[p] == '>'))
        adv();
      if (s == p) throw ParseError("expected identifier", line, col);
      return t.substr(s, p - s);
    }
  } lx{text};

  std::string kw = lx.word();
  if (kw != "class") throw ParseError("expected 'class' or 'preset'", 1, 1);
  ClassBuilder b;
  b.name = lx.word();
  lx.expect('{');
  std::vector<ClassSpec> superposed;
  while (!lx.eof() && lx.peek() != '}') {
    std::string decl = lx.word();
    if (decl == "unary") {
      std::vector<std::string> names;
      names.push_back(lx.word());
      while (lx.accept(',')) names.push_back(lx.word());
      if (names.size() < 2)
        throw ParseError("unary declarations need at least two symbols",
                         lx.line, lx.col);
      for (auto& n : names) b.symbols.push_back({n, 1});
      lx.expect(';');
    } else if (decl == "binary" || decl == "ternary") {
      std::string n = lx.word();
      b.symbols.push_back({n, decl == "binary" ? 2 : 3});
      while (lx.peek() != ';') {
        std::string ax = lx.word();
        if (ax == "convex" || ax == "coarsens") {
          lx.expect('(');
          std::string other = lx.word();
          lx.expect(')');
          b.raw_axioms.push_back({ax, {n, other}});
        } else {
          b.raw_axioms.push_back({ax, {n}});
        }
      }
      lx.expect(';');
    } else if (decl == "forbid") {
      size_t start = lx.p;
      int depth = 0;
      while (lx.p < text.size()) {
        char c = text[lx.p];
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (c == ';' && depth == 0) break;
        lx.adv();
      }
      b.forbid_texts.push_back(text.substr(start, lx.p - start));
      lx.expect(';');
    } else if (decl == "superpose") {
      superposed.push_back(preset_class(lx.word()));
      lx.expect(';');
    } else if (decl == "ordered") {
      b.ordered = true;
      lx.expect(';');
    } else {
      throw ParseError("unknown declaration '" + decl + "'", lx.line, lx.col);
    }
  }
  lx.expect('}');
  ClassSpec c = finish(b);
  for (const auto& extra : superposed)
    c = superpose(c, extra, b.name);
  c.name = b.name;
  return c;
}

}  // namespace brd
