#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brd/errors.hpp"

namespace brd {

struct RelationSymbol {
  std::string name;
  int arity = 2;
};

// A finite relational signature. Symbol order is declaration order and is
// load-bearing: the lexicographic node order on coding trees compares atoms
// symbol-major in this order.
class Language {
 public:
  Language() = default;
  explicit Language(std::vector<RelationSymbol> symbols, bool validate = true);

  int size() const { return static_cast<int>(symbols_.size()); }
  const RelationSymbol& symbol(int i) const { return symbols_[i]; }
  const std::vector<RelationSymbol>& symbols() const { return symbols_; }
  std::optional<int> index_of(const std::string& name) const;

  std::vector<int> unary_symbols() const;
  bool has_unary() const;
  int max_arity() const;

  bool operator==(const Language& o) const;

 private:
  std::vector<RelationSymbol> symbols_;
};

using LanguagePtr = std::shared_ptr<const Language>;
using Tuple = std::vector<int>;

// A finite structure on universe {0..n-1}. Tuples are stored as written:
// symmetry is a class axiom, not a structure property. No tuple may repeat
// an entry (loopless convention).
class FinStructure {
 public:
  FinStructure() = default;
  FinStructure(LanguagePtr lang, int size);

  const LanguagePtr& language() const { return lang_; }
  int size() const { return size_; }

  void add_tuple(int sym, Tuple t);
  bool has_tuple(int sym, const Tuple& t) const;
  const std::vector<Tuple>& tuples(int sym) const { return rels_[sym]; }
  int tuple_count() const;

  // Unary type of a vertex: the set of unary symbols it satisfies.
  std::vector<int> unaries_of(int v) const;
  // Throws DomainError unless every vertex satisfies exactly one unary
  // (vacuous when the language has no unary symbols).
  void check_unary_partition() const;

  // Deterministic serialization; equal strings iff equal labeled structures.
  std::string serialize() const;
  // Canonical form under vertex relabeling (min serialization over S_n).
  std::string canonical_form() const;

  FinStructure relabel(const std::vector<int>& image) const;

  bool operator==(const FinStructure& o) const;

 private:
  LanguagePtr lang_;
  int size_ = 0;
  std::vector<std::vector<Tuple>> rels_;  // per symbol, sorted, unique
};

// A structure together with an enumeration of its universe: enumeration[i]
// is the vertex placed i-th in the omega-order.
struct OrderedStructure {
  FinStructure base;
  std::vector<int> enumeration;

  // The base relabeled so that vertex i is the i-th enumerated vertex.
  FinStructure reordered() const;
  std::string serialize() const;
};

FinStructure parse_structure(const std::string& text, LanguagePtr lang);

// Substructure induced on S, relabeled by the increasing bijection
// S -> {0..|S|-1}.
FinStructure induced(const FinStructure& a, const std::vector<int>& verts);

// All injections A -> B preserving and reflecting every relation, in
// lexicographic order of the image tuple.
std::vector<std::vector<int>> find_embeddings(const FinStructure& a,
                                              const FinStructure& b);
bool embeds(const FinStructure& a, const FinStructure& b);
std::vector<std::vector<int>> automorphisms(const FinStructure& a);
bool isomorphic(const FinStructure& a, const FinStructure& b);

// One representative per isomorphism class of ordered expansions of A;
// |result| = n!/|Aut(A)|. Deterministic (lex-least enumeration per class).
std::vector<OrderedStructure> ordered_copies(const FinStructure& a);

// True iff the enumeration-order-preserving bijection is an isomorphism.
bool omega_isomorphic(const OrderedStructure& a, const OrderedStructure& b);

inline OrderedStructure identity_order(const FinStructure& s) {
  OrderedStructure o;
  o.base = s;
  o.enumeration.resize(s.size());
  for (int i = 0; i < s.size(); ++i) o.enumeration[i] = i;
  return o;
}

}  // namespace brd
