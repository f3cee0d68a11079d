#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brd/one_type.hpp"
#include "brd/structures.hpp"

namespace brd {

enum class AxiomKind {
  Symmetric,
  LinearOrder,
  Equivalence,
  Convex,        // Convex(E, <): classes of E are <-intervals
  Coarsens,      // Coarsens(Ej, Ei): Ei implies Ej
  TotalAsymmetric,
  UnaryPartition,
};

struct Axiom {
  AxiomKind kind;
  int sym = -1;    // primary symbol
  int other = -1;  // order symbol for Convex, finer symbol for Coarsens
};

// Which diagonal-subtree construction applies (dispatch for
// extract_diagonal). None means the class has no supported construction.
enum class ConstructionFamily { SfapLike, LoLike, CoeLike, OrderedSfap, None };

// A Fraisse-class description: axioms plus finitely many forbidden
// substructures, with metadata used for mode selection and construction
// dispatch.
struct ClassSpec {
  std::string name;
  LanguagePtr language;
  std::vector<Axiom> axioms;
  std::vector<FinStructure> forbidden;

  bool sfap = false;              // declared from the catalogue of theorems
  bool sdap_plus = false;         // likewise
  bool free_amalgamation = false;
  ConstructionFamily family = ConstructionFamily::None;

  bool has_transitive() const;  // a LINEAR_ORDER axiom is present
  bool has_unary() const { return language->has_unary(); }

  std::optional<Axiom> axiom_on(int sym, AxiomKind kind) const;
  bool symbol_symmetric(int sym) const;

  TreeMode auto_mode() const;
};

ClassSpec parse_class(const std::string& text);
ClassSpec preset_class(const std::string& name_with_args);
std::vector<std::string> preset_names();

// Membership: every axiom satisfied and no forbidden structure embeds.
bool contains(const ClassSpec& c, const FinStructure& a);
// First failing axiom / forbidden structure as a message, or empty.
std::string membership_failure(const ClassSpec& c, const FinStructure& a);

// Closes symmetric/equivalence relation sets under the permutations their
// axioms demand. Parse-time normalization for structure files.
FinStructure normalize(const ClassSpec& c, const FinStructure& a);

// All complete 1-types over the (reordered) structure whose one-point
// extension lies in the class, in lex order. In U mode the types live in the
// unary-free reduct and are realizable with at least one unary completion.
std::vector<OneType> realizable_types(const ClassSpec& c,
                                      const OrderedStructure& a,
                                      TreeMode mode = TreeMode::S);

// Does base + x, with x's positive atoms given, belong to the class?
bool one_point_extension_ok(const ClassSpec& c, const FinStructure& base,
                            const std::vector<Atom>& x_atoms);

// Joint two-point check: base + u + x with u's atoms over base, x's atoms
// over base, and the (x,u)-atoms given with kPassVertex naming u.
bool two_point_extension_ok(const ClassSpec& c, const FinStructure& base,
                            const std::vector<Atom>& u_atoms,
                            const std::vector<Atom>& x_atoms,
                            const std::vector<Atom>& xu_atoms);

// The one-point extension realized by a type (vertex n = x).
FinStructure extend_by_type(const FinStructure& base,
                            const std::vector<Atom>& x_atoms);

bool is_r_irreducible(const FinStructure& f, int r);

// One structure per isomorphism class of class members of exactly the given
// size, in canonical-form order.
std::vector<FinStructure> enumerate_structures(const ClassSpec& c, int size);

struct SfapWitness {
  FinStructure a;       // the base structure
  FinStructure c;       // a + two vertices v, w (the last two)
  FinStructure b;       // extension of a
  OneType sigma, tau;   // over b
  FinStructure d;       // b + v' realizing sigma
  FinStructure forced;  // the forced amalgam d + w'; not in the class
  std::string explain;
};

struct SfapResult {
  bool pass = true;
  int bound = 0;
  long long configurations = 0;
  std::optional<SfapWitness> witness;
};

// Exhaustively tests the free-amalgamation implication of SFAP over all
// A <= C with |C| = |A|+2 <= bound, B >= A with |B| <= bound, and realizable
// sigma, tau. The witness, when present, is the first counterexample in the
// deterministic enumeration order (lexicographically least).
SfapResult check_sfap(const ClassSpec& c, int bound, int jobs = 1);

// One SFAP configuration: builds the forced amalgam and checks membership.
// `cext` must extend `a` by exactly two vertices (the last two).
SfapWitness sfap_instance(const ClassSpec& cls, const FinStructure& a,
                          const FinStructure& cext, const FinStructure& b,
                          const OneType& sigma, const OneType& tau,
                          bool* holds);

}  // namespace brd
