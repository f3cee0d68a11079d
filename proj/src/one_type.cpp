#include "brd/one_type.hpp"

#include <algorithm>
#include <sstream>

namespace brd {

namespace {
bool block_less(const Atom& a, const Atom& b) {
  int ba = OneType::block_of(a), bb = OneType::block_of(b);
  if (ba != bb) return ba < bb;
  return a < b;
}
}  // namespace

void OneType::normalize() {
  std::sort(atoms.begin(), atoms.end(), block_less);
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

std::vector<Atom> OneType::block(int i) const {
  std::vector<Atom> out;
  for (const auto& a : atoms)
    if (block_of(a) == i) out.push_back(a);
  return out;
}

OneType OneType::restrict_to(int m) const {
  OneType out;
  out.params = m;
  for (const auto& a : atoms)
    if (block_of(a) <= m) out.atoms.push_back(a);
  return out;
}

int lex_compare(const OneType& a, const OneType& b) {
  int m = std::min(a.params, b.params);
  size_t ia = 0, ib = 0;
  for (int lvl = 0; lvl <= m; ++lvl) {
    // walk this level's blocks in parallel; the first differing atom decides,
    // with the type containing it preceding
    while (true) {
      bool ea = ia >= a.atoms.size() || OneType::block_of(a.atoms[ia]) > lvl;
      bool eb = ib >= b.atoms.size() || OneType::block_of(b.atoms[ib]) > lvl;
      if (ea && eb) break;
      if (ea) return 1;   // b contains an atom a lacks at this level
      if (eb) return -1;  // a contains an atom b lacks
      const Atom& x = a.atoms[ia];
      const Atom& y = b.atoms[ib];
      if (x == y) {
        ++ia;
        ++ib;
        continue;
      }
      return x < y ? -1 : 1;
    }
  }
  if (a.params == b.params) return 0;
  return a.params < b.params ? -1 : 1;
}

std::string atom_to_string(const Atom& a, const Language& lang) {
  std::ostringstream os;
  os << lang.symbol(a.sym).name << "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) os << ",";
    if (a.args[i] == kVarX)
      os << "x";
    else if (a.args[i] == kPassVertex)
      os << "*";
    else
      os << "v" << a.args[i];
  }
  os << ")";
  return os.str();
}

std::string OneType::serialize(const Language& lang) const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) os << " ";
    os << atom_to_string(atoms[i], lang);
  }
  os << "}";
  return os.str();
}

OneType vertex_type_over_segment(const FinStructure& s, int v, int m,
                                 TreeMode mode) {
  OneType t;
  t.params = m;
  for (int sym = 0; sym < s.language()->size(); ++sym) {
    if (mode == TreeMode::U && s.language()->symbol(sym).arity == 1) continue;
    for (const auto& tup : s.tuples(sym)) {
      bool uses = false, inside = true;
      Tuple args(tup.size());
      for (size_t k = 0; k < tup.size(); ++k) {
        if (tup[k] == v) {
          uses = true;
          args[k] = kVarX;
        } else if (tup[k] < m) {
          args[k] = tup[k];
        } else {
          inside = false;
          break;
        }
      }
      if (uses && inside) t.atoms.push_back(Atom{sym, args});
    }
  }
  t.normalize();
  return t;
}

}  // namespace brd
