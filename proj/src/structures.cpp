#include "brd/structures.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace brd {

Language::Language(std::vector<RelationSymbol> symbols, bool validate)
    : symbols_(std::move(symbols)) {
  if (!validate) return;
  std::set<std::string> names;
  int unary = 0, higher = 0;
  for (const auto& s : symbols_) {
    if (!names.insert(s.name).second)
      throw DomainError("duplicate relation symbol '" + s.name + "'");
    if (s.arity < 1 || s.arity > 3)
      throw DomainError("relation symbol '" + s.name +
                        "' must have arity 1, 2 or 3");
    if (s.arity == 1)
      ++unary;
    else
      ++higher;
  }
  if (higher == 0)
    throw DomainError("language needs at least one symbol of arity >= 2");
  if (unary == 1)
    throw DomainError(
        "a language with unary symbols needs at least two of them");
}

std::optional<int> Language::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::vector<int> Language::unary_symbols() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (symbols_[i].arity == 1) out.push_back(i);
  return out;
}

bool Language::has_unary() const { return !unary_symbols().empty(); }

int Language::max_arity() const {
  int m = 0;
  for (const auto& s : symbols_) m = std::max(m, s.arity);
  return m;
}

bool Language::operator==(const Language& o) const {
  if (size() != o.size()) return false;
  for (int i = 0; i < size(); ++i)
    if (symbols_[i].name != o.symbols_[i].name ||
        symbols_[i].arity != o.symbols_[i].arity)
      return false;
  return true;
}

FinStructure::FinStructure(LanguagePtr lang, int size)
    : lang_(std::move(lang)), size_(size), rels_(lang_->size()) {
  if (size < 0) throw DomainError("negative universe size");
}

void FinStructure::add_tuple(int sym, Tuple t) {
  const auto& rs = lang_->symbol(sym);
  if (static_cast<int>(t.size()) != rs.arity)
    throw DomainError("arity mismatch for '" + rs.name + "'");
  std::set<int> seen;
  for (int v : t) {
    if (v < 0 || v >= size_)
      throw DomainError("vertex " + std::to_string(v) + " out of range");
    if (!seen.insert(v).second)
      throw DomainError("tuple repeats a vertex (loops are not allowed)");
  }
  auto& vec = rels_[sym];
  auto it = std::lower_bound(vec.begin(), vec.end(), t);
  if (it == vec.end() || *it != t) vec.insert(it, std::move(t));
}

bool FinStructure::has_tuple(int sym, const Tuple& t) const {
  const auto& vec = rels_[sym];
  return std::binary_search(vec.begin(), vec.end(), t);
}

int FinStructure::tuple_count() const {
  int n = 0;
  for (const auto& v : rels_) n += static_cast<int>(v.size());
  return n;
}

std::vector<int> FinStructure::unaries_of(int v) const {
  std::vector<int> out;
  for (int s : lang_->unary_symbols())
    if (has_tuple(s, {v})) out.push_back(s);
  return out;
}

void FinStructure::check_unary_partition() const {
  if (!lang_->has_unary()) return;
  for (int v = 0; v < size_; ++v)
    if (unaries_of(v).size() != 1)
      throw DomainError("vertex " + std::to_string(v) +
                        " must satisfy exactly one unary relation");
}

std::string FinStructure::serialize() const {
  std::ostringstream os;
  os << "vertices " << size_;
  for (int s = 0; s < lang_->size(); ++s) {
    if (rels_[s].empty()) continue;
    os << "; " << lang_->symbol(s).name << ":";
    for (const auto& t : rels_[s]) {
      os << "(";
      for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ")";
    }
  }
  return os.str();
}

FinStructure FinStructure::relabel(const std::vector<int>& image) const {
  FinStructure out(lang_, size_);
  for (int s = 0; s < lang_->size(); ++s)
    for (const auto& t : rels_[s]) {
      Tuple u(t.size());
      for (size_t i = 0; i < t.size(); ++i) u[i] = image[t[i]];
      out.add_tuple(s, std::move(u));
    }
  return out;
}

std::string FinStructure::canonical_form() const {
  std::vector<int> perm(size_);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best = serialize();
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::string s = relabel(perm).serialize();
    if (s < best) best = std::move(s);
  }
  return best;
}

bool FinStructure::operator==(const FinStructure& o) const {
  return size_ == o.size_ && *lang_ == *o.lang_ && rels_ == o.rels_;
}

FinStructure OrderedStructure::reordered() const {
  std::vector<int> image(enumeration.size());
  for (size_t i = 0; i < enumeration.size(); ++i) image[enumeration[i]] = i;
  return base.relabel(image);
}

std::string OrderedStructure::serialize() const {
  std::ostringstream os;
  os << reordered().serialize() << " | order";
  return os.str();
}

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool eof() {
    skip();
    return pos >= text.size();
  }

  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", line, col);
  }

  std::string ident() {
    skip();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_' || text[pos] == '<' || text[pos] == '>'))
      advance();
    if (start == pos) throw ParseError("expected identifier", line, col);
    return text.substr(start, pos - start);
  }

  int integer() {
    skip();
    size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos])))
      advance();
    if (start == pos) throw ParseError("expected integer", line, col);
    return std::stoi(text.substr(start, pos - start));
  }

  bool keyword(const std::string& kw) {
    skip();
    if (text.compare(pos, kw.size(), kw) == 0) {
      size_t after = pos + kw.size();
      if (after < text.size() &&
          (std::isalnum(static_cast<unsigned char>(text[after])) ||
           text[after] == '_'))
        return false;
      for (size_t i = 0; i < kw.size(); ++i) advance();
      return true;
    }
    return false;
  }
};

}  // namespace

FinStructure parse_structure_body(Lexer& lx, LanguagePtr lang) {
  if (!lx.keyword("vertices"))
    throw ParseError("expected 'vertices'", lx.line, lx.col);
  int n = lx.integer();
  FinStructure out(lang, n);
  while (lx.accept(';')) {
    if (lx.eof() || lx.peek() == '}') break;
    std::string name = lx.ident();
    auto sym = lang->index_of(name);
    if (!sym)
      throw ParseError("unknown relation symbol '" + name + "'", lx.line,
                       lx.col);
    lx.expect(':');
    do {
      lx.expect('(');
      Tuple t;
      t.push_back(lx.integer());
      while (lx.accept(',')) t.push_back(lx.integer());
      lx.expect(')');
      out.add_tuple(*sym, std::move(t));
    } while (lx.peek() == '(');
  }
  return out;
}

FinStructure parse_structure(const std::string& text, LanguagePtr lang) {
  Lexer lx(text);
  FinStructure out;
  if (lx.keyword("structure")) {
    lx.ident();
    lx.expect('{');
    out = parse_structure_body(lx, std::move(lang));
    lx.expect('}');
  } else {
    out = parse_structure_body(lx, std::move(lang));
  }
  if (!lx.eof())
    throw ParseError("trailing input after structure", lx.line, lx.col);
  out.check_unary_partition();
  return out;
}

FinStructure induced(const FinStructure& a, const std::vector<int>& verts) {
  std::vector<int> sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> image(a.size(), -1);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= a.size())
      throw DomainError("vertex " + std::to_string(sorted[i]) +
                        " out of range");
    image[sorted[i]] = static_cast<int>(i);
  }
  FinStructure out(a.language(), static_cast<int>(sorted.size()));
  for (int s = 0; s < a.language()->size(); ++s)
    for (const auto& t : a.tuples(s)) {
      Tuple u;
      u.reserve(t.size());
      bool inside = true;
      for (int v : t) {
        if (image[v] < 0) {
          inside = false;
          break;
        }
        u.push_back(image[v]);
      }
      if (inside) out.add_tuple(s, std::move(u));
    }
  return out;
}

namespace {

// Partial-map check: all tuples of `a` fully inside dom(map) must map to
// tuples of `b`, and preimages of b-tuples inside the image must be a-tuples.
bool extension_consistent(const FinStructure& a, const FinStructure& b,
                          const std::vector<int>& map, int just_mapped) {
  for (int s = 0; s < a.language()->size(); ++s) {
    int arity = a.language()->symbol(s).arity;
    // check every tuple position pattern touching just_mapped
    std::vector<int> idx(arity, 0);
    // iterate over all a-side tuples containing just_mapped with mapped args
    for (const auto& t : a.tuples(s)) {
      bool uses = false, total = true;
      Tuple image(t.size());
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == just_mapped) uses = true;
        if (map[t[i]] < 0) {
          total = false;
          break;
        }
        image[i] = map[t[i]];
      }
      if (uses && total && !b.has_tuple(s, image)) return false;
    }
    // reflect: b-tuples fully inside the current image must pull back
    std::vector<int> inv(b.size(), -1);
    for (int v = 0; v < a.size(); ++v)
      if (map[v] >= 0) inv[map[v]] = v;
    for (const auto& t : b.tuples(s)) {
      bool uses = false, total = true;
      Tuple pre(t.size());
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == map[just_mapped]) uses = true;
        if (inv[t[i]] < 0) {
          total = false;
          break;
        }
        pre[i] = inv[t[i]];
      }
      if (uses && total && !a.has_tuple(s, pre)) return false;
    }
  }
  return true;
}

void embed_search(const FinStructure& a, const FinStructure& b, int next,
                  std::vector<int>& map, std::vector<bool>& used,
                  std::vector<std::vector<int>>& out, bool first_only) {
  if (first_only && !out.empty()) return;
  if (next == a.size()) {
    out.push_back(map);
    return;
  }
  for (int w = 0; w < b.size(); ++w) {
    if (used[w]) continue;
    map[next] = w;
    used[w] = true;
    if (extension_consistent(a, b, map, next))
      embed_search(a, b, next + 1, map, used, out, first_only);
    used[w] = false;
    map[next] = -1;
  }
}

}  // namespace

std::vector<std::vector<int>> find_embeddings(const FinStructure& a,
                                              const FinStructure& b) {
  if (!(*a.language() == *b.language()))
    throw DomainError("embedding requires matching languages");
  std::vector<std::vector<int>> out;
  std::vector<int> map(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  embed_search(a, b, 0, map, used, out, false);
  std::sort(out.begin(), out.end());
  return out;
}

bool embeds(const FinStructure& a, const FinStructure& b) {
  if (!(*a.language() == *b.language()))
    throw DomainError("embedding requires matching languages");
  if (a.size() > b.size()) return false;
  std::vector<std::vector<int>> out;
  std::vector<int> map(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  embed_search(a, b, 0, map, used, out, true);
  return !out.empty();
}

std::vector<std::vector<int>> automorphisms(const FinStructure& a) {
  return find_embeddings(a, a);
}

bool isomorphic(const FinStructure& a, const FinStructure& b) {
  return a.size() == b.size() && a.tuple_count() == b.tuple_count() &&
         embeds(a, b);
}

std::vector<OrderedStructure> ordered_copies(const FinStructure& a) {
  int n = a.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto auts = automorphisms(a);
  std::set<std::vector<int>> seen;
  std::vector<OrderedStructure> out;
  do {
    if (seen.count(perm)) continue;
    out.push_back(OrderedStructure{a, perm});
    // orbit of this enumeration under Aut(A): g applied vertexwise
    for (const auto& g : auts) {
      std::vector<int> other(n);
      for (int i = 0; i < n; ++i) other[i] = g[perm[i]];
      seen.insert(std::move(other));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool omega_isomorphic(const OrderedStructure& a, const OrderedStructure& b) {
  if (!(*a.base.language() == *b.base.language()))
    throw DomainError("omega-isomorphism requires matching languages");
  if (a.base.size() != b.base.size()) return false;
  return a.reordered() == b.reordered();
}

}  // namespace brd
