#pragma once

#include <string>
#include <vector>

#include "brd/classes.hpp"
#include "brd/structures.hpp"

namespace brd {

struct ScheduleEntry {
  int stage = 0;       // demand level m
  int type_index = 0;  // lex rank of the demanded type over K_m
  int vertex = 0;      // vertex that served it
};

// A deterministic finite prefix of an enumerated Fraisse limit: the universe
// is {0..N-1} in omega-order (enumeration = identity).
struct EnumeratedLimit {
  ClassSpec spec;
  FinStructure prefix;
  std::vector<ScheduleEntry> schedule_log;  // empty for user-loaded prefixes

  int size() const { return prefix.size(); }
  FinStructure initial_segment(int m) const;
  OrderedStructure segment_ordered(int m) const;
  std::string serialize() const { return prefix.serialize(); }
};

// Demands (m, tau) are served in lexicographic (m, lex-rank) order, skipping
// demands already realized by a vertex v_i with i >= m; each new vertex
// realizes the lex-least realizable completion of the scheduled type over
// the current prefix. Same (C, N) always yields the identical structure.
EnumeratedLimit build_enumerated(const ClassSpec& c, int n);

// Wraps a user-supplied structure, vertex index = omega position. Initial
// segments must all lie in the class.
EnumeratedLimit load_enumerated(const ClassSpec& c, const FinStructure& s);

struct DemandLevel {
  int level = 0;
  int realized = 0;
  int total = 0;
};

struct DemandReport {
  int horizon = -1;  // largest m with every level j <= m fully realized
  std::vector<DemandLevel> levels;
};

DemandReport verify_extension_demands(const EnumeratedLimit& e);

}  // namespace brd
