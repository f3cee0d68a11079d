#include "brd/enumerated.hpp"

#include <algorithm>

namespace brd {

FinStructure EnumeratedLimit::initial_segment(int m) const {
  std::vector<int> verts(m);
  for (int i = 0; i < m; ++i) verts[i] = i;
  return induced(prefix, verts);
}

OrderedStructure EnumeratedLimit::segment_ordered(int m) const {
  OrderedStructure o;
  o.base = initial_segment(m);
  o.enumeration.resize(m);
  for (int i = 0; i < m; ++i) o.enumeration[i] = i;
  return o;
}

namespace {

OrderedStructure identity_ordered(const FinStructure& s) {
  OrderedStructure o;
  o.base = s;
  o.enumeration.resize(s.size());
  for (int i = 0; i < s.size(); ++i) o.enumeration[i] = i;
  return o;
}

// Does some vertex v_i, i >= m, realize tau over K_m?
bool demand_realized(const EnumeratedLimit& e, int m, const OneType& tau) {
  for (int i = m; i < e.size(); ++i)
    if (vertex_type_over_segment(e.prefix, i, m) == tau) return true;
  return false;
}

}  // namespace

EnumeratedLimit build_enumerated(const ClassSpec& c, int n) {
  if (n < 1) throw DomainError("prefix size must be at least 1");
  EnumeratedLimit e;
  e.spec = c;
  e.prefix = FinStructure(c.language, 0);

  while (e.size() < n) {
    bool served = false;
    for (int m = 0; m <= e.size() && !served; ++m) {
      auto demands = realizable_types(c, e.segment_ordered(m), TreeMode::S);
      for (size_t r = 0; r < demands.size(); ++r) {
        if (demand_realized(e, m, demands[r])) continue;
        // serve: new vertex realizes the lex-least realizable completion of
        // demands[r] over the whole current prefix
        auto completions =
            realizable_types(c, identity_ordered(e.prefix), TreeMode::S);
        const OneType* chosen = nullptr;
        for (const auto& t : completions)
          if (t.restrict_to(m) == demands[r]) {
            chosen = &t;
            break;
          }
        if (!chosen)
          throw DomainError("demand lost its completion; class not closed");
        int v = e.size();
        e.prefix = extend_by_type(e.prefix, chosen->atoms);
        e.schedule_log.push_back(
            ScheduleEntry{m, static_cast<int>(r), v});
        served = true;
        break;
      }
    }
    if (!served)
      throw DomainError("no unserved demand found; cannot grow prefix");
  }
  return e;
}

EnumeratedLimit load_enumerated(const ClassSpec& c, const FinStructure& s) {
  EnumeratedLimit e;
  e.spec = c;
  e.prefix = normalize(c, s);
  for (int m = 1; m <= e.size(); ++m)
    if (!contains(c, e.initial_segment(m)))
      throw DomainError("initial segment of size " + std::to_string(m) +
                        " is not in the class");
  return e;
}

DemandReport verify_extension_demands(const EnumeratedLimit& e) {
  DemandReport rep;
  for (int m = 0; m < e.size(); ++m) {
    auto demands =
        realizable_types(e.spec, e.segment_ordered(m), TreeMode::S);
    DemandLevel lvl;
    lvl.level = m;
    lvl.total = static_cast<int>(demands.size());
    for (const auto& t : demands)
      if (demand_realized(e, m, t)) ++lvl.realized;
    rep.levels.push_back(lvl);
    if (lvl.realized == lvl.total && rep.horizon == m - 1) rep.horizon = m;
  }
  return rep;
}

}  // namespace brd
