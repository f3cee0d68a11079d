#include "brd/json_io.hpp"

#include <sstream>

#include "json.hpp"

namespace brd {

using nlohmann::json;

namespace {

const char* mode_name(TreeMode m) { return m == TreeMode::S ? "s" : "u"; }

}  // namespace

std::string to_json(const DegreeResult& r) {
  json j;
  j["class"] = r.class_name;
  j["structure"] = r.structure;
  j["mode"] = mode_name(r.mode);
  j["depth"] = r.depth;
  j["degree"] = r.degree;
  j["embedding_degree"] = r.embedding_degree;
  j["stabilized"] = r.stabilized;
  j["stabilization_margin"] = r.stabilization_margin;
  j["per_ordered_copy"] = json::array();
  for (const auto& pc : r.per_ordered_copy) {
    json e;
    e["order"] = pc.copy.serialize();
    e["count"] = pc.count;
    j["per_ordered_copy"].push_back(e);
  }
  j["descriptors"] = r.descriptors;
  j["oracle"] = {{"antichains_seen", r.oracle_stats.antichains_seen},
                 {"depth_warning", r.oracle_stats.depth_warning}};
  j["direct"] = {{"candidates", r.direct_stats.candidates},
                 {"pruned", r.direct_stats.pruned}};
  return j.dump(2);
}

std::string to_json(const SfapResult& r, const ClassSpec& cls) {
  json j;
  j["class"] = cls.name;
  j["bound"] = r.bound;
  j["pass"] = r.pass;
  j["configurations"] = r.configurations;
  j["free_amalgamation"] = cls.free_amalgamation;
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"A", w.a.serialize()},
                    {"C", w.c.serialize()},
                    {"B", w.b.serialize()},
                    {"sigma", w.sigma.serialize(*cls.language)},
                    {"tau", w.tau.serialize(*cls.language)},
                    {"D", w.d.serialize()},
                    {"forced", w.forced.serialize()},
                    {"reason", w.explain}};
  }
  return j.dump(2);
}

std::string to_json(const DemandReport& r) {
  json j;
  j["horizon"] = r.horizon;
  j["levels"] = json::array();
  for (const auto& l : r.levels)
    j["levels"].push_back(
        {{"level", l.level}, {"realized", l.realized}, {"total", l.total}});
  return j.dump(2);
}

std::string to_json(const ExperimentReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["depth"] = r.depth;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate();
  j["note"] = r.note;
  j["outcomes"] = json::array();
  for (const auto& o : r.outcomes) {
    json e;
    e["trial"] = o.trial;
    e["skipped"] = o.skipped;
    e["found"] = o.found;
    e["expected"] = o.expected;
    e["missing"] = o.missing;
    j["outcomes"].push_back(e);
  }
  return j.dump(2);
}

std::string to_json(const DiagonalReport& r) {
  json j;
  j["pass"] = r.pass;
  j["items"] = json::array();
  for (const auto& i : r.items)
    j["items"].push_back(
        {{"name", i.name}, {"pass", i.pass}, {"detail", i.detail}});
  return j.dump(2);
}

std::string tree_to_json(const CodingTree& tree) {
  const Language& lang = *tree.source().spec.language;
  json j;
  j["mode"] = mode_name(tree.mode());
  j["depth"] = tree.depth();
  j["levels"] = json::array();
  for (int n = 0; n < tree.level_count(); ++n) {
    json lvl = json::array();
    for (int i = 0; i < tree.level_size(n); ++i) {
      NodeRef r{n, i};
      const TreeNode& nd = tree.node(r);
      json e;
      e["id"] = "L" + std::to_string(n) + "N" + std::to_string(i);
      e["level"] = n;
      e["atoms"] = json::array();
      for (const auto& a : nd.type.atoms)
        e["atoms"].push_back(atom_to_string(a, lang));
      if (n > 0) e["parent"] = nd.parent;
      if (nd.coding >= 0) e["coding"] = nd.coding;
      if (nd.gamma >= 0) e["gamma"] = lang.symbol(nd.gamma).name;
      lvl.push_back(e);
    }
    j["levels"].push_back(lvl);
  }
  return j.dump(2);
}

std::string to_table(const DegreeResult& r) {
  std::ostringstream os;
  os << "class        " << r.class_name << "\n";
  os << "structure    " << r.structure << "\n";
  os << "mode         " << mode_name(r.mode) << "\n";
  os << "depth        " << r.depth << "\n";
  os << "degree T     " << r.degree;
  if (r.degree == 0) os << "   (warning: empty descriptor set)";
  os << "\n";
  os << "T * |Aut|    " << r.embedding_degree << "\n";
  os << "stabilized   " << (r.stabilized ? "yes" : "no")
     << "  (margin " << r.stabilization_margin << ")\n";
  os << "ordered copy counts:\n";
  for (const auto& pc : r.per_ordered_copy)
    os << "  " << pc.count << "  " << pc.copy.serialize() << "\n";
  os << "descriptors:\n";
  for (const auto& d : r.descriptors) os << "  " << d << "\n";
  return os.str();
}

std::string to_table(const ExperimentReport& r) {
  std::ostringstream os;
  os << r.experiment << ": " << r.successes << "/" << r.outcomes.size()
     << " trials complete (rate " << r.success_rate() << ", seed " << r.seed
     << ", depth " << r.depth << ")\n";
  os << "note: " << r.note << "\n";
  for (const auto& o : r.outcomes) {
    if (o.skipped) {
      os << "  trial " << o.trial << ": skipped (no admissible selection)\n";
      continue;
    }
    if (!o.missing.empty()) {
      os << "  trial " << o.trial << ": " << o.found << "/" << o.expected
         << " descriptors; missing:\n";
      for (const auto& m : o.missing) os << "    " << m << "\n";
    }
  }
  return os.str();
}

}  // namespace brd
