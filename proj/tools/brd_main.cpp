#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "brd/json_io.hpp"

namespace {

using namespace brd;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw DomainError("cannot write '" + out_path + "'");
  out << text;
}

ClassSpec load_class(const std::string& ref) {
  if (ref.rfind("preset:", 0) == 0) return preset_class(ref.substr(7));
  if (ref.rfind("file:", 0) == 0) return parse_class(read_file(ref.substr(5)));
  throw DomainError("class reference must be preset:<name> or file:<path>");
}

FinStructure load_structure(const std::string& path, const ClassSpec& cls) {
  FinStructure s = parse_structure(read_file(path), cls.language);
  return normalize(cls, s);
}

std::optional<TreeMode> mode_of(const std::string& m) {
  if (m == "s") return TreeMode::S;
  if (m == "u") return TreeMode::U;
  if (m == "auto" || m.empty()) return std::nullopt;
  throw DomainError("mode must be s, u or auto");
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("BRD_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

struct Common {
  std::string class_ref;
  std::string structure_path;
  int depth = 8;
  std::string mode = "auto";
  int jobs = 0;
  std::string format = "table";
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_structure) {
  cmd->add_option("--class", c.class_ref,
                  "class reference: preset:<name> or file:<path>")
      ->required();
  auto* s = cmd->add_option("--structure", c.structure_path,
                            "structure file (module structures grammar)");
  if (needs_structure) s->required();
  cmd->add_option("--depth", c.depth, "tree depth (ambient levels)");
  cmd->add_option("--mode", c.mode, "tree mode: s, u or auto");
  cmd->add_option("--jobs", c.jobs, "worker cap (default: cores, BRD_JOBS)");
  cmd->add_option("--format", c.format, "output format: table, json or dot");
  cmd->add_option("--out", c.out, "write output to a file");
  cmd->add_option("--seed", c.seed, "seed for randomized experiments");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"big Ramsey degrees of Fraisse limits via coding trees"};
  app.require_subcommand(1);

  Common c;
  int bound = 4;
  int rvalue = 2;
  int trials = 100;
  int target_size = 3;
  int horizon = 0;
  int colors = 2;
  int margin = 2;
  std::string check_kind;
  std::string enumerator = "oracle";
  std::string dot_path;
  std::string bigger_path;
  std::string coloring_name = "parity";

  auto* degree = app.add_subcommand("degree", "exact big Ramsey degree");
  add_common(degree, c, true);
  degree->add_option("--margin", margin, "stabilization margin");

  auto* types = app.add_subcommand("types", "similarity-type enumeration");
  add_common(types, c, true);
  types->add_option("--enumerator", enumerator, "oracle or direct");

  auto* treecmd =
      app.add_subcommand("tree", "build, extract the diagonal subtree, export");
  add_common(treecmd, c, false);
  treecmd->add_option("--dot", dot_path, "write the ambient tree as DOT");

  auto* check = app.add_subcommand("check", "sfap | irreducible");
  check->add_option("kind", check_kind, "sfap or irreducible")->required();
  add_common(check, c, false);
  check->add_option("--bound", bound, "sfap search bound (<= 7)");
  check->add_option("-r", rvalue, "irreducibility arity");

  auto* compare = app.add_subcommand("oracle-compare",
                                     "run both enumerators and diff");
  add_common(compare, c, true);

  auto* persist = app.add_subcommand("persist", "persistence sampling");
  add_common(persist, c, true);
  persist->add_option("--trials", trials, "number of sampled sub-selections");

  auto* comb = app.add_subcommand("comb", "find a comb for a structure");
  add_common(comb, c, true);

  auto* indiv = app.add_subcommand("indiv", "indivisibility search");
  add_common(indiv, c, false);
  indiv->add_option("--coloring", coloring_name,
                    "constant, parity or hash");
  indiv->add_option("--colors", colors, "number of colors");
  indiv->add_option("--target-size", target_size, "witness size");
  indiv->add_option("--horizon", horizon, "required demand horizon");

  auto* demo = app.add_subcommand("ordered-demo", "ordered Ramsey search");
  add_common(demo, c, true);
  demo->add_option("--bigger", bigger_path, "structure file for B'")
      ->required();
  demo->add_option("--coloring", coloring_name, "constant, parity or hash");
  demo->add_option("--colors", colors, "number of colors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ClassSpec cls = load_class(c.class_ref);
    int jobs = resolve_jobs(c.jobs);

    if (degree->parsed() || compare->parsed()) {
      FinStructure a = load_structure(c.structure_path, cls);
      DegreeResult r = big_ramsey_degree(cls, a, c.depth, margin, jobs,
                                         mode_of(c.mode));
      write_out(c.format == "json" ? to_json(r) : to_table(r), c.out);
      if (compare->parsed())
        std::cerr << "enumerators agree: " << r.degree << " descriptors\n";
      return 0;
    }

    if (types->parsed()) {
      FinStructure a = load_structure(c.structure_path, cls);
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      EnumerationStats st;
      std::set<SimDescriptor> ds;
      if (enumerator == "oracle")
        ds = enumerate_types_oracle(tree, a, &st, jobs);
      else if (enumerator == "direct")
        ds = enumerate_types_direct(tree, a, &st, jobs);
      else
        throw DomainError("enumerator must be oracle or direct");
      std::ostringstream os;
      os << ds.size() << " similarity types (" << enumerator << ")\n";
      for (const auto& d : ds) os << d.canonical(*cls.language) << "\n";
      write_out(os.str(), c.out);
      return 0;
    }

    if (treecmd->parsed()) {
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      if (!dot_path.empty()) write_out(export_dot(tree), dot_path);
      if (cls.family != ConstructionFamily::None) {
        DiagonalTree diag = extract_diagonal_partial(tree);
        DiagonalReport rep = validate_diagonal(diag);
        std::cerr << "diagonal subtree: " << diag.coding.size()
                  << " coding nodes, validation "
                  << (rep.pass ? "pass" : "FAIL") << "\n";
        if (c.format == "dot" && dot_path.empty())
          write_out(export_dot(diag), c.out);
        else if (c.format == "json")
          write_out(to_json(rep), c.out);
      } else {
        std::cerr << "no diagonal construction for this class\n";
      }
      if (c.format == "dot" && dot_path.empty() &&
          cls.family == ConstructionFamily::None)
        write_out(export_dot(tree), c.out);
      else if (c.format == "json" && cls.family == ConstructionFamily::None)
        write_out(tree_to_json(tree), c.out);
      return 0;
    }

    if (check->parsed()) {
      if (check_kind == "sfap") {
        SfapResult r = check_sfap(cls, bound, jobs);
        if (c.format == "json") {
          write_out(to_json(r, cls), c.out);
        } else {
          std::ostringstream os;
          os << "sfap implication over bound " << bound << ": "
             << (r.pass ? "pass" : "fail") << " (" << r.configurations
             << " configurations)";
          if (!cls.free_amalgamation)
            os << "\nnote: the class is not a free amalgamation class, so "
                  "the full property cannot hold";
          if (r.witness) {
            const auto& w = *r.witness;
            os << "\nwitness:\n  A      " << w.a.serialize() << "\n  C      "
               << w.c.serialize() << "\n  B      " << w.b.serialize()
               << "\n  sigma  " << w.sigma.serialize(*cls.language)
               << "\n  tau    " << w.tau.serialize(*cls.language)
               << "\n  D      " << w.d.serialize() << "\n  forced "
               << w.forced.serialize() << "\n  fails  " << w.explain;
          }
          write_out(os.str(), c.out);
        }
        return r.pass ? 0 : 1;
      }
      if (check_kind == "irreducible") {
        FinStructure f = load_structure(c.structure_path, cls);
        bool irr = is_r_irreducible(f, rvalue);
        write_out(std::string(irr ? "true" : "false"), c.out);
        return 0;
      }
      throw DomainError("check kind must be sfap or irreducible");
    }

    if (persist->parsed()) {
      FinStructure a = load_structure(c.structure_path, cls);
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      ExperimentReport r = persistence_sample(tree, a, trials, c.seed);
      write_out(c.format == "json" ? to_json(r) : to_table(r), c.out);
      return 0;
    }

    if (comb->parsed()) {
      FinStructure b = load_structure(c.structure_path, cls);
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      auto found = find_comb(tree, identity_order(b));
      std::ostringstream os;
      if (found) {
        os << "comb:";
        for (const auto& r : *found)
          os << " c" << tree.node(r).coding;
      } else {
        os << "not found at depth " << c.depth;
      }
      write_out(os.str(), c.out);
      return 0;
    }

    if (indiv->parsed()) {
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      auto coloring = builtin_coloring(coloring_name, c.depth, colors, c.seed);
      IndivResult r =
          indivisibility_search(tree, coloring, target_size, horizon);
      std::ostringstream os;
      if (r.found) {
        os << "monochromatic set (color " << r.color << ", horizon "
           << r.horizon << "):";
        for (int v : r.vertices) os << " v" << v;
      } else {
        os << "no witness at depth " << c.depth << " (" << r.note << ")";
      }
      write_out(os.str(), c.out);
      return 0;
    }

    if (demo->parsed()) {
      FinStructure a = load_structure(c.structure_path, cls);
      FinStructure b = load_structure(bigger_path, cls);
      EnumeratedLimit e = build_enumerated(cls, c.depth);
      CodingTree tree = build_coding_tree_auto(e, c.depth, mode_of(c.mode));
      auto coloring = builtin_coloring(coloring_name, c.depth, colors, c.seed);
      OrderedDemoResult r = ordered_ramsey_demo(tree, identity_order(a),
                                                identity_order(b), coloring);
      std::ostringstream os;
      if (r.found) {
        os << "monochromatic comb copy (color " << r.color << "):";
        for (int v : r.witness_vertices) os << " v" << v;
      } else {
        os << "not found at depth " << c.depth << " (" << r.note << ")";
      }
      write_out(os.str(), c.out);
      return 0;
    }

    throw DomainError("no subcommand handled");
  } catch (const EnumeratorMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
