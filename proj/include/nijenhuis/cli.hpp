#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "nsalg.hpp"

namespace nij {

inline constexpr int report_version = 1;

struct CommandResult {
  int exit_code = 0;
  std::string out;  // machine-readable report
  std::string err;  // human summary
};

namespace cli {

struct Options {
  std::string command;
  std::string file;
  std::string pair_file;
  std::string complex = "cone-reduced";
  std::size_t max_degree = 3;
  std::size_t max_arity = 0;
  unsigned power = 1;
  std::optional<unsigned long> seed;
  std::string format = "report";
};

/// Named verification results plus a command-specific payload.
struct Outcome {
  std::vector<std::pair<std::string, Report>> checks;
  json result = json::object();
  std::vector<std::string> notes;
  bool failed = false;
  std::optional<Document> raw_document;

  void check(const std::string& name, Report r) {
    failed = failed || !r.ok();
    checks.emplace_back(name, std::move(r));
  }
};

inline std::string basename(const std::string& path) { return std::filesystem::path(path).filename().string(); }

inline json cocycle_json(const Cocycle2& z) {
  return {{"chi", multimap_json(z.chi)}, {"f", matrix_json(z.f_part.to_matrix())}};
}

inline json pair_json(const AutoPair& p) { return {{"alpha", matrix_json(p.alpha)}, {"beta", matrix_json(p.beta)}}; }

inline json optional_matrix(const std::optional<Matrix>& m) { return m ? matrix_json(*m) : json(nullptr); }

inline NijBimodule bimodule_or_adjoint(const Document& doc, const NijAlgebra& na, Outcome& o) {
  if (doc.has_nij_bimodule()) return doc.nij_bimodule();
  o.notes.push_back("no Nijenhuis bimodule declared; using the adjoint bimodule");
  return adjoint_bimodule(na);
}

inline Document base_of(const Document& doc) {
  Document out;
  out.algebra = doc.algebra;
  out.op = doc.op;
  out.bimodule = doc.bimodule;
  out.bimodule_op = doc.bimodule_op;
  return out;
}

inline const Extension& require_extension(const Document& doc) {
  if (!doc.extension) throw StructureError("document declares no extension");
  return *doc.extension;
}

inline AutoPair require_pair(const Document& doc, const std::optional<Document>& pair_doc) {
  if (pair_doc && pair_doc->pair) return *pair_doc->pair;
  if (doc.pair) return *doc.pair;
  throw StructureError("no automorphism pair given (use --pair or a 'pair' field)");
}

// ---------------------------------------------------------------------------------------------

inline void run_verify(const Document& doc, const Options&, Outcome& o) {
  if (doc.algebra) {
    if (doc.op) o.check("nijenhuis-algebra", verify_nij_algebra(doc.nij_algebra()));
    else o.check("algebra", verify_algebra(*doc.algebra));
  }
  if (doc.bimodule) {
    if (doc.op && doc.bimodule_op) o.check("nijenhuis-bimodule", verify_nij_bimodule(doc.nij_algebra(), doc.nij_bimodule()));
    else o.check("bimodule", verify_bimodule(*doc.algebra, *doc.bimodule));
  }
  if (!doc.deformations.empty()) {
    json flags = json::array();
    for (std::size_t i = 0; i < doc.deformations.size(); ++i) {
      const auto& x = doc.deformations[i];
      o.check("deformation-" + std::to_string(i), detail::truncated_laws(doc.nij_algebra(), x.mu1.to_tensor3(), x.n1));
      bool inf = check_infinitesimal(doc.nij_algebra(), x.mu1, x.n1);
      o.failed = o.failed || !inf;
      flags.push_back(inf);
    }
    o.result["infinitesimal"] = flags;
  }
  if (doc.cocycle && doc.has_nij_algebra() && doc.has_nij_bimodule()) {
    CochainComplex c = cone_reduced_complex(doc.nij_algebra(), doc.nij_bimodule(), 2);
    bool closed = is_cocycle(c, 2, doc.cocycle->to_vector());
    o.failed = o.failed || !closed;
    o.result["cocycle_closed"] = closed;
  }
  if (doc.extension) o.check("extension", verify_extension(*doc.extension));
  if (doc.extension && doc.pair) {
    o.check("auto-pair", verify_auto_pair(*doc.extension, *doc.pair));
    o.check("compatible-pair", verify_compatible(*doc.extension, *doc.pair));
  }
  if (doc.two_term) {
    if (doc.homotopy_op) o.check("homotopy-nijenhuis", verify_homotopy_nij(*doc.two_term, *doc.homotopy_op));
    else o.check("two-term-a-infinity", verify_two_term(*doc.two_term));
  }
  if (doc.graded) {
    o.check("a-infinity", verify_graded_ainf(*doc.graded));
    if (doc.graded_op) o.check("strict-homotopy-nijenhuis", verify_strict_hn(*doc.graded, *doc.graded_op));
  }
  if (o.checks.empty() && o.result.empty()) o.notes.push_back("document declares nothing to verify");
}

inline void run_cohomology(const Document& doc, const Options& opt, Outcome& o) {
  ComplexKind kind = parse_kind(opt.complex);
  if (!doc.algebra) throw StructureError("document declares no algebra");
  NijAlgebra na{*doc.algebra, doc.op ? *doc.op : Matrix(doc.algebra->dim(), doc.algebra->dim())};
  if (!doc.op && kind != ComplexKind::hochschild) throw StructureError("complex '" + opt.complex + "' needs 'operator'");
  NijBimodule nb = bimodule_or_adjoint(doc, na, o);
  CochainComplex c = build_complex(kind, {na, nb}, opt.max_degree);
  CohomologyReport r = cohomology(c);
  json degrees = json::array(), betti = json::array();
  for (const auto& h : r.degrees) {
    degrees.push_back({{"degree", h.degree}, {"dim", h.dim}, {"rank", h.rank}, {"nullity", h.nullity}, {"betti", h.betti}});
    betti.push_back(h.betti);
  }
  o.result = {{"complex", kind_name(kind)}, {"max_degree", opt.max_degree}, {"degrees", degrees}, {"betti", betti}};
  if (!doc.cochains.empty()) {
    json cs = json::array();
    for (const auto& nc : doc.cochains) {
      bool closed = is_cocycle(c, nc.degree, nc.values);
      json entry = {{"name", nc.name}, {"degree", nc.degree}, {"cocycle", closed}};
      if (closed) {
        auto w = coboundary_witness(c, nc.degree, nc.values);
        entry["coboundary"] = w.has_value();
        entry["witness"] = w ? vector_json(*w) : json(nullptr);
      }
      cs.push_back(entry);
    }
    o.result["cochains"] = cs;
  }
}

inline void run_les(const Document& doc, const Options& opt, Outcome& o) {
  NijAlgebra na = doc.nij_algebra();
  NijBimodule nb = bimodule_or_adjoint(doc, na, o);
  LesReport r = les_report(na, nb, opt.max_degree);
  json nodes = json::array();
  for (const auto& n : r.nodes)
    nodes.push_back({{"space", n.space},
                     {"degree", n.degree},
                     {"dim", n.dim},
                     {"rank_in", n.rank_in},
                     {"rank_out", n.rank_out},
                     {"composite_zero", n.composite_zero},
                     {"exact", n.exact()}});
  o.result = {{"max_degree", opt.max_degree}, {"nodes", nodes}, {"exact", r.exact()}};
  o.notes.insert(o.notes.end(), r.notes.begin(), r.notes.end());
  o.failed = !r.exact();
}

inline void run_deform(const Document& doc, const Options& opt, Outcome& o) {
  NijAlgebra na = doc.nij_algebra();
  o.check("nijenhuis-algebra", verify_nij_algebra(na));
  if (o.failed) return;
  o.result["power"] = opt.power;
  o.result["deformed_algebra"] = algebra_json(deformed_algebra(na, opt.power));
  if (doc.has_nij_bimodule()) {
    o.check("nijenhuis-bimodule", verify_nij_bimodule(na, doc.nij_bimodule()));
    if (o.failed) return;
    o.result["deformed_bimodule"] = bimodule_json(deformed_bimodule(na, doc.nij_bimodule(), opt.power));
  }
  json flags = json::array();
  std::vector<bool> ok;
  for (const auto& x : doc.deformations) {
    ok.push_back(check_infinitesimal(na, x.mu1, x.n1));
    flags.push_back(static_cast<bool>(ok.back()));
    o.failed = o.failed || !ok.back();
  }
  o.result["infinitesimal"] = flags;
  if (doc.deformations.size() >= 2 && ok[0] && ok[1]) {
    const auto &x = doc.deformations[0], &y = doc.deformations[1];
    auto phi = deformation_equivalence(na, x.mu1, x.n1, y.mu1, y.n1);
    o.result["equivalent"] = phi.has_value();
    o.result["phi1"] = optional_matrix(phi);
  }
}

inline Cocycle2 seeded_cocycle(const NijAlgebra& na, const NijBimodule& nb, unsigned long seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::uniform_int_distribution<int> coeff(-2, 2);
  Vector v(cone_reduced_matrix(na, nb, 2).cols());
  for (const auto& k : kernel_basis(cone_reduced_matrix(na, nb, 2))) v = vector_add(v, vector_scale(Scalar(coeff(rng)), k));
  return Cocycle2::from_vector(na.dim(), nb.dim(), v);
}

inline void run_extend(const Document& doc, const Options& opt, Outcome& o) {
  NijAlgebra na = doc.nij_algebra();
  NijBimodule nb = doc.nij_bimodule();
  Cocycle2 z;
  if (doc.cocycle) {
    z = *doc.cocycle;
  } else if (opt.seed) {
    z = seeded_cocycle(na, nb, *opt.seed);
    o.notes.push_back("cocycle drawn from the degree-2 cocycle space with seed " + std::to_string(*opt.seed));
  } else {
    throw StructureError("no cocycle given (add a 'cocycle' field or pass --seed)");
  }
  bool closed = is_cocycle(cone_reduced_complex(na, nb, 2), 2, z.to_vector());
  o.result["cocycle_closed"] = closed;
  if (!closed) {
    o.failed = true;
    return;
  }
  Extension e = extension_from_cocycle(na, nb, z);
  o.check("extension", verify_extension(e));
  Document out = base_of(doc);
  out.cocycle = z;
  out.extension = e;
  o.result["document"] = document_json(out);
  o.raw_document = out;
}

inline void run_extract(const Document& doc, const Options&, Outcome& o) {
  const Extension& e = require_extension(doc);
  o.check("extension", verify_extension(e));
  if (o.failed) return;
  Cocycle2 z = cocycle_from_extension(e, e.section);
  o.result["cocycle"] = cocycle_json(z);
  if (doc.cocycle) {
    CochainComplex c = cone_reduced_complex(e.base, e.fiber, 2);
    auto w = coboundary_witness(c, 2, (z - *doc.cocycle).to_vector());
    o.result["cohomologous_to_declared"] = w.has_value();
  }
  Document out = base_of(doc);
  out.cocycle = z;
  o.raw_document = out;
}

inline void run_wells(const Document& doc, const std::optional<Document>& pair_doc, const Options&, Outcome& o,
                      std::optional<Matrix>* lambda_out = nullptr) {
  const Extension& e = require_extension(doc);
  AutoPair p = require_pair(doc, pair_doc);
  o.check("extension", verify_extension(e));
  Report ap = verify_auto_pair(e, p);
  o.check("auto-pair", ap);
  if (o.failed) return;
  WellsResult w = wells_obstruction(e, p);
  o.result["compatible"] = w.compatible;
  o.result["compatibility"] = report_json(w.compatibility);
  o.result["obstruction_trivial"] = w.obstruction_trivial;
  o.result["lambda"] = optional_matrix(w.lambda);
  o.result["inducible"] = w.compatible && w.obstruction_trivial;
  if (w.compatible) o.result["wells_cocycle"] = cocycle_json(wells_cocycle(e, p));
  o.failed = !(w.compatible && w.obstruction_trivial);
  if (lambda_out) *lambda_out = w.lambda;
}

inline void run_induce(const Document& doc, const std::optional<Document>& pair_doc, const Options& opt, Outcome& o) {
  const Extension& e = require_extension(doc);
  const bool have_pair = (pair_doc && pair_doc->pair) || doc.pair;
  if (!have_pair) {
    if (!doc.automorphism) throw StructureError("no automorphism pair or automorphism given");
    AutoPair r = restrict_automorphism(e, *doc.automorphism);
    o.result["restricted"] = pair_json(r);
    Document out = base_of(doc);
    out.extension = e;
    out.automorphism = doc.automorphism;
    out.pair = r;
    o.raw_document = out;
    return;
  }
  std::optional<Matrix> lambda;
  run_wells(doc, pair_doc, opt, o, &lambda);
  AutoPair p = require_pair(doc, pair_doc);
  std::optional<Matrix> given = pair_doc && pair_doc->lambda ? pair_doc->lambda : doc.lambda;
  if (given) {
    Report lr = verify_lambda(e, p, *given);
    o.check("lambda", lr);
    if (!lr.ok()) return;
    lambda = given;
  }
  if (!lambda) return;
  o.failed = false;
  for (const auto& [name, r] : o.checks) o.failed = o.failed || !r.ok();
  Matrix phi = induce_automorphism(e, p, *lambda);
  AutoPair back = restrict_automorphism(e, phi);
  const bool same = back.alpha == p.alpha && back.beta == p.beta;
  o.result["used_lambda"] = matrix_json(*lambda);
  o.result["automorphism"] = matrix_json(phi);
  o.result["restricted"] = pair_json(back);
  o.result["restricts_to_pair"] = same;
  o.failed = o.failed || !same;
  Document out = base_of(doc);
  out.extension = e;
  out.pair = p;
  out.lambda = lambda;
  out.automorphism = phi;
  o.raw_document = out;
}

inline json crossed_json(const CrossedModule& c) {
  return {{"base", {{"algebra", algebra_json(c.base.algebra)}, {"operator", matrix_json(c.base.op)}}},
          {"top", {{"algebra", algebra_json(c.top.algebra)}, {"operator", matrix_json(c.top.op)}}},
          {"phi", matrix_json(c.phi)},
          {"actions", bimodule_json(c.actions)}};
}

inline void run_homotopy(const Document& doc, const Options& opt, Outcome& o) {
  if (!doc.two_term && !doc.graded) throw StructureError("document declares no two_term or graded structure");
  if (doc.two_term) {
    const TwoTermAInf& t = *doc.two_term;
    o.result["skeletal"] = t.skeletal();
    o.result["strict"] = t.strict();
    if (!doc.homotopy_op) {
      o.check("two-term-a-infinity", verify_two_term(t));
    } else {
      const HomotopyNijOp& h = *doc.homotopy_op;
      Report r = verify_homotopy_nij(t, h);
      o.check("homotopy-nijenhuis", r);
      if (r.ok() && t.skeletal()) {
        SkeletalData s = to_cocycle(t, h);
        o.result["cocycle3"] = {{"chi", multimap_json(s.chi)}, {"f", multimap_json(s.f_part)}};
      }
      if (r.ok() && t.strict() && h.n2.is_zero()) {
        CrossedModule c = to_crossed(t, h);
        o.check("crossed-module", verify_crossed(c));
        o.result["crossed_module"] = crossed_json(c);
      }
    }
  }
  if (doc.graded) {
    const std::size_t k = opt.max_arity ? opt.max_arity : default_arity_cap;
    Report r = verify_graded_ainf(*doc.graded, k, std::max(k, default_arity_cap));
    o.check("a-infinity", r);
    if (doc.graded_op && r.ok()) {
      Report s = verify_strict_hn(*doc.graded, *doc.graded_op, std::max(k, default_arity_cap));
      o.check("strict-homotopy-nijenhuis", s);
      if (s.ok()) o.result["deformed"] = graded_json(deformed_ainf(*doc.graded, *doc.graded_op));
    }
  }
}

inline json ns_json(const NSAlgebra& ns) {
  return {{"prec", tensor_json(ns.prec)}, {"succ", tensor_json(ns.succ)}, {"vee", tensor_json(ns.vee)}};
}

inline void run_ns(const Document& doc, const Options& opt, Outcome& o) {
  if (!doc.has_nij_algebra() && !(doc.graded && doc.graded_op))
    throw StructureError("document declares neither a Nijenhuis algebra nor a graded structure with operator");
  if (doc.has_nij_algebra()) {
    NijAlgebra na = doc.nij_algebra();
    o.check("nijenhuis-algebra", verify_nij_algebra(na));
    if (!o.failed) {
      NSAlgebra ns = induced_ns(na);
      o.check("ns-algebra", verify_ns(ns));
      const bool total = ns.total() == deformed_algebra(na, 1).mu();
      o.failed = o.failed || !total;
      o.result["ns_algebra"] = ns_json(ns);
      o.result["total_is_deformed"] = total;
    }
  }
  if (doc.graded && doc.graded_op) {
    const std::size_t k = opt.max_arity ? opt.max_arity : 3;
    Report s = verify_strict_hn(*doc.graded, *doc.graded_op);
    o.check("strict-homotopy-nijenhuis", s);
    if (!s.ok()) return;
    NSInfinity ns = induced_nsinf(*doc.graded, *doc.graded_op);
    o.check("ns-infinity", verify_nsinf(ns, k, std::max(k, default_arity_cap)));
    GradedAInf sums = component_sums(ns);
    o.check("component-sums-a-infinity", verify_graded_ainf(sums, std::max(k, default_arity_cap)));
    const bool same = sums == deformed_ainf(*doc.graded, *doc.graded_op);
    o.failed = o.failed || !same;
    o.result["component_sums_are_deformed"] = same;
  }
}

inline std::string human_summary(const std::string& command, const Outcome& o) {
  std::string s = command + ": " + (o.failed ? "FAILED" : "ok") + "\n";
  for (const auto& [name, r] : o.checks) s += "  " + name + ": " + r.summary() + "\n";
  for (const auto& n : o.notes) s += "  note: " + n + "\n";
  return s;
}

inline json envelope(const Options& opt, const std::string& status) {
  json inputs = json::array();
  if (!opt.file.empty()) inputs.push_back(basename(opt.file));
  if (!opt.pair_file.empty()) inputs.push_back(basename(opt.pair_file));
  return {{"report_version", report_version}, {"command", opt.command}, {"inputs", inputs}, {"status", status}};
}

}  // namespace cli

/// Runs one subcommand; args exclude the program name. Performs file I/O, never exits the process.
inline CommandResult run_command(const std::vector<std::string>& args) {
  using namespace cli;
  CommandResult res;
  Options opt;

  CLI::App app{"Exact verification and cohomology of Nijenhuis algebras", "nijenhuis-cli"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nijenhuis-cli report version " + std::to_string(report_version));
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("file", opt.file, "input document")->required();
    sub->add_option("--format", opt.format, "report or raw")->check(CLI::IsMember({"report", "raw"}));
    return sub;
  };
  add("verify", "check every law of every declared structure");
  CLI::App* coh = add("cohomology", "Betti numbers of a cochain complex");
  coh->add_option("--complex", opt.complex, "hochschild, operator, relative-operator, cone-full, cone-reduced, ns-shifted");
  coh->add_option("--max-degree", opt.max_degree, "highest degree reported");
  CLI::App* les = add("les", "exactness of the long exact sequence");
  les->add_option("--max-degree", opt.max_degree, "highest degree built");
  CLI::App* deform = add("deform", "deformed structures and infinitesimal deformations");
  deform->add_option("--power", opt.power, "deform by N^k");
  CLI::App* extend = add("extend", "abelian extension from a 2-cocycle");
  extend->add_option("--seed", opt.seed, "draw a random 2-cocycle when none is declared");
  add("extract-cocycle", "2-cocycle of an extension through its section");
  CLI::App* wells = add("wells", "compatibility and Wells obstruction of an automorphism pair");
  wells->add_option("--pair", opt.pair_file, "document holding the pair");
  CLI::App* induce = add("induce", "automorphism inducing a pair, or the pair of an automorphism");
  induce->add_option("--pair", opt.pair_file, "document holding the pair and optionally lambda");
  CLI::App* hom = add("homotopy", "2-term and truncated A-infinity structures with homotopy operators");
  hom->add_option("--max-arity", opt.max_arity, "highest arity of the identities checked");
  CLI::App* ns = add("ns", "induced NS and NS-infinity structures");
  ns->add_option("--max-arity", opt.max_arity, "highest arity of the NS-infinity identities");

  std::ostringstream out, err;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    res.err = err.str();
    if (code == 0) {
      res.out = out.str();
      return res;
    }
    if (!app.get_subcommands().empty()) opt.command = app.get_subcommands().front()->get_name();
    json r = cli::envelope(opt, "error");
    r["error"] = {{"kind", "usage"}, {"message", e.what()}};
    res.out = emit_json(r);
    res.exit_code = 2;
    return res;
  }
  opt.command = app.get_subcommands().front()->get_name();

  Outcome o;
  try {
    Document doc = load_document(opt.file);
    std::optional<Document> pair_doc;
    if (!opt.pair_file.empty()) pair_doc = load_document(opt.pair_file, &doc);
    if (opt.command == "verify") run_verify(doc, opt, o);
    else if (opt.command == "cohomology") run_cohomology(doc, opt, o);
    else if (opt.command == "les") run_les(doc, opt, o);
    else if (opt.command == "deform") run_deform(doc, opt, o);
    else if (opt.command == "extend") run_extend(doc, opt, o);
    else if (opt.command == "extract-cocycle") run_extract(doc, opt, o);
    else if (opt.command == "wells") run_wells(doc, pair_doc, opt, o);
    else if (opt.command == "induce") run_induce(doc, pair_doc, opt, o);
    else if (opt.command == "homotopy") run_homotopy(doc, opt, o);
    else if (opt.command == "ns") run_ns(doc, opt, o);
  } catch (const DocumentError& e) {
    json r = envelope(opt, "error");
    r["error"] = {{"kind", e.kind()}, {"pointer", e.pointer()}, {"line", e.line()}, {"column", e.column()},
                  {"message", e.message()}};
    res.out = emit_json(r);
    res.err = opt.command + ": " + e.what() + "\n";
    res.exit_code = 2;
    return res;
  } catch (const std::exception& e) {
    const bool internal = dynamic_cast<const InternalError*>(&e) != nullptr;
    const bool input = dynamic_cast<const std::runtime_error*>(&e) != nullptr;
    json r = envelope(opt, "error");
    r["error"] = {{"kind", internal ? "internal" : input ? "input" : "precondition"}, {"message", e.what()}};
    res.out = emit_json(r);
    res.err = opt.command + ": " + e.what() + "\n";
    res.exit_code = 2;
    return res;
  }

  json r = envelope(opt, o.failed ? "failed" : "ok");
  json checks = json::array();
  for (const auto& [name, rep] : o.checks) {
    json c = report_json(rep);
    c["name"] = name;
    checks.push_back(c);
  }
  r["checks"] = checks;
  r["result"] = o.result;
  r["notes"] = o.notes;
  if (opt.format == "raw") {
    res.out = o.raw_document ? emit_document(*o.raw_document) : emit_json(o.result);
  } else {
    res.out = emit_json(r);
  }
  res.err = human_summary(opt.command, o);
  res.exit_code = o.failed ? 1 : 0;
  return res;
}

}  // namespace nij
