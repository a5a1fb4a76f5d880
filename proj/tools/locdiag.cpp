// locdiag command line: every library operation behind a verb, JSON or CSV on stdout.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "locdiag/graph.hpp"
#include "locdiag/orbits.hpp"
#include "locdiag/verify.hpp"

using namespace locdiag;

namespace {

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::string field, in = "-", out = "json";
  std::uint64_t seed = 0;
  std::optional<int> trials;
  bool timing = false;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw input_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::optional<FieldSpec> field_override(const Globals& g) {
  if (g.field.empty()) return std::nullopt;
  return FieldSpec::parse(g.field);
}

FieldSpec field_or(const Globals& g, const FieldSpec& dflt) { return field_override(g).value_or(dflt); }

Matrix read_matrix(const json& j, const Globals& g) { return matrix_from_json(j, field_override(g)); }

std::vector<Matrix> read_matrices(const json& j, const Globals& g) {
  const json& arr = j.is_object() && j.contains("matrices") ? j.at("matrices") : j;
  if (!arr.is_array()) throw input_error("expected an array of matrices or {\"matrices\":[...]}");
  std::vector<Matrix> out;
  for (const auto& m : arr) out.push_back(read_matrix(m, g));
  return out;
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// flat objects become one header row and one value row; matrices become their entry rows;
// a list becomes one row per element
void write_csv(const json& j, std::ostream& os) {
  auto row = [&](const json& obj, bool header) {
    bool first = true;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      os << (first ? "" : ",") << (header ? csv_cell(it.key()) : csv_cell(it.value()));
      first = false;
    }
    os << "\n";
  };
  if (j.is_object() && j.contains("rows") && j.contains("field")) {
    for (const auto& r : j.at("rows")) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_cell(r[c]);
      os << "\n";
    }
    return;
  }
  if (j.is_object() && j.contains("witness") && j.at("witness").is_object() && j.at("witness").contains("reports")) {
    const json& reports = j.at("witness").at("reports");
    os << "lemma,verdict,params\n";
    for (const auto& r : reports) os << csv_cell(r.at("lemma")) << "," << csv_cell(r.at("verdict")) << "," << csv_cell(r.at("params")) << "\n";
    return;
  }
  if (j.is_array() && !j.empty() && j[0].is_object()) {
    row(j[0], true);
    for (const auto& e : j) row(e, false);
    return;
  }
  if (j.is_array()) {
    for (const auto& e : j) os << csv_cell(e) << "\n";
    return;
  }
  if (j.is_object()) {
    row(j, true);
    row(j, false);
    return;
  }
  os << csv_cell(j) << "\n";
}

void emit(const json& j, const Globals& g) {
  if (g.out == "csv") write_csv(j, std::cout);
  else std::cout << j.dump() << "\n";
}

json report_json(const Report& r, const Globals& g) {
  json j = to_json(r);
  if (!g.timing) {
    j.erase("ms");
    if (j.at("witness").is_object() && j.at("witness").contains("reports"))
      for (auto& x : j.at("witness").at("reports")) x.erase("ms");
  }
  return j;
}

json case_json(const CaseTag& t) {
  return {{"tag", t.tag}, {"alpha", count_to_string(t.alpha)}, {"beta", count_to_string(t.beta)}, {"gamma", count_to_string(t.gamma)}};
}

TruncatedPoint read_point(const json& j, const Globals& g) {
  TruncatedPoint p{chain_from_json(j.at("chain")), {}};
  for (const auto& m : j.at("levels")) p.levels.push_back(read_matrix(m, g));
  return p;
}

// "--key value" pairs left over after parsing, values read as JSON when they parse
json extra_params(const std::vector<std::string>& extras) {
  json p = json::object();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string k = extras[i];
    if (k.rfind("--", 0) != 0) throw input_error("unexpected argument " + k);
    k = k.substr(2);
    std::string v;
    if (auto eq = k.find('='); eq != std::string::npos) {
      v = k.substr(eq + 1);
      k = k.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw input_error("missing value for --" + k);
      v = extras[++i];
    }
    std::replace(k.begin(), k.end(), '-', '_');
    json parsed = json::parse(v, nullptr, false);
    p[k] = parsed.is_discarded() ? json(v) : parsed;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locdiag: exact rank, orbit and inverse-limit computations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_extras();
  Globals g;
  app.add_option("--field", g.field, "gf:<p>, qq or qq_t; overrides the field of input matrices");
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_option("--trials", g.trials, "sample count for sampled modes");
  app.add_option("--out", g.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--in", g.in, "input file, - for stdin");
  app.add_flag("--timing", g.timing, "include wall-clock ms in reports");

  std::function<int()> action;
  auto verb = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

  verb(app.add_subcommand("rank", "rank of a matrix"), [&] {
    emit({{"rank", rank(read_matrix(read_json(g.in), g))}}, g);
    return 0;
  });
  verb(app.add_subcommand("charpoly", "det(xI - M), coefficients low to high"), [&] {
    UniPoly p = char_poly(read_matrix(read_json(g.in), g));
    emit({{"coefficients", scalars_to_json(p.coeffs)}, {"poly", p.to_string()}}, g);
    return 0;
  });
  verb(app.add_subcommand("eig", "eigenvalues in the field with multiplicities"), [&] {
    json out = json::array();
    for (const auto& e : eigen_data(read_matrix(read_json(g.in), g)))
      out.push_back({{"lambda", e.lambda.to_string()}, {"geometric", e.geometric_multiplicity}, {"algebraic", e.algebraic_multiplicity}});
    emit(out, g);
    return 0;
  });
  verb(app.add_subcommand("tuplerank", "rank of the pencil (P, I) with the best shift"), [&] {
    Matrix p = read_matrix(read_json(g.in), g);
    json j = to_json(shift_rank(p));
    j["rank"] = tuple_rank_identity(p);
    emit(j, g);
    return 0;
  });

  std::uint64_t budget = 1000000;
  auto* pencil = app.add_subcommand("pencil", "minimal rank over the projective space of a tuple");
  pencil->add_option("--budget", budget, "maximum number of projective points");
  verb(pencil, [&] {
    emit(to_json(pencil_rank_enumerate(read_matrices(read_json(g.in), g), budget)), g);
    return 0;
  });

  int k = 1, m = 1;
  auto* offdiag = app.add_subcommand("offdiag-check", "off-diagonal block criterion over conjugates");
  offdiag->add_option("--k", k)->required();
  offdiag->add_option("--m", m)->required();
  verb(offdiag, [&] {
    Matrix p = read_matrix(read_json(g.in), g);
    if (g.trials) {
      Rng rng = Rng::derive(g.seed, "offdiag-check");
      emit(to_json(offdiag_sampled(p, k, m, *g.trials, rng)), g);
    } else {
      emit(to_json(offdiag_exhaustive(p, k, m)), g);
    }
    return 0;
  });
  verb(app.add_subcommand("classify-orbit", "orbit closure of P in the limit"), [&] {
    emit(to_json(classify_orbit_closure(read_matrix(read_json(g.in), g))), g);
    return 0;
  });

  auto* desc = app.add_subcommand("descriptor", "closed-set descriptors");
  desc->require_subcommand(1);
  std::vector<std::string> desc_files;
  auto read_desc = [&](const std::string& path) { return descriptor_from_json(read_json(path), field_or(g, FieldSpec::qq())); };
  auto two = [&](const char* name) {
    auto* s = desc->add_subcommand(name);
    s->add_option("files", desc_files)->required()->expected(2);
    return s;
  };
  verb(two("union"), [&] {
    emit(to_json(descriptor_union(read_desc(desc_files[0]), read_desc(desc_files[1]))), g);
    return 0;
  });
  verb(two("intersect"), [&] {
    emit(to_json(descriptor_intersect(read_desc(desc_files[0]), read_desc(desc_files[1]))), g);
    return 0;
  });
  verb(two("contains"), [&] {
    emit({{"contains", descriptor_contains(read_desc(desc_files[0]), read_desc(desc_files[1]))}}, g);
    return 0;
  });
  auto* canon = desc->add_subcommand("canon");
  canon->add_option("file", desc_files)->expected(0, 1);
  verb(canon, [&] {
    emit(to_json(descriptor_canonicalize(read_desc(desc_files.empty() ? g.in : desc_files[0]))), g);
    return 0;
  });

  auto* chain = app.add_subcommand("chain", "classical chains and their inverse limits");
  chain->require_subcommand(1);
  int level = 1;
  verb(chain->add_subcommand("classify"), [&] {
    ChainSpec c = chain_from_json(read_json(g.in));
    emit(case_json(classify_case(c, field_or(g, FieldSpec::qq()).characteristic())), g);
    return 0;
  });
  verb(chain->add_subcommand("normalize"), [&] {
    NormalizedChain n = normalize_signatures(chain_from_json(read_json(g.in)));
    emit({{"chain", chain_to_json(n.chain)}, {"flips", n.flips}}, g);
    return 0;
  });
  // {"chain":..., "level":i, "matrix":...}
  auto level_input = [&](bool target) {
    json j = read_json(g.in);
    ChainSpec c = chain_from_json(j.at("chain"));
    level = j.value("level", 1);
    Embedding e = chain_embedding(c, level);
    Matrix x = read_matrix(j.at("matrix"), g);
    int want = target ? e.target.size() : e.source.size();
    if (x.rows() != want || x.cols() != want) throw input_error("matrix size does not match the chain level");
    return std::pair{e, x};
  };
  verb(chain->add_subcommand("project", "dual projection from level i+1 to level i"), [&] {
    auto [e, x] = level_input(true);
    emit(matrix_to_json(project_dual(e, x)), g);
    return 0;
  });
  verb(chain->add_subcommand("embed", "group embedding from level i to level i+1"), [&] {
    auto [e, x] = level_input(false);
    if (!group_membership(e.source, x)) throw input_error("matrix is not in " + e.source.to_string());
    emit(matrix_to_json(embed_group(e, x)), g);
    return 0;
  });
  verb(chain->add_subcommand("check-point", "compatibility of a truncated point"), [&] {
    bool ok = check_point(read_point(read_json(g.in), g));
    emit({{"valid", ok}}, g);
    return ok ? 0 : 1;
  });
  verb(chain->add_subcommand("trace", "trace invariant of a truncated point"), [&] {
    emit({{"trace", trace_invariant(read_point(read_json(g.in), g)).to_string()}}, g);
    return 0;
  });

  // {"p":..., "q":...}
  verb(app.add_subcommand("topleft", "conjugator putting Q in the top-left block of P"), [&] {
    json j = read_json(g.in);
    Matrix p = read_matrix(j.at("p"), g), q = read_matrix(j.at("q"), g);
    Matrix c = topleft_realization(p, q);
    emit({{"g", matrix_to_json(c)}, {"conjugate", matrix_to_json(c * p * inverse(c))}}, g);
    return 0;
  });
  verb(app.add_subcommand("raise-rank", "conjugators raising the rank of a sum"), [&] {
    auto ps = read_matrices(read_json(g.in), g);
    auto gs = raise_sum_rank(ps);
    Matrix sum(ps.at(0).field(), ps[0].rows(), ps[0].cols());
    json out = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      sum = sum + gs[i] * ps[i] * inverse(gs[i]);
      out.push_back(matrix_to_json(gs[i]));
    }
    emit({{"conjugators", out}, {"rank", rank(sum)}, {"tuple_rank", tuple_rank_identity(sum)}}, g);
    return 0;
  });
  // {"chain":..., "level":i, "p":...}
  int attempts = 200;
  auto* lift = app.add_subcommand("lift-tuple-rank", "raise tuple rank through one level of a type A chain");
  lift->add_option("--attempts", attempts);
  verb(lift, [&] {
    json j = read_json(g.in);
    Rng rng = Rng::derive(g.seed, "lift-tuple-rank");
    TupleRankLift r = tuple_rank_lift(chain_from_json(j.at("chain")), j.value("level", 1), read_matrix(j.at("p"), g), rng, attempts);
    emit({{"g", matrix_to_json(r.g)}, {"projected", matrix_to_json(r.projected)}, {"k", r.k}, {"lifted", r.lifted}}, g);
    return 0;
  });
  // {"r":..., "w":..., "q":..., "v":...} over qq
  verb(app.add_subcommand("degenerate", "curve over Q(t) degenerating (R, W) to (Q, V)"), [&] {
    json j = read_json(g.in);
    Matrix r = read_matrix(j.at("r"), g), w = read_matrix(j.at("w"), g), q = read_matrix(j.at("q"), g), v = read_matrix(j.at("v"), g);
    Matrix c = degeneration_witness(r, w, q, v);
    emit({{"g", matrix_to_json(c)}}, g);
    return 0;
  });

  auto* graph = app.add_subcommand("graph", "graph reduction calculus");
  graph->require_subcommand(1);
  verb(graph->add_subcommand("reduce"), [&] {
    auto r = reduce(graph_from_json(read_json(g.in)));
    if (auto* c = std::get_if<ReductionCertificate>(&r)) emit({{"reducible", true}, {"certificate", to_json(*c)}}, g);
    else emit({{"reducible", false}, {"obstruction", std::get<Obstruction>(r).component}}, g);
    return 0;
  });
  std::string cert_file;
  auto* rep = graph->add_subcommand("replay");
  rep->add_option("certificate", cert_file)->required();
  verb(rep, [&] {
    json c = read_json(cert_file);
    bool ok = replay(graph_from_json(read_json(g.in)), certificate_from_json(c.is_object() ? c.at("certificate") : c));
    emit({{"valid", ok}}, g);
    return ok ? 0 : 1;
  });
  verb(graph->add_subcommand("incidence"), [&] {
    IncidenceCheck r = incidence_rank_check(graph_from_json(read_json(g.in)), field_or(g, FieldSpec::gf(2)));
    emit({{"rank", r.rank}, {"surjective", r.surjective}, {"vertices", r.matrix.rows()}}, g);
    return 0;
  });

  std::string lemma;
  std::string params_text;
  auto* ver = app.add_subcommand("verify", "run one lemma check; extra --key value pairs become parameters");
  ver->add_option("lemma", lemma, "lemma id")->required();
  ver->add_option("--params", params_text, "parameters as a JSON object");
  ver->allow_extras();
  verb(ver, [&] {
    json p = params_text.empty() ? json::object() : json::parse(params_text);
    auto extras = ver->remaining();
    for (const auto& x : app.remaining()) extras.push_back(x);
    p.update(extra_params(extras));
    if (!g.field.empty()) p["field"] = g.field;
    if (g.trials) p["trials"] = *g.trials;
    Report r = verify(lemma, p, g.seed);
    emit(report_json(r, g), g);
    return exit_code(r);
  });
  bool use_default = true;
  verb(app.add_subcommand("suite", "run a configured list of checks (default: the full set)"), [&] {
    use_default = app.get_option("--in")->count() == 0;
    Report r = run_suite(use_default ? default_suite_config() : read_json(g.in), g.seed);
    emit(report_json(r, g), g);
    return exit_code(r);
  });
  verb(app.add_subcommand("lemmas", "list lemma ids"), [&] {
    emit(lemma_ids(), g);
    return 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!ver->parsed() && !app.remaining().empty()) {
    std::cerr << json{{"error", "unexpected arguments: " + CLI::detail::join(app.remaining(), " ")}}.dump() << "\n";
    return 2;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
}
