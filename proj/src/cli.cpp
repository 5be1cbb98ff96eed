#include "relbn/cli.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relbn/dllite.hpp"
#include "relbn/edgecover.hpp"
#include "relbn/encode.hpp"
#include "relbn/errors.hpp"
#include "relbn/ground.hpp"
#include "relbn/infer.hpp"
#include "relbn/lang.hpp"

namespace relbn {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string exact(const Rational& r) { return r.str() + " (" + r.decimal() + ")"; }

json result_line(const std::string& engine, const Rational& value, std::optional<bool> decision,
                 unsigned long long calls, Clock::time_point start) {
  json j;
  j["engine"] = engine;
  j["value_num"] = value.num().get_str();
  j["value_den"] = value.den().get_str();
  j["decision"] = decision ? json(*decision) : json(nullptr);
  j["calls"] = calls;
  j["elapsed_ms"] = elapsed_ms(start);
  return j;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void check_format(const std::string& f) {
  if (f != "text" && f != "json-lines") throw ValidationError("format must be text or json-lines");
}

struct GraphInput {
  std::string path;
  std::vector<long> classb;
};

void add_graph_options(CLI::App* c, GraphInput& g) {
  c->add_option("--graph", g.path, "black-and-white graph file (.bwg)");
  c->add_option("--classB", g.classb, "class-B layer sizes k1 m n k2")->expected(4);
}

BwGraph load_graph(const GraphInput& g) {
  if (!g.classb.empty()) return classb_graph({g.classb[0], g.classb[1], g.classb[2], g.classb[3], 0});
  if (g.path.empty()) throw ValidationError("give --graph FILE or --classB k1 m n k2");
  return parse_bwg(read_file(g.path));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational Bayesian network specifications: exact inference, encoders and edge-cover counting"};
  app.name("relbn");
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "output format: text or json-lines")->capture_default_str();

  // infer
  auto* infer_cmd = app.add_subcommand("infer", "P(Q|E), or the decision P(Q|E) > gamma");
  std::string spec_path, plate_path, prm_path, skel_path, query_text, engine_name_text = "auto";
  long n = 0;
  size_t root_cap = default_root_cap();
  unsigned long long node_cap = GroundOptions{}.node_cap;
  int fffo_bound = 3;
  infer_cmd->add_option("--spec", spec_path, "specification (.rbn)");
  infer_cmd->add_option("--plate", plate_path, "plate model; encoded before inference");
  infer_cmd->add_option("--prm", prm_path, "PRM; needs --skeleton");
  infer_cmd->add_option("--skeleton", skel_path, "PRM skeleton; its guards become evidence");
  infer_cmd->add_option("--n", n, "domain size");
  infer_cmd->add_option("--query", query_text, "query, e.g. \"friends(1,2)=1 | fan(1)=1 ; gamma=1/3\"")->required();
  infer_cmd->add_option("--engine", engine_name_text, "auto, bruteforce, positive-product, qf-pruned or dllite")
      ->capture_default_str();
  infer_cmd->add_option("--root-cap", root_cap, "largest number of free roots to enumerate")->capture_default_str();
  infer_cmd->add_option("--node-cap", node_cap, "largest grounding")->capture_default_str();
  infer_cmd->add_option("--fffo-bound", fffo_bound, "largest k reported as FFFOk")->capture_default_str();

  // mpe
  auto* mpe_cmd = app.add_subcommand("mpe", "most probable full assignment for DLLite specifications");
  std::string evidence_text;
  mpe_cmd->add_option("--spec", spec_path, "specification (.rbn)")->required();
  mpe_cmd->add_option("--n", n, "domain size")->required();
  mpe_cmd->add_option("--evidence", evidence_text, "evidence literals, e.g. \"A(1)=1, A(2)=1\"");

  // ground
  auto* ground_cmd = app.add_subcommand("ground", "write the grounding (.gbn)");
  std::string out_path;
  ground_cmd->add_option("--spec", spec_path, "specification (.rbn)")->required();
  ground_cmd->add_option("--n", n, "domain size")->required();
  ground_cmd->add_option("--query", query_text, "keep only the ancestors of these atoms");
  ground_cmd->add_option("--node-cap", node_cap, "largest grounding")->capture_default_str();
  ground_cmd->add_option("--out", out_path, "output file; stdout when absent");

  auto* validate_cmd = app.add_subcommand("validate", "check a specification");
  validate_cmd->add_option("--spec", spec_path, "specification (.rbn)")->required();

  auto* classify_cmd = app.add_subcommand("classify", "report the fragment label");
  classify_cmd->add_option("--spec", spec_path, "specification (.rbn)")->required();
  classify_cmd->add_option("--fffo-bound", fffo_bound, "largest k reported as FFFOk")->capture_default_str();

  // count
  auto* count_cmd = app.add_subcommand("count", "edge covers of a black-and-white graph");
  GraphInput graph;
  std::string lambda_text;
  bool show_calls = false, oracle = false, brute = false;
  add_graph_options(count_cmd, graph);
  count_cmd->add_option("--lambda", lambda_text, "weight per edge; prints Z(G, lambda)");
  count_cmd->add_flag("--calls", show_calls, "print recursion calls and their bound");
  count_cmd->add_flag("--oracle", oracle, "cross-check against brute force (at most 25 edges)");
  count_cmd->add_flag("--brute", brute, "fall back to brute force for unsupported shapes");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Glauber chain over edge covers");
  unsigned long long steps = 1000;
  uint64_t seed = 1;
  std::string sample_lambda = "1";
  add_graph_options(sample_cmd, graph);
  sample_cmd->add_option("--lambda", sample_lambda, "weight per edge")->capture_default_str();
  sample_cmd->add_option("--steps", steps, "chain steps")->capture_default_str();
  sample_cmd->add_option("--seed", seed, "generator seed")->capture_default_str();

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "translate into specifications, CNF or graphs");
  encode_cmd->require_subcommand(1);
  bool verify = false;
  std::string input_path, target = "cnf";
  auto* enc_plate = encode_cmd->add_subcommand("plate", "plate model to specification");
  enc_plate->add_option("file", input_path, "plate model")->required();
  enc_plate->add_flag("--verify", verify, "compare marginals with the template network at domain size 1");
  enc_plate->add_option("--out", out_path, "output file");
  auto* enc_prm = encode_cmd->add_subcommand("prm", "PRM with skeleton to specification plus evidence");
  enc_prm->add_option("file", input_path, "PRM")->required();
  enc_prm->add_option("--skeleton", skel_path, "skeleton")->required();
  enc_prm->add_option("--out", out_path, "output file");
  auto* enc_gadget = encode_cmd->add_subcommand("gadget", "3CNF to its 1-in-3 gadget");
  enc_gadget->add_option("file", input_path, "DIMACS CNF")->required();
  enc_gadget->add_flag("--verify", verify, "check #(1-in-3)(output) = #models(input)");
  enc_gadget->add_option("--out", out_path, "output file");
  auto* enc_matrix = encode_cmd->add_subcommand("matrix", "matrix problem to CNF or class-B graph");
  std::vector<long> dims;
  enc_matrix->add_option("dims", dims, "m n M N")->expected(4)->required();
  enc_matrix->add_option("--to", target, "cnf or bwg")->capture_default_str();
  enc_matrix->add_flag("--verify", verify, "check matrix, formula and graph counts agree");
  enc_matrix->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    check_format(format);
    bool jl = format == "json-lines";
    auto start = Clock::now();

    if (infer_cmd->parsed()) {
      int sources = !spec_path.empty() + !plate_path.empty() + !prm_path.empty();
      if (sources != 1) throw ValidationError("give exactly one of --spec, --plate, --prm");
      RelationalSpec spec;
      Query query = parse_query(query_text);
      if (!spec_path.empty()) spec = parse_spec(read_file(spec_path));
      if (!plate_path.empty()) spec = plate_to_spec(parse_plate(read_file(plate_path)));
      if (!prm_path.empty()) {
        if (skel_path.empty()) throw ValidationError("--prm needs --skeleton");
        PrmEncoding enc = prm_to_spec(parse_prm(read_file(prm_path)), parse_skeleton(read_file(skel_path)));
        spec = enc.spec;
        if (n != 0 && n != enc.n) throw ValidationError("--n must match the skeleton's " + std::to_string(enc.n) + " objects");
        n = enc.n;
        for (const Literal& l : enc.evidence) query.add_evidence(l);
      }
      if (n < 1) throw ValidationError("--n must be a positive domain size");
      InferOptions opts;
      opts.root_cap = root_cap;
      opts.ground.node_cap = node_cap;
      opts.fffo_bound = fffo_bound;
      if (query.gamma && !query.gamma->is_probability()) throw ValidationError("gamma must lie in [0,1]");
      InferResult r = infer(spec, n, query, parse_engine(engine_name_text), opts);
      if (jl) {
        out << result_line(engine_name(r.engine), r.value, r.decision, r.work, start).dump() << "\n";
      } else {
        if (r.decision) {
          out << r.value.str() << " > " << query.gamma->str() << " : " << (*r.decision ? "true" : "false") << "\n";
        } else {
          out << exact(r.value) << "\n";
        }
        out << "engine: " << engine_name(r.engine) << "\n";
      }
      return 0;
    }

    if (mpe_cmd->parsed()) {
      RelationalSpec spec = parse_spec(read_file(spec_path));
      std::vector<Literal> ev;
      if (!evidence_text.empty()) {
        Query q = parse_query(evidence_text);
        ev = q.q;
        ev.insert(ev.end(), q.e.begin(), q.e.end());
      }
      MpeResult m = mpe(spec, n, ev);
      if (jl) {
        json j = result_line("dllite-mpe", m.prob, std::nullopt, 0, start);
        json a = json::object();
        for (const auto& [atom, v] : m.assignment) a[atom.str()] = v ? 1 : 0;
        j["assignment"] = a;
        j["inconsistent"] = m.inconsistent;
        out << j.dump() << "\n";
      } else {
        for (const auto& [atom, v] : m.assignment) out << atom.str() << "=" << (v ? 1 : 0) << "\n";
        if (m.inconsistent) out << "inconsistent evidence\n";
        out << "probability: " << exact(m.prob) << "\n";
      }
      return 0;
    }

    if (ground_cmd->parsed()) {
      RelationalSpec spec = parse_spec(read_file(spec_path));
      GroundOptions go{node_cap};
      GroundNetwork net = query_text.empty() ? ground_spec(spec, n, go)
                                             : ground_for_query(spec, n, parse_query(query_text).atoms(), go);
      emit(out, out_path, render_network(net));
      return 0;
    }

    if (validate_cmd->parsed()) {
      ValidationReport rep = validate_spec(parse_spec(read_file(spec_path)));
      if (rep.ok()) {
        out << "ok\n";
        return 0;
      }
      err << rep.str();
      return 1;
    }

    if (classify_cmd->parsed()) {
      RelationalSpec spec = parse_spec(read_file(spec_path));
      require_valid(spec);
      out << classify_fragment(spec, fffo_bound).str() << "\n";
      return 0;
    }

    if (count_cmd->parsed()) {
      BwGraph g = load_graph(graph);
      bool weighted = !lambda_text.empty();
      Rational lambda = weighted ? Rational::parse(lambda_text) : Rational(1);
      if (lambda <= Rational(0)) throw ValidationError("lambda must be positive");
      std::optional<ClassB> shape;
      if (!graph.classb.empty()) {
        shape = ClassB{graph.classb[0], graph.classb[1], graph.classb[2], graph.classb[3], 0};
      } else {
        shape = recognize_classB(g);
      }
      Partition z;
      std::string engine = "classB";
      try {
        z = shape ? partition_classB(*shape, lambda) : partition_function(g, lambda);
        if (!shape) engine = "closed-form";
      } catch (const UnsupportedError&) {
        if (!brute) throw;
        z = {partition_bruteforce(g, lambda), 0};
        engine = "bruteforce";
      }
      if (oracle) {
        if (g.edge_count() > kDefaultEdgeGuard) {
          err << "oracle: skipped, " << g.edge_count() << " edges exceed the guard\n";
        } else if (partition_bruteforce(g, lambda) != z.value) {
          err << "oracle: mismatch, brute force gives " << partition_bruteforce(g, lambda).str() << "\n";
          return 1;
        }
      }
      if (jl) {
        out << result_line(engine, z.value, std::nullopt, z.calls, start).dump() << "\n";
        return 0;
      }
      out << (weighted ? exact(z.value) : z.value.str()) << "\n";
      if (show_calls) {
        out << "calls: " << z.calls;
        if (shape) out << " (bound " << classb_call_bound(*shape) << ")";
        out << "\n";
      }
      if (oracle && g.edge_count() <= kDefaultEdgeGuard) out << "oracle: agrees\n";
      return 0;
    }

    if (sample_cmd->parsed()) {
      BwGraph g = load_graph(graph);
      std::vector<bool> cover = glauber_sample(g, Rational::parse(sample_lambda), steps, seed);
      size_t size = 0;
      for (bool b : cover) size += b;
      if (jl) {
        json j;
        j["size"] = size;
        json edges = json::array();
        for (size_t i = 0; i < cover.size(); ++i) {
          if (cover[i]) edges.push_back({g.name(g.edges()[i].first), g.name(g.edges()[i].second)});
        }
        j["edges"] = edges;
        out << j.dump() << "\n";
        return 0;
      }
      out << "size: " << size << "\n";
      for (size_t i = 0; i < cover.size(); ++i) {
        if (cover[i]) out << "edge " << g.name(g.edges()[i].first) << " " << g.name(g.edges()[i].second) << "\n";
      }
      return 0;
    }

    if (enc_plate->parsed()) {
      PlateModel model = parse_plate(read_file(input_path));
      emit(out, out_path, render_spec(plate_to_spec(model)));
      if (verify) {
        std::vector<std::string> bad = verify_plate(model);
        for (const std::string& b : bad) err << "verify: " << b << "\n";
        if (!bad.empty()) return 1;
        err << "verify: ok\n";
      }
      return 0;
    }

    if (enc_prm->parsed()) {
      PrmEncoding enc = prm_to_spec(parse_prm(read_file(input_path)), parse_skeleton(read_file(skel_path)));
      Query s;
      for (const Literal& l : enc.evidence) s.add_query(l);
      std::string text = render_spec(enc.spec);
      text += "# domain " + std::to_string(enc.n) + "\n";
      text += "# skeleton evidence: " + render_query(s) + "\n";
      emit(out, out_path, text);
      return 0;
    }

    if (enc_gadget->parsed()) {
      Cnf phi = parse_dimacs(read_file(input_path));
      Cnf g = one_in_three_gadget(phi);
      emit(out, out_path, render_dimacs(g));
      if (verify) {
        BigInt a = count_one_in_three(g), b = count_models(phi);
        if (a != b) {
          err << "verify: #(1-in-3) of output is " << a.get_str() << ", input has " << b.get_str() << " models\n";
          return 1;
        }
        err << "verify: ok (" << b.get_str() << ")\n";
      }
      return 0;
    }

    if (enc_matrix->parsed()) {
      Cnf phi = matrix_problem_to_formula(dims[0], dims[1], dims[2], dims[3]);
      ClassB c = linmoncbpc_to_bwgraph(phi);
      if (target == "cnf") {
        emit(out, out_path, render_dimacs(phi));
      } else if (target == "bwg") {
        emit(out, out_path, render_bwg(classb_graph(c)));
      } else {
        throw ValidationError("--to must be cnf or bwg");
      }
      if (verify) {
        BigInt a = matrix_count_bruteforce(dims[0], dims[1], dims[2], dims[3]);
        BigInt b = count_models(phi);
        BigInt d = count_covers_classB(c).count;
        if (a != b || b != d) {
          err << "verify: matrix " << a.get_str() << ", formula " << b.get_str() << ", graph " << d.get_str() << "\n";
          return 1;
        }
        err << "verify: ok (" << a.get_str() << ")\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace relbn
