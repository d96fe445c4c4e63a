#include "vh/constructions.hpp"
#include "vh/errors.hpp"
#include "vh/hedgehog.hpp"
#include "vh/json_io.hpp"
#include "vh/parallel.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/tameness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using vh::io::Json;

enum ExitCode { kOk = 0, kValidation = 2, kConstruction = 3, kIo = 4 };

std::string vec_str(const vh::Vec& v) {
  std::ostringstream out;
  out << std::setprecision(9) << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

/// Writes JSON to `path`, or to stdout when the path is empty.
void emit_json(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    vh::io::write_json_file(path, j);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw vh::IoError("cannot open " + path + " for writing");
  return out;
}

void close_output(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw vh::IoError("failed writing " + path);
}

vh::EtaNet net_for(int dim, double eta, const std::string& net_path) {
  if (!net_path.empty()) {
    vh::EtaNet net = vh::io::net_from_json(vh::io::read_json_file(net_path));
    if (net.dim != dim) throw vh::ValidationError("net dimension does not match the body");
    net.eta = eta;
    return net;
  }
  return vh::build_eta_net(dim, eta);
}

// ---------------------------------------------------------------- commands

struct NetArgs {
  int dim = 0;
  double eta = 0.0;
  std::string out;
};

int cmd_net(const NetArgs& a) {
  const vh::EtaNet net = vh::build_eta_net(a.dim, a.eta);
  double gap = 0.0;
  const bool covered = vh::verify_covering(net, 20000, 0xC0FFEEULL, &gap);
  emit_json(vh::io::to_json(net), a.out);
  std::cerr << "members " << net.members.size() << ", probe gap " << gap << (covered ? " (covering verified)" : "")
            << '\n';
  return covered ? kOk : kConstruction;
}

struct ApproxArgs {
  std::string body;
  std::string body2;
  std::string net;
  double eta = 0.0;
  double eps = 0.0;
  std::string out;
  std::string off;
};

void print_report(const std::string& label, const vh::ApproxResult& r) {
  std::cout << label << "facets " << r.polytope.facet_count() << "  (a) " << r.report.a << "  (b) " << r.report.b
            << "  (c) " << r.report.c << "  (d) " << r.report.d << "  distance " << r.distance << '\n';
}

int cmd_approx(const ApproxArgs& a) {
  std::cout << std::boolalpha;
  const vh::ConvexSet k1 = vh::io::convex_set_from_json(vh::io::read_json_file(a.body));
  const vh::EtaNet net = net_for(vh::dim_of(k1), a.eta, a.net);
  if (a.body2.empty()) {
    const vh::ApproxResult r = vh::approximate_body(k1, net, a.eta, a.eps);
    print_report("", r);
    emit_json(vh::io::to_json(r), a.out);
    if (!a.off.empty()) {
      auto out = open_output(a.off);
      vh::write_off(r.polytope, out);
      close_output(out, a.off);
    }
    return kOk;
  }
  const vh::ConvexSet k2 = vh::io::convex_set_from_json(vh::io::read_json_file(a.body2));
  const vh::PairResult r = vh::approximate_pair(k1, k2, net, a.eta, a.eps);
  print_report("first:  ", r.first);
  print_report("second: ", r.second);
  std::cout << "pair: same normals " << r.pair.same_normals << "  translates " << r.pair.translates
            << "  mirrored adjacency " << r.pair.mirrored_adjacency << '\n';
  Json j;
  j["first"] = vh::io::to_json(r.first);
  j["second"] = vh::io::to_json(r.second);
  j["pair"] = vh::io::to_json(r.pair);
  emit_json(j, a.out);
  return kOk;
}

struct RoundArgs {
  std::string polytope;
  std::string touch;
  double eps0 = 0.0;
  std::string out;
};

int cmd_round(const RoundArgs& a) {
  const vh::Polytope p = vh::io::polytope_from_json(vh::io::read_json_file(a.polytope));
  std::vector<vh::Vec> z;
  if (a.touch.empty()) {
    for (std::size_t i = 0; i < p.facet_count(); ++i) z.push_back(p.facet_centroid(static_cast<int>(i)));
  } else {
    const Json tj = vh::io::read_json_file(a.touch);
    if (!tj.is_array()) throw vh::ValidationError("touch points: expected an array of vectors");
    for (const auto& v : tj) z.push_back(vh::io::vec_from_json(v, p.dim()));
  }
  const vh::RoundedBody rb = vh::round_polytope(p, z, a.eps0);
  const auto res = rb.residuals();
  std::cout << "epsilon " << rb.epsilon() << "  vertex residual " << res.vertex << "  apex residual " << res.apex
            << '\n';
  emit_json(vh::io::to_json(rb), a.out);
  return kOk;
}

struct CertifyArgs {
  std::string body1;
  std::string body2;
  int k = 2;
  int m = 2;
  int j = 2;
  double eps0 = 0.0;
  std::string out;
  std::string csv;
  bool quiet = false;
};

int cmd_certify(const CertifyArgs& a) {
  const vh::Body s1 = vh::io::body_from_json(vh::io::read_json_file(a.body1));
  const vh::Body s2 = vh::io::body_from_json(vh::io::read_json_file(a.body2));
  const vh::CertifyOptions options;
  const vh::CertifiedPair c = vh::certify_pair(s1, s2, a.k, a.m, a.j, a.eps0, options);
  if (!a.out.empty()) vh::io::write_json_file(a.out, vh::io::to_json(c));

  std::size_t turns = 0;
  for (const auto& w : c.witnesses) {
    if (w.product > vh::kTurnThreshold && w.product_reverse > vh::kTurnThreshold) ++turns;
  }
  if (!a.quiet) {
    std::cout << std::setprecision(6);
    for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
      const auto& w = c.witnesses[i];
      const bool turn = w.product > vh::kTurnThreshold && w.product_reverse > vh::kTurnThreshold;
      std::cout << "witness " << i << "  u " << vec_str(w.u.vec()) << "  t " << vec_str(w.t.vec()) << "  residual+ "
                << w.residual_plus << "  residual- " << w.residual_minus << "  " << (turn ? "TURN" : "NO TURN")
                << '\n';
    }
  }
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    out << std::setprecision(17)
        << "index,lambda,mu,gamma_plus,gamma_minus,s_plus,s_minus,residual_plus,residual_minus,product\n";
    for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
      const auto& w = c.witnesses[i];
      out << i << ',' << w.lambda << ',' << w.mu << ',' << w.gamma_plus << ',' << w.gamma_minus << ',' << w.s_plus
          << ',' << w.s_minus << ',' << w.residual_plus << ',' << w.residual_minus << ',' << w.product << '\n';
    }
    close_output(out, a.csv);
  }
  std::cout << std::setprecision(6) << "net " << c.net.members.size() << "  witnesses " << c.witnesses.size()
            << "  turns " << turns << "  epsilon " << c.eps << "  distance " << c.distance1 << " + " << c.distance2
            << " (budget " << c.eps0 << ")  max residual " << c.max_residual << "  "
            << (c.verified ? "VERIFIED" : "NOT VERIFIED") << '\n';
  return c.verified ? kOk : kConstruction;
}

struct SurveyArgs {
  std::string body1;
  std::string body2;
  double eta = 0.0;
  double tangent_eta = 0.0;
  double epsilon = 0.1;
  int grid = 12;
  std::string csv;
};

int cmd_survey(const SurveyArgs& a) {
  const vh::Body b1 = vh::io::body_from_json(vh::io::read_json_file(a.body1));
  vh::DirectionMap x;
  if (a.body2.empty()) {
    x = vh::map_of(b1);
  } else {
    const vh::Body b2 = vh::io::body_from_json(vh::io::read_json_file(a.body2));
    if (b2.dim() != b1.dim()) throw vh::ValidationError("survey bodies differ in dimension");
    x = vh::map_of(vh::VirtualBody(b1, b2));
  }
  if (!(a.epsilon > 0.0)) throw vh::ValidationError("epsilon must be positive");
  if (a.grid < 2) throw vh::ValidationError("grid must be at least 2");
  const vh::EtaNet net = vh::build_eta_net(b1.dim(), a.eta);
  const double teta = a.tangent_eta > 0.0 ? a.tangent_eta : a.eta;
  const vh::SurveyResult s = vh::survey(x, net, teta, a.epsilon, a.grid);
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    vh::write_survey_csv(s, out);
    close_output(out, a.csv);
  }
  std::cout << "pairs " << s.rows.size() << "  turns " << s.turns << "  sampled tame " << s.sampled_tame << '\n';
  return kOk;
}

struct HedgehogArgs {
  std::string hk;
  std::string hl = "0";
  int n = 512;
  std::string svg;
  std::string csv;
};

int cmd_hedgehog(const HedgehogArgs& a) {
  const auto hk = vh::PlanarSupport::expression(a.hk);
  const auto hl = vh::PlanarSupport::expression(a.hl);
  const vh::HedgehogCurve curve = vh::sample_hedgehog(hk, hl, a.n);
  const int cusps = vh::count_cusps(curve);
  if (!a.svg.empty()) {
    auto out = open_output(a.svg);
    vh::write_hedgehog_svg(curve, out);
    close_output(out, a.svg);
  }
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    vh::write_hedgehog_csv(curve, out);
    close_output(out, a.csv);
  }
  std::cout << "cusps " << cusps << '\n' << std::setprecision(12);
  for (double theta : curve.cusps) std::cout << "cusp at theta = " << theta << '\n';
  return kOk;
}

// ------------------------------------------------------------- run config

/// Translates a RunConfig document into the equivalent argument list.
std::vector<std::string> config_arguments(const Json& j) {
  static const std::vector<std::string> known = {"command", "inputs", "dim",   "eta",   "eps",     "eps0",
                                                 "k",       "m",      "j",     "n",     "grid",    "epsilon",
                                                 "tangent_eta", "hk", "hl",    "out_dir", "jobs", "deterministic"};
  if (!j.is_object()) throw vh::ValidationError("run config: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw vh::ValidationError("run config: unknown key '" + key + "'");
    }
  }
  if (!j.contains("command") || !j["command"].is_string()) throw vh::ValidationError("run config: missing command");
  if (j.contains("deterministic") && !(j["deterministic"].is_boolean() && j["deterministic"].get<bool>())) {
    throw vh::ValidationError("run config: every command is deterministic; 'deterministic' must be true");
  }
  const std::string command = j["command"];
  std::vector<std::string> args{command};
  auto number = [&](const char* key, const char* flag) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw vh::ValidationError(std::string("run config: '") + key + "' must be a number");
    std::ostringstream s;
    s << std::setprecision(17) << j[key].get<double>();
    args.push_back(flag);
    args.push_back(s.str());
  };
  auto text = [&](const char* key, const char* flag) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw vh::ValidationError(std::string("run config: '") + key + "' must be a string");
    args.push_back(flag);
    args.push_back(j[key].get<std::string>());
  };
  std::vector<std::string> inputs;
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) throw vh::ValidationError("run config: 'inputs' must be an array of paths");
    for (const auto& p : j["inputs"]) {
      if (!p.is_string()) throw vh::ValidationError("run config: 'inputs' must be an array of paths");
      inputs.push_back(p.get<std::string>());
    }
  }
  const std::vector<std::string> input_flags = command == "round"                        ? std::vector<std::string>{"--polytope", "--touch"}
                                               : command == "approx"                     ? std::vector<std::string>{"--body", "--body2"}
                                               : command == "certify" || command == "survey" ? std::vector<std::string>{"--body1", "--body2"}
                                                                                         : std::vector<std::string>{};
  if (inputs.size() > input_flags.size()) throw vh::ValidationError("run config: too many inputs for " + command);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    args.push_back(input_flags[i]);
    args.push_back(inputs[i]);
  }
  number("dim", "--dim");
  number("eta", "--eta");
  number("eps", "--eps");
  number("eps0", "--eps0");
  number("k", "--k");
  number("m", "--m");
  number("j", "--j");
  number("n", "--n");
  number("grid", "--grid");
  number("epsilon", "--epsilon");
  number("tangent_eta", "--tangent-eta");
  text("hk", "--hk");
  text("hl", "--hl");
  number("jobs", "--jobs");
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw vh::ValidationError("run config: 'out_dir' must be a string");
    const std::filesystem::path dir = j["out_dir"].get<std::string>();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw vh::IoError("cannot create " + dir.string() + ": " + ec.message());
    if (command == "hedgehog") {
      args.insert(args.end(), {"--svg", (dir / "hedgehog.svg").string(), "--csv", (dir / "hedgehog.csv").string()});
    } else if (command == "survey") {
      args.insert(args.end(), {"--csv", (dir / "survey.csv").string()});
    } else {
      args.insert(args.end(), {"--out", (dir / (command + ".json")).string()});
    }
  }
  return args;
}

int run(int argc, const char* const* argv, int depth);

int run_config(const std::string& path, int depth) {
  if (depth > 0) throw vh::ValidationError("run config cannot invoke run");
  const auto args = config_arguments(vh::io::read_json_file(path));
  if (args.front() == "run") throw vh::ValidationError("run config cannot invoke run");
  std::vector<const char*> argv{"vh"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), depth + 1);
}

int run(int argc, const char* const* argv, int depth) {
  CLI::App app{"vh: support functions, reverse Gauss maps, turn detection and certified non-tame pairs"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: VH_JOBS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  NetArgs net_args;
  auto* net = app.add_subcommand("net", "Build an eta-net of the sphere");
  net->add_option("--dim", net_args.dim, "Dimension (2 or 3)")->required();
  net->add_option("--eta", net_args.eta, "Covering radius in radians")->required();
  net->add_option("--out", net_args.out, "Output JSON (default stdout)");

  ApproxArgs approx_args;
  auto* approx = app.add_subcommand("approx", "Polytope approximation with the four net properties");
  approx->add_option("--body", approx_args.body, "Body or polytope spec (JSON)")->required();
  approx->add_option("--body2", approx_args.body2, "Second spec: run the paired construction");
  approx->add_option("--net", approx_args.net, "Net JSON (default: build_eta_net at --eta)");
  approx->add_option("--eta", approx_args.eta, "Net radius in radians")->required();
  approx->add_option("--eps", approx_args.eps, "Distance budget")->required();
  approx->add_option("--out", approx_args.out, "Output JSON (default stdout)");
  approx->add_option("--off", approx_args.off, "Also write the polytope as OFF (3D)");

  RoundArgs round_args;
  auto* round = app.add_subcommand("round", "Round a polytope into a strictly convex body");
  round->add_option("--polytope", round_args.polytope, "Polytope JSON")->required();
  round->add_option("--touch", round_args.touch, "Touch points JSON (default: facet centroids)");
  round->add_option("--eps0", round_args.eps0, "Distance budget")->required();
  round->add_option("--out", round_args.out, "Output JSON (default stdout)");

  CertifyArgs cert_args;
  auto* certify = app.add_subcommand("certify", "Build and verify a certified non-tame pair");
  certify->add_option("--body1", cert_args.body1, "First seed body spec (JSON)")->required();
  certify->add_option("--body2", cert_args.body2, "Second seed body spec (JSON)")->required();
  certify->add_option("--k", cert_args.k, "Turn scale 1/k");
  certify->add_option("--m", cert_args.m, "Net parameter m");
  certify->add_option("--j", cert_args.j, "Net parameter j");
  certify->add_option("--eps0", cert_args.eps0, "Distance budget")->required();
  certify->add_option("--out", cert_args.out, "Certificate JSON");
  certify->add_option("--csv", cert_args.csv, "Per-witness residual table");
  certify->add_flag("--quiet", cert_args.quiet, "Print only the summary line");

  SurveyArgs survey_args;
  auto* surv = app.add_subcommand("survey", "Sampled turn detection over a product net");
  surv->add_option("--body1", survey_args.body1, "Body spec (JSON)")->required();
  surv->add_option("--body2", survey_args.body2, "Second body: survey the difference map");
  surv->add_option("--eta", survey_args.eta, "Direction net radius")->required();
  surv->add_option("--tangent-eta", survey_args.tangent_eta, "Tangent net radius (default --eta)");
  surv->add_option("--epsilon", survey_args.epsilon, "Largest lambda and mu");
  surv->add_option("--grid", survey_args.grid, "Geometric grid size");
  surv->add_option("--csv", survey_args.csv, "Verdict table");

  HedgehogArgs hh_args;
  auto* hh = app.add_subcommand("hedgehog", "Sample a planar hedgehog h = hK - hL");
  hh->add_option("--hk", hh_args.hk, "Support function of K in t")->required();
  hh->add_option("--hl", hh_args.hl, "Support function of L in t");
  hh->add_option("--n", hh_args.n, "Sample count");
  hh->add_option("--svg", hh_args.svg, "SVG output");
  hh->add_option("--csv", hh_args.csv, "CSV output");

  std::string config_path;
  auto* runcfg = app.add_subcommand("run", "Run a command described by a JSON config");
  runcfg->add_option("config", config_path, "Config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }
  if (jobs > 0) vh::set_default_jobs(jobs);

  if (net->parsed()) return cmd_net(net_args);
  if (approx->parsed()) return cmd_approx(approx_args);
  if (round->parsed()) return cmd_round(round_args);
  if (certify->parsed()) return cmd_certify(cert_args);
  if (surv->parsed()) return cmd_survey(survey_args);
  if (hh->parsed()) return cmd_hedgehog(hh_args);
  return run_config(config_path, depth);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv, 0);
  } catch (const vh::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const vh::ConstructionError& e) {
    std::cerr << "construction failed in " << e.stage() << ": " << e.what() << '\n';
    return kConstruction;
  } catch (const vh::SolverError& e) {
    std::cerr << "solver failed: " << e.what() << '\n' << e.trace() << '\n';
    return kConstruction;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConstruction;
  }
}
