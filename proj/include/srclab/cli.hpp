#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srclab/catalog.hpp"
#include "srclab/report_json.hpp"
#include "srclab/spec_format.hpp"
#include "srclab/verifier.hpp"

namespace srclab {

namespace cli {

/// Bad invocation or unreadable input; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError(std::string("bad number '") + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

struct Source {
  std::string builtin;
  std::string spec_file;
  std::string pi;
};

inline ManifoldSpec load_spec(const Source& s) {
  if (!s.builtin.empty() && !s.spec_file.empty()) throw UsageError("give either --builtin or --spec, not both");
  if (!s.builtin.empty()) return builtin(s.builtin).spec;
  if (!s.spec_file.empty()) return parse_manifold(read_file(s.spec_file));
  throw UsageError("one of --builtin or --spec is required");
}

/// `const:a,b,...` or `file:<path>` with one expression per line.
inline std::optional<OneFormData> load_pi(const std::string& arg, const ManifoldSpec& spec) {
  if (arg.empty()) return std::nullopt;
  OneFormData pi;
  if (arg.rfind("const:", 0) == 0) {
    pi = OneFormData::constant(parse_numbers(arg.substr(6), "--pi"));
  } else if (arg.rfind("file:", 0) == 0) {
    pi.components = parse_oneform_lines(read_file(arg.substr(5)), spec.coords);
  } else {
    throw UsageError("--pi expects const:a,b,... or file:<path>");
  }
  if (static_cast<int>(pi.components.size()) != spec.ell) {
    throw UsageError("--pi has " + std::to_string(pi.components.size()) + " components, horizontal rank is " +
                     std::to_string(spec.ell));
  }
  return pi;
}

inline void add_source(CLI::App* cmd, Source& s, bool with_pi = true) {
  auto* b = cmd->add_option("--builtin", s.builtin, "catalog entry name");
  auto* f = cmd->add_option("--spec", s.spec_file, "manifold description file");
  b->excludes(f);
  if (with_pi) cmd->add_option("--pi", s.pi, "one-form: const:a,b,... or file:<path>");
}

inline std::string index_label(const std::string& name, std::initializer_list<int> idx) {
  std::string s = name + "[";
  bool first = true;
  for (int i : idx) {
    s += (first ? "" : ",") + std::to_string(i + 1);
    first = false;
  }
  return s + "]";
}

inline void print_value(std::ostream& out, const std::string& label, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  out << label << " = " << buf << "\n";
}

inline void print_tensor(std::ostream& out, const std::string& name, const Matrix& t) {
  for (int i = 0; i < t.extent(0); ++i)
    for (int j = 0; j < t.extent(1); ++j) print_value(out, index_label(name, {i, j}), t(i, j));
}

inline void print_tensor(std::ostream& out, const std::string& name, const Tensor3& t) {
  for (int i = 0; i < t.extent(0); ++i)
    for (int j = 0; j < t.extent(1); ++j)
      for (int k = 0; k < t.extent(2); ++k) print_value(out, index_label(name, {i, j, k}), t(i, j, k));
}

inline void print_tensor(std::ostream& out, const std::string& name, const Tensor4& t) {
  for (int i = 0; i < t.extent(0); ++i)
    for (int j = 0; j < t.extent(1); ++j)
      for (int k = 0; k < t.extent(2); ++k)
        for (int h = 0; h < t.extent(3); ++h) print_value(out, index_label(name, {i, j, k, h}), t(i, j, k, h));
}

inline const std::vector<std::string>& tensor_names() {
  static const std::vector<std::string> names = {"K", "R", "S", "Sbar", "C", "Cbar", "W", "Wbar",
                                                 "coeff", "Gamma", "torsion", "g", "Omega", "M", "Lambda", "pi_char"};
  return names;
}

/// Prints one tensor at one point. Four-index curvature tensors print
/// entry [i,j,k,h] as the e_h-component of X(e_i,e_j)e_k.
inline void eval_tensor(std::ostream& out, const ManifoldSpec& spec, const std::optional<OneFormData>& pi,
                        const std::string& name, const std::vector<double>& point) {
  const auto shared = std::make_shared<const ManifoldSpec>(spec);
  const OneFormData form = detail::resolve_oneform(spec, pi);
  const ConnectionField nabla(ConnectionKind::kSubRiemannian, shared, std::nullopt);
  const ConnectionField semi(ConnectionKind::kSemiSubRiemannian, shared, form);
  auto K = [&] { return schouten_curvature(nabla, point); };
  auto R = [&] { return schouten_curvature(semi, point); };
  if (name == "K") return print_tensor(out, name, K().curv);
  if (name == "R") return print_tensor(out, name, R().curv);
  if (name == "S") return print_tensor(out, name, s_tensor(K()));
  if (name == "Sbar") return print_tensor(out, name, s_tensor(R()));
  if (name == "C") return print_tensor(out, name, conformal_tensor(K()));
  if (name == "Cbar") return print_tensor(out, name, conformal_tensor(R()));
  if (name == "W") return print_tensor(out, name, projective_tensor(K()));
  if (name == "Wbar") return print_tensor(out, name, projective_tensor(R()));
  if (name == "coeff") return print_tensor(out, name, nabla.coefficients(point));
  if (name == "Gamma") return print_tensor(out, name, semi.coefficients(point));
  if (name == "torsion") return print_tensor(out, name, torsion(semi, point));
  const FrameSnapshot snap = snapshot(spec, point);
  if (name == "g") return print_tensor(out, name, snap.gram);
  if (name == "Omega") return print_tensor(out, name, snap.omega);
  if (name == "M") return print_tensor(out, name, snap.mcoef);
  if (name == "Lambda") return print_tensor(out, name, snap.lambda);
  if (name == "pi_char") {
    const CharacteristicTensor t = characteristic_tensor(spec, form, point);
    print_tensor(out, name, t.pi_lower);
    return print_value(out, "alpha", t.alpha);
  }
  throw UsageError("unknown tensor '" + name + "'");
}

inline void print_summary(std::ostream& out, const Report& r) {
  for (const auto& c : r.checks) {
    char buf[64];
    if (c.skipped_reason) {
      out << c.id << "  skip  " << *c.skipped_reason << "\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.3e", c.max_rel_residual);
    out << c.id << "  " << (c.pass ? "pass" : "FAIL") << "  rel " << buf << "  " << c.description << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

}  // namespace cli

/// Entry point for the `srclab` tool. Returns 0 on success, 1 when a
/// verification fails, 2 on usage or input errors.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"numerical sub-Riemannian tensor calculus"};
  app.require_subcommand(1);

  cli::Source vsrc;
  SuiteConfig cfg;
  std::string json_path;
  auto* verify = app.add_subcommand("verify", "run the identity checks at sampled points");
  cli::add_source(verify, vsrc);
  verify->add_option("--points", cfg.points, "sample count")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--tol", cfg.tol, "relative tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--json", json_path, "write the JSON report here ('-' for stdout)");

  cli::Source esrc;
  std::string tensor, point_text;
  auto* eval = app.add_subcommand("eval", "print one tensor at one point");
  cli::add_source(eval, esrc);
  eval->add_option("--tensor", tensor, "one of K R S Sbar C Cbar W Wbar coeff Gamma torsion g Omega M Lambda pi_char")
      ->required();
  eval->add_option("--point", point_text, "comma-separated coordinates")->required();

  auto* catalog = app.add_subcommand("catalog", "list built-in manifolds");
  auto* checks = app.add_subcommand("checks", "list the check table");

  std::string parse_path;
  auto* parse = app.add_subcommand("parse", "validate a manifold description file");
  parse->add_option("file", parse_path, "description file")->required();

  cli::Source gsrc;
  SuiteConfig gcfg;
  auto* group = app.add_subcommand("group", "test the group-manifold conditions at sampled points");
  cli::add_source(group, gsrc);
  group->add_option("--points", gcfg.points)->check(CLI::PositiveNumber);
  group->add_option("--seed", gcfg.seed);
  group->add_option("--tol", gcfg.tol)->check(CLI::PositiveNumber);

  cli::Source fsrc;
  SuiteConfig fcfg;
  auto* flat = app.add_subcommand("flatness", "test the flatness criterion of D at sampled points");
  cli::add_source(flat, fsrc);
  flat->add_option("--points", fcfg.points)->check(CLI::PositiveNumber);
  flat->add_option("--seed", fcfg.seed);
  flat->add_option("--tol", fcfg.tol)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*verify) {
      const ManifoldSpec spec = cli::load_spec(vsrc);
      const Report rep = run_suite(spec, cli::load_pi(vsrc.pi, spec), cfg);
      cli::print_summary(json_path == "-" ? err : out, rep);
      if (!json_path.empty()) {
        const std::string text = to_json(rep, utc_timestamp());
        if (json_path == "-") {
          out << text;
        } else {
          std::ofstream f(json_path, std::ios::binary);
          if (!f || !(f << text)) throw cli::UsageError("cannot write " + json_path);
        }
      }
      return rep.all_pass() ? 0 : 1;
    }
    if (*eval) {
      const ManifoldSpec spec = cli::load_spec(esrc);
      const std::vector<double> point = cli::parse_numbers(point_text, "--point");
      if (static_cast<int>(point.size()) != spec.n) {
        throw cli::UsageError("--point has " + std::to_string(point.size()) + " coordinates, dimension is " +
                              std::to_string(spec.n));
      }
      cli::eval_tensor(out, spec, cli::load_pi(esrc.pi, spec), tensor, point);
      return 0;
    }
    if (*catalog) {
      for (const auto& name : builtin_names()) {
        const CatalogEntry e = builtin(name);
        out << e.name << "  n=" << e.spec.n << " l=" << e.spec.ell << "  " << e.summary << "\n";
        out << "    one-forms:";
        for (const auto& v : e.oneforms) out << " " << v.name;
        out << "\n    expected: all checks pass";
        if (!e.expected_skips.empty()) {
          out << ", skipped:";
          for (const auto& s : e.expected_skips) out << " " << s;
        }
        if (e.spec.ell >= 3) out << "; C10 fails for non-zero pi";
        if (e.carnot) out << "; Carnot group";
        if (e.involutive) out << "; involutive";
        out << "\n";
      }
      return 0;
    }
    if (*checks) {
      for (const auto& c : check_table()) {
        out << c.id << "  rank>=" << c.required_rank << (c.needs_pi ? "  pi  " : "      ") << c.description << "\n"
            << "     " << c.paper_ref << "\n";
      }
      return 0;
    }
    if (*parse) {
      const ManifoldSpec spec = parse_manifold(cli::read_file(parse_path));
      out << "ok: " << spec.name << " n=" << spec.n << " l=" << spec.ell << "\n";
      return 0;
    }
    if (*group) {
      const ManifoldSpec spec = cli::load_spec(gsrc);
      const GroupManifoldResult g = check_group_manifold(spec, cli::load_pi(gsrc.pi, spec), gcfg);
      out << "connection: " << to_string(g.connection) << "\n";
      out << "verdict: " << to_string(g.verdict) << "\n";
      cli::print_value(out, "max |curvature|", g.max_curvature);
      cli::print_value(out, "max |torsion derivative|", g.max_torsion_derivative);
      for (const auto& e : g.evidence) out << "  " << e << "\n";
      return g.verdict == GroupVerdict::kHoldsAtSamples ? 0 : 1;
    }
    if (*flat) {
      const ManifoldSpec spec = cli::load_spec(fsrc);
      const FlatnessResult f = check_flatness_criterion(spec, cli::load_pi(fsrc.pi, spec), fcfg);
      int i = 0;
      for (const auto& r : f.records) {
        out << "point " << i++ << ": R_zero=" << r.r_zero << " S_zero=" << r.s_zero
            << " pi_matches=" << r.pi_matches << "\n";
      }
      out << "implication: " << (f.verdict ? "holds" : "violated") << "\n";
      return f.verdict ? 0 : 1;
    }
  } catch (const cli::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace srclab
