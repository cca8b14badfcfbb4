#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "freelevy/cumulants.hpp"
#include "freelevy/error.hpp"
#include "freelevy/json_io.hpp"

namespace freelevy::cli {
namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
Json load_json(const std::string& arg) {
  auto pos = arg.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && (arg[pos] == '{' || arg[pos] == '['))
    return parse_json(arg);
  return parse_json(read_file(arg));
}

// A set expression such as "[0,1) + [2,3)", or a JSON array of [lo, hi] pairs.
SetExpr load_set(const std::string& arg) {
  auto pos = arg.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && arg.compare(pos, 2, "[[") == 0) return set_from_json(parse_json(arg));
  return parse_set_expr(arg);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  f << text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) fail(ErrorCode::kInvalidArgument, "grid must be lo:hi:n");
  try {
    std::size_t used = 0;
    double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    int n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    return linear_grid(lo, hi, n);
  } catch (const std::logic_error&) {
    fail(ErrorCode::kInvalidArgument, "grid must be lo:hi:n, got '" + text + "'");
  }
}

std::string density_csv(const SpectralDensity& d) {
  std::string s = "x,density,cdf\n";
  for (std::size_t i = 0; i < d.grid.size(); ++i)
    s += fmt17(d.grid[i]) + "," + fmt17(d.density[i]) + "," + fmt17(d.cdf[i]) + "\n";
  return s;
}

std::string vector_csv(const std::string& name, const std::vector<double>& v) {
  std::string s = "order," + name + "\n";
  for (std::size_t i = 0; i < v.size(); ++i) s += std::to_string(i + 1) + "," + fmt17(v[i]) + "\n";
  return s;
}

// Accepts "order,value" rows or a single value column, with a header row.
std::vector<double> read_vector_csv(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto comma = line.rfind(',');
    std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      double x = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      v.push_back(x);
    } catch (const std::logic_error&) {
      fail(ErrorCode::kParseError, "bad CSV value '" + cell + "'");
    }
  }
  return v;
}

FreeTriplet limit_law(const rmt::Ensemble& e) {
  switch (e.kind) {
    case rmt::EnsembleKind::kGue: return make_triplet(0.0, e.variance);
    case rmt::EnsembleKind::kWishart:
      return make_triplet(e.lambda, 0.0, LevyMeasure::dirac(1.0, e.lambda));
    case rmt::EnsembleKind::kFid: return e.triplet;
  }
  return make_triplet(0.0, 1.0);
}

// Sample range padded by 10%, with 0 and the limit-law atom candidates kept
// as exact grid points.
std::vector<double> ks_grid(const rmt::EigenSample& s) {
  double lo = s.eigenvalues.front(), hi = s.eigenvalues.back();
  double pad = 0.1 * std::max(hi - lo, 1.0);
  auto g = linear_grid(lo - pad, hi + pad, 2001);
  if (g.front() < 0.0 && g.back() > 0.0) g.push_back(0.0);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

Json error_json(const std::string& code, const std::string& message, double residual) {
  return Json{{"schema", kSchemaVersion},
              {"error", {{"code", code}, {"message", message}, {"residual", residual}}}};
}

struct Options {
  std::string out;
  std::string grid = "-3:3:601";
  std::string sidecar;
  std::string set;
  std::string field;
  std::string integrand;
  std::string model;
  std::string ensemble;
  std::string sequence;
  std::string target;
  std::string input;
  std::string from = "moments";
  std::string to = "free";
  std::string mode = "positive";
  std::string report;
  std::string density_out;
  std::vector<std::string> triplets;
  double eps = 1.0;
  double tol = 0.0;
  int order = 0;
  int nodes = 16;
  std::uint64_t seed = 0;
  bool inverse = false;
};

int dispatch(CLI::App& app, const Options& o, std::ostream& out) {
  auto got = [&](const char* name) { return app.got_subcommand(name); };
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) fail(ErrorCode::kInvalidArgument, std::string("missing ") + flag);
  };

  if (got("density")) {
    if (o.triplets.size() != 1) fail(ErrorCode::kInvalidArgument, "density takes one --triplet");
    auto u = triplet_from_json(load_json(o.triplets[0]));
    auto d = density_from_triplet(u, parse_grid(o.grid));
    if (o.tol > 0.0) check_mass(d, o.tol);
    emit(o.out, density_csv(d), out);
    std::string side = !o.sidecar.empty() ? o.sidecar : (o.out.empty() ? "" : o.out + ".json");
    if (!side.empty()) emit(side, dump_json(density_sidecar_to_json(d)), out);
    return 0;
  }
  if (got("convolve")) {
    if (o.triplets.size() < 2) fail(ErrorCode::kInvalidArgument, "convolve takes two or more --triplet");
    auto acc = triplet_from_json(load_json(o.triplets[0]));
    for (std::size_t i = 1; i < o.triplets.size(); ++i)
      acc = triplet_add(acc, triplet_from_json(load_json(o.triplets[i])));
    emit(o.out, dump_json(triplet_to_json(acc)), out);
    return 0;
  }
  if (got("bp")) {
    if (o.triplets.size() != 1) fail(ErrorCode::kInvalidArgument, "bp takes one --triplet");
    auto u = triplet_from_json(load_json(o.triplets[0]));
    emit(o.out, dump_json(triplet_to_json(o.inverse ? bp_lambda_inv(u) : bp_lambda(u))), out);
    return 0;
  }
  if (got("cumulants")) {
    std::vector<double> result;
    std::string name = o.to;
    if (!o.triplets.empty()) {
      if (o.order < 1) fail(ErrorCode::kInvalidArgument, "--order must be >= 1 with --triplet");
      auto u = triplet_from_json(load_json(o.triplets[0]));
      if (o.to == "free") result = free_cumulants_from_triplet(u, o.order).values;
      else if (o.to == "classical") result = classical_cumulants_from_triplet(u, o.order).values;
      else fail(ErrorCode::kInvalidArgument, "--to must be free or classical with --triplet");
    } else {
      need(o.input, "--in");
      auto v = read_vector_csv(read_file(o.input));
      if (o.from == "moments" && o.to == "free") result = moments_to_free_cumulants({v}).values;
      else if (o.from == "moments" && o.to == "classical") result = moments_to_classical_cumulants({v}).values;
      else if (o.from == "free" && o.to == "moments") result = free_cumulants_to_moments({v}).values;
      else if (o.from == "classical" && o.to == "moments") result = classical_cumulants_to_moments({v}).values;
      else if (o.from == "free" && o.to == "classical")
        result = moments_to_classical_cumulants(free_cumulants_to_moments({v})).values;
      else if (o.from == "classical" && o.to == "free")
        result = moments_to_free_cumulants(classical_cumulants_to_moments({v})).values;
      else fail(ErrorCode::kInvalidArgument, "unsupported conversion " + o.from + " -> " + o.to);
    }
    emit(o.out, vector_csv(name, result), out);
    return 0;
  }
  if (got("basis-triplet")) {
    need(o.field, "--field");
    auto f = field_from_json(load_json(o.field));
    emit(o.out, dump_json(triplet_to_json(triplet_of_set(f, load_set(o.set)))), out);
    return 0;
  }
  if (got("integrate")) {
    need(o.field, "--field");
    need(o.integrand, "--integrand");
    auto f = field_from_json(load_json(o.field));
    auto g = integrand_from_json(load_json(o.integrand));
    IntegralOptions io;
    io.nodes = o.nodes;
    auto res = integral_triplet_detailed(f, g, io);
    emit(o.out, dump_json(triplet_to_json(res.triplet)), out);
    if (!o.report.empty()) {
      auto ic = integrability_check(f, g);
      Json rep{{"schema", kSchemaVersion},
               {"exact", res.exact},
               {"approximation_error", res.approximation_error},
               {"integrability",
                {{"drift", ic.drift}, {"gaussian", ic.gaussian}, {"jumps", ic.jumps},
                 {"integrable", ic.integrable}}}};
      emit(o.report, dump_json(rep), out);
    }
    if (!o.density_out.empty())
      emit(o.density_out, density_csv(density_from_triplet(res.triplet, parse_grid(o.grid))), out);
    return 0;
  }
  if (got("levy-ito")) {
    need(o.field, "--field");
    emit(o.out, dump_json(levy_ito_to_json(levy_ito_split(field_from_json(load_json(o.field))))), out);
    return 0;
  }
  if (got("decompose")) {
    need(o.model, "--model");
    KingmanMode mode;
    if (o.mode == "positive") mode = KingmanMode::kPositive;
    else if (o.mode == "signed") mode = KingmanMode::kSigned;
    else fail(ErrorCode::kInvalidArgument, "--mode must be positive or signed");
    KingmanOptions ko;
    ko.eps = o.eps;
    auto k = kingman_decompose(model_from_json(load_json(o.model)), mode, ko);
    emit(o.out, dump_json(kingman_to_json(k)), out);
    return 0;
  }
  if (got("truncate")) {
    need(o.field, "--field");
    auto f = truncate_small_jumps(field_from_json(load_json(o.field)), o.eps);
    emit(o.out, dump_json(field_to_json(f)), out);
    return 0;
  }
  if (got("simulate")) {
    need(o.ensemble, "--ensemble");
    auto e = ensemble_from_json(load_json(o.ensemble));
    if (app.get_subcommand("simulate")->count("--seed") > 0) e.seed = o.seed;
    auto s = rmt::simulate(e);
    std::string csv = "eigenvalue\n";
    for (double x : s.eigenvalues) csv += fmt17(x) + "\n";
    emit(o.out, csv, out);
    if (!o.report.empty()) {
      bool custom = app.get_subcommand("simulate")->count("--grid") > 0;
      auto d = density_from_triplet(limit_law(e), custom ? parse_grid(o.grid) : ks_grid(s));
      auto ks = rmt::ks_report(s, d);
      Json rep{{"schema", kSchemaVersion}, {"ks", ks.statistic},       {"clamped", ks.clamped},
               {"empty_overlap", ks.empty_overlap}, {"warning", ks.warning},
               {"n", e.n},                 {"seed", e.seed},          {"kind", s.kind}};
      emit(o.report, dump_json(rep), out);
    }
    return 0;
  }
  if (got("check-convergence")) {
    need(o.sequence, "--sequence");
    need(o.target, "--target");
    Json js = load_json(o.sequence);
    if (!js.is_array() || js.empty()) fail(ErrorCode::kParseError, "--sequence must be a non-empty array");
    std::vector<FreeTriplet> seq;
    for (const auto& t : js) seq.push_back(triplet_from_json(t));
    ConvergenceOptions co;
    if (o.tol > 0.0) co.drift_tol = co.bump_tol = co.bracket_tol = co.ct_tol = o.tol;
    auto rep = convergence_diagnostic(seq, triplet_from_json(load_json(o.target)), co);
    emit(o.out, dump_json(convergence_to_json(rep)), out);
    return 0;
  }
  fail(ErrorCode::kInvalidArgument, "no subcommand");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free Levy basis toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "output path (stdout if omitted)"); };
  auto add_triplet = [&](CLI::App* s) {
    s->add_option("--triplet", o.triplets, "triplet JSON (path or inline)");
  };

  auto* density = app.add_subcommand("density", "spectral density of a free triplet as CSV");
  add_triplet(density);
  add_out(density);
  density->add_option("--grid", o.grid, "lo:hi:n");
  density->add_option("--sidecar", o.sidecar, "atoms/support JSON path (default <out>.json)");
  density->add_option("--tol", o.tol, "fail unless the recovered mass is within tol of 1");

  auto* convolve = app.add_subcommand("convolve", "free convolution of triplets");
  add_triplet(convolve);
  add_out(convolve);

  auto* cumulants = app.add_subcommand("cumulants", "moment/cumulant conversion");
  cumulants->add_option("--in", o.input, "CSV vector");
  add_triplet(cumulants);
  cumulants->add_option("--order", o.order, "number of cumulants from --triplet");
  cumulants->add_option("--from", o.from, "moments|free|classical");
  cumulants->add_option("--to", o.to, "moments|free|classical");
  add_out(cumulants);

  auto* bp = app.add_subcommand("bp", "Bercovici-Pata map on triplets");
  add_triplet(bp);
  bp->add_flag("--inverse", o.inverse, "free to classical");
  add_out(bp);

  auto* basis = app.add_subcommand("basis-triplet", "triplet of M(E) for a seed field");
  basis->add_option("--field", o.field, "field JSON");
  basis->add_option("--set", o.set, "set expression, e.g. [0,1)+[2,3)")->required();
  add_out(basis);

  auto* integrate = app.add_subcommand("integrate", "triplet of the integral of f against M");
  integrate->add_option("--field", o.field, "field JSON");
  integrate->add_option("--integrand", o.integrand, "integrand JSON");
  integrate->add_option("--nodes", o.nodes, "Gauss nodes per cell");
  integrate->add_option("--report", o.report, "exactness/integrability JSON path");
  integrate->add_option("--density-out", o.density_out, "density CSV path");
  integrate->add_option("--grid", o.grid, "lo:hi:n for --density-out");
  add_out(integrate);

  auto* ito = app.add_subcommand("levy-ito", "drift/Gaussian/jump split of a field");
  ito->add_option("--field", o.field, "field JSON");
  add_out(ito);

  auto* decompose = app.add_subcommand("decompose", "Kingman decomposition of a model");
  decompose->add_option("--model", o.model, "model JSON");
  decompose->add_option("--mode", o.mode, "positive|signed");
  decompose->add_option("--eps", o.eps, "tail threshold for the null-array check");
  add_out(decompose);

  auto* truncate = app.add_subcommand("truncate", "drop jumps with |t| <= eps");
  truncate->add_option("--field", o.field, "field JSON");
  truncate->add_option("--eps", o.eps, "jump threshold")->required();
  add_out(truncate);

  auto* simulate = app.add_subcommand("simulate", "random-matrix eigenvalues");
  simulate->add_option("--ensemble", o.ensemble, "ensemble JSON");
  simulate->add_option("--seed", o.seed, "override the ensemble seed");
  simulate->add_option("--report", o.report, "KS report JSON path");
  simulate->add_option("--grid", o.grid, "lo:hi:n model grid for the KS report");
  add_out(simulate);

  auto* conv = app.add_subcommand("check-convergence", "weak-convergence diagnostic");
  conv->add_option("--sequence", o.sequence, "JSON array of triplets");
  conv->add_option("--target", o.target, "target triplet JSON");
  conv->add_option("--tol", o.tol, "override every tolerance");
  add_out(conv);

  std::vector<const char*> argv{"freelevy"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("InvalidArgument", e.what(), 0.0).dump() << "\n";
    return 2;
  }

  try {
    return dispatch(app, o, out);
  } catch (const Error& e) {
    err << error_json(to_string(e.code()), e.what(), e.residual()).dump() << "\n";
    return is_numeric_failure(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << error_json("Internal", e.what(), 0.0).dump() << "\n";
    return 3;
  }
}

}  // namespace freelevy::cli
