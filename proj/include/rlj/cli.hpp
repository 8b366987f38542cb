#pragma once

// Command implementations behind the `rlj` tool. Each command takes plain
// option structs and returns a JSON result plus any side files (CSV), so the
// same code serves the flag interface and JSON run descriptors.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rlj/approx.hpp"
#include "rlj/error.hpp"
#include "rlj/io.hpp"
#include "rlj/jacobi.hpp"
#include "rlj/krein.hpp"
#include "rlj/measures.hpp"
#include "rlj/sets.hpp"
#include "rlj/spectral.hpp"
#include "rlj/toda.hpp"

namespace rlj::cli {

using io::json;

enum ExitCode { kOk = 0, kCheckFailed = 1, kValidation = 2, kNumerical = 3 };

struct ToleranceProfile {
  std::string name = "default";
  int nodes_per_band = 256;
  int depth = 40;
  double y = 1e-3;
  double tol = 1e-2;
  int samples_per_band = 24;
};

inline ToleranceProfile profile_by_name(const std::string& name) {
  ToleranceProfile p;
  p.name = name;
  if (name == "default") return p;
  if (name == "fast") {
    p.nodes_per_band = 96;
    p.depth = 24;
    p.samples_per_band = 8;
    return p;
  }
  if (name == "strict") {
    p.nodes_per_band = 1024;
    p.depth = 80;
    p.y = 1e-4;
    p.tol = 1e-3;
    p.samples_per_band = 64;
    return p;
  }
  throw ValidationError("unknown tolerance profile \"" + name + "\" (expected default, fast or strict)");
}

// RLJ_TOLERANCE_PROFILE selects the defaults; unset means "default".
inline ToleranceProfile profile_from_env() {
  const char* v = std::getenv("RLJ_TOLERANCE_PROFILE");
  return profile_by_name(v && *v ? v : "default");
}

struct OutputFile {
  std::string path;
  std::string text;
};

struct CommandResult {
  json result;
  std::vector<OutputFile> files;
  int exit_code = kOk;
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------- metric

struct MetricArgs {
  std::string a, b;
};

inline CommandResult cmd_metric(const MetricArgs& args) {
  const auto k1 = io::set_from_json(io::read_json_file(args.a));
  const auto k2 = io::set_from_json(io::read_json_file(args.b));
  return {{{"hausdorff", hausdorff(k1, k2)}, {"symmdiff", lebesgue_symmdiff(k1, k2)}, {"delta", delta_metric(k1, k2)}},
          {}};
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string jacobi, set;
  std::optional<double> y, tol;
  long n_min = -2, n_max = 2;
  bool spectrum = true;
};

inline CommandResult cmd_verify(const VerifyArgs& args, const ToleranceProfile& prof) {
  const auto jm = io::jacobi_from_json(io::read_json_file(args.jacobi));
  const auto k = io::set_from_json(io::read_json_file(args.set));
  ReflectionlessOptions opt;
  opt.y = args.y.value_or(prof.y);
  opt.tol = args.tol.value_or(prof.tol);
  opt.n_min = args.n_min;
  opt.n_max = args.n_max;
  opt.samples_per_band = prof.samples_per_band;
  if (!jm.is_periodic()) {
    detail::require_site_in_window(jm, opt.n_min);
    detail::require_site_in_window(jm, opt.n_max);
  }
  CommandResult out;
  const auto rep = is_reflectionless(jm, k, opt);
  out.result["reflectionless"] = io::to_json(rep);
  bool pass = rep.pass;
  if (args.spectrum) {
    const auto sp = spectrum_in_set(jm, k);
    out.result["spectrum_in_set"] = io::to_json(sp);
    pass = pass && sp.pass;
  }
  out.result["pass"] = pass;
  out.result["y"] = opt.y;
  out.result["tol"] = opt.tol;
  out.exit_code = pass ? kOk : kCheckFailed;
  return out;
}

// ---------------------------------------------------------------- forward

struct ForwardArgs {
  std::string jacobi;
  std::string set;  // optional
  std::optional<double> radius;
  int grid = 2001;
  double y = 1e-5;
  double snap = 0.02;
  std::string csv;
};

inline CommandResult cmd_forward(const ForwardArgs& args, const ToleranceProfile& prof) {
  const auto jm = io::jacobi_from_json(io::read_json_file(args.jacobi));
  std::optional<FiniteGapSet> k;
  if (!args.set.empty()) k = io::set_from_json(io::read_json_file(args.set));
  const double r = args.radius ? *args.radius : (k ? k->radius() : 0.0);
  require(r > 0.0, "forward needs --radius or --set (the set's radius is used)");
  require(args.grid >= 2, "grid needs at least 2 points");
  std::vector<double> grid;
  for (int i = 0; i < args.grid; ++i) grid.push_back(-r + (i + 0.5) * 2.0 * r / args.grid);
  const auto xi = xi_from_J(jm, r, grid, {args.y, args.snap});
  CommandResult out;
  out.result["xi"] = io::to_json(xi);
  out.result["A"] = constant_A(xi);
  out.result["b0"] = jm.b(0);
  out.result["a0"] = jm.a(0);
  out.result["a_minus1"] = jm.a(-1);
  if (k) {
    const auto p = torus_from_jacobi(jm, *k);
    out.result["torus"] = io::to_json(p);
    const auto data = spectral_data_from_torus(*k, p, prof.nodes_per_band);
    out.result["xi_K"] = io::to_json(data.xi);
    out.result["nu_plus"] = io::to_json(data.nu_plus);
    out.result["nu_minus"] = io::to_json(data.nu_minus);
    out.result["A_K"] = data.a_const;
  }
  if (!args.csv.empty()) {
    std::ostringstream os;
    os << "t,re_h,im_h,xi\n";
    for (double t : grid) {
      const cdouble h = h_function(jm, {t, args.y});
      os << fmt(t) << ',' << fmt(h.real()) << ',' << fmt(h.imag()) << ',' << fmt(xi(t)) << '\n';
    }
    out.files.push_back({args.csv, os.str()});
  }
  return out;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string nu_plus, nu_minus;
  double a_const = 0.0;
  std::optional<int> depth;
};

inline json reconstruction_json(const Reconstruction& rec) {
  return {{"jacobi", io::to_json(rec.jacobi)},
          {"determined_plus", rec.determined_plus},
          {"determined_minus", rec.determined_minus},
          {"warnings", rec.warnings}};
}

inline CommandResult cmd_reconstruct(const ReconstructArgs& args, const ToleranceProfile& prof) {
  const auto np = io::measure_from_json(io::read_json_file(args.nu_plus));
  const auto nm = io::measure_from_json(io::read_json_file(args.nu_minus));
  const auto rec = reconstruct_from_halfline(np, nm, args.a_const, args.depth.value_or(prof.depth));
  return {reconstruction_json(rec), {}};
}

// ---------------------------------------------------------------- torus

struct TorusArgs {
  std::string set;
  std::vector<double> mu;
  std::vector<int> sigma;
  std::optional<int> depth;
  std::optional<int> nodes;
};

inline CommandResult cmd_torus(const TorusArgs& args, const ToleranceProfile& prof) {
  const auto k = io::set_from_json(io::read_json_file(args.set));
  TorusPoint p{args.mu, args.sigma};
  if (p.sigma.empty()) p.sigma.assign(p.mu.size(), 0);
  const auto rec = jacobi_from_torus(k, p, args.depth.value_or(prof.depth),
                                     {.nodes_per_band = args.nodes.value_or(prof.nodes_per_band)});
  CommandResult out{reconstruction_json(rec), {}};
  out.result["torus"] = io::to_json(p);
  json circle = json::array();
  for (const auto& z : torus_circle_encode(k, p)) circle.push_back({z.real(), z.imag()});
  out.result["circle"] = circle;
  return out;
}

// ---------------------------------------------------------------- toda

struct TodaArgs {
  std::string jacobi;
  std::vector<double> poly{0.0, 1.0};
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;
  std::string csv;
};

inline CommandResult cmd_toda(const TodaArgs& args, const ToleranceProfile& prof) {
  const auto j0 = io::periodic_from_json(io::read_json_file(args.jacobi));
  const auto tr = toda_flow(j0, args.poly, args.t_end, args.dt, {.record_every = args.record_every});
  const auto s0 = spectrum(j0);
  const auto& jt = tr.states.back().j;
  const auto st = spectrum(jt, s0.radius());
  CommandResult out;
  out.result["final"] = io::to_json(jt);
  out.result["t_end"] = tr.states.back().t;
  out.result["steps"] = tr.steps;
  out.result["spectrum_start"] = io::to_json(s0);
  out.result["spectrum_end"] = io::to_json(st);
  out.result["band_edge_drift"] = band_edge_drift(s0, st);
  out.result["trace_drift"] = std::abs(block_trace(jt) - block_trace(j0));
  out.result["trace_sq_drift"] = std::abs(block_trace_sq(jt) - block_trace_sq(j0));
  out.result["max_resymmetrization"] = tr.max_resymmetrization;
  ReflectionlessOptions ro;
  ro.y = prof.y;
  ro.tol = prof.tol;
  ro.n_min = 0;
  ro.n_max = j0.period() - 1;
  ro.samples_per_band = prof.samples_per_band;
  out.result["reflectionless_end"] = io::to_json(is_reflectionless(jt.to_jacobi(), s0, ro));
  if (!args.csv.empty()) {
    std::ostringstream os;
    const int p = j0.period();
    os << "t";
    for (int n = 0; n < p; ++n) os << ",a" << n;
    for (int n = 0; n < p; ++n) os << ",b" << n;
    for (std::size_t i = 0; i < s0.band_count(); ++i) os << ",band" << i << "_lo,band" << i << "_hi";
    os << '\n';
    for (const auto& s : tr.states) {
      os << fmt(s.t);
      for (double x : s.j.a) os << ',' << fmt(x);
      for (double x : s.j.b) os << ',' << fmt(x);
      const auto sp = spectrum(s.j, s0.radius());
      for (std::size_t i = 0; i < s0.band_count(); ++i) {
        if (i < sp.band_count())
          os << ',' << fmt(sp.bands()[i].lo) << ',' << fmt(sp.bands()[i].hi);
        else
          os << ",,";
      }
      os << '\n';
    }
    out.files.push_back({args.csv, os.str()});
  }
  return out;
}

// ---------------------------------------------------------------- approximate

// Random step xi on the gaps of B (1/2 on B, 1 left, 0 right): each gap gets
// `pieces` pieces with values in {0, 1/4, 1/2, 3/4, 1}.
inline KreinFunction random_gap_xi(const FiniteGapSet& b, int pieces, std::uint64_t seed) {
  require(pieces >= 1, "random xi needs at least one piece per gap");
  std::mt19937_64 rng(seed);
  const double r = b.radius();
  std::vector<XiPiece> out{{-r, b.min(), 1.0}};
  const auto gs = b.gaps();
  for (std::size_t i = 0; i < b.band_count(); ++i) {
    out.push_back({b.bands()[i].lo, b.bands()[i].hi, 0.5});
    if (i >= gs.size()) continue;
    std::vector<double> cuts;
    for (int k = 1; k < pieces; ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      cuts.push_back(gs[i].lo + (0.1 + 0.8 * u) * gs[i].length());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), gs[i].lo);
    cuts.push_back(gs[i].hi);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      out.push_back({cuts[k], cuts[k + 1], 0.25 * static_cast<double>(rng() % 5)});
  }
  out.push_back({b.max(), r, 0.0});
  return KreinFunction::from_pieces(r, out);
}

struct ApproximateArgs {
  std::string set;
  std::string xi;  // file; empty means random
  int random_pieces = 5;
  std::string split;
  std::vector<SubdivisionPlan> schedule;
  std::optional<int> depth;
  std::uint64_t seed = 0;
  std::string csv;
};

inline CommandResult cmd_approximate(const ApproximateArgs& args, const ToleranceProfile& prof) {
  const auto b = io::set_from_json(io::read_json_file(args.set));
  const KreinFunction xi = args.xi.empty() ? random_gap_xi(b, args.random_pieces, args.seed)
                                           : io::xi_from_json(io::read_json_file(args.xi));
  const SplitSpec split = io::split_from_json(io::read_json_file(args.split));
  ApproxOptions opt;
  opt.depth = args.depth.value_or(prof.depth);
  opt.nodes_per_band = prof.nodes_per_band;
  opt.reflectionless.y = prof.y;
  opt.reflectionless.tol = prof.tol;
  opt.reflectionless.samples_per_band = prof.samples_per_band;
  const auto run = approximate_reflectionless(b, xi, split, args.schedule, opt);
  CommandResult out;
  out.result["xi"] = io::to_json(xi);
  out.result["seed"] = args.seed;
  out.result["target"] = reconstruction_json(run.target.rec);
  json stages = json::array();
  std::ostringstream csv;
  csv << "stage,n,delta,bands,operator_distance,symmdiff,nu_plus_distance,reflectionless_max,reflectionless_pass,"
         "spectrum_pass,split_atoms,greedy_atoms,deleted_bands\n";
  bool all_pass = true;
  for (std::size_t i = 0; i < run.stages.size(); ++i) {
    const auto& s = run.stages[i];
    all_pass = all_pass && s.reflectionless.pass && s.spectrum.pass;
    stages.push_back({{"n", s.plan.n},
                      {"delta", s.plan.delta},
                      {"set", io::to_json(s.set)},
                      {"xi", io::to_json(s.xi)},
                      {"torus", io::to_json(s.torus)},
                      {"jacobi", io::to_json(s.rec.jacobi)},
                      {"warnings", s.rec.warnings},
                      {"operator_distance", s.operator_distance},
                      {"symmdiff", s.symmdiff},
                      {"nu_plus_distance", s.nu_plus_distance},
                      {"reflectionless", io::to_json(s.reflectionless)},
                      {"spectrum_in_set", io::to_json(s.spectrum)},
                      {"split_atoms", s.split_atoms},
                      {"greedy_atoms", s.greedy_atoms},
                      {"deleted_bands", s.deleted_bands}});
    csv << i << ',' << s.plan.n << ',' << fmt(s.plan.delta) << ',' << s.set.band_count() << ','
        << fmt(s.operator_distance) << ',' << fmt(s.symmdiff) << ',' << fmt(s.nu_plus_distance) << ','
        << fmt(s.reflectionless.max_abs_re) << ',' << (s.reflectionless.pass ? 1 : 0) << ','
        << (s.spectrum.pass ? 1 : 0) << ',' << s.split_atoms << ',' << s.greedy_atoms << ',' << s.deleted_bands
        << '\n';
  }
  out.result["stages"] = stages;
  out.result["all_stages_pass"] = all_pass;
  if (!args.csv.empty()) out.files.push_back({args.csv, csv.str()});
  return out;
}

// ---------------------------------------------------------------- run descriptors

inline std::vector<SubdivisionPlan> parse_schedule(const std::string& text) {
  // "4:1e-2,16:1e-3"
  std::vector<SubdivisionPlan> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    require(colon != std::string::npos, "schedule entries look like n:delta");
    try {
      out.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ValidationError("bad schedule entry \"" + item + "\"");
    }
  }
  require(!out.empty(), "schedule is empty");
  return out;
}

// Descriptor: {"command": ..., "inputs": {name: path}, "params": {...},
// "seed": int, "outputs": {"json": path, "csv": path}}. Relative paths are
// resolved against the descriptor's directory.
struct Descriptor {
  std::string command;
  json inputs = json::object();
  json params = json::object();
  std::uint64_t seed = 0;
  std::string out_json, out_csv;
};

inline Descriptor load_descriptor(const std::string& path) {
  const json j = io::read_json_file(path);
  require(j.is_object(), "run descriptor must be a JSON object");
  Descriptor d;
  d.command = io::detail::get<std::string>(j, "command", "descriptor");
  if (j.contains("inputs")) d.inputs = j.at("inputs");
  if (j.contains("params")) d.params = j.at("params");
  if (j.contains("seed")) d.seed = io::detail::get<std::uint64_t>(j, "seed", "descriptor");
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).lexically_normal().string();
  };
  require(d.inputs.is_object(), "descriptor inputs must be an object of paths");
  for (auto& [k, v] : d.inputs.items()) {
    require(v.is_string(), "descriptor input \"" + k + "\" must be a path");
    const auto p = resolve(v.get<std::string>());
    if (!std::filesystem::exists(p)) throw ValidationError("descriptor input \"" + k + "\" not found: " + p);
    v = p;
  }
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (o.contains("json")) d.out_json = resolve(io::detail::get<std::string>(o, "json", "descriptor outputs"));
    if (o.contains("csv")) d.out_csv = resolve(io::detail::get<std::string>(o, "csv", "descriptor outputs"));
  }
  return d;
}

template <class T>
std::optional<T> opt_param(const json& params, const char* key) {
  if (!params.contains(key)) return std::nullopt;
  return io::detail::get<T>(params, key, "descriptor params");
}

inline std::string input_path(const Descriptor& d, const char* key, bool required = true) {
  if (!d.inputs.contains(key)) {
    if (required) throw ValidationError("descriptor for \"" + d.command + "\" needs input \"" + key + "\"");
    return {};
  }
  return d.inputs.at(key).get<std::string>();
}

inline CommandResult run_descriptor(const Descriptor& d, const ToleranceProfile& prof) {
  const auto& p = d.params;
  CommandResult out;
  if (d.command == "metric") {
    out = cmd_metric({input_path(d, "a"), input_path(d, "b")});
  } else if (d.command == "verify") {
    VerifyArgs a{input_path(d, "jacobi"), input_path(d, "set"), opt_param<double>(p, "y"), opt_param<double>(p, "tol")};
    a.n_min = opt_param<long>(p, "n_min").value_or(a.n_min);
    a.n_max = opt_param<long>(p, "n_max").value_or(a.n_max);
    out = cmd_verify(a, prof);
  } else if (d.command == "forward") {
    ForwardArgs a;
    a.jacobi = input_path(d, "jacobi");
    a.set = input_path(d, "set", false);
    a.radius = opt_param<double>(p, "radius");
    a.grid = opt_param<int>(p, "grid").value_or(a.grid);
    a.y = opt_param<double>(p, "y").value_or(a.y);
    a.csv = d.out_csv;
    out = cmd_forward(a, prof);
  } else if (d.command == "reconstruct") {
    ReconstructArgs a{input_path(d, "nu_plus"), input_path(d, "nu_minus"), opt_param<double>(p, "A").value_or(0.0),
                      opt_param<int>(p, "depth")};
    out = cmd_reconstruct(a, prof);
  } else if (d.command == "torus") {
    TorusArgs a{input_path(d, "set"), opt_param<std::vector<double>>(p, "mu").value_or(std::vector<double>{}),
                opt_param<std::vector<int>>(p, "sigma").value_or(std::vector<int>{}), opt_param<int>(p, "depth"),
                opt_param<int>(p, "nodes")};
    out = cmd_torus(a, prof);
  } else if (d.command == "toda") {
    TodaArgs a;
    a.jacobi = input_path(d, "jacobi");
    a.poly = opt_param<std::vector<double>>(p, "poly").value_or(a.poly);
    a.t_end = opt_param<double>(p, "t_end").value_or(a.t_end);
    a.dt = opt_param<double>(p, "dt").value_or(a.dt);
    a.record_every = opt_param<int>(p, "record_every").value_or(a.record_every);
    a.csv = d.out_csv;
    out = cmd_toda(a, prof);
  } else if (d.command == "approximate") {
    ApproximateArgs a;
    a.set = input_path(d, "set");
    a.xi = input_path(d, "xi", false);
    a.split = input_path(d, "split");
    a.random_pieces = opt_param<int>(p, "random_pieces").value_or(a.random_pieces);
    require(p.contains("schedule"), "approximate descriptor needs params.schedule");
    a.schedule = io::schedule_from_json(p.at("schedule"));
    a.depth = opt_param<int>(p, "depth");
    a.seed = d.seed;
    a.csv = d.out_csv;
    out = cmd_approximate(a, prof);
  } else {
    throw ValidationError("unknown command \"" + d.command + "\"");
  }
  out.result["command"] = d.command;
  out.result["seed"] = d.seed;
  out.result["profile"] = prof.name;
  if (!d.out_json.empty()) out.files.push_back({d.out_json, out.result.dump(2) + "\n"});
  return out;
}

}  // namespace rlj::cli
