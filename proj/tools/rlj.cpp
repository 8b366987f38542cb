#include <iostream>

#include "CLI11.hpp"
#include "rlj/cli.hpp"

namespace {

using namespace rlj;
using namespace rlj::cli;

int emit(const CommandResult& r, const std::string& out_path) {
  for (const auto& f : r.files) io::write_text_file(f.path, f.text);
  if (out_path.empty())
    std::cout << r.result.dump(2) << "\n";
  else
    io::write_json_file(out_path, r.result);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlj: spectral data of reflectionless Jacobi matrices"};
  app.require_subcommand(1);
  std::string out_path;
  std::string profile_name;
  app.add_option("--out", out_path, "write the JSON result here instead of stdout");
  app.add_option("--profile", profile_name, "tolerance profile (default, fast, strict); overrides RLJ_TOLERANCE_PROFILE");

  MetricArgs metric;
  auto* c_metric = app.add_subcommand("metric", "Hausdorff, symmetric-difference and delta distances of two sets");
  c_metric->add_option("--a", metric.a, "first set (JSON)")->required()->check(CLI::ExistingFile);
  c_metric->add_option("--b", metric.b, "second set (JSON)")->required()->check(CLI::ExistingFile);

  VerifyArgs verify;
  double v_y = 0.0, v_tol = 0.0;
  bool v_no_spectrum = false;
  auto* c_verify = app.add_subcommand("verify", "reflectionless check of J on a set, and sigma(J) within the set");
  c_verify->add_option("--jacobi", verify.jacobi)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--set", verify.set)->required()->check(CLI::ExistingFile);
  auto* o_vy = c_verify->add_option("--y", v_y, "imaginary offset of the sample points");
  auto* o_vtol = c_verify->add_option("--tol", v_tol, "pass threshold for max |Re g_n|");
  c_verify->add_option("--n-min", verify.n_min);
  c_verify->add_option("--n-max", verify.n_max);
  c_verify->add_flag("--no-spectrum", v_no_spectrum, "skip the spectral inclusion check");

  ForwardArgs forward;
  double f_radius = 0.0;
  auto* c_forward = app.add_subcommand("forward", "xi (and torus data / nu_+ when a set is given) of J");
  c_forward->add_option("--jacobi", forward.jacobi)->required()->check(CLI::ExistingFile);
  c_forward->add_option("--set", forward.set)->check(CLI::ExistingFile);
  auto* o_fr = c_forward->add_option("--radius", f_radius);
  c_forward->add_option("--grid", forward.grid, "number of sample points in (-R, R)");
  c_forward->add_option("--y", forward.y);
  c_forward->add_option("--snap", forward.snap);
  c_forward->add_option("--csv", forward.csv, "write t, Re H, Im H, xi samples");

  ReconstructArgs recon;
  int r_depth = 0;
  auto* c_recon = app.add_subcommand("reconstruct", "J from (nu_+, nu_-, A)");
  c_recon->add_option("--nu-plus", recon.nu_plus)->required()->check(CLI::ExistingFile);
  c_recon->add_option("--nu-minus", recon.nu_minus)->required()->check(CLI::ExistingFile);
  c_recon->add_option("--A", recon.a_const);
  auto* o_rd = c_recon->add_option("--depth", r_depth);

  TorusArgs torus;
  int t_depth = 0, t_nodes = 0;
  auto* c_torus = app.add_subcommand("torus", "J in R_0(K) from torus coordinates (mu, sigma)");
  c_torus->add_option("--set", torus.set)->required()->check(CLI::ExistingFile);
  c_torus->add_option("--mu", torus.mu)->delimiter(',');
  c_torus->add_option("--sigma", torus.sigma)->delimiter(',');
  auto* o_td = c_torus->add_option("--depth", t_depth);
  auto* o_tn = c_torus->add_option("--nodes", t_nodes, "ac nodes per band");

  TodaArgs toda;
  auto* c_toda = app.add_subcommand("toda", "Toda flow of a periodic Jacobi matrix");
  c_toda->add_option("--jacobi", toda.jacobi)->required()->check(CLI::ExistingFile);
  c_toda->add_option("--poly", toda.poly, "coefficients c0,c1,... of p")->delimiter(',');
  c_toda->add_option("--t-end", toda.t_end);
  c_toda->add_option("--dt", toda.dt);
  c_toda->add_option("--record-every", toda.record_every);
  c_toda->add_option("--csv", toda.csv, "trajectory: t, a..., b..., band endpoints");

  ApproximateArgs approx;
  std::string a_schedule;
  int a_depth = 0;
  auto* c_approx = app.add_subcommand("approximate", "finite-gap approximants J_n in R_0(P_n) of J in R(B)");
  c_approx->add_option("--set", approx.set)->required()->check(CLI::ExistingFile);
  c_approx->add_option("--xi", approx.xi, "Krein function (omit for a random one from --seed)")
      ->check(CLI::ExistingFile);
  c_approx->add_option("--split", approx.split)->required()->check(CLI::ExistingFile);
  c_approx->add_option("--schedule", a_schedule, "n:delta,n:delta,...")->required();
  c_approx->add_option("--random-pieces", approx.random_pieces);
  c_approx->add_option("--seed", approx.seed);
  auto* o_ad = c_approx->add_option("--depth", a_depth);
  c_approx->add_option("--csv", approx.csv, "per-stage diagnostics");

  std::string descriptor;
  auto* c_run = app.add_subcommand("run", "execute a JSON run descriptor");
  c_run->add_option("descriptor", descriptor)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  try {
    const ToleranceProfile prof = profile_name.empty() ? profile_from_env() : profile_by_name(profile_name);
    if (*c_metric) return emit(cmd_metric(metric), out_path);
    if (*c_verify) {
      if (o_vy->count()) verify.y = v_y;
      if (o_vtol->count()) verify.tol = v_tol;
      verify.spectrum = !v_no_spectrum;
      return emit(cmd_verify(verify, prof), out_path);
    }
    if (*c_forward) {
      if (o_fr->count()) forward.radius = f_radius;
      return emit(cmd_forward(forward, prof), out_path);
    }
    if (*c_recon) {
      if (o_rd->count()) recon.depth = r_depth;
      return emit(cmd_reconstruct(recon, prof), out_path);
    }
    if (*c_torus) {
      if (o_td->count()) torus.depth = t_depth;
      if (o_tn->count()) torus.nodes = t_nodes;
      return emit(cmd_torus(torus, prof), out_path);
    }
    if (*c_toda) return emit(cmd_toda(toda, prof), out_path);
    if (*c_approx) {
      approx.schedule = parse_schedule(a_schedule);
      if (o_ad->count()) approx.depth = a_depth;
      return emit(cmd_approximate(approx, prof), out_path);
    }
    if (*c_run) {
      const auto d = load_descriptor(descriptor);
      const auto r = run_descriptor(d, prof);
      for (const auto& f : r.files) io::write_text_file(f.path, f.text);
      if (d.out_json.empty()) emit({r.result, {}, r.exit_code}, out_path);
      return r.exit_code;
    }
  } catch (const ValidationError& e) {
    std::cerr << "rlj: invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "rlj: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}
