#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "oracles.hpp"
#include "rlj/cli.hpp"

using namespace rlj;
using namespace rlj::cli;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(RLJ_DATA_DIR) + "/" + name; }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("rlj_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(count_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int count_ = 0;
};

std::string write(const TempDir& dir, const std::string& name, const io::json& j) {
  const auto p = dir.file(name);
  io::write_json_file(p, j);
  return p;
}

void write_outputs(const CommandResult& r) {
  for (const auto& f : r.files) io::write_text_file(f.path, f.text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Metric, Example) {
  const auto r = cmd_metric({data("k1.json"), data("k2.json")});
  EXPECT_EQ(r.result["delta"].get<double>(), 2.0);
  EXPECT_NEAR(r.result["hausdorff"].get<double>(), 1.5, 1e-15);
  EXPECT_NEAR(r.result["symmdiff"].get<double>(), 0.5, 1e-15);
}

TEST(Verify, FreeOnItsSpectrumAndOnAWrongSet) {
  const auto prof = profile_by_name("default");
  const auto ok = cmd_verify({data("free.json"), data("k22.json"), {}, {}}, prof);
  EXPECT_EQ(ok.exit_code, kOk);
  EXPECT_TRUE(ok.result["pass"].get<bool>());
  const auto bad = cmd_verify({data("free.json"), data("onegap.json"), {}, {}}, prof);
  EXPECT_EQ(bad.exit_code, kCheckFailed);
  VerifyArgs edge{data("free.json"), data("k22.json"), {}, {}};
  edge.n_max = 50;
  EXPECT_THROW(cmd_verify(edge, prof), ValidationError);
}

TEST(Torus, OneGapCoefficients) {
  const auto prof = profile_by_name("default");
  const auto r = cmd_torus({data("onegap.json"), {0.0}, {1}, 30, std::nullopt}, prof);
  EXPECT_EQ(r.result["determined_plus"].get<int>(), 30);
  const auto jm = io::jacobi_from_json(r.result["jacobi"]);
  const auto direct = jacobi_from_torus(io::set_from_json(io::read_json_file(data("onegap.json"))), {{0.0}, {1}}, 30);
  for (long n = -30; n <= 30; ++n) EXPECT_EQ(jm.b(n), direct.jacobi.b(n));
  EXPECT_NEAR(r.result["circle"][0][1].get<double>(), 1.0, 1e-15);
  EXPECT_THROW(cmd_torus({data("onegap.json"), {5.0}, {1}, 30, std::nullopt}, prof), ValidationError);
}

// forward on the period-2 operator, then reconstruct from the emitted measures
TEST(ForwardReconstruct, PeriodTwoChain) {
  TempDir dir;
  const auto prof = profile_by_name("default");
  ForwardArgs fa;
  fa.jacobi = data("period2.json");
  fa.set = data("period2_spectrum.json");
  fa.grid = 501;
  fa.csv = dir.file("forward.csv");
  const auto fw = cmd_forward(fa, prof);
  write_outputs(fw);
  EXPECT_EQ(fw.result["torus"]["sigma"][0].get<int>(), 1);
  EXPECT_NEAR(fw.result["torus"]["mu"][0].get<double>(), 0.0, 1e-10);
  const auto csv = slurp(fa.csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,re_h,im_h,xi");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 502);

  ReconstructArgs ra{write(dir, "np.json", fw.result["nu_plus"]), write(dir, "nm.json", fw.result["nu_minus"]),
                     fw.result["A_K"].get<double>(), 20};
  const auto rc = cmd_reconstruct(ra, prof);
  const auto jm = io::jacobi_from_json(rc.result["jacobi"]);
  const auto p2 = io::jacobi_from_json(io::read_json_file(data("period2.json")));
  for (long n = -20; n < 20; ++n) {
    EXPECT_NEAR(jm.a(n), p2.a(n), 1e-4) << n;
    EXPECT_NEAR(jm.b(n), p2.b(n), 1e-4) << n;
  }
}

TEST(Toda, CsvColumnsAndDrift) {
  TempDir dir;
  TodaArgs ta;
  ta.jacobi = data("period2.json");
  ta.t_end = 0.5;
  ta.dt = 1e-2;
  ta.record_every = 10;
  ta.csv = dir.file("toda.csv");
  const auto r = cmd_toda(ta, profile_by_name("default"));
  write_outputs(r);
  EXPECT_LT(r.result["band_edge_drift"].get<double>(), 1e-8);
  EXPECT_TRUE(r.result["reflectionless_end"]["pass"].get<bool>());
  const auto csv = slurp(ta.csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,a0,a1,b0,b1,band0_lo,band0_hi,band1_lo,band1_hi");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  ta.dt = 10;
  ta.t_end = 40;
  EXPECT_THROW(cmd_toda(ta, profile_by_name("default")), NumericalError);
}

TEST(Descriptor, RunsAndIsIdempotent) {
  TempDir dir;
  io::json d = io::read_json_file(data("run_approximate.json"));
  d["inputs"]["set"] = data("onegap.json");
  d["inputs"]["split"] = data("split_half.json");
  d["params"]["schedule"] = io::json::array({{{"n", 4}, {"delta", 0.01}}});
  d["outputs"] = {{"json", "out.json"}, {"csv", "out.csv"}};
  const auto path = write(dir, "run.json", d);
  const auto prof = profile_by_name("fast");
  write_outputs(run_descriptor(load_descriptor(path), prof));
  const auto first_json = slurp(dir.file("out.json")), first_csv = slurp(dir.file("out.csv"));
  write_outputs(run_descriptor(load_descriptor(path), prof));
  EXPECT_EQ(slurp(dir.file("out.json")), first_json);
  EXPECT_EQ(slurp(dir.file("out.csv")), first_csv);
  EXPECT_EQ(first_csv.substr(0, first_csv.find('\n')),
            "stage,n,delta,bands,operator_distance,symmdiff,nu_plus_distance,reflectionless_max,reflectionless_pass,"
            "spectrum_pass,split_atoms,greedy_atoms,deleted_bands");
  const auto out = io::json::parse(first_json);
  EXPECT_EQ(out["seed"].get<int>(), 42);
  EXPECT_EQ(out["profile"].get<std::string>(), "fast");
  // every emitted object reloads as an input
  for (const auto& st : out["stages"]) {
    EXPECT_NO_THROW(io::set_from_json(st["set"]));
    EXPECT_NO_THROW(io::xi_from_json(st["xi"]));
    EXPECT_NO_THROW(io::torus_from_json(st["torus"]));
    EXPECT_NO_THROW(io::jacobi_from_json(st["jacobi"]));
  }
}

TEST(Descriptor, ShippedDescriptorsRun) {
  const auto prof = profile_by_name("fast");
  for (const char* name : {"run_torus.json", "run_metric.json", "run_verify.json", "run_toda.json"}) {
    const auto r = run_descriptor(load_descriptor(data(name)), prof);
    EXPECT_EQ(r.exit_code, kOk) << name;
  }
}

TEST(Descriptor, Errors) {
  TempDir dir;
  EXPECT_THROW(load_descriptor(write(dir, "a.json", {{"command", "metric"}, {"inputs", {{"a", "missing.json"}}}})),
               ValidationError);
  EXPECT_THROW(run_descriptor(load_descriptor(write(dir, "b.json", {{"command", "frobnicate"}})), profile_by_name("default")),
               ValidationError);
  EXPECT_THROW(load_descriptor(write(dir, "c.json", io::json::array())), ValidationError);
  EXPECT_THROW(io::read_json_file(data("nope.json")), ValidationError);
}

TEST(Profiles, FromEnvironment) {
  ::setenv("RLJ_TOLERANCE_PROFILE", "strict", 1);
  EXPECT_EQ(profile_from_env().name, "strict");
  EXPECT_EQ(profile_from_env().tol, 1e-3);
  ::setenv("RLJ_TOLERANCE_PROFILE", "bogus", 1);
  EXPECT_THROW(profile_from_env(), ValidationError);
  ::unsetenv("RLJ_TOLERANCE_PROFILE");
  EXPECT_EQ(profile_from_env().name, "default");
}

TEST(Schedule, Parsing) {
  const auto s = parse_schedule("4:1e-2,16:1e-3");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].n, 16);
  EXPECT_EQ(s[1].delta, 1e-3);
  EXPECT_THROW(parse_schedule("4"), ValidationError);
  EXPECT_THROW(parse_schedule("x:1"), ValidationError);
}

TEST(Schema, RoundTrips) {
  const FiniteGapSet k({{-2, -1}, {1, 2}}, 3);
  EXPECT_EQ(io::set_from_json(io::to_json(k)), k);
  const auto xi = xi_from_torus(k, {{0.2}, {1}});
  EXPECT_EQ(io::xi_from_json(io::to_json(xi)), xi);
  const auto rho = extract_measure(xi, k, 32);
  const auto rho2 = io::measure_from_json(io::to_json(rho));
  EXPECT_NEAR(weak_star_distance(rho, rho2, 3), 0.0, 1e-12);
  EXPECT_NEAR(total_mass(rho), total_mass(rho2), 1e-14);
  const auto p2 = JacobiMatrix::periodic({1.0, 0.5}, {0.1, 0.2}, 3);
  const auto back = io::jacobi_from_json(io::to_json(p2));
  for (long n = -5; n <= 5; ++n) EXPECT_EQ(back.a(n), p2.a(n));
  const SplitSpec s{{1, 0}, std::vector<double>{0.25, 0.5}};
  EXPECT_EQ(*io::split_from_json(io::to_json(s)).g, *s.g);
  EXPECT_THROW(io::set_from_json({{"radius", 3}}), ValidationError);
  EXPECT_THROW(io::jacobi_from_json({{"a", {1}}, {"b", {0, 0}}, {"boundary", "mirror"}}), ValidationError);
}
