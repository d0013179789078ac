#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "falconer/cli.hpp"

using falconer::cli::dispatch;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("falconer-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string capture_stdout(const std::vector<std::string>& args, int& code) {
  std::stringstream buffer;
  auto* old = std::cout.rdbuf(buffer.rdbuf());
  code = dispatch(args);
  std::cout.rdbuf(old);
  return buffer.str();
}

}  // namespace

TEST_CASE("bounds eval prints the exact endpoint constants") {
  int code = 0;
  auto out = capture_stdout({"bounds", "eval", "--u", "0"}, code);
  CHECK(code == 0);
  CHECK(out.find("phi_exact 29/42") != std::string::npos);
  CHECK(out.find("chi_exact 40/57") != std::string::npos);
  CHECK(out.find("phi 0.690476") != std::string::npos);
}

TEST_CASE("missing input file exits with code 1") {
  int code = 0;
  capture_stdout({"drop", "mtau", "--sigma-file", "does-not-exist.txt", "--tau", "0.1"}, code);
  CHECK(code == 1);
}

TEST_CASE("unknown subcommand exits with code 1") {
  int code = 0;
  capture_stdout({"frobnicate"}, code);
  CHECK(code == 1);
}

TEST_CASE("generate / energy / decompose round trip through files") {
  TempDir tmp;
  int code = 0;
  auto measure_file = tmp.file("cantor.measure");
  capture_stdout({"generate", "cantor", "--T", "2", "--ell", "3", "--sigma", "1,-1,0.5",
                  "--seed", "7", "--out", measure_file},
                 code);
  REQUIRE(code == 0);
  REQUIRE(std::filesystem::exists(measure_file));

  auto out = capture_stdout({"energy", "--measure", measure_file, "--s", "1.2"}, code);
  CHECK(code == 0);
  CHECK(out.find("method discrete-pairs") != std::string::npos);

  out = capture_stdout({"energy", "--measure", measure_file, "--s", "1.2", "--method",
                        "regular"},
                       code);
  CHECK(code == 0);
  CHECK(out.find("method regular-formula") != std::string::npos);

  out = capture_stdout({"decompose", "--measure", measure_file, "--epsilon", "0.25"}, code);
  CHECK(code == 0);
  CHECK(out.find("classes 1") != std::string::npos);
}

TEST_CASE("drop subcommands") {
  int code = 0;
  auto out = capture_stdout({"drop", "s", "--sigma", "1,-1,-1,1"}, code);
  CHECK(code == 0);
  CHECK(out.find("S 1") != std::string::npos);

  out = capture_stdout({"drop", "mtau", "--sigma", "-1,-1", "--tau", "0.5"}, code);
  CHECK(code == 0);
  CHECK(out.find("M_tau 2") != std::string::npos);

  TempDir seq_tmp;
  auto seq_file = seq_tmp.file("sigma.txt");
  {
    std::ofstream f(seq_file);
    f << "-1\n-1\n-1\n";
  }
  out = capture_stdout({"drop", "mtau", "--sigma-file", seq_file, "--tau", "0.1"}, code);
  CHECK(code == 0);
  CHECK(out.find("M_tau 3") != std::string::npos);

  out = capture_stdout({"drop", "checkpoints", "--u", "0", "--variant", "c257"}, code);
  CHECK(code == 0);
  CHECK(out.find("xi_equality_residual") != std::string::npos);
  CHECK(out.find("FAIL") == std::string::npos);

  TempDir tmp;
  auto tent_file = tmp.file("tent.plf");
  capture_stdout({"generate", "tent", "--u", "0.1", "--out", tent_file}, code);
  REQUIRE(code == 0);
  out = capture_stdout({"drop", "totaldrop", "--f", tent_file, "--grid", "32", "--delta",
                        "9.5367431640625e-07"},
                       code);
  CHECK(code == 0);
  CHECK(out.find("upper_value 0.2666") != std::string::npos);
}

TEST_CASE("bounds compare and crossover") {
  TempDir tmp;
  int code = 0;
  auto csv = tmp.file("bounds.csv");
  capture_stdout({"bounds", "compare", "--s-from", "1.001", "--s-to", "1.05", "--step", "0.01",
                  "--out", csv},
                 code);
  REQUIRE(code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "s,ks_pinned,liu,ks_full,new_pinned,new_full,best_pinned,best_full");

  auto svg = tmp.file("bounds.svg");
  capture_stdout({"bounds", "compare", "--s-from", "1.001", "--s-to", "1.05", "--step", "0.005",
                  "--out", svg},
                 code);
  REQUIRE(code == 0);
  std::ifstream sin(svg);
  std::stringstream ss;
  ss << sin.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  CHECK(ss.str().find("phi(s-1)") != std::string::npos);

  auto out = capture_stdout({"bounds", "crossover", "--pair", "phi-liu"}, code);
  CHECK(code == 0);
  CHECK(out.find("root 1.037") != std::string::npos);
}

TEST_CASE("distset pipeline on a generated measure") {
  TempDir tmp;
  int code = 0;
  auto mf = tmp.file("frostman.measure");
  capture_stdout({"generate", "frostman", "--T", "2", "--ell", "3", "--s", "1.3", "--seed",
                  "11", "--out", mf},
                 code);
  REQUIRE(code == 0);
  auto out = capture_stdout({"distset", "pipeline", "--measure", mf, "--pin", "0.05,0.95",
                             "--tau", "0.1", "--epsilon", "0.25"},
                            code);
  CHECK(code == 0);
  CHECK(out.find("HEURISTIC") != std::string::npos);
  CHECK(out.find("predicted_exponent") != std::string::npos);
  CHECK(out.find("measured_exponent") != std::string::npos);
}

TEST_CASE("drop sigmatof --check verifies the transfer inequality") {
  TempDir tmp;
  int code = 0;
  auto seq_file = tmp.file("sigma.txt");
  {
    std::ofstream f(seq_file);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) f << u(rng) << "\n";
  }
  auto out = capture_stdout({"drop", "sigmatof", "--sigma-file", seq_file, "--zeta", "0.01",
                             "--check", "--tau", "0.002", "--slack", "1", "--out",
                             tmp.file("f.plf")},
                            code);
  CHECK(code == 0);
  CHECK(out.find("transfer_inequality holds") != std::string::npos);
}

TEST_CASE("distset full counts on a set file") {
  TempDir tmp;
  int code = 0;
  auto sf = tmp.file("ws.set");
  capture_stdout({"generate", "separated", "--T", "1", "--ell", "3", "--s", "1.4", "--out", sf},
                 code);
  REQUIRE(code == 0);
  auto out = capture_stdout({"distset", "full", "--set", sf, "--levels", "3..5"}, code);
  CHECK(code == 0);
  CHECK(out.find("ell,N,log2N_over_Tell") != std::string::npos);
}

TEST_CASE("distset pinned counts on a set file") {
  TempDir tmp;
  int code = 0;
  auto sf = tmp.file("ws.set");
  capture_stdout({"generate", "separated", "--T", "2", "--ell", "3", "--s", "1.3", "--out", sf},
                 code);
  REQUIRE(code == 0);
  auto out = capture_stdout(
      {"distset", "pinned", "--set", sf, "--pin", "0.5,0.5", "--levels", "3..6"}, code);
  CHECK(code == 0);
  CHECK(out.find("ell,N,log2N_over_Tell") != std::string::npos);
  CHECK(out.find("# slope") != std::string::npos);
}
