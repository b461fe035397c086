#include <doctest.h>

#include <sstream>

#include "blochgen/config.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace blochgen;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "blochgen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string preset_path(const std::string& name) {
  return (std::filesystem::path(BLOCHGEN_PRESET_DIR) / (name + ".json")).string();
}

std::string scratch(const std::string& name) { return (testing::scratch_dir() / name).string(); }

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(run({"validate", preset_path("two_level")}).code == cli::kOk);

  auto j = to_json(preset_document(PresetName::TwoLevel));
  j["diagram"]["couplings"].push_back(j["diagram"]["couplings"][0]);
  std::ofstream(scratch("dup.json")) << j.dump();
  const auto dup = run({"validate", scratch("dup.json")});
  CHECK(dup.code == cli::kInvalid);
  CHECK(dup.out.find("duplicate coupling") != std::string::npos);

  std::ofstream(scratch("bad.json")) << "{ not json";
  CHECK(run({"validate", scratch("bad.json")}).code == cli::kInput);
  CHECK(run({"validate", scratch("missing.json")}).code == cli::kInput);
  CHECK(run({"frobnicate"}).code == cli::kInput);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("equations header") {
  const auto r = run({"equations", preset_path("twelve_sigma_plus")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("N(N+1)/2 = 78 equations\n", 0) == 0);
  CHECK(csv_lines(r.out).size() == 79);
  const auto l = run({"equations", preset_path("lambda"), "--format", "latex"});
  CHECK(l.out.find("\\dot{\\sigma}_{13}") != std::string::npos);
  CHECK(run({"equations", preset_path("lambda"), "--format", "html"}).code == cli::kInput);
}

TEST_CASE("evolve to CSV") {
  const auto r = run({"evolve", preset_path("two_level"), "--out", scratch("tl.csv")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("max trace error: ") == 0);
  const auto lines = csv_lines(testing::read_file(scratch("tl.csv")));
  REQUIRE(lines.size() == 2002);
  CHECK(lines[0] == "t_s,rho_1_1,rho_2_2,re_sigma_1_2,im_sigma_1_2");
  std::istringstream last(lines.back());
  std::string t, p11, p22;
  std::getline(last, t, ',');
  std::getline(last, p11, ',');
  std::getline(last, p22, ',');
  CHECK(std::stod(p22) == doctest::Approx(4.0 / 9.0).epsilon(1e-6));

  // Same inputs, same bytes.
  run({"evolve", preset_path("two_level"), "--out", scratch("tl2.csv")});
  CHECK(testing::read_file(scratch("tl.csv")) == testing::read_file(scratch("tl2.csv")));
}

TEST_CASE("sweep with analysis") {
  auto doc = preset_document(PresetName::TwoLevel);
  doc.sweep->t_interaction = 5e-7;
  save_config(doc, scratch("tl_sweep.json"));
  const auto r = run({"sweep", scratch("tl_sweep.json"), "--out", scratch("tl_sweep.csv"), "--analyze", "rho_2_2"});
  REQUIRE(r.code == 0);
  const auto lines = csv_lines(testing::read_file(scratch("tl_sweep.csv")));
  CHECK(lines.size() == 202);
  CHECK(lines[0].rfind("detuning_mhz,", 0) == 0);
  const auto brace = r.out.find('{');
  REQUIRE(brace != std::string::npos);
  const auto report = nlohmann::json::parse(r.out.substr(brace));
  CHECK(report["analysis"]["lorentzian"]["fwhm_mhz"].get<double>() == doctest::Approx(15.0).epsilon(1e-3));
  CHECK(run({"sweep", scratch("tl_sweep.json"), "--analyze", "rho_9_9"}).code == cli::kInput);
}

TEST_CASE("sweep needs a sweep block") {
  CHECK(run({"sweep", preset_path("twelve_pi")}).code == cli::kInput);
}

TEST_CASE("codegen writes a file and a manifest summary") {
  const auto r = run({"codegen", preset_path("lambda"), "--mode", "detuning", "--out", scratch("lam.c")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Adjustments 5 - detunings:") != std::string::npos);
  CHECK(testing::read_file(scratch("lam.c")).find("delta31 = delta21 + delta32;") != std::string::npos);
  CHECK(run({"codegen", preset_path("twelve_pi"), "--mode", "detuning"}).code == cli::kRuntime);
}

TEST_CASE("preset command") {
  const auto r = run({"preset", "lambda"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out) == to_json(preset_document(PresetName::Lambda)));
  CHECK(run({"preset", "four_level"}).code == cli::kInput);
}

TEST_CASE("loop inconsistency is refused before running") {
  ConfigDocument doc;
  doc.diagram = testing::diamond(false);
  std::mt19937 rng(1);
  doc.params = testing::random_params(rng, doc.diagram);
  doc.sweep = SweepConfig{};
  save_config(doc, scratch("diamond_bad.json"));
  const auto r = run({"sweep", scratch("diamond_bad.json")});
  CHECK(r.code == cli::kInvalid);
  CHECK(r.err.find("loop inconsistency") != std::string::npos);
}
