#include <doctest.h>

#include <sstream>

#include "blochgen/dynamics.hpp"
#include "blochgen/errors.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/presets.hpp"
#include "support.hpp"

using namespace blochgen;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

double max_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs(const StateVector& a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

}  // namespace

TEST_CASE("equation count") {
  CHECK(equation_count(2) == 3);
  CHECK(equation_count(3) == 6);
  CHECK(equation_count(12) == 78);
  CHECK(equation_count(30) == 465);
  CHECK_THROWS_AS(equation_count(1), std::out_of_range);
  CHECK_THROWS_AS(equation_count(31), std::out_of_range);
  for (auto p : all_presets()) {
    const auto sys = generate(make_preset(p).diagram);
    CHECK(static_cast<int>(sys.equation_count()) == equation_count(sys.n_levels()));
  }
}

TEST_CASE("two-level equations, plain and LaTeX") {
  const auto sys = generate(testing::two_level());
  const auto plain = lines(render(sys, RenderFormat::Plain));
  REQUIRE(plain.size() == 3);
  CHECK(plain[0] == "dρ11/dt = iΩ12σ12 − iΩ12σ12* + Γ21ρ22");
  CHECK(plain[1] == "dρ22/dt = −iΩ12σ12 + iΩ12σ12* − Γ21ρ22");
  CHECK(plain[2] == "dσ12/dt = iΩ12ρ11 − iΩ12ρ22 + (iδ12 − γ12)σ12");
  const auto latex = lines(render(sys, RenderFormat::Latex));
  REQUIRE(latex.size() == 3);
  CHECK(latex[2] == "$\\dot{\\sigma}_{12} = i\\Omega_{12}\\rho_{11} - i\\Omega_{12}\\rho_{22} + (i\\delta_{12} - \\gamma_{12})\\sigma_{12}$");
}

TEST_CASE("lambda equations contain the two-photon coherence") {
  const auto text = render(generate(make_preset(PresetName::Lambda).diagram), RenderFormat::Plain);
  const auto l = lines(text);
  REQUIRE(l.size() == 6);
  CHECK(l[4] == "dσ13/dt = iΩ23σ12 − iΩ12σ23 + (iδ13 − γ13)σ13");
}

TEST_CASE("two-digit indices are separated") {
  const auto text = render(generate(make_preset(PresetName::TwelveSigmaPlus).diagram), RenderFormat::Plain);
  CHECK(text.find("dσ5,12/dt = iΩ5,12ρ55 − iΩ5,12ρ12,12 + (iδ5,12 − γ5,12)σ5,12") != std::string::npos);
  CHECK(lines(text).size() == 78);
}

TEST_CASE("rendering is deterministic") {
  for (auto p : all_presets()) {
    const auto d = make_preset(p).diagram;
    CHECK(render(generate(d), RenderFormat::Plain) == render(generate(d), RenderFormat::Plain));
    CHECK(generate(d).terms().size() == generate(d).terms().size());
  }
}

TEST_CASE("invalid diagrams are refused") {
  CHECK_THROWS_AS(generate(testing::diamond(false)), LoopInconsistencyError);
  auto d = testing::two_level();
  d.couplings.push_back(d.couplings.front());
  CHECK_THROWS_AS(generate(d), ValidationError);
}

TEST_CASE("population equations sum to zero symbolically") {
  for (auto p : all_presets()) CHECK(population_sum(generate(make_preset(p).diagram)).empty());
  CHECK(population_sum(generate(testing::diamond(true))).empty());
}

TEST_CASE("right-hand side matches the dense commutator") {
  std::mt19937 rng(20240611);
  SUBCASE("presets") {
    for (auto p : all_presets()) {
      auto preset = make_preset(p);
      preset.params.mode_detuning[1] = mhz_to_rad(3.0);
      const auto gen = compile(generate(preset.diagram), preset.params);
      const auto x = testing::random_state(rng, preset.diagram.size());
      StateVector fx(x.n_levels());
      gen.apply(x.values(), fx.values());
      const auto ref = testing::dense_rhs(preset.diagram, preset.params, x);
      CHECK(max_diff(fx, ref) <= 1e-9 * max_abs(ref));
    }
  }
  SUBCASE("random connected diagrams") {
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 7;
      const auto d = testing::random_diagram(rng, n);
      REQUIRE(validate(d).ok());
      auto params = testing::random_params(rng, d);
      if (trial % 3 == 0) params.gamma[{1, 2}] = mhz_to_rad(1.5);
      const auto gen = compile(generate(d), params);
      const auto x = testing::random_state(rng, n);
      StateVector fx(n);
      gen.apply(x.values(), fx.values());
      const auto ref = testing::dense_rhs(d, params, x);
      CAPTURE(trial);
      CHECK(max_diff(fx, ref) <= 1e-9 * max_abs(ref));
    }
  }
  SUBCASE("diamond with a closed loop") {
    const auto d = testing::diamond(true);
    const auto params = testing::random_params(rng, d);
    const auto x = testing::random_state(rng, 4);
    StateVector fx(4);
    compile(generate(d), params).apply(x.values(), fx.values());
    const auto ref = testing::dense_rhs(d, params, x);
    CHECK(max_diff(fx, ref) <= 1e-9 * max_abs(ref));
  }
}

TEST_CASE("undriven coherences only relax") {
  // Level 6 of the sigma+ preset has no coupling; its coherence with level 1
  // has no detuning term.
  const auto sys = generate(make_preset(PresetName::TwelveSigmaPlus).diagram);
  for (const auto& t : sys.row(ElementId{1, 6})) CHECK(t.kind != TermKind::Detuning);
}
