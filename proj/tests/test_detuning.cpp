#include <doctest.h>

#include "blochgen/detuning.hpp"
#include "blochgen/presets.hpp"
#include "support.hpp"

using namespace blochgen;

TEST_CASE("lambda two-photon detuning") {
  const auto m = detuning_map(make_preset(PresetName::Lambda).diagram);
  CHECK_FALSE(m.inconsistency);
  REQUIRE(m.driven.size() == 2);
  CHECK(m.driven.at({1, 2}).mode == 1);
  CHECK(m.driven.at({1, 2}).sign == 1);
  CHECK(m.driven.at({2, 3}).mode == 2);
  CHECK(m.driven.at({2, 3}).sign == -1);
  const auto& p13 = m.pairs.at({1, 3});
  CHECK(p13.connected);
  CHECK_FALSE(p13.driven);
  CHECK(p13.formal.str() == "D1 - D2");
  REQUIRE(p13.path.size() == 2);
  CHECK(p13.path[0].pair == LevelPair{1, 2});
  CHECK(p13.path[0].sign == 1);
  CHECK(p13.path[1].pair == LevelPair{2, 3});
  CHECK(p13.path[1].sign == 1);
}

TEST_CASE("ladder accumulates detunings") {
  LevelDiagram d;
  d.levels = {{1, 0.0, "", {}}, {2, 1.0, "", {}}, {3, 2.0, "", {}}};
  d.modes = {{1, ""}, {2, ""}};
  d.couplings = {{2, 1, 1}, {3, 2, 2}};
  const auto m = detuning_map(d);
  CHECK(m.pairs.at({1, 3}).formal.str() == "D1 + D2");
  CHECK(m.pairs.at({2, 3}).formal.str() == "D2");
}

TEST_CASE("one mode driving several transitions") {
  const auto m = detuning_map(make_preset(PresetName::TwelveSigmaPlus).diagram);
  CHECK_FALSE(m.inconsistency);
  CHECK(m.driven.size() == 5);
  // Each sigma+ coupling is its own component: ground levels are linked
  // only through decay.
  CHECK(m.pairs.at({1, 8}).formal.str() == "D1");
  CHECK(m.pairs.at({5, 12}).formal.str() == "D1");
  CHECK_FALSE(m.pairs.at({1, 2}).connected);
  CHECK_FALSE(m.pairs.at({1, 9}).connected);
  // Excited m'=-3 (level 6) is never driven.
  CHECK_FALSE(m.pairs.at({1, 6}).connected);
  CHECK(m.pairs.at({1, 6}).path.empty());
}

TEST_CASE("pi transitions share a ground component through nothing") {
  const auto m = detuning_map(make_preset(PresetName::TwelvePi).diagram);
  CHECK(m.pairs.at({3, 9}).formal.str() == "D1");
  CHECK_FALSE(m.pairs.at({3, 4}).connected);
}

TEST_CASE("shared ground level links both excited states") {
  LevelDiagram d;
  d.levels = {{1, 0.0, "", {}}, {2, 1.0, "", {}}, {3, 1.1, "", {}}};
  d.modes = {{1, ""}, {2, ""}};
  d.couplings = {{2, 1, 1}, {3, 1, 2}};
  const auto m = detuning_map(d);
  CHECK(m.pairs.at({2, 3}).formal.str() == "-D1 + D2");
}

TEST_CASE("diamond loop consistency") {
  CHECK_FALSE(detuning_map(testing::diamond(true)).inconsistency);
  const auto bad = detuning_map(testing::diamond(false));
  REQUIRE(bad.inconsistency);
  const auto& loop = bad.inconsistency->loop;
  REQUIRE(loop.size() >= 4);
  CHECK(loop.front() == loop.back());
  CHECK(bad.inconsistency->message.find("D") != std::string::npos);
}

TEST_CASE("mode sums") {
  const auto a = ModeSum::of(1, 1) + ModeSum::of(2, -1);
  CHECK(a.str() == "D1 - D2");
  CHECK((a - a).empty());
  CHECK(a.scaled(-1).str() == "-D1 + D2");
}
