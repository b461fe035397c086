#include <doctest.h>

#include "blochgen/codegen.hpp"
#include "blochgen/dynamics.hpp"
#include "blochgen/liouvillian.hpp"
#include "blochgen/real_form.hpp"
#include "support.hpp"

using namespace blochgen;

namespace {

constexpr int kTrials = 60;

StateVector apply(const NumericGenerator& gen, const StateVector& x) {
  StateVector out(x.n_levels());
  gen.apply(x.values(), out.values());
  return out;
}

StateVector conjugated(const StateVector& x) {
  StateVector out = x;
  const auto l = x.layout();
  for (int i = 1; i <= x.n_levels(); ++i)
    for (int j = i + 1; j <= x.n_levels(); ++j) out[l.im_slot(i, j)] = -x[l.im_slot(i, j)];
  return out;
}

double scale(const StateVector& v) {
  double m = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

struct Case {
  LevelDiagram diagram;
  ParameterSet params;
};

Case random_case(std::mt19937& rng, int trial) {
  Case c{testing::random_diagram(rng, 2 + trial % 9), {}};
  c.params = testing::random_params(rng, c.diagram);
  return c;
}

}  // namespace

TEST_CASE("population derivatives sum to zero") {
  std::mt19937 rng(11);
  for (int t = 0; t < kTrials; ++t) {
    const auto c = random_case(rng, t);
    const auto sys = generate(c.diagram);
    CHECK(population_sum(sys).empty());
    const auto x = testing::random_state(rng, c.diagram.size());
    const auto f = apply(compile(sys, c.params), x);
    double sum = 0.0;
    for (int i = 1; i <= c.diagram.size(); ++i) sum += f.population(i);
    CAPTURE(t);
    CHECK(std::abs(sum) <= 1e-14 * scale(f) * c.diagram.size());
  }
}

TEST_CASE("right-hand side is linear") {
  std::mt19937 rng(12);
  for (int t = 0; t < kTrials; ++t) {
    const auto c = random_case(rng, t);
    const auto gen = compile(generate(c.diagram), c.params);
    const int n = c.diagram.size();
    const auto x = testing::random_state(rng, n);
    const auto y = testing::random_state(rng, n);
    const double a = 0.37, b = -1.9;
    StateVector mix(n);
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * x[k] + b * y[k];
    const auto fx = apply(gen, x), fy = apply(gen, y), fm = apply(gen, mix);
    double err = 0.0;
    for (std::size_t k = 0; k < mix.size(); ++k) err = std::max(err, std::abs(fm[k] - (a * fx[k] + b * fy[k])));
    CHECK(err <= 1e-12 * scale(fm));
  }
}

TEST_CASE("reversing the Hamiltonian conjugates the dynamics") {
  // Omega -> -Omega and delta -> -delta flip H; the decay part is real, so
  // f'(conj x) = conj f(x).
  std::mt19937 rng(13);
  for (int t = 0; t < kTrials; ++t) {
    const auto c = random_case(rng, t);
    auto flipped = c.params;
    for (auto& [k, v] : flipped.rabi) v = -v;
    for (auto& [k, v] : flipped.mode_detuning) v = -v;
    const auto sys = generate(c.diagram);
    const auto x = testing::random_state(rng, c.diagram.size());
    const auto lhs = apply(compile(sys, flipped), conjugated(x));
    const auto rhs = conjugated(apply(compile(sys, c.params), x));
    double err = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) err = std::max(err, std::abs(lhs[k] - rhs[k]));
    CHECK(err <= 1e-12 * scale(rhs));
  }
}

TEST_CASE("generation is deterministic") {
  std::mt19937 rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_case(rng, t);
    const auto a = generate(c.diagram), b = generate(c.diagram);
    CHECK(std::equal(a.terms().begin(), a.terms().end(), b.terms().begin(), b.terms().end()));
    CHECK(render(a, RenderFormat::Plain) == render(b, RenderFormat::Plain));
    CHECK(static_cast<int>(a.equation_count()) == equation_count(c.diagram.size()));
    const auto ea = expand(a), eb = expand(b);
    CHECK(ea.nonzeros() == eb.nonzeros());
  }
}

TEST_CASE("evolution preserves trace and physical populations") {
  std::mt19937 rng(15);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_case(rng, t);
    const auto gen = compile(generate(c.diagram), c.params);
    const auto traj = evolve(gen, default_initial_state(c.diagram), SolverConfig{2e-7, 1e-11, 1000});
    CHECK(trace_error(traj) < 1e-12);
    for (const auto& s : traj.states)
      for (int i = 1; i <= c.diagram.size(); ++i) {
        CHECK(s.population(i) > -1e-9);
        CHECK(s.population(i) < 1 + 1e-9);
      }
  }
}

TEST_CASE("emitted code agrees on random diagrams") {
  std::mt19937 rng(16);
  for (int t = 0; t < 4; ++t) {
    const auto c = random_case(rng, 3 + t);
    const auto sys = generate(c.diagram);
    CodegenRequest req;
    req.system = &sys;
    req.diagram = &c.diagram;
    req.params = &c.params;
    req.solver = SolverConfig{5e-8, 1e-11, 100};
    for (int i = 1; i <= c.diagram.size(); ++i) req.observables.push_back({i, i});
    req.observables.push_back({1, 2});
    const auto run = testing::compile_and_run(emit(req).text, "prop_" + std::to_string(t));
    REQUIRE_MESSAGE(run.ok, run.diagnostics);
    CHECK(equivalence_check(req, parse_table(run.output)).max_abs_diff <= 1e-12);
  }
}
