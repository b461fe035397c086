#include "blochgen/codegen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "blochgen/config.hpp"
#include "blochgen/errors.hpp"
#include "blochgen/real_form.hpp"
#include "blochgen/units.hpp"

namespace blochgen {

namespace {

std::string index_text(int a, int b) {
  if (a >= 10 || b >= 10) return std::to_string(a) + "_" + std::to_string(b);
  return std::to_string(a) + std::to_string(b);
}

/// Shortest round-trip literal, with exponents written as e6 / e-12.
std::string literal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (auto e = s.find('e'); e != std::string::npos) {
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = false;
    if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
      neg = exp[0] == '-';
      exp.erase(0, 1);
    }
    exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
    s = mant + "e" + (neg ? "-" : "") + exp;
  }
  return s;
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// rad/s value as "2*Pi*<Hz>" when that reproduces it exactly.
std::string rate_literal(double v) {
  if (v == 0.0) return "0";
  const double mhz = rad_to_mhz(std::abs(v));
  if (mhz_to_rad(mhz) == std::abs(v)) return std::string(v < 0 ? "-" : "") + "2*Pi*" + literal(mhz * 1e6);
  return full_precision(v);
}

std::string population_literal(double v) {
  if (v == 0.0) return "0";
  for (int k = 1; k <= kMaxLevels * kMaxLevels; ++k)
    if (1.0 / static_cast<double>(k) == v) return "1.0/" + std::to_string(k) + ".0";
  return full_precision(v);
}

std::string param_symbol(const ParamRef& ref) {
  switch (ref.kind) {
    case ParamRef::Kind::Rabi: return rabi_symbol({ref.a, ref.b});
    case ParamRef::Kind::Decay: return decay_symbol({ref.a, ref.b});
    case ParamRef::Kind::Gamma: return gamma_symbol({ref.a, ref.b});
    case ParamRef::Kind::Detuning: return delta_symbol({ref.a, ref.b});
  }
  return {};
}

std::string expr_text(const std::vector<SignedParam>& expr) {
  std::string s;
  for (std::size_t k = 0; k < expr.size(); ++k) {
    const auto& p = expr[k];
    if (k == 0) s += p.sign > 0 ? "" : "-";
    else s += p.sign > 0 ? " + " : " - ";
    s += param_symbol(p.ref);
  }
  return s;
}

class Writer {
 public:
  void line(const std::string& text = {}) {
    text_ += text;
    text_ += '\n';
    ++line_;
  }
  void anchor(const std::string& symbol, int group) { manifest_.push_back({symbol, group, line_ + 1}); }
  void section(int group, const char* title, const std::string& indent = "    ") {
    line(indent + "//******* Adjustments " + std::to_string(group) + " - " + title + " *********//");
  }

  EmittedSource finish() { return {std::move(text_), std::move(manifest_)}; }

 private:
  std::string text_;
  std::vector<ManifestEntry> manifest_;
  int line_ = 0;
};

void check_request(const CodegenRequest& req) {
  if (!req.system || !req.diagram || !req.params) throw CodegenError("codegen request needs a system, diagram and parameters");
  if (req.observables.empty()) throw CodegenError("codegen request needs at least one observable");
  const int n = req.system->n_levels();
  for (const auto& e : req.observables)
    if (e.i < 1 || e.j > n || e.i > e.j) throw CodegenError("observable " + observable_name(e) + " is out of range");
  try {
    req.solver.check();
  } catch (const std::invalid_argument& e) {
    throw CodegenError(e.what());
  }
  if (req.mode == CodegenMode::Detuning) {
    if (!req.sweep) throw CodegenError("detuning mode needs sweep settings");
    const int mode = req.sweep->swept_mode;
    const bool driven = std::any_of(req.diagram->couplings.begin(), req.diagram->couplings.end(),
                                    [&](const Coupling& c) { return c.mode == mode; });
    if (!driven) throw CodegenError("swept mode " + std::to_string(mode) + " drives no coupling");
    try {
      req.sweep->check();
    } catch (const std::invalid_argument& e) {
      throw CodegenError(e.what());
    }
  } else if (req.sweep) {
    throw CodegenError("temporal mode takes no sweep settings");
  }
  if (req.initial && req.initial->n_levels() != n) throw CodegenError("initial state does not match the system size");
}

}  // namespace

std::string rabi_symbol(LevelPair p) { return "A" + index_text(p.lo, p.hi); }
std::string decay_symbol(Channel c) { return "Gamma" + index_text(c.from, c.to); }
std::string gamma_symbol(LevelPair p) { return "gamma" + index_text(p.lo, p.hi); }
std::string delta_symbol(LevelPair p) { return "delta" + index_text(p.hi, p.lo); }

EmittedSource emit(const CodegenRequest& req) {
  check_request(req);
  const BlochSystem& sys = *req.system;
  const LevelDiagram& diagram = *req.diagram;
  const ParameterSet& params = *req.params;
  const StateLayout layout = sys.layout();
  const int n = sys.n_levels();
  const std::size_t dim = layout.dimension();
  const bool sweep_mode = req.mode == CodegenMode::Detuning;
  const RealSystem real = expand(sys);
  const ResolvedParameters values = resolve(sys, params);
  const DetuningMap& dm = sys.detunings();
  const StateVector init = req.initial ? *req.initial : default_initial_state(diagram);
  const auto obs_slots = observable_slots(layout, req.observables);

  std::size_t coeff_count = real.nonzeros();
  Writer w;
  w.line("//Optical Bloch equations, " + std::to_string(n) + "-level system, " +
         std::to_string(equation_count(n)) + " independent elements");
  w.line(std::string("//") + (sweep_mode ? "Steady state as a function of detuning" : "Temporal evolution") +
         ", fourth-order Runge-Kutta with fixed step");
  w.line("//Generated by blochgen");
  w.line();
  w.line("//Adjustments to be made (type control + F to find what needs to be adjusted)");
  w.line("//Adjustments 1 - Spectrum and temporal integration");
  w.line("//Adjustments 2 - Rabi frequencies");
  w.line("//Adjustments 3 - Decays");
  w.line("//Adjustments 4 - Initial conditions");
  w.line("//Adjustments 5 - Detunings");
  w.line();
  w.line("#include <math.h>");
  w.line("#include <stdio.h>");
  w.line();
  w.line("//Real state slots: pop[1.." + std::to_string(n) + "] populations, then Re/Im pairs of each coherence");
  w.line("#define N " + std::to_string(dim));
  w.line("#define NC " + std::to_string(std::max<std::size_t>(coeff_count, 1)));
  w.line("#define Pi 3.14159265358979323846");
  w.line();

  // Equations, as rendered, for the reader of the file.
  {
    std::istringstream eqs(render(sys, RenderFormat::Plain));
    std::string eq;
    while (std::getline(eqs, eq)) w.line("// " + eq);
  }
  w.line("static void derivs(const double *c, const double *y, double *dy)");
  w.line("{");
  {
    std::size_t k = 0;
    for (std::size_t r = 0; r < dim; ++r) {
      std::string rhs;
      for (const auto& e : real.rows[r]) {
        if (!rhs.empty()) rhs += " + ";
        rhs += "c[" + std::to_string(k++) + "]*y[" + std::to_string(e.col + 1) + "]";
      }
      w.line("    dy[" + std::to_string(r + 1) + "] = " + (rhs.empty() ? "0" : rhs) + ";");
    }
  }
  w.line("}");
  w.line();
  w.line("static void rk4_step(const double *c, double *y, double h)");
  w.line("{");
  w.line("    double k1[N+1], k2[N+1], k3[N+1], k4[N+1], yt[N+1];");
  w.line("    double const hh = 0.5*h;");
  w.line("    double const h6 = h/6.0;");
  w.line("    int i;");
  w.line("    derivs(c, y, k1);");
  w.line("    for (i = 1; i <= N; i++) yt[i] = y[i] + hh*k1[i];");
  w.line("    derivs(c, yt, k2);");
  w.line("    for (i = 1; i <= N; i++) yt[i] = y[i] + hh*k2[i];");
  w.line("    derivs(c, yt, k3);");
  w.line("    for (i = 1; i <= N; i++) yt[i] = y[i] + h*k3[i];");
  w.line("    derivs(c, yt, k4);");
  w.line("    for (i = 1; i <= N; i++) y[i] = y[i] + h6*(k1[i] + 2.0*k2[i] + 2.0*k3[i] + k4[i]);");
  w.line("}");
  w.line();
  w.line("static void print_row(double x, const double *y)");
  w.line("{");
  w.line("    printf(\"%.17g\", x);");
  for (auto s : obs_slots) w.line("    printf(\" %.17g\", y[" + std::to_string(s + 1) + "]);");
  w.line("    printf(\"\\n\");");
  w.line("}");
  w.line();
  w.line("int main(void)");
  w.line("{");

  // Rabi frequencies.
  w.section(2, "Rabi frequencies");
  w.line("    //Real part of Rabi frequencies");
  {
    std::set<double> distinct;
    for (const auto& [pair, v] : values.rabi) distinct.insert(v);
    const bool common = distinct.size() == 1;
    if (common) {
      w.anchor("freqRabi", 2);
      w.line("    double const freqRabi = " + rate_literal(*distinct.begin()) + ";");
      w.line();
    }
    for (const auto& [pair, v] : values.rabi) {
      w.anchor(rabi_symbol(pair), 2);
      w.line("    double " + rabi_symbol(pair) + " = " + (common ? std::string("freqRabi") : rate_literal(v)) + ";");
    }
  }
  w.line();

  // Decays: exact branching of one common total is written as decay/k.0.
  w.section(3, "Decays");
  w.line("    //Decay rates of excited states");
  {
    std::map<int, std::vector<Channel>> by_level;
    for (const auto& [ch, v] : values.decay) by_level[ch.from].push_back(ch);
    std::optional<double> total;
    for (const auto& [lvl, chans] : by_level) {
      const double cand = values.decay.at(chans.front()) * static_cast<double>(chans.size());
      bool ok = true;
      for (const auto& [l2, c2] : by_level)
        for (const auto& ch : c2)
          if (values.decay.at(ch) != cand / static_cast<double>(c2.size())) ok = false;
      if (ok) {
        total = cand;
        break;
      }
    }
    if (total) {
      w.anchor("decay", 3);
      w.line("    double const decay = " + rate_literal(*total) + ";");
      w.line();
    }
    for (const auto& [ch, v] : values.decay) {
      const std::string sym = decay_symbol(ch);
      w.anchor(sym, 3);
      if (total)
        w.line("    double " + sym + " = decay/" + std::to_string(by_level.at(ch.from).size()) + ".0;");
      else
        w.line("    double " + sym + " = " + rate_literal(v) + ";");
    }
  }
  w.line();
  w.line("    //Decay rates of coherences");
  for (const auto& [pair, expr] : sys.gammas()) {
    const std::string sym = gamma_symbol(pair);
    w.anchor(sym, 3);
    if (auto it = params.gamma.find(pair); it != params.gamma.end()) {
      w.line("    double " + sym + " = " + rate_literal(it->second) + ";");
    } else if (expr.channels.empty()) {
      w.line("    double " + sym + " = 0;");
    } else {
      std::string s;
      for (std::size_t k = 0; k < expr.channels.size(); ++k) s += (k ? " + " : "") + decay_symbol(expr.channels[k]);
      w.line("    double " + sym + " = 0.5*(" + s + ");");
    }
  }
  w.line();

  // Detunings. The first driven pair of each mode carries its value; other
  // pairs of the same mode follow it, composed pairs sum along their path.
  std::map<int, LevelPair> lead;
  for (const auto& [pair, dp] : dm.driven) lead.emplace(dp.mode, pair);
  auto follower_line = [&](const LevelPair& pair, const DrivenPair& dp, const std::string& indent, bool declare) {
    const LevelPair& l = lead.at(dp.mode);
    const int rel = dp.sign * dm.driven.at(l).sign;
    return indent + (declare ? "double " : "") + delta_symbol(pair) + " = " + (rel > 0 ? "" : "-") + delta_symbol(l) + ";";
  };
  auto lead_value = [&](const LevelPair& pair) {
    return rate_literal(values.detuning.at(pair));
  };
  auto composed_lines = [&](const std::string& indent, bool declare) {
    bool header = false;
    for (const auto& [pair, pd] : dm.pairs) {
      if (!pd.connected || pd.driven) continue;
      if (!header) {
        w.line(indent + "//Two-photon coherences");
        header = true;
      }
      std::string s;
      for (std::size_t k = 0; k < pd.path.size(); ++k) {
        const auto& st = pd.path[k];
        if (k == 0) s += st.sign > 0 ? "" : "-";
        else s += st.sign > 0 ? " + " : " - ";
        s += delta_symbol(st.pair);
      }
      w.anchor(delta_symbol(pair), 5);
      w.line(indent + (declare ? "double " : "") + delta_symbol(pair) + " = " + s + ";");
    }
  };

  if (!sweep_mode) {
    w.section(5, "Detunings");
    w.line("    //Detunings");
    for (const auto& [pair, dp] : dm.driven) {
      w.anchor(delta_symbol(pair), 5);
      if (lead.at(dp.mode) == pair) w.line("    double " + delta_symbol(pair) + " = " + lead_value(pair) + ";");
      else w.line(follower_line(pair, dp, "    ", true));
    }
    w.line();
    composed_lines("    ", true);
    w.line();
  } else {
    std::string decl;
    for (const auto& [pair, pd] : dm.pairs)
      if (pd.connected) decl += (decl.empty() ? "" : ", ") + delta_symbol(pair);
    if (!decl.empty()) {
      w.line("    //Detunings (set for every spectrum point below)");
      w.line("    double " + decl + ";");
      w.line();
    }
  }

  // Initial state.
  w.section(4, "Initial conditions");
  w.line("    //Initial populations");
  w.line("    double pop[N+1];");
  for (int i = 1; i <= n; ++i) {
    const auto slot = layout.population_slot(i) + 1;
    w.anchor("pop[" + std::to_string(slot) + "]", 4);
    w.line("    pop[" + std::to_string(slot) + "] = " + population_literal(init[slot - 1]) + ";");
  }
  w.line();
  w.line("    //Initial coherences");
  for (std::size_t s = static_cast<std::size_t>(n); s < dim; ++s) {
    w.anchor("pop[" + std::to_string(s + 1) + "]", 4);
    w.line("    pop[" + std::to_string(s + 1) + "] = " + (init[s] == 0.0 ? std::string("0") : full_precision(init[s])) + ";");
  }
  w.line();

  // Integration constants.
  w.section(1, "Spectrum and temporal integration");
  if (sweep_mode) {
    w.line("    //Spectrum width, in MHz");
    w.anchor("spectrumWidth", 1);
    w.line("    double const spectrumWidth = " + literal(req.sweep->width_mhz) + ";");
    w.line();
    w.line("    //Detuning step, in MHz");
    w.anchor("passo", 1);
    w.line("    double const passo = " + literal(req.sweep->step_mhz) + ";");
    w.line();
    w.line("    //Interaction time, in s");
  } else {
    w.line("    //Integration time");
  }
  const double t_total = sweep_mode ? req.sweep->t_interaction : req.solver.t_total;
  const double h = sweep_mode ? req.sweep->h : req.solver.h;
  w.anchor("tTotal", 1);
  w.line("    double const tTotal = " + literal(t_total) + ";");
  w.line();
  w.line("    //Time integration step");
  w.anchor("h", 1);
  w.line("    double const h = " + literal(h) + ";");
  if (!sweep_mode) {
    w.line();
    w.line("    //Interval between points in the graph, in units of h");
    w.anchor("dt", 1);
    w.line("    int const dt = " + std::to_string(req.solver.stride) + ";");
  }
  w.line();

  auto coefficient_block = [&](const std::string& indent) {
    std::size_t k = 0;
    for (std::size_t r = 0; r < dim; ++r)
      for (const auto& e : real.rows[r])
        w.line(indent + "c[" + std::to_string(k++) + "] = " + expr_text(e.expr) + ";");
  };

  w.line("    double c[NC];");
  w.line("    double y[N+1];");
  w.line("    long long const nsteps = llround(tTotal/h);");
  w.line("    long long step;");
  w.line("    int k;");
  w.line();
  if (!sweep_mode) {
    w.line("    //Right-hand-side coefficients");
    coefficient_block("    ");
    w.line();
    w.line("    for (k = 1; k <= N; k++) y[k] = pop[k];");
    w.line("    print_row(0.0, y);");
    w.line("    for (step = 1; step <= nsteps; step++) {");
    w.line("        rk4_step(c, y, h);");
    w.line("        if (step % dt == 0) print_row(step*h, y);");
    w.line("    }");
  } else {
    const int swept = req.sweep->swept_mode;
    w.line("    long const nd = lround(spectrumWidth/(2*passo));");
    w.line("    long d;");
    w.line("    for (d = -nd; d <= nd; d++) {");
    w.section(5, "Detunings", "        ");
    for (const auto& [pair, dp] : dm.driven) {
      const std::string sym = delta_symbol(pair);
      w.anchor(sym, 5);
      if (lead.at(dp.mode) != pair) {
        w.line(follower_line(pair, dp, "        ", false));
      } else if (dp.mode == swept) {
        w.line("        " + sym + " = " + (dp.sign > 0 ? "2*Pi*passo*d*1e6" : "-(2*Pi*passo*d*1e6)") +
               ";   //Field sweeping frequency");
      } else {
        w.line("        " + sym + " = " + lead_value(pair) + ";");
      }
    }
    w.line();
    composed_lines("        ", false);
    w.line("        //*******************************************//");
    w.line();
    coefficient_block("        ");
    w.line();
    w.line("        for (k = 1; k <= N; k++) y[k] = pop[k];");
    w.line("        for (step = 1; step <= nsteps; step++) rk4_step(c, y, h);");
    w.line("        print_row(passo*d, y);");
    w.line("    }");
  }
  w.line("    return 0;");
  w.line("}");
  return w.finish();
}

Table parse_table(const std::string& text) {
  Table out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("table: bad number '" + tok + "'");
      row.push_back(v);
    }
    out.push_back(std::move(row));
  }
  return out;
}

Table native_table(const CodegenRequest& req) {
  check_request(req);
  const StateVector init = req.initial ? *req.initial : default_initial_state(*req.diagram);
  const auto slots = observable_slots(req.system->layout(), req.observables);
  Table out;
  if (req.mode == CodegenMode::Temporal) {
    const auto gen = compile(*req.system, *req.params);
    const auto traj = integrate(gen, init, req.solver);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      std::vector<double> row{traj.times[k]};
      for (auto s : slots) row.push_back(traj.states[k][s]);
      out.push_back(std::move(row));
    }
  } else {
    SweepOptions opts;
    opts.initial = init;
    const auto spec = sweep(*req.system, *req.params, *req.diagram, *req.sweep, opts);
    for (std::size_t k = 0; k < spec.detunings_mhz.size(); ++k) {
      std::vector<double> row{spec.detunings_mhz[k]};
      for (auto s : slots) row.push_back(spec.final_states[k][s]);
      out.push_back(std::move(row));
    }
  }
  return out;
}

EquivalenceReport equivalence_check(const CodegenRequest& req, const Table& compiled) {
  const Table native = native_table(req);
  if (native.size() != compiled.size())
    throw std::invalid_argument("equivalence: expected " + std::to_string(native.size()) + " rows, got " +
                                std::to_string(compiled.size()));
  EquivalenceReport rep;
  rep.rows = native.size();
  rep.cols = native.empty() ? 0 : native.front().size();
  for (std::size_t r = 0; r < native.size(); ++r) {
    if (compiled[r].size() != native[r].size())
      throw std::invalid_argument("equivalence: row " + std::to_string(r) + " has " + std::to_string(compiled[r].size()) +
                                  " columns, expected " + std::to_string(native[r].size()));
    for (std::size_t c = 0; c < native[r].size(); ++c) {
      const double d = std::abs(native[r][c] - compiled[r][c]);
      if (d > rep.max_abs_diff || std::isnan(d)) {
        rep.max_abs_diff = std::isnan(d) ? INFINITY : d;
        rep.worst_row = r;
        rep.worst_col = c;
      }
    }
  }
  return rep;
}

}  // namespace blochgen
