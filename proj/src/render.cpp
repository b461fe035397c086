#include <sstream>
#include <string>

#include "blochgen/liouvillian.hpp"

namespace blochgen {

namespace {

struct Style {
  bool latex;

  std::string index(int a, int b) const {
    const std::string s = (a >= 10 || b >= 10) ? std::to_string(a) + "," + std::to_string(b)
                                                : std::to_string(a) + std::to_string(b);
    return latex ? "_{" + s + "}" : s;
  }
  std::string symbol(const char* plain, const char* tex, int a, int b) const {
    return std::string(latex ? tex : plain) + index(a, b);
  }
  std::string element(ElementId e, bool conj) const {
    std::string s = e.is_population() ? symbol("ρ", "\\rho", e.i, e.j) : symbol("σ", "\\sigma", e.i, e.j);
    if (conj) s += latex ? "^{*}" : "*";
    return s;
  }
  std::string minus() const { return latex ? "-" : "−"; }
  std::string lhs(ElementId e) const {
    if (latex) return "\\dot{" + std::string(e.is_population() ? "\\rho" : "\\sigma") + "}" + index(e.i, e.j);
    return "d" + element(e, false) + "/dt";
  }
};

std::string parameter(const Style& st, const Term& t) {
  switch (t.kind) {
    case TermKind::RabiDrive: return st.symbol("Ω", "\\Omega", t.pair.lo, t.pair.hi);
    case TermKind::Detuning: return st.symbol("δ", "\\delta", t.pair.lo, t.pair.hi);
    case TermKind::CoherenceDecay: return st.symbol("γ", "\\gamma", t.pair.lo, t.pair.hi);
    case TermKind::PopulationDecayOut:
    case TermKind::PopulationDecayIn: return st.symbol("Γ", "\\Gamma", t.channel.from, t.channel.to);
  }
  return {};
}

}  // namespace

std::string render(const BlochSystem& system, RenderFormat format) {
  const Style st{format == RenderFormat::Latex};
  const auto layout = system.layout();
  std::ostringstream os;
  for (const ElementId e : layout.elements()) {
    const auto row = system.row(e);
    std::string rhs;
    auto append = [&](bool negative, const std::string& body) {
      if (rhs.empty()) rhs = negative ? st.minus() + body : body;
      else rhs += (negative ? " " + st.minus() + " " : " + ") + body;
    };
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Term& t = row[k];
      if (t.kind == TermKind::Detuning) {
        // Written with delta_ij = -delta_ji, so the frame term reads +i delta_ij.
        const bool with_decay = k + 1 < row.size() && row[k + 1].kind == TermKind::CoherenceDecay &&
                                row[k + 1].source == t.source;
        std::string body = "i" + parameter(st, t);
        if (with_decay) {
          body = "(" + body + " " + st.minus() + " " + parameter(st, row[k + 1]) + ")";
          ++k;
        }
        append(false, body + st.element(t.source, t.conjugate_source));
        continue;
      }
      const bool imag = t.scalar.imag() != 0.0;
      const bool negative = imag ? t.scalar.imag() < 0.0 : t.scalar.real() < 0.0;
      append(negative, (imag ? "i" : "") + parameter(st, t) + st.element(t.source, t.conjugate_source));
    }
    if (rhs.empty()) rhs = "0";
    if (st.latex) os << "$" << st.lhs(e) << " = " << rhs << "$\n";
    else os << st.lhs(e) << " = " << rhs << "\n";
  }
  return os.str();
}

}  // namespace blochgen
