#include "softcap/conic.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace softcap::conic {

int ConicProgram::add_variable(double cost, double lo, double hi) {
  cost_.push_back(cost);
  lower_.push_back(lo);
  upper_.push_back(hi);
  in_cone_.push_back(false);
  return num_variables() - 1;
}

int ConicProgram::add_variables(int count) {
  const int first = num_variables();
  for (int i = 0; i < count; ++i) add_variable();
  return first;
}

void ConicProgram::check_index(int var) const {
  if (var < 0 || var >= num_variables()) {
    throw ConicProgramError("variable index " + std::to_string(var) + " out of range");
  }
}

void ConicProgram::claim(int var) {
  check_index(var);
  if (in_cone_[var]) {
    throw ConicProgramError("variable " + std::to_string(var) + " already belongs to a cone");
  }
  in_cone_[var] = true;
}

void ConicProgram::set_cost(int var, double cost) {
  check_index(var);
  cost_[var] = cost;
}

void ConicProgram::add_cost(int var, double cost) {
  check_index(var);
  cost_[var] += cost;
}

void ConicProgram::set_bounds(int var, double lo, double hi) {
  check_index(var);
  if (lo > hi) {
    throw ConicProgramError("empty bounds on variable " + std::to_string(var));
  }
  lower_[var] = lo;
  upper_[var] = hi;
}

int ConicProgram::add_equality(std::vector<LinearTerm> terms, double rhs) {
  for (const LinearTerm& t : terms) check_index(t.var);
  equalities_.push_back(LinearEquality{std::move(terms), rhs});
  return static_cast<int>(equalities_.size()) - 1;
}

int ConicProgram::add_nonnegative(std::span<const int> vars) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    check_index(vars[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (vars[j] == vars[i]) throw ConicProgramError("repeated index inside a cone");
    }
    if (in_cone_[vars[i]]) {
      throw ConicProgramError("variable " + std::to_string(vars[i]) + " already belongs to a cone");
    }
  }
  for (int v : vars) claim(v);
  cones_.push_back(Cone{ConeKind::nonnegative, std::vector<int>(vars.begin(), vars.end())});
  return static_cast<int>(cones_.size()) - 1;
}

int ConicProgram::add_soc(int head, std::span<const int> tail) {
  std::vector<int> members;
  members.reserve(tail.size() + 1);
  members.push_back(head);
  members.insert(members.end(), tail.begin(), tail.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    check_index(members[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (members[j] == members[i]) throw ConicProgramError("repeated index inside a cone");
    }
    if (in_cone_[members[i]]) {
      throw ConicProgramError("variable " + std::to_string(members[i]) +
                              " already belongs to a cone");
    }
  }
  for (int v : members) claim(v);
  cones_.push_back(Cone{ConeKind::second_order, std::move(members)});
  return static_cast<int>(cones_.size()) - 1;
}

void ConicProgram::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(objective_constant_)) throw ConicProgramError("non-finite objective constant");
  for (int j = 0; j < num_variables(); ++j) {
    if (!finite(cost_[j])) throw ConicProgramError("non-finite cost on variable " + std::to_string(j));
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j] ||
        lower_[j] == kInf || upper_[j] == -kInf) {
      throw ConicProgramError("invalid bounds on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < equalities_.size(); ++i) {
    if (!finite(equalities_[i].rhs)) {
      throw ConicProgramError("non-finite rhs in equality " + std::to_string(i));
    }
    for (const LinearTerm& t : equalities_[i].terms) {
      check_index(t.var);
      if (!finite(t.coef)) {
        throw ConicProgramError("non-finite coefficient in equality " + std::to_string(i));
      }
    }
  }
  std::vector<int> seen(num_variables(), 0);
  for (const Cone& c : cones_) {
    if (c.members.empty()) throw ConicProgramError("empty cone");
    for (int v : c.members) {
      check_index(v);
      if (seen[v]++) throw ConicProgramError("variable in more than one cone");
    }
  }
}

double ConicProgram::objective_value(std::span<const double> x) const {
  double v = objective_constant_;
  for (int j = 0; j < num_variables(); ++j) v += cost_[j] * x[j];
  return v;
}

namespace {

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view tok, int line) {
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConicProgramError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view tok, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ConicProgramError("line " + std::to_string(line) + ": bad index '" +
                            std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string ConicProgram::dump() const {
  std::ostringstream os;
  os << "conic-program 1\n";
  os << "variables " << num_variables() << '\n';
  os << "constant " << fmt(objective_constant_) << '\n';
  for (int j = 0; j < num_variables(); ++j) {
    if (cost_[j] != 0.0) os << "cost " << j << ' ' << fmt(cost_[j]) << '\n';
  }
  for (int j = 0; j < num_variables(); ++j) {
    if (lower_[j] != -kInf || upper_[j] != kInf) {
      os << "bound " << j << ' ' << fmt(lower_[j]) << ' ' << fmt(upper_[j]) << '\n';
    }
  }
  for (const LinearEquality& e : equalities_) {
    os << "eq " << fmt(e.rhs);
    for (const LinearTerm& t : e.terms) os << ' ' << t.var << ':' << fmt(t.coef);
    os << '\n';
  }
  for (const Cone& c : cones_) {
    os << (c.kind == ConeKind::nonnegative ? "nonneg" : "soc");
    for (int v : c.members) os << ' ' << v;
    os << '\n';
  }
  os << "end\n";
  return os.str();
}

ConicProgram ConicProgram::parse(std::string_view text) {
  ConicProgram prog;
  int line_no = 0;
  bool header = false;
  bool ended = false;
  std::size_t pos = 0;
  while (pos <= text.size() && !ended) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto tok = split(line);
    if (tok.empty() || tok[0].front() == '#') {
      if (nl == text.size()) break;
      continue;
    }
    const std::string_view key = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() < n) {
        throw ConicProgramError("line " + std::to_string(line_no) + ": too few fields");
      }
    };
    if (!header) {
      if (key != "conic-program" || tok.size() != 2 || tok[1] != "1") {
        throw ConicProgramError("line " + std::to_string(line_no) + ": expected 'conic-program 1'");
      }
      header = true;
    } else if (key == "variables") {
      need(2);
      prog.add_variables(parse_int(tok[1], line_no));
    } else if (key == "constant") {
      need(2);
      prog.objective_constant_ = parse_double(tok[1], line_no);
    } else if (key == "cost") {
      need(3);
      prog.set_cost(parse_int(tok[1], line_no), parse_double(tok[2], line_no));
    } else if (key == "bound") {
      need(4);
      prog.set_bounds(parse_int(tok[1], line_no), parse_double(tok[2], line_no),
                      parse_double(tok[3], line_no));
    } else if (key == "eq") {
      need(2);
      std::vector<LinearTerm> terms;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto colon = tok[i].find(':');
        if (colon == std::string_view::npos) {
          throw ConicProgramError("line " + std::to_string(line_no) + ": expected var:coef");
        }
        terms.push_back({parse_int(tok[i].substr(0, colon), line_no),
                         parse_double(tok[i].substr(colon + 1), line_no)});
      }
      prog.add_equality(std::move(terms), parse_double(tok[1], line_no));
    } else if (key == "nonneg" || key == "soc") {
      need(2);
      std::vector<int> members;
      for (std::size_t i = 1; i < tok.size(); ++i) members.push_back(parse_int(tok[i], line_no));
      if (key == "nonneg") {
        prog.add_nonnegative(members);
      } else {
        prog.add_soc(members.front(), std::span<const int>(members).subspan(1));
      }
    } else if (key == "end") {
      ended = true;
    } else {
      throw ConicProgramError("line " + std::to_string(line_no) + ": unknown record '" +
                              std::string(key) + "'");
    }
    if (nl == text.size()) break;
  }
  if (!header) throw ConicProgramError("missing 'conic-program' header");
  if (!ended) throw ConicProgramError("missing 'end' record");
  return prog;
}

bool operator==(const LinearTerm& a, const LinearTerm& b) {
  return a.var == b.var && a.coef == b.coef;
}
bool operator==(const LinearEquality& a, const LinearEquality& b) {
  return a.rhs == b.rhs && a.terms == b.terms;
}
bool operator==(const Cone& a, const Cone& b) {
  return a.kind == b.kind && a.members == b.members;
}
bool operator==(const ConicProgram& a, const ConicProgram& b) {
  return a.cost_ == b.cost_ && a.lower_ == b.lower_ && a.upper_ == b.upper_ &&
         a.equalities_ == b.equalities_ && a.cones_ == b.cones_ &&
         a.objective_constant_ == b.objective_constant_;
}

std::vector<int> l1_epigraph(ConicProgram& prog, std::span<const int> u, double weight) {
  std::vector<int> t;
  t.reserve(u.size());
  for (int ui : u) {
    const int tj = prog.add_variable(weight);
    const int minus = prog.add_variable();
    const int plus = prog.add_variable();
    prog.add_equality({{minus, 1.0}, {tj, -1.0}, {ui, 1.0}}, 0.0);
    prog.add_equality({{plus, 1.0}, {tj, -1.0}, {ui, -1.0}}, 0.0);
    const int pair[2] = {minus, plus};
    prog.add_nonnegative(pair);
    t.push_back(tj);
  }
  return t;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace softcap::conic
