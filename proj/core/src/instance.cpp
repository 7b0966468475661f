#include "orbikit/instance.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

namespace orbikit {

namespace {

struct Line {
  int number = 0;
  std::string text;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> keys;  // value, line
  std::vector<Line> data;
};

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(lineno, static_cast<int>(line.size()), "unterminated section header");
      std::string name = strip(line.substr(1, line.size() - 2));
      static const char* known[] = {"group", "action", "cocycle", "family",
                                    "algebra", "rep", "pair"};
      bool ok = false;
      for (const char* k : known)
        if (name == k) ok = true;
      if (!ok) throw ParseError(lineno, 1, "unknown section [" + name + "]");
      sections.push_back({name, lineno, {}, {}});
      continue;
    }
    if (sections.empty()) throw ParseError(lineno, 1, "content before any section header");
    if (auto eq = line.find('='); eq != std::string::npos && line.find(' ') > eq) {
      std::string key = strip(line.substr(0, eq));
      std::string value = strip(line.substr(eq + 1));
      sections.back().keys[key] = {value, lineno};
    } else {
      sections.back().data.push_back({lineno, line});
    }
  }
  return sections;
}

long long parse_int(const std::string& token, int lineno, int col) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(lineno, col, "expected an integer, got '" + token + "'");
  return v;
}

double parse_real(const std::string& token, int lineno, int col) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (...) {
    throw ParseError(lineno, col, "expected a number, got '" + token + "'");
  }
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(strip(cur));
  return out;
}

// Cycle notation like "(0 1)(2 3)" or "()" for the identity.
std::vector<int> parse_cycles(const std::string& text, int lineno, int domain_hint) {
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  int maxpt = domain_hint - 1;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw ParseError(lineno, static_cast<int>(i) + 1, "expected '('");
    std::size_t close = text.find(')', i);
    if (close == std::string::npos)
      throw ParseError(lineno, static_cast<int>(i) + 1, "unterminated cycle");
    std::string inner = text.substr(i + 1, close - i - 1);
    for (char& c : inner)
      if (c == ',') c = ' ';
    std::vector<int> cyc;
    for (const std::string& t : tokens_of(inner)) {
      int v = static_cast<int>(parse_int(t, lineno, static_cast<int>(i) + 1));
      if (v < 0) throw ParseError(lineno, static_cast<int>(i) + 1, "negative point");
      maxpt = std::max(maxpt, v);
      cyc.push_back(v);
    }
    cycles.push_back(std::move(cyc));
    i = close + 1;
  }
  std::vector<int> perm(maxpt + 1);
  for (int v = 0; v <= maxpt; ++v) perm[v] = v;
  for (const auto& cyc : cycles)
    for (std::size_t t = 0; t < cyc.size(); ++t)
      perm[cyc[t]] = cyc[(t + 1) % cyc.size()];
  return perm;
}

FiniteGroup parse_group(const Section& s) {
  if (auto it = s.keys.find("generators"); it != s.keys.end()) {
    const auto& [value, lineno] = it->second;
    std::vector<std::vector<int>> gens;
    int domain = 1;
    for (const std::string& part : split_on(value, ',')) {
      if (part.empty()) continue;
      auto perm = parse_cycles(part, lineno, domain);
      domain = std::max(domain, static_cast<int>(perm.size()));
      gens.push_back(std::move(perm));
    }
    for (auto& g : gens)
      for (int v = static_cast<int>(g.size()); v < domain; ++v) g.push_back(v);
    try {
      return group_from_permutations(gens);
    } catch (const ClosureTooLarge&) {
      throw;
    } catch (const Error& e) {
      throw SemanticError(std::string("group: ") + e.what());
    }
  }
  if (auto it = s.keys.find("table"); it != s.keys.end()) {
    const auto& [value, lineno] = it->second;
    std::vector<std::vector<int>> table;
    for (const std::string& row : split_on(value, ';')) {
      std::vector<int> r;
      for (const std::string& t : tokens_of(row))
        r.push_back(static_cast<int>(parse_int(t, lineno, 1)));
      table.push_back(std::move(r));
    }
    try {
      return group_from_table(std::move(table));
    } catch (const Error& e) {
      throw SemanticError(std::string("group: ") + e.what());
    }
  }
  throw ParseError(s.line, 1, "[group] needs 'generators' or 'table'");
}

GroupAction parse_action(const Section& s, const FiniteGroup& g) {
  auto pit = s.keys.find("points");
  auto tit = s.keys.find("table");
  if (pit == s.keys.end() || tit == s.keys.end())
    throw ParseError(s.line, 1, "[action] needs 'points' and 'table'");
  int points = static_cast<int>(parse_int(pit->second.first, pit->second.second, 1));
  std::vector<std::vector<int>> act;
  for (const std::string& row : split_on(tit->second.first, ';')) {
    std::vector<int> r;
    for (const std::string& t : tokens_of(row))
      r.push_back(static_cast<int>(parse_int(t, tit->second.second, 1)));
    if (static_cast<int>(r.size()) != g.order)
      throw SemanticError("action row has " + std::to_string(r.size()) + " entries, group order is " +
                          std::to_string(g.order));
    act.push_back(std::move(r));
  }
  if (static_cast<int>(act.size()) != points)
    throw SemanticError("action table has " + std::to_string(act.size()) + " rows, points = " +
                        std::to_string(points));
  std::vector<std::string> labels;
  if (auto lit = s.keys.find("labels"); lit != s.keys.end())
    for (const std::string& l : split_on(lit->second.first, ',')) labels.push_back(l);
  try {
    return make_action(g, std::move(act), std::move(labels));
  } catch (const Error& e) {
    throw SemanticError(std::string("action: ") + e.what());
  }
}

RootOfUnity parse_root(const std::vector<std::string>& toks, std::size_t at, int lineno) {
  long long order = parse_int(toks[at], lineno, 1);
  long long expo = parse_int(toks[at + 1], lineno, 1);
  if (order < 1) throw SemanticError("root of unity with order " + std::to_string(order));
  return RootOfUnity::make(order, expo);
}

TwoCocycle parse_cocycle(const Section& s, const FiniteGroup& g) {
  TwoCocycle c = TwoCocycle::trivial(g.order);
  for (const Line& line : s.data) {
    auto toks = tokens_of(line.text);
    if (toks.size() != 4)
      throw ParseError(line.number, 1, "cocycle line needs 'g h N k'");
    int x = static_cast<int>(parse_int(toks[0], line.number, 1));
    int y = static_cast<int>(parse_int(toks[1], line.number, 1));
    if (x < 0 || x >= g.order || y < 0 || y >= g.order)
      throw SemanticError("cocycle entry references unknown group element (" +
                          std::to_string(x) + "," + std::to_string(y) + ")");
    c(x, y) = parse_root(toks, 2, line.number);
  }
  return c;
}

CocycleFamily parse_family(const Section& s, const FiniteGroup& g, const GroupAction& a) {
  CocycleFamily fam = CocycleFamily::trivial(a.points, g.order);
  for (const Line& line : s.data) {
    auto toks = tokens_of(line.text);
    if (toks.size() != 5)
      throw ParseError(line.number, 1, "family line needs 'm g h N k'");
    int m = static_cast<int>(parse_int(toks[0], line.number, 1));
    int x = static_cast<int>(parse_int(toks[1], line.number, 1));
    int y = static_cast<int>(parse_int(toks[2], line.number, 1));
    if (m < 0 || m >= a.points) throw SemanticError("family entry references unknown point");
    if (x < 0 || x >= g.order || y < 0 || y >= g.order)
      throw SemanticError("family entry references unknown group element");
    fam.slices[m](x, y) = parse_root(toks, 3, line.number);
  }
  FamilyVerdict fv = verify_family(g, a, fam);
  if (!fv.ok) {
    const auto& v = fv.violations.front();
    throw SemanticError("family relation fails at (point " + a.point_labels[v.point] + ", g=" +
                        std::to_string(v.g) + ", h=" + std::to_string(v.h) + ", k=" +
                        std::to_string(v.k) + ")");
  }
  return fam;
}

StructureAlgebra parse_algebra(const Section& s) {
  auto dit = s.keys.find("dim");
  auto uit = s.keys.find("unit");
  if (dit == s.keys.end() || uit == s.keys.end())
    throw ParseError(s.line, 1, "[algebra] needs 'dim' and 'unit'");
  int dim = static_cast<int>(parse_int(dit->second.first, dit->second.second, 1));
  if (dim < 1) throw SemanticError("algebra dimension must be positive");
  auto utoks = tokens_of(uit->second.first);
  if (static_cast<int>(utoks.size()) != 2 * dim)
    throw SemanticError("algebra unit needs 2*dim numbers (re im pairs)");
  Vec unit(dim);
  for (int i = 0; i < dim; ++i)
    unit(i) = Complex(parse_real(utoks[2 * i], uit->second.second, 1),
                      parse_real(utoks[2 * i + 1], uit->second.second, 1));
  StructureAlgebra a;
  a.dim = dim;
  a.unit = unit;
  a.left.assign(dim, Mat::Zero(dim, dim));
  for (const Line& line : s.data) {
    auto toks = tokens_of(line.text);
    if (toks.size() != 5) throw ParseError(line.number, 1, "algebra line needs 'i j k re im'");
    int i = static_cast<int>(parse_int(toks[0], line.number, 1));
    int j = static_cast<int>(parse_int(toks[1], line.number, 1));
    int k = static_cast<int>(parse_int(toks[2], line.number, 1));
    if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim)
      throw SemanticError("algebra structure entry out of range");
    a.left[i](k, j) = Complex(parse_real(toks[3], line.number, 1),
                              parse_real(toks[4], line.number, 1));
  }
  return a;
}

Representation parse_rep(const Section& s, const StructureAlgebra& a) {
  auto dit = s.keys.find("dim");
  if (dit == s.keys.end()) throw ParseError(s.line, 1, "[rep] needs 'dim'");
  int dim = static_cast<int>(parse_int(dit->second.first, dit->second.second, 1));
  Representation rep;
  rep.dim = dim;
  rep.rho.assign(a.dim, Mat::Zero(dim, dim));
  for (const Line& line : s.data) {
    auto toks = tokens_of(line.text);
    if (toks.size() != 5) throw ParseError(line.number, 1, "rep line needs 'b row col re im'");
    int b = static_cast<int>(parse_int(toks[0], line.number, 1));
    int r = static_cast<int>(parse_int(toks[1], line.number, 1));
    int c = static_cast<int>(parse_int(toks[2], line.number, 1));
    if (b < 0 || b >= a.dim) throw SemanticError("rep entry references unknown basis element");
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw SemanticError("rep entry out of range");
    rep.rho[b](r, c) = Complex(parse_real(toks[3], line.number, 1),
                               parse_real(toks[4], line.number, 1));
  }
  return rep;
}

PairData parse_pair(const Section& s, const StructureAlgebra& a,
                    const std::optional<FiniteGroup>& g) {
  auto cit = s.keys.find("carrier");
  if (cit == s.keys.end()) throw ParseError(s.line, 1, "[pair] needs 'carrier'");
  int carrier = static_cast<int>(parse_int(cit->second.first, cit->second.second, 1));
  if (carrier < 1) throw SemanticError("pair carrier must be positive");
  auto count_of = [&](const char* key) {
    auto it = s.keys.find(key);
    if (it == s.keys.end()) return 0;
    return static_cast<int>(parse_int(it->second.first, it->second.second, 1));
  };
  PairData p;
  p.carrier = carrier;
  p.rho.assign(a.dim, Mat::Zero(carrier, carrier));
  p.b_ops.assign(count_of("bops"), Mat::Zero(carrier, carrier));
  p.ambient.assign(count_of("ambient"), Mat::Zero(carrier, carrier));
  if (g) p.phi.assign(g->order, Mat::Zero(carrier, carrier));

  for (const Line& line : s.data) {
    auto toks = tokens_of(line.text);
    if (toks.size() != 6)
      throw ParseError(line.number, 1, "pair line needs 'kind index row col re im'");
    const std::string& kind = toks[0];
    int idx = static_cast<int>(parse_int(toks[1], line.number, 1));
    int r = static_cast<int>(parse_int(toks[2], line.number, 1));
    int c = static_cast<int>(parse_int(toks[3], line.number, 1));
    Complex v(parse_real(toks[4], line.number, 1), parse_real(toks[5], line.number, 1));
    if (r < 0 || c < 0 || r >= carrier || c >= carrier)
      throw SemanticError("pair entry out of range");
    std::vector<Mat>* target = nullptr;
    if (kind == "rho") target = &p.rho;
    else if (kind == "bop") target = &p.b_ops;
    else if (kind == "ambient") target = &p.ambient;
    else if (kind == "phi") target = &p.phi;
    else throw ParseError(line.number, 1, "unknown pair operator kind '" + kind + "'");
    if (kind == "phi" && !g) throw SemanticError("pair phi entries need a [group] section");
    if (idx < 0 || idx >= static_cast<int>(target->size()))
      throw SemanticError("pair operator index out of range for kind '" + kind + "'");
    (*target)[idx](r, c) = v;
  }
  return p;
}

void append_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  Instance inst;
  auto sections = split_sections(text);
  auto find = [&](const char* name) -> const Section* {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  };

  if (const Section* s = find("group")) inst.group = parse_group(*s);
  if (const Section* s = find("action")) {
    if (!inst.group) throw SemanticError("[action] needs a [group] section");
    inst.action = parse_action(*s, *inst.group);
  }
  if (const Section* s = find("cocycle")) {
    if (!inst.group) throw SemanticError("[cocycle] needs a [group] section");
    inst.cocycle = parse_cocycle(*s, *inst.group);
  }
  if (const Section* s = find("family")) {
    if (!inst.group || !inst.action)
      throw SemanticError("[family] needs [group] and [action] sections");
    inst.family = parse_family(*s, *inst.group, *inst.action);
  }
  if (const Section* s = find("algebra")) inst.algebra = parse_algebra(*s);
  if (const Section* s = find("rep")) {
    if (!inst.algebra) throw SemanticError("[rep] needs an [algebra] section");
    inst.rep = parse_rep(*s, *inst.algebra);
  }
  if (const Section* s = find("pair")) {
    if (!inst.algebra) throw SemanticError("[pair] needs an [algebra] section");
    inst.pair = parse_pair(*s, *inst.algebra, inst.group);
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::string out;
  auto put_matrix_lines = [&](const std::string& kind, int idx, const Mat& m) {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        if (m(r, c) == Complex(0.0)) continue;
        out += kind + " " + std::to_string(idx) + " " + std::to_string(r) + " " +
               std::to_string(c) + " ";
        append_real(out, m(r, c).real());
        out += " ";
        append_real(out, m(r, c).imag());
        out += "\n";
      }
  };

  if (inst.group) {
    out += "[group]\ntable = ";
    for (int i = 0; i < inst.group->order; ++i) {
      if (i) out += "; ";
      for (int j = 0; j < inst.group->order; ++j) {
        if (j) out += " ";
        out += std::to_string(inst.group->table[i][j]);
      }
    }
    out += "\n";
  }
  if (inst.action) {
    out += "[action]\npoints = " + std::to_string(inst.action->points) + "\n";
    out += "labels = ";
    for (int s = 0; s < inst.action->points; ++s)
      out += (s ? ", " : "") + inst.action->point_labels[s];
    out += "\ntable = ";
    for (int s = 0; s < inst.action->points; ++s) {
      if (s) out += "; ";
      for (int g = 0; g < static_cast<int>(inst.action->act[s].size()); ++g) {
        if (g) out += " ";
        out += std::to_string(inst.action->act[s][g]);
      }
    }
    out += "\n";
  }
  if (inst.cocycle) {
    out += "[cocycle]\n";
    for (int x = 0; x < inst.cocycle->group_order; ++x)
      for (int y = 0; y < inst.cocycle->group_order; ++y) {
        const RootOfUnity& r = (*inst.cocycle)(x, y);
        if (r.is_one()) continue;
        out += std::to_string(x) + " " + std::to_string(y) + " " + std::to_string(r.order) +
               " " + std::to_string(r.exponent) + "\n";
      }
  }
  if (inst.family) {
    out += "[family]\n";
    for (int m = 0; m < inst.family->points; ++m)
      for (int x = 0; x < inst.family->group_order; ++x)
        for (int y = 0; y < inst.family->group_order; ++y) {
          const RootOfUnity& r = inst.family->slice(m)(x, y);
          if (r.is_one()) continue;
          out += std::to_string(m) + " " + std::to_string(x) + " " + std::to_string(y) + " " +
                 std::to_string(r.order) + " " + std::to_string(r.exponent) + "\n";
        }
  }
  if (inst.algebra) {
    out += "[algebra]\ndim = " + std::to_string(inst.algebra->dim) + "\nunit =";
    for (int i = 0; i < inst.algebra->dim; ++i) {
      out += " ";
      append_real(out, inst.algebra->unit(i).real());
      out += " ";
      append_real(out, inst.algebra->unit(i).imag());
    }
    out += "\n";
    for (int i = 0; i < inst.algebra->dim; ++i)
      for (int j = 0; j < inst.algebra->dim; ++j)
        for (int k = 0; k < inst.algebra->dim; ++k) {
          Complex v = inst.algebra->c(i, j, k);
          if (v == Complex(0.0)) continue;
          out += std::to_string(i) + " " + std::to_string(j) + " " + std::to_string(k) + " ";
          append_real(out, v.real());
          out += " ";
          append_real(out, v.imag());
          out += "\n";
        }
  }
  if (inst.rep) {
    out += "[rep]\ndim = " + std::to_string(inst.rep->dim) + "\n";
    for (int b = 0; b < static_cast<int>(inst.rep->rho.size()); ++b)
      for (int r = 0; r < inst.rep->rho[b].rows(); ++r)
        for (int c = 0; c < inst.rep->rho[b].cols(); ++c) {
          Complex v = inst.rep->rho[b](r, c);
          if (v == Complex(0.0)) continue;
          out += std::to_string(b) + " " + std::to_string(r) + " " + std::to_string(c) + " ";
          append_real(out, v.real());
          out += " ";
          append_real(out, v.imag());
          out += "\n";
        }
  }
  if (inst.pair) {
    out += "[pair]\ncarrier = " + std::to_string(inst.pair->carrier) + "\n";
    out += "bops = " + std::to_string(inst.pair->b_ops.size()) + "\n";
    out += "ambient = " + std::to_string(inst.pair->ambient.size()) + "\n";
    for (int i = 0; i < static_cast<int>(inst.pair->rho.size()); ++i)
      put_matrix_lines("rho", i, inst.pair->rho[i]);
    for (int i = 0; i < static_cast<int>(inst.pair->b_ops.size()); ++i)
      put_matrix_lines("bop", i, inst.pair->b_ops[i]);
    for (int i = 0; i < static_cast<int>(inst.pair->ambient.size()); ++i)
      put_matrix_lines("ambient", i, inst.pair->ambient[i]);
    for (int i = 0; i < static_cast<int>(inst.pair->phi.size()); ++i)
      put_matrix_lines("phi", i, inst.pair->phi[i]);
  }
  return out;
}

}  // namespace orbikit
