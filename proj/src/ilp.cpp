#include "strongcore/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "strongcore/errors.hpp"
#include "strongcore/oracle.hpp"
#include "strongcore/verification.hpp"

namespace strongcore {

std::string y_variable(Agent i, Agent j) { return "y_" + std::to_string(i) + "_" + std::to_string(j); }

std::string p_variable(Agent i) { return "p_" + std::to_string(i); }

namespace {

void add_term(std::vector<LinearTerm>& terms, const std::string& variable, std::int64_t coefficient) {
  for (LinearTerm& term : terms) {
    if (term.variable == variable) {
      term.coefficient += coefficient;
      return;
    }
  }
  terms.push_back({variable, coefficient});
}

/// Drops cancelled terms; a row left empty keeps a zero-weight price term so
/// that it still parses.
void finish_terms(std::vector<LinearTerm>& terms, Agent owner) {
  std::erase_if(terms, [](const LinearTerm& t) { return t.coefficient == 0; });
  if (terms.empty()) terms.push_back({p_variable(owner), 0});
}

}  // namespace

IlpModel build_ilp(const HousingMarket& market) {
  IlpModel model;
  const auto n = static_cast<std::int64_t>(market.size());
  model.agent_count = market.size();
  const ArcSet arcs = underlying_graph(market);

  for (Agent i = 0; i < static_cast<Agent>(n); ++i) {
    IlpRow row{"asg_out_" + std::to_string(i), {}, RowSense::Equal, 1};
    for (Agent j : market.acceptable(i)) row.terms.push_back({y_variable(i, j), 1});
    model.rows.push_back(std::move(row));
  }
  for (Agent j = 0; j < static_cast<Agent>(n); ++j) {
    IlpRow row{"asg_in_" + std::to_string(j), {}, RowSense::Equal, 1};
    for (const Arc& arc : arcs) {
      if (arc.head == j) row.terms.push_back({y_variable(arc.tail, j), 1});
    }
    model.rows.push_back(std::move(row));
  }
  for (const Arc& arc : arcs) {
    const Agent i = arc.tail;
    const Agent j = arc.head;
    const std::string suffix = std::to_string(i) + "_" + std::to_string(j);
    // p_i + 1 <= p_j + n * sum of y_ik over k weakly preferred to j
    IlpRow core{"price_core_" + suffix, {}, RowSense::LessEqual, -1};
    add_term(core.terms, p_variable(i), 1);
    add_term(core.terms, p_variable(j), -1);
    // p_i <= p_j + n * sum of y_ik over k strictly preferred to j
    IlpRow sc{"price_sc_" + suffix, {}, RowSense::LessEqual, 0};
    add_term(sc.terms, p_variable(i), 1);
    add_term(sc.terms, p_variable(j), -1);
    for (Agent k : market.acceptable(i)) {
      if (market.weakly_prefers(i, k, j)) add_term(core.terms, y_variable(i, k), -n);
      if (market.prefers(i, k, j)) add_term(sc.terms, y_variable(i, k), -n);
    }
    finish_terms(core.terms, i);
    finish_terms(sc.terms, i);
    model.rows.push_back(std::move(core));
    model.rows.push_back(std::move(sc));
  }
  for (Agent i = 0; i < static_cast<Agent>(n); ++i) {
    model.bounds.push_back({p_variable(i), 1, n});
    model.generals.push_back(p_variable(i));
  }
  for (const Arc& arc : arcs) model.binaries.push_back(y_variable(arc.tail, arc.head));
  return model;
}

namespace {

std::string_view sense_text(RowSense sense) {
  switch (sense) {
    case RowSense::LessEqual: return "<=";
    case RowSense::Equal: return "=";
    case RowSense::GreaterEqual: return ">=";
  }
  return "=";
}

void write_terms(std::ostream& out, const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const LinearTerm& term : terms) {
    const std::int64_t c = term.coefficient;
    const std::int64_t magnitude = c < 0 ? -c : c;
    if (first) {
      if (c < 0) out << "- ";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (magnitude != 1) out << magnitude << ' ';
    out << term.variable;
    first = false;
  }
}

/// Writes at most this many variable names per line in the type sections.
constexpr std::size_t kNamesPerLine = 8;

void write_names(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << ' ' << names[i];
    if (i % kNamesPerLine == kNamesPerLine - 1 || i + 1 == names.size()) out << '\n';
  }
}

}  // namespace

void write_lp(const IlpModel& model, std::ostream& out) {
  out << "Maximize\n obj: 0 " << (model.generals.empty() ? "p_0" : model.generals.front()) << "\n";
  out << "Subject To\n";
  for (const IlpRow& row : model.rows) {
    out << ' ' << row.name << ": ";
    write_terms(out, row.terms);
    out << ' ' << sense_text(row.sense) << ' ' << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (const VariableBound& bound : model.bounds) {
    out << ' ' << bound.lower << " <= " << bound.variable << " <= " << bound.upper << '\n';
  }
  out << "General\n";
  write_names(out, model.generals);
  out << "Binary\n";
  write_names(out, model.binaries);
  out << "End\n";
  if (!out) throw Error(ErrorCode::IoFailure, "failed to write LP output");
}

std::string write_lp(const IlpModel& model) {
  std::ostringstream out;
  write_lp(model, out);
  return out.str();
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, "LP line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_integer(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) malformed(line, "expected an integer");
  return value;
}

std::vector<std::string> tokens_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

bool is_sense(const std::string& token) { return token == "<=" || token == "=" || token == ">="; }

}  // namespace

IlpModel read_lp(std::string_view text) {
  enum class Section { None, Objective, Constraints, Bounds, General, Binary, End };
  IlpModel model;
  Section section = Section::None;
  std::size_t line_number = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    const auto tokens = tokens_of(line);
    if (tokens.empty() || tokens.front().starts_with('\\')) continue;
    std::string head = tokens.front();
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::tolower(c); });
    if (tokens.size() == 1 && (head == "maximize" || head == "minimize")) { section = Section::Objective; continue; }
    if (tokens.size() == 2 && head == "subject") { section = Section::Constraints; continue; }
    if (tokens.size() == 1 && head == "bounds") { section = Section::Bounds; continue; }
    if (tokens.size() == 1 && head == "general") { section = Section::General; continue; }
    if (tokens.size() == 1 && head == "binary") { section = Section::Binary; continue; }
    if (tokens.size() == 1 && head == "end") { section = Section::End; continue; }
    switch (section) {
      case Section::None:
      case Section::End:
        malformed(line_number, "content outside a section");
      case Section::Objective:
        break;
      case Section::Constraints: {
        if (tokens.size() < 4 || !tokens.front().ends_with(':')) malformed(line_number, "expected a named row");
        IlpRow row;
        row.name = tokens.front().substr(0, tokens.front().size() - 1);
        std::size_t i = 1;
        std::int64_t sign = 1;
        std::int64_t pending = 1;
        bool have_number = false;
        for (; i < tokens.size() && !is_sense(tokens[i]); ++i) {
          const std::string& t = tokens[i];
          if (t == "+") { sign = 1; continue; }
          if (t == "-") { sign = -1; continue; }
          if (std::isdigit(static_cast<unsigned char>(t.front())) || t.front() == '-') {
            pending = parse_integer(t, line_number);
            have_number = true;
            continue;
          }
          row.terms.push_back({t, sign * (have_number ? pending : 1)});
          sign = 1;
          pending = 1;
          have_number = false;
        }
        if (i + 2 != tokens.size()) malformed(line_number, "expected '<sense> <rhs>' at the end of the row");
        row.sense = tokens[i] == "<=" ? RowSense::LessEqual : tokens[i] == "=" ? RowSense::Equal : RowSense::GreaterEqual;
        row.rhs = parse_integer(tokens[i + 1], line_number);
        model.rows.push_back(std::move(row));
        break;
      }
      case Section::Bounds:
        if (tokens.size() != 5 || tokens[1] != "<=" || tokens[3] != "<=") malformed(line_number, "expected 'lo <= var <= hi'");
        model.bounds.push_back({tokens[2], parse_integer(tokens[0], line_number), parse_integer(tokens[4], line_number)});
        break;
      case Section::General:
        model.generals.insert(model.generals.end(), tokens.begin(), tokens.end());
        break;
      case Section::Binary:
        model.binaries.insert(model.binaries.end(), tokens.begin(), tokens.end());
        break;
    }
  }
  if (section != Section::End) malformed(line_number, "missing End");
  model.agent_count = model.generals.size();
  return model;
}

std::map<std::string, std::int64_t> assignment_values(const HousingMarket& market, const Allocation& x,
                                                      std::span<const int> prices) {
  std::map<std::string, std::int64_t> values;
  for (const Arc& arc : underlying_graph(market)) {
    values[y_variable(arc.tail, arc.head)] = x[arc.tail] == arc.head ? 1 : 0;
  }
  for (std::size_t i = 0; i < prices.size(); ++i) values[p_variable(static_cast<Agent>(i))] = prices[i];
  return values;
}

bool row_satisfied(const IlpRow& row, const std::map<std::string, std::int64_t>& values) {
  std::int64_t lhs = 0;
  for (const LinearTerm& term : row.terms) {
    const auto it = values.find(term.variable);
    if (it == values.end()) return false;
    lhs += term.coefficient * it->second;
  }
  switch (row.sense) {
    case RowSense::LessEqual: return lhs <= row.rhs;
    case RowSense::Equal: return lhs == row.rhs;
    case RowSense::GreaterEqual: return lhs >= row.rhs;
  }
  return false;
}

std::vector<std::string> violated_rows(const IlpModel& model,
                                       const std::map<std::string, std::int64_t>& values) {
  std::vector<std::string> out;
  for (const IlpRow& row : model.rows) {
    if (!row_satisfied(row, values)) out.push_back(row.name);
  }
  for (const VariableBound& bound : model.bounds) {
    const auto it = values.find(bound.variable);
    if (it == values.end() || it->second < bound.lower || it->second > bound.upper) {
      out.push_back("bound " + bound.variable);
    }
  }
  return out;
}

bool validate_ilp_feasible_set(const HousingMarket& market, std::size_t max_agents) {
  const IlpModel model = build_ilp(market);
  std::vector<Allocation> feasible;
  bool constructed_ok = true;
  for_each_allocation(market, [&](const Allocation& x) {
    Certificate cert;
    try {
      cert = price_certificate(market, x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInStrongCore) throw;
      return true;  // a weakly blocking cycle rules out every price vector
    }
    if (!violated_rows(model, assignment_values(market, x, cert.prices)).empty()) {
      constructed_ok = false;
      return false;
    }
    feasible.push_back(x);
    return true;
  }, max_agents);
  return constructed_ok && feasible == strong_core_set(market, {}, max_agents);
}

}  // namespace strongcore
