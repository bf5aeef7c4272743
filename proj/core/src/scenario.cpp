#include "cascade/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace cascade {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Array expressions

namespace {

class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::vector<double> expand(const ArrayExpr& e) {
  const std::size_t count = e.rows * e.cols;
  std::vector<double> out;
  switch (e.kind) {
    case ArrayExpr::Kind::Literal:
      out = e.values;
      break;
    case ArrayExpr::Kind::Constant:
      out.assign(count, e.value);
      break;
    case ArrayExpr::Kind::Identity:
      out.assign(count, 0.0);
      for (std::size_t i = 0; i < e.rows; ++i) out[i * e.cols + i] = 1.0;
      break;
    case ArrayExpr::Kind::RandomUniform: {
      UnitRng rng(e.seed);
      out.resize(count);
      for (auto& v : out) v = e.lo + (e.hi - e.lo) * rng.next();
      break;
    }
  }
  if (e.zero_diagonal)
    for (std::size_t i = 0; i < std::min(e.rows, e.cols); ++i) out[i * e.cols + i] = 0.0;
  return out;
}

}  // namespace

ArrayExpr ArrayExpr::literal_vector(Vector v) {
  ArrayExpr e;
  e.rows = v.size();
  e.values = std::move(v);
  return e;
}

ArrayExpr ArrayExpr::literal_matrix(const Matrix& m) {
  ArrayExpr e;
  e.is_matrix = true;
  e.rows = m.rows();
  e.cols = m.cols();
  e.values.assign(m.data().begin(), m.data().end());
  return e;
}

ArrayExpr ArrayExpr::constant_vector(std::size_t len, double value) {
  ArrayExpr e;
  e.kind = Kind::Constant;
  e.rows = len;
  e.value = value;
  return e;
}

Vector ArrayExpr::evaluate_vector() const { return expand(*this); }

Matrix ArrayExpr::evaluate_matrix() const { return Matrix(rows, cols, expand(*this)); }

// ---------------------------------------------------------------------------
// Tokenizer and parser

namespace {

struct Token {
  enum class Kind { Number, Ident, LBracket, RBracket, LParen, RParen, Comma, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 0;
};

std::vector<Token> tokenize(std::string_view text, std::size_t line, const std::string& field) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    Token tok;
    tok.line = line;
    switch (ch) {
      case '[': tok.kind = Token::Kind::LBracket; break;
      case ']': tok.kind = Token::Kind::RBracket; break;
      case '(': tok.kind = Token::Kind::LParen; break;
      case ')': tok.kind = Token::Kind::RParen; break;
      case ',': tok.kind = Token::Kind::Comma; break;
      default: break;
    }
    if (tok.kind != Token::Kind::End) {
      tok.text = std::string(1, ch);
      out.push_back(std::move(tok));
      ++i;
      continue;
    }
    const bool numeric = std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+';
    const bool ident = std::isalpha(static_cast<unsigned char>(ch)) || ch == '_';
    if (!numeric && !ident) {
      throw ParseError(line, field, std::string("unexpected character '") + ch + "'");
    }
    std::size_t j = i + 1;
    while (j < text.size()) {
      const char c = text[j];
      const bool more = numeric ? (std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                                   ((c == '-' || c == '+') && (text[j - 1] == 'e' || text[j - 1] == 'E')))
                                : (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-');
      if (!more) break;
      ++j;
    }
    tok.kind = numeric ? Token::Kind::Number : Token::Kind::Ident;
    tok.text = std::string(text.substr(i, j - i));
    out.push_back(std::move(tok));
    i = j;
  }
  Token end;
  end.line = line;
  out.push_back(end);
  return out;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line, std::string field)
      : field_(std::move(field)), tokens_(tokenize(text, line, field_)) {}

  void finish() {
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected trailing '" + peek().text + "'");
  }

  double number() {
    const Token& t = expect(Token::Kind::Number, "a number");
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(t, "invalid number '" + t.text + "'");
    }
    return v;
  }

  std::uint64_t integer() {
    const Token& t = expect(Token::Kind::Number, "a nonnegative integer");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail(t, "expected a nonnegative integer, got '" + t.text + "'");
    }
    return v;
  }

  std::string identifier() { return expect(Token::Kind::Ident, "an identifier").text; }

  bool boolean() {
    const Token& t = expect(Token::Kind::Ident, "true or false");
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    fail(t, "expected true or false, got '" + t.text + "'");
  }

  template <typename F>
  void list(F&& item) {
    expect(Token::Kind::LBracket, "'['");
    if (peek().kind == Token::Kind::RBracket) {
      next();
      return;
    }
    while (true) {
      item();
      const Token& t = next();
      if (t.kind == Token::Kind::RBracket) return;
      if (t.kind != Token::Kind::Comma) fail(t, "expected ',' or ']'");
    }
  }

  ArrayExpr array(bool want_matrix) {
    ArrayExpr e = peek().kind == Token::Kind::LBracket ? literal() : constructor();
    if (e.is_matrix != want_matrix) {
      fail(peek(), want_matrix ? "expected a matrix" : "expected a vector");
    }
    return e;
  }

  PriceOverrideExpr window() {
    const Token& head = expect(Token::Kind::Ident, "window(start, end_exclusive, prices)");
    if (head.text != "window") fail(head, "expected window(start, end_exclusive, prices)");
    expect(Token::Kind::LParen, "'('");
    PriceOverrideExpr w;
    w.start = integer();
    expect(Token::Kind::Comma, "','");
    w.end_exclusive = integer();
    expect(Token::Kind::Comma, "','");
    w.prices = array(false);
    expect(Token::Kind::RParen, "')'");
    return w;
  }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(t.line, field_, message);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  const Token& expect(Token::Kind kind, const char* what) {
    const Token& t = next();
    if (t.kind != kind) {
      fail(t, std::string("expected ") + what +
                  (t.kind == Token::Kind::End ? ", found end of value" : ", found '" + t.text + "'"));
    }
    return t;
  }

  ArrayExpr literal() {
    ArrayExpr e;
    const std::size_t open = pos_;
    next();
    if (peek().kind != Token::Kind::LBracket) {
      pos_ = open;
      list([&] { e.values.push_back(number()); });
      e.rows = e.values.size();
      if (e.rows == 0) fail(tokens_[open], "empty vector");
      return e;
    }
    pos_ = open;
    e.is_matrix = true;
    std::size_t row_index = 0;
    list([&] {
      const Token& row_start = peek();
      const std::size_t before = e.values.size();
      list([&] { e.values.push_back(number()); });
      const std::size_t len = e.values.size() - before;
      if (row_index == 0) {
        e.cols = len;
        if (len == 0) fail(row_start, "row 0 is empty");
      } else if (len != e.cols) {
        fail(row_start, "row " + std::to_string(row_index) + " has " + std::to_string(len) +
                            " entries, expected " + std::to_string(e.cols));
      }
      ++row_index;
    });
    e.rows = row_index;
    if (e.rows == 0) fail(tokens_[open], "empty matrix");
    return e;
  }

  ArrayExpr constructor() {
    const Token head = expect(Token::Kind::Ident, "an array literal or constructor");
    expect(Token::Kind::LParen, "'('");
    ArrayExpr e;
    if (head.text == "zero_diagonal") {
      e = array(true);
      e.zero_diagonal = true;
    } else {
      std::vector<Token> args;
      while (true) {
        args.push_back(expect(Token::Kind::Number, "a numeric argument"));
        if (peek().kind == Token::Kind::RParen) break;
        expect(Token::Kind::Comma, "','");
      }
      e = from_arguments(head, args);
    }
    expect(Token::Kind::RParen, "')'");
    return e;
  }

  ArrayExpr from_arguments(const Token& head, const std::vector<Token>& args) {
    auto as_size = [&](const Token& t) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size() || v == 0) {
        fail(t, "expected a positive integer dimension, got '" + t.text + "'");
      }
      return v;
    };
    auto as_double = [&](const Token& t) {
      ValueParser sub(t.text, t.line, field_);
      return sub.number();
    };
    auto as_seed = [&](const Token& t) {
      ValueParser sub(t.text, t.line, field_);
      return sub.integer();
    };

    ArrayExpr e;
    if (head.text == "constant" && (args.size() == 2 || args.size() == 3)) {
      e.kind = ArrayExpr::Kind::Constant;
      e.is_matrix = args.size() == 3;
      e.rows = as_size(args[0]);
      e.cols = e.is_matrix ? as_size(args[1]) : 1;
      e.value = as_double(args.back());
    } else if (head.text == "identity" && args.size() == 1) {
      e.kind = ArrayExpr::Kind::Identity;
      e.is_matrix = true;
      e.rows = e.cols = as_size(args[0]);
    } else if (head.text == "random_uniform" && (args.size() == 4 || args.size() == 5)) {
      e.kind = ArrayExpr::Kind::RandomUniform;
      e.is_matrix = args.size() == 5;
      e.rows = as_size(args[0]);
      e.cols = e.is_matrix ? as_size(args[1]) : 1;
      const std::size_t off = e.is_matrix ? 2 : 1;
      e.lo = as_double(args[off]);
      e.hi = as_double(args[off + 1]);
      e.seed = as_seed(args[off + 2]);
      if (!(e.lo <= e.hi)) fail(head, "random_uniform needs lo <= hi");
    } else {
      fail(head, "unknown constructor " + head.text + " with " + std::to_string(args.size()) +
                     " argument(s)");
    }
    return e;
  }

  std::string field_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

int bracket_balance(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
  }
  return depth;
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

struct Statement {
  std::string key;
  std::string value;
  std::size_t line;
};

std::vector<Statement> split_statements(std::string_view document) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : document) {
      if (c == '\n') {
        lines.push_back(std::move(cur));
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    lines.push_back(std::move(cur));
  }

  std::vector<Statement> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string text = strip_comment(lines[i]);
    if (trim(text).empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(i + 1, "", "expected 'key = value'");
    Statement st{trim(std::string_view(text).substr(0, eq)), text.substr(eq + 1), i + 1};
    if (st.key.empty()) throw ParseError(i + 1, "", "missing key before '='");
    int depth = bracket_balance(st.value);
    while (depth > 0) {
      if (++i >= lines.size()) throw ParseError(st.line, st.key, "unterminated bracket");
      const std::string more = strip_comment(lines[i]);
      st.value += '\n';
      st.value += more;
      depth += bracket_balance(more);
    }
    if (depth < 0) throw ParseError(i + 1, st.key, "unbalanced closing bracket");
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

ScenarioDefinition parse_scenario_definition(std::string_view document) {
  ScenarioDefinition def;
  std::vector<std::string> seen;
  const std::vector<std::string> required = {"schema_version", "name", "C", "D", "p",
                                             "beta", "v_threshold", "initial_state", "horizon"};

  for (const auto& st : split_statements(document)) {
    if (st.key != "price_override") {
      if (std::find(seen.begin(), seen.end(), st.key) != seen.end()) {
        throw ParseError(st.line, st.key, "duplicate key");
      }
      seen.push_back(st.key);
    }
    const std::string raw = trim(st.value);
    if (st.key == "name") {
      def.name = unquote(raw);
      if (def.name.empty()) throw ParseError(st.line, st.key, "name must not be empty");
      continue;
    }
    if (st.key == "note") {
      def.note = unquote(raw);
      continue;
    }

    ValueParser vp(st.value, st.line, st.key);
    if (st.key == "schema_version") {
      const auto v = vp.integer();
      if (v != static_cast<std::uint64_t>(kScenarioSchemaVersion)) {
        throw ParseError(st.line, st.key, "unsupported schema version " + std::to_string(v));
      }
      def.schema_version = static_cast<int>(v);
    } else if (st.key == "labels") {
      vp.list([&] { def.labels.push_back(vp.identifier()); });
    } else if (st.key == "C") {
      def.cross_holdings = vp.array(true);
    } else if (st.key == "D") {
      def.asset_holdings = vp.array(true);
    } else if (st.key == "p") {
      def.prices = vp.array(false);
    } else if (st.key == "beta") {
      def.failure_costs = vp.array(false);
    } else if (st.key == "v_threshold") {
      def.thresholds = vp.array(false);
    } else if (st.key == "initial_state") {
      def.initial_state = vp.array(false);
    } else if (st.key == "price_override") {
      def.price_overrides.push_back(vp.window());
    } else if (st.key == "horizon") {
      def.horizon = vp.integer();
    } else if (st.key == "conv_tol") {
      def.conv_tol = vp.number();
    } else if (st.key == "confirm_window") {
      def.confirm_window = vp.integer();
    } else if (st.key == "snapshot_times") {
      def.snapshot_times.clear();
      vp.list([&] { def.snapshot_times.push_back(vp.integer()); });
    } else if (st.key == "seeds_pinned") {
      def.seeds_pinned = vp.boolean();
    } else {
      throw ParseError(st.line, st.key, "unknown key");
    }
    vp.finish();
  }

  for (const auto& key : required)
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      throw ParseError(0, key, "missing required key");
    }
  return def;
}

ScenarioFile parse_scenario(std::string_view document) {
  return ScenarioFile::build(parse_scenario_definition(document));
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

std::string render(const ArrayExpr& e) {
  std::string body;
  switch (e.kind) {
    case ArrayExpr::Kind::Literal:
      if (!e.is_matrix) {
        body = "[" + join_numbers(e.values) + "]";
      } else {
        body = "[\n";
        for (std::size_t i = 0; i < e.rows; ++i) {
          body += "  [" + join_numbers(std::span(e.values).subspan(i * e.cols, e.cols)) + "]";
          body += i + 1 < e.rows ? ",\n" : "\n";
        }
        body += "]";
      }
      break;
    case ArrayExpr::Kind::Constant:
      body = "constant(" + std::to_string(e.rows) +
             (e.is_matrix ? ", " + std::to_string(e.cols) : "") + ", " + format_number(e.value) + ")";
      break;
    case ArrayExpr::Kind::Identity:
      body = "identity(" + std::to_string(e.rows) + ")";
      break;
    case ArrayExpr::Kind::RandomUniform:
      body = "random_uniform(" + std::to_string(e.rows) +
             (e.is_matrix ? ", " + std::to_string(e.cols) : "") + ", " + format_number(e.lo) +
             ", " + format_number(e.hi) + ", " + std::to_string(e.seed) + ")";
      break;
  }
  return e.zero_diagonal ? "zero_diagonal(" + body + ")" : body;
}

}  // namespace

std::string serialize_scenario(const ScenarioDefinition& d) {
  std::ostringstream out;
  out << "schema_version = " << d.schema_version << "\n";
  out << "name = " << d.name << "\n";
  if (!d.note.empty()) out << "note = " << d.note << "\n";
  if (!d.labels.empty()) {
    out << "labels = [";
    for (std::size_t i = 0; i < d.labels.size(); ++i) out << (i ? ", " : "") << d.labels[i];
    out << "]\n";
  }
  out << "C = " << render(d.cross_holdings) << "\n";
  out << "D = " << render(d.asset_holdings) << "\n";
  out << "p = " << render(d.prices) << "\n";
  out << "beta = " << render(d.failure_costs) << "\n";
  out << "v_threshold = " << render(d.thresholds) << "\n";
  for (const auto& w : d.price_overrides) {
    out << "price_override = window(" << w.start << ", " << w.end_exclusive << ", "
        << render(w.prices) << ")\n";
  }
  out << "initial_state = " << render(d.initial_state) << "\n";
  out << "horizon = " << d.horizon << "\n";
  out << "conv_tol = " << format_number(d.conv_tol) << "\n";
  out << "confirm_window = " << d.confirm_window << "\n";
  out << "snapshot_times = [";
  for (std::size_t i = 0; i < d.snapshot_times.size(); ++i)
    out << (i ? ", " : "") << d.snapshot_times[i];
  out << "]\n";
  out << "seeds_pinned = " << (d.seeds_pinned ? "true" : "false") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Building

ScenarioFile::ScenarioFile(ScenarioDefinition def, FinancialNetwork net, PriceSignal prices,
                           Vector initial)
    : definition_(std::move(def)),
      network_(std::move(net)),
      prices_(std::move(prices)),
      initial_state_(std::move(initial)) {}

ScenarioFile ScenarioFile::build(ScenarioDefinition def) {
  NetworkData data{def.cross_holdings.evaluate_matrix(), def.asset_holdings.evaluate_matrix(),
                   def.prices.evaluate_vector(), def.failure_costs.evaluate_vector(),
                   def.thresholds.evaluate_vector()};
  std::vector<Violation> out = FinancialNetwork::check(data);
  const std::size_t n = data.cross_holdings.rows();

  Vector initial = def.initial_state.evaluate_vector();
  if (initial.size() != n) {
    out.push_back({"initial_state", "length " + std::to_string(initial.size()) + ", expected " +
                                        std::to_string(n)});
  }
  for (std::size_t i = 0; i < initial.size(); ++i)
    if (!std::isfinite(initial[i])) out.push_back({"initial_state", "not finite"});
  if (!def.labels.empty() && def.labels.size() != n) {
    out.push_back({"labels", std::to_string(def.labels.size()) + " labels for " +
                                 std::to_string(n) + " organizations"});
  }
  if (def.horizon == 0) out.push_back({"horizon", "must be >= 1"});
  if (def.confirm_window == 0) out.push_back({"confirm_window", "must be >= 1"});
  if (!(def.conv_tol > 0.0)) out.push_back({"conv_tol", "must be > 0"});
  for (std::size_t t : def.snapshot_times)
    if (t > def.horizon) {
      out.push_back({"snapshot_times", "time " + std::to_string(t) + " beyond horizon"});
    }
  if (!out.empty()) throw ValidationFailure(std::move(out));

  std::vector<PriceWindow> windows;
  for (const auto& w : def.price_overrides)
    windows.push_back({w.start, w.end_exclusive, w.prices.evaluate_vector()});
  PriceSignal signal(data.prices, std::move(windows));
  auto network = FinancialNetwork::validate(std::move(data));
  return ScenarioFile(std::move(def), std::move(network), std::move(signal), std::move(initial));
}

SimulationOptions ScenarioFile::options() const {
  return {definition_.horizon, definition_.conv_tol, definition_.confirm_window};
}

std::vector<std::string> ScenarioFile::node_names() const {
  if (!definition_.labels.empty()) return definition_.labels;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < network_.organizations(); ++i) names.push_back(std::to_string(i + 1));
  return names;
}

bool uses_random_seeds(const ScenarioDefinition& d) {
  bool any = d.cross_holdings.random() || d.asset_holdings.random() || d.prices.random() ||
             d.failure_costs.random() || d.thresholds.random() || d.initial_state.random();
  for (const auto& w : d.price_overrides) any = any || w.prices.random();
  return any;
}

ScenarioDefinition with_seed(ScenarioDefinition d, std::uint64_t seed) {
  for (ArrayExpr* e : {&d.cross_holdings, &d.asset_holdings, &d.prices, &d.failure_costs,
                       &d.thresholds, &d.initial_state})
    if (e->random()) e->seed = seed;
  for (auto& w : d.price_overrides)
    if (w.prices.random()) w.prices.seed = seed;
  return d;
}

}  // namespace cascade
