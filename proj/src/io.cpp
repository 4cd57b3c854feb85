#include "sandpile/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "sandpile/errors.hpp"

namespace sandpile {

namespace {

constexpr int kMaxTableOrder = 4096;

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(std::move(token));
  return tokens;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::int64_t parse_int64(const std::string& token, int line_no) {
  std::int64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec == std::errc::result_out_of_range)
    fail(line_no, "integer '" + token + "' does not fit in 64 bits");
  if (ec != std::errc() || ptr != end)
    fail(line_no, "expected an integer, got '" + token + "'");
  return value;
}

int parse_int(const std::string& token, int line_no) {
  const std::int64_t value = parse_int64(token, line_no);
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
    fail(line_no, "integer '" + token + "' does not fit in 32 bits");
  return static_cast<int>(value);
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

// Every token of the stream together with the line it came from, comments
// stripped. Used by the free-form formats (configurations, table entries).
struct LocatedToken {
  std::string text;
  int line_no;
};

std::vector<LocatedToken> tokenize_all(std::istream& in) {
  std::vector<LocatedToken> tokens;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    for (auto& token : split_tokens(strip_comment(raw)))
      tokens.push_back({std::move(token), line_no});
  }
  return tokens;
}

}  // namespace

MultiDigraph parse_graph(std::istream& in) {
  bool have_header = false;
  int header_line = 0;
  int vertex_count = 0;
  int sink = 0;
  std::vector<Edge> edges;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = split_tokens(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens[0] == "n") {
      if (have_header) fail(line_no, "duplicate 'n' directive");
      if (tokens.size() != 3)
        fail(line_no, "'n' directive expects a vertex count and a sink index");
      vertex_count = parse_int(tokens[1], line_no);
      sink = parse_int(tokens[2], line_no);
      have_header = true;
      header_line = line_no;
    } else if (tokens[0] == "e") {
      if (!have_header) fail(line_no, "'e' directive before the 'n' directive");
      if (tokens.size() != 4)
        fail(line_no, "'e' directive expects a tail, a head, and a multiplicity");
      Edge e;
      e.tail = parse_int(tokens[1], line_no);
      e.head = parse_int(tokens[2], line_no);
      e.multiplicity = parse_int64(tokens[3], line_no);
      edges.push_back(e);
    } else {
      fail(line_no, "unknown directive '" + tokens[0] + "'");
    }
  }
  if (!have_header) throw ParseError("missing 'n' directive");

  try {
    return MultiDigraph(vertex_count, sink, std::move(edges));
  } catch (const std::invalid_argument& err) {
    fail(header_line, err.what());
  }
}

MultiDigraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

MultiDigraph load_graph(const std::string& path) {
  auto in = open_file(path);
  try {
    return parse_graph(in);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::string serialize_graph(const MultiDigraph& g) {
  std::ostringstream out;
  out << "n " << g.vertex_count() << ' ' << g.sink() << '\n';
  for (const auto& e : g.edges())
    out << "e " << e.tail << ' ' << e.head << ' ' << e.multiplicity << '\n';
  return out.str();
}

Config parse_config_text(const std::string& text, int site_count) {
  if (site_count < 0) throw std::invalid_argument("site count must be nonnegative");
  std::istringstream in(text);
  const auto tokens = tokenize_all(in);
  if (static_cast<int>(tokens.size()) != site_count) {
    throw ParseError("expected " + std::to_string(site_count) + " grain counts, got " +
                     std::to_string(tokens.size()));
  }
  Config c(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    c[i] = parse_int64(tokens[i].text, tokens[i].line_no);
    if (c[i] < 0) fail(tokens[i].line_no, "grain counts must be nonnegative");
  }
  return c;
}

Config load_config(const std::string& path, int site_count) {
  auto in = open_file(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config_text(buffer.str(), site_count);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::string serialize_config(const Config& c) {
  std::ostringstream out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out << ' ';
    out << c[i];
  }
  out << '\n';
  return out.str();
}

MonoidTable parse_table(std::istream& in) {
  const auto tokens = tokenize_all(in);
  if (tokens.empty()) throw ParseError("missing 'm' directive");
  if (tokens[0].text != "m") fail(tokens[0].line_no, "expected the 'm' directive first");
  if (tokens.size() < 3)
    fail(tokens[0].line_no, "'m' directive expects an order and an identity index");

  MonoidTable t;
  t.order = parse_int(tokens[1].text, tokens[1].line_no);
  t.identity = parse_int(tokens[2].text, tokens[2].line_no);
  if (t.order < 1) fail(tokens[1].line_no, "table order must be positive");
  if (t.order > kMaxTableOrder) {
    throw SizeError("table of order " + std::to_string(t.order) +
                        " exceeds the supported maximum " + std::to_string(kMaxTableOrder),
                    static_cast<std::uint64_t>(t.order));
  }

  const std::size_t expected = static_cast<std::size_t>(t.order) * t.order;
  const std::size_t given = tokens.size() - 3;
  if (given != expected) {
    throw ParseError("expected " + std::to_string(expected) + " table entries, got " +
                     std::to_string(given));
  }
  t.table.resize(expected);
  for (std::size_t i = 0; i < expected; ++i)
    t.table[i] = parse_int(tokens[i + 3].text, tokens[i + 3].line_no);
  return t;
}

MonoidTable parse_table_text(const std::string& text) {
  std::istringstream in(text);
  return parse_table(in);
}

MonoidTable load_table(const std::string& path) {
  auto in = open_file(path);
  try {
    return parse_table(in);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::string serialize_table(const MonoidTable& t) {
  std::ostringstream out;
  out << "m " << t.order << ' ' << t.identity << '\n';
  for (int i = 0; i < t.order; ++i) {
    for (int j = 0; j < t.order; ++j) {
      if (j > 0) out << ' ';
      out << t.at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sandpile
