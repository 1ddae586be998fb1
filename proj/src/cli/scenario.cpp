#include "relmech/cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "relmech/expr/evaluate.hpp"
#include "relmech/frames/frames.hpp"

namespace relmech::cli {

ScenarioError::ScenarioError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::transform: return "transform";
    case TaskKind::coriolis: return "coriolis";
    case TaskKind::check_free: return "check-free";
    case TaskKind::integrate: return "integrate";
    case TaskKind::geodesic: return "geodesic";
    case TaskKind::adapted_check: return "adapted-check";
    case TaskKind::report: return "report";
  }
  return "?";
}

namespace {

struct Section {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Strips an unquoted trailing comment.
std::string strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '#' || s[i] == ';') return std::string(s.substr(0, i));
  return std::string(s);
}

std::string parse_value(std::string_view raw, std::size_t line) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] != '"') {
    const std::string bare = trim(strip_comment(s));
    if (bare.empty()) throw ScenarioError(line, "missing value");
    return bare;
  }
  std::string out;
  std::size_t i = 1;
  for (; i < s.size() && s[i] != '"'; ++i) {
    if (s[i] == '\\') {
      if (++i == s.size()) break;
      if (s[i] != '"' && s[i] != '\\') throw ScenarioError(line, "unknown escape in string");
    }
    out += s[i];
  }
  if (i >= s.size()) throw ScenarioError(line, "unterminated string");
  if (!trim(strip_comment(s.substr(i + 1))).empty()) throw ScenarioError(line, "text after closing quote");
  return out;
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s[0] == '[') {
      const auto close = s.find(']');
      if (close == std::string::npos) throw ScenarioError(line, "unterminated section header");
      if (!trim(strip_comment(std::string_view(s).substr(close + 1))).empty())
        throw ScenarioError(line, "text after section header");
      std::istringstream words(s.substr(1, close - 1));
      Section sec;
      sec.line = line;
      words >> sec.kind >> sec.name;
      std::string extra;
      if (words >> extra) throw ScenarioError(line, "section header has too many words");
      if (sec.kind.empty()) throw ScenarioError(line, "empty section header");
      sections.push_back(std::move(sec));
      continue;
    }
    if (sections.empty()) throw ScenarioError(line, "entry outside any section");
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ScenarioError(line, "expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (!valid_name(key)) throw ScenarioError(line, "invalid key '" + key + "'");
    auto& sec = sections.back();
    if (sec.entries.count(key)) throw ScenarioError(line, "duplicate key '" + key + "'");
    sec.entries[key] = Entry{parse_value(std::string_view(s).substr(eq + 1), line), line};
    sec.order.push_back(key);
  }
  return sections;
}

template <class Map>
const Entry& required(const Map& entries, const std::string& key, std::size_t line, const std::string& where) {
  const auto it = entries.find(key);
  if (it == entries.end()) throw ScenarioError(line, where + ": missing '" + key + "'");
  return it->second;
}

void allow_only(const Section& sec, const std::set<std::string>& keys) {
  for (const auto& [k, e] : sec.entries)
    if (!keys.count(k)) throw ScenarioError(e.line, "[" + sec.kind + "]: unknown key '" + k + "'");
}

std::uint64_t parse_unsigned(const Entry& e) {
  std::uint64_t x = 0;
  const auto* end = e.value.data() + e.value.size();
  const auto r = std::from_chars(e.value.data(), end, x);
  if (r.ec != std::errc{} || r.ptr != end) throw ScenarioError(e.line, "expected a non-negative integer, got '" + e.value + "'");
  return x;
}

expr::Expression parse_at(const Entry& e, std::size_t m, const expr::ConstantTable& c) {
  try {
    return expr::parse_expression(e.value, m, c);
  } catch (const expr::ParseError& err) {
    throw ScenarioError(e.line, "in \"" + e.value + "\": column " + std::to_string(err.column()) + ": " + err.detail());
  }
}

std::vector<expr::Expression> components(const Section& sec, const std::string& prefix, std::size_t m,
                                         const expr::ConstantTable& c, Definition& def) {
  std::vector<expr::Expression> out;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::string key = prefix + std::to_string(i);
    out.push_back(parse_at(required(sec.entries, key, sec.line, "[" + sec.kind + " " + sec.name + "]"), m, c));
    def.fields.emplace_back(key, out.back().to_string());
  }
  return out;
}

std::set<std::string> indexed(const std::string& prefix, std::size_t m) {
  std::set<std::string> keys;
  for (std::size_t i = 1; i <= m; ++i) keys.insert(prefix + std::to_string(i));
  return keys;
}

struct TaskSchema {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, std::pair<TaskKind, TaskSchema>>& task_schemas() {
  static const std::map<std::string, std::pair<TaskKind, TaskSchema>> s{
      {"transform", {TaskKind::transform, {{"chart"}, {"equation", "frame", "reference", "t", "q", "v", "tol"}}}},
      {"coriolis", {TaskKind::coriolis, {{"equation", "frame", "t", "q", "v"}, {"expect", "tol"}}}},
      {"check-free", {TaskKind::check_free, {{}, {"equation", "frame", "chart", "expect", "tol"}}}},
      {"integrate",
       {TaskKind::integrate, {{"equation", "q", "v", "t_end", "step"}, {"t0", "chart", "expect_q", "expect_v", "tol"}}}},
      {"geodesic", {TaskKind::geodesic, {{"equation", "frame"}, {"expect", "tol"}}}},
      {"adapted-check", {TaskKind::adapted_check, {{"frame", "chart"}, {"expect", "tol"}}}},
      {"report", {TaskKind::report, {{"equation", "t", "q", "v"}, {"frame"}}}},
  };
  return s;
}

void expect_one_of(const TaskSpec& task, const std::set<std::string>& allowed) {
  if (!task.has("expect")) return;
  const auto& e = task.at("expect");
  if (!allowed.count(e.value)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ScenarioError(e.line, "task '" + task.name + "': expect must be one of " + list);
  }
}

void validate_task(const Scenario& sc, const TaskSpec& task) {
  const std::size_t m = sc.dimension;
  auto ref = [&](const char* key, const auto& table, const char* what) {
    if (!task.has(key)) return;
    const auto& e = task.at(key);
    if (!table.count(e.value))
      throw ScenarioError(e.line, "task '" + task.name + "': undefined " + what + " '" + e.value + "'");
  };
  ref("equation", sc.equations, "equation");
  ref("frame", sc.frames, "frame");
  ref("chart", sc.charts, "chart");

  // Numeric options must evaluate now so that `check` catches them.
  for (const char* key : {"t", "t0", "t_end", "step", "tol"})
    if (task.has(key)) (void)sc.number(task.at(key));
  for (const char* key : {"q", "v", "expect_q", "expect_v"})
    if (task.has(key)) (void)sc.numbers(task.at(key), m);
  if (task.has("tol") && !(sc.number(task.at("tol")) > 0))
    throw ScenarioError(task.at("tol").line, "task '" + task.name + "': tol must be positive");

  const auto fail = [&](const std::string& msg) { throw ScenarioError(task.line, "task '" + task.name + "': " + msg); };
  switch (task.kind) {
    case TaskKind::transform: {
      if (task.has("equation") == task.has("frame")) fail("give exactly one of equation, frame");
      if (task.has("reference")) {
        const auto& e = task.at("reference");
        const bool known = task.has("equation") ? sc.equations.count(e.value) != 0 : sc.frames.count(e.value) != 0;
        if (!known) throw ScenarioError(e.line, "task '" + task.name + "': undefined reference '" + e.value + "'");
      }
      const int point = int(task.has("t")) + int(task.has("q")) + int(task.has("v"));
      if (task.has("frame") && task.has("v")) fail("frames take no velocity");
      const int need = task.has("frame") ? 2 : 3;
      if (point != 0 && point != need) fail("point needs all of t, q" + std::string(need == 3 ? ", v" : ""));
      break;
    }
    case TaskKind::coriolis:
      if (task.has("expect")) (void)sc.numbers(task.at("expect"), m);
      break;
    case TaskKind::check_free:
      if (task.has("equation") == (task.has("frame") || task.has("chart")))
        fail("give either equation, or frame and chart");
      if (task.has("frame") != task.has("chart")) fail("frame and chart go together");
      expect_one_of(task, {"passes", "fails"});
      break;
    case TaskKind::integrate: {
      const double t0 = task.has("t0") ? sc.number(task.at("t0")) : 0.0;
      if (!(sc.number(task.at("step")) > 0)) throw ScenarioError(task.at("step").line, "task '" + task.name + "': step must be positive");
      if (!(sc.number(task.at("t_end")) > t0)) throw ScenarioError(task.at("t_end").line, "task '" + task.name + "': t_end must exceed t0");
      break;
    }
    case TaskKind::geodesic:
      expect_one_of(task, {"geodesic", "not-geodesic"});
      break;
    case TaskKind::adapted_check:
      expect_one_of(task, {"adapted", "not-adapted"});
      break;
    case TaskKind::report:
      break;
  }
}

Interval interval(const Scenario& sc, const Entry& e) {
  const auto r = sc.numbers(e, 2);
  if (!(r[0] <= r[1])) throw ScenarioError(e.line, "interval must satisfy lo <= hi");
  return {r[0], r[1]};
}

}  // namespace

double Scenario::number(const Entry& e) const {
  const auto ex = parse_at(e, std::max<std::size_t>(dimension, 1), constants);
  if (!ex.is_constant()) throw ScenarioError(e.line, "'" + e.value + "' must not depend on t, q or v");
  try {
    return expr::evaluate(ex, JetPoint1{0.0, std::vector<double>(ex.dimension()), std::vector<double>(ex.dimension())});
  } catch (const std::exception& err) {
    throw ScenarioError(e.line, "'" + e.value + "': " + err.what());
  }
}

std::vector<double> Scenario::numbers(const Entry& e, std::size_t size) const {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = e.value.find(',', start);
    const std::string part = trim(std::string_view(e.value).substr(start, comma - start));
    if (part.empty()) throw ScenarioError(e.line, "empty entry in list '" + e.value + "'");
    out.push_back(number(Entry{part, e.line}));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (size && out.size() != size)
    throw ScenarioError(e.line, "expected " + std::to_string(size) + " values, got " + std::to_string(out.size()));
  return out;
}

Scenario parse_scenario(std::string_view text) {
  const auto sections = split_sections(text);
  Scenario sc;

  const Section* header = nullptr;
  for (const auto& s : sections)
    if (s.kind == "scenario") {
      if (header) throw ScenarioError(s.line, "duplicate [scenario] section");
      header = &s;
    }
  if (!header) throw ScenarioError(0, "missing [scenario] section");
  allow_only(*header, {"name", "dimension", "seed"});
  sc.name = required(header->entries, "name", header->line, "[scenario]").value;
  const auto& dim = required(header->entries, "dimension", header->line, "[scenario]");
  sc.dimension = parse_unsigned(dim);
  if (sc.dimension == 0) throw ScenarioError(dim.line, "dimension must be at least 1");
  if (header->entries.count("seed")) sc.seed = parse_unsigned(header->entries.at("seed"));
  const std::size_t m = sc.dimension;

  // Constants first so definitions anywhere in the file may use them.
  for (const auto& s : sections) {
    if (s.kind != "constants") continue;
    if (!s.name.empty()) throw ScenarioError(s.line, "[constants] takes no name");
    for (const auto& key : s.order) {
      const auto& e = s.entries.at(key);
      if (sc.constants.count(key)) throw ScenarioError(e.line, "constant '" + key + "' defined twice");
      const double x = sc.number(e);
      sc.constants.emplace(key, x);
    }
  }

  std::set<std::string> task_names;
  bool have_box = false;
  for (const auto& s : sections) {
    const std::string where = "[" + s.kind + (s.name.empty() ? "" : " " + s.name) + "]";
    const bool named = s.kind == "equation" || s.kind == "frame" || s.kind == "chart" || s.kind == "task";
    if (named && !valid_name(s.name)) throw ScenarioError(s.line, where + ": expected a name of letters, digits, '_' or '-'");
    if (!named && s.kind != "scenario" && s.kind != "constants" && s.kind != "sample_box")
      throw ScenarioError(s.line, "unknown section kind '" + s.kind + "'");
    if (named && sc.definitions.count(s.kind + " " + s.name)) throw ScenarioError(s.line, where + " defined twice");

    Definition def;
    def.line = s.line;
    if (s.kind == "equation") {
      allow_only(s, indexed("xi", m));
      sc.equations.emplace(s.name, DynamicEquation::from_expressions(components(s, "xi", m, sc.constants, def)));
    } else if (s.kind == "frame") {
      allow_only(s, indexed("gamma", m));
      auto exprs = components(s, "gamma", m, sc.constants, def);
      for (std::size_t i = 0; i < m; ++i)
        if (exprs[i].depends_on(expr::VarKind::velocity))
          throw ScenarioError(s.entries.at("gamma" + std::to_string(i + 1)).line, where + ": a frame may not depend on velocity");
      sc.frames.emplace(s.name, ReferenceFrame::from_expressions(std::move(exprs)));
    } else if (s.kind == "chart") {
      const std::string type = s.entries.count("type") ? s.entries.at("type").value : "expressions";
      try {
        if (type == "identity") {
          allow_only(s, {"type"});
          sc.charts.emplace(s.name, CoordinateChange::identity(m));
        } else if (type == "galilei") {
          allow_only(s, {"type", "k", "u", "a"});
          const auto& ke = required(s.entries, "k", s.line, where);
          std::vector<std::vector<double>> k;
          std::size_t start = 0;
          while (true) {
            const auto semi = ke.value.find(';', start);
            k.push_back(sc.numbers(Entry{ke.value.substr(start, semi - start), ke.line}, m));
            if (semi == std::string::npos) break;
            start = semi + 1;
          }
          if (k.size() != m) throw ScenarioError(ke.line, where + ": k needs " + std::to_string(m) + " rows separated by ';'");
          const GalileiTransform g{k, sc.numbers(required(s.entries, "u", s.line, where), m),
                                   sc.numbers(required(s.entries, "a", s.line, where), m)};
          def.fields.emplace_back("k", ke.value);
          def.fields.emplace_back("u", s.entries.at("u").value);
          def.fields.emplace_back("a", s.entries.at("a").value);
          sc.charts.emplace(s.name, galilei_chart(g));
        } else if (type == "expressions") {
          auto keys = indexed("forward", m);
          keys.merge(indexed("inverse", m));
          keys.insert({"type", "time_offset"});
          allow_only(s, keys);
          auto fwd = components(s, "forward", m, sc.constants, def);
          auto inv = components(s, "inverse", m, sc.constants, def);
          const double offset = s.entries.count("time_offset") ? sc.number(s.entries.at("time_offset")) : 0.0;
          if (offset != 0.0) def.fields.emplace_back("time_offset", expr::format_number(offset));
          sc.charts.emplace(s.name, CoordinateChange::create(std::move(fwd), std::move(inv), offset));
        } else {
          throw ScenarioError(s.entries.at("type").line, where + ": unknown chart type '" + type + "'");
        }
      } catch (const ChartError& err) {
        throw ScenarioError(s.line, where + ": " + err.what());
      }
      def.fields.insert(def.fields.begin(), {"type", type});
    } else if (s.kind == "sample_box") {
      if (have_box) throw ScenarioError(s.line, "duplicate [sample_box] section");
      have_box = true;
      allow_only(s, {"t", "q", "v", "count"});
      if (s.entries.count("t")) sc.box.t = interval(sc, s.entries.at("t"));
      if (s.entries.count("q")) sc.box.q = interval(sc, s.entries.at("q"));
      if (s.entries.count("v")) sc.box.v = interval(sc, s.entries.at("v"));
      if (s.entries.count("count")) sc.box.count = parse_unsigned(s.entries.at("count"));
      if (sc.box.count == 0) throw ScenarioError(s.line, "[sample_box]: count must be positive");
    } else if (s.kind == "task") {
      if (task_names.count(s.name)) throw ScenarioError(s.line, where + " defined twice");
      task_names.insert(s.name);
      const auto& kind = required(s.entries, "kind", s.line, where);
      const auto it = task_schemas().find(kind.value);
      if (it == task_schemas().end()) throw ScenarioError(kind.line, where + ": unknown task kind '" + kind.value + "'");
      const auto& schema = it->second.second;
      TaskSpec task{s.name, it->second.first, s.line, {}};
      for (const auto& [k, e] : s.entries) {
        if (k == "kind") continue;
        if (!schema.required.count(k) && !schema.optional.count(k))
          throw ScenarioError(e.line, where + ": option '" + k + "' does not apply to " + kind.value);
        task.options.emplace(k, e);
      }
      for (const auto& k : schema.required)
        if (!task.has(k)) throw ScenarioError(s.line, where + ": missing '" + k + "'");
      sc.tasks.push_back(std::move(task));
    }
    if (named && s.kind != "task") sc.definitions.emplace(s.kind + " " + s.name, std::move(def));
  }
  sc.box.seed = sc.seed;

  for (const auto& task : sc.tasks) validate_task(sc, task);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(0, "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace relmech::cli
