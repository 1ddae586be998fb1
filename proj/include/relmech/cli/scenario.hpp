#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relmech/bundle/coordinate_change.hpp"
#include "relmech/bundle/sample_box.hpp"
#include "relmech/connections/types.hpp"
#include "relmech/expr/expression.hpp"

namespace relmech::cli {

/// Malformed or inconsistent scenario; `line` is 1-based, 0 when unknown.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class TaskKind { transform, coriolis, check_free, integrate, geodesic, adapted_check, report };

std::string to_string(TaskKind kind);

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::report;
  std::size_t line = 0;
  std::map<std::string, Entry> options;

  bool has(const std::string& key) const { return options.count(key) != 0; }
  const Entry& at(const std::string& key) const { return options.at(key); }
};

/// Canonical text of each definition, echoed into reports.
struct Definition {
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct Scenario {
  std::string name;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  expr::ConstantTable constants;
  std::map<std::string, DynamicEquation> equations;
  std::map<std::string, ReferenceFrame> frames;
  std::map<std::string, CoordinateChange> charts;
  std::map<std::string, Definition> definitions;  // keyed "equation NAME", "frame NAME", ...
  SampleBox box;
  std::vector<TaskSpec> tasks;

  /// A constant expression (numbers, named constants, functions) evaluated.
  double number(const Entry& e) const;
  /// Comma-separated constant expressions; `size` 0 accepts any count.
  std::vector<double> numbers(const Entry& e, std::size_t size) const;
};

/// Parses and validates a scenario: every definition is built, every task
/// option is checked against its kind and every referenced name resolves.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace relmech::cli
