#pragma once

// Deterministic text output (12 significant digits, no timestamps), config
// loading, and JSON forms of the domain types.

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "squeeze/dicke.hpp"
#include "squeeze/params.hpp"
#include "squeeze/squeezing.hpp"

namespace squeeze::io {

using nlohmann::json;

// "%.12g", with −0 printed as 0.
std::string format_number(double v);
// v rounded to 12 significant digits, so json::dump prints the short form.
double rounded(double v);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& file) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& file, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

json to_json(const EffectiveParams& e);
json to_json(const RegimeFlags& f);
json to_json(const PhysicalParams& p);
json to_json(const SqueezingResult& r);

json state_to_json(const dicke::DickeState& s);
dicke::DickeState state_from_json(const json& j);

// Fields may be numbers or quantity strings ("2pi*100kHz"); unknown keys are
// rejected. Every problem is reported, field by field.
PhysicalParams params_from_json(const json& j);
PhysicalParams load_params(const std::filesystem::path& file);
json parse_json_text(const std::string& text, const std::string& origin);

std::string dump(const json& j);

} // namespace squeeze::io
