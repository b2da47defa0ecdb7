#include "model_file.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "trieclt/error.hpp"

namespace trieclt::cli {

ProbModel parse_model(const std::string& json_text, const std::string& fallback_label) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array())
    fail(Errc::parse_error, "model file needs a \"probs\" array");
  std::optional<double> span;
  if (j.contains("declared_span")) span = j["declared_span"].get<double>();
  std::string label = j.value("label", fallback_label);
  const auto& probs = j["probs"];
  bool rational = !probs.empty() && probs[0].is_object();
  try {
    if (rational) {
      std::vector<Rational> rs;
      for (const auto& p : probs) {
        if (!p.is_object()) fail(Errc::parse_error, "probabilities must all be rationals or all decimals");
        rs.push_back({p.at("num").get<std::int64_t>(), p.at("den").get<std::int64_t>()});
      }
      return ProbModel::from_rationals(std::move(rs), span, label);
    }
    std::vector<double> ps;
    for (const auto& p : probs) ps.push_back(p.get<double>());
    return ProbModel(std::move(ps), span, label);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("bad model entry: ") + e.what());
  }
}

namespace {

// A bare name such as "p37" is looked up in TRIECLT_MODEL_DIR and then in the shipped models/.
std::string resolve_path(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("TRIECLT_MODEL_DIR")) dirs.emplace_back(env);
#ifdef TRIECLT_DEFAULT_MODEL_DIR
  dirs.emplace_back(TRIECLT_DEFAULT_MODEL_DIR);
#endif
  const fs::path file = fs::path(name).has_extension() ? fs::path(name) : fs::path(name + ".json");
  for (const auto& d : dirs)
    if (fs::exists(d / file)) return (d / file).string();
  return name;
}

}  // namespace

ProbModel load_model(const std::string& path_or_name_in) {
  namespace fs = std::filesystem;
  const std::string path_or_name = resolve_path(path_or_name_in);
  if (!fs::exists(path_or_name)) {
    static const std::regex sym("sym([0-9]+)(\\.json)?");
    std::smatch m;
    const std::string stem = fs::path(path_or_name).filename().string();
    if (std::regex_match(stem, m, sym)) return ProbModel::symmetric(std::stoul(m[1]));
    fail(Errc::invalid_argument, "model file not found: " + path_or_name);
  }
  std::ifstream in(path_or_name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), fs::path(path_or_name).stem().string());
}

}  // namespace trieclt::cli
