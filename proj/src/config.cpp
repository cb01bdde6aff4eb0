#include "levcross/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace levcross {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

using Section = std::map<std::string, std::string>;

double need_number(const Section& sec, const std::string& key,
                   const std::string& where) {
  auto it = sec.find(key);
  if (it == sec.end()) {
    throw std::runtime_error("model config: [" + where + "] is missing '" +
                             key + "'");
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::runtime_error("model config: [" + where + "] has non-numeric '" +
                             key + " = " + it->second + "'");
  }
}

DistributionSpec build_distribution(const Section& sec,
                                    const std::string& where) {
  auto it = sec.find("kind");
  if (it == sec.end()) {
    throw std::runtime_error("model config: [" + where + "] needs 'kind'");
  }
  const std::string kind = lower(it->second);
  if (kind == "exponential") {
    return DistributionSpec::exponential(need_number(sec, "rate", where));
  }
  if (kind == "gamma") {
    return DistributionSpec::gamma(need_number(sec, "shape", where),
                                   need_number(sec, "rate", where));
  }
  if (kind == "grid") {
    auto vals_it = sec.find("values");
    if (vals_it == sec.end()) {
      throw std::runtime_error("model config: [" + where +
                               "] grid needs 'values'");
    }
    std::string vals = vals_it->second;
    std::replace(vals.begin(), vals.end(), ',', ' ');
    std::istringstream in(vals);
    std::vector<double> values;
    double x;
    while (in >> x) values.push_back(x);
    const double origin =
        sec.count("origin") ? need_number(sec, "origin", where) : 0.0;
    return DistributionSpec::grid(origin, need_number(sec, "step", where),
                                  std::move(values));
  }
  throw std::runtime_error("model config: [" + where + "] has unknown kind '" +
                           kind + "'");
}

}  // namespace

RenewalModel parse_model_config(const std::string& text) {
  std::map<std::string, Section> sections;
  Section top;
  Section* current = &top;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("model config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      }
      current = &sections[lower(trim(line.substr(1, line.size() - 2)))];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("model config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    (*current)[lower(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }

  for (const char* name : {"first_arrival", "inter_arrival", "jump"}) {
    if (!sections.count(name)) {
      throw std::runtime_error(std::string("model config: missing [") + name +
                               "] section");
    }
  }
  RenewalModel model{
      build_distribution(sections.at("first_arrival"), "first_arrival"),
      build_distribution(sections.at("inter_arrival"), "inter_arrival"),
      build_distribution(sections.at("jump"), "jump"),
      top.count("premium_rate") ? need_number(top, "premium_rate", "top level")
                                : 0.0};
  return model;
}

RenewalModel load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open model config: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_config(buf.str());
}

}  // namespace levcross
