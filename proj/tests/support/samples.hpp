#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "psdbg/kps/ast.hpp"
#include "psdbg/logic/parser.hpp"

namespace psdbg::testkit {

inline std::string readSample(const std::string& name) {
  std::ifstream in(std::string(PSDBG_SAMPLES_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing sample " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string samplePath(const std::string& name) { return std::string(PSDBG_SAMPLES_DIR) + "/" + name; }

inline logic::Problem sampleProblem(const std::string& name) { return logic::parseProblem(readSample(name)); }

inline std::shared_ptr<const kps::ScriptFile> script(const std::string& text) {
  return std::make_shared<const kps::ScriptFile>(kps::parseScript(text));
}

inline std::shared_ptr<const kps::ScriptFile> sampleScript(const std::string& name) { return script(readSample(name)); }

}  // namespace psdbg::testkit
