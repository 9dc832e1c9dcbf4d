#include "psdbg/server/protocol.hpp"

#include <json.hpp>

#include "psdbg/calculus/rules.hpp"
#include "psdbg/matcher/matcher.hpp"

namespace psdbg::server {

using nlohmann::json;
using debugger::DebugSession;
using interp::ProofScriptState;
using calculus::NodeId;

struct ProtocolServer::Slot {
  std::mutex mutex;
  std::string id;
  std::unique_ptr<DebugSession> session;
  std::set<ConnectionId> subscribers;
};

struct ProtocolServer::Connection {
  std::mutex mutex;
  Sink sink;
};

namespace {

json spanJson(const kps::SourceSpan& s) {
  return {{"beginLine", s.beginLine}, {"beginColumn", s.beginColumn}, {"endLine", s.endLine}, {"endColumn", s.endColumn}};
}

json errorJson(const Error& e) {
  json j{{"code", std::string(toString(e.code()))}, {"message", e.message()}};
  if (e.location()) {
    j["line"] = e.location()->line;
    j["column"] = e.location()->column;
  }
  return j;
}

std::optional<std::string> branchLabel(const calculus::ProofTree& tree, NodeId id) {
  for (std::optional<NodeId> n = id; n; n = tree.node(*n).parent) {
    if (tree.node(*n).branchLabel) return tree.node(*n).branchLabel;
  }
  return std::nullopt;
}

json nullable(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json goalSummaries(const ProofScriptState& s) {
  json out = json::array();
  std::size_t i = 0;
  for (const interp::Goal& g : s.goals()) {
    out.push_back({{"index", i++},
                   {"node", g.node},
                   {"sequent", logic::toString(s.tree.node(g.node).sequent)},
                   {"branchLabel", nullable(branchLabel(s.tree, g.node))},
                   {"selected", s.selected == g.node}});
  }
  return out;
}

json pcJson(const ProofScriptState& s) {
  const kps::Statement* st = s.currentStatement();
  if (!st) return nullptr;
  return {{"stmtId", kps::toString(s.pc.stmt)},
          {"phase", s.pc.phase == interp::Phase::Enter ? "enter" : "exit"},
          {"span", spanJson(st->span)}};
}

json summary(const std::string& id, const DebugSession& d) {
  json j{{"sessionId", id},
         {"mode", debugger::toString(d.mode())},
         {"pc", pcJson(d.state())},
         {"goals", goalSummaries(d.state())},
         {"traceLength", d.trace().size()},
         {"redoLength", d.redo().size()},
         {"digest", d.digest()},
         {"closed", d.state().tree.isClosed()}};
  j["lastError"] = d.lastError() ? errorJson(*d.lastError()) : json(nullptr);
  j["warning"] = nullable(d.lastWarning());
  j["hitBreakpoint"] = d.hitBreakpoint() ? json(*d.hitBreakpoint()) : json(nullptr);
  j["strategyRoot"] = d.lastStrategyRoot() ? json(*d.lastStrategyRoot()) : json(nullptr);
  return j;
}

json breakpointsJson(const DebugSession& d) {
  json out = json::array();
  for (const debugger::Breakpoint& b : d.breakpoints()) {
    out.push_back({{"id", b.id}, {"line", b.line}, {"condition", nullable(b.conditionText)}, {"enabled", b.enabled}});
  }
  return out;
}

json formulaJson(const logic::Formula& f, logic::Side side, std::size_t index) {
  std::vector<logic::PrintedSpan> spans;
  std::string text = logic::toString(f, spans);
  json positions = json::array();
  for (const logic::PrintedSpan& sp : spans) {
    positions.push_back(
        {{"position", logic::toString(logic::FormulaPosition{side, index, sp.path})}, {"begin", sp.begin}, {"end", sp.end}});
  }
  return {{"text", text}, {"position", logic::toString(logic::FormulaPosition{side, index, {}})}, {"spans", positions}};
}

json envJson(const interp::Env& env) {
  json out = json::object();
  for (const auto& [name, v] : env) out[name] = {{"type", interp::typeName(v)}, {"value", interp::toString(v)}};
  return out;
}

// --- parameter access ---------------------------------------------------------

const json& need(const json& params, const char* name) {
  if (!params.is_object() || !params.contains(name)) {
    throw Error(ErrorCode::InvalidRequest, std::string("missing parameter '") + name + "'");
  }
  return params.at(name);
}

std::string needString(const json& params, const char* name) {
  const json& v = need(params, name);
  if (!v.is_string()) throw Error(ErrorCode::InvalidRequest, std::string("parameter '") + name + "' must be a string");
  return v.get<std::string>();
}

long long needInt(const json& params, const char* name) {
  const json& v = need(params, name);
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidRequest, std::string("parameter '") + name + "' must be an integer");
  return v.get<long long>();
}

std::optional<std::string> optString(const json& params, const char* name) {
  if (!params.is_object() || !params.contains(name) || params.at(name).is_null()) return std::nullopt;
  return needString(params, name);
}

NodeId goalNode(const json& params) {
  long long g = needInt(params, "goal");
  if (g < 0) throw Error(ErrorCode::InvalidRequest, "goal must be a node id");
  return static_cast<NodeId>(g);
}

const interp::Goal goalAt(const ProofScriptState& s, long long index) {
  auto goals = s.goals();
  if (index < 0 || static_cast<std::size_t>(index) >= goals.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "goal index " + std::to_string(index) + " out of range [0, " + std::to_string(goals.size()) + ")");
  }
  return goals[static_cast<std::size_t>(index)];
}

// --- session methods ------------------------------------------------------------

struct Outcome {
  json result;
  bool changed = false;
};

using Method = Outcome (*)(DebugSession&, const json&);

Outcome step(DebugSession& d, const json& p) {
  std::string kind = needString(p, "kind");
  if (kind == "over") d.stepOver();
  else if (kind == "into") d.stepInto();
  else if (kind == "backOver") d.stepBack();
  else if (kind == "backInto") d.stepIntoReverse();
  else throw Error(ErrorCode::InvalidRequest, "step kind must be over, into, backOver or backInto");
  return {json::object(), true};
}

Outcome cont(DebugSession& d, const json&) {
  d.continueRun();
  return {json::object(), true};
}

Outcome bpSet(DebugSession& d, const json& p) {
  int id = d.setBreakpoint(static_cast<int>(needInt(p, "line")), optString(p, "condition"));
  return {{{"id", id}, {"breakpoints", breakpointsJson(d)}}, true};
}

Outcome bpRemove(DebugSession& d, const json& p) {
  d.removeBreakpoint(static_cast<int>(needInt(p, "id")));
  return {{{"breakpoints", breakpointsJson(d)}}, true};
}

Outcome bpEnable(DebugSession& d, const json& p) {
  const json& e = need(p, "enabled");
  if (!e.is_boolean()) throw Error(ErrorCode::InvalidRequest, "parameter 'enabled' must be a boolean");
  d.setBreakpointEnabled(static_cast<int>(needInt(p, "id")), e.get<bool>());
  return {{{"breakpoints", breakpointsJson(d)}}, true};
}

Outcome bpList(DebugSession& d, const json&) { return {{{"breakpoints", breakpointsJson(d)}}}; }

Outcome goals(DebugSession& d, const json&) { return {{{"goals", goalSummaries(d.state())}}}; }

Outcome goal(DebugSession& d, const json& p) {
  const ProofScriptState& s = d.state();
  interp::Goal g = goalAt(s, needInt(p, "index"));
  const logic::Sequent& seq = s.tree.node(g.node).sequent;
  json ante = json::array(), succ = json::array();
  for (std::size_t i = 0; i < seq.antecedent.size(); ++i) ante.push_back(formulaJson(seq.antecedent[i], logic::Side::Antecedent, i));
  for (std::size_t i = 0; i < seq.succedent.size(); ++i) succ.push_back(formulaJson(seq.succedent[i], logic::Side::Succedent, i));
  return {{{"index", needInt(p, "index")},
           {"node", g.node},
           {"sequent", logic::toString(seq)},
           {"antecedent", ante},
           {"succedent", succ},
           {"branchLabel", nullable(branchLabel(s.tree, g.node))},
           {"selected", s.selected == g.node},
           {"env", envJson(g.env)}}};
}

Outcome prooftree(DebugSession& d, const json&) {
  const calculus::ProofTree& t = d.state().tree;
  json nodes = json::array();
  for (NodeId i = 0; i < t.size(); ++i) {
    const calculus::ProofNode& n = t.node(i);
    json j{{"id", i},
           {"parent", n.parent ? json(*n.parent) : json(nullptr)},
           {"children", n.children},
           {"sequent", logic::toString(n.sequent)},
           {"branchLabel", nullable(n.branchLabel)},
           {"closed", n.closed},
           {"openGoal", n.isOpenLeaf()}};
    j["rule"] = n.ruleApplied ? json(n.ruleApplied->ruleName) : json(nullptr);
    j["position"] = n.ruleApplied && n.ruleApplied->position ? json(logic::toString(*n.ruleApplied->position)) : json(nullptr);
    nodes.push_back(std::move(j));
  }
  return {{{"root", 0}, {"nodes", nodes}}};
}

Outcome script(DebugSession& d, const json&) {
  return {{{"source", d.scriptText()},
           {"entry", d.state().entry},
           {"pc", pcJson(d.state())},
           {"finished", d.state().finished},
           {"mode", debugger::toString(d.mode())},
           {"breakpoints", breakpointsJson(d)}}};
}

Outcome trace(DebugSession& d, const json&) {
  return {{{"entries", json::parse(debugger::exportTrace(d.trace()))}, {"length", d.trace().size()}}};
}

Outcome rules(DebugSession& d, const json& p) {
  std::optional<logic::FormulaPosition> pos;
  if (auto text = optString(p, "position")) pos = logic::parsePosition(*text);
  json out = json::array();
  for (const calculus::RuleInfo& r : calculus::applicableRules(d.state().tree, goalNode(p), pos)) {
    out.push_back({{"name", r.name}, {"requiredArguments", r.requiredArguments}});
  }
  return {{{"rules", out}}};
}

Outcome iStart(DebugSession& d, const json& p) {
  d.startInteractive(goalNode(p));
  return {json::object(), true};
}

Outcome iApply(DebugSession& d, const json& p) {
  NodeId g = goalNode(p);
  if (d.mode() != debugger::Mode::Interactive) d.startInteractive(g);
  if (auto command = optString(p, "command")) {
    d.applyInteractive(g, *command);
  } else {
    std::optional<logic::FormulaPosition> pos;
    if (auto text = optString(p, "position")) pos = logic::parsePosition(*text);
    std::vector<std::pair<std::string, std::string>> args;
    if (p.contains("args")) {
      if (!p["args"].is_object()) throw Error(ErrorCode::InvalidRequest, "parameter 'args' must be an object");
      for (const auto& [k, v] : p["args"].items()) {
        if (!v.is_string()) throw Error(ErrorCode::InvalidRequest, "argument '" + k + "' must be expression text");
        args.emplace_back(k, v.get<std::string>());
      }
    }
    d.applyInteractive(g, needString(p, "rule"), pos, args);
  }
  return {{{"recorded", d.recordedInteractive().size()}}, true};
}

Outcome iFinish(DebugSession& d, const json&) {
  std::string appended = d.finishInteractive();
  return {{{"appended", appended}, {"source", d.scriptText()}, {"usedFallback", d.usedFallbackPattern()}}, true};
}

Outcome iCancel(DebugSession& d, const json&) {
  d.cancelInteractive();
  return {json::object(), true};
}

Outcome matchEval(DebugSession& d, const json& p) {
  const ProofScriptState& s = d.state();
  interp::Goal g = goalAt(s, needInt(p, "goalIndex"));
  matcher::SequentPattern pattern = matcher::parsePattern(needString(p, "pattern"), &s.tree.signature());
  const logic::Sequent& seq = s.tree.node(g.node).sequent;
  matcher::MatchResult r = matcher::matchSequent(pattern, seq);
  json matches = json::array();
  for (const matcher::Match& m : r.matches) {
    json bindings = json::object();
    for (const auto& [name, v] : m.binding) bindings[name] = matcher::toString(v);
    json assignment = json::array();
    for (std::size_t k = 0; k < m.assignment.size(); ++k) {
      assignment.push_back({{"pattern", k},
                            {"position", logic::toString(m.assignment[k])},
                            {"formula", logic::toString(logic::topFormula(seq, m.assignment[k]))}});
    }
    matches.push_back({{"bindings", bindings}, {"assignment", assignment}});
  }
  return {{{"node", g.node}, {"matches", matches}, {"count", r.matches.size()}}};
}

const std::map<std::string, Method, std::less<>>& sessionMethods() {
  static const std::map<std::string, Method, std::less<>> m{
      {"session.step", step},
      {"session.continue", cont},
      {"session.breakpoints.set", bpSet},
      {"session.breakpoints.remove", bpRemove},
      {"session.breakpoints.enable", bpEnable},
      {"session.breakpoints.list", bpList},
      {"state.goals", goals},
      {"state.goal", goal},
      {"state.prooftree", prooftree},
      {"state.script", script},
      {"state.trace", trace},
      {"interactive.rules", rules},
      {"interactive.start", iStart},
      {"interactive.apply", iApply},
      {"interactive.finish", iFinish},
      {"interactive.cancel", iCancel},
      {"match.eval", matchEval},
  };
  return m;
}

debugger::SessionOptions sessionOptions(const json& p) {
  debugger::SessionOptions o;
  if (auto e = optString(p, "entry")) o.entry = *e;
  if (p.contains("maxSteps")) o.interpreter.maxSteps = needInt(p, "maxSteps");
  if (p.contains("instLimit")) o.interpreter.instLimit = needInt(p, "instLimit");
  return o;
}

}  // namespace

ProtocolServer::ProtocolServer() = default;
ProtocolServer::~ProtocolServer() = default;

ConnectionId ProtocolServer::connect(Sink sink) {
  std::lock_guard lock(mutex_);
  auto c = std::make_shared<Connection>();
  c->sink = std::move(sink);
  connections_[nextConnection_] = c;
  return nextConnection_++;
}

void ProtocolServer::disconnect(ConnectionId id) {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(mutex_);
    connections_.erase(id);
    for (auto& [_, s] : sessions_) slots.push_back(s);
  }
  for (auto& s : slots) {
    std::lock_guard lock(s->mutex);
    s->subscribers.erase(id);
  }
}

std::shared_ptr<ProtocolServer::Slot> ProtocolServer::slot(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

std::shared_ptr<ProtocolServer::Connection> ProtocolServer::connection(ConnectionId id) {
  std::lock_guard lock(mutex_);
  auto it = connections_.find(id);
  return it == connections_.end() ? nullptr : it->second;
}

void ProtocolServer::send(ConnectionId to, const std::string& text) {
  auto c = connection(to);
  if (!c) return;
  std::lock_guard lock(c->mutex);
  c->sink(text);
}

std::string ProtocolServer::createSession(const std::string& problemText, const std::string& scriptText,
                                          const debugger::SessionOptions& options) {
  auto s = std::make_shared<Slot>();
  s->session = std::make_unique<DebugSession>(logic::parseProblem(problemText), scriptText, options);
  std::lock_guard lock(mutex_);
  s->id = "s" + std::to_string(nextSession_++);
  sessions_[s->id] = s;
  return s->id;
}

void ProtocolServer::withSession(const std::string& id, const std::function<void(DebugSession&)>& fn) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  fn(*s->session);
}

void ProtocolServer::handle(ConnectionId from, const std::string& message) {
  json id = nullptr;
  auto fail = [&](const Error& e) { send(from, json{{"id", id}, {"ok", false}, {"error", errorJson(e)}}.dump()); };
  json request;
  try {
    request = json::parse(message);
  } catch (const json::exception& e) {
    fail(Error(ErrorCode::InvalidRequest, std::string("malformed JSON: ") + e.what()));
    return;
  }
  try {
    if (!request.is_object()) throw Error(ErrorCode::InvalidRequest, "request must be an object");
    if (request.contains("id")) id = request["id"];
    if (!request.contains("method") || !request["method"].is_string()) {
      throw Error(ErrorCode::InvalidRequest, "request needs a string 'method'");
    }
    const std::string method = request["method"].get<std::string>();
    const json params = request.value("params", json::object());
    auto reply = [&](const json& result) { send(from, json{{"id", id}, {"ok", true}, {"result", result}}.dump()); };

    if (method == "server.info") {
      reply({{"protocolVersion", kProtocolVersion}});
      return;
    }
    if (method == "session.list") {
      std::vector<std::shared_ptr<Slot>> slots;
      {
        std::lock_guard lock(mutex_);
        for (auto& [_, s] : sessions_) slots.push_back(s);
      }
      json out = json::array();
      for (auto& s : slots) {
        std::lock_guard lock(s->mutex);
        out.push_back({{"sessionId", s->id}, {"mode", debugger::toString(s->session->mode())}});
      }
      reply({{"sessions", out}});
      return;
    }
    if (method == "session.create") {
      std::string sid =
          createSession(needString(params, "problemText"), needString(params, "scriptText"), sessionOptions(params));
      auto s = slot(sid);
      std::lock_guard lock(s->mutex);
      s->subscribers.insert(from);
      json result = summary(sid, *s->session);
      result["protocolVersion"] = kProtocolVersion;
      reply(result);
      return;
    }

    const std::string sid = needString(params, "sessionId");
    auto s = slot(sid);
    std::lock_guard lock(s->mutex);
    if (method == "session.attach") {
      s->subscribers.insert(from);
      json result = summary(sid, *s->session);
      result["protocolVersion"] = kProtocolVersion;
      result["breakpoints"] = breakpointsJson(*s->session);
      reply(result);
      return;
    }
    if (method == "session.close") {
      {
        std::lock_guard mapLock(mutex_);
        sessions_.erase(sid);
      }
      reply(json::object());
      return;
    }
    auto it = sessionMethods().find(method);
    if (it == sessionMethods().end()) throw Error(ErrorCode::UnknownMethod, "unknown method '" + method + "'");
    Outcome out = it->second(*s->session, params);
    if (out.changed) {
      json state = summary(sid, *s->session);
      for (auto& [k, v] : out.result.items()) state[k] = v;
      reply(state);
      const std::string event = json{{"event", "stateChanged"}, {"sessionId", sid}, {"payload", summary(sid, *s->session)}}.dump();
      s->subscribers.insert(from);
      for (ConnectionId c : s->subscribers) send(c, event);
    } else {
      reply(out.result);
    }
  } catch (const Error& e) {
    fail(e);
  } catch (const json::exception& e) {
    fail(Error(ErrorCode::InvalidRequest, e.what()));
  }
}

}  // namespace psdbg::server
