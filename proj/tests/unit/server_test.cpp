#include <gtest/gtest.h>

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <thread>

#include "psdbg/server/protocol.hpp"
#include "psdbg/server/web_server.hpp"
#include "support/samples.hpp"

using namespace psdbg;
using namespace psdbg::server;
using nlohmann::json;
using testkit::readSample;

namespace {

/// In-process client collecting everything the server sends.
struct Client {
  ProtocolServer& server;
  std::vector<json> inbox;
  ConnectionId id;
  int next = 1;

  explicit Client(ProtocolServer& s) : server(s) {
    id = server.connect([this](const std::string& text) { inbox.push_back(json::parse(text)); });
  }

  /// Sends a request; returns its response and collects events after it.
  json call(const std::string& method, json params = json::object(), std::vector<json>* events = nullptr) {
    inbox.clear();
    const int rid = next++;
    server.handle(id, json{{"id", rid}, {"method", method}, {"params", params}}.dump());
    EXPECT_FALSE(inbox.empty());
    EXPECT_EQ(inbox.front()["id"], rid);
    if (events) events->assign(inbox.begin() + 1, inbox.end());
    return inbox.front();
  }

  json ok(const std::string& method, json params = json::object(), std::vector<json>* events = nullptr) {
    json r = call(method, std::move(params), events);
    EXPECT_TRUE(r["ok"].get<bool>()) << r.dump();
    return r["result"];
  }

  std::string errorCode(const std::string& method, json params = json::object()) {
    json r = call(method, std::move(params));
    EXPECT_FALSE(r["ok"].get<bool>()) << r.dump();
    return r["error"]["code"];
  }
};

json createExists(Client& c) {
  return c.ok("session.create", {{"problemText", readSample("exists.sqp")}, {"scriptText", readSample("exists.kps")}});
}

TEST(Protocol, CreateStepAndEvents) {
  ProtocolServer server;
  Client c(server);
  json created = createExists(c);
  EXPECT_EQ(created["protocolVersion"], 1);
  EXPECT_EQ(created["goals"].size(), 1u);
  EXPECT_EQ(created["pc"]["span"]["beginLine"], 2);
  const std::string sid = created["sessionId"];

  Client other(server);
  other.ok("session.attach", {{"sessionId", sid}});
  other.inbox.clear();

  std::vector<json> events;
  json stepped = c.ok("session.step", {{"sessionId", sid}, {"kind", "over"}}, &events);
  EXPECT_EQ(stepped["pc"]["span"]["beginLine"], 3);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0]["event"], "stateChanged");
  EXPECT_EQ(events[0]["sessionId"], sid);
  EXPECT_EQ(events[0]["payload"]["pc"]["span"]["beginLine"], 3);
  EXPECT_EQ(events[0]["payload"]["traceLength"], 1);
  ASSERT_EQ(other.inbox.size(), 1u);
  EXPECT_EQ(other.inbox[0], events[0]);

  json back = c.ok("session.step", {{"sessionId", sid}, {"kind", "backOver"}});
  EXPECT_EQ(back["digest"], created["digest"]);
  EXPECT_EQ(c.errorCode("session.step", {{"sessionId", sid}, {"kind", "backInto"}}), "AtStartOfTrace");
  EXPECT_EQ(c.errorCode("session.step", {{"sessionId", sid}, {"kind", "sideways"}}), "InvalidRequest");

  json list = c.ok("session.list");
  ASSERT_EQ(list["sessions"].size(), 1u);
  EXPECT_EQ(list["sessions"][0]["sessionId"], sid);
}

TEST(Protocol, BreakpointsContinueAndScript) {
  ProtocolServer server;
  Client c(server);
  const std::string sid = createExists(c)["sessionId"];
  json set = c.ok("session.breakpoints.set", {{"sessionId", sid}, {"line", 5}, {"condition", "openGoals >= 1"}});
  EXPECT_EQ(set["breakpoints"].size(), 1u);
  EXPECT_EQ(c.errorCode("session.breakpoints.set", {{"sessionId", sid}, {"line", 1000}}), "InvalidLine");
  json cont = c.ok("session.continue", {{"sessionId", sid}});
  EXPECT_EQ(cont["hitBreakpoint"], set["id"]);
  EXPECT_EQ(cont["pc"]["span"]["beginLine"], 5);
  json script = c.ok("state.script", {{"sessionId", sid}});
  EXPECT_EQ(script["source"], readSample("exists.kps"));
  EXPECT_EQ(script["pc"]["stmtId"], cont["pc"]["stmtId"]);
  EXPECT_EQ(script["breakpoints"][0]["condition"], "openGoals >= 1");
  c.ok("session.breakpoints.enable", {{"sessionId", sid}, {"id", set["id"]}, {"enabled", false}});
  c.ok("session.breakpoints.remove", {{"sessionId", sid}, {"id", set["id"]}});
  EXPECT_EQ(c.ok("session.breakpoints.list", {{"sessionId", sid}})["breakpoints"].size(), 0u);
  EXPECT_EQ(c.errorCode("session.breakpoints.remove", {{"sessionId", sid}, {"id", set["id"]}}), "UnknownBreakpoint");
  json done = c.ok("session.continue", {{"sessionId", sid}});
  EXPECT_EQ(done["mode"], "finished");
  EXPECT_TRUE(done["closed"].get<bool>());
  json trace = c.ok("state.trace", {{"sessionId", sid}});
  EXPECT_EQ(trace["length"], done["traceLength"]);
  EXPECT_EQ(trace["entries"].back()["digestAfter"], done["digest"]);
}

TEST(Protocol, MatchLabBindsExistsPattern) {
  ProtocolServer server;
  Client c(server);
  const std::string sid = createExists(c)["sessionId"];
  c.ok("session.breakpoints.set", {{"sessionId", sid}, {"line", 6}});
  c.ok("session.continue", {{"sessionId", sid}});
  json goals = c.ok("state.goals", {{"sessionId", sid}})["goals"];
  ASSERT_EQ(goals.size(), 2u);
  json m = c.ok("match.eval", {{"sessionId", sid}, {"pattern", "==> (\\exists ?X (\\exists ?Y _))"}, {"goalIndex", 1}});
  ASSERT_EQ(m["count"], 1);
  EXPECT_EQ(m["matches"][0]["bindings"]["X"], "U");
  EXPECT_EQ(m["matches"][0]["bindings"]["Y"], "V");
  EXPECT_EQ(m["matches"][0]["assignment"][0]["position"], "succ:1");
  json none = c.ok("match.eval", {{"sessionId", sid}, {"pattern", "==> (\\exists ?X (\\exists ?Y _))"}, {"goalIndex", 0}});
  EXPECT_EQ(none["count"], 0);
  EXPECT_EQ(c.errorCode("match.eval", {{"sessionId", sid}, {"pattern", "==> &"}, {"goalIndex", 0}}), "SyntaxError");
  EXPECT_EQ(c.errorCode("match.eval", {{"sessionId", sid}, {"pattern", "==> _"}, {"goalIndex", 7}}), "IndexOutOfRange");
}

TEST(Protocol, GoalRenderingAndTree) {
  ProtocolServer server;
  Client c(server);
  json created = c.ok("session.create", {{"problemText", readSample("and.sqp")},
                                         {"scriptText", "script m() {\n  impRight;\n  x := 2;\n  andRight;\n}\n"}});
  const std::string sid = created["sessionId"];
  c.ok("session.continue", {{"sessionId", sid}});
  json g = c.ok("state.goal", {{"sessionId", sid}, {"index", 0}});
  EXPECT_EQ(g["sequent"], "p & q ==> q");
  EXPECT_EQ(g["antecedent"][0]["text"], "p & q");
  EXPECT_EQ(g["antecedent"][0]["position"], "ante:0");
  EXPECT_EQ(g["env"]["x"]["type"], "Int");
  EXPECT_EQ(g["env"]["x"]["value"], "2");
  bool sawLeft = false;
  for (const json& sp : g["antecedent"][0]["spans"]) {
    if (sp["position"] == "ante:0:1") {
      sawLeft = true;
      EXPECT_EQ(sp["begin"], 4);
      EXPECT_EQ(sp["end"], 5);
    }
  }
  EXPECT_TRUE(sawLeft);
  EXPECT_EQ(g["branchLabel"], "left conjunct");
  json tree = c.ok("state.prooftree", {{"sessionId", sid}});
  ASSERT_EQ(tree["nodes"].size(), 4u);
  EXPECT_EQ(tree["nodes"][0]["rule"], "impRight");
  EXPECT_EQ(tree["nodes"][1]["children"].size(), 2u);
  EXPECT_TRUE(tree["nodes"][2]["openGoal"].get<bool>());
  json rules = c.ok("interactive.rules", {{"sessionId", sid}, {"goal", g["node"]}, {"position", "ante:0"}});
  std::vector<std::string> names;
  for (const json& r : rules["rules"]) names.push_back(r["name"]);
  EXPECT_EQ(names, (std::vector<std::string>{"andLeft", "cut"}));
}

TEST(Protocol, InteractiveRoundTrip) {
  ProtocolServer server;
  Client c(server);
  const std::string problem = readSample("and.sqp");
  json created = c.ok("session.create",
                      {{"problemText", problem}, {"scriptText", "script m() {\n  impRight;\n  andLeft;\n  andRight;\n}\n"}});
  const std::string sid = created["sessionId"];
  json done = c.ok("session.continue", {{"sessionId", sid}});
  for (const json& goal : done["goals"]) {
    std::vector<json> events;
    json r = c.ok("interactive.apply", {{"sessionId", sid}, {"goal", goal["node"]}, {"rule", "closeAxiom"}}, &events);
    EXPECT_EQ(r["mode"], "interactive");
    EXPECT_EQ(events.size(), 1u);
  }
  EXPECT_EQ(c.errorCode("session.step", {{"sessionId", sid}, {"kind", "over"}}), "InvalidMode");
  json fin = c.ok("interactive.finish", {{"sessionId", sid}});
  EXPECT_EQ(fin["mode"], "finished");
  EXPECT_TRUE(fin["closed"].get<bool>());
  EXPECT_NE(fin["source"].get<std::string>().find(fin["appended"].get<std::string>()), std::string::npos);

  json again = c.ok("session.create", {{"problemText", problem}, {"scriptText", fin["source"]}});
  json rerun = c.ok("session.continue", {{"sessionId", again["sessionId"]}});
  EXPECT_EQ(rerun["digest"], fin["digest"]);
}

TEST(Protocol, Errors) {
  ProtocolServer server;
  Client c(server);
  c.inbox.clear();
  server.handle(c.id, "{not json");
  ASSERT_EQ(c.inbox.size(), 1u);
  EXPECT_TRUE(c.inbox[0]["id"].is_null());
  EXPECT_EQ(c.inbox[0]["error"]["code"], "InvalidRequest");
  EXPECT_EQ(c.errorCode("nope"), "InvalidRequest");
  EXPECT_EQ(c.errorCode("state.goals", {{"sessionId", "s99"}}), "UnknownSession");
  const std::string sid = createExists(c)["sessionId"];
  EXPECT_EQ(c.errorCode("state.nothing", {{"sessionId", sid}}), "UnknownMethod");
  EXPECT_EQ(c.errorCode("state.goal", {{"sessionId", sid}}), "InvalidRequest");
  EXPECT_EQ(c.errorCode("state.goal", {{"sessionId", sid}, {"index", "0"}}), "InvalidRequest");
  json bad = c.call("session.create", {{"problemText", readSample("and.sqp")}, {"scriptText", "script m() {\n  auto\n}"}});
  EXPECT_EQ(bad["error"]["code"], "SyntaxError");
  EXPECT_EQ(bad["error"]["line"], 3);
  EXPECT_EQ(c.errorCode("session.create", {{"problemText", "conjecture zz;"}, {"scriptText", "script m() { auto; }"}}),
            "UndeclaredSymbol");
  EXPECT_EQ(c.ok("server.info")["protocolVersion"], 1);
  c.ok("session.close", {{"sessionId", sid}});
  EXPECT_EQ(c.errorCode("state.goals", {{"sessionId", sid}}), "UnknownSession");
}

TEST(ProtocolProperties, StateCoherenceAndIdempotentReads) {
  std::mt19937 rng(23);
  const std::pair<const char*, const char*> bundled[] = {{"exists.sqp", "exists.kps"}, {"and.sqp", "and_comm.kps"}};
  for (int round = 0; round < 40; ++round) {
    auto [prob, scr] = bundled[round % 2];
    ProtocolServer server;
    Client c(server);
    const std::string sid =
        c.ok("session.create", {{"problemText", readSample(prob)}, {"scriptText", readSample(scr)}})["sessionId"];
    debugger::DebugSession direct(testkit::sampleProblem(prob), readSample(scr));
    const char* kinds[] = {"over", "into", "backOver", "backInto"};
    for (int i = 0; i < 40; ++i) {
      int op = std::uniform_int_distribution<int>(0, 5)(rng);
      json r;
      try {
        if (op < 4) {
          r = c.call("session.step", {{"sessionId", sid}, {"kind", kinds[op]}});
          switch (op) {
            case 0: direct.stepOver(); break;
            case 1: direct.stepInto(); break;
            case 2: direct.stepBack(); break;
            case 3: direct.stepIntoReverse(); break;
          }
        } else if (op == 4) {
          r = c.call("session.continue", {{"sessionId", sid}});
          direct.continueRun();
        } else {
          int line = std::uniform_int_distribution<int>(1, 12)(rng);
          r = c.call("session.breakpoints.set", {{"sessionId", sid}, {"line", line}});
          direct.setBreakpoint(line);
        }
        ASSERT_TRUE(r["ok"].get<bool>()) << r.dump();
      } catch (const Error& e) {
        ASSERT_FALSE(r["ok"].get<bool>());
        ASSERT_EQ(r["error"]["code"], std::string(toString(e.code())));
      }
      json goals = c.ok("state.goals", {{"sessionId", sid}})["goals"];
      auto expected = direct.state().goals();
      ASSERT_EQ(goals.size(), expected.size());
      for (std::size_t k = 0; k < expected.size(); ++k) ASSERT_EQ(goals[k]["node"], expected[k].node);
      server.withSession(sid, [&](debugger::DebugSession& s) { ASSERT_EQ(s.digest(), direct.digest()); });
      for (const char* read : {"state.goals", "state.prooftree", "state.script", "state.trace"}) {
        c.call(read, {{"sessionId", sid}});
        std::string first = c.inbox.front().dump();
        c.call(read, {{"sessionId", sid}});
        json second = c.inbox.front();
        second["id"] = json::parse(first)["id"];
        ASSERT_EQ(second.dump(), first) << read;
      }
    }
  }
}

// --- transport -------------------------------------------------------------------

TEST(WebSocket, AcceptKey) { EXPECT_EQ(websocketAccept("dGhlIHNhbXBsZSBub25jZQ=="), "s3pPLMBiTxaQ9kYGzzhZRbK+xOo="); }

struct Running {
  ProtocolServer protocol;
  WebServer web;
  std::thread thread;
  explicit Running(const std::string& root) : web(protocol, root) {
    web.listen("127.0.0.1", 0);
    thread = std::thread([this] { web.run(); });
  }
  ~Running() {
    web.stop();
    thread.join();
  }
};

TEST(WebSocket, RequestsAndEventsOverTheWire) {
  Running srv("");
  WebSocketClient ws;
  ws.connect("127.0.0.1", srv.web.port());
  ws.sendText(json{{"id", 1},
                   {"method", "session.create"},
                   {"params", {{"problemText", readSample("exists.sqp")}, {"scriptText", readSample("exists.kps")}}}}
                  .dump());
  auto created = ws.receive();
  ASSERT_TRUE(created);
  json c = json::parse(*created);
  EXPECT_EQ(c["id"], 1);
  EXPECT_EQ(c["result"]["protocolVersion"], 1);
  const std::string sid = c["result"]["sessionId"];
  ws.sendText(json{{"id", 2}, {"method", "session.step"}, {"params", {{"sessionId", sid}, {"kind", "over"}}}}.dump());
  auto response = ws.receive();
  auto event = ws.receive();
  ASSERT_TRUE(response && event);
  EXPECT_EQ(json::parse(*response)["id"], 2);
  EXPECT_EQ(json::parse(*event)["event"], "stateChanged");
  // A large message exercises the extended length encoding.
  std::string big(70000, ' ');
  ws.sendText(json{{"id", 3}, {"method", "server.info"}, {"params", {{"pad", big}}}}.dump());
  auto info = ws.receive();
  ASSERT_TRUE(info);
  EXPECT_EQ(json::parse(*info)["result"]["protocolVersion"], 1);
  ws.close();
}

TEST(WebServer, StaticFiles) {
  auto root = std::filesystem::temp_directory_path() / ("psdbg_web_" + std::to_string(::getpid()));
  std::filesystem::create_directories(root / "assets");
  std::ofstream(root / "index.html") << "<html>ui</html>";
  std::ofstream(root / "assets" / "app.js") << "console.log(1);";
  {
    Running srv(root.string());
    httplib::Client http("127.0.0.1", srv.web.port());
    auto index = http.Get("/");
    ASSERT_TRUE(index);
    EXPECT_EQ(index->status, 200);
    EXPECT_EQ(index->body, "<html>ui</html>");
    auto js = http.Get("/assets/app.js?v=1");
    ASSERT_TRUE(js);
    EXPECT_EQ(js->get_header_value("Content-Type"), "text/javascript");
    auto missing = http.Get("/nope.css");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    auto escape = http.Get("/../etc/passwd");
    ASSERT_TRUE(escape);
    EXPECT_EQ(escape->status, 404);
  }
  {
    Running bare("");
    httplib::Client http("127.0.0.1", bare.web.port());
    auto index = http.Get("/");
    ASSERT_TRUE(index);
    EXPECT_EQ(index->status, 200);
    EXPECT_NE(index->body.find("protocol"), std::string::npos);
  }
  std::filesystem::remove_all(root);
}

TEST(WebServer, BusyPort) {
  Running srv("");
  ProtocolServer p;
  WebServer second(p, "");
  try {
    second.listen("127.0.0.1", srv.web.port());
    FAIL() << "second listen succeeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

}  // namespace
