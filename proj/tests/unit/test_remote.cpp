// Copyright 2026 The pdgen Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "httplib.h"
#include "pdgen/cache.hpp"
#include "pdgen/remote_backend.hpp"

using namespace pdgen;
using pdgen::testing::TempDir;
using pdgen::testing::record;

namespace {

// Replays queued replies; a reply starting with "!" throws a transport error
// ("!r" retryable, "!f" fatal).
class QueueTransport : public ChatTransport {
 public:
  explicit QueueTransport(std::deque<std::string> replies) : replies_(std::move(replies)) {}
  std::string post(const std::string& body) override {
    std::lock_guard<std::mutex> lock(mu_);
    bodies.push_back(Json::parse(body));
    if (replies_.empty()) throw TransportError("no more replies", false);
    std::string r = replies_.front();
    replies_.pop_front();
    if (r.rfind("!r", 0) == 0) throw TransportError("flaky", true);
    if (r.rfind("!f", 0) == 0) throw TransportError("HTTP 400", false);
    return Json{{"choices", {{{"message", {{"role", "assistant"}, {"content", r}}}}}}}.dump();
  }
  std::vector<Json> bodies;

 private:
  std::mutex mu_;
  std::deque<std::string> replies_;
};

BackendConfig remote_config(const TempDir& dir) {
  BackendConfig c;
  c.kind = "remote";
  c.endpoint = "http://127.0.0.1:1/v1";
  c.model_name = "test-model";
  c.cache_dir = dir.str("cache");
  c.max_retries = 2;
  c.retry_backoff_ms = 1;
  return c;
}

}  // namespace

TEST_CASE("sha256 and cache keys") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cache_key("a", "bc", "d") != cache_key("ab", "c", "d"));
  CHECK(cache_key("op", "m", "p") == cache_key("op", "m", "p"));
}

TEST_CASE("response cache stores, reloads and ignores corrupt entries") {
  TempDir dir;
  ResponseCache cache(dir.path() / "c");
  const std::string key = cache_key("op", "m", "prompt");
  CHECK_FALSE(cache.get(key));
  int computed = 0;
  auto compute = [&] {
    ++computed;
    return std::string("reply");
  };
  CHECK(cache.get_or_compute(key, compute) == "reply");
  CHECK(cache.get_or_compute(key, compute) == "reply");
  CHECK(computed == 1);
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 1);
  ResponseCache reopened(dir.path() / "c");
  CHECK(reopened.get(key) == "reply");

  auto file = dir.path() / "c" / key.substr(0, 2) / (key + ".json");
  REQUIRE(std::filesystem::exists(file));
  std::ofstream(file) << "{truncated";
  CHECK_FALSE(reopened.get(key));
  CHECK(reopened.get_or_compute(key, compute) == "reply");
  CHECK(computed == 2);
}

TEST_CASE("concurrent callers compute once") {
  TempDir dir;
  ResponseCache cache(dir.path());
  std::atomic<int> computed{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      cache.get_or_compute("k0000", [&] {
        ++computed;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        return std::string("v");
      });
    });
  }
  for (auto& t : threads) t.join();
  CHECK(computed == 1);
}

TEST_CASE("reply parsing helpers") {
  CHECK(reply::strip_fence("```json\n{\"a\": 1}\n```") == "{\"a\": 1}");
  CHECK(reply::strip_fence("  plain ") == "plain");
  CHECK(reply::parse_json("Sure! {\"a\": [1, 2]} hope it helps")["a"][1] == 2);
  CHECK_THROWS(reply::parse_json("no json here"));
  CHECK(reply::parse_concepts("[\"Linear Equations\", \"linear equations\", \"Fractions\"]") ==
        std::vector<Concept>{Concept("linear equations"), Concept("fractions")});
  CHECK(reply::parse_concepts("- power set\n- cartesian product") ==
        std::vector<Concept>{Concept("power set"), Concept("cartesian product")});
  CHECK(reply::parse_rating("Rating: 5") == 1.0);
  CHECK(reply::parse_rating("I'd say 3 out of 5") == 0.5);
  CHECK_THROWS(reply::parse_rating("ten"));
}

TEST_CASE("remote backend parses each operation") {
  TempDir dir;
  auto t = std::make_shared<QueueTransport>(std::deque<std::string>{
      "[\"inequality solving\"]",
      "```json\n{\"correct_step\": {\"text\": \"divide by -2, flip\", \"result\": \"x > -3\"},"
      " \"erroneous_steps\": [{\"text\": \"divide by -2\", \"result\": \"x < -3\"},"
      " {\"text\": \"subtract 2\", \"result\": \"x < 4\"}]}\n```",
      "{\"steps\": [{\"text\": \"divide\", \"result\": \"x < -3\"}], \"final_answer\": \"x < -3\"}",
      "Final answer: x < -3",
      "4",
      "Forgets to flip the inequality sign.",
      "{\"steps\": [], \"answer\": \"x < -3\"}",
  });
  RemoteBackend b(remote_config(dir), t);
  QARecord rec = record("r1", "Solve -2x < 6", "x > -3", "x < -3");
  CHECK(b.extract_concepts(rec, {}) == std::vector<Concept>{Concept("inequality solving")});
  auto p = b.propose_children(rec.stem, {}, 3, {});
  CHECK(p.correct_step.intermediate_result == "x > -3");
  CHECK(p.erroneous_steps.size() == 2);
  auto r = b.rollout(rec.stem, {}, 5, {});
  CHECK(r.final_answer == "x < -3");
  CHECK(b.conclude(rec.stem, r.steps, {}) == "x < -3");
  CHECK(b.score_plausibility(rec.stem, r, rec.correct_answer, rec.chosen_answer, {}) == 0.75);
  CHECK(b.summarize(Concept("inequality solving"), {r}, {}) == "Forgets to flip the inequality sign.");
  CHECK(b.predict_distractor(rec.stem, rec.correct_answer, {"m"}, {}).answer == "x < -3");

  // Request bodies: model, temperature by operation, system + user turns.
  REQUIRE(t->bodies.size() == 7);
  CHECK(t->bodies[0]["model"] == "test-model");
  CHECK(t->bodies[0]["temperature"] == 0.0);
  CHECK(t->bodies[1]["temperature"] == 0.7);
  CHECK(t->bodies[1]["messages"][0]["role"] == "system");
  CHECK(t->bodies[1]["messages"][1]["content"].get<std::string>().find("Solve -2x < 6") != std::string::npos);
  CHECK(b.requests_sent() == 7);

  // Same requests again: all served from the cache.
  CHECK(b.extract_concepts(rec, {}) == std::vector<Concept>{Concept("inequality solving")});
  CHECK(b.requests_sent() == 7);
}

TEST_CASE("remote backend repairs once, then gives up") {
  TempDir dir;
  auto t = std::make_shared<QueueTransport>(std::deque<std::string>{
      "not json", "{\"correct_step\": {\"text\": \"a\", \"result\": \"1\"}, \"erroneous_steps\": ["
                  "{\"text\": \"b\", \"result\": \"2\"}, {\"text\": \"c\", \"result\": \"3\"}]}",
      "garbage", "still garbage"});
  RemoteBackend b(remote_config(dir), t);
  auto p = b.propose_children("Solve x = 1", {}, 3, {});
  CHECK(p.erroneous_steps.size() == 2);
  CHECK(t->bodies[1]["messages"].size() == 4);
  try {
    b.rollout("Solve x = 1", {}, 5, {});
    FAIL("expected a failure");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::kRolloutDivergence);
  }
}

TEST_CASE("remote backend special replies") {
  TempDir dir;
  auto t = std::make_shared<QueueTransport>(std::deque<std::string>{
      "```json\n{\"done\": true}\n```", "", "no rating", "still none", "{\"answer\": \"x > -3\"}",
      "{\"answer\": \"x > -3\"}"});
  RemoteBackend b(remote_config(dir), t);
  try {
    b.propose_children("Solve x = 1", {}, 3, {});
    FAIL("expected a failure");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::kNoApplicableStep);
  }
  ReasoningStep s{"t", "x = 4", std::nullopt, std::nullopt};
  CHECK(b.conclude("Solve x = 1", {s}, {}) == "x = 4");
  ReasoningTrajectory tr;
  tr.final_answer = "1";
  CHECK(b.score_plausibility("q", tr, "2", "1", {}) == 0.5);
  try {
    b.predict_distractor("Solve -2x < 6", "x > -3", {}, {});
    FAIL("expected a failure");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::kDegenerateOutput);
  }
}

TEST_CASE("remote backend retries retryable errors only") {
  TempDir dir;
  auto flaky = std::make_shared<QueueTransport>(std::deque<std::string>{"!r", "!r", "[\"a\"]"});
  RemoteBackend b(remote_config(dir), flaky);
  CHECK(b.extract_concepts(record("r", "q", "1", "2"), {}) == std::vector<Concept>{Concept("a")});
  CHECK(b.requests_sent() == 3);

  TempDir dir2;
  auto fatal = std::make_shared<QueueTransport>(std::deque<std::string>{"!f", "[\"a\"]"});
  RemoteBackend c(remote_config(dir2), fatal);
  try {
    c.extract_concepts(record("r", "q", "1", "2"), {});
    FAIL("expected a failure");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::kRemoteUnavailable);
  }
  CHECK(c.requests_sent() == 1);

  TempDir dir3;
  auto down = std::make_shared<QueueTransport>(std::deque<std::string>{"!r", "!r", "!r", "[\"a\"]"});
  RemoteBackend d(remote_config(dir3), down);
  CHECK_THROWS_AS(d.extract_concepts(record("r", "q", "1", "2"), {}), BackendError);
  CHECK(d.requests_sent() == 3);  // 1 + max_retries
}

TEST_CASE("config checks") {
  BackendConfig c;
  CHECK(c.check().empty());
  c.kind = "remote";
  CHECK_FALSE(c.check().empty());
  c.endpoint = "http://x";
  c.model_name = "m";
  CHECK(c.check().empty());
  c.kind = "other";
  CHECK_THROWS_AS(make_backend(c), std::invalid_argument);
  CHECK(make_backend(BackendConfig{})->kind() == "scripted");
  CHECK_THROWS_AS(HttpChatTransport("not a url", "", 1), std::invalid_argument);
}

TEST_CASE("http transport against a local server") {
  httplib::Server server;
  std::string seen_path, seen_auth;
  int calls = 0;
  server.Post(R"(/v1/chat/completions)", [&](const httplib::Request& req, httplib::Response& res) {
    seen_path = req.path;
    seen_auth = req.get_header_value("Authorization");
    if (++calls == 1) {
      res.status = 503;
      return;
    }
    Json body = Json::parse(req.body);
    Json reply{{"choices", {{{"message", {{"content", "[\"echo " + body["model"].get<std::string>() + "\"]"}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  server.Post(R"(/bad/chat/completions)", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir dir;
  BackendConfig c = remote_config(dir);
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  c.request_timeout_s = 5;
  auto transport = std::make_shared<HttpChatTransport>(c.endpoint, "secret", c.request_timeout_s);
  RemoteBackend b(c, transport);
  CHECK(b.extract_concepts(record("r", "q", "1", "2"), {}) == std::vector<Concept>{Concept("echo test-model")});
  CHECK(calls == 2);
  CHECK(seen_path == "/v1/chat/completions");
  CHECK(seen_auth == "Bearer secret");

  HttpChatTransport bad("http://127.0.0.1:" + std::to_string(port) + "/bad", "", 5);
  try {
    bad.post("{}");
    FAIL("expected a failure");
  } catch (const TransportError& e) {
    CHECK_FALSE(e.retryable());
  }
  server.stop();
  th.join();

  HttpChatTransport closed("http://127.0.0.1:" + std::to_string(port), "", 1);
  try {
    closed.post("{}");
    FAIL("expected a failure");
  } catch (const TransportError& e) {
    CHECK(e.retryable());
  }
}
